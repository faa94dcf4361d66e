#include "periwave/grid.hpp"

#include <vector>

namespace periwave {

double sup_diff(const GridFunction& a, const GridFunction& b) {
  return (a.values() - b.values()).abs().maxCoeff();
}

double sup_diff(const GridPair& a, const GridPair& b) {
  return std::max(sup_diff(a.u1, b.u1), sup_diff(a.u2, b.u2));
}

GridPair operator+(const GridPair& a, const GridPair& b) {
  GridPair r = a;
  r.u1.values() += b.u1.values();
  r.u2.values() += b.u2.values();
  return r;
}

GridPair operator-(const GridPair& a, const GridPair& b) {
  GridPair r = a;
  r.u1.values() -= b.u1.values();
  r.u2.values() -= b.u2.values();
  return r;
}

GridPair operator*(double s, const GridPair& a) {
  GridPair r = a;
  r.u1.values() *= s;
  r.u2.values() *= s;
  return r;
}

GridFunction d_dt(const GridFunction& w) {
  GridFunction out(w.spec(), w.period());
  const int nt = w.nt();
  const double h = w.ht();
  for (int i = 0; i < w.nx(); ++i)
    for (int n = 0; n < nt; ++n)
      out(i, n) = (-w(i, n + 2) + 8.0 * w(i, n + 1) - 8.0 * w(i, n - 1) + w(i, n - 2)) /
                  (12.0 * h);
  return out;
}

GridFunction d2_dt(const GridFunction& w) {
  GridFunction out(w.spec(), w.period());
  const int nt = w.nt();
  const double h2 = w.ht() * w.ht();
  for (int i = 0; i < w.nx(); ++i)
    for (int n = 0; n < nt; ++n)
      out(i, n) = (-w(i, n + 2) + 16.0 * w(i, n + 1) - 30.0 * w(i, n) +
                   16.0 * w(i, n - 1) - w(i, n - 2)) /
                  (12.0 * h2);
  return out;
}

GridFunction d_dx(const GridFunction& w) {
  GridFunction out(w.spec(), w.period());
  const int nx = w.nx();
  const double h = w.hx();
  for (int n = 0; n < w.nt(); ++n) {
    out(0, n) = (-25.0 * w(0, n) + 48.0 * w(1, n) - 36.0 * w(2, n) + 16.0 * w(3, n) -
                 3.0 * w(4, n)) /
                (12.0 * h);
    out(1, n) = (-3.0 * w(0, n) - 10.0 * w(1, n) + 18.0 * w(2, n) - 6.0 * w(3, n) +
                 w(4, n)) /
                (12.0 * h);
    for (int i = 2; i < nx - 2; ++i)
      out(i, n) =
          (-w(i + 2, n) + 8.0 * w(i + 1, n) - 8.0 * w(i - 1, n) + w(i - 2, n)) /
          (12.0 * h);
    out(nx - 2, n) = (3.0 * w(nx - 1, n) + 10.0 * w(nx - 2, n) - 18.0 * w(nx - 3, n) +
                      6.0 * w(nx - 4, n) - w(nx - 5, n)) /
                     (12.0 * h);
    out(nx - 1, n) = (25.0 * w(nx - 1, n) - 48.0 * w(nx - 2, n) + 36.0 * w(nx - 3, n) -
                      16.0 * w(nx - 4, n) + 3.0 * w(nx - 5, n)) /
                     (12.0 * h);
  }
  return out;
}

GridFunction d2_dx(const GridFunction& w) {
  GridFunction out(w.spec(), w.period());
  const int nx = w.nx();
  const double h2 = w.hx() * w.hx();
  for (int n = 0; n < w.nt(); ++n) {
    out(0, n) = (45.0 * w(0, n) - 154.0 * w(1, n) + 214.0 * w(2, n) - 156.0 * w(3, n) +
                 61.0 * w(4, n) - 10.0 * w(5, n)) /
                (12.0 * h2);
    out(1, n) = (10.0 * w(0, n) - 15.0 * w(1, n) - 4.0 * w(2, n) + 14.0 * w(3, n) -
                 6.0 * w(4, n) + w(5, n)) /
                (12.0 * h2);
    for (int i = 2; i < nx - 2; ++i)
      out(i, n) = (-w(i + 2, n) + 16.0 * w(i + 1, n) - 30.0 * w(i, n) +
                   16.0 * w(i - 1, n) - w(i - 2, n)) /
                  (12.0 * h2);
    out(nx - 2, n) = (10.0 * w(nx - 1, n) - 15.0 * w(nx - 2, n) - 4.0 * w(nx - 3, n) +
                      14.0 * w(nx - 4, n) - 6.0 * w(nx - 5, n) + w(nx - 6, n)) /
                     (12.0 * h2);
    out(nx - 1, n) =
        (45.0 * w(nx - 1, n) - 154.0 * w(nx - 2, n) + 214.0 * w(nx - 3, n) -
         156.0 * w(nx - 4, n) + 61.0 * w(nx - 5, n) - 10.0 * w(nx - 6, n)) /
        (12.0 * h2);
  }
  return out;
}

std::vector<double> d_dt_periodic(const std::vector<double>& v, double h) {
  const int n = static_cast<int>(v.size());
  std::vector<double> out(v.size());
  auto at = [&](int k) { return v[((k % n) + n) % n]; };
  for (int k = 0; k < n; ++k)
    out[k] = (-at(k + 2) + 8.0 * at(k + 1) - 8.0 * at(k - 1) + at(k - 2)) / (12.0 * h);
  return out;
}

}  // namespace periwave
