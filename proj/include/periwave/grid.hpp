#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace periwave {

// Uniform tensor grid: nx points on [0,1] with both endpoints, nt points on
// [0,T) understood periodically.
struct GridSpec {
  int nx = 65;
  int nt = 64;

  void validate() const {
    if (nx < 9) throw std::invalid_argument("GridSpec: nx must be >= 9");
    if (nt < 8) throw std::invalid_argument("GridSpec: nt must be >= 8");
    if (nt % 2 != 0) throw std::invalid_argument("GridSpec: nt must be even");
  }
};

using ArrayRM = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// 4-point periodic Lagrange interpolation on a uniform periodic grid.
// `row` points at nt contiguous samples over one period of length T.
inline double periodic_cubic_interp(const double* row, int nt, double T, double tau) {
  const double ht = T / nt;
  double s = tau / ht;
  s -= std::floor(s / nt) * nt;  // reduce to [0, nt)
  int k = static_cast<int>(s);
  if (k >= nt) k -= nt;
  const double th = s - k;
  const int km1 = k == 0 ? nt - 1 : k - 1;
  const int kp1 = k + 1 == nt ? 0 : k + 1;
  const int kp2 = kp1 + 1 == nt ? 0 : kp1 + 1;
  // Lagrange basis on nodes {-1, 0, 1, 2} evaluated at th in [0,1].
  const double wm1 = -th * (th - 1.0) * (th - 2.0) / 6.0;
  const double w0 = (th + 1.0) * (th - 1.0) * (th - 2.0) / 2.0;
  const double w1 = -(th + 1.0) * th * (th - 2.0) / 2.0;
  const double w2 = (th + 1.0) * th * (th - 1.0) / 6.0;
  return wm1 * row[km1] + w0 * row[k] + w1 * row[kp1] + w2 * row[kp2];
}

// T-periodic scalar function sampled on a GridSpec; t-index arithmetic is
// modulo nt, rows (fixed x) are contiguous.
class GridFunction {
public:
  GridFunction() = default;
  GridFunction(GridSpec g, double T)
      : spec_(g), T_(T), v_(ArrayRM::Zero(g.nx, g.nt)) {}

  int nx() const { return spec_.nx; }
  int nt() const { return spec_.nt; }
  double period() const { return T_; }
  const GridSpec& spec() const { return spec_; }

  double hx() const { return 1.0 / (spec_.nx - 1); }
  double ht() const { return T_ / spec_.nt; }
  double x(int i) const { return i * hx(); }
  double t(int n) const { return n * ht(); }

  double& operator()(int i, int n) { return v_(i, wrap(n)); }
  double operator()(int i, int n) const { return v_(i, wrap(n)); }

  ArrayRM& values() { return v_; }
  const ArrayRM& values() const { return v_; }

  double sup_norm() const { return v_.size() ? v_.abs().maxCoeff() : 0.0; }

  // Periodic cubic interpolation in t along row i; tau may be unwrapped.
  double interp_t(int i, double tau) const {
    return periodic_cubic_interp(v_.data() + static_cast<std::ptrdiff_t>(i) * spec_.nt,
                                 spec_.nt, T_, tau);
  }

private:
  int wrap(int n) const {
    n %= spec_.nt;
    return n < 0 ? n + spec_.nt : n;
  }

  GridSpec spec_;
  double T_ = 1.0;
  ArrayRM v_;
};

double sup_diff(const GridFunction& a, const GridFunction& b);

// Pair-valued grid function (the Riemann invariants u = (u1, u2)).
struct GridPair {
  GridFunction u1, u2;

  GridPair() = default;
  GridPair(GridSpec g, double T) : u1(g, T), u2(g, T) {}

  double sup_norm() const { return std::max(u1.sup_norm(), u2.sup_norm()); }
};

double sup_diff(const GridPair& a, const GridPair& b);

GridPair operator+(const GridPair& a, const GridPair& b);
GridPair operator-(const GridPair& a, const GridPair& b);
GridPair operator*(double s, const GridPair& a);

// Periodic finite differences in t (4th order central).
GridFunction d_dt(const GridFunction& w);
GridFunction d2_dt(const GridFunction& w);

// Finite differences in x: 4th-order central in the interior, 4th-order
// one-sided stencils at and next to the endpoints.
GridFunction d_dx(const GridFunction& w);
GridFunction d2_dx(const GridFunction& w);

// 4th-order central derivative of a 1D periodic sample vector with step h.
std::vector<double> d_dt_periodic(const std::vector<double>& v, double h);

}  // namespace periwave
