#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace periwave::quadrature {

// Trapezoid rule over one full period of a T-periodic integrand sampled at
// n uniform nodes; spectrally accurate for smooth periodic integrands.
inline double periodic_trapezoid(std::span<const double> samples, double T) {
  double s = 0.0;
  for (double v : samples) s += v;
  return s * T / static_cast<double>(samples.size());
}

template <class F>
double periodic_trapezoid(F&& f, double T, int n) {
  double s = 0.0;
  const double h = T / n;
  for (int k = 0; k < n; ++k) s += f(k * h);
  return s * h;
}

// Cumulative trapezoid over uniformly spaced samples; out[0] = 0.
inline std::vector<double> cumulative_trapezoid(std::span<const double> v, double h) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t k = 1; k < v.size(); ++k)
    out[k] = out[k - 1] + 0.5 * h * (v[k - 1] + v[k]);
  return out;
}

template <class F>
double simpson(F&& f, double a, double b, int subintervals) {
  if (subintervals < 2 || subintervals % 2 != 0)
    throw std::invalid_argument("simpson: subinterval count must be even and >= 2");
  const double h = (b - a) / subintervals;
  double s = f(a) + f(b);
  for (int k = 1; k < subintervals; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace periwave::quadrature
