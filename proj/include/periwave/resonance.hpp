#pragma once

#include <optional>
#include <vector>

#include "periwave/kernels.hpp"
#include "periwave/problem.hpp"

namespace periwave {

// Numerical verdicts for the non-resonance conditions. The "for all t"
// quantifier is tested on the t-grid plus midpoints (2*nt samples).
struct ResonanceReport {
  std::vector<double> t_samples;
  std::vector<double> small_integral;       // per sample
  std::vector<double> small_plus_integral;  // per sample
  bool small_pass = false;
  bool small_plus_pass = false;
  double small_min_abs = 0.0;
  double small_plus_min_abs = 0.0;

  std::vector<double> q;   // q_l, l = 0..k
  std::vector<double> qp;  // q_l'
  bool small1 = false, small11 = false, small111 = false, small1111 = false;
  double margin_small = 0.0;       // min |integral| - threshold
  double margin_small1 = 0.0;      // (1 - eps) - max product, over all l
  double margin_small11 = 0.0;     // min product - (1 + eps)
  double margin_small111 = 0.0;
  double margin_small1111 = 0.0;

  std::optional<double> stationary_value;
  bool near_resonance_warning = false;  // |q_0 - 1| < 1e-3

  std::string sampling_caveat;
};

// Boundary-to-boundary products Lambda_l(t) = c_1^l(0,1,t) c_2^l(1,0,tau_1(0,1,t))
// and Pi_l(t) = c_2^l(1,0,t) c_1^l(0,1,tau_2(1,0,t)), with the two raw
// integrals so any level l is a linear combination in the exponent.
struct BoundaryProducts {
  std::vector<double> t_samples;
  std::vector<double> lambda_b, lambda_a;  // exponent parts of Lambda
  std::vector<double> pi_b, pi_a;          // exponent parts of Pi

  double lambda(int l, int idx) const {
    return std::exp(lambda_b[idx] - l * lambda_a[idx]);
  }
  double pi(int l, int idx) const { return std::exp(pi_b[idx] - l * pi_a[idx]); }
};

BoundaryProducts boundary_products(const ProblemSpec& spec, const GridSpec& grid,
                                   int samples_per_period, double eps = 0.0);

// min_t |integral| and verdicts for (small) and (small+).
void check_small(const ProblemSpec& spec, const GridSpec& grid, ResonanceReport& rep,
                 double eps = 0.0);

// (q_l, q_l') for one level l.
std::pair<double, double> compute_ql(const ProblemSpec& spec, const GridSpec& grid,
                                     int l, double eps = 0.0);

// Verdicts for the four uniform level-l conditions, l = 0..k.
void check_small_l(const ProblemSpec& spec, const GridSpec& grid, int k,
                   ResonanceReport& rep, double eps = 0.0);

// Stationary-a simplification int_0^1 (a*a1 + a*a')/a^2 deta by
// composite Simpson. Throws std::invalid_argument when a depends on t.
double stationary_simplification(const ProblemSpec& spec, const GridSpec& grid,
                                 double eps = 0.0);

// Full report: check_small + q_l table + level verdicts + stationary value
// when a is time-independent.
ResonanceReport analyze_resonance(const ProblemSpec& spec, const GridSpec& grid,
                                  double eps = 0.0);

}  // namespace periwave
