#ifndef BOUNDPOP_ESTIMATOR_HPP
#define BOUNDPOP_ESTIMATOR_HPP

#include "boundpop/histogram.hpp"
#include "boundpop/moments.hpp"
#include "boundpop/quadrature.hpp"

#include <span>

namespace boundpop {

struct EstimatorOptions {
  int max_order = max_order_cap;
  // Smallest admissible quadrature point; a point near zero sends the
  // estimate to infinity, so such rules trigger order reduction.
  double point_floor = 1e-8;
};

struct RichnessEstimate {
  double n0_hat = 0.0; // unobserved classes
  double s_hat = 0.0;  // D + n0_hat
  double f0_hat = 0.0; // n0_hat / s_hat
  int order_used = 1;
  bool fallback = true; // order 1, i.e. Chao's bound
  QuadratureRule rule;
};

// Lower-bound estimate of n_0 = n_1 sum_i w_i / x_i from the Gaussian
// quadrature rule of the estimated moments. Starts at the order chosen by
// select_order and steps down until a rule validates; order 1 always
// succeeds. Throws insufficient_rare_classes when n_1 or n_2 is zero.
RichnessEstimate estimate(const CountHistogram &h,
                          const EstimatorOptions &opts = {});

// The same pipeline on real-valued frequencies (freq[j-1] = n_j) with D
// given separately.
RichnessEstimate estimate(std::span<const double> freq, double distinct,
                          const EstimatorOptions &opts = {});

// Chao's lower bound n_1^2 / (2 n_2), computed as the order-1 rule so it
// agrees bit for bit with estimate(h, {.max_order = 1}).
RichnessEstimate chao_estimate(const CountHistogram &h);

} // namespace boundpop

#endif
