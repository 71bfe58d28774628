#include "boundpop/estimator.hpp"

#include "boundpop/error.hpp"

#include <algorithm>

namespace boundpop {

namespace {

RichnessEstimate from_rule(QuadratureRule rule, double n1, double distinct,
                           int order) {
  double integral = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    integral += rule.weights[i] / rule.points[i];
  RichnessEstimate est;
  est.n0_hat = n1 * integral;
  est.s_hat = distinct + est.n0_hat;
  est.f0_hat = est.s_hat > 0.0 ? est.n0_hat / est.s_hat : 0.0;
  est.order_used = order;
  est.fallback = order == 1;
  est.rule = std::move(rule);
  return est;
}

void require_rare_classes(double n1, double n2) {
  if (!(n1 > 0.0) || !(n2 > 0.0))
    throw Error(Errc::insufficient_rare_classes,
                "insufficient rare-class information: need n_1 > 0 and n_2 > 0");
}

// Largest P whose moments nu_0..nu_{2P-1} are all supported by data, i.e.
// n_{2P} is present. Higher orders cannot pass the shifted Hankel check.
int data_order_limit(std::span<const double> freq) {
  int p = 1;
  for (int candidate = 2; candidate <= max_order_cap; ++candidate) {
    const std::size_t j = 2 * static_cast<std::size_t>(candidate);
    if (j <= freq.size() && freq[j - 1] > 0.0)
      p = candidate;
  }
  return p;
}

} // namespace

RichnessEstimate estimate(std::span<const double> freq, double distinct,
                          const EstimatorOptions &opts) {
  if (opts.max_order < 1)
    throw Error(Errc::invalid_argument, "max order must be >= 1");
  const double n1 = freq.size() > 0 ? freq[0] : 0.0;
  const double n2 = freq.size() > 1 ? freq[1] : 0.0;
  require_rare_classes(n1, n2);

  const int limit = std::min(opts.max_order, data_order_limit(freq));
  const MomentSequence nu = estimate_moments(freq, 2 * limit - 1);

  for (int p = select_order(nu, limit); p > 1; --p) {
    try {
      QuadratureRule rule = golub_welsch(chebyshev_recurrence(nu, p));
      if (validate_rule(rule, opts.point_floor))
        return from_rule(std::move(rule), n1, distinct, p);
    } catch (const Error &e) {
      if (e.code() != Errc::recurrence_breakdown &&
          e.code() != Errc::invalid_recurrence &&
          e.code() != Errc::eigensolve_failed)
        throw;
    }
  }
  // x_1 = nu_1 = 2 n_2 / n_1 > 0 and w_1 = 1: Chao's bound.
  return from_rule(golub_welsch(chebyshev_recurrence(nu, 1)), n1, distinct, 1);
}

RichnessEstimate estimate(const CountHistogram &h, const EstimatorOptions &opts) {
  const auto jmax = std::min<std::uint64_t>(h.max_multiplicity(), 2 * max_order_cap);
  return estimate(h.dense_frequencies(std::max<std::uint64_t>(jmax, 2)),
                  static_cast<double>(h.distinct()), opts);
}

RichnessEstimate chao_estimate(const CountHistogram &h) {
  return estimate(h, EstimatorOptions{.max_order = 1, .point_floor = 0.0});
}

} // namespace boundpop
