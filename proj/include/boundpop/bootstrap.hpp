#ifndef BOUNDPOP_BOOTSTRAP_HPP
#define BOUNDPOP_BOOTSTRAP_HPP

#include "boundpop/estimator.hpp"
#include "boundpop/histogram.hpp"
#include "boundpop/random.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace boundpop {

// Multinomial(D; n_j / D) redraw of the observed frequencies.
CountHistogram resample(const CountHistogram &h, Rng &rng);
CountHistogram resample(const CountHistogram &h, std::uint64_t seed);

struct BootstrapOptions {
  int replicates = 1000;
  EstimatorOptions estimator;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  unsigned threads = 1;
};

struct BootstrapSummary {
  double bagged_n0 = 0.0; // median of successful replicate n0_hat
  double bagged_s_hat = 0.0;
  // Law of total variance: within = median of S f0 (1 - f0) over replicates,
  // estimating E(Var(n0_hat | D)); between = sample variance of replicate
  // n0_hat, estimating Var(E(n0_hat | D)).
  double variance = 0.0;
  double variance_within = 0.0;
  double variance_between = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  std::size_t replicates = 0;
  std::size_t n_failed = 0;
  std::uint64_t seed = 0;
  // n0_hat per replicate in replicate order; NaN where estimation failed.
  std::vector<double> replicate_n0;
};

// Throws bootstrap_exhausted when no replicate yields an estimate.
BootstrapSummary bagged_estimate(const CountHistogram &h,
                                 const BootstrapOptions &opts);

// Aggregates per-replicate n0_hat and S f0 (1 - f0) values; NaN marks a
// failed replicate.
BootstrapSummary summarize_replicates(std::vector<double> n0,
                                      std::span<const double> binomial_var,
                                      std::uint64_t distinct, double ci_level);

// Type-7 (linear interpolation) sample quantile of unsorted data.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);
double sample_variance(std::span<const double> values);

} // namespace boundpop

#endif
