#ifndef BOUNDPOP_SIMULATE_HPP
#define BOUNDPOP_SIMULATE_HPP

#include "boundpop/estimator.hpp"
#include "boundpop/histogram.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace boundpop {

// Discrete abundance distribution: a class has Poisson rate lambdas[k] with
// probability weights[k].
struct MixtureSpec {
  std::vector<double> lambdas;
  std::vector<double> weights;
  std::uint64_t classes = 0;

  void validate() const;
};

// lambda_i = c i^{-alpha}, i = 1..classes, with sum_i lambda_i = total.
struct PowerLawSpec {
  std::uint64_t classes = 0;
  double alpha = 1.0;
  double total = 0.0;

  void validate() const;
};

struct SampleResult {
  CountHistogram histogram;
  std::uint64_t classes = 0; // true S
  std::uint64_t n0_true = 0; // classes with a zero count
};

// Two-component cases: lambda = {1, 0.1}, w = {0.9,0.1} | {0.5,0.5} | {0.1,0.9}.
MixtureSpec two_component_case(int which, std::uint64_t classes);
// Three-component cases: lambda = {10, 1, 0.1},
// w = {0.1,0.3,0.6} | {0.3,0.1,0.6} | {0.1,0.6,0.3}.
MixtureSpec three_component_case(int which, std::uint64_t classes);

SampleResult sample_mixture(const MixtureSpec &spec, std::uint64_t seed);

// E n_j = S sum_k w_k e^{-lambda_k} lambda_k^j / j!, j = 1..j_max.
std::vector<double> expected_frequencies(const MixtureSpec &spec, int j_max);
// E n_0 = S sum_k w_k e^{-lambda_k}.
double expected_unobserved(const MixtureSpec &spec);

std::vector<double> power_law_rates(const PowerLawSpec &spec);
SampleResult sample_power_law(const PowerLawSpec &spec, std::uint64_t seed);

struct BetaParams {
  double a = 1.0;
  double b = 1.0;
};

// Log-normal-Poisson single-cell expression with logistic dropout.
// Defaults are a 1000 x 10000 experiment; the dropout baseline is drawn
// from one of two Beta batches.
struct ScrnaSpec {
  std::size_t cells = 1000;
  std::size_t genes = 10000;
  double subpop2_frac = 0.2;
  double de_frac = 0.2;   // genes up-regulated in subpopulation 2
  double de_fold = 5.0;
  double depth = 0.25;
  double theta_logsd = 2.0; // per-cell size factor
  double noise_logsd = 1.0 / 3.0;
  double gamma_shape = 0.25; // per-gene base rate, shape/rate
  double gamma_rate = 0.1;
  std::array<BetaParams, 2> baselines{{{2.0, 8.0}, {2.0, 38.0}}};
  double dropout_slope = 0.5;
  std::optional<double> fixed_baseline; // replaces the Beta draws
  bool dropout = true;

  void validate() const;
};

struct ScrnaSample {
  std::size_t cells = 0;
  std::size_t genes = 0;
  std::vector<std::uint32_t> counts; // cells x genes, row-major
  std::vector<double> true_dropout;  // genes expressed but zeroed / genes
  std::vector<double> observed_dropout; // genes with zero count / genes
  std::vector<double> size_factor;   // theta per cell
  std::vector<double> base_rate;     // lambda_0 per gene
  std::vector<std::uint8_t> subpop;  // 0 or 1 per cell
  std::vector<std::uint8_t> batch;   // 0 or 1 per cell
  std::vector<std::uint8_t> de_gene; // 1 if up-regulated in subpop 1
  double de_fold = 1.0;
  double mean_expression = 0.0;      // grand mean of theta * lambda

  std::span<const std::uint32_t> cell(std::size_t c) const {
    return {counts.data() + c * genes, genes};
  }
  // theta_c * lambda_{g,0} * phi_{g,c}
  double expression(std::size_t c, std::size_t g) const;
};

ScrnaSample sample_scrna(const ScrnaSpec &spec, std::uint64_t seed,
                         unsigned threads = 1);

// (genes - S_hat) / genes clamped at 0, or the observed rate when the
// estimate exceeds the known gene count.
double corrected_dropout_rate(double s_hat, double observed_rate,
                              std::size_t genes);

using RichnessEstimator = std::function<RichnessEstimate(const CountHistogram &)>;

// Dropout rate of one cell corrected for genes missed through sampling
// depth. Falls back to the observed rate (genes - D) / genes when the
// estimator throws.
double dropout_correction(const CountHistogram &cell, std::size_t genes,
                          const RichnessEstimator &estimator);
// From raw per-gene counts; a cell with no counts has observed rate 1.
double dropout_correction(std::span<const std::uint32_t> cell_counts,
                          const RichnessEstimator &estimator);

} // namespace boundpop

#endif
