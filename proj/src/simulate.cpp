#include "boundpop/simulate.hpp"

#include "boundpop/error.hpp"
#include "boundpop/parallel.hpp"
#include "boundpop/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace boundpop {

namespace {

[[noreturn]] void bad_spec(const std::string &why) {
  throw Error(Errc::invalid_argument, why);
}

SampleResult tally_sample(const std::map<std::uint64_t, std::uint64_t> &freq,
                          std::uint64_t classes) {
  std::vector<CountHistogram::Entry> entries;
  entries.reserve(freq.size());
  std::uint64_t observed = 0;
  for (const auto &[j, n] : freq) {
    entries.push_back({j, n});
    observed += n;
  }
  return {CountHistogram(std::move(entries)), classes, classes - observed};
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng &rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

double draw_beta(const BetaParams &p, Rng &rng) {
  std::gamma_distribution<double> ga(p.a, 1.0), gb(p.b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

std::uint32_t draw_poisson(double mean, Rng &rng) {
  if (!(mean > 0.0))
    return 0;
  std::poisson_distribution<std::uint32_t> pois(mean);
  return pois(rng);
}

} // namespace

void MixtureSpec::validate() const {
  if (lambdas.empty() || lambdas.size() != weights.size())
    bad_spec("mixture needs matching non-empty lambdas and weights");
  double total = 0.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] > 0.0) || !std::isfinite(lambdas[k]))
      bad_spec("mixture rates must be positive");
    if (!(weights[k] > 0.0))
      bad_spec("mixture weights must be positive");
    for (std::size_t l = 0; l < k; ++l)
      if (lambdas[l] == lambdas[k])
        bad_spec("mixture rates must be distinct");
    total += weights[k];
  }
  if (std::fabs(total - 1.0) > 1e-12)
    bad_spec("mixture weights must sum to 1");
}

void PowerLawSpec::validate() const {
  if (!(alpha >= 0.0))
    bad_spec("power-law exponent must be >= 0");
  if (!(total > 0.0))
    bad_spec("power-law total must be positive");
}

void ScrnaSpec::validate() const {
  const auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (cells == 0 || genes == 0)
    bad_spec("scRNA simulation needs cells and genes");
  if (!in_unit(subpop2_frac) || !in_unit(de_frac))
    bad_spec("scRNA fractions must lie in (0,1)");
  if (!(de_fold > 0.0 && depth > 0.0 && theta_logsd >= 0.0 &&
        noise_logsd >= 0.0 && gamma_shape > 0.0 && gamma_rate > 0.0 &&
        dropout_slope >= 0.0))
    bad_spec("scRNA parameters must be positive");
  for (const auto &b : baselines)
    if (!(b.a > 0.0 && b.b > 0.0))
      bad_spec("Beta parameters must be positive");
  if (fixed_baseline && !in_unit(*fixed_baseline))
    bad_spec("fixed dropout baseline must lie in (0,1)");
}

MixtureSpec two_component_case(int which, std::uint64_t classes) {
  static const std::array<std::vector<double>, 3> w{
      {{0.9, 0.1}, {0.5, 0.5}, {0.1, 0.9}}};
  if (which < 1 || which > 3)
    bad_spec("two-component case must be 1, 2 or 3");
  return {{1.0, 0.1}, w[which - 1], classes};
}

MixtureSpec three_component_case(int which, std::uint64_t classes) {
  static const std::array<std::vector<double>, 3> w{
      {{0.1, 0.3, 0.6}, {0.3, 0.1, 0.6}, {0.1, 0.6, 0.3}}};
  if (which < 1 || which > 3)
    bad_spec("three-component case must be 1, 2 or 3");
  return {{10.0, 1.0, 0.1}, w[which - 1], classes};
}

SampleResult sample_mixture(const MixtureSpec &spec, std::uint64_t seed) {
  spec.validate();
  Rng rng = stream_rng(seed, 0);
  std::discrete_distribution<std::size_t> component(spec.weights.begin(),
                                                    spec.weights.end());
  std::vector<std::poisson_distribution<std::uint64_t>> pois;
  for (const double lambda : spec.lambdas)
    pois.emplace_back(lambda);
  std::map<std::uint64_t, std::uint64_t> freq;
  for (std::uint64_t i = 0; i < spec.classes; ++i) {
    const std::uint64_t y = pois[component(rng)](rng);
    if (y > 0)
      ++freq[y];
  }
  return tally_sample(freq, spec.classes);
}

std::vector<double> expected_frequencies(const MixtureSpec &spec, int j_max) {
  spec.validate();
  if (j_max < 1)
    bad_spec("j_max must be >= 1");
  std::vector<double> out(j_max, 0.0);
  for (std::size_t k = 0; k < spec.lambdas.size(); ++k) {
    const double lambda = spec.lambdas[k];
    double pmf = std::exp(-lambda);
    for (int j = 1; j <= j_max; ++j) {
      pmf *= lambda / j;
      out[j - 1] += spec.weights[k] * pmf;
    }
  }
  for (double &v : out)
    v *= static_cast<double>(spec.classes);
  return out;
}

double expected_unobserved(const MixtureSpec &spec) {
  spec.validate();
  double f0 = 0.0;
  for (std::size_t k = 0; k < spec.lambdas.size(); ++k)
    f0 += spec.weights[k] * std::exp(-spec.lambdas[k]);
  return static_cast<double>(spec.classes) * f0;
}

std::vector<double> power_law_rates(const PowerLawSpec &spec) {
  spec.validate();
  std::vector<double> rates(spec.classes);
  long double norm = 0.0L;
  for (std::uint64_t i = 0; i < spec.classes; ++i) {
    rates[i] = std::pow(static_cast<double>(i + 1), -spec.alpha);
    norm += rates[i];
  }
  const long double c = static_cast<long double>(spec.total) / norm;
  for (double &r : rates)
    r = static_cast<double>(c * r);
  return rates;
}

SampleResult sample_power_law(const PowerLawSpec &spec, std::uint64_t seed) {
  const std::vector<double> rates = power_law_rates(spec);
  Rng rng = stream_rng(seed, 0);
  std::map<std::uint64_t, std::uint64_t> freq;
  for (const double lambda : rates) {
    std::poisson_distribution<std::uint64_t> pois(lambda);
    const std::uint64_t y = pois(rng);
    if (y > 0)
      ++freq[y];
  }
  return tally_sample(freq, spec.classes);
}

double ScrnaSample::expression(std::size_t c, std::size_t g) const {
  const double phi = (subpop[c] == 1 && de_gene[g]) ? de_fold : 1.0;
  return size_factor[c] * base_rate[g] * phi;
}

ScrnaSample sample_scrna(const ScrnaSpec &spec, std::uint64_t seed,
                         unsigned threads) {
  spec.validate();
  const std::size_t C = spec.cells;
  const std::size_t G = spec.genes;
  Rng rng = stream_rng(seed, 0);

  ScrnaSample out;
  out.cells = C;
  out.genes = G;
  out.subpop.assign(C, 0);
  out.batch.assign(C, 0);
  out.de_gene.assign(G, 0);

  const auto n_sub2 = static_cast<std::size_t>(std::llround(spec.subpop2_frac * C));
  const auto by_condition = shuffled_indices(C, rng);
  for (std::size_t k = 0; k < n_sub2; ++k)
    out.subpop[by_condition[k]] = 1;
  // Batches by parity in an independent shuffle, so unrelated to condition.
  const auto by_batch = shuffled_indices(C, rng);
  for (std::size_t k = 0; k < C; ++k)
    out.batch[by_batch[k]] = static_cast<std::uint8_t>(k % 2);
  const auto n_de = static_cast<std::size_t>(std::llround(spec.de_frac * G));
  const auto genes_shuffled = shuffled_indices(G, rng);
  for (std::size_t k = 0; k < n_de; ++k)
    out.de_gene[genes_shuffled[k]] = 1;

  std::lognormal_distribution<double> theta(0.0, spec.theta_logsd);
  out.size_factor.resize(C);
  for (double &t : out.size_factor)
    t = theta(rng);
  std::gamma_distribution<double> base(spec.gamma_shape, 1.0 / spec.gamma_rate);
  out.base_rate.resize(G);
  for (double &l : out.base_rate)
    l = base(rng);

  out.de_fold = spec.de_fold;
  // Grand mean of theta_c lambda_{g,c} over every cell and gene.
  double base_sum = 0.0, de_sum = 0.0;
  for (std::size_t g = 0; g < G; ++g) {
    base_sum += out.base_rate[g];
    if (out.de_gene[g])
      de_sum += out.base_rate[g];
  }
  long double total = 0.0L;
  for (std::size_t c = 0; c < C; ++c) {
    const double lambda_sum =
        base_sum + (out.subpop[c] == 1 ? (spec.de_fold - 1.0) * de_sum : 0.0);
    total += static_cast<long double>(out.size_factor[c]) * lambda_sum;
  }
  out.mean_expression = static_cast<double>(total / static_cast<long double>(C * G));

  out.counts.assign(C * G, 0);
  out.true_dropout.assign(C, 0.0);
  out.observed_dropout.assign(C, 0.0);
  parallel_for(C, threads, [&](std::size_t c) {
    Rng cell_rng = stream_rng(seed, c + 1);
    std::lognormal_distribution<double> noise(0.0, spec.noise_logsd);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::size_t dropped = 0, zeros = 0;
    for (std::size_t g = 0; g < G; ++g) {
      const double expr = out.expression(c, g);
      std::uint32_t y = draw_poisson(spec.depth * expr * noise(cell_rng), cell_rng);
      if (spec.dropout) {
        const double q = spec.fixed_baseline
                             ? *spec.fixed_baseline
                             : draw_beta(spec.baselines[out.batch[c]], cell_rng);
        const double beta0 = std::log(q / (1.0 - q));
        const double p = 1.0 / (1.0 + std::exp(-beta0 - spec.dropout_slope *
                                                            (expr - out.mean_expression)));
        if (y > 0 && unif(cell_rng) < p) {
          y = 0;
          ++dropped;
        }
      }
      if (y == 0)
        ++zeros;
      out.counts[c * G + g] = y;
    }
    out.true_dropout[c] = static_cast<double>(dropped) / static_cast<double>(G);
    out.observed_dropout[c] = static_cast<double>(zeros) / static_cast<double>(G);
  });
  return out;
}

double corrected_dropout_rate(double s_hat, double observed_rate,
                              std::size_t genes) {
  const double n = static_cast<double>(genes);
  if (!(s_hat <= n))
    return observed_rate;
  return std::max(0.0, (n - s_hat) / n);
}

double dropout_correction(const CountHistogram &cell, std::size_t genes,
                          const RichnessEstimator &estimator) {
  const double n = static_cast<double>(genes);
  const double observed = (n - static_cast<double>(cell.distinct())) / n;
  try {
    return corrected_dropout_rate(estimator(cell).s_hat, observed, genes);
  } catch (const Error &) {
    return observed;
  }
}

double dropout_correction(std::span<const std::uint32_t> cell_counts,
                          const RichnessEstimator &estimator) {
  try {
    return dropout_correction(from_counts(cell_counts), cell_counts.size(),
                              estimator);
  } catch (const Error &e) {
    if (e.code() != Errc::empty_histogram)
      throw;
    return 1.0;
  }
}

} // namespace boundpop
