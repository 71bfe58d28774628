#include "boundpop/bootstrap.hpp"

#include "boundpop/error.hpp"
#include "boundpop/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace boundpop {

CountHistogram resample(const CountHistogram &h, Rng &rng) {
  // Sequential conditional binomials: m_j ~ Bin(remaining, p_j / p_rest).
  const auto &entries = h.entries();
  std::vector<CountHistogram::Entry> out;
  out.reserve(entries.size());
  std::uint64_t remaining = h.distinct();
  std::uint64_t mass_left = h.distinct();
  for (std::size_t i = 0; i < entries.size() && remaining > 0; ++i) {
    const auto &e = entries[i];
    std::uint64_t draw = remaining;
    if (i + 1 < entries.size() && e.frequency < mass_left) {
      const double p = static_cast<double>(e.frequency) /
                       static_cast<double>(mass_left);
      std::binomial_distribution<std::uint64_t> bin(remaining, p);
      draw = bin(rng);
    }
    mass_left -= e.frequency;
    remaining -= draw;
    if (draw > 0)
      out.push_back({e.multiplicity, draw});
  }
  return CountHistogram(std::move(out));
}

CountHistogram resample(const CountHistogram &h, std::uint64_t seed) {
  Rng rng = stream_rng(seed, 0);
  return resample(h, rng);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty())
    return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || lo == hi)
    return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double sample_variance(std::span<const double> values) {
  if (values.size() < 2)
    return 0.0;
  // Welford; exactly zero for constant input.
  double mean = 0.0, ss = 0.0;
  std::size_t k = 0;
  for (const double v : values) {
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    ss += delta * (v - mean);
  }
  return ss / static_cast<double>(values.size() - 1);
}

BootstrapSummary bagged_estimate(const CountHistogram &h,
                                 const BootstrapOptions &opts) {
  if (opts.replicates < 2)
    throw Error(Errc::invalid_argument, "bootstrap needs at least 2 replicates");
  if (!(opts.ci_level > 0.0 && opts.ci_level < 1.0))
    throw Error(Errc::invalid_argument, "confidence level must lie in (0,1)");

  const auto reps = static_cast<std::size_t>(opts.replicates);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> n0(reps, nan);
  std::vector<double> binomial_var(reps, nan);

  parallel_for(reps, opts.threads, [&](std::size_t b) {
    Rng rng = stream_rng(opts.seed, b);
    const CountHistogram boot = resample(h, rng);
    try {
      const RichnessEstimate est = estimate(boot, opts.estimator);
      n0[b] = est.n0_hat;
      binomial_var[b] = est.s_hat * est.f0_hat * (1.0 - est.f0_hat);
    } catch (const Error &) {
      // resample lost its singletons or doubletons
    }
  });

  BootstrapSummary s =
      summarize_replicates(std::move(n0), binomial_var, h.distinct(), opts.ci_level);
  s.seed = opts.seed;
  return s;
}

BootstrapSummary summarize_replicates(std::vector<double> n0,
                                      std::span<const double> binomial_var,
                                      std::uint64_t distinct, double ci_level) {
  std::vector<double> ok_n0, ok_var;
  for (std::size_t b = 0; b < n0.size(); ++b)
    if (!std::isnan(n0[b])) {
      ok_n0.push_back(n0[b]);
      ok_var.push_back(binomial_var[b]);
    }
  if (ok_n0.empty())
    throw Error(Errc::bootstrap_exhausted,
                "bootstrap exhausted: all " + std::to_string(n0.size()) +
                    " replicates failed");

  BootstrapSummary s;
  s.replicates = n0.size();
  s.n_failed = n0.size() - ok_n0.size();
  s.bagged_n0 = median(ok_n0);
  s.bagged_s_hat = static_cast<double>(distinct) + s.bagged_n0;
  s.variance_within = std::max(0.0, median(ok_var));
  s.variance_between = sample_variance(ok_n0);
  s.variance = s.variance_within + s.variance_between;
  const double tail = 0.5 * (1.0 - ci_level);
  s.ci_lower = quantile(ok_n0, tail);
  s.ci_upper = quantile(ok_n0, 1.0 - tail);
  s.replicate_n0 = std::move(n0);
  return s;
}

} // namespace boundpop
