#include "boundpop/bootstrap.hpp"
#include "boundpop/error.hpp"
#include "boundpop/simulate.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace boundpop;

TEST_CASE("single-cell resample is deterministic") {
  const auto h = parse_histogram("5 1");
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    CHECK(resample(h, seed) == h);
}

TEST_CASE("resample preserves D and tracks multinomial means") {
  const auto h = parse_histogram("1 100\n2 50");
  constexpr int R = 10000;
  double sum = 0.0;
  Rng rng = stream_rng(42, 0);
  for (int r = 0; r < R; ++r) {
    const auto b = resample(h, rng);
    CHECK(b.distinct() == h.distinct());
    sum += static_cast<double>(b.frequency(1));
  }
  // m_1 ~ Bin(150, 2/3): mean 100, sd sqrt(150 * 2/3 * 1/3).
  const double se = std::sqrt(150.0 * (2.0 / 3.0) * (1.0 / 3.0) / R);
  CHECK(std::fabs(sum / R - 100.0) < 3 * se);
}

TEST_CASE("resampling a wide histogram keeps its support") {
  const auto h = parse_histogram("1 603776\n2 73628\n3 14113\n4 3691\n5 2446\n6 1612\n7 1148\n3400 1\n7288 1\n7733 1");
  Rng rng = stream_rng(1, 0);
  for (int r = 0; r < 50; ++r) {
    const auto b = resample(h, rng);
    CHECK(b.distinct() == h.distinct());
    for (const auto &e : b.entries())
      CHECK(h.frequency(e.multiplicity) > 0);
  }
}

TEST_CASE("no singletons exhausts the bootstrap") {
  BootstrapOptions opts;
  opts.replicates = 20;
  opts.seed = 1;
  try {
    bagged_estimate(parse_histogram("5 1000000"), opts);
    FAIL("no throw");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::bootstrap_exhausted);
  }
}

TEST_CASE("constant replicates have zero between-replicate variance") {
  const std::vector<double> n0(9, 123.25);
  const std::vector<double> var(9, 4.0);
  const auto s = summarize_replicates(n0, var, 1000, 0.95);
  CHECK(s.bagged_n0 == 123.25);
  CHECK(s.variance_between == 0.0);
  CHECK(s.variance_within == 4.0);
  CHECK(s.variance == 4.0);
  CHECK(s.ci_lower == 123.25);
  CHECK(s.ci_upper == 123.25);
  CHECK(s.bagged_s_hat == 1123.25);
}

TEST_CASE("failed replicates are excluded and counted") {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> n0{1.0, nan, 3.0, 2.0, nan};
  const std::vector<double> var{1.0, nan, 1.0, 1.0, nan};
  const auto s = summarize_replicates(n0, var, 10, 0.95);
  CHECK(s.n_failed == 2);
  CHECK(s.replicates == 5);
  CHECK(s.bagged_n0 == 2.0);
  CHECK(s.variance_between == doctest::Approx(1.0));
}

TEST_CASE("property: median ignores corruption above it") {
  Rng rng = stream_rng(9, 0);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t B = 2 + trial % 40;
    std::vector<double> n0(B);
    for (double &v : n0)
      v = u(rng);
    const std::vector<double> var(B, 1.0);
    const double before = summarize_replicates(n0, var, 1, 0.95).bagged_n0;
    std::sort(n0.begin(), n0.end());
    const std::size_t k = (B - 1) / 2;
    for (std::size_t i = 0; i < k; ++i)
      n0[B - 1 - i] *= 1e9;
    std::shuffle(n0.begin(), n0.end(), rng);
    CHECK(summarize_replicates(n0, var, 1, 0.95).bagged_n0 == before);
  }
}

TEST_CASE("quantiles interpolate linearly") {
  CHECK(quantile({4, 1, 3, 2}, 0.5) == 2.5);
  CHECK(quantile({4, 1, 3, 2}, 0.0) == 1.0);
  CHECK(quantile({4, 1, 3, 2}, 1.0) == 4.0);
  CHECK(quantile({10, 20}, 0.25) == 12.5);
  CHECK(median({7}) == 7.0);
}

TEST_CASE("bagged summary is reproducible across thread counts") {
  const auto h = sample_mixture(two_component_case(3, 20000), 8).histogram;
  BootstrapOptions opts;
  opts.replicates = 120;
  opts.seed = 77;
  opts.threads = 1;
  const auto one = bagged_estimate(h, opts);
  opts.threads = 4;
  const auto four = bagged_estimate(h, opts);
  CHECK(one.bagged_n0 == four.bagged_n0);
  CHECK(one.variance == four.variance);
  CHECK(one.ci_lower == four.ci_lower);
  CHECK(one.ci_upper == four.ci_upper);
  CHECK(one.n_failed == four.n_failed);
  REQUIRE(one.replicate_n0.size() == four.replicate_n0.size());
  for (std::size_t i = 0; i < one.replicate_n0.size(); ++i)
    CHECK((one.replicate_n0[i] == four.replicate_n0[i] ||
           (std::isnan(one.replicate_n0[i]) && std::isnan(four.replicate_n0[i]))));

  CHECK(one.ci_lower <= one.bagged_n0);
  CHECK(one.bagged_n0 <= one.ci_upper);
  CHECK(one.variance_within >= 0.0);
  CHECK(one.variance_between >= 0.0);
  CHECK(one.variance == one.variance_within + one.variance_between);
  CHECK(one.seed == 77);

  opts.seed = 78;
  CHECK(bagged_estimate(h, opts).bagged_n0 != one.bagged_n0);
}

TEST_CASE("bootstrap argument checks") {
  BootstrapOptions opts;
  opts.replicates = 1;
  CHECK_THROWS_AS(bagged_estimate(parse_histogram("1 10\n2 3"), opts), Error);
}
