#include "boundpop/moments.hpp"

#include "boundpop/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace boundpop {

namespace {

// Relative positivity threshold for Hankel minors.
constexpr double hankel_rel_tol = 1e-12;

// k x k Hankel matrix over nu[offset .. offset + 2k - 2].
std::vector<double> hankel_matrix(const MomentSequence &nu, std::size_t k,
                                  std::size_t offset) {
  std::vector<double> a(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      a[i * k + j] = nu[offset + i + j];
  return a;
}

// Number of leading minors of the k x k Hankel matrix that are positive.
// Unpivoted elimination makes pivot i equal to det H_i / det H_{i-1}; each
// must exceed the threshold relative to the diagonal entry it came from.
std::size_t positive_leading_minors(const MomentSequence &nu, std::size_t k,
                                    std::size_t offset) {
  std::vector<long double> a(k * k);
  for (std::size_t i = 0; i < k * k; ++i)
    a[i] = nu[offset + i / k + i % k];
  for (std::size_t c = 0; c < k; ++c) {
    const long double d = a[c * k + c];
    const long double diag = std::fabs(nu[offset + 2 * c]);
    if (!std::isfinite(d) || !(d > hankel_rel_tol * diag))
      return c;
    for (std::size_t r = c + 1; r < k; ++r) {
      const long double f = a[r * k + c] / d;
      for (std::size_t j = c; j < k; ++j)
        a[r * k + j] -= f * a[c * k + j];
    }
  }
  return k;
}

} // namespace

MomentSequence estimate_moments(std::span<const double> freq, int order) {
  if (order < 0)
    throw Error(Errc::invalid_argument, "moment order must be non-negative");
  const double n1 = freq.empty() ? 0.0 : freq[0];
  if (!(n1 > 0.0))
    throw Error(Errc::no_singletons, "no singletons: n_1 = 0");
  MomentSequence nu;
  nu.values.reserve(order + 1);
  // (m+1)! grows alongside the ratio instead of being formed up front.
  double factorial = 1.0;
  for (int m = 0; m <= order; ++m) {
    factorial *= (m + 1);
    const std::size_t j = m + 1;
    const double n = j <= freq.size() ? freq[j - 1] : 0.0;
    const double value = n == 0.0 ? 0.0 : factorial * (n / n1);
    if (!std::isfinite(value))
      throw Error(Errc::order_too_large,
                  "order too large: moment " + std::to_string(m) +
                      " overflows");
    nu.values.push_back(value);
  }
  return nu;
}

MomentSequence estimate_moments(const CountHistogram &h, int order) {
  if (order < 0)
    throw Error(Errc::invalid_argument, "moment order must be non-negative");
  return estimate_moments(h.dense_frequencies(order + 1), order);
}

double determinant(std::vector<double> m, std::size_t n) {
  std::vector<long double> a(m.begin(), m.end());
  long double det = 1.0L;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r * n + c]) > std::fabs(a[pivot * n + c]))
        pivot = r;
    if (a[pivot * n + c] == 0.0L)
      return 0.0;
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k)
        std::swap(a[c * n + k], a[pivot * n + k]);
      det = -det;
    }
    const long double d = a[c * n + c];
    det *= d;
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = a[r * n + c] / d;
      if (f == 0.0L)
        continue;
      for (std::size_t k = c + 1; k < n; ++k)
        a[r * n + k] -= f * a[c * n + k];
    }
  }
  return static_cast<double>(det);
}

HankelDeterminants hankel_determinants(const MomentSequence &nu) {
  HankelDeterminants out;
  const std::size_t count = nu.values.size();
  for (std::size_t p = 0; 2 * p < count; ++p)
    out.hankel.push_back(determinant(hankel_matrix(nu, p + 1, 0), p + 1));
  for (std::size_t p = 0; 2 * p + 1 < count; ++p)
    out.shifted.push_back(determinant(hankel_matrix(nu, p + 1, 1), p + 1));
  return out;
}

int select_order(const MomentSequence &nu, int max_order) {
  const int available = static_cast<int>(nu.values.size()) / 2;
  const int limit = std::min(max_order, available);
  if (limit < 1)
    return 1;
  // A P-point rule needs H_{P-1} (through nu_{2P-2}) and H'_{P-1} (through
  // nu_{2P-1}) positive definite, i.e. every leading minor of both positive.
  const std::size_t k = limit;
  const std::size_t ok = std::min(positive_leading_minors(nu, k, 0),
                                  positive_leading_minors(nu, k, 1));
  return std::max(1, static_cast<int>(ok));
}

int default_max_order(const CountHistogram &h) {
  int p = 1;
  for (int candidate = 2; candidate <= max_order_cap; ++candidate)
    if (h.frequency(2 * static_cast<std::uint64_t>(candidate)) > 0)
      p = candidate;
  return p;
}

} // namespace boundpop
