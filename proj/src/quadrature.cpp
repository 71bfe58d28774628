#include "boundpop/quadrature.hpp"

#include "boundpop/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace boundpop {

namespace {

// sigma_{k,k} smaller than this fraction of the terms it was formed from is
// cancellation noise, not a mixed moment.
constexpr long double breakdown_rel_tol = 1e-13L;

constexpr int sweeps_per_point = 30;

} // namespace

double QuadratureRule::moment(int m) const {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    s += weights[i] * std::pow(points[i], m);
  return s;
}

ThreeTermRecurrence chebyshev_recurrence(const MomentSequence &nu, int order) {
  if (order < 1)
    throw Error(Errc::invalid_argument, "quadrature order must be >= 1");
  const std::size_t n = order;
  if (nu.values.size() < 2 * n)
    throw Error(Errc::invalid_argument,
                "order " + std::to_string(order) + " needs " +
                    std::to_string(2 * n) + " moments");
  if (!(nu[0] > 0.0))
    throw Error(Errc::invalid_recurrence, "invalid recurrence: nu_0 <= 0");

  // Mixed moments are carried in extended precision; the map from moments
  // to coefficients loses digits exponentially in the order.
  using real = long double;
  const std::size_t width = 2 * n;
  std::vector<real> older(width, 0.0L);
  std::vector<real> prev(width);
  std::vector<real> cur(width, 0.0L);
  for (std::size_t l = 0; l < width; ++l)
    prev[l] = nu[l];

  std::vector<real> alpha(n), beta(n);
  alpha[0] = prev[1] / prev[0];
  beta[0] = prev[0];

  for (std::size_t k = 1; k < n; ++k) {
    std::fill(cur.begin(), cur.end(), 0.0L);
    for (std::size_t l = k; l + k < width; ++l)
      cur[l] = prev[l + 1] - alpha[k - 1] * prev[l] - beta[k - 1] * older[l];

    const real scale = std::fabs(prev[k + 1]) +
                       std::fabs(alpha[k - 1] * prev[k]) +
                       std::fabs(beta[k - 1] * older[k]);
    if (!std::isfinite(cur[k]) || std::fabs(cur[k]) <= breakdown_rel_tol * scale)
      throw Error(Errc::recurrence_breakdown,
                  "recurrence breakdown at order " + std::to_string(k));

    alpha[k] = cur[k + 1] / cur[k] - prev[k] / prev[k - 1];
    beta[k] = cur[k] / prev[k - 1];
    std::swap(older, prev);
    std::swap(prev, cur);
  }

  ThreeTermRecurrence rec;
  rec.alpha.assign(alpha.begin(), alpha.end());
  rec.beta.assign(beta.begin(), beta.end());
  return rec;
}

QuadratureRule golub_welsch(const ThreeTermRecurrence &rec) {
  const std::size_t n = rec.alpha.size();
  if (n == 0 || rec.beta.size() != n)
    throw Error(Errc::invalid_recurrence,
                "invalid recurrence: mismatched coefficient lengths");
  if (!(rec.beta[0] > 0.0))
    throw Error(Errc::invalid_recurrence, "invalid recurrence: beta_0 <= 0");
  for (std::size_t k = 1; k < n; ++k)
    if (!(rec.beta[k] > 0.0) || !std::isfinite(rec.beta[k]))
      throw Error(Errc::invalid_recurrence,
                  "invalid recurrence: beta_" + std::to_string(k) + " <= 0");
  for (const double a : rec.alpha)
    if (!std::isfinite(a))
      throw Error(Errc::invalid_recurrence, "invalid recurrence: alpha not finite");

  // Jacobi matrix: d on the diagonal, e[i] = sqrt(beta_{i+1}) below it.
  // z is the first row of the eigenvector matrix, rotated alongside.
  std::vector<double> d(rec.alpha);
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    e[i] = std::sqrt(rec.beta[i + 1]);
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const std::size_t budget = sweeps_per_point * n;
  std::size_t sweeps = 0;

  for (std::size_t l = 0; l < n; ++l) {
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m)
        if (std::fabs(e[m]) <= eps * (std::fabs(d[m]) + std::fabs(d[m + 1])))
          break;
      if (m == l)
        break;
      if (++sweeps > budget)
        throw Error(Errc::eigensolve_failed,
                    "eigensolve failed: no convergence after " +
                        std::to_string(budget) + " sweeps");

      // Wilkinson shift from the 2x2 block at the converging end.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        const double zi1 = z[i + 1];
        z[i + 1] = s * z[i] + c * zi1;
        z[i] = c * z[i] - s * zi1;
      }
      if (underflow)
        continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  QuadratureRule rule;
  rule.points.reserve(n);
  rule.weights.reserve(n);
  for (const std::size_t i : order) {
    rule.points.push_back(d[i]);
    rule.weights.push_back(rec.beta[0] * z[i] * z[i]);
  }
  return rule;
}

RuleVerdict validate_rule(const QuadratureRule &rule, double floor) {
  const std::size_t n = rule.size();
  if (n == 0 || rule.weights.size() != n)
    return {false, "empty or mismatched rule"};
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(rule.points[i]) || !std::isfinite(rule.weights[i]))
      return {false, "non-finite point or weight"};
    if (rule.points[i] < floor)
      return {false, "point below floor"};
    if (i > 0 && !(rule.points[i] > rule.points[i - 1]))
      return {false, "points not distinct"};
    // A one-point rule necessarily carries all the mass.
    if (!(rule.weights[i] > 0.0) || (n > 1 && !(rule.weights[i] < 1.0)))
      return {false, "weight outside (0,1)"};
  }
  const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  if (std::fabs(total - 1.0) > 1e-6)
    return {false, total > 1.0 ? "weights sum exceeds 1" : "weights sum below 1"};
  return {true, {}};
}

} // namespace boundpop
