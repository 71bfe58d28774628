#ifndef BOUNDPOP_QUADRATURE_HPP
#define BOUNDPOP_QUADRATURE_HPP

#include "boundpop/moments.hpp"

#include <string>
#include <vector>

namespace boundpop {

// Monic orthogonal polynomials p_{k+1}(x) = (x - alpha_k) p_k(x) - beta_k p_{k-1}(x).
// beta[0] carries the total mass nu_0.
struct ThreeTermRecurrence {
  std::vector<double> alpha;
  std::vector<double> beta;

  std::size_t order() const { return alpha.size(); }
};

// Discrete measure sum_i w_i delta(x_i), points ascending.
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  // sum_i w_i x_i^m
  double moment(int m) const;
};

// Unmodified Chebyshev algorithm: recurrence coefficients of order P from
// nu_0..nu_{2P-1}. Throws recurrence_breakdown when a mixed moment
// sigma_{k,k} cancels to noise.
ThreeTermRecurrence chebyshev_recurrence(const MomentSequence &nu, int order);

// Golub-Welsch: eigenvalues of the Jacobi matrix and the squared first
// components of its eigenvectors. Throws invalid_recurrence on beta_k <= 0
// and eigensolve_failed if the QL sweep budget runs out.
QuadratureRule golub_welsch(const ThreeTermRecurrence &rec);

struct RuleVerdict {
  bool valid = false;
  std::string reason;

  explicit operator bool() const { return valid; }
};

RuleVerdict validate_rule(const QuadratureRule &rule, double floor);

} // namespace boundpop

#endif
