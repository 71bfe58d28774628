#ifndef BOUNDPOP_MOMENTS_HPP
#define BOUNDPOP_MOMENTS_HPP

#include "boundpop/histogram.hpp"

#include <span>
#include <vector>

namespace boundpop {

// Moments nu_0..nu_M of the size-biased measure dnu(x) ~ x e^{-x} dmu(x),
// where mu is the abundance distribution.
struct MomentSequence {
  std::vector<double> values;

  int order() const { return static_cast<int>(values.size()) - 1; }
  double operator[](std::size_t m) const { return values[m]; }
};

// Largest order any estimator will use; beyond it the moment problem is
// hopelessly conditioned.
inline constexpr int max_order_cap = 10;

// nu_m = (m+1)! n_{m+1} / n_1 for m = 0..order. Absent n_j count as zero.
// Throws no_singletons if n_1 = 0 and order_too_large on overflow.
MomentSequence estimate_moments(const CountHistogram &h, int order);

// Same, from real-valued frequencies: freq[j-1] holds n_j (expected
// frequencies are not integers).
MomentSequence estimate_moments(std::span<const double> freq, int order);

struct HankelDeterminants {
  std::vector<double> hankel;  // det H_P, P = 0, 1, ...; H_P is (P+1)x(P+1) over nu_0..nu_2P
  std::vector<double> shifted; // det H'_P over nu_1..nu_{2P+1}
};

// Leading determinants of the Hankel and shifted Hankel moment matrices,
// for every P the sequence supports.
HankelDeterminants hankel_determinants(const MomentSequence &nu);

// Determinant of a dense n x n row-major matrix by LU with partial pivoting.
double determinant(std::vector<double> a, std::size_t n);

// Largest P <= max_order for which H_k and H'_k are numerically positive
// definite for k = 0..P-1, using moments up to nu_{2P-1}. Never below 1.
int select_order(const MomentSequence &nu, int max_order);

// Default order cap for a histogram: the largest P with n_{2P} > 0,
// at most max_order_cap, at least 1.
int default_max_order(const CountHistogram &h);

} // namespace boundpop

#endif
