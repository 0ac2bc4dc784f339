#pragma once

#include <cstddef>
#include <vector>

#include "gpimc/budget.hpp"
#include "gpimc/multinomial.hpp"
#include "gpimc/rational.hpp"

namespace gpimc {

/// Symmetric d x d rational matrix.
class CovMatrix {
 public:
  explicit CovMatrix(std::size_t dim);

  /// diag(p) - p p^T: sigma_ii = p_i - p_i^2, sigma_ij = -p_i p_j.
  static CovMatrix from_prob(const ProbVector& p);

  std::size_t dim() const noexcept { return dim_; }
  const Rational& at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Rational& v);  // keeps symmetry

 private:
  std::size_t dim_;
  std::vector<Rational> a_;
};

/// Per-coordinate moment orders; the total degree must be even for a
/// nonzero Gaussian moment.
using MultiplicityVector = std::vector<int>;

namespace gaussian {

/// E[Y^{2m}] for Y ~ N(0, variance): (2m-1)!! variance^m.
Rational univariate_even_moment(const Rational& variance, unsigned m);

/// E[prod Y_i^{mult_i}] by Isserlis pairing, as a memoized recursion on the
/// remaining multiplicity vector: pair one copy of the first live coordinate
/// with every live partner, weight by the partner count, recurse. Exact for
/// any symmetric covariance (no inverse needed, singular allowed). Returns 0
/// for odd total degree. The memo lives inside the call, so concurrent calls
/// share nothing.
Rational wick_moment(const CovMatrix& cov, const MultiplicityVector& mult,
                     const EvalBudget& budget = {});

/// Same moment by direct enumeration of all (T-1)!! perfect pairings of the
/// expanded index multiset. Exponential; retained as the independent oracle
/// for small total degree.
Rational wick_moment_enumerated(const CovMatrix& cov, const MultiplicityVector& mult,
                                const EvalBudget& budget = {});

/// E[prod Y_i^{2m}] - prod_i E[Y_i^{2m}] for Y ~ N_d(0, diag(p) - p p^T).
Rational gpi_gap(const ProbVector& p, unsigned m, const EvalBudget& budget = {});

}  // namespace gaussian
}  // namespace gpimc
