#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "gpimc/budget.hpp"
#include "gpimc/multinomial.hpp"
#include "gpimc/rational.hpp"

namespace gpimc {

/// Constraint placed on the (k, j) index set of the combinatorial condition.
/// Equality is the identity form, sum(j) == sum(k) - m*d; Slack relaxes it to
/// sum(j) <= sum(k) - m*d. The two genuinely differ (Slack keeps extra terms).
enum class ConstraintVariant { Equality, Slack };

std::string_view to_string(ConstraintVariant v);
ConstraintVariant variant_from_string(std::string_view s);

/// One admissible summand: indices, the integer coefficient
/// prod_i C(2m, k_i) {k_i brace j_i} (-1)^{k_i}, and the per-coordinate
/// exponents 2m - k_i + j_i of p.
struct ConstrainedTerm {
  MultiIndex k;
  MultiIndex j;
  Integer coefficient;
  MultiIndex p_exponents;

  bool operator==(const ConstrainedTerm&) const = default;
};

namespace condition {

/// Streams every admissible (k, j) pair with nonzero Stirling factors,
/// exactly once, in ascending lexicographic order (k outer, j inner).
/// Pruned: k prefixes that cannot reach sum(k) >= m*d are skipped, and j
/// prefixes that cannot meet the variant constraint are skipped.
void enumerate_constrained_terms(unsigned d, unsigned m, ConstraintVariant variant,
                                 const std::function<void(const ConstrainedTerm&)>& emit,
                                 const EvalBudget& budget = {});

/// Unpruned reference: the variant filter applied literally to the full
/// (2m+1)^d x prod(k_i+1) box. Kept as the independent check of the pruning.
void enumerate_constrained_terms_reference(
    unsigned d, unsigned m, ConstraintVariant variant,
    const std::function<void(const ConstrainedTerm&)>& emit,
    const EvalBudget& budget = {});

std::vector<ConstrainedTerm> constrained_terms(unsigned d, unsigned m,
                                               ConstraintVariant variant,
                                               const EvalBudget& budget = {});

/// Constrained sum of coefficient * prod p_i^{2m-k_i+j_i} minus
/// diagonal_product(p, m). Nonnegativity of the Equality form is the
/// combinatorial condition equivalent to the Gaussian limit inequality.
Rational theorem_gap(const ProbVector& p, unsigned m, ConstraintVariant variant,
                     const EvalBudget& budget = {});

/// prod_i sum_{k=m}^{2m} C(2m,k) {k brace k-m} (-1)^k p_i^m.
Rational diagonal_product(const ProbVector& p, unsigned m);

/// Equal-probability specialization: the p-free sum of coefficients over
/// equality-constrained terms that are not fully diagonal (some coordinate
/// has k_i < m or j_i != k_i - m). Satisfies
/// equal_p_sum(d, m) * p^{md} == theorem_gap((p,...,p), m, Equality).
Integer equal_p_sum(unsigned d, unsigned m, const EvalBudget& budget = {});

}  // namespace condition
}  // namespace gpimc
