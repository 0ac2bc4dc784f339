#include "gpimc/gpi_condition.hpp"

#include <numeric>
#include <stdexcept>

#include "gpimc/combinatorics.hpp"

namespace gpimc {

std::string_view to_string(ConstraintVariant v) {
  return v == ConstraintVariant::Equality ? "equality" : "slack";
}

ConstraintVariant variant_from_string(std::string_view s) {
  if (s == "equality") return ConstraintVariant::Equality;
  if (s == "slack") return ConstraintVariant::Slack;
  throw std::invalid_argument("unknown constraint variant '" + std::string(s) +
                              "' (expected equality or slack)");
}

namespace condition {
namespace {

struct Enumerator {
  unsigned d;
  unsigned m;
  ConstraintVariant variant;
  const std::function<void(const ConstrainedTerm&)>& emit;
  TermCounter counter;

  MultiIndex k;
  MultiIndex j;

  Enumerator(unsigned d_in, unsigned m_in, ConstraintVariant variant_in,
             const std::function<void(const ConstrainedTerm&)>& emit_in,
             const EvalBudget& budget)
      : d(d_in), m(m_in), variant(variant_in), emit(emit_in),
        counter(budget.max_terms, "enumerate_constrained_terms"),
        k(d_in, 0), j(d_in, 0) {
    if (d == 0 || m == 0)
      throw std::invalid_argument("enumerate_constrained_terms: d and m must be >= 1");
  }

  void emit_current() {
    ConstrainedTerm term;
    term.k = k;
    term.j = j;
    term.coefficient = 1;
    term.p_exponents.resize(d);
    unsigned k_total = 0;
    for (unsigned i = 0; i < d; ++i) {
      term.coefficient *= comb::binomial(2 * m, k[i]) * comb::stirling2(k[i], j[i]);
      term.p_exponents[i] = static_cast<int>(2 * m - k[i]) + j[i];
      k_total += static_cast<unsigned>(k[i]);
    }
    if (k_total % 2 != 0) term.coefficient = -term.coefficient;
    emit(term);
  }

  // j phase: coordinate i onward, sum(j) so far = placed, constraint bound
  // slack_total = sum(k) - m d. Coordinates with k_i = 0 take j_i = 0; others
  // take 1..k_i (the only values with a nonzero Stirling factor).
  void fill_j(unsigned i, unsigned placed, unsigned slack_total, unsigned min_rest,
              unsigned max_rest) {
    if (i == d) {
      if (variant == ConstraintVariant::Slack || placed == slack_total) {
        counter.charge();
        emit_current();
      }
      return;
    }
    const unsigned lo = k[i] == 0 ? 0 : 1;
    const unsigned hi = static_cast<unsigned>(k[i]);
    const unsigned rest_lo = min_rest - lo;  // bounds over coordinates after i
    const unsigned rest_hi = max_rest - hi;
    for (unsigned v = lo; v <= hi; ++v) {
      const unsigned sum = placed + v;
      if (sum + rest_lo > slack_total) break;  // ascending v only grows the sum
      if (variant == ConstraintVariant::Equality && sum + rest_hi < slack_total) continue;
      counter.charge();
      j[i] = v;
      fill_j(i + 1, sum, slack_total, rest_lo, rest_hi);
    }
    j[i] = 0;
  }

  // k phase: keep sum(k) reachable to >= m d given 2m per remaining slot.
  void fill_k(unsigned i, unsigned placed) {
    if (i == d) {
      const unsigned slack_total = placed - m * d;
      unsigned min_rest = 0;
      unsigned max_rest = 0;
      for (unsigned t = 0; t < d; ++t) {
        min_rest += k[t] == 0 ? 0u : 1u;
        max_rest += static_cast<unsigned>(k[t]);
      }
      if (min_rest > slack_total) return;  // even the smallest j vector overshoots
      fill_j(0, 0, slack_total, min_rest, max_rest);
      return;
    }
    const unsigned remaining = d - i - 1;
    const unsigned target = m * d;
    const unsigned reachable = remaining * 2 * m;
    unsigned lo = 0;
    if (placed + reachable < target) lo = target - placed - reachable;
    for (unsigned v = lo; v <= 2 * m; ++v) {
      counter.charge();
      k[i] = v;
      fill_k(i + 1, placed + v);
    }
    k[i] = 0;
  }
};

bool admissible(unsigned d, unsigned m, ConstraintVariant variant, const MultiIndex& k,
                const MultiIndex& j) {
  long k_sum = std::accumulate(k.begin(), k.end(), 0L);
  long j_sum = std::accumulate(j.begin(), j.end(), 0L);
  if (k_sum < static_cast<long>(m) * d) return false;
  const long bound = k_sum - static_cast<long>(m) * d;
  if (variant == ConstraintVariant::Equality ? j_sum != bound : j_sum > bound) return false;
  for (unsigned i = 0; i < d; ++i)
    if (comb::stirling2(k[i], j[i]) == 0) return false;
  return true;
}

}  // namespace

void enumerate_constrained_terms(unsigned d, unsigned m, ConstraintVariant variant,
                                 const std::function<void(const ConstrainedTerm&)>& emit,
                                 const EvalBudget& budget) {
  Enumerator e(d, m, variant, emit, budget);
  e.fill_k(0, 0);
}

void enumerate_constrained_terms_reference(
    unsigned d, unsigned m, ConstraintVariant variant,
    const std::function<void(const ConstrainedTerm&)>& emit,
    const EvalBudget& budget) {
  if (d == 0 || m == 0)
    throw std::invalid_argument("enumerate_constrained_terms_reference: d and m must be >= 1");
  TermCounter counter(budget.max_terms, "enumerate_constrained_terms_reference");

  // Full (2m+1)^d box for k, full prod(k_i + 1) box for j, filter applied
  // literally. Same ascending order as the pruned stream by construction.
  MultiIndex k(d, 0);
  MultiIndex j(d, 0);
  auto loop_j = [&](auto&& self, unsigned i) -> void {
    if (i == d) {
      counter.charge();
      if (!admissible(d, m, variant, k, j)) return;
      ConstrainedTerm term;
      term.k = k;
      term.j = j;
      term.coefficient = 1;
      term.p_exponents.resize(d);
      long k_sum = 0;
      for (unsigned t = 0; t < d; ++t) {
        term.coefficient *= comb::binomial(2 * m, k[t]) * comb::stirling2(k[t], j[t]);
        term.p_exponents[t] = static_cast<int>(2 * m - k[t]) + j[t];
        k_sum += k[t];
      }
      if (k_sum % 2 != 0) term.coefficient = -term.coefficient;
      emit(term);
      return;
    }
    for (int v = 0; v <= k[i]; ++v) {
      j[i] = v;
      self(self, i + 1);
    }
    j[i] = 0;
  };
  auto loop_k = [&](auto&& self, unsigned i) -> void {
    if (i == d) {
      loop_j(loop_j, 0);
      return;
    }
    for (unsigned v = 0; v <= 2 * m; ++v) {
      k[i] = static_cast<int>(v);
      self(self, i + 1);
    }
    k[i] = 0;
  };
  loop_k(loop_k, 0);
}

std::vector<ConstrainedTerm> constrained_terms(unsigned d, unsigned m,
                                               ConstraintVariant variant,
                                               const EvalBudget& budget) {
  std::vector<ConstrainedTerm> out;
  enumerate_constrained_terms(d, m, variant,
                              [&](const ConstrainedTerm& t) { out.push_back(t); }, budget);
  return out;
}

Rational theorem_gap(const ProbVector& p, unsigned m, ConstraintVariant variant,
                     const EvalBudget& budget) {
  const unsigned d = static_cast<unsigned>(p.dim());
  Rational sum = 0;
  enumerate_constrained_terms(
      d, m, variant,
      [&](const ConstrainedTerm& term) {
        Rational prod(term.coefficient);
        for (unsigned i = 0; i < d; ++i)
          prod *= pow_ui(p[i], static_cast<unsigned long>(term.p_exponents[i]));
        sum += prod;
      },
      budget);
  return sum - diagonal_product(p, m);
}

Rational diagonal_product(const ProbVector& p, unsigned m) {
  if (m == 0) throw std::invalid_argument("diagonal_product: m must be >= 1");
  Integer factor = 0;
  for (unsigned k = m; k <= 2 * m; ++k) {
    Integer t = comb::binomial(2 * m, k) * comb::stirling2(k, static_cast<long>(k) - m);
    if (k % 2 != 0) t = -t;
    factor += t;
  }
  Rational value = pow_ui(Rational(factor), static_cast<unsigned long>(p.dim()));
  for (std::size_t i = 0; i < p.dim(); ++i) value *= pow_ui(p[i], m);
  return value;
}

Integer equal_p_sum(unsigned d, unsigned m, const EvalBudget& budget) {
  Integer acc = 0;
  enumerate_constrained_terms(
      d, m, ConstraintVariant::Equality,
      [&](const ConstrainedTerm& term) {
        for (unsigned i = 0; i < d; ++i) {
          if (term.k[i] < static_cast<int>(m) || term.j[i] != term.k[i] - static_cast<int>(m)) {
            acc += term.coefficient;
            return;
          }
        }
        // fully diagonal: excluded
      },
      budget);
  return acc;
}

}  // namespace condition
}  // namespace gpimc
