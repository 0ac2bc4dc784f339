#include "gpimc/gaussian.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

#include "gpimc/combinatorics.hpp"

namespace gpimc {

CovMatrix::CovMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, Rational(0)) {
  if (dim == 0) throw std::invalid_argument("CovMatrix: zero dimension");
}

CovMatrix CovMatrix::from_prob(const ProbVector& p) {
  CovMatrix cov(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) {
    cov.set(i, i, p[i] - p[i] * p[i]);
    for (std::size_t j = i + 1; j < p.dim(); ++j) cov.set(i, j, -(p[i] * p[j]));
  }
  return cov;
}

const Rational& CovMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= dim_ || j >= dim_) throw std::invalid_argument("CovMatrix: index out of range");
  return a_[i * dim_ + j];
}

void CovMatrix::set(std::size_t i, std::size_t j, const Rational& v) {
  if (i >= dim_ || j >= dim_) throw std::invalid_argument("CovMatrix: index out of range");
  a_[i * dim_ + j] = v;
  a_[j * dim_ + i] = v;
}

namespace gaussian {
namespace {

unsigned checked_total(const CovMatrix& cov, const MultiplicityVector& mult,
                       const EvalBudget& budget, const char* label) {
  if (mult.size() != cov.dim())
    throw std::invalid_argument(std::string(label) + ": multiplicity dimension " +
                                std::to_string(mult.size()) + " != covariance dimension " +
                                std::to_string(cov.dim()));
  unsigned total = 0;
  for (int n : mult) {
    if (n < 0) throw std::invalid_argument(std::string(label) + ": negative multiplicity");
    total += static_cast<unsigned>(n);
  }
  if (total > budget.wick_degree_cap)
    throw BudgetExceededError(std::string(label) + ": total degree " + std::to_string(total) +
                              " exceeds cap " + std::to_string(budget.wick_degree_cap));
  return total;
}

Rational wick_recurse(const CovMatrix& cov, MultiplicityVector& state,
                      std::map<MultiplicityVector, Rational>& memo, TermCounter& counter) {
  auto it = memo.find(state);
  if (it != memo.end()) return it->second;

  std::size_t first = state.size();
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i] > 0) {
      first = i;
      break;
    }
  }
  if (first == state.size()) return 1;

  // Pair one copy of the first live coordinate with each live partner; the
  // partner count (after removing that copy) is the number of ways.
  const MultiplicityVector key = state;
  --state[first];
  Rational acc = 0;
  for (std::size_t b = first; b < state.size(); ++b) {
    const int ways = state[b];
    if (ways == 0) continue;
    counter.charge();
    --state[b];
    acc += Rational(ways) * cov.at(first, b) * wick_recurse(cov, state, memo, counter);
    ++state[b];
  }
  ++state[first];
  memo.emplace(key, acc);
  return acc;
}

}  // namespace

Rational univariate_even_moment(const Rational& variance, unsigned m) {
  if (sign(variance) < 0)
    throw std::invalid_argument("univariate_even_moment: negative variance");
  return Rational(comb::double_factorial(2L * m - 1)) * pow_ui(variance, m);
}

Rational wick_moment(const CovMatrix& cov, const MultiplicityVector& mult,
                     const EvalBudget& budget) {
  const unsigned total = checked_total(cov, mult, budget, "wick_moment");
  if (total % 2 != 0) return 0;
  MultiplicityVector state = mult;
  std::map<MultiplicityVector, Rational> memo;
  TermCounter counter(budget.max_terms, "wick_moment");
  return wick_recurse(cov, state, memo, counter);
}

Rational wick_moment_enumerated(const CovMatrix& cov, const MultiplicityVector& mult,
                                const EvalBudget& budget) {
  const unsigned total = checked_total(cov, mult, budget, "wick_moment_enumerated");
  if (total % 2 != 0) return 0;

  std::vector<std::size_t> coord;
  coord.reserve(total);
  for (std::size_t i = 0; i < mult.size(); ++i)
    coord.insert(coord.end(), static_cast<std::size_t>(mult[i]), i);

  TermCounter counter(budget.max_terms, "wick_moment_enumerated");
  Rational acc = 0;
  comb::for_each_perfect_pairing(total, [&](std::span<const std::pair<unsigned, unsigned>> pairs) {
    counter.charge();
    Rational prod = 1;
    for (const auto& [a, b] : pairs) prod *= cov.at(coord[a], coord[b]);
    acc += prod;
  });
  return acc;
}

Rational gpi_gap(const ProbVector& p, unsigned m, const EvalBudget& budget) {
  if (m == 0) throw std::invalid_argument("gpi_gap: m must be >= 1");
  const CovMatrix cov = CovMatrix::from_prob(p);
  const MultiplicityVector mult(p.dim(), static_cast<int>(2 * m));
  Rational mixed = wick_moment(cov, mult, budget);
  Rational prod = 1;
  for (std::size_t i = 0; i < p.dim(); ++i)
    prod *= univariate_even_moment(cov.at(i, i), m);
  return mixed - prod;
}

}  // namespace gaussian
}  // namespace gpimc
