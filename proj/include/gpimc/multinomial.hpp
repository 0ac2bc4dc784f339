#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gpimc/budget.hpp"
#include "gpimc/rational.hpp"

namespace gpimc {

/// Vector of small nonnegative integers (counts, moment orders).
using MultiIndex = std::vector<int>;

/// Point p in the simplex S_d with exact rational entries. The implied
/// remainder p_{d+1} = 1 - sum(p) is strictly positive in Interior mode;
/// AllowSumOne admits sum(p) == 1 (singular covariance). Entries are
/// strictly positive in both modes.
class ProbVector {
 public:
  enum class Boundary { Interior, AllowSumOne };

  explicit ProbVector(std::vector<Rational> entries,
                      Boundary boundary = Boundary::Interior);

  /// Parses "1/2,1/4".
  static ProbVector parse(std::string_view csv,
                          Boundary boundary = Boundary::Interior);

  std::size_t dim() const noexcept { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Rational>& entries() const noexcept { return entries_; }

  Rational sum() const;
  Rational remainder() const;  // 1 - sum
  bool on_boundary() const;    // sum == 1

  std::string to_string() const;  // "1/2,1/4"

 private:
  std::vector<Rational> entries_;
};

struct MultinomialSpec {
  MultinomialSpec(std::uint64_t trials_in, ProbVector probs_in);

  std::uint64_t trials;  // N >= 1
  ProbVector probs;
};

/// Streams the lattice simplex {k in N_0^d : sum k <= N} exactly once per
/// point, in colex order starting from the origin.
class SupportRange {
 public:
  SupportRange(std::uint64_t trials, std::size_t dim);

  /// Fills the next point; false once the stream is exhausted.
  bool next(MultiIndex& out);
  void reset();

  /// Number of support points, C(N + d, d).
  static Integer count(std::uint64_t trials, std::size_t dim);

 private:
  std::uint64_t trials_;
  std::size_t dim_;
  MultiIndex current_;
  bool started_ = false;
  bool done_ = false;
};

namespace multinomial {

/// Exact P(xi = counts); 0 when sum(counts) > N.
Rational pmf(const MultinomialSpec& spec, const MultiIndex& counts);

/// Ground-truth oracle: sum of f(k) pmf(k) over the full support.
Rational brute_force_expectation(const MultinomialSpec& spec,
                                 const std::function<Rational(const MultiIndex&)>& f,
                                 const EvalBudget& budget = {});

/// E[xi_1^(j_1) ... xi_d^(j_d)] = N^(sum j) prod p_i^{j_i}.
Rational factorial_moment(const MultinomialSpec& spec, const MultiIndex& orders);

/// E[prod_i (xi_i - N p_i)^{2m}], via the binomial/Stirling/factorial-moment
/// expansion (cost independent of N; the pmf brute force above is the
/// independent oracle for small N).
Rational central_mixed_moment(const MultinomialSpec& spec, unsigned m,
                              const EvalBudget& budget = {});

/// E[(xi - N p)^{2m}] through the one-dimensional expansion; a separate code
/// path from central_mixed_moment so the d = 1 agreement is a real check.
Rational central_moment_univariate(std::uint64_t trials, const Rational& p, unsigned m);

/// {E[prod (xi_i - N p_i)^{2m}] - prod_i E[(xi_i - N p_i)^{2m}]} / N^{md}.
Rational scaled_gap_finite(const MultinomialSpec& spec, unsigned m,
                           const EvalBudget& budget = {});

}  // namespace multinomial
}  // namespace gpimc
