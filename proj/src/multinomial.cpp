#include "gpimc/multinomial.hpp"

#include <cstddef>
#include <numeric>
#include <stdexcept>

#include "gpimc/combinatorics.hpp"

namespace gpimc {

ProbVector::ProbVector(std::vector<Rational> entries, Boundary boundary)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("ProbVector: empty");
  Rational total = 0;
  for (const Rational& e : entries_) {
    if (sign(e) <= 0)
      throw std::invalid_argument("ProbVector: entry " + gpimc::to_string(e) + " not positive");
    total += e;
  }
  if (total > 1)
    throw std::invalid_argument("ProbVector: entries sum to " + gpimc::to_string(total) + " > 1");
  if (total == 1 && boundary == Boundary::Interior)
    throw std::invalid_argument("ProbVector: entries sum to 1; interior point required");
}

ProbVector ProbVector::parse(std::string_view csv, Boundary boundary) {
  std::vector<Rational> entries;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string_view::npos) comma = csv.size();
    std::string_view token = csv.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    entries.push_back(parse_rational(token));
    pos = comma + 1;
  }
  return ProbVector(std::move(entries), boundary);
}

Rational ProbVector::sum() const {
  Rational total = 0;
  for (const Rational& e : entries_) total += e;
  return total;
}

Rational ProbVector::remainder() const { return Rational(1) - sum(); }

bool ProbVector::on_boundary() const { return sum() == 1; }

std::string ProbVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0) out += ',';
    out += gpimc::to_string(entries_[i]);
  }
  return out;
}

MultinomialSpec::MultinomialSpec(std::uint64_t trials_in, ProbVector probs_in)
    : trials(trials_in), probs(std::move(probs_in)) {
  if (trials == 0) throw std::invalid_argument("MultinomialSpec: trials must be >= 1");
}

SupportRange::SupportRange(std::uint64_t trials, std::size_t dim)
    : trials_(trials), dim_(dim), current_(dim, 0) {
  if (dim == 0) throw std::invalid_argument("SupportRange: zero dimension");
}

bool SupportRange::next(MultiIndex& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    out = current_;
    return true;
  }
  // Colex odometer: bump the first position whose increment (with everything
  // before it reset to zero) keeps the total within the trial count.
  std::uint64_t tail = std::accumulate(current_.begin(), current_.end(), std::uint64_t{0});
  for (std::size_t i = 0; i < dim_; ++i) {
    tail -= static_cast<std::uint64_t>(current_[i]);
    if (tail + static_cast<std::uint64_t>(current_[i]) + 1 <= trials_) {
      for (std::size_t t = 0; t < i; ++t) current_[t] = 0;
      ++current_[i];
      out = current_;
      return true;
    }
  }
  done_ = true;
  return false;
}

void SupportRange::reset() {
  current_.assign(dim_, 0);
  started_ = false;
  done_ = false;
}

Integer SupportRange::count(std::uint64_t trials, std::size_t dim) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(trials + dim),
               static_cast<unsigned long>(dim));
  return r;
}

namespace multinomial {

Rational pmf(const MultinomialSpec& spec, const MultiIndex& counts) {
  const std::size_t d = spec.probs.dim();
  if (counts.size() != d)
    throw std::invalid_argument("pmf: counts dimension " + std::to_string(counts.size()) +
                                " != " + std::to_string(d));
  std::uint64_t total = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("pmf: negative count");
    total += static_cast<std::uint64_t>(c);
  }
  if (total > spec.trials) return 0;
  const std::uint64_t rest = spec.trials - total;

  const Rational rem = spec.probs.remainder();
  if (rem == 0 && rest > 0) return 0;

  // Multinomial coefficient as a product of binomials, left to right.
  Integer coeff = 1;
  std::uint64_t left = spec.trials;
  for (int c : counts) {
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(left),
                 static_cast<unsigned long>(c));
    coeff *= b;
    left -= static_cast<std::uint64_t>(c);
  }

  Rational value(coeff);
  for (std::size_t i = 0; i < d; ++i)
    value *= pow_ui(spec.probs[i], static_cast<unsigned long>(counts[i]));
  if (rest > 0) value *= pow_ui(rem, static_cast<unsigned long>(rest));
  return value;
}

Rational brute_force_expectation(const MultinomialSpec& spec,
                                 const std::function<Rational(const MultiIndex&)>& f,
                                 const EvalBudget& budget) {
  TermCounter counter(budget.max_terms, "brute_force_expectation");
  SupportRange range(spec.trials, spec.probs.dim());
  MultiIndex k;
  Rational acc = 0;
  while (range.next(k)) {
    counter.charge();
    acc += f(k) * pmf(spec, k);
  }
  return acc;
}

Rational factorial_moment(const MultinomialSpec& spec, const MultiIndex& orders) {
  const std::size_t d = spec.probs.dim();
  if (orders.size() != d)
    throw std::invalid_argument("factorial_moment: orders dimension mismatch");
  unsigned total = 0;
  for (int j : orders) {
    if (j < 0) throw std::invalid_argument("factorial_moment: negative order");
    total += static_cast<unsigned>(j);
  }
  Rational value(comb::falling_factorial(Integer(static_cast<unsigned long>(spec.trials)), total));
  for (std::size_t i = 0; i < d; ++i)
    value *= pow_ui(spec.probs[i], static_cast<unsigned long>(orders[i]));
  return value;
}

Rational central_mixed_moment(const MultinomialSpec& spec, unsigned m,
                              const EvalBudget& budget) {
  if (m == 0) throw std::invalid_argument("central_mixed_moment: m must be >= 1");
  const std::size_t d = spec.probs.dim();
  const unsigned two_m = 2 * m;
  TermCounter counter(budget.max_terms, "central_mixed_moment");

  // Binomial expansion of each (xi_i - N p_i)^{2m}, monomials converted to
  // falling factorials: per coordinate, A_i[j] collects everything that
  // multiplies xi_i^(j). Factorial moments then separate coordinates up to
  // the shared N^(sum j), handled by one convolution over sum j.
  std::vector<Rational> conv{1};
  for (std::size_t i = 0; i < d; ++i) {
    const Rational np = Rational(Integer(static_cast<unsigned long>(spec.trials))) * spec.probs[i];
    std::vector<Rational> a(two_m + 1, Rational(0));
    for (unsigned k = 0; k <= two_m; ++k) {
      const Rational outer = Rational(comb::binomial(two_m, static_cast<long>(k))) *
                             pow_ui(-np, two_m - k);
      for (unsigned j = (k == 0 ? 0 : 1); j <= k; ++j) {
        counter.charge();
        const Integer s2 = comb::stirling2(k, static_cast<long>(j));
        if (s2 == 0) continue;
        a[j] += outer * Rational(s2) * pow_ui(spec.probs[i], j);
      }
    }
    std::vector<Rational> next(conv.size() + two_m, Rational(0));
    for (std::size_t s = 0; s < conv.size(); ++s) {
      if (conv[s] == 0) continue;
      for (unsigned j = 0; j <= two_m; ++j) {
        counter.charge();
        if (a[j] == 0) continue;
        next[s + j] += conv[s] * a[j];
      }
    }
    conv = std::move(next);
  }

  Rational acc = 0;
  const Integer n(static_cast<unsigned long>(spec.trials));
  for (std::size_t s = 0; s < conv.size(); ++s) {
    if (conv[s] == 0) continue;
    acc += conv[s] * Rational(comb::falling_factorial(n, static_cast<unsigned>(s)));
  }
  return acc;
}

Rational central_moment_univariate(std::uint64_t trials, const Rational& p, unsigned m) {
  if (m == 0) throw std::invalid_argument("central_moment_univariate: m must be >= 1");
  if (sign(p) <= 0 || p >= 1)
    throw std::invalid_argument("central_moment_univariate: p must lie in (0,1)");
  const unsigned two_m = 2 * m;
  const Integer n(static_cast<unsigned long>(trials));
  const Rational np = Rational(n) * p;

  // Direct one-dimensional route: E[(xi - Np)^{2m}] =
  // sum_k C(2m,k) (-Np)^{2m-k} sum_j {k brace j} N^(j) p^j.
  Rational acc = 0;
  for (unsigned k = 0; k <= two_m; ++k) {
    Rational raw = 0;  // E[xi^k]
    for (unsigned j = 0; j <= k; ++j) {
      const Integer s2 = comb::stirling2(k, static_cast<long>(j));
      if (s2 == 0) continue;
      raw += Rational(s2 * comb::falling_factorial(n, j)) * pow_ui(p, j);
    }
    acc += Rational(comb::binomial(two_m, static_cast<long>(k))) * pow_ui(-np, two_m - k) * raw;
  }
  return acc;
}

Rational scaled_gap_finite(const MultinomialSpec& spec, unsigned m,
                           const EvalBudget& budget) {
  const std::size_t d = spec.probs.dim();
  Rational mixed = central_mixed_moment(spec, m, budget);
  Rational prod = 1;
  for (std::size_t i = 0; i < d; ++i)
    prod *= central_moment_univariate(spec.trials, spec.probs[i], m);
  const Rational n_pow = pow_ui(Rational(Integer(static_cast<unsigned long>(spec.trials))),
                                static_cast<unsigned long>(m) * d);
  return (mixed - prod) / n_pow;
}

}  // namespace multinomial
}  // namespace gpimc
