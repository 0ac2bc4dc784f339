#include "gpimc/combinatorics.hpp"

#include <stdexcept>
#include <vector>

namespace gpimc::comb {
namespace {

// Per-thread triangular tables: row n holds C(n, 0..n) resp. {n brace 0..n}.
struct Tables {
  unsigned cap = kDefaultTableCap;
  std::vector<std::vector<Integer>> binom;
  std::vector<std::vector<Integer>> stirling;

  void build() {
    binom.assign(cap + 1, {});
    stirling.assign(cap + 1, {});
    for (unsigned n = 0; n <= cap; ++n) {
      binom[n].assign(n + 1, 0);
      stirling[n].assign(n + 1, 0);
      binom[n][0] = binom[n][n] = 1;
      for (unsigned k = 1; k < n; ++k)
        binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
      if (n == 0) {
        stirling[0][0] = 1;
      } else {
        for (unsigned j = 1; j <= n; ++j) {
          stirling[n][j] = stirling[n - 1][j - 1];
          if (j <= n - 1) stirling[n][j] += Integer(j) * stirling[n - 1][j];
        }
      }
    }
  }
};

Tables& tables() {
  thread_local Tables t = [] {
    Tables fresh;
    fresh.build();
    return fresh;
  }();
  return t;
}

Integer binomial_direct(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// {k brace j} = (1/j!) sum_{i=0}^{j} (-1)^i C(j,i) (j-i)^k.
Integer stirling2_direct(unsigned k, unsigned j) {
  Integer acc = 0;
  for (unsigned i = 0; i <= j; ++i) {
    Integer term = binomial_direct(j, i) * pow_ui(Integer(j - i), k);
    if (i % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  Integer fact;
  mpz_fac_ui(fact.get_mpz_t(), j);
  return acc / fact;
}

}  // namespace

void set_table_cap(unsigned cap) {
  Tables& t = tables();
  t.cap = cap;
  t.build();
}

unsigned table_cap() { return tables().cap; }

Integer binomial(unsigned n, long k) {
  if (k < 0 || static_cast<unsigned long>(k) > n) return 0;
  const Tables& t = tables();
  if (n <= t.cap) return t.binom[n][static_cast<unsigned>(k)];
  return binomial_direct(n, static_cast<unsigned>(k));
}

Integer stirling2(unsigned k, long j) {
  if (j < 0 || static_cast<unsigned long>(j) > k) return 0;
  if (k == 0) return 1;  // j == 0 here
  if (j == 0) return 0;
  const Tables& t = tables();
  if (k <= t.cap) return t.stirling[k][static_cast<unsigned>(j)];
  return stirling2_direct(k, static_cast<unsigned>(j));
}

Integer double_factorial(long n) {
  if (n < -1 || (n >= 0 && n % 2 == 0))
    throw std::invalid_argument("double_factorial: defined here for odd n >= -1, got " +
                                std::to_string(n));
  Integer r = 1;
  for (long v = n; v >= 3; v -= 2) r *= Integer(v);
  return r;
}

Rational falling_factorial(const Rational& x, unsigned j) {
  Rational r = 1;
  for (unsigned t = 0; t < j; ++t) r *= x - Rational(static_cast<long>(t));
  return r;
}

Integer falling_factorial(const Integer& x, unsigned j) {
  Integer r = 1;
  for (unsigned t = 0; t < j; ++t) r *= x - Integer(static_cast<long>(t));
  return r;
}

void FallingFactorialExpansion::add(unsigned order, const Integer& coeff) {
  if (coeff == 0) return;
  Integer& slot = coeffs_[order];
  slot += coeff;
  if (slot == 0) coeffs_.erase(order);
}

Integer FallingFactorialExpansion::coefficient(unsigned order) const {
  auto it = coeffs_.find(order);
  return it == coeffs_.end() ? Integer(0) : it->second;
}

Rational FallingFactorialExpansion::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (const auto& [order, coeff] : coeffs_)
    acc += Rational(coeff) * falling_factorial(x, order);
  return acc;
}

Integer FallingFactorialExpansion::evaluate(const Integer& x) const {
  Integer acc = 0;
  for (const auto& [order, coeff] : coeffs_) acc += coeff * falling_factorial(x, order);
  return acc;
}

FallingFactorialExpansion monomial_to_falling(unsigned k) {
  FallingFactorialExpansion e;
  for (unsigned j = 0; j <= k; ++j) e.add(j, stirling2(k, static_cast<long>(j)));
  return e;
}

FallingFactorialExpansion falling_product_expand(unsigned j, unsigned jp) {
  FallingFactorialExpansion e;
  Integer lfact = 1;
  for (unsigned l = 0; l <= jp; ++l) {
    if (l > 0) lfact *= Integer(l);
    if (l > j) break;  // C(j, l) = 0 beyond
    e.add(j + jp - l,
          binomial(j, static_cast<long>(l)) * binomial(jp, static_cast<long>(l)) * lfact);
  }
  return e;
}

namespace {

std::uint64_t pair_recurse(std::vector<bool>& used,
                           std::vector<std::pair<unsigned, unsigned>>& acc,
                           unsigned n,
                           const std::function<void(std::span<const std::pair<unsigned, unsigned>>)>& visit) {
  unsigned a = n;
  for (unsigned i = 0; i < n; ++i) {
    if (!used[i]) {
      a = i;
      break;
    }
  }
  if (a == n) {
    visit(std::span<const std::pair<unsigned, unsigned>>(acc.data(), acc.size()));
    return 1;
  }
  used[a] = true;
  std::uint64_t count = 0;
  for (unsigned b = a + 1; b < n; ++b) {
    if (used[b]) continue;
    used[b] = true;
    acc.emplace_back(a, b);
    count += pair_recurse(used, acc, n, visit);
    acc.pop_back();
    used[b] = false;
  }
  used[a] = false;
  return count;
}

}  // namespace

std::uint64_t for_each_perfect_pairing(
    unsigned n,
    const std::function<void(std::span<const std::pair<unsigned, unsigned>>)>& visit) {
  if (n % 2 != 0) return 0;
  std::vector<bool> used(n, false);
  std::vector<std::pair<unsigned, unsigned>> acc;
  acc.reserve(n / 2);
  return pair_recurse(used, acc, n, visit);
}

}  // namespace gpimc::comb
