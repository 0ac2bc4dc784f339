#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>

#include "gpimc/rational.hpp"

namespace gpimc::comb {

/// Memo tables cover arguments up to this cap by default (2*m for m <= 8);
/// larger arguments fall back to direct evaluation.
inline constexpr unsigned kDefaultTableCap = 16;

/// Resizes the calling thread's memo tables. Tables are per-thread, so
/// concurrent sweep workers never contend.
void set_table_cap(unsigned cap);
unsigned table_cap();

/// C(n, k); 0 when k < 0 or k > n.
Integer binomial(unsigned n, long k);

/// Stirling number of the second kind {k brace j}; 0 when j < 0 or j > k,
/// and {0 brace 0} = 1.
Integer stirling2(unsigned k, long j);

/// n!! for odd n >= -1, with (-1)!! = 1. Throws std::invalid_argument for
/// even n or n < -1.
Integer double_factorial(long n);

/// x^(j) = x (x-1) ... (x-j+1), with x^(0) = 1.
Rational falling_factorial(const Rational& x, unsigned j);
Integer falling_factorial(const Integer& x, unsigned j);

/// Finite integer combination of falling factorials sum_r c_r x^(r).
class FallingFactorialExpansion {
 public:
  /// Accumulates into the order-r coefficient; zero entries are dropped.
  void add(unsigned order, const Integer& coeff);

  /// 0 when the order is absent.
  Integer coefficient(unsigned order) const;

  const std::map<unsigned, Integer>& coefficients() const noexcept { return coeffs_; }

  Rational evaluate(const Rational& x) const;
  Integer evaluate(const Integer& x) const;

  bool operator==(const FallingFactorialExpansion&) const = default;

 private:
  std::map<unsigned, Integer> coeffs_;
};

/// x^k = sum_j {k brace j} x^(j).
FallingFactorialExpansion monomial_to_falling(unsigned k);

/// x^(j) x^(jp) = sum_{l=0}^{jp} x^(j+jp-l) C(j,l) C(jp,l) l!.
FallingFactorialExpansion falling_product_expand(unsigned j, unsigned jp);

/// Visits every perfect pairing of {0, ..., n-1} exactly once; each visit
/// receives the n/2 pairs (a, b) with a < b. Returns the number of pairings:
/// (n-1)!! for even n, 1 for n == 0, and 0 for odd n (no visits).
std::uint64_t for_each_perfect_pairing(
    unsigned n,
    const std::function<void(std::span<const std::pair<unsigned, unsigned>>)>& visit);

}  // namespace gpimc::comb
