#include <doctest.h>

#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gpimc/combinatorics.hpp"
#include "gpimc/rational.hpp"

using namespace gpimc;
using namespace gpimc::comb;

TEST_CASE("binomial basics and out-of-range zeros") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(10, 5) == 252);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(5, 5) == 1);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(5, 7) == 0);
}

TEST_CASE("binomial beyond the memo cap uses the direct path") {
  REQUIRE(40 > table_cap());
  CHECK(binomial(40, 20) == Integer("137846528820"));
  CHECK(binomial(64, 32) == Integer("1832624140942590534"));
}

TEST_CASE("pascal recurrence and row sums") {
  for (unsigned n = 1; n <= 20; ++n) {
    Integer row_sum = 0;
    for (unsigned k = 0; k <= n; ++k) {
      CHECK(binomial(n, k) == binomial(n - 1, long(k) - 1) + binomial(n - 1, k));
      CHECK(binomial(n, k) == binomial(n, n - k));
      row_sum += binomial(n, k);
    }
    CHECK(row_sum == pow_ui(Integer(2), n));
  }
}

TEST_CASE("stirling2 small values") {
  CHECK(stirling2(0, 0) == 1);
  CHECK(stirling2(1, 0) == 0);
  CHECK(stirling2(1, 1) == 1);
  CHECK(stirling2(3, 1) == 1);
  CHECK(stirling2(3, 2) == 3);
  CHECK(stirling2(4, 2) == 7);
  CHECK(stirling2(5, 3) == 25);
  CHECK(stirling2(6, 3) == 90);
  CHECK(stirling2(6, 6) == 1);
  CHECK(stirling2(4, -1) == 0);
  CHECK(stirling2(4, 5) == 0);
}

TEST_CASE("stirling2 closed forms past the memo cap") {
  REQUIRE(table_cap() == kDefaultTableCap);
  // {k brace 2} = 2^{k-1} - 1 and {k brace k-1} = C(k, 2).
  CHECK(stirling2(17, 2) == 65535);
  CHECK(stirling2(18, 2) == 131071);
  CHECK(stirling2(17, 16) == 136);
  CHECK(stirling2(20, 1) == 1);
  CHECK(stirling2(20, 20) == 1);
}

TEST_CASE("shrinking the table cap keeps values identical") {
  std::vector<Integer> expect;
  for (unsigned k = 0; k <= 12; ++k)
    for (unsigned j = 0; j <= k; ++j) expect.push_back(stirling2(k, j));

  set_table_cap(4);
  CHECK(table_cap() == 4);
  std::size_t idx = 0;
  for (unsigned k = 0; k <= 12; ++k)
    for (unsigned j = 0; j <= k; ++j) CHECK(stirling2(k, j) == expect[idx++]);
  CHECK(binomial(10, 3) == 120);
  CHECK(stirling2(10, 3) == 9330);
  set_table_cap(kDefaultTableCap);
}

TEST_CASE("double factorial") {
  CHECK(double_factorial(-1) == 1);
  CHECK(double_factorial(1) == 1);
  CHECK(double_factorial(3) == 3);
  CHECK(double_factorial(5) == 15);
  CHECK(double_factorial(7) == 105);
  CHECK(double_factorial(11) == 10395);
  CHECK_THROWS_AS(double_factorial(4), std::invalid_argument);
  CHECK_THROWS_AS(double_factorial(0), std::invalid_argument);
  CHECK_THROWS_AS(double_factorial(-3), std::invalid_argument);
}

TEST_CASE("falling factorial") {
  CHECK(falling_factorial(Integer(6), 3) == 120);
  CHECK(falling_factorial(Integer(6), 0) == 1);
  CHECK(falling_factorial(Integer(2), 4) == 0);
  CHECK(falling_factorial(make_rational(5, 2), 3) == make_rational(15, 8));
  CHECK(falling_factorial(make_rational(-1, 2), 2) == make_rational(3, 4));
}

TEST_CASE("monomial to falling factorial expansion") {
  auto e3 = monomial_to_falling(3);
  CHECK(e3.coefficient(1) == 1);
  CHECK(e3.coefficient(2) == 3);
  CHECK(e3.coefficient(3) == 1);
  CHECK(e3.coefficient(0) == 0);

  for (unsigned k = 0; k <= 10; ++k) {
    auto e = monomial_to_falling(k);
    for (long x : {0L, 1L, 2L, 7L, -3L})
      CHECK(e.evaluate(Integer(x)) == pow_ui(Integer(x), k));
    Rational q = make_rational(9, 4);
    CHECK(e.evaluate(q) == pow_ui(q, k));
  }
}

TEST_CASE("product of falling factorials re-expanded") {
  auto e = falling_product_expand(1, 1);  // x^(1) x^(1) = x^(2) + x^(1)
  CHECK(e.coefficient(2) == 1);
  CHECK(e.coefficient(1) == 1);
  CHECK(e.coefficients().size() == 2);

  for (unsigned j = 0; j <= 5; ++j)
    for (unsigned jp = 0; jp <= 5; ++jp) {
      auto prod = falling_product_expand(j, jp);
      for (long x : {0L, 3L, 8L, -2L}) {
        Integer want = falling_factorial(Integer(x), j) * falling_factorial(Integer(x), jp);
        CHECK(prod.evaluate(Integer(x)) == want);
      }
    }
}

TEST_CASE("expansion drops zero coefficients") {
  FallingFactorialExpansion e;
  e.add(2, Integer(5));
  e.add(2, Integer(-5));
  CHECK(e.coefficients().empty());
  CHECK(e.coefficient(2) == 0);
}

TEST_CASE("perfect pairing enumeration") {
  std::vector<std::vector<std::pair<unsigned, unsigned>>> seen;
  auto visit = [&](std::span<const std::pair<unsigned, unsigned>> pairs) {
    seen.emplace_back(pairs.begin(), pairs.end());
  };

  CHECK(for_each_perfect_pairing(0, visit) == 1);
  CHECK(seen.size() == 1);
  CHECK(seen[0].empty());

  seen.clear();
  CHECK(for_each_perfect_pairing(4, visit) == 3);
  REQUIRE(seen.size() == 3);
  std::set<std::vector<std::pair<unsigned, unsigned>>> unique(seen.begin(), seen.end());
  CHECK(unique.size() == 3);
  for (const auto& pairing : seen) {
    REQUIRE(pairing.size() == 2);
    std::set<unsigned> used;
    for (auto [a, b] : pairing) {
      CHECK(a < b);
      used.insert(a);
      used.insert(b);
    }
    CHECK(used == std::set<unsigned>{0, 1, 2, 3});
  }

  seen.clear();
  CHECK(for_each_perfect_pairing(3, visit) == 0);
  CHECK(seen.empty());

  for (unsigned n = 2; n <= 10; n += 2) {
    std::uint64_t count = for_each_perfect_pairing(n, [](auto) {});
    CHECK(count == mpz_get_ui(double_factorial(long(n) - 1).get_mpz_t()));
  }
}
