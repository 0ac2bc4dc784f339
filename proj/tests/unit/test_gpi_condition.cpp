#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "gpimc/budget.hpp"
#include "gpimc/gpi_condition.hpp"
#include "gpimc/rational.hpp"

using namespace gpimc;
using namespace gpimc::condition;

namespace {

ProbVector pv(const char* csv) { return ProbVector::parse(csv); }

}  // namespace

TEST_CASE("variant names round-trip") {
  CHECK(to_string(ConstraintVariant::Equality) == "equality");
  CHECK(to_string(ConstraintVariant::Slack) == "slack");
  CHECK(variant_from_string("equality") == ConstraintVariant::Equality);
  CHECK(variant_from_string("slack") == ConstraintVariant::Slack);
  CHECK_THROWS_AS(variant_from_string("strict"), std::invalid_argument);
}

TEST_CASE("d=1 m=1 has exactly one admissible term") {
  for (ConstraintVariant v : {ConstraintVariant::Equality, ConstraintVariant::Slack}) {
    auto terms = constrained_terms(1, 1, v);
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].k == MultiIndex{2});
    CHECK(terms[0].j == MultiIndex{1});
    CHECK(terms[0].coefficient == 1);  // C(2,2) {2 brace 1} (-1)^2
    CHECK(terms[0].p_exponents == MultiIndex{1});
  }
}

TEST_CASE("d=2 m=1 has exactly one admissible term") {
  for (ConstraintVariant v : {ConstraintVariant::Equality, ConstraintVariant::Slack}) {
    auto terms = constrained_terms(2, 1, v);
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].k == MultiIndex{2, 2});
    CHECK(terms[0].j == MultiIndex{1, 1});
    CHECK(terms[0].coefficient == 1);
    CHECK(terms[0].p_exponents == MultiIndex{1, 1});
  }
}

TEST_CASE("admissible term counts") {
  auto count = [](unsigned d, unsigned m, ConstraintVariant v) {
    return constrained_terms(d, m, v).size();
  };
  CHECK(count(1, 2, ConstraintVariant::Equality) == 2);
  CHECK(count(1, 2, ConstraintVariant::Slack) == 3);
  CHECK(count(1, 3, ConstraintVariant::Equality) == 3);
  CHECK(count(1, 3, ConstraintVariant::Slack) == 6);
  CHECK(count(2, 2, ConstraintVariant::Equality) == 10);
  CHECK(count(2, 2, ConstraintVariant::Slack) == 15);
  CHECK(count(2, 3, ConstraintVariant::Equality) == 35);
  CHECK(count(2, 3, ConstraintVariant::Slack) == 70);
}

TEST_CASE("every emitted term is admissible") {
  for (ConstraintVariant v : {ConstraintVariant::Equality, ConstraintVariant::Slack}) {
    for (unsigned d = 1; d <= 2; ++d)
      for (unsigned m = 1; m <= 3; ++m) {
        for (const ConstrainedTerm& t : constrained_terms(d, m, v)) {
          int sum_k = 0, sum_j = 0;
          for (unsigned i = 0; i < d; ++i) {
            CHECK(t.k[i] >= 0);
            CHECK(t.k[i] <= int(2 * m));
            CHECK(t.j[i] <= t.k[i]);
            CHECK(t.p_exponents[i] == int(2 * m) - t.k[i] + t.j[i]);
            sum_k += t.k[i];
            sum_j += t.j[i];
          }
          CHECK(sum_k >= int(m * d));
          if (v == ConstraintVariant::Equality)
            CHECK(sum_j == sum_k - int(m * d));
          else
            CHECK(sum_j <= sum_k - int(m * d));
          CHECK(t.coefficient != 0);
        }
      }
  }
}

TEST_CASE("pruned enumeration matches the unpruned reference") {
  for (ConstraintVariant v : {ConstraintVariant::Equality, ConstraintVariant::Slack}) {
    for (unsigned d = 1; d <= 2; ++d)
      for (unsigned m = 1; m <= 3; ++m) {
        std::vector<ConstrainedTerm> pruned, reference;
        enumerate_constrained_terms(d, m, v,
                                    [&](const ConstrainedTerm& t) { pruned.push_back(t); });
        enumerate_constrained_terms_reference(
            d, m, v, [&](const ConstrainedTerm& t) { reference.push_back(t); });
        CHECK(pruned == reference);  // same terms, same order
      }
  }
}

TEST_CASE("terms stream in ascending lexicographic order") {
  auto key = [](const ConstrainedTerm& t) {
    std::vector<int> flat = t.k;
    flat.insert(flat.end(), t.j.begin(), t.j.end());
    return flat;
  };
  auto terms = constrained_terms(2, 3, ConstraintVariant::Slack);
  for (std::size_t i = 1; i < terms.size(); ++i) CHECK(key(terms[i - 1]) < key(terms[i]));
}

TEST_CASE("equality terms form a subsequence of slack terms") {
  auto equality = constrained_terms(2, 3, ConstraintVariant::Equality);
  auto slack = constrained_terms(2, 3, ConstraintVariant::Slack);
  std::size_t pos = 0;
  for (const ConstrainedTerm& t : equality) {
    while (pos < slack.size() && !(slack[pos] == t)) ++pos;
    REQUIRE(pos < slack.size());
    ++pos;
  }
}

TEST_CASE("diagonal product golden values") {
  CHECK(diagonal_product(pv("1/2,1/4"), 1) == make_rational(1, 8));
  CHECK(diagonal_product(pv("1/2"), 2) == make_rational(3, 4));  // sum factor 3, p^2 = 1/4
  CHECK(diagonal_product(pv("1/4,1/4"), 2) == make_rational(9, 256));
  CHECK(diagonal_product(pv("1/2"), 1) == make_rational(1, 2));
  CHECK(diagonal_product(pv("1/4,1/4,1/4"), 1) == make_rational(1, 64));
}

TEST_CASE("equality gap vanishes identically") {
  CHECK(theorem_gap(pv("1/2,1/4"), 1, ConstraintVariant::Equality) == 0);
  CHECK(theorem_gap(pv("1/4,1/4"), 2, ConstraintVariant::Equality) == 0);
  CHECK(theorem_gap(pv("1/2,1/4"), 2, ConstraintVariant::Equality) == 0);
  CHECK(theorem_gap(pv("1/3,1/6"), 3, ConstraintVariant::Equality) == 0);
  CHECK(theorem_gap(pv("1/5,1/5,1/5"), 2, ConstraintVariant::Equality) == 0);
  CHECK(theorem_gap(pv("2/5"), 4, ConstraintVariant::Equality) == 0);
}

TEST_CASE("slack gap golden values") {
  CHECK(theorem_gap(pv("1/4,1/4"), 1, ConstraintVariant::Slack) == 0);
  CHECK(theorem_gap(pv("1/4,1/4"), 2, ConstraintVariant::Slack) == make_rational(5, 32));
  CHECK(theorem_gap(pv("1/2,1/4"), 2, ConstraintVariant::Slack) == make_rational(13, 32));
  CHECK(theorem_gap(pv("1/4,1/4"), 3, ConstraintVariant::Slack) == make_rational(2117, 512));
}

TEST_CASE("slack gap in one dimension reduces to p beyond m = 1") {
  CHECK(theorem_gap(pv("2/5"), 1, ConstraintVariant::Slack) == 0);
  CHECK(theorem_gap(pv("2/5"), 2, ConstraintVariant::Slack) == make_rational(2, 5));
  CHECK(theorem_gap(pv("1/3"), 2, ConstraintVariant::Slack) == make_rational(1, 3));
  CHECK(theorem_gap(pv("1/3"), 3, ConstraintVariant::Slack) == make_rational(28, 9));
  CHECK(theorem_gap(pv("1/3"), 4, ConstraintVariant::Slack) == make_rational(856, 27));
  CHECK(theorem_gap(pv("1/3"), 5, ConstraintVariant::Slack) == make_rational(3829, 9));
}

TEST_CASE("gap is symmetric in the coordinates") {
  for (ConstraintVariant v : {ConstraintVariant::Equality, ConstraintVariant::Slack}) {
    CHECK(theorem_gap(pv("1/2,1/4"), 2, v) == theorem_gap(pv("1/4,1/2"), 2, v));
    CHECK(theorem_gap(pv("1/3,1/6,1/4"), 1, v) == theorem_gap(pv("1/6,1/4,1/3"), 1, v));
  }
}

TEST_CASE("equal probability specialization") {
  for (unsigned d = 1; d <= 3; ++d)
    for (unsigned m = 1; m <= 3; ++m) {
      Integer s = equal_p_sum(d, m);
      CHECK(s == 0);
      Rational p = make_rational(1, long(d) + 1);
      std::vector<Rational> entries(d, p);
      Rational gap = theorem_gap(ProbVector(entries), m, ConstraintVariant::Equality);
      CHECK(gap == Rational(s) * pow_ui(p, m * d));
    }
}

TEST_CASE("m = 0 is rejected") {
  CHECK_THROWS_AS(theorem_gap(pv("1/2"), 0, ConstraintVariant::Equality),
                  std::invalid_argument);
  CHECK_THROWS_AS(constrained_terms(2, 0, ConstraintVariant::Slack), std::invalid_argument);
  CHECK_THROWS_AS(diagonal_product(pv("1/2"), 0), std::invalid_argument);
  CHECK_THROWS_AS(equal_p_sum(2, 0), std::invalid_argument);
}

TEST_CASE("term budget bounds the enumeration") {
  EvalBudget tiny;
  tiny.max_terms = 4;
  CHECK_THROWS_AS(theorem_gap(pv("1/4,1/4"), 2, ConstraintVariant::Slack, tiny),
                  BudgetExceededError);
  CHECK_THROWS_AS(constrained_terms(2, 3, ConstraintVariant::Slack, tiny),
                  BudgetExceededError);
}
