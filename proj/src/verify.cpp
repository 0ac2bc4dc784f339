#include "gpimc/verify.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "gpimc/combinatorics.hpp"
#include "gpimc/gaussian.hpp"
#include "gpimc/gpi_condition.hpp"
#include "gpimc/multinomial.hpp"

namespace gpimc {
namespace {

using nlohmann::json;

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw CheckFailure(msg);
}

template <typename T>
void require_eq(const T& got, const T& want, const std::string& what) {
  if (!(got == want))
    throw CheckFailure(what + ": got " + to_string(got) + ", want " + to_string(want));
}

struct Battery {
  const VerifyOptions& options;
  VerifyReport report{};

  void run(const std::string& name, const std::function<std::string()>& body) {
    InvariantResult r;
    r.name = name;
    try {
      r.detail = body();
      r.passed = true;
      ++report.passed;
    } catch (const std::exception& e) {
      r.detail = e.what();
      r.passed = false;
      ++report.failed;
    }
    report.invariants.push_back(std::move(r));
  }
};

std::vector<ProbVector> permutations_of(const ProbVector& p) {
  std::vector<Rational> entries = p.entries();
  std::sort(entries.begin(), entries.end());
  std::vector<ProbVector> out;
  do {
    out.emplace_back(entries);
  } while (std::next_permutation(entries.begin(), entries.end()));
  return out;
}

}  // namespace

VerifyReport verify_all(const VerifyOptions& options) {
  Battery battery{options};
  const EvalBudget& budget = options.budget;

  battery.run("stirling-recurrence", [&] {
    const unsigned top = 20;
    // Independent local recurrence; the library values must match it.
    std::vector<std::vector<Integer>> local(top + 1);
    std::vector<std::vector<Integer>> lib(top + 1);
    for (unsigned k = 0; k <= top; ++k) {
      local[k].assign(k + 1, 0);
      lib[k].assign(k + 1, 0);
      for (unsigned j = 0; j <= k; ++j) lib[k][j] = comb::stirling2(k, j);
      if (k == 0) {
        local[0][0] = 1;
        continue;
      }
      for (unsigned j = 1; j <= k; ++j) {
        local[k][j] = local[k - 1][j - 1];
        if (j < k) local[k][j] += Integer(j) * local[k - 1][j];
      }
    }
    if (options.inject_stirling_fault) lib[8][3] += 1;  // negative-control hook
    for (unsigned k = 0; k <= top; ++k)
      for (unsigned j = 0; j <= k; ++j)
        require_eq(lib[k][j], local[k][j],
                   "{" + std::to_string(k) + " brace " + std::to_string(j) + "}");
    require(comb::stirling2(5, -1) == 0 && comb::stirling2(3, 4) == 0,
            "out-of-range Stirling arguments must give 0");
    return "recurrence and bounds for k <= " + std::to_string(top) +
           " (spans the memo-table cap)";
  });

  battery.run("binomial-pascal", [&] {
    const unsigned top = 20;
    std::vector<std::vector<Integer>> local(top + 1);
    for (unsigned n = 0; n <= top; ++n) {
      local[n].assign(n + 1, 1);
      for (unsigned k = 1; k < n; ++k) local[n][k] = local[n - 1][k - 1] + local[n - 1][k];
      Integer row_sum = 0;
      for (unsigned k = 0; k <= n; ++k) {
        require_eq(comb::binomial(n, k), local[n][k],
                   "C(" + std::to_string(n) + "," + std::to_string(k) + ")");
        require_eq(comb::binomial(n, k), comb::binomial(n, static_cast<long>(n) - k),
                   "symmetry C(n,k)=C(n,n-k)");
        row_sum += local[n][k];
      }
      require_eq(row_sum, pow_ui(Integer(2), n), "row sum 2^n");
    }
    require(comb::binomial(6, -2) == 0 && comb::binomial(6, 7) == 0,
            "out-of-range binomial arguments must give 0");
    return "Pascal recurrence, symmetry, row sums for n <= 20";
  });

  battery.run("monomial-falling-eval", [&] {
    const std::vector<Rational> points{Rational(-3), Rational(0), Rational(2), Rational(7),
                                       make_rational(5, 2), make_rational(-7, 3)};
    for (unsigned k = 0; k <= 10; ++k) {
      const auto expansion = comb::monomial_to_falling(k);
      for (const Rational& x : points)
        require_eq(expansion.evaluate(x), pow_ui(x, k),
                   "x^" + std::to_string(k) + " at x=" + to_string(x));
    }
    return "x^k = sum_j {k brace j} x^(j) for k <= 10 at 6 rational points";
  });

  battery.run("falling-product-expand", [&] {
    const std::vector<Rational> points{Rational(-2), Rational(3), make_rational(9, 4)};
    for (unsigned j = 0; j <= 5; ++j)
      for (unsigned jp = 0; jp <= 5; ++jp) {
        const auto expansion = comb::falling_product_expand(j, jp);
        for (const Rational& x : points)
          require_eq(expansion.evaluate(x),
                     Rational(comb::falling_factorial(x, j) * comb::falling_factorial(x, jp)),
                     "x^(" + std::to_string(j) + ") x^(" + std::to_string(jp) + ") at x=" +
                         to_string(x));
      }
    return "product identity for j, j' <= 5 at 3 rational points";
  });

  battery.run("double-factorial-pairings", [&] {
    for (unsigned n = 0; n <= 10; n += 2) {
      std::uint64_t visits = 0;
      bool well_formed = true;
      const std::uint64_t count = comb::for_each_perfect_pairing(n, [&](auto pairs) {
        ++visits;
        std::set<unsigned> seen;
        for (const auto& [a, b] : pairs) {
          if (a >= b) well_formed = false;
          seen.insert(a);
          seen.insert(b);
        }
        if (seen.size() != n) well_formed = false;
      });
      require(well_formed, "malformed pairing at n=" + std::to_string(n));
      const Integer expect = comb::double_factorial(static_cast<long>(n) - 1);
      require(Integer(static_cast<unsigned long>(count)) == expect &&
                  Integer(static_cast<unsigned long>(visits)) == expect,
              "pairing count at n=" + std::to_string(n) + " != " + to_string(Rational(expect)));
    }
    require(comb::for_each_perfect_pairing(5, [](auto) {}) == 0, "odd n must give 0 pairings");
    bool threw = false;
    try {
      comb::double_factorial(4);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    require(threw, "double_factorial(4) must be rejected");
    return "counts (n-1)!! for even n <= 10, structure, odd/even argument handling";
  });

  battery.run("factorial-moment-oracle", [&] {
    const std::vector<ProbVector> ps{ProbVector::parse("1/2,1/4"), ProbVector::parse("1/3,1/3"),
                                     ProbVector::parse("2/5")};
    unsigned cases = 0;
    for (const ProbVector& p : ps) {
      const unsigned d = static_cast<unsigned>(p.dim());
      for (std::uint64_t n = 1; n <= 3; ++n) {
        const MultinomialSpec spec(n, p);
        MultiIndex orders(d, 0);
        for (;;) {
          long total = 0;
          for (int j : orders) total += j;
          if (total <= 3) {
            const Rational via_law = multinomial::factorial_moment(spec, orders);
            const Rational via_pmf = multinomial::brute_force_expectation(
                spec,
                [&](const MultiIndex& k) {
                  Integer prod = 1;
                  for (unsigned i = 0; i < d; ++i)
                    prod *= comb::falling_factorial(Integer(k[i]),
                                                    static_cast<unsigned>(orders[i]));
                  return Rational(prod);
                },
                budget);
            require_eq(via_law, via_pmf, "factorial moment at N=" + std::to_string(n));
            ++cases;
          }
          unsigned i = 0;
          while (i < d && orders[i] == 3) orders[i++] = 0;
          if (i == d) break;
          ++orders[i];
        }
      }
    }
    return std::to_string(cases) + " (N, p, orders) cases vs pmf brute force, all exact";
  });

  battery.run("mean-centering", [&] {
    for (const char* pc : {"1/2,1/4", "1/3,1/6"}) {
      const ProbVector p = ProbVector::parse(pc);
      for (std::uint64_t n : {std::uint64_t{1}, std::uint64_t{3}}) {
        const MultinomialSpec spec(n, p);
        for (std::size_t i = 0; i < p.dim(); ++i) {
          MultiIndex e(p.dim(), 0);
          e[static_cast<std::size_t>(i)] = 1;
          require_eq(multinomial::factorial_moment(spec, e),
                     Rational(Rational(Integer(static_cast<unsigned long>(n))) * p[i]),
                     "E[xi_i] = N p_i");
          const Rational centered = multinomial::brute_force_expectation(
              spec,
              [&](const MultiIndex& k) -> Rational {
                return Rational(k[i]) - Rational(Integer(static_cast<unsigned long>(n))) * p[i];
              },
              budget);
          require_eq(centered, Rational(0), "E[xi_i - N p_i]");
        }
      }
    }
    return "first moments and exact centering for 2 p vectors, N in {1,3}";
  });

  battery.run("central-moment-oracle", [&] {
    const std::vector<ProbVector> ps{ProbVector::parse("1/2,1/4"), ProbVector::parse("1/3,1/6"),
                                     ProbVector::parse("2/5")};
    unsigned cases = 0;
    for (const ProbVector& p : ps)
      for (std::uint64_t n = 1; n <= 3; ++n)
        for (unsigned m = 1; m <= 2; ++m) {
          const MultinomialSpec spec(n, p);
          const Rational direct = multinomial::brute_force_expectation(
              spec,
              [&](const MultiIndex& k) {
                Rational prod = 1;
                for (std::size_t i = 0; i < p.dim(); ++i)
                  prod *= pow_ui(Rational(k[i]) -
                                     Rational(Integer(static_cast<unsigned long>(n))) * p[i],
                                 2 * m);
                return prod;
              },
              budget);
          require_eq(multinomial::central_mixed_moment(spec, m, budget), direct,
                     "central moment N=" + std::to_string(n) + " m=" + std::to_string(m));
          ++cases;
        }
    return std::to_string(cases) + " (N, p, m) cases vs pmf brute force, all exact";
  });

  battery.run("univariate-consistency", [&] {
    for (const char* pc : {"1/2", "3/10"})
      for (std::uint64_t n : {std::uint64_t{2}, std::uint64_t{5}, std::uint64_t{16}})
        for (unsigned m = 1; m <= 3; ++m) {
          const ProbVector p = ProbVector::parse(pc);
          require_eq(multinomial::central_moment_univariate(n, p[0], m),
                     multinomial::central_mixed_moment(MultinomialSpec(n, p), m, budget),
                     "univariate path at N=" + std::to_string(n));
        }
    return "one-dimensional route equals the mixed-moment route, N <= 16, m <= 3";
  });

  battery.run("clt-convergence", [&] {
    const ProbVector p = ProbVector::parse("1/2,1/4");
    const auto table = run_convergence(p, 1, {8, 16, 32}, budget);
    require_eq(table.limit, make_rational(1, 32), "gaussian limit");
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
      require(table.rows[i].abs_error && table.rows[i - 1].abs_error, "missing row");
      require(*table.rows[i].abs_error < *table.rows[i - 1].abs_error,
              "error not decreasing at N=" + std::to_string(table.rows[i].N));
    }
    return "errors strictly decrease over N in {8,16,32} toward 1/32";
  });

  battery.run("convergence-d1-exact", [&] {
    const auto table = run_convergence(ProbVector::parse("1/2"), 2, {4, 8}, budget);
    require_eq(table.limit, Rational(0), "d=1 limit");
    for (const auto& row : table.rows) {
      require(row.abs_error.has_value(), "missing row");
      require_eq(*row.abs_error, Rational(0), "d=1 error at N=" + std::to_string(row.N));
    }
    return "one-dimensional gaps vanish for every N";
  });

  battery.run("covariance-structure", [&] {
    const ProbVector p = ProbVector::parse("1/4,1/4,1/4");
    const CovMatrix cov = CovMatrix::from_prob(p);
    for (std::size_t i = 0; i < 3; ++i) {
      require_eq(cov.at(i, i), Rational(p[i] - p[i] * p[i]), "diagonal entry");
      for (std::size_t j = 0; j < 3; ++j) {
        if (i == j) continue;
        require_eq(cov.at(i, j), Rational(-(p[i] * p[j])), "off-diagonal entry");
        require(sign(cov.at(i, j)) < 0, "off-diagonal must be negative");
      }
    }
    const CovMatrix c2 = CovMatrix::from_prob(ProbVector::parse("1/2,1/4"));
    require_eq(c2.at(0, 0), make_rational(1, 4), "sigma_11");
    require_eq(c2.at(0, 1), make_rational(-1, 8), "sigma_12");
    require_eq(c2.at(1, 1), make_rational(3, 16), "sigma_22");
    return "diag(p) - p p^T, symmetry, negative off-diagonals";
  });

  battery.run("wick-closed-form", [&] {
    for (const Rational& v : {Rational(1), make_rational(3, 16)})
      for (unsigned m = 1; m <= 6; ++m) {
        CovMatrix cov(1);
        cov.set(0, 0, v);
        require_eq(gaussian::wick_moment(cov, {static_cast<int>(2 * m)}, budget),
                   gaussian::univariate_even_moment(v, m),
                   "d=1 moment m=" + std::to_string(m));
      }
    return "d=1 pairing recursion equals (2m-1)!! sigma^{2m} for m <= 6";
  });

  battery.run("wick-pairing-count", [&] {
    for (const MultiplicityVector& mult :
         {MultiplicityVector{12}, MultiplicityVector{6, 6}, MultiplicityVector{2, 2, 2},
          MultiplicityVector{4, 4}, MultiplicityVector{2, 4}}) {
      CovMatrix ones(mult.size());
      for (std::size_t i = 0; i < mult.size(); ++i)
        for (std::size_t j = i; j < mult.size(); ++j) ones.set(i, j, Rational(1));
      long total = 0;
      for (int v : mult) total += v;
      require_eq(gaussian::wick_moment(ones, mult, budget),
                 Rational(comb::double_factorial(total - 1)), "all-ones covariance count");
    }
    return "wick_moment on all-ones covariance counts pairings, total degree <= 12";
  });

  battery.run("wick-independence", [&] {
    CovMatrix diag(3);
    const std::vector<Rational> vars{make_rational(1, 4), make_rational(3, 16),
                                     make_rational(2, 9)};
    for (std::size_t i = 0; i < 3; ++i) diag.set(i, i, vars[i]);
    for (const MultiplicityVector& mult :
         {MultiplicityVector{2, 4, 2}, MultiplicityVector{4, 0, 2},
          MultiplicityVector{2, 2, 2}}) {
      Rational expect = 1;
      for (std::size_t i = 0; i < 3; ++i)
        expect *= gaussian::univariate_even_moment(vars[i],
                                                   static_cast<unsigned>(mult[i]) / 2);
      require_eq(gaussian::wick_moment(diag, mult, budget), expect,
                 "diagonal covariance factorization");
    }
    return "independent coordinates factor into univariate even moments";
  });

  battery.run("wick-memo-vs-enumerated", [&] {
    const std::vector<ProbVector> ps{ProbVector::parse("1/2,1/4"),
                                     ProbVector::parse("1/2,1/4,1/5")};
    unsigned cases = 0;
    for (const ProbVector& p : ps) {
      const CovMatrix cov = CovMatrix::from_prob(p);
      std::vector<MultiplicityVector> mults;
      if (p.dim() == 2)
        mults = {{2, 2}, {4, 2}, {4, 4}, {1, 3}, {0, 2}};
      else
        mults = {{2, 2, 2}, {4, 2, 2}, {2, 0, 4}};
      for (const MultiplicityVector& mult : mults) {
        require_eq(gaussian::wick_moment(cov, mult, budget),
                   gaussian::wick_moment_enumerated(cov, mult, budget),
                   "memoized vs enumerated pairing");
        ++cases;
      }
    }
    return std::to_string(cases) + " multiplicity patterns agree across both engines";
  });

  battery.run("gaussian-gap-values", [&] {
    require_eq(gaussian::gpi_gap(ProbVector::parse("1/2,1/4"), 1, budget), make_rational(1, 32),
               "gap at (1/2,1/4), m=1");
    for (const char* pc : {"1/3,1/5", "2/7,3/11"}) {
      const ProbVector p = ProbVector::parse(pc);
      require_eq(gaussian::gpi_gap(p, 1, budget),
                 Rational(2 * pow_ui(p[0], 2) * pow_ui(p[1], 2)), "gap = 2 p1^2 p2^2");
    }
    for (const char* pc : {"1/2", "2/5"})
      for (unsigned m = 1; m <= 3; ++m)
        require_eq(gaussian::gpi_gap(ProbVector::parse(pc), m, budget), Rational(0),
                   "d=1 gap must vanish");
    return "closed forms at d <= 2 and the d=1 degeneracy";
  });

  battery.run("gaussian-gap-symmetry", [&] {
    for (unsigned m = 1; m <= 2; ++m) {
      const auto perms = permutations_of(ProbVector::parse("1/2,1/4,1/8"));
      const Rational base = gaussian::gpi_gap(perms.front(), m, budget);
      for (const ProbVector& p : perms)
        require_eq(gaussian::gpi_gap(p, m, budget), base, "permutation changed the gap");
    }
    return "gap invariant under all relabelings of (1/2,1/4,1/8), m <= 2";
  });

  battery.run("diagonal-product-values", [&] {
    require_eq(condition::diagonal_product(ProbVector::parse("1/2,1/4"), 1),
               make_rational(1, 8), "m=1, p=(1/2,1/4)");
    require_eq(condition::diagonal_product(ProbVector::parse("1/2"), 2), make_rational(3, 4),
               "m=2, p=(1/2)");
    require_eq(condition::diagonal_product(ProbVector::parse("1/4,1/4,1/4"), 1),
               make_rational(1, 64), "m=1, d=3");
    return "pinned diagonal products";
  });

  battery.run("d1-degeneracy-equality", [&] {
    for (const char* pc : {"1/2", "1/3", "2/5", "9/10"})
      for (unsigned m = 1; m <= 5; ++m)
        require_eq(condition::theorem_gap(ProbVector::parse(pc), m,
                                          ConstraintVariant::Equality, budget),
                   Rational(0), std::string("d=1 equality gap at p=") + pc +
                                    " m=" + std::to_string(m));
    return "equality-variant gap is identically 0 at d=1 for m <= 5";
  });

  battery.run("equal-p-identity", [&] {
    unsigned cases = 0;
    for (unsigned d = 1; d <= 3; ++d)
      for (unsigned m = 1; m <= 3; ++m) {
        const Integer coeff = condition::equal_p_sum(d, m, budget);
        std::vector<Rational> values{make_rational(1, 8), make_rational(1, d + 1),
                                     make_rational(1, 4)};
        for (const Rational& pv : values) {
          if (pv * static_cast<int>(d) >= 1) continue;
          std::vector<Rational> entries(d, pv);
          const ProbVector p(entries);
          require_eq(condition::theorem_gap(p, m, ConstraintVariant::Equality, budget),
                     Rational(Rational(coeff) * pow_ui(pv, static_cast<unsigned long>(m) * d)),
                     "equal-p identity d=" + std::to_string(d) + " m=" + std::to_string(m) +
                         " p=" + to_string(pv));
          ++cases;
        }
      }
    return std::to_string(cases) + " equal-p identities hold exactly (d <= 3, m <= 3)";
  });

  battery.run("pruned-vs-unpruned", [&] {
    unsigned cases = 0;
    for (unsigned d = 1; d <= 2; ++d)
      for (unsigned m = 1; m <= 3; ++m)
        for (ConstraintVariant v : {ConstraintVariant::Equality, ConstraintVariant::Slack}) {
          const auto pruned = condition::constrained_terms(d, m, v, budget);
          std::vector<ConstrainedTerm> reference;
          condition::enumerate_constrained_terms_reference(
              d, m, v, [&](const ConstrainedTerm& t) { reference.push_back(t); }, budget);
          require(pruned == reference,
                  "pruned stream differs from the box filter at d=" + std::to_string(d) +
                      " m=" + std::to_string(m) + " variant=" + std::string(to_string(v)) +
                      " (" + std::to_string(pruned.size()) + " vs " +
                      std::to_string(reference.size()) + " terms)");
          ++cases;
        }
    return std::to_string(cases) + " (d, m, variant) streams identical, order included";
  });

  battery.run("variant-containment", [&] {
    for (unsigned d = 1; d <= 2; ++d)
      for (unsigned m = 1; m <= 3; ++m) {
        const auto eq = condition::constrained_terms(d, m, ConstraintVariant::Equality, budget);
        const auto slack = condition::constrained_terms(d, m, ConstraintVariant::Slack, budget);
        std::size_t pos = 0;
        for (const ConstrainedTerm& t : eq) {
          while (pos < slack.size() && !(slack[pos].k == t.k && slack[pos].j == t.j)) ++pos;
          require(pos < slack.size(),
                  "equality term missing from slack set at d=" + std::to_string(d) + " m=" +
                      std::to_string(m));
          ++pos;
        }
      }
    return "equality term set is a subset of the slack term set (d <= 2, m <= 3)";
  });

  battery.run("theorem-gap-symmetry", [&] {
    for (unsigned m = 1; m <= 2; ++m)
      for (ConstraintVariant v : {ConstraintVariant::Equality, ConstraintVariant::Slack}) {
        const auto perms = permutations_of(ProbVector::parse("1/2,1/4,1/8"));
        const Rational base = condition::theorem_gap(perms.front(), m, v, budget);
        for (const ProbVector& p : perms)
          require_eq(condition::theorem_gap(p, m, v, budget), base,
                     "permutation changed theorem gap, variant=" + std::string(to_string(v)));
      }
    return "both variants invariant under relabeling of (1/2,1/4,1/8), m <= 2";
  });

  battery.run("sample-simplex-contract", [&] {
    unsigned draws = 0;
    for (SimplexSampler sampler :
         {SimplexSampler::UniformSimplex, SimplexSampler::DirichletRamp})
      for (unsigned d : {1u, 2u, 4u})
        for (unsigned grid : {12u, 1000u})
          for (unsigned sample = 0; sample < 3; ++sample) {
            SplitMix64 s1 = cell_stream(options.seed, 1, d, sample);
            SplitMix64 s2 = cell_stream(options.seed, 1, d, sample);
            const ProbVector p = sample_simplex(d, sampler, grid, s1);
            const ProbVector again = sample_simplex(d, sampler, grid, s2);
            require(p.entries() == again.entries(), "same stream must reproduce the draw");
            const Rational floor = make_rational(1, grid);
            for (std::size_t i = 0; i < p.dim(); ++i) {
              require(p[i] >= floor, "entry below 1/grid");
              Integer rem;
              mpz_fdiv_r(rem.get_mpz_t(), Integer(grid).get_mpz_t(),
                         p[i].get_den().get_mpz_t());
              require(rem == 0, "denominator does not divide the grid");
            }
            require(p.sum() <= Rational(1) - floor, "sum exceeds 1 - 1/grid");
            ++draws;
          }
    return std::to_string(draws) + " draws respect the grid bounds and reproduce bit-exactly";
  });

  battery.run("sweep-determinism", [&] {
    SweepConfig config;
    config.m_max = 2;
    config.d_max = 2;
    config.samples_per_cell = 2;
    config.denominator_grid = 100;
    config.seed = options.seed;
    config.finite_N = {8};
    config.budget = budget;
    config.workers = 1;
    const SweepResult a = run_sweep(config);
    config.workers = 3;
    const SweepResult b = run_sweep(config);
    require(to_csv(a) == to_csv(b), "CSV differs across worker counts");
    require(to_json(a) == to_json(b), "JSON differs across worker counts");
    const SweepResult c = run_sweep(config);
    require(to_csv(b) == to_csv(c), "CSV differs across repeated runs");
    return "byte-identical CSV and JSON across reruns and worker counts";
  });

  battery.run("budget-discipline", [&] {
    EvalBudget tiny;
    tiny.max_terms = 10;
    bool threw = false;
    try {
      multinomial::brute_force_expectation(MultinomialSpec(4, ProbVector::parse("1/2,1/4")),
                                           [](const MultiIndex&) { return Rational(1); }, tiny);
    } catch (const BudgetExceededError&) {
      threw = true;
    }
    require(threw, "brute force ignored the term budget");
    threw = false;
    try {
      condition::theorem_gap(ProbVector::parse("1/4,1/4"), 2, ConstraintVariant::Slack, tiny);
    } catch (const BudgetExceededError&) {
      threw = true;
    }
    require(threw, "constrained enumeration ignored the term budget");
    EvalBudget low_degree;
    low_degree.wick_degree_cap = 4;
    threw = false;
    try {
      gaussian::wick_moment(CovMatrix::from_prob(ProbVector::parse("1/2,1/4")), {4, 2},
                            low_degree);
    } catch (const BudgetExceededError&) {
      threw = true;
    }
    require(threw, "wick engine ignored the degree cap");
    return "all engines raise BudgetExceededError at their caps";
  });

  // Soft observations: a small seeded survey. Findings only, never failures.
  {
    SweepConfig survey;
    survey.m_max = 2;
    survey.d_max = 3;
    survey.samples_per_cell = std::max(1u, options.survey_samples_per_cell);
    survey.denominator_grid = 1000;
    survey.seed = options.seed;
    survey.budget = budget;
    try {
      const SweepResult result = run_sweep(survey);
      unsigned negative_gaussian = 0;
      unsigned disagreements = 0;
      for (const Finding& f : result.findings) {
        if (f.kind == "conjecture-watch") ++negative_gaussian;
        if (f.kind == "sign-disagreement") ++disagreements;
        battery.report.findings.push_back(f);
      }
      battery.report.findings.push_back(
          Finding{"sign-survey", survey.m_max, survey.d_max, 0, "",
                  std::to_string(result.records.size()) + " records, " +
                      std::to_string(negative_gaussian) + " negative gaussian gaps, " +
                      std::to_string(disagreements) + " sign disagreements"});
    } catch (const std::exception& e) {
      battery.report.findings.push_back(
          Finding{"sign-survey", 0, 0, 0, "", std::string("survey aborted: ") + e.what()});
    }
  }

  return std::move(battery.report);
}

std::string to_text(const VerifyReport& report) {
  std::ostringstream out;
  for (const InvariantResult& r : report.invariants)
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " - " << r.detail << '\n';
  for (const Finding& f : report.findings)
    out << "[FINDING] " << f.kind << " - " << f.detail << '\n';
  out << "invariants run: " << report.invariants.size() << ", passed: " << report.passed
      << ", failed: " << report.failed << ", findings: " << report.findings.size() << '\n';
  return out.str();
}

std::string to_json(const VerifyReport& report) {
  json invariants = json::array();
  for (const InvariantResult& r : report.invariants)
    invariants.push_back(json{{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  json findings = json::array();
  for (const Finding& f : report.findings)
    findings.push_back(json{{"kind", f.kind},
                            {"m", f.m},
                            {"d", f.d},
                            {"sample", f.sample},
                            {"variant", f.variant},
                            {"detail", f.detail}});
  json doc{{"invariants", invariants},
           {"findings", findings},
           {"passed", report.passed},
           {"failed", report.failed},
           {"ok", report.failed == 0}};
  return doc.dump(2) + '\n';
}

}  // namespace gpimc
