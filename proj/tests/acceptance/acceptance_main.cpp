// Acceptance gate: one line per criterion, [PASS] or [FAIL], exit code equal
// to the number of failing criteria. The CLI path comes in as argv[1] so the
// determinism criterion can exercise the shipped binary end to end.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "gpimc/combinatorics.hpp"
#include "gpimc/gaussian.hpp"
#include "gpimc/gpi_condition.hpp"
#include "gpimc/multinomial.hpp"
#include "gpimc/rng.hpp"
#include "gpimc/sweep.hpp"

using namespace gpimc;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void fail(const std::string& why) {
    passed = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

struct Command {
  int exit_code = -1;
  std::string output;
};

Command run_command(const std::string& cmd) {
  Command result;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string quoted(const std::string& path) { return "'" + path + "'"; }

ProbVector pv(const char* csv) { return ProbVector::parse(csv); }

// ---- factorial-moment oracle equivalence -----------------------------------

void all_orders(unsigned d, int budget, MultiIndex& current,
                const std::function<void(const MultiIndex&)>& emit) {
  if (current.size() == d) {
    emit(current);
    return;
  }
  for (int j = 0; j <= budget; ++j) {
    current.push_back(j);
    all_orders(d, budget - j, current, emit);
    current.pop_back();
  }
}

Outcome factorial_moment_oracle() {
  Outcome outcome;
  const std::vector<ProbVector> points = {pv("2/5"), pv("1/2,1/4"), pv("9/10,1/20"),
                                          pv("1/3,1/3,1/6"), pv("1/6,1/6,1/6")};
  unsigned cases = 0;
  for (const ProbVector& p : points) {
    const unsigned d = static_cast<unsigned>(p.dim());
    for (std::uint64_t N = 1; N <= 4; ++N) {
      const MultinomialSpec spec(N, p);
      MultiIndex current;
      all_orders(d, 4, current, [&](const MultiIndex& orders) {
        const Rational direct = multinomial::factorial_moment(spec, orders);
        const Rational oracle = multinomial::brute_force_expectation(
            spec, [&](const MultiIndex& k) -> Rational {
              Rational prod = 1;
              for (std::size_t i = 0; i < k.size(); ++i)
                prod *= Rational(
                    comb::falling_factorial(Integer(k[i]), static_cast<unsigned>(orders[i])));
              return prod;
            });
        ++cases;
        if (direct != oracle)
          outcome.fail("p=" + p.to_string() + " N=" + std::to_string(N) +
                       ": closed form != pmf sum");
      });
    }
  }
  if (outcome.passed) outcome.detail = std::to_string(cases) + " cases, exact match";
  return outcome;
}

// ---- central-moment oracle equivalence --------------------------------------

Outcome central_moment_oracle() {
  Outcome outcome;
  const std::vector<ProbVector> points = {pv("2/5"), pv("1/8"), pv("1/2,1/4"),
                                          pv("9/10,1/20"), pv("1/3,1/2")};
  unsigned cases = 0;
  for (const ProbVector& p : points) {
    for (std::uint64_t N = 1; N <= 4; ++N) {
      const MultinomialSpec spec(N, p);
      for (unsigned m = 1; m <= 2; ++m) {
        const Rational direct = multinomial::central_mixed_moment(spec, m);
        const Rational oracle = multinomial::brute_force_expectation(
            spec, [&](const MultiIndex& k) -> Rational {
              Rational prod = 1;
              for (std::size_t i = 0; i < k.size(); ++i) {
                const Rational centered = Rational(k[i]) - Rational(Integer(N)) * p[i];
                prod *= pow_ui(centered, 2 * m);
              }
              return prod;
            });
        ++cases;
        if (direct != oracle)
          outcome.fail("p=" + p.to_string() + " N=" + std::to_string(N) +
                       " m=" + std::to_string(m) + ": expansion != pmf sum");
      }
    }
  }
  if (outcome.passed) outcome.detail = std::to_string(cases) + " cases, exact match";
  return outcome;
}

// ---- wick engine validation --------------------------------------------------

Outcome wick_engine() {
  Outcome outcome;
  for (const Rational& variance : {Rational(1), make_rational(3, 16), make_rational(7, 5)}) {
    CovMatrix cov(1);
    cov.set(0, 0, variance);
    for (unsigned m = 1; m <= 6; ++m) {
      const Rational want =
          Rational(comb::double_factorial(2 * long(m) - 1)) * pow_ui(variance, m);
      if (gaussian::wick_moment(cov, {int(2 * m)}) != want)
        outcome.fail("univariate moment m=" + std::to_string(m) + " variance " +
                     to_string(variance));
    }
  }

  const std::vector<MultiplicityVector> shapes = {{2}, {4}, {6}, {8}, {10}, {12},
                                                  {2, 2}, {4, 2}, {6, 6}, {4, 4, 4},
                                                  {2, 2, 2, 2, 2, 2}};
  for (const MultiplicityVector& mult : shapes) {
    CovMatrix ones(mult.size());
    for (std::size_t i = 0; i < mult.size(); ++i)
      for (std::size_t j = i; j < mult.size(); ++j) ones.set(i, j, Rational(1));
    long total = 0;
    for (int n : mult) total += n;
    if (gaussian::wick_moment(ones, mult) != comb::double_factorial(total - 1))
      outcome.fail("pairing count at total degree " + std::to_string(total));
  }

  if (gaussian::gpi_gap(pv("1/2,1/4"), 1) != make_rational(1, 32))
    outcome.fail("gap at p=(1/2,1/4), m=1 is not 1/32");

  if (outcome.passed)
    outcome.detail = "closed form m<=6, pairing counts to degree 12, pinned gap 1/32";
  return outcome;
}

// ---- clt convergence ----------------------------------------------------------

Outcome clt_convergence() {
  Outcome outcome;
  const Rational lo = make_rational(17, 10), hi = make_rational(23, 10);
  const std::vector<std::uint64_t> ns = {32, 64, 128, 256};
  const std::vector<std::pair<ProbVector, unsigned>> cases = {{pv("1/2,1/4"), 1},
                                                              {pv("1/4,1/4"), 2}};
  for (const auto& [p, m] : cases) {
    const ConvergenceTable table = run_convergence(p, m, ns);
    const std::string label = "p=" + p.to_string() + " m=" + std::to_string(m);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      if (!table.rows[i].scaled_gap || !table.rows[i].abs_error) {
        outcome.fail(label + ": row N=" + std::to_string(table.rows[i].N) + " not evaluated");
        continue;
      }
      if (i == 0) continue;
      const Rational prev = *table.rows[i - 1].abs_error;
      const Rational cur = *table.rows[i].abs_error;
      if (!(cur < prev))
        outcome.fail(label + ": error not decreasing at N=" + std::to_string(table.rows[i].N));
      if (cur == 0) continue;  // exact landing; ratio unbounded but convergence is done
      const Rational ratio = prev / cur;
      if (ratio < lo || ratio > hi)
        outcome.fail(label + ": ratio " + to_decimal(ratio) + " outside [1.7, 2.3] at N=" +
                     std::to_string(table.rows[i].N));
    }
  }
  if (outcome.passed)
    outcome.detail = "both pinned cases: errors halve over N in {32,64,128,256}";
  return outcome;
}

// ---- theorem-condition identities ---------------------------------------------

Outcome theorem_identities() {
  Outcome outcome;

  unsigned d1_violations = 0;
  std::string d1_witness;
  for (ConstraintVariant variant : {ConstraintVariant::Equality, ConstraintVariant::Slack}) {
    for (const Rational& p : {make_rational(1, 2), make_rational(1, 3), make_rational(2, 5),
                              make_rational(9, 10)}) {
      for (unsigned m = 1; m <= 5; ++m) {
        const Rational gap = condition::theorem_gap(ProbVector({p}), m, variant);
        if (gap != 0) {
          ++d1_violations;
          if (d1_witness.empty())
            d1_witness = std::string(to_string(variant)) + " m=" + std::to_string(m) +
                         " p=" + to_string(p) + " gives " + to_string(gap);
        }
      }
    }
  }
  std::string d1_status = "d=1 zero gap (both variants): ok";
  if (d1_violations > 0) {
    outcome.fail("d=1 gap nonzero in " + std::to_string(d1_violations) +
                 " of 40 cases, first: " + d1_witness);
    d1_status = "d=1 zero gap: slack variant violates for every m >= 2";
  }

  for (unsigned d = 1; d <= 3; ++d)
    for (unsigned m = 1; m <= 3; ++m) {
      const Integer s = condition::equal_p_sum(d, m);
      for (const Rational& p :
           {make_rational(1, 8), make_rational(1, long(d) + 1), make_rational(3, 17)}) {
        const std::vector<Rational> entries(d, p);
        const Rational gap =
            condition::theorem_gap(ProbVector(entries), m, ConstraintVariant::Equality);
        if (Rational(s) * pow_ui(p, m * d) != gap)
          outcome.fail("equal-p identity broken at d=" + std::to_string(d) +
                       " m=" + std::to_string(m) + " p=" + to_string(p));
      }
    }

  for (ConstraintVariant variant : {ConstraintVariant::Equality, ConstraintVariant::Slack})
    for (unsigned d = 1; d <= 2; ++d)
      for (unsigned m = 1; m <= 3; ++m) {
        std::vector<ConstrainedTerm> pruned, reference;
        condition::enumerate_constrained_terms(
            d, m, variant, [&](const ConstrainedTerm& t) { pruned.push_back(t); });
        condition::enumerate_constrained_terms_reference(
            d, m, variant, [&](const ConstrainedTerm& t) { reference.push_back(t); });
        if (pruned != reference)
          outcome.fail("pruned enumeration differs at d=" + std::to_string(d) +
                       " m=" + std::to_string(m) + " " + std::string(to_string(variant)));
      }

  outcome.detail += (outcome.detail.empty() ? "" : "; ");
  outcome.detail += d1_status + "; equal-p identity d<=3 m<=3: ok; pruned enumeration: ok";
  return outcome;
}

// ---- sign survey ---------------------------------------------------------------

Outcome sign_survey() {
  Outcome outcome;
  const std::uint64_t seed = 0x5349474e53ull;
  unsigned samples = 0, disagreements = 0;
  for (unsigned m = 1; m <= 3; ++m)
    for (unsigned d = 2; d <= 3; ++d)
      for (unsigned s = 0; s < 34; ++s) {
        SplitMix64 stream = cell_stream(seed, m, d, s);
        const ProbVector p =
            sample_simplex(d, SimplexSampler::UniformSimplex, 10'000, stream);
        ++samples;
        const Rational gaussian = gaussian::gpi_gap(p, m);
        if (gaussian < 0)
          outcome.fail("CONJECTURE VIOLATION: gaussian gap " + to_string(gaussian) +
                       " < 0 at m=" + std::to_string(m) + " p=" + p.to_string());
        for (ConstraintVariant variant :
             {ConstraintVariant::Equality, ConstraintVariant::Slack}) {
          const Rational theorem = condition::theorem_gap(p, m, variant);
          const bool disagree = (theorem < 0 && gaussian >= 0) || (theorem >= 0 && gaussian < 0);
          if (disagree) {
            ++disagreements;
            std::printf("[FINDING] sign-disagreement m=%u d=%u variant=%s p=%s theorem=%s "
                        "gaussian=%s\n",
                        m, d, std::string(to_string(variant)).c_str(), p.to_string().c_str(),
                        to_string(theorem).c_str(), to_string(gaussian).c_str());
          }
        }
      }
  if (outcome.passed)
    outcome.detail = std::to_string(samples) + " samples, every gaussian gap >= 0, " +
                     std::to_string(disagreements) + " sign disagreements";
  return outcome;
}

// ---- determinism ----------------------------------------------------------------

Outcome determinism(const std::string& cli) {
  Outcome outcome;
  const std::string base = quoted(cli) +
                           " sweep --m-max 2 --d-max 2 --samples 3 --seed 2026 --grid 1000"
                           " --finite-N 16";
  const Command first = run_command(base + " --workers 1");
  const Command second = run_command(base + " --workers 1");
  const Command wide = run_command(base + " --workers 4");
  if (first.exit_code != 0 || second.exit_code != 0 || wide.exit_code != 0)
    outcome.fail("sweep exited nonzero");
  if (first.output.empty()) outcome.fail("sweep produced no output");
  if (first.output != second.output) outcome.fail("two identical runs differ");
  if (first.output != wide.output) outcome.fail("worker count changed the bytes");

  const Command json_one = run_command(base + " --workers 1 --format json");
  const Command json_four = run_command(base + " --workers 4 --format json");
  if (json_one.exit_code != 0 || json_four.exit_code != 0)
    outcome.fail("json sweep exited nonzero");
  if (json_one.output != json_four.output) outcome.fail("json output differs across workers");

  if (outcome.passed)
    outcome.detail = "csv and json byte-identical across reruns and worker counts";
  return outcome;
}

struct Criterion {
  const char* name;
  double time_limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <cli-path> [--criterion N]\n", argv[0]);
    return 64;
  }
  const std::string cli = argv[1];
  int only = 0;
  for (int i = 2; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--criterion") only = std::atoi(argv[i + 1]);

  const std::array<Criterion, 7> criteria = {{
      {"factorial-moment oracle equivalence", 10.0, factorial_moment_oracle},
      {"central-moment oracle equivalence", 30.0, central_moment_oracle},
      {"wick engine validation", 60.0, wick_engine},
      {"clt convergence", 120.0, clt_convergence},
      {"theorem-condition identities", 60.0, theorem_identities},
      {"sign survey", 300.0, sign_survey},
      {"determinism", 120.0, [&cli] { return determinism(cli); }},
  }};

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && only != id) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = criteria[i].run();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criteria[i].time_limit_s)
      outcome.fail("took " + std::to_string(elapsed) + " s, limit " +
                   std::to_string(criteria[i].time_limit_s) + " s");
    std::printf("[%s] C%d %s (%.2f s) %s %s\n", outcome.passed ? "PASS" : "FAIL", id,
                criteria[i].name, elapsed, outcome.passed ? "-" : "!", outcome.detail.c_str());
    if (!outcome.passed) ++failures;
  }
  return failures;
}
