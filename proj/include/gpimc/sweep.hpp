#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gpimc/budget.hpp"
#include "gpimc/gpi_condition.hpp"
#include "gpimc/multinomial.hpp"
#include "gpimc/rational.hpp"
#include "gpimc/rng.hpp"

namespace gpimc {

enum class SimplexSampler { UniformSimplex, DirichletRamp, FixedList };

std::string_view to_string(SimplexSampler s);
SimplexSampler sampler_from_string(std::string_view s);  // uniform | dirichlet-ramp | fixed

struct SweepConfig {
  unsigned m_max = 1;
  unsigned d_max = 1;
  unsigned samples_per_cell = 25;
  SimplexSampler sampler = SimplexSampler::UniformSimplex;
  unsigned denominator_grid = 10'000;
  std::uint64_t seed = 0;
  std::vector<ConstraintVariant> variants = {ConstraintVariant::Equality,
                                             ConstraintVariant::Slack};
  bool oracle = true;                    // evaluate the Gaussian limit gap too
  std::vector<std::uint64_t> finite_N;   // optional finite-trials diagnostics
  std::vector<ProbVector> fixed_points;  // required for FixedList, cycled per sample
  unsigned workers = 1;
  bool timings = false;  // off by default: wall times would break byte determinism
  EvalBudget budget{};
};

/// One evaluated (m, d, sample, variant) cell entry. Sign flags come from the
/// exact rationals; the float renderings are display-only.
struct GapRecord {
  GapRecord(unsigned m_in, unsigned d_in, unsigned sample_in,
            ConstraintVariant variant_in, ProbVector p_in)
      : m(m_in), d(d_in), sample(sample_in), variant(variant_in),
        p(std::move(p_in)) {}

  unsigned m;
  unsigned d;
  unsigned sample;
  ConstraintVariant variant;
  ProbVector p;
  std::optional<Rational> theorem_gap;
  std::optional<Rational> gaussian_gap;
  std::vector<std::pair<std::uint64_t, Rational>> finite_gaps;  // (N, scaled gap)
  std::string note;  // e.g. budget exhaustion; empty when clean
  double wall_ms = 0.0;

  int theorem_sign() const;   // -1/0/+1; 2 when the value is missing
  int gaussian_sign() const;
  bool sign_agree() const;    // both known and not of strictly opposite sign
};

struct Finding {
  std::string kind;  // sign-disagreement | conjecture-watch | budget
  unsigned m = 0;
  unsigned d = 0;
  unsigned sample = 0;
  std::string variant;  // empty when not variant-specific
  std::string detail;
};

struct SweepResult {
  SweepConfig config;
  std::vector<GapRecord> records;  // (m, d, sample, variant) ascending
  std::vector<Finding> findings;
};

/// Draws one exact grid point of the open simplex: every entry is a multiple
/// of 1/grid, p_i >= 1/grid, and sum(p) <= 1 - 1/grid. UniformSimplex draws a
/// uniform composition of the grid into d+1 positive parts; DirichletRamp
/// draws Dirichlet(1, 2, ..., d+1) in floating point, snaps to the grid by
/// largest remainder, then repairs positivity. FixedList is not a draw and is
/// rejected here.
ProbVector sample_simplex(unsigned d, SimplexSampler sampler,
                          unsigned denominator_grid, SplitMix64& stream);

/// Runs the full (m, d, sample, variant) grid. Cells are evaluated by up to
/// config.workers threads; records and findings are emitted in deterministic
/// order regardless of worker count. Budget exhaustion is recorded in the
/// affected record, not thrown.
SweepResult run_sweep(const SweepConfig& config);

std::string to_csv(const SweepResult& result);
std::string to_json(const SweepResult& result);

struct ConvergenceRow {
  std::uint64_t N = 0;
  std::optional<Rational> scaled_gap;
  std::optional<Rational> abs_error;     // |scaled_gap - limit|
  std::optional<double> error_ratio;     // previous error / this error
  std::string note;                      // "skipped: ..." when budget ran out
};

struct ConvergenceTable {
  ConvergenceTable(ProbVector p_in, unsigned m_in, Rational limit_in)
      : p(std::move(p_in)), m(m_in), limit(std::move(limit_in)) {}

  ProbVector p;
  unsigned m;
  Rational limit;  // gaussian gpi gap
  std::vector<ConvergenceRow> rows;
};

ConvergenceTable run_convergence(const ProbVector& p, unsigned m,
                                 const std::vector<std::uint64_t>& N_list,
                                 const EvalBudget& budget = {});

std::string to_csv(const ConvergenceTable& table);
std::string to_json(const ConvergenceTable& table);

}  // namespace gpimc
