#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpimc/budget.hpp"
#include "gpimc/sweep.hpp"

namespace gpimc {

struct InvariantResult {
  std::string name;
  bool passed = false;
  std::string detail;  // on failure: what differed; on success: what was covered
};

struct VerifyOptions {
  std::uint64_t seed = 0x67706932'30323571ull;
  unsigned survey_samples_per_cell = 4;  // conjecture-watch sampling inside verify
  bool inject_stirling_fault = false;    // negative control for the harness itself
  EvalBudget budget{};
};

struct VerifyReport {
  std::vector<InvariantResult> invariants;  // hard checks; any failure fails verify
  std::vector<Finding> findings;            // soft observations, never affect ok()
  unsigned passed = 0;
  unsigned failed = 0;

  bool ok() const { return failed == 0; }
};

/// Runs the whole invariant battery across every module. Hard invariants
/// decide ok(); the conjecture watch and sign survey only add findings.
VerifyReport verify_all(const VerifyOptions& options = {});

std::string to_text(const VerifyReport& report);
std::string to_json(const VerifyReport& report);

}  // namespace gpimc
