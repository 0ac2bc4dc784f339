#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gpimc {

/// Caps for the exponential-size enumerations. Exceeding a cap raises
/// BudgetExceededError instead of approximating.
struct EvalBudget {
  std::uint64_t max_terms = 50'000'000;  // evaluated terms per call
  unsigned wick_degree_cap = 24;         // total moment degree for pairing sums
};

class BudgetExceededError : public std::runtime_error {
 public:
  explicit BudgetExceededError(const std::string& what) : std::runtime_error(what) {}
};

/// Charges work units against a limit; throws once the limit is crossed.
class TermCounter {
 public:
  TermCounter(std::uint64_t limit, const char* label) : limit_(limit), label_(label) {}

  void charge(std::uint64_t n = 1) {
    used_ += n;
    if (used_ > limit_)
      throw BudgetExceededError(std::string(label_) + ": term budget " +
                                std::to_string(limit_) + " exceeded");
  }

  std::uint64_t used() const noexcept { return used_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
  const char* label_;
};

}  // namespace gpimc
