#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lepage {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

inline constexpr int kAcceptanceCriteria = 11;

/// Runs one acceptance criterion (1..11); exceptions become failures.
CriterionResult run_criterion(int id, std::uint64_t seed = 1);
std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 1);

}  // namespace lepage
