#pragma once
#include <functional>
#include <string>
#include <vector>
#include "json.hpp"
#include "zslab/tame.hpp"

namespace zslab {

enum class Tier { Quick, Full };
// "quick" or "full"; anything else throws InvalidArgument.
Tier parse_tier(const std::string& text);
std::string tier_name(Tier tier);

struct SubCheck {
  std::string what;
  std::string expected;
  std::string observed;
  bool ok = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<SubCheck> checks;
  std::vector<std::string> skipped;  // parts left out in this tier
  double seconds = 0;
  double limit_seconds = 0;
  std::string error;  // set when the criterion threw
  bool within_limit() const { return seconds <= limit_seconds; }
  bool pass() const;
  nlohmann::json to_json(bool timing) const;
};

struct VerifyOptions {
  Tier tier = Tier::Quick;
  SearchOptions search;
  std::vector<int> only;  // criterion ids; empty runs all
};

// Runs the acceptance criteria in order. progress is called after each one.
std::vector<CriterionResult> verify_paper(const VerifyOptions& options,
                                          const std::function<void(const CriterionResult&)>& progress = {});

// One line: "PASS  3  global tame degrees ..." plus the failing sub-checks.
std::string format_result(const CriterionResult& r);

} // namespace zslab
