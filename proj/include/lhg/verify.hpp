#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lhg/moments.hpp"

namespace lhg {

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0: no time limit
};

// criteria 1..10; the eleventh (rerun determinism) is checked on the CLI output
const std::vector<Criterion>& acceptance_criteria();
CheckReport run_criterion(int id);
std::vector<CheckReport> run_acceptance();
nlohmann::json reports_json(const std::vector<CheckReport>& reports);

// closed forms, duality and definitions for one family
CheckReport verify_family(const std::string& family, int max_n_finite, int max_n_infinite, const TruncSpec& trunc);

}  // namespace lhg
