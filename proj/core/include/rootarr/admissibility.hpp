#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rootarr/arrangement.hpp"

namespace rootarr {

enum class Condition { RolleChain1, CondA, CondB, CondC, Prop1Part1, Prop1Part2, Counts };

const char* condition_name(Condition c);

struct Violation {
  Condition condition = Condition::Counts;
  // Chain indices l (1-based) for RolleChain1 and CondC, 0-based position
  // indices for the multiplicity conditions, empty for Counts.
  std::vector<int> indices;
  std::string message;
};

struct AdmissibilityReport {
  bool verdict = false;
  std::optional<RolleAssignment> rolle_witness;
  std::vector<Violation> violations;
};

enum class CondCMode { HyperbolicOnly, Always };

struct AdmissibilityOptions {
  CondCMode cond_c = CondCMode::HyperbolicOnly;
};

std::vector<Violation> check_rolle_chain(const Arrangement& arr, const RolleAssignment& assign);

std::vector<Violation> check_multiplicity_conditions(const Arrangement& arr, const RolleAssignment& assign);

// Only defined for m = 0; throws NotApplicable otherwise unless `force`.
std::vector<Violation> check_condition_c(const Arrangement& arr, const RolleAssignment& assign, bool force = false);

AdmissibilityReport is_admissible(const Arrangement& arr, const AdmissibilityOptions& opts = {});

// All admissible arrangements over m' = 0..m, sorted by canonical text.
// Throws InvalidParams unless 1 <= s <= n-1, 0 <= 2m <= n and n-2m-s >= 0.
std::vector<Arrangement> enumerate_admissible(int n, int s, int m, const AdmissibilityOptions& opts = {});

void validate_params(int n, int s, int m);

nlohmann::ordered_json to_json(const AdmissibilityReport& report);

}  // namespace rootarr
