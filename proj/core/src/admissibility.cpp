#include "rootarr/admissibility.hpp"

#include <functional>
#include <algorithm>
#include <set>

#include "rootarr/errors.hpp"

namespace rootarr {

const char* condition_name(Condition c) {
  switch (c) {
    case Condition::RolleChain1: return "RolleChain1";
    case Condition::CondA: return "CondA";
    case Condition::CondB: return "CondB";
    case Condition::CondC: return "CondC";
    case Condition::Prop1Part1: return "Prop1Part1";
    case Condition::Prop1Part2: return "Prop1Part2";
    case Condition::Counts: return "Counts";
  }
  return "?";
}

namespace {

void check_dimensions(const Arrangement& arr, const RolleAssignment& assign) {
  if (static_cast<int>(assign.rolle_count.size()) != arr.size())
    throw InvalidArrangement("Rolle assignment has " + std::to_string(assign.rolle_count.size()) +
                             " entries for " + std::to_string(arr.size()) + " positions");
  for (int i = 0; i < arr.size(); ++i)
    if (assign.rolle_count[i] < 0 || assign.rolle_count[i] > arr.positions()[i].q_mult)
      throw InvalidArrangement("Rolle count out of range at position " + std::to_string(i));
}

std::string at(int i) { return " at position " + std::to_string(i); }

}  // namespace

std::vector<Violation> check_rolle_chain(const Arrangement& arr, const RolleAssignment& assign) {
  check_dimensions(arr, assign);
  std::vector<Violation> out;
  for (int l : interlacing_failures(arr, assign)) {
    out.push_back({Condition::RolleChain1, {l},
                   "x_" + std::to_string(l) + " <= xi_" + std::to_string(l) + " <= x_" +
                       std::to_string(l + arr.s()) + " fails"});
  }
  return out;
}

std::vector<Violation> check_multiplicity_conditions(const Arrangement& arr, const RolleAssignment& assign) {
  check_dimensions(arr, assign);
  std::vector<Violation> out;
  const int s = arr.s();
  const int m = arr.m();
  const bool hyperbolic = (m == 0);
  for (int i = 0; i < arr.size(); ++i) {
    const int d = arr.positions()[i].p_mult;
    const int g = arr.positions()[i].q_mult;
    const int r = assign.rolle_count[i];
    if (d > s) {
      if (g != d - s) {
        const std::string msg = "root of P of multiplicity " + std::to_string(d) + " > s carries " +
                                std::to_string(g) + " roots of the derivative, expected " +
                                std::to_string(d - s) + at(i);
        out.push_back({Condition::Prop1Part1, {i}, msg});
        if (hyperbolic) out.push_back({Condition::CondA, {i}, msg});
      } else if (r != g) {
        out.push_back({Condition::Prop1Part1, {i},
                       "the " + std::to_string(g) + "-fold coincident root must be entirely Rolle" + at(i)});
      }
      continue;
    }
    if (g == 0) continue;
    if (d > 0) {
      if (d == s) {
        const std::string msg = "root of P of multiplicity s coincides with a root of the derivative" + at(i);
        out.push_back({Condition::Prop1Part2, {i}, msg});
        if (hyperbolic) out.push_back({Condition::CondB, {i}, msg});
      }
      if (g > 2 * m + 1)
        out.push_back({Condition::Prop1Part2, {i},
                       "coincident multiplicity " + std::to_string(g) + " exceeds 2m+1 = " +
                           std::to_string(2 * m + 1) + at(i)});
      if (hyperbolic && g > 1)
        out.push_back({Condition::CondB, {i}, "coincident derivative root must be simple" + at(i)});
    } else if (g > 2 * m + r) {
      out.push_back({Condition::Prop1Part2, {i},
                     "multiplicity " + std::to_string(g) + " exceeds 2m + " + std::to_string(r) + at(i)});
    }
    if (r > 1) out.push_back({Condition::CondB, {i}, "Rolle root counted " + std::to_string(r) + " times" + at(i)});
  }
  return out;
}

std::vector<Violation> check_condition_c(const Arrangement& arr, const RolleAssignment& assign, bool force) {
  if (arr.m() > 0 && !force) throw NotApplicable("condition C is only defined for hyperbolic P (m = 0)");
  check_dimensions(arr, assign);
  std::vector<int> x, xi;
  for (int i = 0; i < arr.size(); ++i) {
    for (int k = 0; k < arr.positions()[i].p_mult; ++k) x.push_back(i);
    for (int k = 0; k < assign.rolle_count[i]; ++k) xi.push_back(i);
  }
  std::vector<Violation> out;
  const int s = arr.s();
  for (int l = 0; l < static_cast<int>(xi.size()) && l + s < static_cast<int>(x.size()); ++l) {
    const bool touches = (x[l] == xi[l]) || (x[l + s] == xi[l]);
    if (touches && !(x[l] == xi[l] && x[l + s] == xi[l]))
      out.push_back({Condition::CondC, {l + 1},
                     "xi_" + std::to_string(l + 1) + " touches x_" + std::to_string(l + 1) + " or x_" +
                         std::to_string(l + 1 + s) + " without x_" + std::to_string(l + 1) + " = ... = x_" +
                         std::to_string(l + 1 + s)});
  }
  return out;
}

AdmissibilityReport is_admissible(const Arrangement& arr, const AdmissibilityOptions& opts) {
  AdmissibilityReport rep;
  if (arr.rolle_total() < 0) {
    rep.violations.push_back({Condition::Counts, {},
                              "n - 2m - s = " + std::to_string(arr.rolle_total()) + " is negative"});
    return rep;
  }
  const bool use_c = arr.m() == 0 || opts.cond_c == CondCMode::Always;
  const auto candidates = candidate_assignments(arr);
  if (candidates.empty()) {
    rep.violations.push_back({Condition::Counts, {},
                              "no placement of " + std::to_string(arr.rolle_total()) + " Rolle roots exists"});
    return rep;
  }
  bool have_best = false;
  for (const auto& cand : candidates) {
    std::vector<Violation> v = check_rolle_chain(arr, cand);
    for (auto& x : check_multiplicity_conditions(arr, cand)) v.push_back(std::move(x));
    if (use_c)
      for (auto& x : check_condition_c(arr, cand, true)) v.push_back(std::move(x));
    if (v.empty()) {
      rep.verdict = true;
      rep.rolle_witness = cand;
      rep.violations.clear();
      return rep;
    }
    if (!have_best || v.size() < rep.violations.size()) {
      rep.violations = std::move(v);
      have_best = true;
    }
  }
  return rep;
}

void validate_params(int n, int s, int m) {
  if (n < 2) throw InvalidParams("n must be at least 2");
  if (s < 1 || s > n - 1) throw InvalidParams("s must satisfy 1 <= s <= n-1");
  if (m < 0 || 2 * m > n) throw InvalidParams("m must satisfy 0 <= 2m <= n");
  if (n - 2 * m - s < 0) throw InvalidParams("n - 2m - s must be non-negative");
}

std::vector<Arrangement> enumerate_admissible(int n, int s, int m, const AdmissibilityOptions& opts) {
  validate_params(n, s, m);
  std::set<std::string> seen;
  std::vector<std::pair<std::string, Arrangement>> found;
  const int a = n - 2 * m;
  for (int mp = 0; mp <= m; ++mp) {
    const int b = n - s - 2 * mp;
    std::vector<Position> chain;
    std::function<void(int, int)> rec = [&](int left_p, int left_q) {
      if (left_p == 0 && left_q == 0) {
        Arrangement arr = Arrangement::make(n, s, chain);
        if (!is_admissible(arr, opts).verdict) return;
        std::string key = format_arrangement(arr);
        if (seen.insert(key).second) found.emplace_back(std::move(key), std::move(arr));
        return;
      }
      for (int p = 0; p <= left_p; ++p)
        for (int q = 0; q <= left_q; ++q) {
          if (p + q == 0) continue;
          // A position with a P root of multiplicity d > s must carry exactly
          // d - s derivative roots; anything else can never pass.
          if (p > s && q != p - s) continue;
          if (p == s && q > 0) continue;
          chain.push_back({p, q});
          rec(left_p - p, left_q - q);
          chain.pop_back();
        }
    };
    rec(a, b);
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Arrangement> out;
  out.reserve(found.size());
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

nlohmann::ordered_json to_json(const AdmissibilityReport& report) {
  nlohmann::ordered_json j;
  j["admissible"] = report.verdict;
  if (report.rolle_witness) j["rolle"] = report.rolle_witness->rolle_count;
  else j["rolle"] = nullptr;
  auto v = nlohmann::ordered_json::array();
  for (const auto& x : report.violations) {
    nlohmann::ordered_json e;
    e["condition"] = condition_name(x.condition);
    e["indices"] = x.indices;
    e["message"] = x.message;
    v.push_back(std::move(e));
  }
  j["violations"] = std::move(v);
  return j;
}

}  // namespace rootarr
