// Acceptance harness: `rootarr_acceptance N` checks criterion N and prints
// one "criterion N: PASS|FAIL ..." line. Exit status 0 on pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "rootarr/realizer.hpp"
#include "tau_props.hpp"

namespace rootarr {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << s << " s";
  return os.str();
}

bool realized_exactly(const RealizationResult& r, const SolverConfig& cfg) {
  if (!r.success || !(r.residual < 1e-10)) return false;
  return extract_hp(r.witness_hp, r.target.s(), cfg.eps_eq).arrangement == r.target;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  const SolverConfig cfg;
  const auto arrs = enumerate_admissible(2, 1, 0);
  const std::set<std::string> want{"P < Q < P", "P^2Q"};
  bool ok = testing::canonical_set(arrs) == want;
  std::ostringstream os;
  os << arrs.size() << " arrangements;";
  for (const auto& a : arrs) {
    const RealizationResult r = try_realize(a, cfg);
    const bool good = realized_exactly(r, cfg);
    ok = ok && good;
    os << " [" << format_arrangement(a) << (good ? " realized, residual " : " NOT realized, residual ") << r.residual
       << "]";
  }
  const double dt = seconds_since(t0);
  ok = ok && dt < 1.0;
  os << "; " << fmt_seconds(dt);
  return {ok, os.str()};
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  const ExactPolynomial p = parse_polynomial("x^6 - x^2");
  const double tol = 1e-9;
  std::ostringstream os;
  bool ok = true;
  auto check = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      os << " mismatch: " << what << ";";
    }
  };
  auto near = [&](double a, double b) { return std::abs(a - b) < tol; };

  // s = 1: P' = 6x^5 - 2x has three Rolle roots 0, +-3^{-1/4}; 0 is a root
  // of P as well; two complex roots +-i 3^{-1/4}.
  {
    const Extraction e = extract(p, 1);
    const double r = std::pow(3.0, -0.25);
    const auto& q = e.q_roots.real_roots;
    check(q.size() == 3 && near(q[0].location, -r) && near(q[1].location, 0.0) && near(q[2].location, r),
          "s=1 root locations");
    check(e.q_roots.complex_pairs == 1, "s=1 complex pair");
    const auto& pr = e.p_roots.real_roots;
    check(pr.size() == 3 && near(pr[0].location, -1) && near(pr[1].location, 0) && pr[1].multiplicity == 2 &&
              near(pr[2].location, 1),
          "roots of P");
    check(format_arrangement(e.arrangement) == "P < Q < P^2Q < Q < P", "s=1 chain");
    const auto assigns = rolle_assignments(e.arrangement);
    check(assigns.size() == 1 && assigns[0].total() == 3 && assigns[0].rolle_count[2] == 1, "s=1 all three Rolle");
  }
  // s = 2: P'' = 30x^4 - 2, Rolle roots +-15^{-1/4}, no non-Rolle ones.
  {
    const Extraction e = extract(p, 2);
    const double r = std::pow(15.0, -0.25);
    const auto& q = e.q_roots.real_roots;
    check(q.size() == 2 && near(q[0].location, -r) && near(q[1].location, r), "s=2 root locations");
    check(e.q_roots.complex_pairs == 1, "s=2 complex pair");
    const auto assigns = rolle_assignments(e.arrangement);
    check(assigns.size() == 1 && assigns[0].total() == 2, "s=2 both Rolle");
  }
  // s = 3: P''' = 120x^3, triple root at 0: one Rolle copy, two non-Rolle.
  {
    const Extraction e = extract(p, 3);
    const auto& q = e.q_roots.real_roots;
    check(q.size() == 1 && near(q[0].location, 0.0) && q[0].multiplicity == 3, "s=3 triple root");
    const auto assigns = rolle_assignments(e.arrangement);
    check(assigns.size() == 1 && assigns[0].rolle_count == std::vector<int>{0, 1, 0}, "s=3 split 1 + 2");
  }
  const double dt = seconds_since(t0);
  ok = ok && dt < 1.0;
  os << (ok ? "all root data match;" : "") << " " << fmt_seconds(dt);
  return {ok, os.str()};
}

Outcome criterion3() {
  const Extraction e = extract(parse_polynomial("x^6 - x^2"), 3);
  const Arrangement& a = e.arrangement;
  std::ostringstream os;
  bool found = false;
  for (const auto& pos : a.positions())
    if (pos.p_mult == 2 && pos.q_mult == 3) found = true;
  const bool attained = found && a.m() == 1 && 3 == 2 * a.m() + 1;
  const AdmissibilityReport rep = is_admissible(a);
  os << format_arrangement(a) << ", m = " << a.m() << ", coincident (d=2, g=3) " << (found ? "present" : "absent")
     << ", g = 2m+1 " << (attained ? "attained" : "not attained") << ", admissible " << (rep.verdict ? "yes" : "no");
  return {attained && rep.verdict, os.str()};
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  long samples = 0, violations = 0, skipped = 0;
  std::ostringstream bad;
  for (int n = 2; n <= 6; ++n)
    for (int s = 1; s < n; ++s) {
      const SoundnessReport rep = soundness_sweep(n, s, 100000, 20260101 + 100 * n + s);
      samples += rep.samples;
      violations += rep.violations;
      skipped += rep.out_of_scope;
      if (rep.violations && bad.str().empty())
        bad << " first offender (n=" << n << ", s=" << s << "): " << rep.examples.front();
    }
  const double dt = seconds_since(t0);
  std::ostringstream os;
  os << samples << " samples (" << skipped << " with n - 2m - s < 0, not checked), " << violations
     << " violations," << bad.str() << " " << fmt_seconds(dt);
  return {violations == 0 && dt < 300.0, os.str()};
}

Outcome criterion5() {
  const auto t0 = Clock::now();
  const SolverConfig cfg;
  int total = 0, realized = 0, unexplained = 0;
  std::ostringstream groups;
  for (int n = 2; n <= 5; ++n)
    for (int s = 1; s < n; ++s)
      for (int m = 0; 2 * m + s <= n; ++m) {
        const VerificationReport rep = verify_roundtrip(n, s, m, cfg, 1, 0);
        int ok = 0;
        for (std::size_t i = 0; i < rep.rows.size(); ++i) {
          const auto& row = rep.rows[i];
          ok += row.realized;
          if (!row.realized &&
              testing::derivative_chain_consistent(parse_arrangement(row.arrangement, {.n = n, .s = s})))
            ++unexplained;
        }
        total += static_cast<int>(rep.rows.size());
        realized += ok;
        if (ok != static_cast<int>(rep.rows.size()))
          groups << " (" << n << "," << s << "," << m << ") " << ok << "/" << rep.rows.size() << ";";
      }
  const double dt = seconds_since(t0);
  std::ostringstream os;
  os << realized << "/" << total << " realized in " << fmt_seconds(dt) << ";";
  if (realized != total) {
    os << groups.str() << " " << (total - realized - unexplained)
       << " of the failures violate the derivative-chain condition (provably unrealizable), " << unexplained
       << " unexplained";
  }
  return {realized == total && dt < 600.0, os.str()};
}

Outcome criterion6() {
  const auto t0 = Clock::now();
  const auto shapes = testing::models_by_shape(6);
  long points = 0, violations = 0, checked = 0;
  std::string first;
  for (const auto& [shape, models] : shapes) {
    if (shape.first + 2 * shape.second > 6) continue;
    const auto sw = testing::tau_property_sweep(models, 10000, 7000 + 10 * shape.first + shape.second);
    points += sw.points;
    violations += sw.violations();
    checked += sw.contraction_checked;
    if (first.empty()) first = sw.first_failure;
  }
  std::ostringstream os;
  os << shapes.size() << " (q, m) shapes, " << points << " points, " << checked << " contraction checks, "
     << violations << " violations";
  if (!first.empty()) os << "; first: " << first;
  os << "; " << fmt_seconds(seconds_since(t0));
  return {violations == 0, os.str()};
}

Outcome criterion7() {
  const SolverConfig cfg;
  std::ostringstream os;
  bool ok = true;
  auto compare = [&](const char* label, const std::set<std::string>& observed, const std::vector<Arrangement>& arrs) {
    const std::set<std::string> enumerated = testing::canonical_set(arrs);
    std::vector<std::string> rejected, unseen, unrealized;
    for (const auto& k : observed)
      if (!enumerated.count(k)) rejected.push_back(k);
    for (const auto& k : enumerated)
      if (!observed.count(k)) unseen.push_back(k);
    for (const auto& a : arrs)
      if (!try_realize(a, cfg).success) unrealized.push_back(format_arrangement(a));
    const bool good = rejected.empty() && unseen.empty() && unrealized.empty();
    ok = ok && good;
    if (os.tellp() > 0) os << " ";
    os << label << ": " << observed.size() << " observed / " << enumerated.size() << " enumerated";
    for (const auto& k : rejected) os << ", observed but rejected: " << k;
    for (const auto& k : unseen) os << ", enumerated but never observed: " << k;
    for (const auto& k : unrealized) os << ", not realizable: " << k;
    os << ";";
  };
  compare("(3,1,0)", testing::keys(testing::sample_hyperbolic_cubics(1000000, 1)), enumerate_admissible(3, 1, 0));
  compare("(3,1,1)", testing::keys(testing::sample_depressed_cubics_one_real(1000000, 2)),
          enumerate_admissible(3, 1, 1));
  return {ok, os.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Outcome criterion8() {
  const auto dir = std::filesystem::temp_directory_path();
  std::string files[2], outs[2];
  int codes[2];
  const char* jobs[2] = {"1", "8"};
  for (int i = 0; i < 2; ++i) {
    files[i] = (dir / ("rootarr_acceptance_jobs" + std::string(jobs[i]) + ".json")).string();
    outs[i] = files[i] + ".stdout";
    const std::string cmd = std::string(ROOTARR_CLI_PATH) + " --json --out " + files[i] + " verify --n 4 --s 2 --m 1" +
                            " --seed 7 --jobs " + jobs[i] + " > " + outs[i] + " 2>/dev/null";
    codes[i] = std::system(cmd.c_str());
  }
  const std::string a = slurp(files[0]), b = slurp(files[1]);
  const bool same_file = !a.empty() && a == b;
  const bool same_stdout = slurp(outs[0]) == slurp(outs[1]);
  std::ostringstream os;
  os << "catalog " << a.size() << " bytes, " << (same_file ? "identical" : "DIFFERENT") << "; stdout "
     << (same_stdout ? "identical" : "DIFFERENT") << "; exit statuses " << WEXITSTATUS(codes[0]) << " and "
     << WEXITSTATUS(codes[1]);
  for (int i = 0; i < 2; ++i) {
    std::filesystem::remove(files[i]);
    std::filesystem::remove(outs[i]);
  }
  return {same_file && same_stdout, os.str()};
}

}  // namespace
}  // namespace rootarr

int main(int argc, char** argv) {
  using rootarr::Outcome;
  const std::map<int, std::function<Outcome()>> criteria{
      {1, rootarr::criterion1}, {2, rootarr::criterion2}, {3, rootarr::criterion3}, {4, rootarr::criterion4},
      {5, rootarr::criterion5}, {6, rootarr::criterion6}, {7, rootarr::criterion7}, {8, rootarr::criterion8}};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (const auto& [k, f] : criteria) which.push_back(k);
  bool all = true;
  for (int k : which) {
    auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << k << "\n";
      return 2;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
