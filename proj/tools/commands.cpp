#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "catalog.hpp"
#include "rootarr/admissibility.hpp"
#include "rootarr/arrangement.hpp"
#include "rootarr/errors.hpp"
#include "rootarr/polynomial.hpp"
#include "rootarr/realizer.hpp"

namespace rootarr::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Globals {
  bool json = false;
  std::string out_path;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string cond_c;
  std::vector<std::string> overrides;
};

struct ChainFlags {
  std::optional<int> n, s, m, m_prime;
  ChainHeader header() const { return ChainHeader{n, s, m, m_prime}; }
};

SolverConfig make_config(const Globals& g) {
  SolverConfig cfg;
  std::string path = g.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) path = env;
  }
  if (!path.empty()) cfg = load_config(path);
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidParams("--set expects KEY=VALUE, got '" + kv + "'");
    apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) cfg.seed = *g.seed;
  if (g.cond_c == "always") cfg.cond_c = CondCMode::Always;
  else if (g.cond_c == "hyperbolic") cfg.cond_c = CondCMode::HyperbolicOnly;
  return cfg;
}

void emit(const Globals& g, std::ostream& out, const Json& j, const std::string& text) {
  if (!g.out_path.empty()) {
    std::ofstream f(g.out_path, std::ios::binary);
    if (!f) throw InvalidParams("cannot write " + g.out_path);
    f << j.dump(2) << "\n";
  }
  if (g.json) out << j.dump(2) << "\n";
  else out << text;
}

Json profile_json(const RootProfile& p) {
  Json real = Json::array();
  for (const auto& r : p.real_roots)
    real.push_back({{"location", format_decimal17(r.location)}, {"multiplicity", r.multiplicity}});
  return {{"real", real}, {"complex_pairs", p.complex_pairs}};
}

std::string profile_text(const RootProfile& p) {
  std::ostringstream os;
  if (p.real_roots.empty()) os << "(none)";
  for (std::size_t i = 0; i < p.real_roots.size(); ++i) {
    if (i) os << ", ";
    os << std::setprecision(12) << p.real_roots[i].location;
    if (p.real_roots[i].multiplicity > 1) os << " (x" << p.real_roots[i].multiplicity << ")";
  }
  os << "; complex pairs: " << p.complex_pairs;
  return os.str();
}

std::string rolle_text(const RolleAssignment& r) {
  std::string s = "[";
  for (std::size_t i = 0; i < r.rolle_count.size(); ++i) s += (i ? " " : "") + std::to_string(r.rolle_count[i]);
  return s + "]";
}

std::string violations_text(const AdmissibilityReport& rep) {
  std::ostringstream os;
  for (const auto& v : rep.violations) os << "  " << condition_name(v.condition) << ": " << v.message << "\n";
  return os.str();
}

int cmd_analyze(const Globals& g, const std::string& text, int s, bool use_float, bool force_float,
                std::ostream& out, std::ostream& err) {
  const ExactPolynomial p = parse_polynomial(text);
  const int n = p.degree();
  if (n < 2 || s < 1 || s > n - 1)
    throw InvalidParams("need 1 <= s <= n-1, got n = " + std::to_string(n) + ", s = " + std::to_string(s));
  const SolverConfig cfg = make_config(g);
  const bool floating = use_float || force_float;
  const Extraction ex = floating ? extract(Polynomial(p).to_float(), s) : extract(p, s);
  if (floating && ex.cluster_ambiguity && !force_float) {
    err << "error: floating root clusters are ambiguous; rerun without --float or with --force-float\n";
    return kAmbiguous;
  }
  const Arrangement& arr = ex.arrangement;
  const AdmissibilityReport rep = is_admissible(arr, {cfg.cond_c});
  const std::vector<RolleAssignment> assigns = rolle_assignments(arr);

  Json j;
  j["polynomial"] = format_polynomial(p);
  j["n"] = n;
  j["s"] = s;
  j["path"] = floating ? "float" : "exact";
  j["cluster_ambiguity"] = ex.cluster_ambiguity;
  j["p_roots"] = profile_json(ex.p_roots);
  j["q_roots"] = profile_json(ex.q_roots);
  j["chain"] = format_arrangement(arr);
  j["arrangement"] = to_json(arr, rep.rolle_witness ? &*rep.rolle_witness : nullptr);
  j["rolle_total"] = arr.rolle_total();
  Json ra = Json::array();
  for (const auto& a : assigns) ra.push_back(a.rolle_count);
  j["rolle_assignments"] = ra;
  j["admissibility"] = to_json(rep);

  std::ostringstream os;
  os << "P = " << format_polynomial(p) << "   (n = " << n << ", s = " << s << ")\n";
  os << "roots of P:     " << profile_text(ex.p_roots) << "\n";
  os << "roots of P^(" << s << "): " << profile_text(ex.q_roots) << "\n";
  os << "arrangement:    " << format_arrangement(arr) << "   (m = " << arr.m() << ", m' = " << arr.m_prime()
     << ")\n";
  os << "Rolle roots:    " << arr.rolle_total() << "\n";
  os << "Rolle assignments (copies per position):";
  if (assigns.empty()) os << " none";
  for (const auto& a : assigns) os << " " << rolle_text(a);
  os << "\n";
  os << "admissible:     " << (rep.verdict ? "yes" : "no") << "\n" << violations_text(rep);
  if (ex.cluster_ambiguity) os << "warning: floating root clusters were merged\n";
  emit(g, out, j, os.str());
  return kOk;
}

int cmd_enumerate(const Globals& g, int n, int s, int m, bool count_only, std::ostream& out) {
  validate_params(n, s, m);
  const SolverConfig cfg = make_config(g);
  const std::vector<Arrangement> arrs = enumerate_admissible(n, s, m, {cfg.cond_c});
  if (count_only) {
    if (g.json) out << Json{{"n", n}, {"s", s}, {"m", m}, {"count", arrs.size()}}.dump(2) << "\n";
    else out << arrs.size() << "\n";
    return kOk;
  }
  const Catalog cat = catalog_from_enumeration(n, s, m, arrs, cfg);
  if (!g.out_path.empty()) save_catalog(g.out_path, cat);
  if (g.json) {
    out << to_json(cat).dump(2) << "\n";
  } else {
    for (const auto& r : cat.rows) out << r.arrangement << "\n";
    out << cat.rows.size() << " admissible arrangements for n = " << n << ", s = " << s << ", m = " << m << "\n";
  }
  return kOk;
}

int cmd_realize(const Globals& g, const std::string& chain, const ChainFlags& flags, std::ostream& out,
                std::ostream& err) {
  const Arrangement target = parse_arrangement(chain, flags.header());
  const SolverConfig cfg = make_config(g);
  const AdmissibilityReport rep = is_admissible(target, {cfg.cond_c});
  if (!rep.verdict) {
    Json j{{"arrangement", format_arrangement(target)}, {"admissibility", to_json(rep)}};
    emit(g, out, j, "");
    err << "error: " << format_arrangement(target) << " is not a priori admissible\n" << violations_text(rep);
    return kInadmissible;
  }
  const RealizationResult r = try_realize(target, cfg);
  Json j = to_json(r);
  std::ostringstream os;
  if (r.success) {
    os << "target:    " << format_arrangement(target) << "\n";
    os << "witness:   " << format_polynomial(r.witness) << "\n";
    os << "coefficients (leading first):";
    for (double c : r.witness.descending()) os << " " << format_decimal17(c);
    os << "\n";
    os << "extracted: " << format_arrangement(*r.achieved) << "\n";
    os << "method:    " << r.method << ", residual (" << r.residual_kind << ") " << format_decimal17(r.residual)
       << "\n";
  }
  emit(g, out, j, os.str());
  if (!r.success) {
    err << "error: no witness found for " << format_arrangement(target) << "\n";
    for (const auto& line : r.trace) err << "  " << line << "\n";
    return kSolverFailure;
  }
  return kOk;
}

std::string verify_table(const Catalog& cat) {
  std::ostringstream os;
  int realized = 0;
  for (const auto& r : cat.rows) {
    const bool ok = r.realized.value_or(false);
    realized += ok;
    os << (ok ? "ok    " : "FAIL  ") << std::left << std::setw(36) << r.arrangement << " " << r.method;
    if (r.residual) os << "  residual " << format_decimal17(*r.residual);
    os << "\n";
  }
  os << realized << "/" << cat.rows.size() << " realized for n = " << cat.header.n << ", s = " << cat.header.s
     << ", m = " << cat.header.m << "\n";
  if (cat.soundness)
    os << "soundness: " << cat.soundness->violations << " violations in " << cat.soundness->samples << " samples ("
       << cat.soundness->out_of_scope << " with n - 2m - s < 0 skipped)\n";
  return os.str();
}

int cmd_verify(const Globals& g, std::optional<int> n, std::optional<int> s, std::optional<int> m, long samples,
               int max_n, const std::string& from_catalog, bool timings, std::ostream& out, std::ostream& err) {
  SolverConfig cfg = make_config(g);
  std::optional<Catalog> previous;
  if (!from_catalog.empty()) {
    previous = load_catalog(from_catalog);
    n = previous->header.n;
    s = previous->header.s;
    m = previous->header.m;
    if (!g.seed) cfg.seed = previous->header.seed;
    if (previous->header.config_hash != cfg.hash())
      err << "warning: catalog config hash " << previous->header.config_hash << " differs from " << cfg.hash()
          << "\n";
  }
  if (!n || !s || !m) throw InvalidParams("verify needs --n, --s and --m (or --from-catalog)");
  validate_params(*n, *s, *m);
  if (*n > max_n) throw InvalidParams("n = " + std::to_string(*n) + " exceeds --max-n " + std::to_string(max_n));

  const VerificationReport rep = verify_roundtrip(*n, *s, *m, cfg, g.jobs, samples);
  const Catalog cat = catalog_from_report(rep, cfg, timings);
  bool complete = rep.realized_count() == static_cast<int>(rep.rows.size()) && rep.soundness.violations == 0;

  std::optional<bool> reproduced;
  std::vector<std::string> mismatches;
  if (previous) {
    std::map<std::string, const CatalogRow*> now;
    for (const auto& r : cat.rows) now[r.arrangement] = &r;
    std::set<std::string> seen;
    for (const auto& r : previous->rows) {
      // Catalog rows may come from older formatting; compare canonical forms.
      const std::string key =
          format_arrangement(parse_arrangement(r.arrangement, ChainHeader{*n, *s, std::nullopt, std::nullopt}));
      seen.insert(key);
      auto it = now.find(key);
      if (it == now.end()) {
        mismatches.push_back(key + ": no longer enumerated");
        continue;
      }
      if (it->second->admissible != r.admissible) mismatches.push_back(key + ": admissibility verdict changed");
      if (r.realized && *r.realized != it->second->realized.value_or(false))
        mismatches.push_back(key + ": realization verdict changed");
    }
    for (const auto& [key, row] : now)
      if (!seen.count(key)) mismatches.push_back(key + ": missing from the catalog");
    reproduced = mismatches.empty();
    complete = complete && *reproduced;
  }

  if (!g.out_path.empty()) save_catalog(g.out_path, cat);
  if (g.json) {
    Json j = to_json(cat);
    if (reproduced) {
      j["reproduced"] = *reproduced;
      j["mismatches"] = mismatches;
    }
    out << j.dump(2) << "\n";
  } else {
    out << verify_table(cat);
    if (reproduced) {
      out << "catalog verdicts " << (*reproduced ? "reproduced" : "NOT reproduced") << "\n";
      for (const auto& mm : mismatches) out << "  " << mm << "\n";
    }
  }
  return complete ? kOk : kPartial;
}

int cmd_closure(const Globals& g, const std::string& chain, const ChainFlags& flags, std::ostream& out) {
  const Arrangement beta = parse_arrangement(chain, flags.header());
  const SolverConfig cfg = make_config(g);
  const std::vector<Arrangement> members = closure_of(beta);
  Json list = Json::array();
  std::ostringstream os;
  int admissible = 0;
  for (const auto& a : members) {
    const bool ok = is_admissible(a, {cfg.cond_c}).verdict;
    admissible += ok;
    list.push_back({{"arrangement", format_arrangement(a)}, {"admissible", ok}});
    os << (ok ? "admissible    " : "inadmissible  ") << format_arrangement(a) << "\n";
  }
  os << members.size() << " members, " << admissible << " admissible\n";
  Json j{{"arrangement", format_arrangement(beta)}, {"count", members.size()}, {"members", list}};
  emit(g, out, j, os.str());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Root arrangements of a real polynomial and its s-th derivative", "rootarr"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--out", g.out_path, "Write the catalog or report to PATH (.csv or .json)");
  app.add_option("--config", g.config_path, std::string("Solver config file (else $") + kConfigEnv + ")");
  app.add_option("--seed", g.seed, "Seed for restarts and sampling");
  app.add_option("--jobs", g.jobs, "Worker threads for verify")->check(CLI::PositiveNumber);
  app.add_option("--cond-c", g.cond_c, "Condition C scope")->check(CLI::IsMember({"hyperbolic", "always"}));
  app.add_option("--set", g.overrides, "Override a config entry, KEY=VALUE");

  ChainFlags chain_flags;
  auto add_chain_flags = [&chain_flags](CLI::App* sub) {
    sub->add_option("--n", chain_flags.n, "Degree of P");
    sub->add_option("--s", chain_flags.s, "Derivative order");
    sub->add_option("--m", chain_flags.m, "Complex pairs of P");
    sub->add_option("--mprime", chain_flags.m_prime, "Complex pairs of P^(s)");
  };

  std::string poly_text;
  int analyze_s = 1;
  bool use_float = false, force_float = false;
  CLI::App* analyze = app.add_subcommand("analyze", "Roots, arrangement and admissibility of a polynomial");
  analyze->add_option("polynomial", poly_text, "Polynomial in x, e.g. \"x^6 - x^2\"")->required();
  analyze->add_option("--s", analyze_s, "Derivative order")->required();
  analyze->add_flag("--float", use_float, "Use floating root finding");
  analyze->add_flag("--force-float", force_float, "Floating root finding, accepting ambiguous clusters");

  int en = 0, es = 0, em = 0;
  bool count_only = false;
  CLI::App* enumerate = app.add_subcommand("enumerate", "All a priori admissible arrangements");
  enumerate->add_option("--n", en, "Degree of P")->required();
  enumerate->add_option("--s", es, "Derivative order")->required();
  enumerate->add_option("--m", em, "Complex pairs of P")->required();
  enumerate->add_flag("--count-only", count_only, "Print only the number of arrangements");

  std::string chain;
  CLI::App* realize_cmd = app.add_subcommand("realize", "Find a polynomial with the given arrangement");
  realize_cmd->add_option("arrangement", chain, "Chain, e.g. \"P < Q < P\"")->required();
  add_chain_flags(realize_cmd);

  std::optional<int> vn, vs, vm;
  long samples = 1000;
  int max_n = 6;
  std::string from_catalog;
  bool timings = false;
  CLI::App* verify = app.add_subcommand("verify", "Realize every admissible arrangement and sample for soundness");
  verify->add_option("--n", vn, "Degree of P");
  verify->add_option("--s", vs, "Derivative order");
  verify->add_option("--m", vm, "Complex pairs of P");
  verify->add_option("--samples", samples, "Random polynomials for the soundness sweep")->check(CLI::NonNegativeNumber);
  verify->add_option("--max-n", max_n, "Largest accepted degree");
  verify->add_option("--from-catalog", from_catalog, "Re-verify the arrangements of a saved catalog");
  verify->add_flag("--timings", timings, "Include wall times (output is then not reproducible)");

  CLI::App* closure = app.add_subcommand("closure", "Arrangements in the closure of a chain");
  closure->add_option("arrangement", chain, "Chain, e.g. \"P < Q < P\"")->required();
  add_chain_flags(closure);

  for (CLI::App* sub : {analyze, enumerate, realize_cmd, verify, closure}) sub->fallthrough();

  std::vector<const char*> argv{"rootarr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(g, poly_text, analyze_s, use_float, force_float, out, err);
    if (*enumerate) return cmd_enumerate(g, en, es, em, count_only, out);
    if (*realize_cmd) return cmd_realize(g, chain, chain_flags, out, err);
    if (*verify) return cmd_verify(g, vn, vs, vm, samples, max_n, from_catalog, timings, out, err);
    if (*closure) return cmd_closure(g, chain, chain_flags, out);
  } catch (const ClusterAmbiguity& e) {
    err << "error: " << e.what() << "\n";
    return kAmbiguous;
  } catch (const MaxRestartsExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace rootarr::cli
