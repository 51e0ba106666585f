#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rootarr/admissibility.hpp"
#include "rootarr/arrangement.hpp"
#include "rootarr/errors.hpp"
#include "rootarr/numeric.hpp"
#include "rootarr/polynomial.hpp"

namespace rootarr {

class MaxRestartsExceeded : public Error {
 public:
  using Error::Error;
};

struct SolverConfig {
  double N = 2.0;
  double damping = 0.5;
  double eps_fp = 1e-10;
  double eps_eq = 1e-7;
  double eps_theta = 1e-8;
  double t_floor = 1e-6;
  int multistart = 64;
  int max_iterations = 400;
  int fallback_starts = 400;
  std::uint64_t seed = 0;
  std::vector<double> b_schedule{1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5};
  // v = factor * N, tried from the largest factor down.
  std::vector<double> v_factors{10, 30, 100};
  // Imaginary parts given to collapsed double roots when splitting them.
  std::vector<double> a_schedule{1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1};
  CondCMode cond_c = CondCMode::HyperbolicOnly;

  // Canonical "key = value" lines, sorted by key.
  std::string canonical() const;
  // FNV-1a of canonical(), 16 hex digits.
  std::string hash() const;
};

// Reads "key = value" lines ('#' comments allowed). Unknown keys and
// malformed values throw InvalidParams.
SolverConfig load_config(const std::string& path, SolverConfig base = {});
void apply_config_entry(SolverConfig& cfg, const std::string& key, const std::string& value);

// Which sorted real part of P^(s) plays which role in the target.
struct XiRole {
  int position = 0;
  bool rolle = false;
  int u_index = -1;  // 1-based index among non-Rolle roots, -1 for Rolle
};

struct HSlot {
  bool is_g = false;
  int index = 0;  // into w or g
};

enum class EtaRule { TieToU, Coincide, Spread };

struct EtaSpec {
  EtaRule rule = EtaRule::Spread;
  int xi = 0;        // TieToU / Coincide: 1-based xi index
  int lo = 0;        // Spread: bracketing xi indices (0 and n-s+1 are the
  int hi = 0;        //   fixed endpoints 0 and 1)
  int slot = 0;      // Spread: j in 0..l
  int run = 1;       // Spread: l + 1
};

// One term of Phi: |xi_u - anchor - shift * b|.
struct PhiTerm {
  int xi = 0;
  bool anchor_is_w = false;
  int anchor = 0;  // xi index (1-based) or w index
  int shift = 0;   // -1, 0 or +1
};

// Everything the fixed-point map needs to know about a target.
struct TargetModel {
  Arrangement target;
  RolleAssignment rolle;
  int q = 0;        // distinct real roots of P
  int M = 0;        // complex pairs kept finite (m - m')
  int m_prime = 0;  // pairs sent to +-iv
  std::vector<int> w_position;
  std::vector<int> w_mult;
  std::vector<XiRole> xi_roles;     // 1-based; index 0 unused
  std::vector<int> u_xi;            // u_k -> xi index, 1-based k; index 0 unused
  std::vector<int> g_position;      // chain position of u_{2p-1}
  std::vector<HSlot> h_order;
  std::vector<EtaSpec> eta;         // per h slot
  std::vector<PhiTerm> phi;
  bool least_generic = true;
};

TargetModel build_target_model(const Arrangement& target, const RolleAssignment& rolle);

struct SearchDomain {
  std::vector<int> mult;  // m_j
  std::vector<double> w;  // nondecreasing in [0, 1]
  std::vector<double> g;  // [0, 1]
  std::vector<double> t;  // [0, N]
  double N = 2.0;
  std::optional<double> v;
  int m_prime = 0;
};

struct TauOutput {
  std::vector<double> eta;  // h order
  std::vector<double> zeta;
  std::vector<double> xi;
  std::vector<double> theta;
  double phi = 0.0;
};

// Pi (x - w_j)^{m_j} Pi ((x - g_j)^2 + t_j^2), times (1 + x^2/v^2)^{m'}
// when v is set.
FloatPolynomial build_family_polynomial(const SearchDomain& dom);
HpPolynomial build_family_polynomial_hp(const SearchDomain& dom);

TauOutput tau_map(const SearchDomain& dom, const TargetModel& model, double b = 0.0);

std::vector<double> h_vector(const SearchDomain& dom, const TargetModel& model);
void set_h_vector(SearchDomain& dom, const TargetModel& model, const std::vector<double>& h);

// max |tau(x) - x| over all components (h then t).
double tau_residual(const SearchDomain& dom, const TargetModel& model, double b = 0.0);
double tau_residual_hp(const std::vector<HpReal>& w, const std::vector<HpReal>& g, const std::vector<HpReal>& t,
                       const SearchDomain& shape, const TargetModel& model, double b);

struct RealizationResult {
  bool success = false;
  Arrangement target;
  std::optional<Arrangement> achieved;
  // Witness, monic, in high precision; `witness` is its double rounding.
  HpPolynomial witness_hp;
  FloatPolynomial witness;
  double residual = 0.0;
  // "tau" when residual measures |tau(x) - x|, "pinned" when it measures the
  // coincidence equations at a point reached by continuation.
  std::string residual_kind = "tau";
  std::string method;
  double b = 0.0;
  std::optional<double> v;
  std::vector<std::string> trace;
};

nlohmann::ordered_json to_json(const RealizationResult& r);

// Damped iteration with multistart fallback on |tau(x) - x|^2. Requires
// m' = 0. Returns the best point found; success only if it verifies.
RealizationResult solve_fixed_point(const TargetModel& model, const SolverConfig& cfg, double b = 0.0);

// Full dispatch. Throws InvalidArrangement for inadmissible targets and
// MaxRestartsExceeded (message carries the best diagnostics) on failure.
RealizationResult realize(const Arrangement& target, const SolverConfig& cfg);
// Same, but failures are returned instead of thrown.
RealizationResult try_realize(const Arrangement& target, const SolverConfig& cfg);

// Arrangement of a high-precision witness, coincidence tolerance eq_tol.
Extraction extract_hp(const HpPolynomial& p, int s, double eq_tol);

// Exact-coefficient random polynomials for the soundness sweep. Roots are
// drawn from a small grid so that coincidences occur with positive
// probability; some samples are dense random integer polynomials.
ExactPolynomial sample_polynomial(int n, std::uint64_t& state);

struct SoundnessReport {
  long samples = 0;
  long violations = 0;
  // Samples with n - 2m - s < 0, where no Rolle count exists; these are
  // outside the domain of admissibility and are not checked.
  long out_of_scope = 0;
  std::vector<std::string> examples;  // first few offending polynomials
  std::map<std::string, long> observed;
};

SoundnessReport soundness_sweep(int n, int s, long samples, std::uint64_t seed,
                                const AdmissibilityOptions& opts = {});

struct VerificationRow {
  std::string arrangement;
  bool admissible = true;
  bool realized = false;
  double residual = 0.0;
  std::string residual_kind;
  std::string method;
  std::vector<std::string> witness;     // descending coefficients, 17 digits
  std::vector<std::string> witness_hp;  // same, 40 digits
  std::string achieved;
  double wall_seconds = 0.0;
};

struct VerificationReport {
  int n = 0, s = 0, m = 0;
  std::vector<VerificationRow> rows;
  SoundnessReport soundness;
  int realized_count() const;
};

// Realizes every enumerated arrangement (distributing over `jobs` threads)
// and runs a soundness sweep with `samples` polynomials.
VerificationReport verify_roundtrip(int n, int s, int m, const SolverConfig& cfg, int jobs = 1, long samples = 0);

}  // namespace rootarr
