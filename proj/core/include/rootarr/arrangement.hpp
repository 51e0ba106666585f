#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rootarr/polynomial.hpp"
#include "rootarr/roots.hpp"

namespace rootarr {

// One slot of the chain: how many copies of a root of P and of Q = P^(s)
// sit at the same real location.
struct Position {
  int p_mult = 0;
  int q_mult = 0;

  friend auto operator<=>(const Position&, const Position&) = default;
};

// Chain of the real roots of P (degree n) and of its s-th derivative.
// Consecutive positions are strictly increasing; m and m_prime are the
// numbers of complex-conjugate pairs of P and of P^(s).
class Arrangement {
 public:
  Arrangement() = default;

  // Derives m and m_prime from the multiplicity totals and validates every
  // invariant. Throws InvalidArrangement naming the violated condition.
  static Arrangement make(int n, int s, std::vector<Position> positions);

  int n() const { return n_; }
  int s() const { return s_; }
  int m() const { return m_; }
  int m_prime() const { return m_prime_; }
  const std::vector<Position>& positions() const { return positions_; }
  int size() const { return static_cast<int>(positions_.size()); }

  // Number of Rolle roots, n - 2m - s.
  int rolle_total() const { return n_ - 2 * m_ - s_; }
  int p_total() const { return n_ - 2 * m_; }
  int q_total() const { return n_ - s_ - 2 * m_prime_; }

  friend bool operator==(const Arrangement&, const Arrangement&) = default;
  friend auto operator<=>(const Arrangement&, const Arrangement&) = default;

 private:
  int n_ = 0;
  int s_ = 0;
  int m_ = 0;
  int m_prime_ = 0;
  std::vector<Position> positions_;
};

// Per-position number of Q-copies designated as Rolle roots.
struct RolleAssignment {
  std::vector<int> rolle_count;

  int total() const {
    int t = 0;
    for (int c : rolle_count) t += c;
    return t;
  }
  friend auto operator<=>(const RolleAssignment&, const RolleAssignment&) = default;
};

// alpha is obtained from beta by merging runs of adjacent positions;
// merge_map[i] is the alpha position that beta position i lands in.
struct ClosureRelation {
  Arrangement alpha;
  Arrangement beta;
  std::vector<int> merge_map;
};

// Values declared alongside a chain string. Unset n/s are inferred assuming
// m = 0 and m_prime = 0 respectively; set m/m_prime are checked.
struct ChainHeader {
  std::optional<int> n;
  std::optional<int> s;
  std::optional<int> m;
  std::optional<int> m_prime;
};

// Grammar:  arrangement := position ("<" position)*
//           position    := ("P" mult?)? ("Q" mult?)?     (non-empty)
//           mult        := "^" int  |  "^{" int "}"
// Whitespace is ignored. "QP" is accepted and canonicalized to "PQ".
Arrangement parse_arrangement(std::string_view text, const ChainHeader& declared = {});

// Canonical chain text, e.g. "P < Q < P^2Q < Q < P".
std::string format_arrangement(const Arrangement& arr);
std::string format_position(const Position& pos);

// {n, s, m, m_prime, positions: [[p, q], ...], rolle: [...]}; rolle is
// omitted when no assignment is given.
nlohmann::ordered_json to_json(const Arrangement& arr, const RolleAssignment* rolle = nullptr);
Arrangement arrangement_from_json(const nlohmann::json& j);

struct Extraction {
  Arrangement arrangement;
  RootProfile p_roots;
  RootProfile q_roots;
  bool cluster_ambiguity = false;
};

struct ExtractOptions {
  double eq_tol = 1e-7;
  double refine_to = 1e-12;
};

// Merges the real roots of p and of its s-th derivative into a chain. The
// exact path decides coincidences exactly (shared square-free factors);
// floating paths treat locations within eq_tol as equal.
Extraction extract(const Polynomial& p, int s, const ExtractOptions& opts = {});
Extraction extract(const ExactPolynomial& p, int s, const ExtractOptions& opts = {});

// Builds the chain from two root profiles (floating paths), merging
// locations closer than eq_tol.
Extraction merge_profiles(int n, int s, const RootProfile& p_roots, const RootProfile& q_roots, double eq_tol);

// All Rolle assignments satisfying the structural rules (forced copies at
// positions with p_mult > s, at most one elsewhere) and the interlacing
// x_l <= xi_l <= x_{l+s}. Lexicographically increasing.
std::vector<RolleAssignment> rolle_assignments(const Arrangement& arr);

// 1-based indices l for which x_l <= xi_l <= x_{l+s} fails when the Rolle
// copies of `assign` are listed in chain order. Comparisons are between
// position indices, so equality means "same position".
std::vector<int> interlacing_failures(const Arrangement& arr, const RolleAssignment& assign);

// Every r with 0 <= r_i <= q_i and sum r_i = n - 2m - s, in lexicographic
// order. The admissibility checker scores these candidates.
std::vector<RolleAssignment> candidate_assignments(const Arrangement& arr);

// Closure under merging adjacent positions, beta itself included, sorted by
// canonical text and deduplicated.
std::vector<Arrangement> closure_of(const Arrangement& beta);
std::vector<ClosureRelation> closure_relations(const Arrangement& beta);

}  // namespace rootarr
