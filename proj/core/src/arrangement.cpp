#include "rootarr/arrangement.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "rootarr/errors.hpp"

namespace rootarr {

Arrangement Arrangement::make(int n, int s, std::vector<Position> positions) {
  if (n < 1) throw InvalidArrangement("degree n must be positive");
  if (s < 1 || s >= n) throw InvalidArrangement("derivative order must satisfy 1 <= s <= n-1");
  int sp = 0, sq = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Position& pos = positions[i];
    if (pos.p_mult < 0 || pos.q_mult < 0)
      throw InvalidArrangement("negative multiplicity at position " + std::to_string(i));
    if (pos.p_mult + pos.q_mult < 1) throw InvalidArrangement("empty position " + std::to_string(i));
    sp += pos.p_mult;
    sq += pos.q_mult;
  }
  const int dp = n - sp;
  if (dp < 0 || dp % 2 != 0)
    throw InvalidArrangement("sum invariant violated: sum of P multiplicities is " + std::to_string(sp) +
                             ", which is not n - 2m for any m >= 0 (n = " + std::to_string(n) + ")");
  const int dq = n - s - sq;
  if (dq < 0 || dq % 2 != 0)
    throw InvalidArrangement("sum invariant violated: sum of Q multiplicities is " + std::to_string(sq) +
                             ", which is not (n - s) - 2m' for any m' >= 0 (n - s = " + std::to_string(n - s) + ")");
  Arrangement a;
  a.n_ = n;
  a.s_ = s;
  a.m_ = dp / 2;
  a.m_prime_ = dq / 2;
  if (a.m_prime_ > a.m_)
    throw InvalidArrangement("m' = " + std::to_string(a.m_prime_) + " exceeds m = " + std::to_string(a.m_) +
                             ": the derivative cannot have more complex pairs than P");
  a.positions_ = std::move(positions);
  return a;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

class ChainParser {
 public:
  explicit ChainParser(std::string_view text) : text_(text) {}

  std::vector<Position> parse() {
    std::vector<Position> out;
    skip_ws();
    if (at_end()) throw ParseError("empty arrangement", 0);
    out.push_back(position());
    for (;;) {
      skip_ws();
      if (at_end()) break;
      if (peek() != '<') throw ParseError(std::string("expected '<' but found '") + peek() + "'", pos_);
      ++pos_;
      out.push_back(position());
    }
    return out;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Position position() {
    skip_ws();
    const std::size_t start = pos_;
    Position pos;
    bool seen_p = false, seen_q = false;
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != 'P' && c != 'Q') break;
      const std::size_t at = pos_++;
      bool& seen = (c == 'P') ? seen_p : seen_q;
      if (seen) throw ParseError(std::string("repeated '") + c + "' within one position", at);
      seen = true;
      const int k = mult();
      (c == 'P' ? pos.p_mult : pos.q_mult) = k;
    }
    if (!seen_p && !seen_q) {
      if (at_end()) throw ParseError("expected a position (P and/or Q)", start);
      throw ParseError(std::string("expected 'P' or 'Q' but found '") + peek() + "'", pos_);
    }
    return pos;
  }

  int mult() {
    skip_ws();
    if (peek() != '^') return 1;
    ++pos_;
    skip_ws();
    bool braced = false;
    if (peek() == '{') {
      braced = true;
      ++pos_;
      skip_ws();
    }
    const std::size_t at = pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected positive integer multiplicity", at);
    long k = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      k = k * 10 + (text_[pos_++] - '0');
      if (k > 10000) throw ParseError("multiplicity too large", at);
    }
    if (k == 0) throw ParseError("multiplicity must be positive", at);
    if (braced) {
      skip_ws();
      if (peek() != '}') throw ParseError("expected '}'", pos_);
      ++pos_;
    }
    return static_cast<int>(k);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Arrangement parse_arrangement(std::string_view text, const ChainHeader& declared) {
  std::vector<Position> positions = ChainParser(text).parse();
  int sp = 0, sq = 0;
  for (const auto& p : positions) {
    sp += p.p_mult;
    sq += p.q_mult;
  }
  const int n = declared.n ? *declared.n : sp + 2 * declared.m.value_or(0);
  const int s = declared.s ? *declared.s : n - sq - 2 * declared.m_prime.value_or(0);
  if (declared.m && sp != n - 2 * *declared.m)
    throw InvalidArrangement("sum invariant violated: sum of P multiplicities is " + std::to_string(sp) +
                             " but n - 2m = " + std::to_string(n - 2 * *declared.m));
  if (declared.m_prime && sq != n - s - 2 * *declared.m_prime)
    throw InvalidArrangement("sum invariant violated: sum of Q multiplicities is " + std::to_string(sq) +
                             " but (n - s) - 2m' = " + std::to_string(n - s - 2 * *declared.m_prime));
  return Arrangement::make(n, s, std::move(positions));
}

std::string format_position(const Position& pos) {
  std::string out;
  auto token = [&out](char c, int k) {
    if (k <= 0) return;
    out += c;
    if (k > 1) out += "^" + std::to_string(k);
  };
  token('P', pos.p_mult);
  token('Q', pos.q_mult);
  return out;
}

std::string format_arrangement(const Arrangement& arr) {
  std::string out;
  for (std::size_t i = 0; i < arr.positions().size(); ++i) {
    if (i) out += " < ";
    out += format_position(arr.positions()[i]);
  }
  return out;
}

nlohmann::ordered_json to_json(const Arrangement& arr, const RolleAssignment* rolle) {
  nlohmann::ordered_json j;
  j["n"] = arr.n();
  j["s"] = arr.s();
  j["m"] = arr.m();
  j["m_prime"] = arr.m_prime();
  auto pos = nlohmann::ordered_json::array();
  for (const auto& p : arr.positions()) pos.push_back({p.p_mult, p.q_mult});
  j["positions"] = std::move(pos);
  if (rolle) j["rolle"] = rolle->rolle_count;
  return j;
}

Arrangement arrangement_from_json(const nlohmann::json& j) {
  try {
    std::vector<Position> positions;
    for (const auto& p : j.at("positions")) positions.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    Arrangement a = Arrangement::make(j.at("n").get<int>(), j.at("s").get<int>(), std::move(positions));
    if (j.contains("m") && j["m"].get<int>() != a.m())
      throw InvalidArrangement("declared m does not match the P multiplicities");
    if (j.contains("m_prime") && j["m_prime"].get<int>() != a.m_prime())
      throw InvalidArrangement("declared m_prime does not match the Q multiplicities");
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArrangement(std::string("malformed arrangement JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Extraction

Extraction extract(const ExactPolynomial& p, int s, const ExtractOptions& opts) {
  const int n = p.degree();
  if (s < 1 || s >= n) throw InvalidOrder("extract requires 1 <= s < degree");
  const ExactPolynomial q = derivative(p, s);
  const JointRoots jr = isolate_joint({p, q}, opts.refine_to);
  Extraction ex;
  std::vector<Position> positions;
  for (std::size_t i = 0; i < jr.locations.size(); ++i) {
    const int pm = jr.multiplicity[0][i];
    const int qm = jr.multiplicity[1][i];
    positions.push_back({pm, qm});
    if (pm) ex.p_roots.real_roots.push_back({jr.locations[i], pm});
    if (qm) ex.q_roots.real_roots.push_back({jr.locations[i], qm});
  }
  ex.p_roots.complex_pairs = (n - ex.p_roots.real_count()) / 2;
  ex.q_roots.complex_pairs = (n - s - ex.q_roots.real_count()) / 2;
  ex.arrangement = Arrangement::make(n, s, std::move(positions));
  return ex;
}

Extraction merge_profiles(int n, int s, const RootProfile& p_roots, const RootProfile& q_roots, double eq_tol) {
  if (!(eq_tol > 0)) throw InvalidTolerance("eq_tol must be positive");
  struct Event {
    double x;
    int kind;  // 0 = P, 1 = Q
    int mult;
  };
  std::vector<Event> ev;
  for (const auto& r : p_roots.real_roots) ev.push_back({r.location, 0, r.multiplicity});
  for (const auto& r : q_roots.real_roots) ev.push_back({r.location, 1, r.multiplicity});
  std::stable_sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.x < b.x; });

  std::vector<Position> positions;
  double anchor = 0;
  bool open = false;
  for (const auto& e : ev) {
    if (open) {
      Position& cur = positions.back();
      const bool slot_free = (e.kind == 0 ? cur.p_mult : cur.q_mult) == 0;
      if (slot_free && e.x - anchor < eq_tol) {
        (e.kind == 0 ? cur.p_mult : cur.q_mult) = e.mult;
        continue;
      }
    }
    positions.push_back(e.kind == 0 ? Position{e.mult, 0} : Position{0, e.mult});
    anchor = e.x;
    open = true;
  }
  Extraction ex;
  ex.p_roots = p_roots;
  ex.q_roots = q_roots;
  ex.cluster_ambiguity = p_roots.cluster_ambiguity || q_roots.cluster_ambiguity;
  ex.arrangement = Arrangement::make(n, s, std::move(positions));
  return ex;
}

Extraction extract(const Polynomial& p, int s, const ExtractOptions& opts) {
  if (p.is_exact()) return extract(p.exact(), s, opts);
  const int n = p.degree();
  if (s < 1 || s >= n) throw InvalidOrder("extract requires 1 <= s < degree");
  const Polynomial q = derivative(p, s);
  const IsolationOptions iso{opts.refine_to, opts.eq_tol};
  return merge_profiles(n, s, isolate_roots(p, iso), isolate_roots(q, iso), opts.eq_tol);
}

// ---------------------------------------------------------------------------
// Rolle assignments

std::vector<int> interlacing_failures(const Arrangement& arr, const RolleAssignment& assign) {
  std::vector<int> x, xi;
  const auto& pos = arr.positions();
  for (int i = 0; i < arr.size(); ++i) {
    for (int k = 0; k < pos[i].p_mult; ++k) x.push_back(i);
    for (int k = 0; k < assign.rolle_count[i]; ++k) xi.push_back(i);
  }
  std::vector<int> bad;
  const int s = arr.s();
  for (int l = 0; l < static_cast<int>(xi.size()); ++l) {
    if (l + s >= static_cast<int>(x.size())) {
      bad.push_back(l + 1);
      continue;
    }
    if (!(x[l] <= xi[l] && xi[l] <= x[l + s])) bad.push_back(l + 1);
  }
  return bad;
}

namespace {

template <typename Allowed, typename Emit>
void enumerate_counts(const Arrangement& arr, int target, Allowed&& allowed, Emit&& emit) {
  const int k = arr.size();
  std::vector<int> r(k, 0);
  // Remaining capacity from position i onward, used to prune.
  std::vector<int> cap(k + 1, 0);
  for (int i = k - 1; i >= 0; --i) cap[i] = cap[i + 1] + allowed(i).second;
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == k) {
      if (left == 0) emit(r);
      return;
    }
    const auto [lo, hi] = allowed(i);
    for (int c = lo; c <= hi && c <= left; ++c) {
      if (left - c > cap[i + 1]) continue;
      r[i] = c;
      self(self, i + 1, left - c);
    }
    r[i] = 0;
  };
  if (target >= 0) rec(rec, 0, target);
}

}  // namespace

std::vector<RolleAssignment> candidate_assignments(const Arrangement& arr) {
  std::vector<RolleAssignment> out;
  const auto& pos = arr.positions();
  enumerate_counts(
      arr, arr.rolle_total(), [&](int i) { return std::pair<int, int>(0, pos[i].q_mult); },
      [&](const std::vector<int>& r) { out.push_back({r}); });
  return out;
}

std::vector<RolleAssignment> rolle_assignments(const Arrangement& arr) {
  std::vector<RolleAssignment> out;
  const auto& pos = arr.positions();
  const int s = arr.s();
  for (const auto& p : pos)
    if (p.p_mult > s && p.q_mult != p.p_mult - s) return out;
  enumerate_counts(
      arr, arr.rolle_total(),
      [&](int i) {
        if (pos[i].p_mult > s) return std::pair<int, int>(pos[i].q_mult, pos[i].q_mult);
        return std::pair<int, int>(0, std::min(1, pos[i].q_mult));
      },
      [&](const std::vector<int>& r) {
        RolleAssignment a{r};
        if (interlacing_failures(arr, a).empty()) out.push_back(std::move(a));
      });
  return out;
}

// ---------------------------------------------------------------------------
// Closure

std::vector<ClosureRelation> closure_relations(const Arrangement& beta) {
  const int k = beta.size();
  std::map<std::string, ClosureRelation> seen;
  const unsigned gaps = k > 0 ? static_cast<unsigned>(k - 1) : 0u;
  for (unsigned long mask = 0; mask < (1ul << gaps); ++mask) {
    std::vector<Position> merged;
    std::vector<int> map(k, 0);
    for (int i = 0; i < k; ++i) {
      const bool join = i > 0 && ((mask >> (i - 1)) & 1ul);
      if (!join) merged.push_back({0, 0});
      merged.back().p_mult += beta.positions()[i].p_mult;
      merged.back().q_mult += beta.positions()[i].q_mult;
      map[i] = static_cast<int>(merged.size()) - 1;
    }
    Arrangement alpha = Arrangement::make(beta.n(), beta.s(), std::move(merged));
    std::string key = format_arrangement(alpha);
    seen.try_emplace(std::move(key), ClosureRelation{std::move(alpha), beta, std::move(map)});
  }
  std::vector<ClosureRelation> out;
  out.reserve(seen.size());
  for (auto& [key, rel] : seen) out.push_back(std::move(rel));
  return out;
}

std::vector<Arrangement> closure_of(const Arrangement& beta) {
  std::vector<Arrangement> out;
  for (auto& rel : closure_relations(beta)) out.push_back(std::move(rel.alpha));
  return out;
}

}  // namespace rootarr
