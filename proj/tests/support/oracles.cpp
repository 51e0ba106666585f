#include "oracles.hpp"

#include <random>

namespace rootarr::testing {

namespace {

using Point = std::vector<int>;  // multiplicity per derivative level 0..s

bool pair_ok(const std::vector<Point>& pts, int a) {
  const int b = a + 1;
  std::vector<int> roots;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    if (pts[i][a] > 0) {
      if (pts[i][b] != pts[i][a] - 1) return false;
      roots.push_back(i);
    }
  }
  if (roots.empty()) return true;
  auto between = [&](int lo, int hi) {
    int c = 0;
    for (int i = lo + 1; i < hi; ++i) c += pts[i][b];
    return c;
  };
  if (between(-1, roots.front()) % 2 != 0) return false;
  if (between(roots.back(), static_cast<int>(pts.size())) % 2 != 0) return false;
  for (std::size_t k = 0; k + 1 < roots.size(); ++k)
    if (between(roots[k], roots[k + 1]) % 2 == 0) return false;
  return true;
}

class ChainSearch {
 public:
  ChainSearch(int n, int s) : n_(n), s_(s) {}

  bool run(const std::vector<Point>& base) { return level(base, 1); }

 private:
  bool level(const std::vector<Point>& pts, int j) {
    if (j == s_) return pair_ok(pts, s_ - 1);
    int forced = 0;
    for (const auto& p : pts) forced += std::max(p[j - 1] - 1, 0);
    for (int r = n_ - j; r >= 0; r -= 2) {
      const int free = r - forced;
      if (free < 0) continue;
      std::vector<Point> acc;
      if (place(pts, j, 0, free, acc)) return true;
    }
    return false;
  }

  // Distributes `rem` multiplicity units of level j over the gap before
  // point i, point i itself (when not forced), and so on; the last gap
  // follows the final point.
  bool place(const std::vector<Point>& pts, int j, std::size_t i, int rem, std::vector<Point>& acc) {
    if (i == pts.size()) return fill_gap(pts, j, i, rem, rem, acc);
    for (int k = 0; k <= rem; ++k)
      if (fill_gap(pts, j, i, k, rem, acc)) return true;
    return false;
  }

  // Puts `k` units into new points in gap i (as a composition), then
  // continues with point i using the remaining `total - k` units.
  bool fill_gap(const std::vector<Point>& pts, int j, std::size_t i, int k, int total, std::vector<Point>& acc) {
    if (k == 0) return after_gap(pts, j, i, total, acc);
    for (int first = 1; first <= k; ++first) {
      Point np(s_ + 1, 0);
      np[j] = first;
      acc.push_back(np);
      const bool ok = fill_gap(pts, j, i, k - first, total - first, acc);
      acc.pop_back();
      if (ok) return true;
    }
    return false;
  }

  bool after_gap(const std::vector<Point>& pts, int j, std::size_t i, int rem, std::vector<Point>& acc) {
    if (i == pts.size()) {
      if (rem != 0) return false;
      return pair_ok(acc, j - 1) && level(acc, j + 1);
    }
    Point p = pts[i];
    if (p[j - 1] > 0) {
      p[j] = p[j - 1] - 1;
      acc.push_back(p);
      const bool ok = place(pts, j, i + 1, rem, acc);
      acc.pop_back();
      return ok;
    }
    for (int extra = 0; extra <= rem; ++extra) {
      p[j] = extra;
      acc.push_back(p);
      const bool ok = place(pts, j, i + 1, rem - extra, acc);
      acc.pop_back();
      if (ok) return true;
    }
    return false;
  }

  int n_, s_;
};

Rational grid_rational(std::mt19937_64& rng, int num_lo, int num_hi, int max_den) {
  std::uniform_int_distribution<int> num(num_lo, num_hi), den(1, max_den);
  return Rational(num(rng), den(rng));
}

}  // namespace

bool derivative_chain_consistent(const Arrangement& arr) {
  const int s = arr.s();
  std::vector<Point> base;
  for (const auto& pos : arr.positions()) {
    Point p(s + 1, 0);
    p[0] = pos.p_mult;
    p[s] = pos.q_mult;
    base.push_back(p);
  }
  if (s == 1) return pair_ok(base, 0);
  return ChainSearch(arr.n(), s).run(base);
}

ExactPolynomial from_roots(const std::vector<Rational>& roots) {
  ExactPolynomial p = ExactPolynomial::constant(Rational(1));
  for (const auto& r : roots) p = p * ExactPolynomial::linear_root(r);
  return p;
}

std::map<std::string, long> sample_hyperbolic_cubics(long samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> root(-3, 3);
  std::map<std::string, long> seen;
  for (long i = 0; i < samples; ++i) {
    const ExactPolynomial p = from_roots({Rational(root(rng)), Rational(root(rng)), Rational(root(rng))});
    ++seen[format_arrangement(extract(p, 1).arrangement)];
  }
  return seen;
}

std::map<std::string, long> sample_depressed_cubics_one_real(long samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<std::string, long> seen;
  for (long i = 0; i < samples; ++i) {
    const Rational p = grid_rational(rng, -6, 6, 3);
    const Rational q = grid_rational(rng, -6, 6, 3);
    // Discriminant -4p^3 - 27q^2 < 0 exactly when there is one real root.
    if (!(-4 * p * p * p - 27 * q * q < 0)) continue;
    const ExactPolynomial f(std::vector<Rational>{q, p, Rational(0), Rational(1)});
    ++seen[format_arrangement(extract(f, 1).arrangement)];
  }
  return seen;
}

std::map<std::string, long> sample_depressed_quartics_one_pair(long samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<std::string, long> seen;
  for (long i = 0; i < samples; ++i) {
    const Rational p = grid_rational(rng, -6, 6, 2);
    const Rational q = grid_rational(rng, -6, 6, 2);
    const Rational r = grid_rational(rng, -6, 6, 2);
    const ExactPolynomial f(std::vector<Rational>{r, q, p, Rational(0), Rational(1)});
    const Extraction ex = extract(f, 2);
    if (ex.arrangement.m() != 1) continue;
    ++seen[format_arrangement(ex.arrangement)];
  }
  return seen;
}

std::set<std::string> keys(const std::map<std::string, long>& m) {
  std::set<std::string> out;
  for (const auto& [k, v] : m) out.insert(k);
  return out;
}

std::set<std::string> canonical_set(const std::vector<Arrangement>& arrs) {
  std::set<std::string> out;
  for (const auto& a : arrs) out.insert(format_arrangement(a));
  return out;
}

}  // namespace rootarr::testing
