#include <atomic>
#include <chrono>
#include <thread>
#include <unordered_map>

#include "rootarr/realizer.hpp"

namespace rootarr {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

int uniform_int(std::uint64_t& state, int lo, int hi) {
  return lo + static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

ExactPolynomial sample_polynomial(int n, std::uint64_t& state) {
  const int kind = uniform_int(state, 0, 99);
  if (kind < 25) {
    std::vector<Rational> c(n + 1);
    for (int i = 0; i < n; ++i) c[i] = Rational(uniform_int(state, -6, 6));
    c[n] = Rational(1);
    return ExactPolynomial(std::move(c));
  }
  // Product of linear factors on a half-integer grid and quadratics with
  // small integer coefficients; a shared grid makes coincidences between
  // roots of P and of its derivatives reasonably frequent.
  ExactPolynomial p = ExactPolynomial::constant(Rational(1));
  int deg = 0;
  while (deg < n) {
    const int left = n - deg;
    if (left >= 2 && uniform_int(state, 0, 2) == 0) {
      const int b = uniform_int(state, -4, 4);
      const int c = uniform_int(state, -3, 6);
      p = p * ExactPolynomial(std::vector<Rational>{Rational(c), Rational(b), Rational(1)});
      deg += 2;
    } else {
      const int mult = std::min(left, uniform_int(state, 0, 3) == 0 ? uniform_int(state, 2, 4) : 1);
      const Rational r(uniform_int(state, -6, 6), kind < 60 ? 2 : 1);
      p = p * power(ExactPolynomial::linear_root(r), mult);
      deg += mult;
    }
  }
  return p;
}

SoundnessReport soundness_sweep(int n, int s, long samples, std::uint64_t seed, const AdmissibilityOptions& opts) {
  SoundnessReport rep;
  std::uint64_t state = seed * 0x100000001b3ull + static_cast<std::uint64_t>(n) * 1315423911ull;
  std::unordered_map<std::string, bool> cache;
  ExtractOptions ex_opts;
  ex_opts.refine_to = 0.25;
  for (long i = 0; i < samples; ++i) {
    const ExactPolynomial p = sample_polynomial(n, state);
    const Extraction ex = extract(p, s, ex_opts);
    ++rep.samples;
    if (ex.arrangement.n() - 2 * ex.arrangement.m() - s < 0) {
      ++rep.out_of_scope;
      continue;
    }
    std::string key = format_arrangement(ex.arrangement) + "|" + std::to_string(ex.arrangement.m());
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, is_admissible(ex.arrangement, opts).verdict).first;
    ++rep.observed[format_arrangement(ex.arrangement)];
    if (!it->second) {
      ++rep.violations;
      if (rep.examples.size() < 5) rep.examples.push_back(format_polynomial(p));
    }
  }
  return rep;
}

int VerificationReport::realized_count() const {
  int k = 0;
  for (const auto& r : rows) k += r.realized;
  return k;
}

VerificationReport verify_roundtrip(int n, int s, int m, const SolverConfig& cfg, int jobs, long samples) {
  VerificationReport rep;
  rep.n = n;
  rep.s = s;
  rep.m = m;
  const AdmissibilityOptions opts{cfg.cond_c};
  const std::vector<Arrangement> targets = enumerate_admissible(n, s, m, opts);
  rep.rows.resize(targets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= targets.size()) return;
      const auto t0 = std::chrono::steady_clock::now();
      const RealizationResult r = try_realize(targets[i], cfg);
      VerificationRow row;
      row.arrangement = format_arrangement(targets[i]);
      row.admissible = r.method != "inadmissible";
      row.realized = r.success;
      row.residual = r.residual;
      row.residual_kind = r.residual_kind;
      row.method = r.method;
      if (r.success) {
        for (double c : r.witness.descending()) row.witness.push_back(format_decimal17(c));
        for (const auto& c : r.witness_hp.descending()) row.witness_hp.push_back(c.str(40, std::ios_base::scientific));
      }
      row.achieved = r.achieved ? format_arrangement(*r.achieved) : "";
      row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rep.rows[i] = std::move(row);
    }
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (samples > 0) rep.soundness = soundness_sweep(n, s, samples, cfg.seed, opts);
  return rep;
}

}  // namespace rootarr
