#include "rootarr/realizer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "realizer_internal.hpp"
#include "rootarr/errors.hpp"
#include "rootarr/roots.hpp"

namespace rootarr {

using detail::PinnedSpec;

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

constexpr double kMinSigma = 1e-9;

std::string fmt(double x) { return format_decimal17(x); }

std::vector<HpReal> to_hp(const std::vector<double>& v) { return {v.begin(), v.end()}; }

// A solved chain point together with the spec it solves.
struct ChainSolution {
  PinnedSpec spec;
  std::vector<HpReal> x;
  double residual = 0.0;  // coincidence equations only
  Arrangement achieved;
};

int count_equations(const PinnedSpec& sp) {
  std::vector<double> x(detail::pinned_unknowns(sp), 0.5);
  return static_cast<int>(detail::pinned_equations(sp, x).size());
}

// Cheap double-precision screen run before high-precision polishing:
// positions must stay ordered, pairs must stay complex and P^(s) must have
// no clearly simple real root away from the chain.
bool plausible(const PinnedSpec& sp, const std::vector<double>& x) {
  const int k = sp.target->size();
  double lo = x[0], hi = x[0];
  for (int i = 0; i + 1 < k; ++i) {
    if (!(x[i + 1] - x[i] > 1e-9)) return false;
    hi = x[i + 1];
  }
  const double sep = 1e-3 * std::max(1.0, hi - lo);
  for (int j = 0; j < sp.pairs; ++j)
    if (!(std::abs(x[k + sp.pairs + j]) > 1e-7)) return false;
  const FloatPolynomial D = derivative(detail::pinned_polynomial(sp, x), sp.target->s());
  for (const auto& z : roots_complex(D)) {
    if (z.imag() != 0.0) continue;
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) d = std::min(d, std::abs(z.real() - x[i]));
    if (d > sep) return false;
  }
  return true;
}

// Smallest singular value of the Jacobian of the pinned system at x. A
// clearly nonzero value means an exact solution sits within about
// residual / sigma of x; near-zero values flag limit points where, e.g., a
// "double root" is really a pair of simple roots that never merge.
double jacobian_sigma_min(const PinnedSpec& sp, const std::vector<HpReal>& x) {
  const std::vector<HpReal> f0 = detail::pinned_equations(sp, x);
  const HpReal h("1e-25");
  Eigen::MatrixXd J(f0.size(), x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    std::vector<HpReal> xp = x;
    xp[j] += h;
    const std::vector<HpReal> fp = detail::pinned_equations(sp, xp);
    for (std::size_t i = 0; i < f0.size(); ++i) J(i, j) = to_double((fp[i] - f0[i]) / h);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& sv = svd.singularValues();
  return sv.size() == 0 ? 1.0 : sv(sv.size() - 1);
}

// Double-precision LM, then high-precision polishing, then an independent
// extraction of the resulting polynomial.
std::optional<ChainSolution> solve_pinned(const PinnedSpec& sp, const std::vector<double>& seed, double eq_tol,
                                          std::vector<std::string>* trace, const std::string& tag) {
  std::function<std::vector<double>(const std::vector<double>&)> fd = [&sp](const std::vector<double>& x) {
    return detail::pinned_equations(sp, x);
  };
  auto lo = detail::levenberg_marquardt<double>(fd, seed, 150, 1e-14, 1e-7);
  if (!(lo.residual < 1e-8)) {
    if (trace) trace->push_back(tag + ": no convergence, residual " + fmt(lo.residual));
    return std::nullopt;
  }
  if (!plausible(sp, lo.x)) {
    if (trace) trace->push_back(tag + ": converged to a different arrangement (double screen)");
    return std::nullopt;
  }
  std::function<std::vector<HpReal>(const std::vector<HpReal>&)> fh = [&sp](const std::vector<HpReal>& x) {
    return detail::pinned_equations(sp, x);
  };
  auto hi = detail::levenberg_marquardt<HpReal>(fh, to_hp(lo.x), 60, HpReal("1e-55"), HpReal("1e-32"));
  if (!(hi.residual < HpReal("1e-35"))) {
    if (trace) trace->push_back(tag + ": polishing stalled at " + fmt(to_double(hi.residual)));
    return std::nullopt;
  }
  const double sigma = jacobian_sigma_min(sp, hi.x);
  if (!(sigma > kMinSigma)) {
    if (trace) trace->push_back(tag + ": singular Jacobian at the solution (sigma_min " + fmt(sigma) + ")");
    return std::nullopt;
  }
  const HpPolynomial P = detail::pinned_polynomial(sp, hi.x);
  Extraction ex;
  try {
    ex = extract_hp(P, sp.target->s(), eq_tol);
  } catch (const Error& e) {
    if (trace) trace->push_back(tag + ": extraction failed (" + e.what() + ")");
    return std::nullopt;
  }
  if (!(ex.arrangement == *sp.target)) {
    if (trace) trace->push_back(tag + ": converged to " + format_arrangement(ex.arrangement));
    return std::nullopt;
  }
  if (trace) trace->push_back(tag + ": sigma_min " + fmt(sigma));
  ChainSolution sol{sp, hi.x, to_double(detail::max_abs(detail::coincidence_equations(sp, hi.x))), ex.arrangement};
  return sol;
}

RealizationResult make_result(const Arrangement& target, const ChainSolution& sol, const std::string& method,
                              double residual, const std::string& kind) {
  RealizationResult r;
  r.success = true;
  r.target = target;
  r.achieved = sol.achieved;
  r.witness_hp = detail::pinned_polynomial(sol.spec, sol.x).monic();
  r.witness = r.witness_hp.cast<double>();
  r.residual = residual;
  r.residual_kind = kind;
  r.method = method;
  r.b = sol.spec.b;
  r.v = sol.spec.v;
  return r;
}

// Affine normalization of a chain seed so that the outer positions sit at
// 0 and 1.
void normalize_seed(std::vector<double>& x, int k, int pairs) {
  if (k < 2) return;
  const double lo = x[0], span = x[k - 1] - x[0];
  if (!(std::abs(span) > 1e-12)) return;
  for (int i = 0; i < k + pairs; ++i) x[i] = (x[i] - lo) / span;
  for (int j = 0; j < pairs; ++j) x[k + pairs + j] /= span;
}

std::vector<double> chain_seed_from_domain(const TargetModel& md, const SearchDomain& dom, const TauOutput& tau) {
  const int k = md.target.size();
  std::vector<double> x(k + 2 * md.M, 0.0);
  std::vector<double> sum(k, 0.0);
  std::vector<int> cnt(k, 0);
  for (std::size_t idx = 1; idx < md.xi_roles.size() && idx - 1 < tau.xi.size(); ++idx) {
    sum[md.xi_roles[idx].position] += tau.xi[idx - 1];
    ++cnt[md.xi_roles[idx].position];
  }
  for (int i = 0; i < k; ++i) x[i] = cnt[i] ? sum[i] / cnt[i] : 0.0;
  for (int j = 0; j < md.q; ++j) x[md.w_position[j]] = dom.w[j];
  // Keep the seed strictly increasing.
  for (int i = 1; i < k; ++i)
    if (x[i] <= x[i - 1]) x[i] = x[i - 1] + 1e-3;
  for (int j = 0; j < md.M; ++j) {
    x[k + j] = dom.g[j];
    x[k + md.M + j] = dom.t[j];
  }
  return x;
}

void project(SearchDomain& dom, const TargetModel& md, double N) {
  std::vector<double> h = h_vector(dom, md);
  for (auto& v : h) v = std::clamp(v, 0.0, 1.0);
  std::sort(h.begin(), h.end());
  set_h_vector(dom, md, h);
  for (auto& t : dom.t) t = std::clamp(t, 0.0, N);
}

double objective(const SearchDomain& dom, const TargetModel& md, double b) {
  const TauOutput o = tau_map(dom, md, b);
  const std::vector<double> h = h_vector(dom, md);
  double s = 0;
  for (std::size_t i = 0; i < h.size(); ++i) s += (o.eta[i] - h[i]) * (o.eta[i] - h[i]);
  for (std::size_t i = 0; i < dom.t.size(); ++i) s += (o.zeta[i] - dom.t[i]) * (o.zeta[i] - dom.t[i]);
  return s;
}

std::vector<double> pack(const SearchDomain& dom, const TargetModel& md) {
  std::vector<double> x = h_vector(dom, md);
  x.insert(x.end(), dom.t.begin(), dom.t.end());
  return x;
}

void unpack(SearchDomain& dom, const TargetModel& md, const std::vector<double>& x) {
  const std::size_t nh = md.h_order.size();
  set_h_vector(dom, md, std::vector<double>(x.begin(), x.begin() + nh));
  for (std::size_t i = 0; i < dom.t.size(); ++i) dom.t[i] = x[nh + i];
}

// Plain Nelder-Mead on the projected domain.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                double step, int max_evals) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex{x0};
  for (std::size_t i = 0; i < n; ++i) {
    auto x = x0;
    x[i] += (x[i] + step <= 1.0) ? step : -step;
    simplex.push_back(x);
  }
  std::vector<double> fv;
  for (const auto& x : simplex) fv.push_back(f(x));
  int evals = static_cast<int>(fv.size());
  while (evals < max_evals) {
    std::vector<std::size_t> order(n + 1);
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];
    if (fv[worst] - fv[best] < 1e-30) break;
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t d = 0; d < n; ++d) c[d] += simplex[i][d] / n;
    auto along = [&](double k) {
      std::vector<double> x(n);
      for (std::size_t d = 0; d < n; ++d) x[d] = c[d] + k * (simplex[worst][d] - c[d]);
      return x;
    };
    auto xr = along(-1.0);
    const double fr = f(xr);
    ++evals;
    if (fr < fv[best]) {
      auto xe = along(-2.0);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) simplex[worst] = xe, fv[worst] = fe;
      else simplex[worst] = xr, fv[worst] = fr;
    } else if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
    } else {
      auto xc = along(fr < fv[worst] ? -0.5 : 0.5);
      const double fc = f(xc);
      ++evals;
      if (fc < std::min(fr, fv[worst])) {
        simplex[worst] = xc;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d) simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
          fv[i] = f(simplex[i]);
          ++evals;
        }
      }
    }
  }
  std::size_t b = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fv[i] < fv[b]) b = i;
  return simplex[b];
}

struct FixedPointOutcome {
  RealizationResult result;
  SearchDomain best;
  TauOutput tau;
  double residual = 0.0;
  double tmax = 0.0;
};

SearchDomain initial_domain(const TargetModel& md, double N) {
  SearchDomain dom;
  dom.mult = md.w_mult;
  dom.w.assign(md.q, 0.0);
  dom.g.assign(md.M, 0.0);
  dom.t.assign(md.M, 1.0);
  dom.N = N;
  const std::size_t nh = md.h_order.size();
  std::vector<double> h(nh);
  for (std::size_t i = 0; i < nh; ++i) h[i] = (i + 1.0) / (nh + 1.0);
  set_h_vector(dom, md, h);
  return dom;
}

FixedPointOutcome fixed_point_search(const TargetModel& md, const SolverConfig& cfg, double b,
                                     const SearchDomain* warm, std::mt19937_64& rng, std::vector<std::string>& trace) {
  FixedPointOutcome out;
  SearchDomain dom = warm ? *warm : initial_domain(md, cfg.N);
  const double lambda = cfg.damping;
  double best_res = std::numeric_limits<double>::infinity();
  SearchDomain best = dom;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const TauOutput o = tau_map(dom, md, b);
    const std::vector<double> h = h_vector(dom, md);
    double res = 0;
    for (std::size_t i = 0; i < h.size(); ++i) res = std::max(res, std::abs(o.eta[i] - h[i]));
    for (std::size_t i = 0; i < dom.t.size(); ++i) res = std::max(res, std::abs(o.zeta[i] - dom.t[i]));
    if (res < best_res) {
      best_res = res;
      best = dom;
    }
    if (res < 1e-13) break;
    std::vector<double> hn(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) hn[i] = (1 - lambda) * h[i] + lambda * o.eta[i];
    set_h_vector(dom, md, hn);
    for (std::size_t i = 0; i < dom.t.size(); ++i) dom.t[i] = (1 - lambda) * dom.t[i] + lambda * o.zeta[i];
    project(dom, md, cfg.N);
  }
  trace.push_back("damped iteration b=" + fmt(b) + ": " + std::to_string(it) + " steps, residual " + fmt(best_res));

  if (best_res > 1e-8) {
    auto f = [&](const std::vector<double>& x) {
      SearchDomain d = best;
      unpack(d, md, x);
      project(d, md, cfg.N);
      return objective(d, md, b);
    };
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int dim = static_cast<int>(pack(best, md).size());
    for (int start = 0; start < cfg.multistart; ++start) {
      std::vector<double> x0;
      if (start == 0) {
        x0 = pack(best, md);
      } else {
        SearchDomain d = best;
        std::vector<double> h(md.h_order.size());
        for (auto& v : h) v = unit(rng);
        std::sort(h.begin(), h.end());
        set_h_vector(d, md, h);
        for (auto& t : d.t) t = unit(rng) * cfg.N;
        x0 = pack(d, md);
      }
      const auto x = nelder_mead(f, x0, 0.1, 150 * (dim + 1));
      SearchDomain d = best;
      unpack(d, md, x);
      project(d, md, cfg.N);
      const double r = tau_residual(d, md, b);
      if (r < best_res) {
        best_res = r;
        best = d;
      }
      if (best_res < 1e-9) break;
    }
    trace.push_back("multistart minimization: residual " + fmt(best_res));
  }
  out.best = best;
  out.tau = tau_map(best, md, b);
  out.residual = best_res;
  for (double t : best.t) out.tmax = std::max(out.tmax, t);
  out.result.target = md.target;
  out.result.residual = best_res;
  out.result.b = b;
  return out;
}

// Polish a candidate fixed point with the smooth equations it must satisfy,
// then check the tau residual in high precision.
std::optional<RealizationResult> polish_fixed_point(const TargetModel& md, const FixedPointOutcome& fp,
                                                    const SolverConfig& cfg, double b, std::vector<std::string>& trace) {
  PinnedSpec sp;
  sp.target = &md.target;
  sp.pairs = md.M;
  sp.model = &md;
  sp.b = b;
  const std::vector<double> seed = chain_seed_from_domain(md, fp.best, fp.tau);
  auto sol = solve_pinned(sp, seed, cfg.eps_eq, &trace, "fixed-point polish b=" + fmt(b));
  if (!sol) return std::nullopt;
  const int k = md.target.size();
  std::vector<HpReal> w, g, t;
  for (int j = 0; j < md.q; ++j) w.push_back(sol->x[md.w_position[j]]);
  for (int j = 0; j < md.M; ++j) {
    g.push_back(sol->x[k + j]);
    t.push_back(abs(sol->x[k + md.M + j]));
  }
  SearchDomain shape = fp.best;
  const double res = tau_residual_hp(w, g, t, shape, md, b);
  trace.push_back("fixed-point polish b=" + fmt(b) + ": tau residual " + fmt(res));
  if (!(res < cfg.eps_fp)) return std::nullopt;
  return make_result(md.target, *sol, b > 0 ? "b_continuation" : "fixed_point", res, "tau");
}

std::optional<RealizationResult> lemma1_continuation(const TargetModel& md, const FixedPointOutcome& fp,
                                                     const SolverConfig& cfg, std::vector<std::string>& trace) {
  PinnedSpec sp;
  sp.target = &md.target;
  sp.pairs = md.M;
  std::vector<double> base = chain_seed_from_domain(md, fp.best, fp.tau);
  normalize_seed(base, md.target.size(), md.M);
  const int k = md.target.size();
  const int unknowns = detail::pinned_unknowns(sp);
  const bool free_dims = unknowns > count_equations(sp);
  for (double a : cfg.a_schedule) {
    std::vector<double> seed = base;
    for (int j = 0; j < md.M; ++j) seed[k + md.M + j] = a;
    PinnedSpec spa = sp;
    if (free_dims && md.M > 0) spa.t_pin = std::make_pair(0, a);
    auto sol = solve_pinned(spa, seed, cfg.eps_eq, &trace, "lemma-1 split a=" + fmt(a));
    if (sol) {
      trace.push_back("lemma-1 split a=" + fmt(a) + ": realized");
      return make_result(md.target, *sol, "lemma1_continuation", sol->residual, "pinned");
    }
  }
  return std::nullopt;
}

std::optional<RealizationResult> fallback_search(const Arrangement& target, int pairs, const SolverConfig& cfg,
                                                 std::mt19937_64& rng, std::vector<std::string>& trace) {
  PinnedSpec sp;
  sp.target = &target;
  sp.pairs = pairs;
  const int k = target.size();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int converged_elsewhere = 0;
  std::vector<std::string> quiet;
  for (int start = 0; start < cfg.fallback_starts; ++start) {
    std::vector<double> x(k + 2 * pairs);
    std::vector<double> inner(std::max(0, k - 2));
    for (auto& v : inner) v = unit(rng);
    std::sort(inner.begin(), inner.end());
    x[0] = 0.0;
    for (int i = 1; i + 1 < k; ++i) x[i] = inner[i - 1];
    if (k >= 2) x[k - 1] = 1.0;
    for (int j = 0; j < pairs; ++j) {
      x[k + j] = -0.25 + 1.5 * unit(rng);
      x[k + pairs + j] = std::exp(std::log(1e-2) * (1 - unit(rng)));
    }
    quiet.clear();
    auto sol = solve_pinned(sp, x, cfg.eps_eq, &quiet, "fallback start " + std::to_string(start));
    if (sol) {
      trace.push_back("fallback multistart: realized at start " + std::to_string(start));
      return make_result(target, *sol, "fallback_multistart", sol->residual, "pinned");
    }
    if (!quiet.empty() && quiet.back().find("converged to") != std::string::npos) ++converged_elsewhere;
  }
  trace.push_back("fallback multistart: " + std::to_string(cfg.fallback_starts) + " starts, " +
                  std::to_string(converged_elsewhere) + " converged to a different arrangement");
  return std::nullopt;
}

// Searches over the roots of P for a configuration whose P^(s) roots fall in
// the target's order, then hands the point to the pinned solver to close
// the coincidences. Works directly on actual roots of P^(s), so strict
// inequalities are reached without a fixed-point map.
class OrderingPenalty {
 public:
  OrderingPenalty(const Arrangement& target, double margin) : target_(target), margin_(margin) {
    const auto& pos = target.positions();
    for (int i = 0; i < target.size(); ++i) {
      if (pos[i].p_mult > 0) {
        w_pos_.push_back(i);
        mult_.push_back(pos[i].p_mult);
      }
      for (int c = 0; c < pos[i].q_mult; ++c) q_slot_.push_back(i);
    }
  }

  int dims() const { return static_cast<int>(w_pos_.size()) + 2 * target_.m(); }

  // Chain coordinates (positions, then g, then t) for the pinned solver,
  // mapped so the first position is 0 and the last is 1.
  std::vector<double> chain_point(const std::vector<double>& y) const {
    std::vector<double> c;
    evaluate(y, &c);
    const int k = target_.size();
    const int pairs = target_.m();
    const double lo = c[0], span = k > 1 ? c[k - 1] - c[0] : 1.0;
    std::vector<double> x(k + 2 * pairs);
    for (int i = 0; i < k; ++i) x[i] = (c[i] - lo) / span;
    const int nw = static_cast<int>(w_pos_.size());
    for (int j = 0; j < pairs; ++j) {
      x[k + j] = (y[nw + j] - lo) / span;
      x[k + pairs + j] = std::exp(y[nw + pairs + j]) / span;
    }
    return x;
  }

  double operator()(const std::vector<double>& y) const { return evaluate(y, nullptr); }

 private:
  double evaluate(const std::vector<double>& y, std::vector<double>* coords) const {
    const int nw = static_cast<int>(w_pos_.size());
    const int pairs = target_.m();
    std::vector<double> w(y.begin(), y.begin() + nw), g, t;
    for (int j = 0; j < pairs; ++j) {
      g.push_back(y[nw + j]);
      t.push_back(std::exp(std::clamp(y[nw + pairs + j], -30.0, 5.0)));
    }
    const FloatPolynomial D = derivative(detail::family_polynomial(w, mult_, g, t, std::nullopt, 0), target_.s());
    std::vector<std::complex<double>> z = roots_complex(D);
    std::sort(z.begin(), z.end(), [](const auto& a, const auto& b) { return std::abs(a.imag()) < std::abs(b.imag()); });
    const std::size_t nq = q_slot_.size();
    double pen = 0.0;
    std::vector<double> xi;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (i < nq) {
        pen += std::abs(z[i].imag());
        xi.push_back(z[i].real());
      }
    }
    std::sort(xi.begin(), xi.end());

    const int k = target_.size();
    std::vector<double> c(k, 0.0);
    std::vector<int> cnt(k, 0);
    for (int j = 0; j < nw; ++j) {
      c[w_pos_[j]] = w[j];
      cnt[w_pos_[j]] = -1;
    }
    for (std::size_t i = 0; i < nq; ++i) {
      const int at = q_slot_[i];
      if (cnt[at] < 0) continue;
      c[at] += xi[i];
      ++cnt[at];
    }
    for (int i = 0; i < k; ++i)
      if (cnt[i] > 0) c[i] /= cnt[i];
    const double span = k > 1 ? c[k - 1] - c[0] : 1.0;
    if (!(span > 1e-12)) return 1e6 + pen;
    for (std::size_t i = 0; i < nq; ++i) pen += std::abs(xi[i] - c[q_slot_[i]]) / span;
    for (std::size_t i = nq; i < z.size(); ++i)
      pen += std::max(0.0, margin_ - std::abs(z[i].imag()) / span);
    for (int i = 0; i + 1 < k; ++i) pen += std::max(0.0, margin_ - (c[i + 1] - c[i]) / span);
    for (double tj : t) pen += std::max(0.0, margin_ - tj / span);
    if (coords) *coords = c;
    return pen;
  }

  const Arrangement& target_;
  double margin_;
  std::vector<int> w_pos_;
  std::vector<int> mult_;
  std::vector<int> q_slot_;
};

std::optional<RealizationResult> ordering_search(const Arrangement& target, const SolverConfig& cfg,
                                                 std::mt19937_64& rng, std::vector<std::string>& trace) {
  if (target.p_total() == 0 && target.m() == 0) return std::nullopt;
  const OrderingPenalty pen(target, 5e-3);
  const int dims = pen.dims();
  const int nw = dims - 2 * target.m();
  PinnedSpec sp;
  sp.target = &target;
  sp.pairs = target.m();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::string> quiet;
  for (int start = 0; start < cfg.multistart; ++start) {
    std::vector<double> y(dims);
    for (int j = 0; j < nw; ++j) y[j] = unit(rng);
    std::sort(y.begin(), y.begin() + nw);
    for (int j = 0; j < target.m(); ++j) {
      y[nw + j] = -0.25 + 1.5 * unit(rng);
      y[nw + target.m() + j] = std::log(1e-2) * (1 - unit(rng));
    }
    y = nelder_mead(pen, y, 0.1, 200 * (dims + 1));
    const double v = pen(y);
    best = std::min(best, v);
    if (!(v < 1e-3)) continue;
    quiet.clear();
    auto sol = solve_pinned(sp, pen.chain_point(y), cfg.eps_eq, &quiet, "ordering search");
    if (sol) {
      trace.push_back("ordering search: realized at start " + std::to_string(start));
      return make_result(target, *sol, "ordering_search", sol->residual, "pinned");
    }
  }
  std::string last = quiet.empty() ? "" : "; last attempt: " + quiet.back();
  trace.push_back("ordering search: " + std::to_string(cfg.multistart) + " starts, best penalty " + fmt(best) + last);
  return std::nullopt;
}

std::optional<RealizationResult> hyperbolic_derivative_case(const Arrangement& target, const RolleAssignment& rolle,
                                                            const SolverConfig& cfg, std::mt19937_64& rng,
                                                            std::vector<std::string>& trace) {
  const TargetModel md = build_target_model(target, rolle);
  FixedPointOutcome fp;
  if (md.least_generic) {
    fp = fixed_point_search(md, cfg, 0.0, nullptr, rng, trace);
    if (md.M == 0 || fp.tmax > cfg.t_floor)
      if (auto r = polish_fixed_point(md, fp, cfg, 0.0, trace)) return r;
  } else {
    const SearchDomain* warm = nullptr;
    SearchDomain last;
    for (double b : cfg.b_schedule) {
      fp = fixed_point_search(md, cfg, b, warm, rng, trace);
      last = fp.best;
      warm = &last;
      if (fp.tmax > cfg.t_floor)
        if (auto r = polish_fixed_point(md, fp, cfg, b, trace)) return r;
    }
  }
  if (md.M > 0) {
    trace.push_back("fixed point collapsed (t_max = " + fmt(fp.tmax) + "), splitting double roots");
    if (auto r = lemma1_continuation(md, fp, cfg, trace)) return r;
  }
  return std::nullopt;
}

std::optional<RealizationResult> v_continuation(const Arrangement& target, const SolverConfig& cfg,
                                                std::mt19937_64& rng, std::vector<std::string>& trace) {
  const int mp = target.m_prime();
  const int n0 = target.n() - 2 * mp;
  if (n0 <= target.s()) {
    trace.push_back("v-continuation: reduced degree " + std::to_string(n0) + " leaves no derivative, skipped");
    return std::nullopt;
  }
  const Arrangement reduced = Arrangement::make(n0, target.s(), target.positions());
  const AdmissibilityReport rep = is_admissible(reduced, {cfg.cond_c});
  if (!rep.verdict) {
    trace.push_back("v-continuation: reduced arrangement is not admissible, skipped");
    return std::nullopt;
  }
  trace.push_back("v-continuation: realizing " + format_arrangement(reduced) + " in degree " + std::to_string(n0));
  auto base = hyperbolic_derivative_case(reduced, *rep.rolle_witness, cfg, rng, trace);
  if (!base) base = fallback_search(reduced, reduced.m(), cfg, rng, trace);
  if (!base) return std::nullopt;

  // Recover chain variables of the reduced witness from its roots.
  const auto roots = roots_complex(base->witness_hp);
  const int k = target.size();
  const int pairs = reduced.m();
  std::vector<double> seed(k + 2 * pairs, 0.0);
  const Extraction ex = extract_hp(base->witness_hp, target.s(), cfg.eps_eq);
  std::vector<double> loc;
  {
    std::vector<std::pair<double, int>> ev;
    for (const auto& r : ex.p_roots.real_roots) ev.push_back({r.location, 0});
    for (const auto& r : ex.q_roots.real_roots) ev.push_back({r.location, 1});
    std::sort(ev.begin(), ev.end());
    for (const auto& e : ev)
      if (loc.empty() || e.first - loc.back() >= cfg.eps_eq) loc.push_back(e.first);
  }
  if (static_cast<int>(loc.size()) != k) return std::nullopt;
  for (int i = 0; i < k; ++i) seed[i] = loc[i];
  std::vector<std::pair<double, double>> cp;
  for (const auto& z : roots)
    if (z.imag() > HpReal("1e-20")) cp.push_back({to_double(z.real()), to_double(z.imag())});
  std::sort(cp.begin(), cp.end());
  if (static_cast<int>(cp.size()) != pairs) return std::nullopt;
  for (int j = 0; j < pairs; ++j) {
    seed[k + j] = cp[j].first;
    seed[k + pairs + j] = cp[j].second;
  }
  normalize_seed(seed, k, pairs);
  std::vector<double> factors = cfg.v_factors;
  std::sort(factors.rbegin(), factors.rend());
  for (double f : factors) {
    PinnedSpec sp;
    sp.target = &target;
    sp.pairs = pairs;
    sp.m_prime = mp;
    sp.v = f * cfg.N;
    auto sol = solve_pinned(sp, seed, cfg.eps_eq, &trace, "v-continuation v=" + fmt(*sp.v));
    if (sol) {
      trace.push_back("v-continuation v=" + fmt(*sp.v) + ": realized");
      auto r = make_result(target, *sol, "v_continuation", sol->residual, "pinned");
      if (base->residual_kind == "tau") r.residual = std::max(r.residual, base->residual);
      return r;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string SolverConfig::canonical() const {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_decimal17(v[i]);
    return s;
  };
  std::ostringstream os;
  os << "N = " << fmt(N) << "\n";
  os << "a_schedule = " << list(a_schedule) << "\n";
  os << "b_schedule = " << list(b_schedule) << "\n";
  os << "cond_c = " << (cond_c == CondCMode::Always ? "always" : "hyperbolic-only") << "\n";
  os << "damping = " << fmt(damping) << "\n";
  os << "eps_eq = " << fmt(eps_eq) << "\n";
  os << "eps_fp = " << fmt(eps_fp) << "\n";
  os << "eps_theta = " << fmt(eps_theta) << "\n";
  os << "fallback_starts = " << fallback_starts << "\n";
  os << "max_iterations = " << max_iterations << "\n";
  os << "multistart = " << multistart << "\n";
  os << "seed = " << seed << "\n";
  os << "t_floor = " << fmt(t_floor) << "\n";
  os << "v_factors = " << list(v_factors) << "\n";
  return os.str();
}

std::string SolverConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

Extraction extract_hp(const HpPolynomial& p, int s, double eq_tol) {
  const int n = p.degree();
  if (s < 1 || s >= n) throw InvalidOrder("extract requires 1 <= s < degree");
  const IsolationOptions iso{1e-12, eq_tol};
  return merge_profiles(n, s, isolate_roots(p, iso), isolate_roots(derivative(p, s), iso), eq_tol);
}

RealizationResult solve_fixed_point(const TargetModel& model, const SolverConfig& cfg, double b) {
  if (model.m_prime > 0) throw NotApplicable("fixed-point search needs a hyperbolic derivative (m' = 0)");
  std::mt19937_64 rng(cfg.seed ^ fnv1a(format_arrangement(model.target)));
  std::vector<std::string> trace;
  FixedPointOutcome fp = fixed_point_search(model, cfg, b, nullptr, rng, trace);
  RealizationResult r = fp.result;
  if (model.M == 0 || fp.tmax > cfg.t_floor)
    if (auto ok = polish_fixed_point(model, fp, cfg, b, trace)) r = *ok;
  if (!r.success) {
    r.witness = build_family_polynomial(fp.best);
    r.witness_hp = build_family_polynomial_hp(fp.best);
    try {
      r.achieved = extract_hp(r.witness_hp, model.target.s(), cfg.eps_eq).arrangement;
    } catch (const Error&) {
    }
    r.method = "fixed_point";
    if (model.M > 0 && fp.tmax <= cfg.t_floor) trace.push_back("fixed point collapsed to t = 0");
  }
  r.trace = std::move(trace);
  return r;
}

RealizationResult try_realize(const Arrangement& target, const SolverConfig& cfg) {
  RealizationResult fail;
  fail.target = target;
  const AdmissibilityReport rep = is_admissible(target, {cfg.cond_c});
  if (!rep.verdict) {
    fail.method = "inadmissible";
    for (const auto& v : rep.violations) fail.trace.push_back(std::string(condition_name(v.condition)) + ": " + v.message);
    return fail;
  }
  std::mt19937_64 rng(cfg.seed ^ fnv1a(format_arrangement(target)));
  std::vector<std::string> trace;
  std::optional<RealizationResult> r;
  if (target.m_prime() > 0) r = v_continuation(target, cfg, rng, trace);
  else r = hyperbolic_derivative_case(target, *rep.rolle_witness, cfg, rng, trace);
  if (!r) r = ordering_search(target, cfg, rng, trace);
  if (!r) r = fallback_search(target, target.m(), cfg, rng, trace);
  if (r) {
    r->trace = std::move(trace);
    return *r;
  }
  fail.method = "none";
  fail.trace = std::move(trace);
  return fail;
}

RealizationResult realize(const Arrangement& target, const SolverConfig& cfg) {
  RealizationResult r = try_realize(target, cfg);
  if (r.method == "inadmissible") {
    std::string msg = "target is not a priori admissible";
    for (const auto& t : r.trace) msg += "; " + t;
    throw InvalidArrangement(msg);
  }
  if (!r.success) {
    std::string msg = "no witness found for " + format_arrangement(target);
    if (!r.trace.empty()) msg += "; last: " + r.trace.back();
    throw MaxRestartsExceeded(msg);
  }
  return r;
}

nlohmann::ordered_json to_json(const RealizationResult& r) {
  nlohmann::ordered_json j;
  j["arrangement"] = format_arrangement(r.target);
  j["success"] = r.success;
  j["method"] = r.method;
  j["residual"] = r.residual;
  j["residual_kind"] = r.residual_kind;
  j["b"] = r.b;
  j["v"] = r.v ? nlohmann::ordered_json(*r.v) : nlohmann::ordered_json(nullptr);
  auto coeffs = nlohmann::ordered_json::array();
  for (double c : r.witness.descending()) coeffs.push_back(format_decimal17(c));
  j["witness"] = std::move(coeffs);
  auto hp = nlohmann::ordered_json::array();
  for (const auto& c : r.witness_hp.descending()) hp.push_back(c.str(40, std::ios_base::scientific));
  j["witness_hp"] = std::move(hp);
  j["achieved"] = r.achieved ? nlohmann::ordered_json(format_arrangement(*r.achieved)) : nlohmann::ordered_json(nullptr);
  j["trace"] = r.trace;
  return j;
}

}  // namespace rootarr
