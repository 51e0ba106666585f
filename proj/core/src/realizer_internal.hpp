#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "rootarr/realizer.hpp"
#include "rootarr/roots.hpp"

namespace rootarr::detail {

template <typename T>
BasicPolynomial<T> family_polynomial(const std::vector<T>& w, const std::vector<int>& mult, const std::vector<T>& g,
                                     const std::vector<T>& t, std::optional<double> v, int m_prime) {
  std::vector<T> c{T(1)};
  auto mul = [&c](const std::vector<T>& f) {
    std::vector<T> out(c.size() + f.size() - 1, T(0));
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) out[i + j] += c[i] * f[j];
    c = std::move(out);
  };
  for (std::size_t j = 0; j < w.size(); ++j)
    for (int k = 0; k < mult[j]; ++k) mul({T(-w[j]), T(1)});
  for (std::size_t j = 0; j < g.size(); ++j) mul({g[j] * g[j] + t[j] * t[j], T(-2) * g[j], T(1)});
  if (v) {
    const T inv = T(1) / (T(*v) * T(*v));
    for (int k = 0; k < m_prime; ++k) mul({T(1), T(0), inv});
  }
  return BasicPolynomial<T>(std::move(c));
}

template <typename T>
struct TauValues {
  std::vector<T> eta, zeta, xi, theta;
  T phi = T(0);
  T residual = T(0);
  bool hull_ok = true;
};

template <typename T>
std::vector<Complex<T>> complex_roots(const BasicPolynomial<T>& p) {
  return roots_complex(p);
}

template <typename T>
TauValues<T> tau_eval(const std::vector<T>& w, const std::vector<int>& mult, const std::vector<T>& g,
                      const std::vector<T>& t, double N, std::optional<double> v, int m_prime,
                      const TargetModel& model, double b) {
  const int s = model.target.s();
  const BasicPolynomial<T> P = family_polynomial(w, mult, g, t, v, v ? m_prime : 0);
  const BasicPolynomial<T> Q = derivative(P, s);
  std::vector<Complex<T>> roots = complex_roots(Q);
  if (v && m_prime > 0) {
    // The 2m' roots escaping to infinity with v are dropped.
    std::sort(roots.begin(), roots.end(),
              [](const Complex<T>& a, const Complex<T>& b) { return abs(a.imag()) < abs(b.imag()); });
    roots.resize(roots.size() - static_cast<std::size_t>(2 * m_prime));
  }
  TauValues<T> out;
  for (const auto& z : roots) out.xi.push_back(z.real());
  std::sort(out.xi.begin(), out.xi.end());
  std::vector<T> im;
  for (const auto& z : roots) im.push_back(z.imag() > 0 ? z.imag() : T(0));
  std::sort(im.begin(), im.end());
  const int M = model.M;
  for (int j = 0; j < M; ++j) out.theta.push_back(im[im.size() - M + j]);

  const int nxi = static_cast<int>(out.xi.size());
  auto xi_at = [&](int idx) -> T {
    if (idx <= 0) return T(0);
    if (idx > nxi) return T(1);
    return out.xi[idx - 1];
  };
  for (const auto& e : model.eta) {
    switch (e.rule) {
      case EtaRule::TieToU:
      case EtaRule::Coincide:
        out.eta.push_back(xi_at(e.xi));
        break;
      case EtaRule::Spread: {
        const T lo = xi_at(e.lo), hi = xi_at(e.hi);
        out.eta.push_back(lo + T(e.slot + 1) * (hi - lo) / T(e.run + 1));
        break;
      }
    }
  }
  for (const auto& ph : model.phi) {
    const T anchor = ph.anchor_is_w ? w[ph.anchor] : xi_at(ph.anchor);
    out.phi += abs(xi_at(ph.xi) - anchor - T(ph.shift) * T(b));
  }
  if (M > 0) {
    T prod(1), sum_theta(0);
    for (const auto& ti : t) prod *= ti;
    for (const auto& th : out.theta) sum_theta += th;
    T np1(1);
    for (int j = 0; j < M; ++j) np1 *= T(N + 1);
    for (int i = 0; i < M; ++i) {
      const T z = t[i] - sum_theta / T(3 * M) - t[i] * abs(prod - T(1)) / (T(3) * np1) - t[i] * out.phi / T(12 * M);
      out.zeta.push_back(abs(z));
    }
  }
  // Convex hull of the roots of P contains the roots of P^(s).
  T lo_hull(0), hi_hull(0), tmax(0);
  bool first = true;
  auto grow = [&](const T& x) {
    if (first || x < lo_hull) lo_hull = x;
    if (first || x > hi_hull) hi_hull = x;
    first = false;
  };
  for (const auto& x : w) grow(x);
  for (const auto& x : g) grow(x);
  for (const auto& x : t) tmax = std::max(tmax, T(abs(x)));
  if (!(v && m_prime > 0)) {
    const T slack = T(1e-7) * (T(1) + hi_hull - lo_hull);
    for (const auto& x : out.xi)
      if (x < lo_hull - slack || x > hi_hull + slack) out.hull_ok = false;
    for (const auto& th : out.theta)
      if (th > tmax + slack) out.hull_ok = false;
  }
  // Residual in h order, then t.
  std::size_t k = 0;
  for (const auto& slot : model.h_order) {
    const T h = slot.is_g ? g[slot.index] : w[slot.index];
    out.residual = std::max(out.residual, T(abs(out.eta[k++] - h)));
  }
  for (int i = 0; i < M; ++i) out.residual = std::max(out.residual, T(abs(out.zeta[i] - t[i])));
  return out;
}

// Dense linear solve with partial pivoting; returns false if singular.
template <typename T>
bool solve_linear(std::vector<std::vector<T>> a, std::vector<T> rhs, std::vector<T>& x) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    if (a[piv][col] == T(0)) return false;
    std::swap(a[piv], a[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const T f = a[r][col] / a[col][col];
      if (f == T(0)) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  x.assign(n, T(0));
  for (std::size_t i = n; i-- > 0;) {
    T acc = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return true;
}

template <typename T>
T max_abs(const std::vector<T>& v) {
  T m(0);
  for (const auto& x : v) m = std::max(m, T(abs(x)));
  return m;
}

// Levenberg-Marquardt with a forward-difference Jacobian. Works for under-,
// over- and exactly determined systems; in the underdetermined case it
// converges to a solution near the starting point.
template <typename T>
struct LmResult {
  std::vector<T> x;
  T residual = T(0);
  int iterations = 0;
};

template <typename T>
LmResult<T> levenberg_marquardt(const std::function<std::vector<T>(const std::vector<T>&)>& f, std::vector<T> x,
                                int max_iter, const T& tol, const T& fd_step) {
  LmResult<T> out;
  std::vector<T> fx = f(x);
  auto norm2 = [](const std::vector<T>& v) {
    T s(0);
    for (const auto& e : v) s += e * e;
    return s;
  };
  T cost = norm2(fx);
  T mu(1e-3);
  const std::size_t n = x.size();
  int it = 0;
  for (; it < max_iter && max_abs(fx) > tol; ++it) {
    const std::size_t m = fx.size();
    std::vector<std::vector<T>> J(m, std::vector<T>(n, T(0)));
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<T> xp = x;
      const T hstep = fd_step * (T(1) + abs(x[j]));
      xp[j] += hstep;
      const std::vector<T> fp = f(xp);
      for (std::size_t i = 0; i < m; ++i) J[i][j] = (fp[i] - fx[i]) / hstep;
    }
    std::vector<std::vector<T>> A(n, std::vector<T>(n, T(0)));
    std::vector<T> g(n, T(0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t a = 0; a < n; ++a) {
        if (J[i][a] == T(0)) continue;
        g[a] += J[i][a] * fx[i];
        for (std::size_t b = 0; b < n; ++b) A[a][b] += J[i][a] * J[i][b];
      }
    bool improved = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      std::vector<std::vector<T>> Am = A;
      for (std::size_t a = 0; a < n; ++a) Am[a][a] += mu * (T(1) + A[a][a]);
      std::vector<T> rhs(n);
      for (std::size_t a = 0; a < n; ++a) rhs[a] = -g[a];
      std::vector<T> step;
      if (!solve_linear(Am, rhs, step)) {
        mu *= T(10);
        continue;
      }
      std::vector<T> xn = x;
      for (std::size_t a = 0; a < n; ++a) xn[a] += step[a];
      std::vector<T> fn = f(xn);
      const T cn = norm2(fn);
      if (cn < cost) {
        x = std::move(xn);
        fx = std::move(fn);
        cost = cn;
        mu = std::max(mu / T(5), T(1e-30));
        improved = true;
        break;
      }
      mu *= T(8);
    }
    if (!improved) break;
  }
  out.x = std::move(x);
  out.residual = max_abs(fx);
  out.iterations = it;
  return out;
}

// Chain-variable formulation: unknowns are the locations c_i of every chain
// position and the pairs g_j +- i t_j; equations pin the derivative roots
// demanded by the target.
struct PinnedSpec {
  const Arrangement* target = nullptr;
  int pairs = 0;
  int m_prime = 0;  // (1 + x^2/v^2) factors
  std::optional<double> v;
  bool gauge = true;
  double gauge_lo = 0.0, gauge_hi = 1.0;
  std::optional<std::pair<int, double>> t_pin;
  // Fixed-point equations of tau (rules 1 and 3, the product of t's, and
  // the b-anchors) replace the gauge when set.
  const TargetModel* model = nullptr;
  double b = 0.0;
};

inline int pinned_unknowns(const PinnedSpec& sp) { return sp.target->size() + 2 * sp.pairs; }

template <typename T>
BasicPolynomial<T> pinned_polynomial(const PinnedSpec& sp, const std::vector<T>& x) {
  const auto& pos = sp.target->positions();
  std::vector<T> w, g, t;
  std::vector<int> mult;
  for (int i = 0; i < sp.target->size(); ++i)
    if (pos[i].p_mult > 0) {
      w.push_back(x[i]);
      mult.push_back(pos[i].p_mult);
    }
  const int k = sp.target->size();
  for (int j = 0; j < sp.pairs; ++j) {
    g.push_back(x[k + j]);
    t.push_back(x[k + sp.pairs + j]);
  }
  return family_polynomial(w, mult, g, t, sp.v, sp.m_prime);
}

// Only the coincidence equations (no gauge, no fixed-point extras).
template <typename T>
std::vector<T> coincidence_equations(const PinnedSpec& sp, const std::vector<T>& x) {
  const auto& pos = sp.target->positions();
  const int n = sp.target->n(), s = sp.target->s();
  const BasicPolynomial<T> P = pinned_polynomial(sp, x);
  std::vector<T> out;
  int maxq = 0;
  for (const auto& p : pos)
    if (p.p_mult <= s) maxq = std::max(maxq, p.q_mult);
  BasicPolynomial<T> D = derivative(P, s);
  std::vector<BasicPolynomial<T>> ders;
  for (int j = 0; j < maxq; ++j) {
    ders.push_back(D);
    D = D.derivative();
  }
  for (int i = 0; i < sp.target->size(); ++i) {
    if (pos[i].p_mult > s) continue;
    for (int j = 0; j < pos[i].q_mult; ++j) {
      T norm(1);
      for (int r = n - s - j + 1; r <= n; ++r) norm *= T(r);
      out.push_back(ders[j](x[i]) / norm);
    }
  }
  return out;
}

template <typename T>
std::vector<T> pinned_equations(const PinnedSpec& sp, const std::vector<T>& x) {
  std::vector<T> out = coincidence_equations(sp, x);
  const int k = sp.target->size();
  if (sp.model) {
    const TargetModel& md = *sp.model;
    // Location of the chain position holding xi index idx (0 and end are
    // the fixed endpoints).
    const int nxi = static_cast<int>(md.xi_roles.size()) - 1;
    auto xi_loc = [&](int idx) -> T {
      if (idx <= 0) return T(0);
      if (idx > nxi) return T(1);
      return x[md.xi_roles[idx].position];
    };
    for (std::size_t h = 0; h < md.h_order.size(); ++h) {
      const HSlot& slot = md.h_order[h];
      const EtaSpec& e = md.eta[h];
      const T cur = slot.is_g ? x[k + slot.index] : x[md.w_position[slot.index]];
      if (e.rule == EtaRule::TieToU) out.push_back(cur - xi_loc(e.xi));
      if (e.rule == EtaRule::Spread) {
        const T lo = xi_loc(e.lo), hi = xi_loc(e.hi);
        out.push_back(cur - (lo + T(e.slot + 1) * (hi - lo) / T(e.run + 1)));
      }
    }
    if (md.M > 0) {
      T prod(1);
      for (int j = 0; j < sp.pairs; ++j) prod *= x[k + sp.pairs + j];
      out.push_back(prod - T(1));
    }
    for (const auto& ph : md.phi) {
      if (ph.shift == 0) continue;
      const T at = x[md.xi_roles[ph.xi].position];
      const T anchor = ph.anchor_is_w ? x[md.w_position[ph.anchor]] : xi_loc(ph.anchor);
      out.push_back(at - anchor - T(ph.shift) * T(sp.b));
    }
  } else if (sp.gauge) {
    out.push_back(x[0] - T(sp.gauge_lo));
    if (k >= 2) out.push_back(x[k - 1] - T(sp.gauge_hi));
    else if (sp.pairs > 0 && !sp.t_pin) out.push_back(x[k + sp.pairs] - T(1));
  }
  if (sp.t_pin) out.push_back(x[k + sp.pairs + sp.t_pin->first] - T(sp.t_pin->second));
  return out;
}

}  // namespace rootarr::detail
