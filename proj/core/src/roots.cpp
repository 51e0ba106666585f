#include "rootarr/roots.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rootarr {

// ---------------------------------------------------------------------------
// Square-free decomposition

std::vector<SquareFreeFactor> square_free_decompose(const ExactPolynomial& p) {
  std::vector<SquareFreeFactor> out;
  if (p.degree() < 1) return out;
  const ExactPolynomial f = p.monic();
  const ExactPolynomial df = f.derivative();
  ExactPolynomial a = gcd(f, df);
  ExactPolynomial b = divmod(f, a).first;
  ExactPolynomial c = divmod(df, a).first;
  ExactPolynomial d = c - b.derivative();
  int i = 1;
  while (b.degree() >= 1) {
    const ExactPolynomial g = gcd(b, d);
    if (g.degree() >= 1) out.push_back({g, i});
    const ExactPolynomial nb = divmod(b, g).first;
    c = divmod(d, g).first;
    b = nb;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

std::vector<SquareFreeFactor> square_free_decompose(const Polynomial& p) {
  return square_free_decompose(p.exact());
}

// ---------------------------------------------------------------------------
// Sturm sequences and exact isolation

namespace {

using detail::ClearedPolynomial;

ClearedPolynomial from_integers(std::vector<Integer> coeffs) {
  ClearedPolynomial c;
  c.coeffs = std::move(coeffs);
  bool fits = true;
  for (const auto& v : c.coeffs) {
    const mpz_srcptr z = v.backend().data();
    fits = fits && mpz_fits_slong_p(z);
    c.magnitude.push_back(std::abs(mpz_get_d(z)));
  }
  if (fits)
    for (const auto& v : c.coeffs) c.small.push_back(mpz_get_si(v.backend().data()));
  return c;
}

ClearedPolynomial cleared(const ExactPolynomial& p) { return from_integers(detail::integer_multiple(p)); }

// Sign of sum c_i x^i at x = a/b, from the homogenized form sum c_i a^i b^(n-i).
int sign_at(const ClearedPolynomial& c, const Rational& x) {
  const std::size_t n = c.coeffs.size();
  if (n == 0) return 0;
  const mpz_srcptr za = mpq_numref(x.backend().data());
  const mpz_srcptr zb = mpq_denref(x.backend().data());
  // Exact in 128-bit integers when a floating bound on every partial sum
  // stays far below 2^127.
  if (!c.small.empty() && mpz_fits_slong_p(za) && mpz_fits_slong_p(zb)) {
    const double fa = std::abs(mpz_get_d(za)), fb = mpz_get_d(zb);
    double bound = 0, fpw = 1;
    for (std::size_t i = n; i-- > 0;) {
      bound = bound * fa + c.magnitude[i] * fpw;
      fpw *= fb;
    }
    if (bound < 1e37 && fpw < 1e37) {
      const __int128 ia = mpz_get_si(za), ib = mpz_get_si(zb);
      __int128 acc = c.small[n - 1], pw = 1;
      for (std::size_t i = n - 1; i-- > 0;) {
        pw *= ib;
        acc = acc * ia + static_cast<__int128>(c.small[i]) * pw;
      }
      return (acc > 0) - (acc < 0);
    }
  }
  const Integer a = numerator(x);
  const Integer b = denominator(x);
  Integer acc = c.coeffs.back();
  Integer pw(1), term;
  for (std::size_t i = n - 1; i-- > 0;) {
    pw *= b;
    acc *= a;
    term = c.coeffs[i];
    term *= pw;
    acc += term;
  }
  return acc.sign();
}

}  // namespace

SturmSequence::SturmSequence(const ExactPolynomial& squarefree) {
  // Built over the integers; every member is a positive multiple of the
  // rational Sturm polynomial, so sign variations are unchanged.
  std::vector<std::vector<Integer>> seq{cleared(squarefree).coeffs};
  detail::make_primitive(seq[0]);
  if (squarefree.degree() >= 1) {
    std::vector<Integer> d;
    for (std::size_t i = 1; i < seq[0].size(); ++i) d.push_back(seq[0][i] * static_cast<long>(i));
    detail::make_primitive(d);
    seq.push_back(std::move(d));
    while (seq.back().size() > 1) {
      std::vector<Integer> r = detail::positive_remainder(seq[seq.size() - 2], seq.back());
      if (r.empty()) break;
      for (auto& v : r) v = -v;
      seq.push_back(std::move(r));
    }
  }
  for (auto& q : seq) {
    std::vector<Rational> rc;
    for (const auto& v : q) rc.emplace_back(v);
    chain_.emplace_back(std::move(rc));
    cleared_.push_back(from_integers(std::move(q)));
  }
}

int SturmSequence::variations(const Rational& x) const {
  int v = 0;
  int last = 0;
  for (const auto& q : cleared_) {
    const int sg = sign_at(q, x);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++v;
    last = sg;
  }
  return v;
}

int SturmSequence::count(const Rational& a, const Rational& b) const { return variations(a) - variations(b); }

namespace {

Rational cauchy_bound(const ExactPolynomial& p) {
  Rational m = 0;
  const Rational lc = abs(p.leading());
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rational(abs(p.coeff(i)) / lc));
  return m + 1;
}

// va and vb are the Sturm variations at a and b.
void isolate_rec(const ClearedPolynomial& p, const SturmSequence& st, const Rational& a, const Rational& b,
                 int va, int vb, std::vector<RootInterval>& out) {
  const int cnt = va - vb;
  if (cnt == 0) return;
  if (cnt == 1) {
    if (sign_at(p, b) == 0) {
      out.push_back({b, b});
      return;
    }
    Rational lo = a;
    Rational hi = b;
    // The left endpoint may be a root that belongs to the previous interval;
    // shrink until both ends are non-roots.
    while (sign_at(p, lo) == 0) {
      const Rational mid = (lo + hi) / 2;
      if (sign_at(p, mid) == 0) {
        out.push_back({mid, mid});
        return;
      }
      if (st.count(lo, mid) == 1) hi = mid;
      else lo = mid;
    }
    out.push_back({lo, hi});
    return;
  }
  const Rational mid = (a + b) / 2;
  const int vm = st.variations(mid);
  isolate_rec(p, st, a, mid, va, vm, out);
  isolate_rec(p, st, mid, b, vm, vb, out);
}

}  // namespace

std::vector<RootInterval> isolate_intervals(const ExactPolynomial& squarefree) {
  std::vector<RootInterval> out;
  if (squarefree.degree() < 1) return out;
  const SturmSequence st(squarefree);
  const Rational bound = cauchy_bound(squarefree);
  const Rational a = -bound;
  const Rational b = bound;
  isolate_rec(cleared(squarefree), st, a, b, st.variations(a), st.variations(b), out);
  return out;
}

namespace {

double refine_cleared(const ExactPolynomial& squarefree, const ClearedPolynomial& c, const RootInterval& iv,
                      double refine_to) {
  if (iv.is_exact()) return to_double(iv.lo);
  Rational lo = iv.lo;
  Rational hi = iv.hi;
  const int slo = sign_at(c, lo);
  const Rational coarse = Rational(std::max(refine_to, 1e-6));
  while (hi - lo > coarse) {
    const Rational mid = (lo + hi) / 2;
    const int sm = sign_at(c, mid);
    if (sm == 0) return to_double(mid);
    if (sm == slo) lo = mid;
    else hi = mid;
  }
  if (refine_to >= 1e-6) return to_double((lo + hi) / 2);

  // Safeguarded Newton in high precision on the bracket [lo, hi].
  const HpPolynomial f = squarefree.cast<HpReal>();
  const HpPolynomial df = f.derivative();
  HpReal a = HpReal(boost::multiprecision::numerator(lo)) / HpReal(boost::multiprecision::denominator(lo));
  HpReal b = HpReal(boost::multiprecision::numerator(hi)) / HpReal(boost::multiprecision::denominator(hi));
  HpReal x = (a + b) / 2;
  const HpReal fa_sign = f(a);
  const HpReal tol = HpReal(refine_to) / 100;
  for (int it = 0; it < 200; ++it) {
    const HpReal fx = f(x);
    if (fx == 0) break;
    if ((fx > 0) == (fa_sign > 0)) a = x;
    else b = x;
    const HpReal dfx = df(x);
    HpReal nx = (dfx != 0) ? HpReal(x - fx / dfx) : HpReal((a + b) / 2);
    if (!(nx > a && nx < b)) nx = (a + b) / 2;
    const HpReal step = abs(nx - x);
    x = nx;
    if (step < tol && b - a < HpReal(1)) break;
  }
  return to_double(x);
}

}  // namespace

double refine_root(const ExactPolynomial& squarefree, const RootInterval& iv, double refine_to) {
  return refine_cleared(squarefree, cleared(squarefree), iv, refine_to);
}

JointRoots isolate_joint(const std::vector<ExactPolynomial>& polys, double refine_to) {
  if (!(refine_to > 0)) throw InvalidTolerance("refine_to must be positive");
  struct Tagged {
    std::size_t poly;
    SquareFreeFactor f;
  };
  std::vector<Tagged> factors;
  ExactPolynomial lcm = ExactPolynomial::constant(Rational(1));
  for (std::size_t k = 0; k < polys.size(); ++k) {
    for (auto& f : square_free_decompose(polys[k])) {
      const ExactPolynomial g = gcd(lcm, f.factor);
      lcm = lcm * divmod(f.factor, g).first;
      factors.push_back({k, std::move(f)});
    }
  }
  std::vector<ClearedPolynomial> factor_signs;
  for (const auto& t : factors) factor_signs.push_back(cleared(t.f.factor));
  const ClearedPolynomial lcm_signs = cleared(lcm);
  JointRoots out;
  out.intervals = isolate_intervals(lcm);
  out.multiplicity.assign(polys.size(), std::vector<int>(out.intervals.size(), 0));
  out.locations.reserve(out.intervals.size());
  for (std::size_t i = 0; i < out.intervals.size(); ++i) {
    const RootInterval& iv = out.intervals[i];
    for (std::size_t k = 0; k < factors.size(); ++k) {
      const Tagged& t = factors[k];
      bool vanishes = false;
      if (iv.is_exact()) {
        vanishes = (t.f.factor(iv.lo) == 0);
      } else {
        vanishes = sign_at(factor_signs[k], iv.lo) * sign_at(factor_signs[k], iv.hi) < 0;
      }
      if (vanishes) out.multiplicity[t.poly][i] = t.f.exponent;
    }
    out.locations.push_back(refine_cleared(lcm, lcm_signs, iv, refine_to));
  }
  return out;
}

RootProfile isolate_roots(const ExactPolynomial& p, double refine_to) {
  if (!(refine_to > 0)) throw InvalidTolerance("refine_to must be positive");
  if (p.degree() < 1) throw InvalidOrder("root isolation needs degree >= 1");
  const JointRoots jr = isolate_joint({p}, refine_to);
  RootProfile prof;
  for (std::size_t i = 0; i < jr.intervals.size(); ++i)
    prof.real_roots.push_back({jr.locations[i], jr.multiplicity[0][i]});
  prof.complex_pairs = (p.degree() - prof.real_count()) / 2;
  return prof;
}

// ---------------------------------------------------------------------------
// Complex roots

namespace {

template <typename T>
void enforce_conjugate_symmetry(std::vector<Complex<T>>& roots) {
  std::vector<std::size_t> upper, lower;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].imag() > 0) upper.push_back(i);
    else if (roots[i].imag() < 0) lower.push_back(i);
  }
  auto by_abs_imag = [&](std::size_t a, std::size_t b) { return abs(roots[a].imag()) < abs(roots[b].imag()); };
  // Unequal halves can only come from roots numerically on the real axis;
  // the ones closest to it are snapped.
  while (upper.size() > lower.size()) {
    auto it = std::min_element(upper.begin(), upper.end(), by_abs_imag);
    roots[*it] = Complex<T>(roots[*it].real(), T(0));
    upper.erase(it);
  }
  while (lower.size() > upper.size()) {
    auto it = std::min_element(lower.begin(), lower.end(), by_abs_imag);
    roots[*it] = Complex<T>(roots[*it].real(), T(0));
    lower.erase(it);
  }
  // A partner must mirror the root more closely than either sits off the
  // axis; two distinct real roots carrying opposite noise do not qualify
  // and are snapped instead of being averaged into a fake pair.
  std::vector<bool> used(lower.size(), false);
  for (std::size_t iu : upper) {
    const Complex<T> target = std::conj(roots[iu]);
    std::size_t best = lower.size();
    T best_d = T(0);
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j]) continue;
      const T d = abs(roots[lower[j]] - target);
      if (best == lower.size() || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best == lower.size() ||
        best_d > std::max(abs(roots[iu].imag()), abs(roots[lower[best]].imag()))) {
      roots[iu] = Complex<T>(roots[iu].real(), T(0));
      continue;
    }
    used[best] = true;
    const std::size_t il = lower[best];
    const T re = (roots[iu].real() + roots[il].real()) / 2;
    const T im = (roots[iu].imag() - roots[il].imag()) / 2;
    roots[iu] = Complex<T>(re, im);
    roots[il] = Complex<T>(re, T(-im));
  }
  for (std::size_t j = 0; j < lower.size(); ++j)
    if (!used[j]) roots[lower[j]] = Complex<T>(roots[lower[j]].real(), T(0));
}

template <typename T>
std::vector<Complex<T>> aberth(const BasicPolynomial<T>& p, std::vector<Complex<T>> z, const T& tol, int max_iter) {
  const int n = p.degree();
  const BasicPolynomial<T> dp = p.derivative();
  for (int it = 0; it < max_iter; ++it) {
    T max_step = T(0);
    for (int k = 0; k < n; ++k) {
      const Complex<T> pz = p(z[k]);
      if (pz == Complex<T>(T(0))) continue;
      const Complex<T> ratio = pz / dp(z[k]);
      Complex<T> sum(T(0));
      for (int j = 0; j < n; ++j)
        if (j != k) {
          const Complex<T> diff = z[k] - z[j];
          if (diff != Complex<T>(T(0))) sum += Complex<T>(T(1)) / diff;
        }
      const Complex<T> denom = Complex<T>(T(1)) - ratio * sum;
      const Complex<T> w = (denom == Complex<T>(T(0))) ? ratio : Complex<T>(ratio / denom);
      z[k] -= w;
      const T mag = abs(w) / (T(1) + abs(z[k]));
      if (mag > max_step) max_step = mag;
    }
    if (max_step < tol) break;
  }
  return z;
}

std::vector<std::complex<double>> companion_eigenvalues(const FloatPolynomial& p) {
  const int n = p.degree();
  std::vector<std::complex<double>> out;
  if (n < 1) return out;
  if (n == 1) {
    out.emplace_back(-p.coeff(0) / p.coeff(1), 0.0);
    return out;
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) c(i, n - 1) = -p.coeff(i) / p.leading();
  // Parlett-Reinsch balancing with power-of-two scalings.
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      const double r = c.row(i).lpNorm<1>() - std::abs(c(i, i));
      const double k = c.col(i).lpNorm<1>() - std::abs(c(i, i));
      if (r == 0.0 || k == 0.0) continue;
      int e = 0;
      std::frexp(r / k, &e);
      e /= 2;
      if (e != 0) {
        const double f = std::ldexp(1.0, e);
        if ((k * f + r / f) < 0.95 * (k + r)) {
          c.col(i) *= f;
          c.row(i) /= f;
          changed = true;
        }
      }
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

}  // namespace

std::vector<std::complex<double>> roots_complex(const FloatPolynomial& p) {
  if (p.degree() < 1) throw InvalidOrder("root computation needs degree >= 1");
  auto z = companion_eigenvalues(p);
  enforce_conjugate_symmetry(z);
  return z;
}

std::vector<Complex<HpReal>> roots_complex(const HpPolynomial& p) {
  if (p.degree() < 1) throw InvalidOrder("root computation needs degree >= 1");
  const HpPolynomial mp = p.monic();
  // Seed Aberth with the double-precision eigenvalues, nudged off any exact
  // coincidences so the iteration can separate them.
  const auto seed = companion_eigenvalues(mp.cast<double>());
  std::vector<Complex<HpReal>> z;
  z.reserve(seed.size());
  for (std::size_t i = 0; i < seed.size(); ++i) {
    const double jitter = 1e-9 * static_cast<double>(i + 1);
    z.emplace_back(HpReal(seed[i].real() + jitter), HpReal(seed[i].imag() + 0.5 * jitter));
  }
  z = aberth(mp, std::move(z), HpReal("1e-60"), 400);
  enforce_conjugate_symmetry(z);
  return z;
}

std::vector<std::complex<double>> roots_complex(const Polynomial& p) {
  if (p.kind() == CoefficientKind::Float) return roots_complex(p.to_float());
  std::vector<std::complex<double>> out;
  for (const auto& z : roots_complex(p.to_hp())) out.emplace_back(to_double(z.real()), to_double(z.imag()));
  return out;
}

// ---------------------------------------------------------------------------
// Clustering and the floating isolation paths

template <typename T>
RootProfile cluster_roots(const std::vector<Complex<T>>& roots, double eps) {
  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  const T teps(eps);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (abs(roots[i] - roots[j]) < teps) parent[find(i)] = find(j);

  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);

  RootProfile prof;
  int real_total = 0;
  std::vector<Complex<T>> centroids;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    if (g.size() > 1) prof.cluster_ambiguity = true;
    T re(0), im(0);
    for (std::size_t i : g) {
      re += roots[i].real();
      im += roots[i].imag();
    }
    re /= T(static_cast<long>(g.size()));
    im /= T(static_cast<long>(g.size()));
    centroids.emplace_back(re, im);
    if (abs(im) < teps) {
      prof.real_roots.push_back({to_double(re), static_cast<int>(g.size())});
      real_total += static_cast<int>(g.size());
    }
  }
  // A multiple root perturbed by rounding spreads by about eps_machine^(1/k);
  // distinct groups that are still suspiciously close are flagged as well.
  const T near(std::sqrt(eps));
  for (std::size_t i = 0; i < centroids.size(); ++i)
    for (std::size_t j = i + 1; j < centroids.size(); ++j)
      if (abs(centroids[i] - centroids[j]) < near) prof.cluster_ambiguity = true;
  std::sort(prof.real_roots.begin(), prof.real_roots.end(),
            [](const RealRoot& a, const RealRoot& b) { return a.location < b.location; });
  prof.complex_pairs = (static_cast<int>(n) - real_total) / 2;
  return prof;
}

template RootProfile cluster_roots<double>(const std::vector<Complex<double>>&, double);
template RootProfile cluster_roots<HpReal>(const std::vector<Complex<HpReal>>&, double);

RootProfile isolate_roots(const FloatPolynomial& p, const IsolationOptions& opts) {
  if (!(opts.refine_to > 0) || !(opts.cluster_eps > 0)) throw InvalidTolerance("tolerances must be positive");
  return cluster_roots(roots_complex(p), opts.cluster_eps);
}

RootProfile isolate_roots(const HpPolynomial& p, const IsolationOptions& opts) {
  if (!(opts.refine_to > 0) || !(opts.cluster_eps > 0)) throw InvalidTolerance("tolerances must be positive");
  return cluster_roots(roots_complex(p), opts.cluster_eps);
}

RootProfile isolate_roots(const Polynomial& p, const IsolationOptions& opts) {
  switch (p.kind()) {
    case CoefficientKind::Exact:
      return isolate_roots(p.exact(), opts.refine_to);
    case CoefficientKind::Float:
      return isolate_roots(p.to_float(), opts);
    case CoefficientKind::HighPrecision:
      break;
  }
  return isolate_roots(p.to_hp(), opts);
}

}  // namespace rootarr
