#pragma once

// Dense polynomials over a complex backend, lowest degree first, carrying an
// explicit power-of-two scale: value(X) = 2^scale2 * sum c[k] X^k. The scale
// delays overflow for the builtin backends; multiprecision backends never
// need rescaling and keep scale2 = 0.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "zrs/numeric.hpp"

namespace zrs {

template <class C> struct ComplexPoly {
  std::vector<C> c;
  int scale2 = 0;

  ComplexPoly() = default;
  explicit ComplexPoly(std::vector<C> cs, int s2 = 0) : c(std::move(cs)), scale2(s2) {
    strip_exact_zeros();
  }

  static ComplexPoly zero() { return ComplexPoly(); }
  static ComplexPoly constant(const C& v) {
    ComplexPoly p;
    if (!(v == C(0))) p.c.assign(1, v);
    return p;
  }
  static ComplexPoly x() {
    ComplexPoly p;
    p.c = {C(0), C(1)};
    return p;
  }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  C lead() const { return c.empty() ? C(0) : c.back(); }

  void strip_exact_zeros() {
    while (!c.empty() && c.back() == C(0)) c.pop_back();
    if (c.empty()) scale2 = 0;
  }
};

template <class C> real_t<C> coeff_max(const ComplexPoly<C>& p) {
  real_t<C> m(0);
  for (const C& v : p.c) {
    real_t<C> a = abs_c(v);
    if (a > m) m = a;
  }
  return m;
}

// log2 of the scaled sup-norm; -infinity substitute for the zero polynomial.
template <class C> double log2_norm(const ComplexPoly<C>& p) {
  real_t<C> m = coeff_max(p);
  if (m == real_t<C>(0)) return -1e300;
  return to_double(log_r(m)) / 0.6931471805599453 + p.scale2;
}

// Builtin backends renormalize when the sup-norm exponent drifts past 2^±256.
template <class C> void normalize_scale(ComplexPoly<C>& p) {
  using R = real_t<C>;
  if constexpr (std::is_floating_point_v<R>) {
    if (p.c.empty()) return;
    R m = coeff_max(p);
    if (m == R(0)) {
      p.c.clear();
      p.scale2 = 0;
      return;
    }
    int e = 0;
    std::frexp(m, &e);
    if (e > 256 || e < -256) {
      for (C& v : p.c) v = ldexp_c(v, -e);
      p.scale2 += e;
    }
  }
}

template <class C> ComplexPoly<C> scaled_by(const ComplexPoly<C>& p, const C& k) {
  ComplexPoly<C> r = p;
  for (C& v : r.c) v *= k;
  r.strip_exact_zeros();
  normalize_scale(r);
  return r;
}

template <class C> ComplexPoly<C> operator+(const ComplexPoly<C>& a, const ComplexPoly<C>& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  ComplexPoly<C> r;
  r.scale2 = std::max(a.scale2, b.scale2);
  r.c.assign(std::max(a.c.size(), b.c.size()), C(0));
  const int da = a.scale2 - r.scale2, db = b.scale2 - r.scale2;
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += ldexp_c(a.c[i], da);
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += ldexp_c(b.c[i], db);
  r.strip_exact_zeros();
  normalize_scale(r);
  return r;
}

template <class C> ComplexPoly<C> operator-(const ComplexPoly<C>& a, const ComplexPoly<C>& b) {
  return a + scaled_by(b, C(-1));
}

template <class C> ComplexPoly<C> operator*(const ComplexPoly<C>& a, const ComplexPoly<C>& b) {
  if (a.is_zero() || b.is_zero()) return ComplexPoly<C>::zero();
  ComplexPoly<C> r;
  r.scale2 = a.scale2 + b.scale2;
  r.c.assign(a.c.size() + b.c.size() - 1, C(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.strip_exact_zeros();
  normalize_scale(r);
  return r;
}

template <class C> C eval(const ComplexPoly<C>& p, const C& x) {
  C acc(0);
  for (size_t i = p.c.size(); i-- > 0;) acc = acc * x + p.c[i];
  return ldexp_c(acc, p.scale2);
}

// Termwise magnitude bound sum |c_k||x|^k; the cancellation reference for
// evaluation residuals.
template <class C> real_t<C> eval_bound(const ComplexPoly<C>& p, const C& x) {
  using R = real_t<C>;
  R ax = abs_c(x);
  R acc(0), pw(1);
  for (size_t i = 0; i < p.c.size(); ++i) {
    acc += abs_c(p.c[i]) * pw;
    pw *= ax;
  }
  return ldexp_r(acc, p.scale2);
}

template <class C>
std::pair<ComplexPoly<C>, ComplexPoly<C>> divmod(const ComplexPoly<C>& a, const ComplexPoly<C>& b) {
  if (b.is_zero()) throw error("poly division by zero polynomial");
  if (a.degree() < b.degree()) return {ComplexPoly<C>::zero(), a};
  std::vector<C> rem = a.c;
  const int dq = a.degree() - b.degree();
  std::vector<C> quo(static_cast<size_t>(dq) + 1, C(0));
  const C inv_lead = C(1) / b.lead();
  for (int k = dq; k >= 0; --k) {
    C f = rem[static_cast<size_t>(k) + b.degree()] * inv_lead;
    quo[static_cast<size_t>(k)] = f;
    if (f == C(0)) continue;
    for (size_t j = 0; j < b.c.size(); ++j)
      rem[static_cast<size_t>(k) + j] -= f * b.c[j];
  }
  rem.resize(static_cast<size_t>(b.degree() > 0 ? b.degree() : 0));
  ComplexPoly<C> q(std::move(quo), a.scale2 - b.scale2);
  ComplexPoly<C> r(std::move(rem), a.scale2);
  normalize_scale(q);
  return {q, r};
}

// Division that the calling identity guarantees to be exact; a remainder above
// rel_tol * |dividend| signals precision exhaustion, not a math bug.
template <class C>
ComplexPoly<C> exact_div(const ComplexPoly<C>& a, const ComplexPoly<C>& b,
                         const real_t<C>& rel_tol, const char* what, int level = -1) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) {
    const double lhs = log2_norm(r);
    const double rhs = log2_norm(a) + to_double(log_r(rel_tol)) / 0.6931471805599453;
    if (lhs > rhs)
      throw numerical_breakdown(std::string("inexact polynomial division in ") + what, level);
  }
  return q;
}

// Reconstruct a polynomial of known degree from samples on a circle of the
// given radius (inverse DFT at the roots of unity); O(deg^2).
template <class C, class F>
ComplexPoly<C> interpolate_on_circle(int deg, const real_t<C>& radius, F&& fn) {
  using R = real_t<C>;
  const int m = deg + 1;
  const R two_pi = R(2) * pi_v<R>();
  std::vector<C> nodes(static_cast<size_t>(m)), vals(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    R th = two_pi * R(j) / R(m);
    using std::cos;
    using std::sin;
    nodes[static_cast<size_t>(j)] = C(radius * cos(th), radius * sin(th));
    vals[static_cast<size_t>(j)] = fn(nodes[static_cast<size_t>(j)]);
  }
  std::vector<C> coef(static_cast<size_t>(m), C(0));
  R rpow(1);
  for (int k = 0; k < m; ++k) {
    C acc(0);
    for (int j = 0; j < m; ++j) {
      R th = -two_pi * R((static_cast<long>(j) * k) % m) / R(m);
      using std::cos;
      using std::sin;
      acc += vals[static_cast<size_t>(j)] * C(cos(th), sin(th));
    }
    coef[static_cast<size_t>(k)] = acc / (R(m) * rpow);
    rpow *= radius;
  }
  ComplexPoly<C> p(std::move(coef), 0);
  normalize_scale(p);
  return p;
}

namespace detail {

// A circle reconstruction together with its per-coefficient noise estimate.
// Inverse-DFT averaging turns value noise of size eps * V into coefficient
// noise of size eps * V / r^k, so the estimate tracks the radius decay.
template <class C> struct CircleRecon {
  ComplexPoly<C> q;
  std::vector<real_t<C>> err;
  bool node_hit_root = false;
};

template <class C>
CircleRecon<C> ratio_on_circle(const ComplexPoly<C>& num, const ComplexPoly<C>& den,
                               int deg, const real_t<C>& r) {
  using R = real_t<C>;
  const R bden = eval_bound(den, C(r));
  const R bnum = eval_bound(num, C(r));
  const R den_floor = R(1e-9) * bden;
  R vmax(0), dmin = bden;
  CircleRecon<C> out;
  out.q = interpolate_on_circle<C>(deg, r, [&](const C& x) {
    C d = eval(den, x);
    const R ad = abs_c(d);
    if (ad < den_floor) {
      out.node_hit_root = true;
      return C(0);
    }
    if (ad < dmin) dmin = ad;
    C v = eval(num, x) / d;
    const R av = abs_c(v);
    if (av > vmax) vmax = av;
    return v;
  });
  if (out.node_hit_root) return out;
  const R unit = kernel_tol<C>::eps() * (bnum + vmax * bden) / dmin;
  out.err.resize(static_cast<size_t>(deg) + 1);
  R rp(1);
  for (int k = 0; k <= deg; ++k) {
    out.err[static_cast<size_t>(k)] = unit / rp;
    rp *= r;
  }
  return out;
}

// Coefficient k with the power-of-two scale folded in.
template <class C> C eff_coeff(const ComplexPoly<C>& p, int k) {
  if (k < 0 || k > p.degree()) return C(0);
  return ldexp_c(p.c[static_cast<size_t>(k)], p.scale2);
}

}  // namespace detail

// Quotient of a division that the calling identity guarantees to be exact,
// reconstructed from values on circles. Long division is avoided here: its
// coefficient recurrence amplifies roundoff by roughly six orders of
// magnitude per induction level in the sextic-family builds, while pointwise
// ratios stay at working precision wherever the divisor is bounded away from
// zero. Two independent node sets must agree coefficientwise within the
// modeled reconstruction noise plus cross_tol, and the claimed divisibility
// is enforced by a value residual gate against termwise magnitude bounds;
// failing either raises numerical_breakdown.
template <class C>
ComplexPoly<C> stable_quotient(const ComplexPoly<C>& num, const ComplexPoly<C>& den,
                               int expect_deg, double base_radius, double rel_tol,
                               double cross_tol, const char* what, int level = -1) {
  using R = real_t<C>;
  if (den.is_zero()) throw error("poly division by zero polynomial");
  if (num.degree() - den.degree() != expect_deg)
    throw numerical_breakdown(std::string("degree mismatch entering ") + what, level);
  if (expect_deg < 0) return ComplexPoly<C>::zero();

  bool cross_failed = false, resid_failed = false;
  double radius = base_radius;
  for (int attempt = 0; attempt < 6; ++attempt, radius *= 1.13) {
    detail::CircleRecon<C> a = detail::ratio_on_circle(num, den, expect_deg, R(radius));
    detail::CircleRecon<C> b = detail::ratio_on_circle(num, den, expect_deg, R(radius * 1.31));
    if (a.node_hit_root || b.node_hit_root) continue;

    R supq(0);
    for (int k = 0; k <= expect_deg; ++k) {
      const R m = abs_c(detail::eff_coeff(a.q, k));
      if (m > supq) supq = m;
    }
    bool agree = true;
    const R headroom(1024);
    for (int k = 0; k <= expect_deg && agree; ++k) {
      const R dk = abs_c(detail::eff_coeff(a.q, k) - detail::eff_coeff(b.q, k));
      const R gate = R(cross_tol) * supq +
                     headroom * (a.err[static_cast<size_t>(k)] + b.err[static_cast<size_t>(k)]);
      if (dk > gate) agree = false;
    }
    if (!agree) {
      cross_failed = true;
      continue;
    }

    // Divisibility gate: a genuine remainder r(X) = num - q*den shows up in
    // the values at any deg(num)+1 distinct nodes; tiny residuals relative
    // to the termwise bounds certify it is noise, not structure.
    const R rr = R(radius * 1.17);
    const R scale = eval_bound(num, C(rr)) + eval_bound(a.q, C(rr)) * eval_bound(den, C(rr));
    const int nodes = num.degree() + 1;
    const R two_pi = R(2) * pi_v<R>();
    R resid(0);
    for (int j = 0; j < nodes; ++j) {
      R th = two_pi * R(j) / R(nodes);
      using std::cos;
      using std::sin;
      C x = C(rr * cos(th), rr * sin(th));
      R e = abs_c(eval(num, x) - eval(a.q, x) * eval(den, x));
      if (e > resid) resid = e;
    }
    if (resid > R(rel_tol) * scale) {
      resid_failed = true;
      continue;
    }
    return a.q;
  }
  std::string msg = resid_failed ? std::string("inexact polynomial division in ") + what
                    : cross_failed
                        ? std::string("interpolation cross-check disagreement in ") + what
                        : std::string("interpolation nodes pinned to divisor roots in ") + what;
  throw numerical_breakdown(msg, level);
}

// Scaled coefficientwise distance relative to the larger sup-norm.
template <class C>
double rel_coeff_diff(const ComplexPoly<C>& a, const ComplexPoly<C>& b) {
  using R = real_t<C>;
  ComplexPoly<C> d = a - b;
  R dm = coeff_max(d);
  if (dm == R(0)) return 0.0;
  double ref = std::max(log2_norm(a), log2_norm(b));
  if (ref < -1e299) return 0.0;
  double diff = log2_norm(d);
  return std::exp2(diff - ref);
}

}  // namespace zrs
