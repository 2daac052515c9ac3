#pragma once

// The sliding-window induction producing the polynomial families Q_n, G_n,
// R_n, phi_n attached to a lattice point a = r + s*tau:
//
//   phi_{n-1} = R_{n-1} Q_{n-2} + ((n-1)/2) G_{n-1}
//   G_n = H(phi_{n-1}; Q_{n-3}Q_{n-2}Q_{n-1}) / (G_{n-1} Q_{n-3}^3)
//   Q_n = [Q_{n-3}^3 G_n - (n/2) H'(phi_{n-1}; .)] / (G_{n-1} Q_{n-3}^2)
//   R_n = [phi_{n-1} Q_n + ((n+1)/2) Q_{n-3} G_n] / (Q_{n-3} Q_{n-1})
//
// where H(x;y) = x(x-y)(x-ty), H' = dH/dx, t = (e3-e1)/(e2-e1), with seeds
// Q_0 = X, G_0 = wp'(a)/(e2-e1), R_0 = ((wp(a)-e1)/(e2-e1)) X + G_0/2 and
// Q_{-2} = Q_{-1} = 1. All three divisions are exact in exact arithmetic, so
// each quotient is reconstructed by sampling num/den on circles around the
// origin (stable_quotient): two node sets must agree coefficientwise and a
// value residual certifies the divisibility. Failures raise
// numerical_breakdown carrying the offending level; they signal precision
// exhaustion, not bad input. A scalar twin of the induction (ValueRun) tracks
// the values at X = Z alone and is what evaluation-heavy callers should use.

#include <vector>

#include "zrs/elliptic.hpp"
#include "zrs/poly.hpp"

namespace zrs {

template <class C> struct RecursionContext {
  C Z;       // Z_{r,s}(tau)
  C a;       // r + s*tau
  C wpa;     // wp(a)
  C wppa;    // wp'(a)
  C e1;
  C e2me1;   // e2 - e1
  C t;       // (e3 - e1)/(e2 - e1)
};

template <class C> struct LeadTriple {
  C q, g, r;
};

// Leading coefficients of Q_n, G_n, R_n in closed form. The G and R leads
// carry the point through wp'(a) and wp(a) - e1.
template <class C>
LeadTriple<C> leading_coeffs(int n, const C& e2me1, const C& wpa_minus_e1,
                             const C& wpp_a) {
  if (n < 0) throw error("leading_coeffs requires n >= 0");
  const long nn = n;
  long p2q, peq, p2g, peg, p2r, per;  // value = 2^{-p2} (e2-e1)^{-pe} * extra
  if (n % 2 == 0) {
    p2q = nn * (nn + 2) / 2;
    peq = nn * (nn + 2) / 4;
    p2g = 3 * nn * nn / 2;
    peg = 3 * nn * nn / 4 + 1;
    p2r = nn * nn;
    per = nn * nn / 2 + 1;
  } else {
    p2q = (nn + 1) * (nn + 1) / 2;
    peq = (nn + 1) * (nn + 1) / 4;
    p2g = (3 * nn * nn + 1) / 2;
    peg = (3 * nn * nn + 1) / 4 + 1;
    p2r = nn * nn + 1;
    per = (nn * nn + 1) / 2 + 1;
  }
  LeadTriple<C> out;
  out.q = ldexp_c(cpow_int(e2me1, -peq), static_cast<int>(-p2q));
  out.g = ldexp_c(cpow_int(e2me1, -peg) * wpp_a, static_cast<int>(-p2g));
  out.r = ldexp_c(cpow_int(e2me1, -per) * wpa_minus_e1, static_cast<int>(-p2r));
  return out;
}

template <class C>
LeadTriple<C> leading_coeffs(int n, const RecursionContext<C>& ctx) {
  return leading_coeffs(n, ctx.e2me1, ctx.wpa - ctx.e1, ctx.wppa);
}

template <class C>
LeadTriple<C> leading_coeffs(int n, const HeckeValue<C>& hv, const LatticeData<C>& ld) {
  return leading_coeffs(n, ld.e2 - ld.e1, wp(hv.a, ld) - ld.e1, wp_prime(hv.a, ld));
}

template <class C> struct RecursionLevel {
  int n = 0;
  ComplexPoly<C> Q_prev3, Q_prev2, Q_prev1, Q;  // Q_{n-3} .. Q_n
  ComplexPoly<C> G, R, phi;                     // G_n, R_n, phi_n
  C q_lead, g_lead, r_lead;
  RecursionContext<C> ctx;
};

inline long expected_deg_Q(int n) { return n < 0 ? 0 : long(n + 1) * (n + 2) / 2; }
inline long expected_deg_G(int n) { return 3L * n * (n + 1) / 2; }
inline long expected_deg_R(int n) { return long(n) * (n + 1) + 1; }

namespace detail {

template <class C>
RecursionContext<C> make_context(const HeckeValue<C>& hv, const LatticeData<C>& ld) {
  // wp'(a) = 0 exactly at the three nonzero 2-torsion classes, and everything
  // downstream divides by it through G_0. That is a condition on the
  // coordinates, (2r, 2s) integral, so test them directly: the magnitude of
  // wp'(a) itself dips exponentially low on tall-tau rays at regular points.
  if (in_half_lattice(hv.point.r, hv.point.s))
    throw singular_configuration("a = r + s*tau is a 2-torsion point");
  RecursionContext<C> ctx;
  ctx.Z = hv.Z;
  ctx.a = hv.a;
  ctx.wpa = wp(hv.a, ld);
  ctx.wppa = wp_prime(hv.a, ld);
  ctx.e1 = ld.e1;
  ctx.e2me1 = ld.e2 - ld.e1;
  ctx.t = t_of_tau(ld);
  return ctx;
}

}  // namespace detail

template <class C>
RecursionLevel<C> seed_level0(const HeckeValue<C>& hv, const LatticeData<C>& ld) {
  RecursionContext<C> ctx = detail::make_context(hv, ld);
  RecursionLevel<C> lvl;
  lvl.n = 0;
  lvl.ctx = ctx;
  lvl.Q_prev3 = ComplexPoly<C>::constant(C(1));
  lvl.Q_prev2 = ComplexPoly<C>::constant(C(1));
  lvl.Q_prev1 = ComplexPoly<C>::constant(C(1));
  lvl.Q = ComplexPoly<C>::x();
  const C g0 = ctx.wppa / ctx.e2me1;
  lvl.G = ComplexPoly<C>::constant(g0);
  lvl.R = ComplexPoly<C>(std::vector<C>{g0 / C(2), (ctx.wpa - ctx.e1) / ctx.e2me1});
  lvl.phi = lvl.R;  // phi_0 = R_0 Q_{-1}
  auto leads = leading_coeffs(0, ctx);
  lvl.q_lead = leads.q;
  lvl.g_lead = leads.g;
  lvl.r_lead = leads.r;
  return lvl;
}

template <class C>
RecursionLevel<C> step(const RecursionLevel<C>& level, const LatticeData<C>& ld,
                       const C& t) {
  using R = real_t<C>;
  (void)ld;
  const int m = level.n + 1;
  const double div_tol = to_double(kernel_tol<C>::div_rem());
  const double cross_tol = to_double(kernel_tol<C>::cross_check());
  // Downstream evaluation happens at X = Z, so center the sampling annulus on
  // that magnitude: coefficients then carry eval-accurate information there.
  const double r0 = std::max(1.0, to_double(abs_c(level.ctx.Z)));

  const ComplexPoly<C>& Qm3 = level.Q_prev2;  // Q_{m-3}
  const ComplexPoly<C>& Qm1 = level.Q;        // Q_{m-1}
  const ComplexPoly<C>& phi = level.phi;      // phi_{m-1}

  const ComplexPoly<C> y = Qm3 * level.Q_prev1 * Qm1;
  const ComplexPoly<C> A = phi - y;
  const ComplexPoly<C> B = phi - scaled_by(y, t);
  const ComplexPoly<C> Qm3sq = Qm3 * Qm3;
  const ComplexPoly<C> Qm3cu = Qm3sq * Qm3;

  const ComplexPoly<C> numG = phi * A * B;  // H(phi_{m-1}; y)
  const ComplexPoly<C> denG = level.G * Qm3cu;
  ComplexPoly<C> Gm = stable_quotient(numG, denG, static_cast<int>(expected_deg_G(m)),
                                      r0, div_tol, cross_tol, "the G quotient", m);

  const C half_m = C(R(m) / R(2));
  const ComplexPoly<C> Hd = phi * A + phi * B + A * B;  // dH/dx at phi_{m-1}
  const ComplexPoly<C> numQ = Qm3cu * Gm - scaled_by(Hd, half_m);
  const ComplexPoly<C> denQ = level.G * Qm3sq;
  ComplexPoly<C> Qm = stable_quotient(numQ, denQ, static_cast<int>(expected_deg_Q(m)),
                                      r0, div_tol, cross_tol, "the Q quotient", m);

  const C half_m1 = C(R(m + 1) / R(2));
  const ComplexPoly<C> numR = phi * Qm + scaled_by(Qm3 * Gm, half_m1);
  const ComplexPoly<C> denR = Qm3 * Qm1;
  ComplexPoly<C> Rm = stable_quotient(numR, denR, static_cast<int>(expected_deg_R(m)),
                                      r0, div_tol, cross_tol, "the R quotient", m);

  if (Gm.degree() != expected_deg_G(m) || Qm.degree() != expected_deg_Q(m) ||
      Rm.degree() != expected_deg_R(m))
    throw numerical_breakdown("degree law violated", m);

  RecursionLevel<C> out;
  out.n = m;
  out.ctx = level.ctx;
  out.Q_prev3 = level.Q_prev2;
  out.Q_prev2 = level.Q_prev1;
  out.Q_prev1 = level.Q;
  out.Q = Qm;
  out.G = Gm;
  out.phi = Rm * level.Q + scaled_by(Gm, half_m);  // phi_m = R_m Q_{m-1} + (m/2) G_m
  out.R = std::move(Rm);
  auto leads = leading_coeffs(m, level.ctx);
  out.q_lead = leads.q;
  out.g_lead = leads.g;
  out.r_lead = leads.r;
  return out;
}

// Coefficient spreads grow like 2^{O(n^2)}; past n = 8 doubles cannot keep the
// exact divisions consistent and a wider backend is required.
inline constexpr int kDefaultDoubleLevelCap = 8;

template <class C>
RecursionLevel<C> build_to(int n, const TorsionPoint<C>& pt, const LatticeData<C>& ld,
                           int double_level_cap = kDefaultDoubleLevelCap) {
  using R = real_t<C>;
  if (n < 0) throw error("build_to requires n >= 0");
  if (kernel_tol<C>::eps() > R(1e-25) && n > double_level_cap)
    throw error("recursion level exceeds the double-precision cap; use a wider backend");
  auto hv = hecke_Z(pt, ld);
  RecursionLevel<C> lvl = seed_level0(hv, ld);
  const C t = t_of_tau(ld);
  for (int k = 0; k < n; ++k) lvl = step(lvl, ld, t);
  return lvl;
}

// Scalar twin of the induction: the same recurrences carried on the values
// Q_k(Z), G_k(Z), R_k(Z), phi_k(Z) alone. Every division is a complex
// division, so the chain holds near working precision at any level and at
// any backend; it is the right tool whenever only values at X = Z are needed
// (Hecke-form evaluation, the lifted solution pair, order ladders).
template <class C> struct ValueRun {
  C Z{}, t{};
  std::vector<C> Q, G, R, phi;  // index = level n
  C Qat(int k) const { return k < 0 ? C(1) : Q[static_cast<size_t>(k)]; }
  int top() const { return static_cast<int>(Q.size()) - 1; }
};

template <class C>
ValueRun<C> value_run(int n, const HeckeValue<C>& hv, const LatticeData<C>& ld) {
  using R = real_t<C>;
  if (n < 0) throw error("value_run requires n >= 0");
  const RecursionContext<C> ctx = detail::make_context(hv, ld);

  ValueRun<C> vr;
  vr.Z = ctx.Z;
  vr.t = ctx.t;
  vr.Q.reserve(static_cast<size_t>(n) + 1);
  const C g0 = ctx.wppa / ctx.e2me1;
  vr.Q.push_back(ctx.Z);
  vr.G.push_back(g0);
  vr.R.push_back((ctx.wpa - ctx.e1) / ctx.e2me1 * ctx.Z + g0 / C(2));
  vr.phi.push_back(vr.R[0]);

  auto nonzero = [](const C& d, const char* what, int lv) {
    if (!(abs_c(d) > real_t<C>(0)))
      throw numerical_breakdown(std::string("value chain denominator vanished in ") + what, lv);
  };
  for (int m = 1; m <= n; ++m) {
    const C Qm3 = vr.Qat(m - 3), Qm1 = vr.Qat(m - 1);
    const C ph = vr.phi[static_cast<size_t>(m - 1)];
    const C Gp = vr.G[static_cast<size_t>(m - 1)];
    const C yv = Qm3 * vr.Qat(m - 2) * Qm1;
    const C Av = ph - yv, Bv = ph - vr.t * yv;
    const C q3 = Qm3 * Qm3 * Qm3;

    const C denG = Gp * q3;
    nonzero(denG, "the G step", m);
    const C Gm = ph * Av * Bv / denG;

    const C half_m = C(R(m) / R(2));
    const C denQ = Gp * Qm3 * Qm3;
    nonzero(denQ, "the Q step", m);
    const C Qm = (q3 * Gm - half_m * (ph * Av + ph * Bv + Av * Bv)) / denQ;

    const C denR = Qm3 * Qm1;
    nonzero(denR, "the R step", m);
    const C Rm = (ph * Qm + C(R(m + 1) / R(2)) * Qm3 * Gm) / denR;

    vr.Q.push_back(Qm);
    vr.G.push_back(Gm);
    vr.R.push_back(Rm);
    vr.phi.push_back(Rm * Qm1 + half_m * Gm);
  }
  return vr;
}

template <class C>
ValueRun<C> value_run(int n, const TorsionPoint<C>& pt, const LatticeData<C>& ld) {
  return value_run(n, hecke_Z(pt, ld), ld);
}

// lambda^{(n)} = R_n / (Q_{n-2} Q_n) and mu^{(n)} = Q_{n-2} Q_{n-1} Q_n / G_n,
// evaluated at X = Z; the branch the Hecke-form solution substitutes into the
// sixth Painleve transcendent.
template <class C> C lambda_value(const ValueRun<C>& vr, int n) {
  if (n < 0 || n > vr.top()) throw error("lambda_value: level out of range");
  const C den = vr.Qat(n - 2) * vr.Qat(n);
  if (!(abs_c(den) > real_t<C>(0)))
    throw numerical_breakdown("lambda evaluation hit a zero of Q_{n-2} Q_n", n);
  return vr.R[static_cast<size_t>(n)] / den;
}

template <class C> C mu_value(const ValueRun<C>& vr, int n) {
  if (n < 0 || n > vr.top()) throw error("mu_value: level out of range");
  const C g = vr.G[static_cast<size_t>(n)];
  if (!(abs_c(g) > real_t<C>(0)))
    throw numerical_breakdown("mu evaluation hit a zero of G_n", n);
  return vr.Qat(n - 2) * vr.Qat(n - 1) * vr.Qat(n) / g;
}

}  // namespace zrs
