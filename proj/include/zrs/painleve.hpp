#pragma once

// The sixth Painleve equation side of the library: the solution family
// (lambda^{(n)}, mu^{(n)}, wp(p^{(n)})) attached to Z_{r,s} through the value
// chain, the Okamoto transformations and their distinguished words, the
// Hamiltonian K with its exact gradient, finite-difference residuals of the
// first-order system and of the second-order equation, the level-lift
// recurrence, and the holomorphic limits of lambda*mu at poles.
//
// All t-derivatives go through tau by the chain rule (t is only available as
// t(tau)); first derivatives use central differences, Richardson-extrapolated
// once on the default path.

#include <stdexcept>
#include <string>

#include "zrs/elliptic.hpp"
#include "zrs/recursion.hpp"

namespace zrs {

template <class C> struct ThetaParams {
  C th0{}, th1{}, th2{}, th3{}, th4{};  // constraint: 2 th0 + th1 + th2 + th3 + th4 = 1
};

// The level-n tuple theta^n = (-(n+1)/2, 1/2, 1/2, 1/2, n + 1/2).
template <class C> ThetaParams<C> theta_level(int n) {
  using R = real_t<C>;
  return ThetaParams<C>{C(-R(n + 1) / R(2)), C(R(1) / R(2)), C(R(1) / R(2)),
                        C(R(1) / R(2)), C(R(n) + R(1) / R(2))};
}

template <class C> struct PviParams {
  C alpha{}, beta{}, gamma{}, delta{};
};

// (alpha, beta, gamma, delta) = (th4^2/2, -th1^2/2, th2^2/2, (1 - th3^2)/2).
template <class C> PviParams<C> pvi_params(const ThetaParams<C>& th) {
  const C half = C(1) / C(2);
  return PviParams<C>{half * th.th4 * th.th4, -half * th.th1 * th.th1,
                      half * th.th2 * th.th2, half * (C(1) - th.th3 * th.th3)};
}

template <class C> struct PviState {
  C t{};
  C lambda{}, mu{};
  ThetaParams<C> theta;
};

// K(lambda, mu, t) generating the first-order system
// d(lambda)/dt = dK/dmu, d(mu)/dt = -dK/dlambda.
template <class C>
C hamiltonian_K(const C& lam, const C& mu, const C& t, const ThetaParams<C>& th) {
  const C lm1 = lam - C(1), lmt = lam - t;
  const C bracket = th.th1 * lm1 * lmt + th.th2 * lam * lmt + (th.th3 - C(1)) * lam * lm1;
  return (lam * lm1 * lmt * mu * mu + th.th0 * (th.th0 + th.th4) * lmt - bracket * mu) /
         (t * (t - C(1)));
}

template <class C>
C hamiltonian_K_mu(const C& lam, const C& mu, const C& t, const ThetaParams<C>& th) {
  const C lm1 = lam - C(1), lmt = lam - t;
  return (C(2) * lam * lm1 * lmt * mu - th.th1 * lm1 * lmt - th.th2 * lam * lmt -
          (th.th3 - C(1)) * lam * lm1) /
         (t * (t - C(1)));
}

template <class C>
C hamiltonian_K_lambda(const C& lam, const C& mu, const C& t, const ThetaParams<C>& th) {
  const C lm1 = lam - C(1), lmt = lam - t;
  const C cubic_d = lm1 * lmt + lam * lmt + lam * lm1;
  const C bracket_d = th.th1 * (C(2) * lam - C(1) - t) + th.th2 * (C(2) * lam - t) +
                      (th.th3 - C(1)) * (C(2) * lam - C(1));
  return (cubic_d * mu * mu + th.th0 * (th.th0 + th.th4) - bracket_d * mu) /
         (t * (t - C(1)));
}

// One Okamoto generator. j in 0..4 are the table involutions; j = 5 is the
// parameter-shift word k0 (k3 k2 k1 k0)^2 k4, applied right factor first.
template <class C> PviState<C> okamoto_apply(int j, const PviState<C>& st) {
  auto divisor = [](const C& v, const char* what) {
    if (!(abs_c(v) > real_t<C>(0)))
      throw singular_transformation(std::string("okamoto_apply: ") + what + " vanished");
    return v;
  };
  PviState<C> out = st;
  const ThetaParams<C>& th = st.theta;
  switch (j) {
    case 0:
      out.theta = ThetaParams<C>{-th.th0, th.th1 + th.th0, th.th2 + th.th0,
                                 th.th3 + th.th0, th.th4 + th.th0};
      out.lambda = st.lambda + th.th0 / divisor(st.mu, "mu");
      break;
    case 1:
      out.theta = ThetaParams<C>{th.th0 + th.th1, -th.th1, th.th2, th.th3, th.th4};
      out.mu = st.mu - th.th1 / divisor(st.lambda, "lambda");
      break;
    case 2:
      out.theta = ThetaParams<C>{th.th0 + th.th2, th.th1, -th.th2, th.th3, th.th4};
      out.mu = st.mu - th.th2 / divisor(st.lambda - C(1), "lambda - 1");
      break;
    case 3:
      out.theta = ThetaParams<C>{th.th0 + th.th3, th.th1, th.th2, -th.th3, th.th4};
      out.mu = st.mu - th.th3 / divisor(st.lambda - st.t, "lambda - t");
      break;
    case 4:
      out.theta = ThetaParams<C>{th.th0 + th.th4, th.th1, th.th2, th.th3, -th.th4};
      break;
    case 5: {
      PviState<C> cur = okamoto_apply(4, st);
      for (int rep = 0; rep < 2; ++rep)
        for (int k : {0, 1, 2, 3}) cur = okamoto_apply(k, cur);
      return okamoto_apply(0, cur);
    }
    default:
      throw std::invalid_argument("okamoto_apply: generator index must be 0..5");
  }
  return out;
}

// The word taking level 0 to level n: (k5)^m composed with k0 k3 k2 k1 (k1
// first) when n = 2m + 1, and (k5)^m alone when n = 2m.
template <class C> PviState<C> okamoto_word_0n(int n, const PviState<C>& st) {
  if (n < 0) throw std::invalid_argument("okamoto_word_0n requires n >= 0");
  PviState<C> cur = st;
  if (n % 2 == 1)
    for (int k : {1, 2, 3, 0}) cur = okamoto_apply(k, cur);
  for (int m = 0; m < n / 2; ++m) cur = okamoto_apply(5, cur);
  return cur;
}

template <class C> struct PviSample {
  int n = 0;
  TorsionPoint<C> point;
  Tau<C> tau;
  C t{};
  C lambda{}, mu{}, wp_p{};
  bool near_pole = false;  // Z close to a zero of Q_{n-2} or Q_n
};

namespace detail {

// |Q_k(Z)| measured against the magnitude a degree-deg(Q_k) polynomial with
// the same leading coefficient takes at a generic argument of size |Z|.
template <class C>
bool q_factor_small(const ValueRun<C>& vr, int k, const HeckeValue<C>& hv,
                    const LatticeData<C>& ld) {
  using R = real_t<C>;
  if (k < 0) return false;  // Q_{-2} = Q_{-1} = 1
  const R az = abs_c(vr.Z);
  const R base = az > R(1) ? az : R(1);
  const int deg = (k + 1) * (k + 2) / 2;
  R scale = abs_c(leading_coeffs(k, hv, ld).q);
  for (int i = 0; i < deg; ++i) scale *= base;
  return abs_c(vr.Qat(k)) < R(1e-6) * scale;
}

}  // namespace detail

// lambda = R_n(Z)/(Q_{n-2}(Z) Q_n(Z)), mu = Q_{n-2} Q_{n-1} Q_n / G_n and
// wp_p = (e2 - e1) lambda + e1, all from one scalar chain.
template <class C>
PviSample<C> pvi_sample(int n, const TorsionPoint<C>& pt, const Tau<C>& tau) {
  if (n < 0) throw std::invalid_argument("pvi_sample requires n >= 0");
  const LatticeData<C> ld = lattice_data(tau);
  const HeckeValue<C> hv = hecke_Z(pt, ld);
  const ValueRun<C> vr = value_run(n, hv, ld);
  PviSample<C> out;
  out.n = n;
  out.point = pt;
  out.tau = tau;
  out.t = t_of_tau(ld);
  out.lambda = lambda_value(vr, n);
  out.mu = mu_value(vr, n);
  out.wp_p = (ld.e2 - ld.e1) * out.lambda + ld.e1;
  out.near_pole = detail::q_factor_small(vr, n - 2, hv, ld) ||
                  detail::q_factor_small(vr, n, hv, ld);
  return out;
}

// lambda * mu in the pole-safe form R_n Q_{n-1} / G_n, which stays
// holomorphic across zeros of Q_{n-2} and Q_n.
template <class C>
C stable_lambda_mu(int n, const TorsionPoint<C>& pt, const Tau<C>& tau) {
  const LatticeData<C> ld = lattice_data(tau);
  const HeckeValue<C> hv = hecke_Z(pt, ld);
  const ValueRun<C> vr = value_run(n, hv, ld);
  return vr.R[static_cast<size_t>(n)] * vr.Qat(n - 1) / vr.G[static_cast<size_t>(n)];
}

// One level of the lift: (lambda, mu) at level n-1 -> level n through
// lhat = lambda + (n-1)/(2 mu), mu' = mu - (n/2)(1/lhat + 1/(lhat-1) + 1/(lhat-t)),
// lambda' = lhat + (n+1)/(2 mu').
template <class C> PviState<C> lift_step(const PviState<C>& prev, int n) {
  using R = real_t<C>;
  if (n < 1) throw std::invalid_argument("lift_step requires n >= 1");
  auto divisor = [](const C& v, const char* what) {
    if (!(abs_c(v) > real_t<C>(0)))
      throw singular_transformation(std::string("lift_step: ") + what + " vanished");
    return v;
  };
  const C lhat = n == 1 ? prev.lambda
                        : prev.lambda + C(R(n - 1)) / (C(2) * divisor(prev.mu, "mu"));
  const C mu_n = prev.mu - C(R(n)) / C(2) *
                               (C(1) / divisor(lhat, "lhat") +
                                C(1) / divisor(lhat - C(1), "lhat - 1") +
                                C(1) / divisor(lhat - prev.t, "lhat - t"));
  const C lam_n = lhat + C(R(n + 1)) / (C(2) * divisor(mu_n, "lifted mu"));
  return PviState<C>{prev.t, lam_n, mu_n, theta_level<C>(n)};
}

template <class C> struct HamiltonianResidual {
  real_t<C> res1{};  // |FD(dlambda/dt) - dK/dmu| / scale
  real_t<C> res2{};  // |FD(dmu/dt) + dK/dlambda| / scale
};

namespace detail {

template <class C>
PviSample<C> pole_checked_sample(int n, const TorsionPoint<C>& pt, const Tau<C>& tau) {
  PviSample<C> s = pvi_sample(n, pt, tau);
  if (s.near_pole)
    throw singular_configuration(
        "sample sits next to a pole of lambda; evaluate at a different tau");
  return s;
}

}  // namespace detail

// Residuals of dlambda/dt = dK/dmu and dmu/dt = -dK/dlambda at theta = theta^n,
// with d/dt = (d/dtau)/(dt/dtau). Explicit h uses plain central differences
// (so the truncation error scales as h^2 for step studies); the default
// h = 1e-4 max(1,|tau|) is Richardson-extrapolated once.
template <class C>
HamiltonianResidual<C> hamiltonian_residual(int n, const TorsionPoint<C>& pt,
                                            const Tau<C>& tau,
                                            real_t<C> h = real_t<C>(0)) {
  using R = real_t<C>;
  const bool extrapolate = !(h > R(0));
  if (extrapolate) {
    const R at = abs_c(tau.value);
    h = R(1e-4) * (at > R(1) ? at : R(1));
  }
  const PviSample<C> base = detail::pole_checked_sample(n, pt, tau);
  auto at_offset = [&](const R& dh) {
    return detail::pole_checked_sample(n, pt, make_tau(tau.value + C(dh)));
  };
  const PviSample<C> p1 = at_offset(h), m1 = at_offset(-h);
  C lam_tau, mu_tau, t_tau;
  if (extrapolate) {
    const PviSample<C> p2 = at_offset(h / R(2)), m2 = at_offset(-h / R(2));
    auto deriv = [&](C f1p, C f1m, C f2p, C f2m) {
      const C wide = (f1p - f1m) / C(h + h);
      const C narrow = (f2p - f2m) / C(h);
      return (C(4) * narrow - wide) / C(3);
    };
    lam_tau = deriv(p1.lambda, m1.lambda, p2.lambda, m2.lambda);
    mu_tau = deriv(p1.mu, m1.mu, p2.mu, m2.mu);
    t_tau = deriv(p1.t, m1.t, p2.t, m2.t);
  } else {
    lam_tau = (p1.lambda - m1.lambda) / C(h + h);
    mu_tau = (p1.mu - m1.mu) / C(h + h);
    t_tau = (p1.t - m1.t) / C(h + h);
  }
  const C dlam_dt = lam_tau / t_tau;
  const C dmu_dt = mu_tau / t_tau;
  const ThetaParams<C> th = theta_level<C>(n);
  const C grad_mu = hamiltonian_K_mu(base.lambda, base.mu, base.t, th);
  const C grad_lam = hamiltonian_K_lambda(base.lambda, base.mu, base.t, th);
  auto scale3 = [](const R& a, const R& b) {
    R s = a > b ? a : b;
    return s > R(1) ? s : R(1);
  };
  HamiltonianResidual<C> out;
  out.res1 = abs_c(dlam_dt - grad_mu) / scale3(abs_c(dlam_dt), abs_c(grad_mu));
  out.res2 = abs_c(dmu_dt + grad_lam) / scale3(abs_c(dmu_dt), abs_c(grad_lam));
  return out;
}

// Residual of the second-order equation at (alpha, beta, gamma, delta) =
// ((n + 1/2)^2/2, -1/8, 1/8, 3/8), from 5-point stencils in tau mapped through
// t(tau); normalized by the largest participating term.
template <class C>
real_t<C> pvi_residual(int n, const TorsionPoint<C>& pt, const Tau<C>& tau,
                       real_t<C> h = real_t<C>(0)) {
  using R = real_t<C>;
  if (!(h > R(0))) {
    const R at = abs_c(tau.value);
    h = R(1e-3) * (at > R(1) ? at : R(1));
  }
  PviSample<C> st[5];  // tau + k h for k = -2..2
  for (int k = -2; k <= 2; ++k)
    st[k + 2] = detail::pole_checked_sample(n, pt, make_tau(tau.value + C(R(k) * h)));
  auto d1 = [&](auto f) {
    return (f(st[0]) - C(8) * f(st[1]) + C(8) * f(st[3]) - f(st[4])) / C(R(12) * h);
  };
  auto d2 = [&](auto f) {
    return (-f(st[0]) + C(16) * f(st[1]) - C(30) * f(st[2]) + C(16) * f(st[3]) -
            f(st[4])) /
           C(R(12) * h * h);
  };
  auto lam_of = [](const PviSample<C>& s) { return s.lambda; };
  auto t_of = [](const PviSample<C>& s) { return s.t; };
  const C lam_tau = d1(lam_of), lam_tautau = d2(lam_of);
  const C t_tau = d1(t_of), t_tautau = d2(t_of);
  const C lam_t = lam_tau / t_tau;
  const C lam_tt = (lam_tautau * t_tau - lam_tau * t_tautau) / (t_tau * t_tau * t_tau);

  const C lam = st[2].lambda, t = st[2].t;
  const C lm1 = lam - C(1), lmt = lam - t;
  const PviParams<C> p = pvi_params(theta_level<C>(n));
  const C term1 = (C(1) / lam + C(1) / lm1 + C(1) / lmt) / C(2) * lam_t * lam_t;
  const C term2 = (C(1) / t + C(1) / (t - C(1)) + C(1) / lmt) * lam_t;
  const C term3 = lam * lm1 * lmt / (t * t * (t - C(1)) * (t - C(1))) *
                  (p.alpha + p.beta * t / (lam * lam) +
                   p.gamma * (t - C(1)) / (lm1 * lm1) +
                   p.delta * t * (t - C(1)) / (lmt * lmt));
  const C rhs = term1 - term2 + term3;
  R scale = R(1);
  for (const C& v : {lam_tt, term1, term2, term3})
    if (abs_c(v) > scale) scale = abs_c(v);
  return abs_c(lam_tt - rhs) / scale;
}

// lambda * mu near a flagged tau0, evaluated at tau0 + delta for shrinking
// real delta. The limit identifies the pole family: (n+1)/2 = -theta0 at a
// zero of Q_n, -n/2 = -(theta0 + theta4) at a zero of Q_{n-2}.
template <class C>
C pole_limit_check(int n, const TorsionPoint<C>& pt, const Tau<C>& tau0) {
  using R = real_t<C>;
  if (!pvi_sample(n, pt, tau0).near_pole)
    throw error("pole_limit_check: no factor zero near tau0");
  C value{};
  R delta = R(1e-2);
  for (int k = 0; k < 8; ++k, delta /= R(2))
    value = stable_lambda_mu(n, pt, make_tau(tau0.value + C(delta)));
  return value;
}

}  // namespace zrs
