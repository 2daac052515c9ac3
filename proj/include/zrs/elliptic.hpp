#pragma once

// Weierstrass lattice quantities on Lambda_tau = Z + Z*tau via q-series
// (q = e^{2 pi i tau}), the Hecke-type function Z_{r,s}, and torsion points.
//
// Series: with u = e^{2 pi i z},
//   wp(z)  = -pi^2/3 - 4 pi^2 [ u/(1-u)^2 + sum_{n>=1} n q^n/(1-q^n) (u^n + u^-n - 2) ]
//   wp'(z) = -8 pi^3 i [ u(1+u)/(1-u)^3 + sum_{n>=1} n^2 q^n/(1-q^n) (u^n - u^-n) ]
//   zeta(z) = eta1 z + pi i (u+1)/(u-1) - 2 pi i sum_{n>=1} q^n/(1-q^n) (u^n - u^-n)
// valid after reducing z so Im(z)/Im(tau) lies in [-1/2, 1/2); quasi-period
// corrections restore the original argument.

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "zrs/numeric.hpp"

namespace zrs {

inline constexpr double kImTauFloor = 0.05;
inline constexpr long kSeriesCap = 1000000;

template <class C> struct Tau {
  C value;
};

template <class C> Tau<C> make_tau(const C& v) {
  if (!(im_part(v) > real_t<C>(0))) throw error("tau must satisfy Im(tau) > 0");
  return Tau<C>{v};
}

template <class C> struct TorsionPoint {
  C r, s;
  int exact_order = 0;  // 0 when the point is not presented as (k1/N, k2/N)
  int k1 = -1, k2 = -1;
};

template <class C> TorsionPoint<C> make_point(const C& r, const C& s) {
  return TorsionPoint<C>{r, s, 0, -1, -1};
}

template <class C> TorsionPoint<C> make_torsion(int k1, int k2, int N) {
  using R = real_t<C>;
  return TorsionPoint<C>{C(R(k1) / R(N)), C(R(k2) / R(N)), N, k1, k2};
}

// (r,s) in (1/2)Z^2 makes a = r + s*tau a lattice 2-torsion value and every
// downstream formula singular.
template <class C> bool in_half_lattice(const C& r, const C& s, double tol = 1e-9) {
  auto near_int = [&](const C& x) {
    double xr = to_double(re_part(x)), xi = to_double(im_part(x));
    return std::abs(xi) < tol && std::abs(xr - std::round(xr)) < tol;
  };
  return near_int(C(2) * r) && near_int(C(2) * s);
}

template <class C> struct LatticeData {
  C tau;
  C q, qh;  // e^{2 pi i tau}, e^{pi i tau}
  C g2, g3, e1, e2, e3, eta1, eta2, delta, j;
  real_t<C> tol;
};

template <class C> struct HeckeValue {
  TorsionPoint<C> point;
  C tau;
  C a;  // r + s*tau
  C x;  // e^{2 pi i a}
  C Z;  // zeta(a|tau) - r eta1 - s eta2
};

namespace detail {

// sum_{n>=1} n^k q^n / (1 - q^n); equals sum sigma_k(n) q^n.
template <class C> C lambert_sum(const C& q, int k, const real_t<C>& tol) {
  using R = real_t<C>;
  C acc(0), qn(1);
  int calm = 0;
  for (long n = 1; n <= kSeriesCap; ++n) {
    qn *= q;
    C term = C(cpow_int(C(R(n)), k)) * qn / (C(1) - qn);
    acc += term;
    if (abs_c(term) < tol * (R(1) + abs_c(acc))) {
      if (++calm >= 3) return acc;
    } else {
      calm = 0;
    }
  }
  throw series_nonconvergence("lambert_sum did not converge");
}

template <class C> struct ReducedZ {
  C z;
  long n1, n2;  // z_original = z + n1 + n2*tau
};

template <class C> ReducedZ<C> reduce_z(const C& z, const C& tau) {
  using R = real_t<C>;
  R ratio = im_part(z) / im_part(tau);
  long n2 = lround_r(floor_r(ratio + R(0.5)));
  C z1 = z - R(n2) * tau;
  long n1 = lround_r(floor_r(re_part(z1) + R(0.5)));
  C z2 = z1 - C(R(n1));
  return ReducedZ<C>{z2, n1, n2};
}

template <class C> void check_not_pole(const C& z_reduced, const C& z_orig) {
  using R = real_t<C>;
  R scale = R(1) + abs_c(z_orig);
  if (abs_c(z_reduced) < R(1e4) * kernel_tol<C>::eps() * scale)
    throw singular_configuration("z lies on the period lattice (wp pole)");
}

template <class C> C wp_core(const C& u, const C& q, const real_t<C>& tol) {
  using R = real_t<C>;
  const R pi = pi_v<R>();
  C one(1);
  C S = u / ((one - u) * (one - u));
  C qn(1), un(1), uin(1);
  const C uinv = one / u;
  int calm = 0;
  for (long n = 1; n <= kSeriesCap; ++n) {
    qn *= q;
    un *= u;
    uin *= uinv;
    C term = R(n) * qn / (one - qn) * (un + uin - C(2));
    S += term;
    if (abs_c(term) < tol * (R(1) + abs_c(S))) {
      if (++calm >= 3) break;
    } else {
      calm = 0;
    }
    if (n == kSeriesCap) throw series_nonconvergence("wp series did not converge");
  }
  return C(-pi * pi / R(3)) - R(4) * pi * pi * S;
}

template <class C> C wp_prime_core(const C& u, const C& q, const real_t<C>& tol) {
  using R = real_t<C>;
  const R pi = pi_v<R>();
  C one(1);
  C d = one - u;
  C S = u * (one + u) / (d * d * d);
  C qn(1), un(1), uin(1);
  const C uinv = one / u;
  int calm = 0;
  for (long n = 1; n <= kSeriesCap; ++n) {
    qn *= q;
    un *= u;
    uin *= uinv;
    C term = R(n) * R(n) * qn / (one - qn) * (un - uin);
    S += term;
    if (abs_c(term) < tol * (R(1) + abs_c(S))) {
      if (++calm >= 3) break;
    } else {
      calm = 0;
    }
    if (n == kSeriesCap) throw series_nonconvergence("wp' series did not converge");
  }
  return C(R(0), -R(8) * pi * pi * pi) * S;
}

template <class C> C zeta_core(const C& z, const C& u, const C& q, const C& eta1,
                               const real_t<C>& tol) {
  using R = real_t<C>;
  const R pi = pi_v<R>();
  C one(1);
  const C pii = C(R(0), pi);
  C S(0);
  C qn(1), un(1), uin(1);
  const C uinv = one / u;
  int calm = 0;
  for (long n = 1; n <= kSeriesCap; ++n) {
    qn *= q;
    un *= u;
    uin *= uinv;
    C term = qn / (one - qn) * (un - uin);
    S += term;
    if (abs_c(term) < tol * (R(1) + abs_c(S))) {
      if (++calm >= 3) break;
    } else {
      calm = 0;
    }
    if (n == kSeriesCap) throw series_nonconvergence("zeta series did not converge");
  }
  return eta1 * z + pii * (u + one) / (u - one) - C(2) * pii * S;
}

}  // namespace detail

template <class C>
LatticeData<C> lattice_data(const Tau<C>& tau, real_t<C> tol = real_t<C>(0)) {
  using R = real_t<C>;
  if (!(tol > R(0))) tol = kernel_tol<C>::series();
  const C t = tau.value;
  if (!(im_part(t) > R(kImTauFloor)))
    throw series_nonconvergence("Im(tau) below the series floor 0.05");
  const R pi = pi_v<R>();
  const C two_pi_i = C(R(0), R(2) * pi);

  LatticeData<C> ld;
  ld.tau = t;
  ld.tol = tol;
  ld.qh = cexp(C(R(0), pi) * t);
  ld.q = ld.qh * ld.qh;

  const C S1 = detail::lambert_sum(ld.q, 1, tol);
  const C S3 = detail::lambert_sum(ld.q, 3, tol);
  const C S5 = detail::lambert_sum(ld.q, 5, tol);
  const R pi2 = pi * pi;
  const R pi4 = pi2 * pi2;
  const R pi6 = pi4 * pi2;
  ld.g2 = R(4) / R(3) * pi4 * (C(1) + C(240) * S3);
  ld.g3 = R(8) / R(27) * pi6 * (C(1) - C(504) * S5);
  ld.eta1 = pi2 / R(3) * (C(1) - C(24) * S1);
  ld.eta2 = t * ld.eta1 - two_pi_i;

  ld.e1 = detail::wp_core(C(-1), ld.q, tol);       // z = 1/2
  ld.e2 = detail::wp_core(ld.qh, ld.q, tol);       // z = tau/2
  ld.e3 = detail::wp_core(C(0) - ld.qh, ld.q, tol);  // z = (1+tau)/2

  ld.delta = ld.g2 * ld.g2 * ld.g2 - C(27) * ld.g3 * ld.g3;
  ld.j = C(1728) * ld.g2 * ld.g2 * ld.g2 / ld.delta;
  return ld;
}

template <class C> C wp(const C& z, const LatticeData<C>& ld) {
  using R = real_t<C>;
  auto red = detail::reduce_z(z, ld.tau);
  detail::check_not_pole(red.z, z);
  const R pi = pi_v<R>();
  C u = cexp(C(R(0), R(2) * pi) * red.z);
  return detail::wp_core(u, ld.q, ld.tol);
}

template <class C> C wp_prime(const C& z, const LatticeData<C>& ld) {
  using R = real_t<C>;
  auto red = detail::reduce_z(z, ld.tau);
  detail::check_not_pole(red.z, z);
  const R pi = pi_v<R>();
  C u = cexp(C(R(0), R(2) * pi) * red.z);
  return detail::wp_prime_core(u, ld.q, ld.tol);
}

template <class C> C zeta_w(const C& z, const LatticeData<C>& ld) {
  using R = real_t<C>;
  auto red = detail::reduce_z(z, ld.tau);
  detail::check_not_pole(red.z, z);
  const R pi = pi_v<R>();
  C u = cexp(C(R(0), R(2) * pi) * red.z);
  C base = detail::zeta_core(red.z, u, ld.q, ld.eta1, ld.tol);
  return base + R(red.n1) * ld.eta1 + R(red.n2) * ld.eta2;
}

template <class C>
HeckeValue<C> hecke_Z(const TorsionPoint<C>& pt, const LatticeData<C>& ld) {
  using R = real_t<C>;
  if (in_half_lattice(pt.r, pt.s))
    throw invalid_point("(r,s) lies in (1/2)Z^2; Z_{r,s} is undefined");
  const R pi = pi_v<R>();
  HeckeValue<C> hv;
  hv.point = pt;
  hv.tau = ld.tau;
  hv.a = pt.r + pt.s * ld.tau;
  hv.x = cexp(C(R(0), R(2) * pi) * hv.a);
  hv.Z = zeta_w(hv.a, ld) - pt.r * ld.eta1 - pt.s * ld.eta2;
  return hv;
}

template <class C> std::vector<TorsionPoint<C>> torsion_points(int N) {
  if (N < 3) throw error("torsion_points requires N >= 3");
  std::vector<TorsionPoint<C>> out;
  for (int k1 = 0; k1 < N; ++k1)
    for (int k2 = 0; k2 < N; ++k2) {
      int g = std::gcd(std::gcd(k1, k2), N);
      if (g == 1) out.push_back(make_torsion<C>(k1, k2, N));
    }
  return out;
}

template <class C> C t_of_tau(const LatticeData<C>& ld) {
  return (ld.e3 - ld.e1) / (ld.e2 - ld.e1);
}

// Independent oracle for delta: (2 pi)^12 q prod_{n>=1} (1-q^n)^24.
template <class C> C delta_qproduct(const LatticeData<C>& ld) {
  using R = real_t<C>;
  const R two_pi = R(2) * pi_v<R>();
  C prod(1), qn(1);
  for (long n = 1; n <= kSeriesCap; ++n) {
    qn *= ld.q;
    if (abs_c(qn) < ld.tol / R(24)) break;
    prod *= cpow_int(C(1) - qn, 24);
  }
  return cpow_int(C(two_pi), 12) * ld.q * prod;
}

// Iterated reduction into F2 = {0 <= Re tau < 2, |tau - 1/2| >= 1/2, |tau - 3/2| > 1/2}
// by the index-2 congruence group generators tau -> tau + 2 and tau -> tau/(1 - 2tau).
template <class C> C normalize_to_F2(const C& tau) {
  using R = real_t<C>;
  C t = tau;
  for (int iter = 0; iter < 500; ++iter) {
    R shift = floor_r(re_part(t) / R(2));
    t = t - C(R(2) * shift);
    bool c1 = abs_c(t - C(R(0.5))) < R(0.5) * (R(1) - R(1e-15));
    bool c2 = abs_c(t - C(R(1.5))) <= R(0.5) * (R(1) + R(1e-15));
    if (!c1 && !c2) return t;
    if (c1) {
      t = t / (C(1) - C(2) * t);  // isometric circle |t - 1/2| = 1/2
    } else {
      C w = t - C(2);
      t = w / (C(2) * w + C(1));  // isometric circle |w + 1/2| = 1/2
    }
  }
  throw error("normalize_to_F2 did not settle");
}

}  // namespace zrs
