#pragma once

// The weight-n(n+1)/2 functions Z^{(n)}_{r,s}(tau) = Q_{n-1}(Z_{r,s}(tau)) / q_{n-1}(tau),
// evaluated through the scalar value chain, together with the printed closed
// forms for n <= 4 (the oracles), the level-N product M_{n,N} in log-magnitude
// form, the reflection sign law, and the modular-transformation residual.
//
// Conventions: Z^{(-1)} = Z^{(0)} = 1 (weight 0); Z^{(1)} = Z_{r,s} itself.

#include <stdexcept>

#include "zrs/counting.hpp"
#include "zrs/elliptic.hpp"
#include "zrs/recursion.hpp"

namespace zrs {

template <class C> struct PremodularValue {
  int n = 0;
  TorsionPoint<C> point;
  Tau<C> tau;
  C value{};
  int weight = 0;  // n(n+1)/2
};

// Scalar core shared by the single-point and product paths.
template <class C>
C z_n_value(int n, const HeckeValue<C>& hv, const LatticeData<C>& ld) {
  if (n < -1) throw std::invalid_argument("z_n_value requires n >= -1");
  if (n <= 0) return C(1);
  if (n == 1) return hv.Z;
  const ValueRun<C> vr = value_run(n - 1, hv, ld);
  return vr.Q[static_cast<size_t>(n - 1)] / leading_coeffs(n - 1, hv, ld).q;
}

template <class C>
PremodularValue<C> z_n(int n, const TorsionPoint<C>& pt, const Tau<C>& tau) {
  if (n < -1) throw std::invalid_argument("z_n requires n >= -1");
  if (n <= 0) return PremodularValue<C>{n, pt, tau, C(1), 0};
  const LatticeData<C> ld = lattice_data(tau);
  const HeckeValue<C> hv = hecke_Z(pt, ld);
  return PremodularValue<C>{n, pt, tau, z_n_value(n, hv, ld), n * (n + 1) / 2};
}

// Printed closed forms for n = 1..4; the independent oracle for z_n.
template <class C>
PremodularValue<C> z_n_closed(int n, const TorsionPoint<C>& pt, const Tau<C>& tau) {
  if (n < 1 || n > 4) throw std::domain_error("z_n_closed covers n = 1..4 only");
  const LatticeData<C> ld = lattice_data(tau);
  const HeckeValue<C> hv = hecke_Z(pt, ld);
  const C Z = hv.Z;
  const C P = wp(hv.a, ld);
  const C Pp = wp_prime(hv.a, ld);
  const C g2 = ld.g2, g3 = ld.g3;
  C v{};
  switch (n) {
    case 1:
      v = Z;
      break;
    case 2:
      v = Z * Z * Z - C(3) * P * Z - Pp;
      break;
    case 3: {
      const C Z2 = Z * Z, Z3 = Z2 * Z;
      v = Z3 * Z3 - C(15) * P * Z2 * Z2 - C(20) * Pp * Z3 +
          (C(6.75) * g2 - C(45) * P * P) * Z2 - C(12) * P * Pp * Z -
          C(1.25) * Pp * Pp;
      break;
    }
    case 4: {
      const C Z2 = Z * Z, Z4 = Z2 * Z2, Z8 = Z4 * Z4;
      const C P2 = P * P, P3 = P2 * P;
      v = Z8 * Z2 - C(45) * P * Z8 - C(120) * Pp * Z4 * Z2 * Z +
          (C(99.75) * g2 - C(630) * P2) * Z4 * Z2 - C(504) * P * Pp * Z4 * Z -
          C(3.75) * (C(280) * P3 - C(49) * g2 * P - C(115) * g3) * Z4 +
          C(15) * (C(11) * g2 - C(24) * P2) * Pp * Z2 * Z -
          C(2.25) * (C(140) * P2 * P2 - C(245) * g2 * P2 + C(190) * g3 * P + C(21) * g2 * g2) * Z2 -
          (C(40) * P3 - C(163) * g2 * P + C(125) * g3) * Pp * Z +
          C(0.75) * (C(25) * g2 - C(3) * P2) * Pp * Pp;
      break;
    }
  }
  return PremodularValue<C>{n, pt, tau, v, n * (n + 1) / 2};
}

template <class C> struct ProductValue {
  int n = 0;
  int N = 0;
  Tau<C> tau;
  C value{};            // exp(log_abs) * phase; may leave the representable range
  real_t<C> log_abs{};  // log |M_{n,N}|
  C phase{};            // unit-modulus direction
  long long factor_count = 0;
};

// Product over all primitive level-N pairs, accumulated as (log|.|, phase) so
// levels where the raw product leaves the exponent range stay meaningful.
// Factor order is the lexicographic (k1, k2) enumeration: bit-stable.
template <class C>
ProductValue<C> m_product(int n, int N, const Tau<C>& tau) {
  using R = real_t<C>;
  if (n < 1 || N < 3) throw std::invalid_argument("m_product requires n >= 1 and N >= 3");
  const LatticeData<C> ld = lattice_data(tau);
  R log_abs(0);
  C phase(1);
  const auto pts = torsion_points<C>(N);
  for (const auto& pt : pts) {
    const C v = z_n_value(n, hecke_Z(pt, ld), ld);
    const R av = abs_c(v);
    if (!(av > R(0)))
      throw numerical_breakdown("level-N product hit an exact zero factor", n);
    log_abs += log_r(av);
    phase *= v / C(av);
  }
  ProductValue<C> out;
  out.n = n;
  out.N = N;
  out.tau = tau;
  out.log_abs = log_abs;
  out.phase = phase;
  out.value = cexp(C(log_abs)) * phase;
  out.factor_count = static_cast<long long>(pts.size());
  return out;
}

template <class C> struct SignReduced {
  TorsionPoint<C> point;
  int sign = 1;
};

// Reduce (r,s) mod 1 into [0,1)^2; when Re s ends up above 1/2, replace the
// point by (1-r, 1-s) (re-reduced) so the representative has Re s in [0, 1/2].
// The replacement flips the value by (-1)^{n(n+1)/2}.
template <class C>
SignReduced<C> sign_reduce(const TorsionPoint<C>& pt, int n) {
  using R = real_t<C>;
  auto mod1 = [](const C& x) { return x - C(floor_r(re_part(x))); };
  C r = mod1(pt.r);
  C s = mod1(pt.s);
  bool reflected = false;
  if (re_part(s) > R(0.5)) {
    r = mod1(C(1) - r);
    s = C(1) - s;
    reflected = true;
  }
  SignReduced<C> out;
  out.point = make_point(r, s);
  if (pt.exact_order > 0) {
    const int N = pt.exact_order;
    out.point.exact_order = N;
    const int k1 = ((pt.k1 % N) + N) % N;
    const int k2 = ((pt.k2 % N) + N) % N;
    out.point.k1 = reflected ? (N - k1) % N : k1;
    out.point.k2 = reflected ? (N - k2) % N : k2;
  }
  out.sign = reflected && (n * (n + 1) / 2) % 2 != 0 ? -1 : 1;
  return out;
}

struct UnimodularMatrix {
  int a = 1, b = 0, c = 0, d = 1;
};

// Relative defect of Z^{(n)}_{ar-bs, ds-cr}((a tau + b)/(c tau + d))
// against (c tau + d)^{n(n+1)/2} Z^{(n)}_{r,s}(tau). The transformed index is
// sign-reduced before evaluation; the weight is an integer, so the automorphy
// factor is a plain integer power with no branch choice.
template <class C>
real_t<C> modular_check(int n, const TorsionPoint<C>& pt, const Tau<C>& tau,
                        const UnimodularMatrix& m) {
  using R = real_t<C>;
  if (m.a * m.d - m.b * m.c != 1)
    throw std::invalid_argument("modular_check requires a determinant-one matrix");
  const C ctd = C(R(m.c)) * tau.value + C(R(m.d));
  const C rhs = cpow_int(ctd, n * (n + 1) / 2) * z_n(n, pt, tau).value;

  const C r2 = C(R(m.a)) * pt.r - C(R(m.b)) * pt.s;
  const C s2 = C(R(m.d)) * pt.s - C(R(m.c)) * pt.r;
  const Tau<C> tau2 = make_tau((C(R(m.a)) * tau.value + C(R(m.b))) / ctd);
  const SignReduced<C> red = sign_reduce(make_point(r2, s2), n);
  const C lhs = C(R(red.sign)) * z_n(n, red.point, tau2).value;

  const R la = abs_c(lhs), ra = abs_c(rhs);
  const R scale = la > ra ? la : ra;
  if (!(scale > R(0))) return R(0);
  return abs_c(lhs - rhs) / scale;
}

}  // namespace zrs
