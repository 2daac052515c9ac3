#pragma once

// Behavior of the chain along vertical rays tau -> i*infinity. Three groups:
//
//  * closed limit forms in s: Q_n(Z_{r,s}|tau) -> q_check_at(n,s), while G_n
//    and R_n - t Q_{n-2} Q_n vanish like x = e^{2 pi i (r + s tau)} with
//    coefficients g_check_at / r_check_at, and the normalized form Z^{(n)}
//    tends to z_check_at(n,s); c_coeff(n,s) is the connection coefficient in
//    lambda^{(n)} = 1 + c e^{2 pi i r} ((1-t)/16)^{2s} + o(|1-t|^{2s});
//
//  * cusp order fits: at s = 0 and s = 1/2 the form vanishes like an integer
//    or half-integer power of q; vanishing_order fits that power on a ladder
//    of Im tau and extracts the leading coefficient (never rounding silently);
//
//  * the quarter point (1/4, 0), where R_n Q_{n-1} = G_n/4 and
//    phi_n = ((2n+1)/4) G_n hold along the whole ray and the leading
//    q^{a_n} coefficient of Z^{(n)} has a closed product form.
//
// The limit forms are polynomial-product arithmetic and work at any backend;
// the order fits run the value chain below its q^{order} cancellation floor
// in doubles, so drive them with a wide backend (cpp120 covers orders < ~1.3,
// cpp320 the n <= 6 range on the default ladder).

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "zrs/counting.hpp"
#include "zrs/elliptic.hpp"
#include "zrs/premodular.hpp"
#include "zrs/recursion.hpp"

namespace zrs {

// Limit of Q_n(Z_{r,s}(tau)|tau); defined for n >= -2 with the two seed
// levels equal to 1. Parity-split product, empty products are 1.
template <class C> C q_check_at(int n, const C& s) {
  if (n < -2) throw error("q_check_at requires n >= -2");
  if (n < 0) return C(1);
  using R = real_t<C>;
  const C lead = C(R(0), pi_v<R>()) * (C(2) * s - C(1));
  const int m = n / 2;
  C out = cpow_int(lead, m + 1);
  if (n % 2 == 0) {
    for (int k = 0; k < m; ++k)
      out *= cpow_int((s + C(k)) * (s + C(k) + C(0.5)) * (s - C(k) - C(1)) *
                          (s - C(k) - C(1.5)),
                      m - k);
  } else {
    out *= cpow_int(s * (s - C(1)), m + 1);
    for (int k = 0; k < m; ++k)
      out *= cpow_int((s + C(k) + C(0.5)) * (s + C(k) + C(1)) *
                          (s - C(k) - C(1.5)) * (s - C(k) - C(2)),
                      m - k);
  }
  return out;
}

// Coefficient of x in G_n(Z_{r,s}(tau)|tau) as tau -> i*infinity.
template <class C> C g_check_at(int n, const C& s) {
  if (n < 0) throw error("g_check_at requires n >= 0");
  using R = real_t<C>;
  const C pi_i = C(R(0), pi_v<R>());
  const C lead = pi_i * (C(2) * s - C(1));
  const int m = n / 2;
  C out = C(8) * pi_i;
  if (n % 2 == 0) {
    out *= cpow_int(lead, 3 * m);
    for (int k = 0; k < m; ++k)
      out *= cpow_int(s + C(k), 3 * (m - k)) *
             cpow_int(s + C(k) + C(0.5), 3 * (m - k) - 1) *
             cpow_int(s - C(k) - C(1), 3 * (m - k) - 2) *
             cpow_int(s - C(k) - C(1.5), 3 * (m - k - 1));
  } else {
    out *= cpow_int(lead, 3 * m + 1) * cpow_int(s, 3 * m + 2) *
           cpow_int(s - C(1), 3 * m);
    for (int k = 0; k < m; ++k)
      out *= cpow_int(s + C(k) + C(0.5), 3 * (m - k)) *
             cpow_int(s + C(k) + C(1), 3 * (m - k) - 1) *
             cpow_int(s - C(k) - C(1.5), 3 * (m - k) - 2) *
             cpow_int(s - C(k) - C(2), 3 * (m - k - 1));
  }
  return out;
}

// Coefficient of x in R_n - t Q_{n-2} Q_n along the same ray.
template <class C> C r_check_at(int n, const C& s) {
  if (n < 0) throw error("r_check_at requires n >= 0");
  using R = real_t<C>;
  const C pi_i = C(R(0), pi_v<R>());
  const C lead = pi_i * (C(2) * s - C(1));
  const int m = n / 2;
  C out = C(8) * pi_i * cpow_int(lead, 2 * m);
  if (n % 2 == 0) {
    out *= cpow_int(s, 2 * m + 1) * cpow_int(s + C(0.5), 2 * m);
    for (int k = 1; k < m; ++k)
      out *= cpow_int((s + C(k)) * (s + C(k) + C(0.5)) * (s - C(k)) *
                          (s - C(k) - C(0.5)),
                      2 * (m - k));
  } else {
    out *= cpow_int(s, 2 * m + 3) * cpow_int(s + C(0.5), 2 * m) *
           cpow_int((s + C(1)) * (s - C(1)), 2 * m);
    for (int k = 1; k < m; ++k)
      out *= cpow_int((s + C(k) + C(0.5)) * (s + C(k) + C(1)) *
                          (s - C(k) - C(0.5)) * (s - C(k) - C(1)),
                      2 * (m - k));
  }
  return out;
}

// Limit of Z^{(n)}_{r,s}(tau) for Re s in (0, 1/2); polynomial in s and
// nonzero whenever Re s avoids {0, 1/2, 1}. n = 0 returns 1.
template <class C> C z_check_at(int n, const C& s) {
  if (n < 0) throw error("z_check_at requires n >= 0");
  if (n == 0) return C(1);
  using R = real_t<C>;
  const C lead = C(R(0), pi_v<R>()) * (C(2) * s - C(1));
  const C two_pi = C(R(2) * pi_v<R>());
  if (n % 2 == 1) {
    const int m = (n - 1) / 2;
    C out = cpow_int(two_pi, 2 * m * (m + 1)) * cpow_int(lead, m + 1);
    for (int k = 0; k < m; ++k)
      out *= cpow_int((s + C(k)) * (s + C(k) + C(0.5)) * (s - C(k) - C(1)) *
                          (s - C(k) - C(1.5)),
                      m - k);
    return out;
  }
  const int m = n / 2;
  C out = cpow_int(two_pi, 2 * m * m) * cpow_int(lead, m) *
          cpow_int(s * (s - C(1)), m);
  for (int k = 0; k <= m - 2; ++k)
    out *= cpow_int((s + C(k) + C(0.5)) * (s + C(k) + C(1)) *
                        (s - C(k) - C(1.5)) * (s - C(k) - C(2)),
                    m - 1 - k);
  if (m % 2 == 1) out = -out;  // sign (-1)^{m^2}
  return out;
}

// Connection coefficient of the t -> 1 expansion of lambda^{(n)}.
template <class C> C c_coeff(int n, const C& s) {
  if (n < 0) throw error("c_coeff requires n >= 0");
  using R = real_t<C>;
  const R gate = R(1e3) * kernel_tol<C>::eps() * std::max(R(1), abs_c(s));
  auto guard = [&](const C& f) {
    if (abs_c(f) < gate) throw error("c_coeff: s sits on a pole of the coefficient formula");
    return f;
  };
  const int m = n / 2;
  C num, den;
  if (n % 2 == 0) {
    num = C(8) * s;
    den = guard(C(2) * s - C(1));
    for (int k = 0; k < m; ++k) {
      num *= (s + C(k)) * (s + C(k) + C(0.5));
      den *= guard(s - C(k) - C(1)) * guard(s - C(k) - C(1.5));
    }
  } else {
    num = C(8) * s * s;
    den = guard(C(2) * s - C(1)) * guard(s - C(1));
    for (int k = 0; k < m; ++k) {
      num *= (s + C(k) + C(0.5)) * (s + C(k) + C(1));
      den *= guard(s - C(k) - C(1.5)) * guard(s - C(k) - C(2));
    }
  }
  return num / den;
}

template <class C> struct LimitPolynomials {
  int n = 0;
  C q_check(const C& s) const { return q_check_at(n, s); }
  C g_check(const C& s) const { return g_check_at(n, s); }
  C r_check(const C& s) const { return r_check_at(n, s); }
  C z_check(const C& s) const { return z_check_at(n, s); }
  C c(const C& s) const { return c_coeff(n, s); }
};

template <class C = cplx> LimitPolynomials<C> limit_polys(int n) {
  if (n < 0) throw error("limit_polys requires n >= 0");
  return LimitPolynomials<C>{n};
}

// Relative gap |Z^{(n)}(tau) - z_check(s)| / |z_check(s)| at the far end of
// an increasing ray of Im tau. The limit requires Re s strictly inside
// (0, 1/2); reduce other points by the sign law first.
template <class C>
real_t<C> limit_convergence(int n, const TorsionPoint<C>& pt,
                            const std::vector<Tau<C>>& ray) {
  using Rl = real_t<C>;
  if (n < 1) throw error("limit_convergence requires n >= 1");
  if (ray.empty()) throw error("limit_convergence requires a nonempty tau ray");
  for (size_t i = 1; i < ray.size(); ++i)
    if (!(im_part(ray[i].value) > im_part(ray[i - 1].value)))
      throw error("limit_convergence requires strictly increasing Im tau");
  const Rl rs = re_part(pt.s);
  if (!(rs > Rl(0) && rs < Rl(0.5)))
    throw invalid_point("limit_convergence requires Re s in (0, 1/2)");
  const C zc = z_check_at(n, pt.s);
  if (abs_c(zc) < Rl(1e3) * kernel_tol<C>::eps())
    throw error("limit_convergence: the limit value vanishes at this s");
  const C z = z_n(n, pt, ray.back()).value;
  return abs_c(z - zc) / abs_c(zc);
}

template <class C>
real_t<C> limit_convergence(int n, const TorsionPoint<C>& pt, const Tau<C>& tau) {
  return limit_convergence(n, pt, std::vector<Tau<C>>{tau});
}

namespace detail {

struct LineFit {
  double slope = 0, intercept = 0, rms = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t m = x.size();
  double xm = 0, ym = 0;
  for (size_t i = 0; i < m; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= double(m);
  ym /= double(m);
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = ym - f.slope * xm;
  double ss = 0;
  for (size_t i = 0; i < m; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / double(m));
  return f;
}

// Shared ladder fit: y_k = log|v_k| against x_k = -2 pi Im tau_k, so the
// slope is the q-order. Rejects sloppy fits and ambiguous roundings instead
// of rounding silently.
template <class C, class F>
void order_fit(F value_at, const std::vector<Tau<C>>& ladder, const char* what,
               double* slope, double* rms, double* rounded, C* lead) {
  using Rl = real_t<C>;
  if (ladder.size() < 3)
    throw error(std::string(what) + " requires at least 3 ladder points");
  std::vector<double> xs, ys;
  xs.reserve(ladder.size());
  ys.reserve(ladder.size());
  C v_top{};
  for (const auto& tau : ladder) {
    const C v = value_at(tau);
    if (!(abs_c(v) > Rl(0)))
      throw inconclusive_order(std::string(what) + ": value underflowed on the ladder");
    xs.push_back(-2 * pi_v<double>() * to_double(im_part(tau.value)));
    ys.push_back(to_double(log_r(abs_c(v))));
    v_top = v;
  }
  const LineFit f = fit_line(xs, ys);
  if (!(f.rms < 0.02))
    throw inconclusive_order(std::string(what) + ": ladder is not on a single q power");
  const double r2 = std::round(2 * f.slope) / 2;
  if (std::abs(f.slope - r2) > 0.1)
    throw inconclusive_order(std::string(what) + ": fitted order is not near a half-integer");
  *slope = f.slope;
  *rms = f.rms;
  *rounded = r2;
  // q^{-w} = e^{-2 pi i w tau} peels the fitted power off the far sample.
  const C expo = C(Rl(0), Rl(-2) * pi_v<Rl>() * Rl(r2)) * ladder.back().value;
  *lead = v_top * cexp(expo);
}

}  // namespace detail

template <class C> struct OrderEstimate {
  int n = 0;
  TorsionPoint<C> point;
  double slope_order = 0;
  double rounded_order = 0;
  double fit_residual = 0;  // rms of the line fit, log units
  C leading_coeff{};
};

template <class C> std::vector<Tau<C>> default_order_ladder() {
  using Rl = real_t<C>;
  std::vector<Tau<C>> out;
  for (int t : {6, 8, 10, 12, 14}) out.push_back(make_tau(C(Rl(0), Rl(t))));
  return out;
}

// Fitted q-order of Z^{(n)} at a cusp point (s = 0 or s = 1/2, r off the
// half-integers). The expected values are a_n at s = 0 and b_n/2 at s = 1/2.
template <class C>
OrderEstimate<C> vanishing_order(int n, const TorsionPoint<C>& pt,
                                 const std::vector<Tau<C>>& ladder) {
  using Rl = real_t<C>;
  if (n < 1) throw error("vanishing_order requires n >= 1");
  const Rl rs = re_part(pt.s), rr = re_part(pt.r);
  if (!(rs == Rl(0) || rs == Rl(0.5)) || !(im_part(pt.s) == Rl(0)))
    throw invalid_point("vanishing_order requires s in {0, 1/2}");
  if (!(rr > Rl(0) && rr < Rl(1)) || rr == Rl(0.5) || !(im_part(pt.r) == Rl(0)))
    throw invalid_point("vanishing_order requires r in (0,1/2) or (1/2,1)");
  OrderEstimate<C> est;
  est.n = n;
  est.point = pt;
  detail::order_fit<C>([&](const Tau<C>& tau) { return z_n(n, pt, tau).value; },
                       ladder, "vanishing_order", &est.slope_order,
                       &est.fit_residual, &est.rounded_order, &est.leading_coeff);
  if (est.rounded_order < 0)
    throw inconclusive_order("vanishing_order: fitted a negative power");
  return est;
}

template <class C>
OrderEstimate<C> vanishing_order(int n, const TorsionPoint<C>& pt) {
  return vanishing_order(n, pt, default_order_ladder<C>());
}

// Along the quarter ray the scalar chain obeys R_n Q_{n-1} = G_n/4 and
// phi_n = ((2n+1)/4) G_n; both residuals are relative to the right side.
template <class C> struct QuarterIdentityResiduals {
  int n = 0;
  real_t<C> rq_residual{};
  real_t<C> phi_residual{};
};

template <class C>
QuarterIdentityResiduals<C> quarter_identities(int n, const Tau<C>& tau) {
  using Rl = real_t<C>;
  if (n < 0) throw error("quarter_identities requires n >= 0");
  const auto pt = make_point(C(0.25), C(0));
  const auto ld = lattice_data(tau);
  const auto vr = value_run(n, pt, ld);
  const C g = vr.G[static_cast<size_t>(n)];
  const C quarter_g = g / C(4);
  const C phi_target = C(Rl(2 * n + 1) / Rl(4)) * g;
  QuarterIdentityResiduals<C> out;
  out.n = n;
  out.rq_residual =
      abs_c(vr.R[static_cast<size_t>(n)] * vr.Qat(n - 1) - quarter_g) / abs_c(quarter_g);
  out.phi_residual =
      abs_c(vr.phi[static_cast<size_t>(n)] - phi_target) / abs_c(phi_target);
  return out;
}

// G_n along the quarter ray decays like q^{n(n+1)/2 - a_n}; the default
// ladder sits lower than the cusp one because that power reaches 12 by
// n = 5 and taller rungs would fall through any fixed mantissa.
template <class C> std::vector<Tau<C>> default_quarter_g_ladder() {
  using Rl = real_t<C>;
  std::vector<Tau<C>> out;
  for (int t : {4, 5, 6, 7, 8}) out.push_back(make_tau(C(Rl(0), Rl(t))));
  return out;
}

template <class C>
OrderEstimate<C> quarter_g_order(int n, const std::vector<Tau<C>>& ladder) {
  if (n < 0) throw error("quarter_g_order requires n >= 0");
  const auto pt = make_point(C(0.25), C(0));
  OrderEstimate<C> est;
  est.n = n;
  est.point = pt;
  detail::order_fit<C>(
      [&](const Tau<C>& tau) {
        return value_run(n, pt, lattice_data(tau)).G[static_cast<size_t>(n)];
      },
      ladder, "quarter_g_order", &est.slope_order, &est.fit_residual,
      &est.rounded_order, &est.leading_coeff);
  return est;
}

template <class C> OrderEstimate<C> quarter_g_order(int n) {
  return quarter_g_order(n, default_quarter_g_ladder<C>());
}

// Closed form of the q^{a_n} coefficient of Z^{(n)} at (1/4, 0):
// (-1)^{c} 16^{a_n} pi^{n(n+1)/2} prod_{k=1}^{n-1} (2k+1)^{n-k}, where the
// sign exponent c is (n^2-1)/4 for odd n and n^2/4 for even n.
template <class C> C quarter_leading_coeff(int n) {
  using Rl = real_t<C>;
  if (n < 0) throw error("quarter_leading_coeff requires n >= 0");
  const auto ab = ab_coeffs(n);
  C out = cpow_int(C(16), static_cast<int>(ab.a)) *
          cpow_int(C(pi_v<Rl>()), n * (n + 1) / 2);
  for (int k = 1; k <= n - 1; ++k) out *= cpow_int(C(2 * k + 1), n - k);
  const long long sign_pow = (n % 2 == 1) ? (1LL * n * n - 1) / 4 : 1LL * n * n / 4;
  return (sign_pow % 2 == 1) ? -out : out;
}

}  // namespace zrs
