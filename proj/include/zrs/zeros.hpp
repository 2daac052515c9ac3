#pragma once

// Zero location in the tau upper half-plane: argument-principle counts over
// rectangles, Newton refinement with a simplicity certificate, and the
// degree fit for the level-N product as a polynomial in j.
//
// Everything here works in double precision. The functions being probed are
// holomorphic in tau away from the real axis, so a real-step central
// difference is the complex derivative, and winding numbers are plain phase
// sums over the rectangle boundary.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "zrs/counting.hpp"
#include "zrs/premodular.hpp"

namespace zrs {

struct Rect {
  double re_min = 0, re_max = 0;
  double im_min = 0, im_max = 0;
};

inline Rect make_rect(double re_min, double re_max, double im_min, double im_max) {
  if (!(re_min < re_max) || !(im_min < im_max))
    throw std::invalid_argument("make_rect: empty rectangle");
  if (!(im_min > 0.05)) throw std::invalid_argument("make_rect: im_min must exceed 0.05");
  return Rect{re_min, re_max, im_min, im_max};
}

// residual and derivative_mag are relative to the local scale, the largest
// |f| on the boundary of the isolating box.
struct ZeroRecord {
  cplx tau0{};
  double residual = 0;
  double derivative_mag = 0;
  int multiplicity_claim = 1;
};

namespace detail {

template <class F>
std::vector<cplx> boundary_samples(F&& f, const Rect& r, int per_edge) {
  std::vector<cplx> vals;
  vals.reserve(4 * per_edge);
  const auto push = [&](cplx a, cplx b) {
    for (int j = 0; j < per_edge; ++j) {
      const double u = double(j) / per_edge;
      vals.push_back(f(a + u * (b - a)));
    }
  };
  const cplx bl(r.re_min, r.im_min), br(r.re_max, r.im_min);
  const cplx tr(r.re_max, r.im_max), tl(r.re_min, r.im_max);
  push(bl, br);
  push(br, tr);
  push(tr, tl);
  push(tl, bl);
  return vals;
}

}  // namespace detail

// Net phase of f around the rectangle boundary, in full turns. The boundary
// must stay clear of zeros: when some sample dips below 1e-8 of the boundary
// scale the rectangle is inflated slightly and retried, three times at most.
template <class F>
int winding_count(F&& f, const Rect& rect, int samples_per_edge) {
  if (samples_per_edge < 8)
    throw std::invalid_argument("winding_count needs at least 8 samples per edge");
  Rect r = rect;
  const double floor_im = 0.0501;
  for (int attempt = 0;; ++attempt) {
    const auto vals = detail::boundary_samples(f, r, samples_per_edge);
    double hi = 0, lo = 1e300;
    for (const cplx& v : vals) {
      hi = std::max(hi, std::abs(v));
      lo = std::min(lo, std::abs(v));
    }
    if (lo > 1e-8 * hi) {
      double total = 0;
      for (size_t k = 0; k < vals.size(); ++k)
        total += std::arg(vals[(k + 1) % vals.size()] / vals[k]);
      const double turns = total / (2 * pi_v<double>());
      const long long rounded = std::llround(turns);
      if (std::abs(turns - double(rounded)) >= 0.1)
        throw error("winding_count: phase sum is not near an integer; raise samples_per_edge");
      return static_cast<int>(rounded);
    }
    if (attempt == 3)
      throw error("winding_count: boundary stayed too close to a zero after three nudges");
    const double dr = 0.0037 * (attempt + 1) * (r.re_max - r.re_min);
    const double di = 0.0037 * (attempt + 1) * (r.im_max - r.im_min);
    r.re_min -= dr;
    r.re_max += dr;
    r.im_max += di;
    r.im_min = std::max(r.im_min - di, floor_im);
  }
}

// Newton refinement of one zero. The box around the seed must isolate it
// (winding one); convergence and the simplicity certificate are both judged
// against the largest |f| on that box boundary.
template <class F>
ZeroRecord refine_zero(F&& f, cplx seed, double box_half = 1e-2) {
  if (!(box_half > 0)) throw std::invalid_argument("refine_zero: box_half must be positive");
  if (!(seed.imag() - box_half > 0.05))
    throw error("refine_zero: isolating box dips below the kernel floor");
  const Rect box{seed.real() - box_half, seed.real() + box_half,
                 seed.imag() - box_half, seed.imag() + box_half};
  const int w = winding_count(f, box, 64);
  if (w != 1)
    throw error("refine_zero: box does not isolate a single zero (winding " +
                std::to_string(w) + ")");
  double scale = 0;
  for (const cplx& v : detail::boundary_samples(f, box, 16))
    scale = std::max(scale, std::abs(v));

  cplx tau = seed;
  cplx fv = f(tau);
  for (int it = 0; it < 80 && !(std::abs(fv) < 1e-9 * scale); ++it) {
    const double h = 1e-4 * std::max(1.0, std::abs(tau));
    const cplx fp = (f(tau + h) - f(tau - h)) / (2 * h);
    if (!(std::abs(fp) > 0)) throw error("refine_zero: derivative vanished mid-iteration");
    tau -= fv / fp;
    if (std::abs(tau - seed) > 4 * box_half) throw error("refine_zero: iteration left the box");
    fv = f(tau);
  }
  if (!(std::abs(fv) < 1e-9 * scale)) throw error("refine_zero: no convergence in 80 steps");

  const double h = 1e-5 * std::max(1.0, std::abs(tau));
  const double dmag = std::abs((f(tau + h) - f(tau - h)) / (2 * h));
  if (!(dmag > 1e-4 * scale))
    throw suspected_multiple_zero("refine_zero: derivative below the simplicity threshold");
  return ZeroRecord{tau, std::abs(fv) / scale, dmag / scale, 1};
}

// Count zeros in rect, then find them all: grid-scan for local minima of
// |f|, refine each candidate, and insist the refined set matches the count.
template <class F>
std::vector<ZeroRecord> locate_zeros(F&& f, const Rect& rect, int grid = 48,
                                     int samples_per_edge = 96) {
  if (grid < 8) throw std::invalid_argument("locate_zeros needs a grid of at least 8");
  const int count = winding_count(f, rect, samples_per_edge);
  if (count < 0) throw error("locate_zeros: negative winding, f has poles here");
  if (count == 0) return {};

  const double hx = (rect.re_max - rect.re_min) / (grid + 1);
  const double hy = (rect.im_max - rect.im_min) / (grid + 1);
  std::vector<double> mag(static_cast<size_t>(grid) * grid);
  const auto at = [&](int i, int j) { return mag[static_cast<size_t>(j) * grid + i]; };
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i)
      mag[static_cast<size_t>(j) * grid + i] = std::abs(
          f(cplx(rect.re_min + (i + 1) * hx, rect.im_min + (j + 1) * hy)));

  std::vector<std::pair<double, cplx>> seeds;
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      const double v = at(i, j);
      bool best = true;
      for (int dj = -1; dj <= 1 && best; ++dj)
        for (int di = -1; di <= 1 && best; ++di) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= grid || jj >= grid) continue;
          if (at(ii, jj) < v) best = false;
        }
      if (best)
        seeds.push_back({v, cplx(rect.re_min + (i + 1) * hx, rect.im_min + (j + 1) * hy)});
    }
  std::sort(seeds.begin(), seeds.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (seeds.size() > static_cast<size_t>(4 * count + 4)) seeds.resize(4 * count + 4);

  std::vector<ZeroRecord> found;
  for (const auto& [v, seed] : seeds) {
    ZeroRecord rec;
    try {
      rec = refine_zero(f, seed, 1.5 * std::max(hx, hy));
    } catch (const suspected_multiple_zero&) {
      throw;
    } catch (const error&) {
      continue;  // seed was not actually near an isolated zero
    }
    const bool inside = rec.tau0.real() > rect.re_min && rec.tau0.real() < rect.re_max &&
                        rec.tau0.imag() > rect.im_min && rec.tau0.imag() < rect.im_max;
    if (!inside) continue;
    bool fresh = true;
    for (const ZeroRecord& r : found)
      if (std::abs(r.tau0 - rec.tau0) < 1e-6) fresh = false;
    if (fresh) found.push_back(rec);
    if (found.size() == static_cast<size_t>(count)) break;
  }
  if (found.size() != static_cast<size_t>(count))
    throw error("locate_zeros: refined " + std::to_string(found.size()) + " zeros, winding says " +
                std::to_string(count));
  return found;
}

struct EllDegreeFit {
  int n = 0;
  long long N = 0;
  long long degree = 0;       // effective polynomial degree halved
  double fit_residual = 0;    // relative least-squares residual
  long long k_power = 0;      // Delta exponent clearing the weight
  int effective_degree = 0;   // largest surviving coefficient index
};

// tau samples on a diagonal arc that spreads j over several orders of
// magnitude without leaving comfortable double range.
inline std::vector<Tau<cplx>> default_fit_arc(int count = 25) {
  if (count < 2) throw std::invalid_argument("default_fit_arc needs at least 2 samples");
  std::vector<Tau<cplx>> out;
  out.reserve(count);
  for (int m = 0; m < count; ++m) {
    const double u = double(m) / (count - 1);
    out.push_back(make_tau(cplx(0.05 + 0.9 * u, 1.0 + 1.5 * u)));
  }
  return out;
}

// The level-N product divided by the weight-clearing Delta power is a
// polynomial in j, the square of one of half the degree. Fit it with
// generous headroom (degree 2L + 4) on affinely rescaled j and read the
// effective degree from the surviving coefficients.
inline EllDegreeFit ell_degree_fit(int n, long long N, const std::vector<Tau<cplx>>& taus) {
  if (n < 1 || N < 3) throw std::invalid_argument("ell_degree_fit requires n >= 1 and N >= 3");
  if (eps_n(n, N) != 0)
    throw invalid_point("ell_degree_fit: level 3 with n = 1 mod 3 is not a clean j-polynomial");
  const CountReport rep = count_L(n, N);
  const long long L = rep.ell_degree_pred;
  const long long k = detail::rational_to_integer(rep.k_nN, "Delta power");
  const size_t need = static_cast<size_t>(2 * (2 * L + 2) + 1);
  if (taus.size() < need)
    throw error("ell_degree_fit: need at least " + std::to_string(need) + " tau samples");

  const size_t m = taus.size();
  std::vector<cplx> js(m), Fs(m);
  for (size_t i = 0; i < m; ++i) {
    const auto ld = lattice_data(taus[i]);
    const auto prod = m_product(n, static_cast<int>(N), taus[i]);
    const double la = std::abs(ld.delta);
    const cplx dphase = ld.delta / la;
    Fs[i] = prod.phase * std::exp(prod.log_abs - double(k) * std::log(la)) *
            cpow_int(dphase, -static_cast<int>(k));
    js[i] = ld.j;
  }

  size_t distinct = 0;
  for (size_t i = 0; i < m; ++i) {
    bool fresh = true;
    for (size_t l = 0; l < i && fresh; ++l)
      if (std::abs(js[i] - js[l]) < 1e-9 * (1 + std::abs(js[i]))) fresh = false;
    if (fresh) ++distinct;
  }
  if (distinct < need)
    throw error("ell_degree_fit: only " + std::to_string(distinct) +
                " distinct j values; spread the tau samples");

  cplx center(0);
  for (const cplx& j : js) center += j;
  center /= double(m);
  double width = 0;
  for (const cplx& j : js) width = std::max(width, std::abs(j - center));
  if (!(width > 1e-12 * (1 + std::abs(center))))
    throw error("ell_degree_fit: degenerate j spread");

  const long long D = 2 * L + 4;
  Eigen::MatrixXcd A(m, D + 1);
  Eigen::VectorXcd b(m);
  for (size_t i = 0; i < m; ++i) {
    const cplx x = (js[i] - center) / width;
    cplx p(1);
    for (long long d = 0; d <= D; ++d) {
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = p;
      p *= x;
    }
    b(static_cast<Eigen::Index>(i)) = Fs[i];
  }
  const auto qr = A.colPivHouseholderQr();
  if (qr.rank() < D + 1)
    throw error("ell_degree_fit: rank-deficient fit; spread the tau samples");
  const Eigen::VectorXcd coef = qr.solve(b);
  const double resid = (A * coef - b).norm() / b.norm();

  double cmax = 0;
  for (long long d = 0; d <= D; ++d) cmax = std::max(cmax, std::abs(coef(d)));
  int eff = 0;
  for (long long d = 0; d <= D; ++d)
    if (std::abs(coef(d)) > 1e-6 * cmax) eff = static_cast<int>(d);

  EllDegreeFit out;
  out.n = n;
  out.N = N;
  out.degree = eff / 2;
  out.fit_residual = resid;
  out.k_power = k;
  out.effective_degree = eff;
  return out;
}

}  // namespace zrs
