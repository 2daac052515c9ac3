#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "zrs/premodular.hpp"

using zrs::cplx;
using zrs::make_point;
using zrs::make_tau;
using zrs::make_torsion;
using zrs::m_product;
using zrs::modular_check;
using zrs::sign_reduce;
using zrs::UnimodularMatrix;
using zrs::z_n;
using zrs::z_n_closed;

namespace {

double rel_gap(cplx a, cplx b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0 ? std::abs(a - b) / scale : 0.0;
}

// Random sample away from the half-lattice, where Z_{r,s} degenerates.
struct Sampler {
  std::mt19937 rng{20240615};
  std::uniform_real_distribution<double> coord{0.05, 0.95};
  std::uniform_real_distribution<double> re{-0.45, 0.45};
  std::uniform_real_distribution<double> im{0.5, 3.0};

  std::pair<zrs::TorsionPoint<cplx>, zrs::Tau<cplx>> next() {
    for (;;) {
      const double r = coord(rng), s = coord(rng);
      const bool half_r = std::abs(r - 0.5) < 0.02;
      const bool half_s = std::abs(s - 0.5) < 0.02;
      if (half_r && half_s) continue;
      return {make_point(cplx(r), cplx(s)), make_tau(cplx(re(rng), im(rng)))};
    }
  }
};

}  // namespace

TEST_CASE("value chain matches the printed forms") {
  // Tightest published thresholds: exact at n=1, 1e-9 at n=2, 1e-8 at n=3,
  // 1e-7 at n=4; the chain actually lands orders of magnitude inside them.
  Sampler gen;
  double worst[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < 200; ++i) {
    const auto [pt, tau] = gen.next();
    const auto ld = zrs::lattice_data(tau);
    const auto hv = zrs::hecke_Z(pt, ld);
    REQUIRE(z_n(1, pt, tau).value == hv.Z);
    for (int n = 2; n <= 4; ++n)
      worst[n] = std::max(worst[n],
                          rel_gap(z_n(n, pt, tau).value, z_n_closed(n, pt, tau).value));
  }
  REQUIRE(worst[2] < 1e-9);
  REQUIRE(worst[3] < 1e-8);
  REQUIRE(worst[4] < 1e-7);
}

TEST_CASE("printed-form spot checks") {
  {
    const auto pt = make_point(cplx(1.0 / 3), cplx(0.0));
    const auto tau = make_tau(cplx(0.0, 2.0));
    REQUIRE(rel_gap(z_n(2, pt, tau).value, z_n_closed(2, pt, tau).value) < 1e-9);
  }
  {
    const auto pt = make_point(cplx(0.2), cplx(0.2));
    const auto tau = make_tau(cplx(1.0, 3.0));
    REQUIRE(rel_gap(z_n(4, pt, tau).value, z_n_closed(4, pt, tau).value) < 1e-7);
  }
  REQUIRE_THROWS_AS(z_n_closed(5, make_point(cplx(0.3), cplx(0.0)),
                               make_tau(cplx(0.0, 1.0))),
                    std::domain_error);
}

TEST_CASE("weight bookkeeping and trivial levels") {
  const auto pt = make_point(cplx(0.3), cplx(0.1));
  const auto tau = make_tau(cplx(0.1, 1.1));
  for (int n = 1; n <= 6; ++n) REQUIRE(z_n(n, pt, tau).weight == n * (n + 1) / 2);
  REQUIRE(z_n(0, pt, tau).value == cplx(1));
  REQUIRE(z_n(-1, pt, tau).value == cplx(1));
  REQUIRE(z_n(0, pt, tau).weight == 0);
  REQUIRE_THROWS_AS(z_n(1, make_point(cplx(0.5), cplx(0.5)), tau), zrs::invalid_point);
}

TEST_CASE("level product bookkeeping") {
  const auto tau = make_tau(cplx(0.3, 1.2));
  for (int N = 3; N <= 8; ++N)
    REQUIRE(m_product(1, N, tau).factor_count == zrs::psi_index(N));

  // Small enough case to cross-check the log form against the raw product.
  const auto mv = m_product(2, 3, tau);
  cplx raw(1);
  for (const auto& pt : zrs::torsion_points<cplx>(3)) raw *= z_n(2, pt, tau).value;
  REQUIRE(rel_gap(mv.value, raw) < 1e-12);
  REQUIRE(std::abs(std::abs(mv.phase) - 1.0) < 1e-12);
}

TEST_CASE("level product symmetries") {
  // Q(N) is stable under (k1,k2) -> (-k1,k2), which conjugates every factor
  // when tau is reflected across the imaginary axis.
  for (int N : {3, 4, 5}) {
    for (int n : {1, 2, 3}) {
      const auto m1 = m_product(n, N, make_tau(cplx(0.3, 1.2)));
      const auto m2 = m_product(n, N, make_tau(cplx(-0.3, 1.2)));
      REQUIRE(std::abs(m1.log_abs - m2.log_abs) < 1e-10 * std::abs(m1.log_abs));
      REQUIRE(std::abs(m1.phase - std::conj(m2.phase)) < 1e-10);
    }
  }

  // tau -> tau + 1 permutes the factors, so |M| is unchanged.
  for (int N : {3, 4, 5}) {
    const auto m1 = m_product(1, N, make_tau(cplx(0.0, 1.0)));
    const auto m2 = m_product(1, N, make_tau(cplx(1.0, 1.0)));
    REQUIRE(std::abs(m1.log_abs - m2.log_abs) < 1e-6 * std::abs(m1.log_abs));
  }
}

TEST_CASE("reflection sign law") {
  // Representative with Re s <= 1/2 is kept as is.
  const auto kept = sign_reduce(make_point(cplx(0.8), cplx(0.3)), 2);
  REQUIRE(kept.sign == 1);
  REQUIRE(std::abs(kept.point.r - cplx(0.8)) < 1e-15);
  REQUIRE(std::abs(kept.point.s - cplx(0.3)) < 1e-15);

  // Reflected representative flips the sign only at odd weight.
  const auto odd = sign_reduce(make_point(cplx(0.8), cplx(0.9)), 1);
  REQUIRE(odd.sign == -1);
  REQUIRE(std::abs(odd.point.r - cplx(0.2)) < 1e-15);
  REQUIRE(std::abs(odd.point.s - cplx(0.1)) < 1e-15);
  REQUIRE(sign_reduce(make_point(cplx(0.8), cplx(0.9)), 3).sign == 1);
  REQUIRE(sign_reduce(make_point(cplx(0.8), cplx(0.9)), 4).sign == 1);
  REQUIRE(sign_reduce(make_point(cplx(0.8), cplx(0.9)), 2).sign == -1);

  // Exact indices follow the reflection.
  const auto exact = sign_reduce(make_torsion<cplx>(4, 3, 5), 1);
  REQUIRE(exact.point.k1 == 1);
  REQUIRE(exact.point.k2 == 2);
  REQUIRE(exact.point.exact_order == 5);

  // The reduced point reproduces the original value up to the sign.
  const auto tau = make_tau(cplx(0.2, 1.3));
  for (int n = 1; n <= 3; ++n) {
    for (double r : {0.15, 0.7}) {
      const auto pt = make_point(cplx(r), cplx(0.85));
      const auto red = sign_reduce(pt, n);
      const cplx lhs = z_n(n, pt, tau).value;
      const cplx rhs = cplx(double(red.sign)) * z_n(n, red.point, tau).value;
      REQUIRE(rel_gap(lhs, rhs) < 1e-10);
    }
  }
}

TEST_CASE("modular transformation residuals") {
  REQUIRE(modular_check(2, make_point(cplx(0.3), cplx(0.1)),
                        make_tau(cplx(0.1, 1.4)), UnimodularMatrix{}) == 0.0);
  REQUIRE(modular_check(2, make_point(cplx(0.2), cplx(0.0)),
                        make_tau(cplx(0.0, 3.0)), UnimodularMatrix{1, 1, 0, 1}) < 1e-8);
  REQUIRE(modular_check(1, make_point(cplx(0.25), cplx(0.0)),
                        make_tau(cplx(0.0, 2.0)), UnimodularMatrix{0, -1, 1, 0}) < 1e-8);
  REQUIRE_THROWS_AS(modular_check(1, make_point(cplx(0.25), cplx(0.0)),
                                  make_tau(cplx(0.0, 2.0)), UnimodularMatrix{2, 0, 0, 1}),
                    std::invalid_argument);

  // Random words of length <= 3 in S and T^{+-1}.
  std::mt19937 rng(777);
  double worst = 0;
  int tried = 0;
  const int gens[3][4] = {{0, -1, 1, 0}, {1, 1, 0, 1}, {1, -1, 0, 1}};
  while (tried < 50) {
    int a = 1, b = 0, c = 0, d = 1;
    const int len = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < len; ++k) {
      const int* g = gens[rng() % 3];
      const int na = g[0] * a + g[1] * c, nb = g[0] * b + g[1] * d;
      const int nc = g[2] * a + g[3] * c, nd = g[2] * b + g[3] * d;
      a = na, b = nb, c = nc, d = nd;
    }
    const int den = 3 + static_cast<int>(rng() % 5);
    const int k1 = 1 + static_cast<int>(rng() % (den - 1));
    const int k2 = static_cast<int>(rng() % den);
    if (std::gcd(std::gcd(k1, k2), den) != 1) continue;
    if (2 * k1 % den == 0 && 2 * k2 % den == 0) continue;
    const int n = 1 + static_cast<int>(rng() % 3);
    worst = std::max(worst, zrs::to_double(modular_check(
                                n, make_torsion<cplx>(k1, k2, den),
                                make_tau(cplx(0.2, 1.4)), UnimodularMatrix{a, b, c, d})));
    ++tried;
  }
  REQUIRE(worst < 1e-6);
}
