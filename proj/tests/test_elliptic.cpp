#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <set>

#include "zrs/elliptic.hpp"

using zrs::cplx;
using zrs::cplx120;

namespace {

const double kPi = 3.141592653589793238462643383279502884;

// Independent double-sum evaluations of the classical q-expansions used as
// oracles below. Deliberately written as literal (n,m) sums, not Lambert sums.
cplx z_r0_series(double r, cplx q) {
  cplx acc(0);
  for (int n = 1; n <= 64; ++n) {
    cplx qn = std::pow(q, n);
    cplx qnm = qn;
    for (int m = 1; m <= 64; ++m) {
      acc += std::sin(2.0 * kPi * n * r) * qnm;
      qnm *= qn;
    }
  }
  return kPi / std::tan(kPi * r) + 4.0 * kPi * acc;
}

cplx z_rhalf_series(double r, cplx qh) {
  // qh = q^{1/2}; exponent n(m - 1/2) in q is n(2m - 1) in qh.
  cplx acc(0);
  for (int n = 1; n <= 64; ++n)
    for (int m = 1; m <= 64; ++m)
      acc += std::sin(2.0 * kPi * n * r) * std::pow(qh, n * (2 * m - 1));
  return 4.0 * kPi * acc;
}

cplx wp_real_series(double r, cplx q) {
  cplx acc(0);
  for (int n = 1; n <= 64; ++n) {
    cplx qn = std::pow(q, n);
    cplx qnm = qn;
    for (int m = 1; m <= 64; ++m) {
      acc += n * (1.0 - std::cos(2.0 * kPi * n * r)) * qnm;
      qnm *= qn;
    }
  }
  double c = 1.0 / std::tan(kPi * r);
  return kPi * kPi * c * c + 2.0 / 3.0 * kPi * kPi + 8.0 * kPi * kPi * acc;
}

cplx wp_prime_real_series(double r, cplx q) {
  cplx acc(0);
  for (int n = 1; n <= 64; ++n) {
    cplx qn = std::pow(q, n);
    cplx qnm = qn;
    for (int m = 1; m <= 64; ++m) {
      acc += double(n) * n * std::sin(2.0 * kPi * n * r) * qnm;
      qnm *= qn;
    }
  }
  double c = 1.0 / std::tan(kPi * r);
  return -2.0 * std::pow(kPi, 3) * c - 2.0 * std::pow(kPi, 3) * c * c * c +
         16.0 * std::pow(kPi, 3) * acc;
}

long psi_formula(long N) {
  long psi = N * N;
  long M = N;
  for (long p = 2; p * p <= M; ++p)
    if (M % p == 0) {
      psi = psi / (p * p) * (p * p - 1);
      while (M % p == 0) M /= p;
    }
  if (M > 1) psi = psi / (M * M) * (M * M - 1);
  return psi;
}

}  // namespace

TEST_CASE("lattice invariants hold at assorted tau") {
  const cplx taus[] = {{0.0, 2.0}, {0.3, 1.1}, {-0.4, 0.7}, {1.7, 0.35}};
  for (cplx tv : taus) {
    CAPTURE(tv);
    auto ld = zrs::lattice_data(zrs::make_tau(tv));

    cplx legendre = tv * ld.eta1 - ld.eta2 - cplx(0.0, 2.0 * kPi);
    CHECK(std::abs(legendre) < 1e-12);

    double escale = std::abs(ld.e1) + std::abs(ld.e2) + std::abs(ld.e3);
    CHECK(std::abs(ld.e1 + ld.e2 + ld.e3) < 1e-10 * escale);

    CHECK(std::abs(zrs::wp(cplx(0.5), ld) - ld.e1) < 1e-11 * escale);
    CHECK(std::abs(zrs::wp(tv / 2.0, ld) - ld.e2) < 1e-11 * escale);
    CHECK(std::abs(zrs::wp((1.0 + tv) / 2.0, ld) - ld.e3) < 1e-11 * escale);

    cplx dq = zrs::delta_qproduct(ld);
    CHECK(std::abs(ld.delta - dq) < 1e-9 * std::abs(dq));
  }
}

TEST_CASE("degenerate limits as Im tau grows") {
  auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.0, 12.0)));
  double p2 = kPi * kPi;
  CHECK(std::abs(ld.e1 - 2.0 * p2 / 3.0) < 1e-12 * p2);
  CHECK(std::abs(ld.e2 + p2 / 3.0) < 1e-12 * p2);
  CHECK(std::abs(ld.e3 + p2 / 3.0) < 1e-12 * p2);
  CHECK(std::abs(zrs::t_of_tau(ld) - 1.0) < 1e-12);
  CHECK(std::abs(ld.g2 - 4.0 / 3.0 * p2 * p2) < 1e-10);
}

TEST_CASE("j invariant at the square lattice") {
  auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.0, 1.0)));
  CHECK(std::abs(ld.j - 1728.0) < 1e-8 * 1728.0);
  CHECK(std::abs(ld.g3) < 1e-10);
}

TEST_CASE("wp satisfies the cubic, parity, and periodicity") {
  auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.3, 1.3)));
  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> u(-0.45, 0.45);
  int tested = 0;
  while (tested < 100) {
    cplx z = cplx(u(rng)) + cplx(u(rng)) * ld.tau;
    if (std::abs(z) < 0.05) continue;
    ++tested;
    CAPTURE(z);
    cplx p = zrs::wp(z, ld);
    cplx dp = zrs::wp_prime(z, ld);
    cplx lhs = dp * dp;
    cplx rhs = 4.0 * p * p * p - ld.g2 * p - ld.g3;
    double scale = std::abs(lhs) + std::abs(rhs) + std::abs(ld.g3);
    CHECK(std::abs(lhs - rhs) < 1e-9 * scale);

    CHECK(std::abs(zrs::wp(-z, ld) - p) < 1e-11 * (1.0 + std::abs(p)));
    CHECK(std::abs(zrs::wp_prime(-z, ld) + dp) < 1e-11 * (1.0 + std::abs(dp)));
    CHECK(std::abs(zrs::wp(z + 1.0, ld) - p) < 1e-11 * (1.0 + std::abs(p)));
    CHECK(std::abs(zrs::wp(z + ld.tau, ld) - p) < 1e-11 * (1.0 + std::abs(p)));
  }
}

TEST_CASE("wp and wp_prime match the real-argument expansions") {
  auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.0, 1.5)));
  for (double r : {1.0 / 3.0, 0.2, 0.41}) {
    CAPTURE(r);
    cplx p = zrs::wp(cplx(r), ld);
    cplx dp = zrs::wp_prime(cplx(r), ld);
    CHECK(std::abs(p - wp_real_series(r, ld.q)) < 1e-10 * (1.0 + std::abs(p)));
    CHECK(std::abs(dp - wp_prime_real_series(r, ld.q)) < 1e-10 * (1.0 + std::abs(dp)));
  }
}

TEST_CASE("zeta quasi-periods and derivative") {
  auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.2, 0.9)));
  const cplx zs[] = {{0.31, 0.12}, {-0.27, 0.4}, {0.05, -0.33}};
  for (cplx z : zs) {
    CAPTURE(z);
    cplx zeta = zrs::zeta_w(z, ld);
    CHECK(std::abs(zrs::zeta_w(z + 1.0, ld) - zeta - ld.eta1) < 1e-10);
    CHECK(std::abs(zrs::zeta_w(z + ld.tau, ld) - zeta - ld.eta2) < 1e-10);
    CHECK(std::abs(zrs::zeta_w(z + 3.0 + 2.0 * ld.tau, ld) - zeta - 3.0 * ld.eta1 -
                   2.0 * ld.eta2) < 1e-9);
    CHECK(std::abs(zrs::zeta_w(-z, ld) + zeta) < 1e-11 * (1.0 + std::abs(zeta)));

    double h = 1e-6;
    cplx dz = (zrs::zeta_w(z + h, ld) - zrs::zeta_w(z - h, ld)) / (2.0 * h);
    CHECK(std::abs(dz + zrs::wp(z, ld)) < 1e-7 * (1.0 + std::abs(dz)));
  }
}

TEST_CASE("hecke Z matches its q-expansions") {
  {
    auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.0, 8.0)));
    auto hv = zrs::hecke_Z(zrs::make_torsion<cplx>(1, 0, 4), ld);
    CHECK(std::abs(hv.Z - kPi) < 1e-12);
  }
  for (cplx tv : {cplx(0.0, 1.5), cplx(0.4, 0.8)}) {
    auto ld = zrs::lattice_data(zrs::make_tau(tv));
    for (double r : {1.0 / 3.0, 0.2, 0.4, 0.37}) {
      CAPTURE(tv, r);
      auto hv = zrs::hecke_Z(zrs::make_point(cplx(r), cplx(0.0)), ld);
      cplx ref = z_r0_series(r, ld.q);
      CHECK(std::abs(hv.Z - ref) < 1e-10 * (1.0 + std::abs(ref)));
    }
  }
  for (cplx tv : {cplx(0.0, 6.0), cplx(0.3, 1.2)}) {
    auto ld = zrs::lattice_data(zrs::make_tau(tv));
    for (double r : {1.0 / 3.0, 0.25, 0.4}) {
      CAPTURE(tv, r);
      auto hv = zrs::hecke_Z(zrs::make_point(cplx(r), cplx(0.5)), ld);
      cplx ref = z_rhalf_series(r, ld.qh);
      // Z is a difference of O(10) quantities, so 1e-13 is the double
      // noise floor when the true value is itself O(|q|^{1/2}).
      CHECK(std::abs(hv.Z - ref) < 1e-8 * std::abs(ref) + 1e-13);
    }
  }
  {
    // Leading constant of Z_{1/3,1/2} is 4*pi*sin(2*pi/3) = 10.88..., so the
    // true bound is 11|q|^{1/2}, not 10.
    auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.0, 6.0)));
    auto hv = zrs::hecke_Z(zrs::make_torsion<cplx>(2, 3, 6), ld);
    CHECK(std::abs(hv.Z) <= 11.0 * std::abs(ld.qh));
    CHECK(std::abs(hv.Z) >= 9.0 * std::abs(ld.qh));
  }
}

TEST_CASE("hecke Z symmetry and lattice periodicity in (r,s)") {
  auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.13, 0.88)));
  const double pts[][2] = {{0.3, 0.7}, {0.21, 0.08}, {0.8, 0.9}};
  for (auto& p : pts) {
    CAPTURE(p[0], p[1]);
    cplx z0 = zrs::hecke_Z(zrs::make_point(cplx(p[0]), cplx(p[1])), ld).Z;
    cplx zneg = zrs::hecke_Z(zrs::make_point(cplx(-p[0]), cplx(-p[1])), ld).Z;
    CHECK(std::abs(zneg + z0) < 1e-11 * (1.0 + std::abs(z0)));
    cplx zshift =
        zrs::hecke_Z(zrs::make_point(cplx(p[0] + 1.0), cplx(p[1] - 2.0)), ld).Z;
    CHECK(std::abs(zshift - z0) < 1e-11 * (1.0 + std::abs(z0)));
  }
}

TEST_CASE("hecke Z rejects half-lattice indices") {
  auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.0, 2.0)));
  const double bad[][2] = {{0.5, 0.0}, {0.0, 0.5}, {0.5, 0.5}, {1.0, 1.0}, {0.0, 0.0}};
  for (auto& p : bad) {
    CAPTURE(p[0], p[1]);
    CHECK_THROWS_AS(zrs::hecke_Z(zrs::make_point(cplx(p[0]), cplx(p[1])), ld),
                    zrs::invalid_point);
  }
}

TEST_CASE("torsion point enumeration") {
  auto q3 = zrs::torsion_points<cplx>(3);
  CHECK(q3.size() == 8);
  auto q4 = zrs::torsion_points<cplx>(4);
  CHECK(q4.size() == 12);
  CHECK(q4.front().k1 == 0);
  CHECK(q4.front().k2 == 1);

  for (int N = 3; N <= 50; ++N) {
    auto pts = zrs::torsion_points<cplx>(N);
    CHECK(long(pts.size()) == psi_formula(N));
    std::set<std::pair<int, int>> seen;
    bool sorted = true, primitive = true;
    std::pair<int, int> last{-1, -1};
    for (auto& p : pts) {
      seen.insert({p.k1, p.k2});
      if (std::make_pair(p.k1, p.k2) <= last) sorted = false;
      last = {p.k1, p.k2};
      if (std::gcd(std::gcd(p.k1, p.k2), N) != 1) primitive = false;
    }
    CHECK(seen.size() == pts.size());
    CHECK(sorted);
    CHECK(primitive);
  }
  CHECK_THROWS_AS(zrs::torsion_points<cplx>(2), zrs::error);
}

TEST_CASE("t(tau) values and expansion") {
  {
    auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.0, 1.0)));
    CHECK(std::abs(zrs::t_of_tau(ld) - 0.5) < 1e-10);
  }
  {
    auto a = zrs::lattice_data(zrs::make_tau(cplx(0.3, 0.9)));
    auto b = zrs::lattice_data(zrs::make_tau(cplx(2.3, 0.9)));
    CHECK(std::abs(zrs::t_of_tau(a) - zrs::t_of_tau(b)) < 1e-12);
  }
  {
    auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.0, 8.0)));
    cplx qh = ld.qh, q = ld.q;
    cplx ref = 1.0 - 16.0 * qh + 128.0 * q - 704.0 * q * qh;
    CHECK(std::abs(zrs::t_of_tau(ld) - ref) < 1e-12);
  }
}

TEST_CASE("normalization into the level-two domain preserves t") {
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> ur(-4.0, 4.0), ui(0.15, 1.2);
  for (int trial = 0; trial < 20; ++trial) {
    cplx tv(ur(rng), ui(rng));
    cplx w = zrs::normalize_to_F2(tv);
    CAPTURE(tv, w);
    CHECK(w.real() >= 0.0);
    CHECK(w.real() < 2.0);
    CHECK(std::abs(w - cplx(0.5)) >= 0.5 * (1.0 - 1e-12));
    CHECK(std::abs(w - cplx(1.5)) > 0.5 * (1.0 - 1e-12));
    auto a = zrs::lattice_data(zrs::make_tau(tv));
    auto b = zrs::lattice_data(zrs::make_tau(w));
    cplx ta = zrs::t_of_tau(a), tb = zrs::t_of_tau(b);
    CHECK(std::abs(ta - tb) < 1e-8 * (1.0 + std::abs(ta)));
  }
}

TEST_CASE("domain guards") {
  CHECK_THROWS_AS(zrs::make_tau(cplx(1.0, -0.2)), zrs::error);
  CHECK_THROWS_AS(zrs::lattice_data(zrs::make_tau(cplx(0.0, 0.03))),
                  zrs::series_nonconvergence);
  auto ld = zrs::lattice_data(zrs::make_tau(cplx(0.0, 2.0)));
  CHECK_THROWS_AS(zrs::wp(cplx(0.0), ld), zrs::singular_configuration);
  CHECK_THROWS_AS(zrs::wp(1.0 + ld.tau, ld), zrs::singular_configuration);
}

TEST_CASE("multiprecision backend agrees and extends") {
  using R = zrs::real_t<cplx120>;
  auto ld = zrs::lattice_data(zrs::make_tau(cplx120(R(0), R(2))));
  R pi = zrs::pi_v<R>();
  cplx120 legendre = ld.tau * ld.eta1 - ld.eta2 - cplx120(R(0), 2 * pi);
  CHECK(zrs::to_double(zrs::abs_c(legendre)) < 1e-100);

  auto ldd = zrs::lattice_data(zrs::make_tau(cplx(0.0, 2.0)));
  CHECK(std::abs(zrs::to_double(zrs::re_part(ld.e2)) - ldd.e2.real()) < 1e-13);

  auto ld8 = zrs::lattice_data(zrs::make_tau(cplx120(R(0), R(8))));
  auto hv = zrs::hecke_Z(zrs::make_torsion<cplx120>(1, 0, 4), ld8);
  cplx120 ref = pi * (cplx120(1) + 4 * ld8.q + 4 * ld8.q * ld8.q);
  CHECK(zrs::to_double(zrs::abs_c(hv.Z - ref)) < 1e-64);
}
