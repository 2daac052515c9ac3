#pragma once

// Exact counting layer for the level-N torsion products M_{n,N}.
//
// Everything here is integer or rational arithmetic: Euler's phi, the index
// Psi(N) = N^2 prod_{p|N} (1 - 1/p^2) (the number of (k1/N, k2/N) with
// gcd(k1,k2,N) = 1), the cusp-order exponents (a_n, b_n), the predicted total
// vanishing order at infinity v_inf = a_n phi(N) + b_n phi(N/2), and the zero
// counts L_n(N) (degree of the square-root polynomial in j) and PL_n(N).
// L and PL are computed as rationals and asserted to land on nonnegative
// integers; a miss is an internal inconsistency, not a domain error.

#include <boost/rational.hpp>

#include <numeric>
#include <stdexcept>
#include <string>

namespace zrs {

using rat64 = boost::rational<long long>;

inline long long euler_phi(long long N) {
  if (N < 1) throw std::invalid_argument("euler_phi requires N >= 1");
  long long result = N, m = N;
  for (long long p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    result -= result / p;
    while (m % p == 0) m /= p;
  }
  if (m > 1) result -= result / m;
  return result;
}

// phi(N/2) under the convention phi(x) = 0 when x is not a positive integer.
inline long long euler_phi_half(long long N) {
  return N % 2 == 0 ? euler_phi(N / 2) : 0;
}

inline long long psi_index(long long N) {
  if (N < 1) throw std::invalid_argument("psi_index requires N >= 1");
  long long result = N * N, m = N;
  for (long long p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    result = result / (p * p) * (p * p - 1);
    while (m % p == 0) m /= p;
  }
  if (m > 1) result = result / (m * m) * (m * m - 1);
  return result;
}

struct Totients {
  long long phi = 0;
  long long psi = 0;
};

inline Totients totients(long long N) { return Totients{euler_phi(N), psi_index(N)}; }

struct AbPair {
  long long a = 0;
  long long b = 0;
};

// a_{2m} = a_{2m+1} = m(m+1)/2 and b_{2m} = b_{2m-1} = m^2.
// n = 0 gives (0, 0), matching the constant level-zero form.
inline AbPair ab_coeffs(int n) {
  if (n < 0) throw std::invalid_argument("ab_coeffs requires n >= 0");
  const long long ma = n / 2;
  const long long mb = (n + 1) / 2;
  return AbPair{ma * (ma + 1) / 2, mb * mb};
}

// The correction epsilon_n(N) is 1 exactly at level 3 with n = 1 mod 3.
inline int eps_n(int n, long long N) {
  return (N == 3 && n % 3 == 1) ? 1 : 0;
}

inline long long vinf_pred(int n, long long N) {
  if (N < 3) throw std::invalid_argument("vinf_pred requires N >= 3");
  const AbPair ab = ab_coeffs(n);
  return ab.a * euler_phi(N) + ab.b * euler_phi_half(N);
}

namespace detail {

inline long long rational_to_integer(const rat64& v, const std::string& what) {
  if (v.denominator() != 1)
    throw std::logic_error(what + " failed to land on an integer: " +
                           std::to_string(v.numerator()) + "/" +
                           std::to_string(v.denominator()));
  return v.numerator();
}

}  // namespace detail

// PL_n(N) = (n(n+1)/12)(Psi(N) - 3 phi(N)) + (2/3) eps_n(N), and 0 at N = 1, 2.
inline long long count_PL(int n, long long N) {
  if (n < 1 || N < 1) throw std::invalid_argument("count_PL requires n >= 1 and N >= 1");
  if (N <= 2) return 0;
  const rat64 value = rat64(static_cast<long long>(n) * (n + 1), 12) *
                          rat64(psi_index(N) - 3 * euler_phi(N)) +
                      rat64(2, 3) * rat64(eps_n(n, N));
  const long long result = detail::rational_to_integer(value, "PL");
  if (result < 0) throw std::logic_error("PL came out negative");
  return result;
}

struct CountReport {
  int n = 0;
  long long N = 0;
  long long phi_N = 0;
  long long phi_halfN = 0;
  long long psi_N = 0;
  int eps = 0;
  long long a_n = 0;
  long long b_n = 0;
  rat64 L{0};
  rat64 PL{0};
  long long v_inf_pred = 0;
  rat64 k_nN{0};  // Delta-power n(n+1) Psi(N) / 24
  long long ell_degree_pred = 0;
};

// L_n(N) = (1/2)(n(n+1) Psi(N)/24 - (a_n phi(N) + b_n phi(N/2))) + (2/3) eps_n(N).
inline CountReport count_L(int n, long long N) {
  if (n < 1 || N < 3) throw std::invalid_argument("count_L requires n >= 1 and N >= 3");
  CountReport r;
  r.n = n;
  r.N = N;
  r.phi_N = euler_phi(N);
  r.phi_halfN = euler_phi_half(N);
  r.psi_N = psi_index(N);
  r.eps = eps_n(n, N);
  const AbPair ab = ab_coeffs(n);
  r.a_n = ab.a;
  r.b_n = ab.b;
  r.k_nN = rat64(static_cast<long long>(n) * (n + 1) * r.psi_N, 24);
  r.v_inf_pred = r.a_n * r.phi_N + r.b_n * r.phi_halfN;
  r.L = rat64(1, 2) * (r.k_nN - rat64(r.v_inf_pred)) + rat64(2, 3) * rat64(r.eps);
  r.PL = rat64(count_PL(n, N));
  r.ell_degree_pred = detail::rational_to_integer(r.L, "L");
  if (r.ell_degree_pred < 0) throw std::logic_error("L came out negative");
  return r;
}

}  // namespace zrs
