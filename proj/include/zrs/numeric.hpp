#pragma once

// Scalar backends and the shared error taxonomy.
//
// Every kernel is templated on the complex type C. Supported backends:
//   cplx      std::complex<double>            (default)
//   cplx_ext  std::complex<long double>       (extended)
//   cplx120   boost cpp_complex, 120 digits   (order fits, n <= 3)
//   cplx320   boost cpp_complex, 320 digits   (order fits, n <= 6)
// Real literals must be wrapped in real_t<C> before mixing with C; generic
// code never relies on implicit double promotion.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#define ZRS_VERSION "0.1.0"

namespace zrs {

using cplx     = std::complex<double>;
using cplx_ext = std::complex<long double>;
using cplx120  = boost::multiprecision::cpp_complex<120>;
using cplx320  = boost::multiprecision::cpp_complex<320>;

template <class C> using real_t = typename C::value_type;

template <class R> R pi_v() { return boost::math::constants::pi<R>(); }

template <class R> double to_double(const R& x) {
  if constexpr (std::is_arithmetic_v<R>) {
    return static_cast<double>(x);
  } else {
    return x.template convert_to<double>();
  }
}

template <class C> real_t<C> re_part(const C& z) {
  using std::real;
  return real_t<C>(real(z));
}
template <class C> real_t<C> im_part(const C& z) {
  using std::imag;
  return real_t<C>(imag(z));
}
template <class C> real_t<C> abs_c(const C& z) {
  using std::abs;
  return real_t<C>(abs(z));
}

template <class C> C cexp(const C& z)  { using std::exp;  return exp(z); }
template <class C> C clog(const C& z)  { using std::log;  return log(z); }
template <class C> C csqrt(const C& z) { using std::sqrt; return sqrt(z); }

// Integer power by squaring; exact branch behavior for all backends.
template <class C> C cpow_int(const C& z, long k) {
  if (k < 0) return C(1) / cpow_int(z, -k);
  C r(1);
  C b = z;
  unsigned long e = static_cast<unsigned long>(k);
  while (e) {
    if (e & 1ul) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

template <class R> R ldexp_r(const R& x, int e) {
  using std::ldexp;
  return ldexp(x, e);
}
template <class C> C ldexp_c(const C& z, int e) {
  if (e == 0) return z;
  return C(ldexp_r(re_part(z), e), ldexp_r(im_part(z), e));
}
template <class R> R floor_r(const R& x) {
  using std::floor;
  return floor(x);
}
template <class R> long lround_r(const R& x) {
  return std::lround(to_double(x));
}
template <class R> R log_r(const R& x) {
  using std::log;
  return log(x);
}
template <class R> R sqrt_r(const R& x) {
  using std::sqrt;
  return sqrt(x);
}

// Error taxonomy. Exit-code mapping (CLI): usage 2; numerical_breakdown and
// subclasses 3; every other kernel error 1.
struct error : std::runtime_error {
  explicit error(const std::string& m) : std::runtime_error(m) {}
};
struct invalid_point : error {
  explicit invalid_point(const std::string& m) : error(m) {}
};
struct singular_configuration : error {
  explicit singular_configuration(const std::string& m) : error(m) {}
};
struct singular_transformation : error {
  explicit singular_transformation(const std::string& m) : error(m) {}
};
struct suspected_multiple_zero : error {
  explicit suspected_multiple_zero(const std::string& m) : error(m) {}
};
struct fit_failure : error {
  explicit fit_failure(const std::string& m) : error(m) {}
};
struct numerical_breakdown : error {
  int level;
  explicit numerical_breakdown(const std::string& m, int lv = -1) : error(m), level(lv) {}
};
struct series_nonconvergence : numerical_breakdown {
  explicit series_nonconvergence(const std::string& m) : numerical_breakdown(m) {}
};
struct inconclusive_order : numerical_breakdown {
  explicit inconclusive_order(const std::string& m) : numerical_breakdown(m) {}
};

// Backend-scaled tolerances. The double values are the documented defaults;
// higher-precision backends tighten them proportionally to epsilon.
// The division gates are backend-independent: they bound what a *correct*
// exact-division identity may leave behind relative to problem scale, while
// reconstruction noise floors are modeled separately per node set (see
// stable_quotient). Sharpening them with eps would make wide backends reject
// their own information-theoretic interpolation floor.
template <class C> struct kernel_tol {
  using R = real_t<C>;
  static R eps() { return std::numeric_limits<R>::epsilon(); }
  static R series() { return R(1e3) * eps(); }
  static R div_rem() { return R(1e-8); }
  static R cross_check() { return R(1e-6); }
};

}  // namespace zrs
