// Independent oracles for the test suites. Everything here must stay off the
// implementation paths it checks: plain quadrature, special functions, and
// closed forms only.
#ifndef QTB_TEST_ORACLES_HPP
#define QTB_TEST_ORACLES_HPP

#include <cmath>
#include <complex>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

namespace oracle {

using cplx = std::complex<double>;

inline double gauss_kronrod(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol);
}

inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b, tol);
}

inline double gaussian_pdf(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); }
inline double gaussian_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

// E|Z|^a for a standard Gaussian by endpoint-singular quadrature.
inline double abs_moment_gaussian(double a) {
  return 2.0 * tanh_sinh([&](double t) { return std::pow(t, a) * gaussian_pdf(t); }, 0.0, 40.0);
}

// int_0^inf r^{-1} e^{-s r - s/r} dr = 2 K_0(2 s) for s > 0.
inline double bessel_k0_identity(double s) { return 2.0 * boost::math::cyl_bessel_k(0, 2.0 * s); }

// heat kernel on R: solution of u_t = u_xx with delta data.
inline double heat_kernel(double x, double t) { return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * M_PI * t); }
inline double heat_heaviside(double x, double t) { return 0.5 * (1.0 + std::erf(x / (2.0 * std::sqrt(t)))); }

// 4-point Abel sum of sum c_n e^{-eps n} with exact epsilon damping.
inline double alt_harmonic_abel(double eps) { return std::log1p(std::exp(-eps)); }

constexpr double kLn2 = 0.6931471805599453;
constexpr double kPiSqOver6 = 1.6449340668482264;

// Fourier transform of |t|^a at u (regularized), oscillatory-quadrature route:
// lim_{d->0+} int |t|^a e^{-d|t|} e^{-iut} dt via exponential damping and
// Richardson extrapolation in d.
inline double abs_power_ft(double a, double u) {
  auto damped = [&](double d) {
    // 2 int_0^inf t^a e^{-d t} cos(ut) dt; split the singular head from the
    // oscillatory tail
    auto f = [&](double t) { return std::pow(t, a) * std::exp(-d * t) * std::cos(u * t); };
    return 2.0 * (tanh_sinh(f, 0.0, 1.0) + gauss_kronrod(f, 1.0, 50.0 / d + 50.0, 1e-12));
  };
  // geometric damping ladder with Richardson in d (value is smooth in d)
  const double f1 = damped(0.2), f2 = damped(0.1), f3 = damped(0.05);
  const double r2 = f2 + (f2 - f1);
  const double r3 = f3 + (f3 - f2);
  return r3 + (r3 - r2) / 1.0;
}

}  // namespace oracle

#endif
