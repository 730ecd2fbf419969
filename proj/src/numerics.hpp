#ifndef QTB_NUMERICS_HPP
#define QTB_NUMERICS_HPP

#include <functional>
#include <optional>

#include "common.hpp"

namespace qtb {

// Adaptive Gauss-Kronrod on [a, b]; integrand may be complex.
cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-10);

// tanh-sinh quadrature on [a, b]; tolerant of integrable endpoint singularities.
cplx integrate_ts(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-10);

// \int_a^b t^p f(t) dt for p > -1, a >= 0; the t^p weight is absorbed by substitution
// t = v^{1/(1+p)} so the integrand handed to the quadrature is bounded.
cplx integrate_power_weight(const std::function<cplx(double)>& f, double p, double a, double b, double tol = 1e-10);

// Least squares via modified Gram-Schmidt QR. Columns of `cols` are the design;
// returns coefficients, RMS residual and a condition estimate of the design.
struct LsqFit {
  std::vector<double> coef;
  double rms = 0.0;
  double cond = 0.0;
};
LsqFit lsq(const std::vector<std::vector<double>>& cols, const std::vector<double>& rhs);

// Complex right-hand side against a real design.
struct LsqFitC {
  CVec coef;
  double rms = 0.0;
  double cond = 0.0;
};
LsqFitC lsq_complex(const std::vector<std::vector<double>>& cols, const CVec& rhs);

// Finite-difference weights for the m-th derivative on the symmetric stencil
// {-r, ..., r} * h (Fornberg). Returned weights already include the 1/h^m factor
// when h is supplied to fd_derivative.
std::vector<double> fd_stencil_offsets(int m);
std::vector<double> fd_stencil_weights(int m, const std::vector<double>& offsets);

// Richardson/Neville extrapolation of D(h) over the descending step ladder
// (Ridders); returns the tableau entry with the smallest mutual disagreement,
// which err receives. Robust both for smooth data (large steps win) and for
// data that is flat at 0 in double precision (small steps win exactly).
cplx fd_ladder_extrapolate(const std::function<cplx(double)>& eval_at_step, double* err);

// m-th derivative of g at 0 by central differences over the step ladder.
cplx fd_derivative(const std::function<cplx(double)>& g, int m, double* err);

// Uniform-grid Catmull-Rom interpolation. x0 is the coordinate of sample 0.
cplx interp_cubic(const std::vector<cplx>& samples, double x0, double dx, double x);
cplx interp_linear(const std::vector<cplx>& samples, double x0, double dx, double x);

// Exponential integral E1(z) for complex z with |arg z| < pi.
cplx expint_e1(cplx z);

// Slope of a least-squares line through (x_i, y_i).
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qtb

#endif
