#include "numerics.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace qtb {

cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b, double tol) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto re = [&](double t) { return f(t).real(); };
  auto im = [&](double t) { return f(t).imag(); };
  const double r = GK::integrate(re, a, b, 12, tol);
  const double i = GK::integrate(im, a, b, 12, tol);
  return {r, i};
}

cplx integrate_ts(const std::function<cplx(double)>& f, double a, double b, double tol) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto re = [&](double t) { return f(t).real(); };
  auto im = [&](double t) { return f(t).imag(); };
  const double r = ts.integrate(re, a, b, tol);
  const double i = ts.integrate(im, a, b, tol);
  return {r, i};
}

cplx integrate_power_weight(const std::function<cplx(double)>& f, double p, double a, double b, double tol) {
  if (p <= -1.0) fail(Err::NonIntegrable, "power weight exponent must exceed -1");
  if (b <= a) return {0.0, 0.0};
  const double q = 1.0 + p;
  // t = v^{1/q}, t^p dt = dv / q
  const double va = std::pow(a, q);
  const double vb = std::pow(b, q);
  auto g = [&](double v) { return f(std::pow(v, 1.0 / q)); };
  return (1.0 / q) * integrate_gk(g, va, vb, tol);
}

namespace {

// Modified Gram-Schmidt; returns Q columns, R upper-triangular.
struct Qr {
  std::vector<std::vector<double>> q;
  std::vector<std::vector<double>> r;
  double cond = 0.0;
};

Qr mgs(const std::vector<std::vector<double>>& cols) {
  const size_t k = cols.size();
  Qr out;
  out.q = cols;
  out.r.assign(k, std::vector<double>(k, 0.0));
  double rmax = 0.0, rmin = 1e300;
  for (size_t j = 0; j < k; ++j) {
    for (size_t i = 0; i < j; ++i) {
      double d = 0.0;
      for (size_t t = 0; t < out.q[j].size(); ++t) d += out.q[i][t] * out.q[j][t];
      out.r[i][j] = d;
      for (size_t t = 0; t < out.q[j].size(); ++t) out.q[j][t] -= d * out.q[i][t];
    }
    double nrm = 0.0;
    for (double v : out.q[j]) nrm += v * v;
    nrm = std::sqrt(nrm);
    out.r[j][j] = nrm;
    rmax = std::max(rmax, nrm);
    rmin = std::min(rmin, nrm);
    if (nrm > 0.0)
      for (double& v : out.q[j]) v /= nrm;
  }
  out.cond = rmin > 0.0 ? rmax / rmin : 1e300;
  return out;
}

std::vector<double> back_substitute(const Qr& qr, const std::vector<double>& qty) {
  const size_t k = qty.size();
  std::vector<double> x(k, 0.0);
  for (size_t jj = k; jj-- > 0;) {
    double s = qty[jj];
    for (size_t t = jj + 1; t < k; ++t) s -= qr.r[jj][t] * x[t];
    x[jj] = qr.r[jj][jj] > 0.0 ? s / qr.r[jj][jj] : 0.0;
  }
  return x;
}

}  // namespace

LsqFit lsq(const std::vector<std::vector<double>>& cols, const std::vector<double>& rhs) {
  const size_t k = cols.size();
  const size_t n = rhs.size();
  Qr qr = mgs(cols);
  std::vector<double> qty(k, 0.0);
  for (size_t j = 0; j < k; ++j)
    for (size_t t = 0; t < n; ++t) qty[j] += qr.q[j][t] * rhs[t];
  LsqFit fit;
  fit.coef = back_substitute(qr, qty);
  fit.cond = qr.cond;
  double ss = 0.0;
  for (size_t t = 0; t < n; ++t) {
    double pred = 0.0;
    for (size_t j = 0; j < k; ++j) pred += cols[j][t] * fit.coef[j];
    ss += (rhs[t] - pred) * (rhs[t] - pred);
  }
  fit.rms = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

LsqFitC lsq_complex(const std::vector<std::vector<double>>& cols, const CVec& rhs) {
  std::vector<double> re(rhs.size()), im(rhs.size());
  for (size_t i = 0; i < rhs.size(); ++i) {
    re[i] = rhs[i].real();
    im[i] = rhs[i].imag();
  }
  LsqFit fr = lsq(cols, re);
  LsqFit fi = lsq(cols, im);
  LsqFitC out;
  out.coef.resize(cols.size());
  for (size_t j = 0; j < cols.size(); ++j) out.coef[j] = cplx(fr.coef[j], fi.coef[j]);
  out.rms = std::hypot(fr.rms, fi.rms);
  out.cond = fr.cond;
  return out;
}

std::vector<double> fd_stencil_offsets(int m) {
  const int r = (m + 1) / 2;
  std::vector<double> off;
  for (int i = -r; i <= r; ++i) {
    if (m % 2 == 1 && i == 0) continue;  // odd orders use the symmetric stencil without 0
    off.push_back(static_cast<double>(i));
  }
  if (m % 2 == 0 && static_cast<int>(off.size()) < m + 1) {
    off.clear();
    for (int i = -m / 2; i <= m / 2; ++i) off.push_back(static_cast<double>(i));
  }
  return off;
}

// Fornberg weights for derivative order m at x = 0 given stencil offsets.
std::vector<double> fd_stencil_weights(int m, const std::vector<double>& off) {
  const int n = static_cast<int>(off.size()) - 1;
  // C[j][k]: weight of node j in the k-th derivative formula
  std::vector<std::vector<double>> C(off.size(), std::vector<double>(static_cast<size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = off[0];
  C[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = off[static_cast<size_t>(i)];
    for (int j = 0; j < i; ++j) {
      const double c3 = off[static_cast<size_t>(i)] - off[static_cast<size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          C[static_cast<size_t>(i)][static_cast<size_t>(k)] =
              c1 * (k * C[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)] -
                    c5 * C[static_cast<size_t>(i - 1)][static_cast<size_t>(k)]) /
              c2;
        C[static_cast<size_t>(i)][0] = -c1 * c5 * C[static_cast<size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        C[static_cast<size_t>(j)][static_cast<size_t>(k)] =
            (c4 * C[static_cast<size_t>(j)][static_cast<size_t>(k)] -
             k * C[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]) /
            c3;
      C[static_cast<size_t>(j)][0] = c4 * C[static_cast<size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(off.size());
  for (size_t j = 0; j < off.size(); ++j) w[j] = C[j][static_cast<size_t>(m)];
  return w;
}

cplx fd_ladder_extrapolate(const std::function<cplx(double)>& eval_at_step, double* err) {
  // Step ladder: large steps favour smooth data, small steps detect data that
  // is flat at 0 in double precision. Ratio-2 rungs feed a Neville tableau in
  // h^2 with per-entry disagreement tracking. Power-of-two steps keep node
  // coordinates and polynomial cancellations exact in floating point.
  static const double ladder[] = {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125};
  const int nl = static_cast<int>(sizeof(ladder) / sizeof(ladder[0]));
  std::vector<std::vector<cplx>> t(static_cast<size_t>(nl));
  cplx best{0.0, 0.0};
  double best_err = 1e300;
  for (int i = 0; i < nl; ++i) {
    t[static_cast<size_t>(i)].resize(static_cast<size_t>(i) + 1);
    t[static_cast<size_t>(i)][0] = eval_at_step(ladder[i]);
    double fac = 1.0;
    for (int j = 1; j <= i; ++j) {
      fac *= 4.0;
      t[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          (fac * t[static_cast<size_t>(i)][static_cast<size_t>(j - 1)] -
           t[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)]) /
          (fac - 1.0);
      const double e =
          std::max(std::abs(t[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                            t[static_cast<size_t>(i)][static_cast<size_t>(j - 1)]),
                   std::abs(t[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                            t[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)]));
      if (e < best_err) {
        best_err = e;
        best = t[static_cast<size_t>(i)][static_cast<size_t>(j)];
      }
    }
  }
  if (err) *err = best_err;
  return best;
}

cplx fd_derivative(const std::function<cplx(double)>& g, int m, double* err) {
  if (m == 0) {
    if (err) *err = 0.0;
    return g(0.0);
  }
  const auto off = fd_stencil_offsets(m);
  const auto w = fd_stencil_weights(m, off);
  auto eval = [&](double h) {
    KahanSum s;
    for (size_t i = 0; i < off.size(); ++i) s.add(w[i] * g(off[i] * h));
    return s.value() / std::pow(h, m);
  };
  return fd_ladder_extrapolate(eval, err);
}

cplx interp_cubic(const std::vector<cplx>& s, double x0, double dx, double x) {
  const double u = (x - x0) / dx;
  const auto n = static_cast<long>(s.size());
  long i = static_cast<long>(std::floor(u));
  if (i < 1 || i > n - 3) {
    if (u < 0.0 || u > static_cast<double>(n - 1)) return {0.0, 0.0};
    return interp_linear(s, x0, dx, x);
  }
  const double t = u - static_cast<double>(i);
  const cplx p0 = s[static_cast<size_t>(i - 1)], p1 = s[static_cast<size_t>(i)], p2 = s[static_cast<size_t>(i + 1)],
             p3 = s[static_cast<size_t>(i + 2)];
  // 4-point Lagrange (exact on cubics)
  const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3;
}

cplx interp_linear(const std::vector<cplx>& s, double x0, double dx, double x) {
  const double u = (x - x0) / dx;
  const auto n = static_cast<long>(s.size());
  if (u < 0.0 || u > static_cast<double>(n - 1)) return {0.0, 0.0};
  long i = static_cast<long>(std::floor(u));
  if (i >= n - 1) i = n - 2;
  const double t = u - static_cast<double>(i);
  return (1.0 - t) * s[static_cast<size_t>(i)] + t * s[static_cast<size_t>(i + 1)];
}

cplx expint_e1(cplx z) {
  const double az = std::abs(z);
  if (az == 0.0) fail(Err::Precondition, "E1 undefined at 0");
  if (az < 4.0) {
    // power series: E1(z) = -gamma - log z + sum_{k>=1} (-1)^{k+1} z^k / (k k!)
    const double gamma = 0.57721566490153286060651209008240243;
    cplx sum = 0.0, term = 1.0;
    for (int k = 1; k < 120; ++k) {
      term *= -z / static_cast<double>(k);
      const cplx add = -term / static_cast<double>(k);
      sum += add;
      if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return -gamma - std::log(z) + sum;
  }
  // modified Lentz continued fraction: E1(z) = e^{-z} / (z + 1/(1 + 1/(z + 2/(1 + ...))))
  const double tiny = 1e-300;
  cplx b = z + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 400; ++i) {
    const double a = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-z);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace qtb
