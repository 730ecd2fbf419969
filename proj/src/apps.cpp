#include "apps.hpp"

#include <algorithm>
#include <cmath>

#include "numerics.hpp"

namespace qtb {

CauchyProblem heat_problem(int dim, Field initial) {
  CauchyProblem p;
  p.dim = dim;
  p.degree = 2;
  p.initial = std::move(initial);
  if (p.initial.dim() != dim) fail(Err::DimMismatch, "initial data dim mismatch");
  // Re P(iu) = -|u|^2 < 0 off the origin, sampled on the unit sphere.
  for (int i = 0; i < 16; ++i) {
    const double th = kTwoPi * i / 16;
    const Pt u = dim == 1 ? Pt{1.0, 0.0} : Pt{std::cos(th), std::sin(th)};
    const double re_p = -dot(u, u, dim);
    if (!(re_p < 0.0)) fail(Err::Config, "symbol is not dissipative on the sphere");
  }
  return p;
}

CVec solve_cauchy(const CauchyProblem& prob, const Pt& x, double t) {
  if (!(t > 0.0)) fail(Err::Precondition, "t must be positive");
  return eval_transform(prob.initial, prob.kernel(), x, std::pow(t, 1.0 / prob.degree));
}

DCurveReport check_d_curve_stabilization(const CauchyProblem& prob, double alpha, const SlowVarySpec& L, int n_theta,
                                         double lambda0, double ratio, int count) {
  const ScaleGrid grid = dcurve_grid(prob.dim, prob.degree, n_theta, lambda0, ratio, count);
  const TransformSheet sheet = compute_sheet(prob.initial, prob.kernel(), grid);
  DCurveReport rep;
  rep.dirs = grid.dirs;
  rep.limits = detect_limits(sheet, alpha, L);
  const KFit kf = find_tauberian_k(sheet, alpha, L);
  rep.k_margin = kf.margin;
  bool all = true;
  for (const auto& e : rep.limits) all = all && e.converged;
  if (kf.k_hat) rep.l_hat = (kf.k_hat.value() + prob.degree - 1) / prob.degree;
  rep.stabilizes = all && kf.k_hat.has_value();
  return rep;
}

TimeStabilizationReport time_stabilization(const CauchyProblem& prob, double alpha, const SlowVarySpec& L,
                                           const std::vector<double>& x_set, double t_max, int t_count) {
  if (x_set.empty()) fail(Err::Config, "x_set must be nonempty");
  TimeStabilizationReport rep;
  rep.t_desc = "t^(alpha/d) L(t^(1/d))";
  const double t_min = t_max / 1e2;  // largest two time decades
  const auto ts = geomspace(t_min, t_max, t_count);
  rep.t_min_checked = t_min;
  rep.t_max_checked = t_max;
  auto normalized = [&](double x, double t) {
    CVec u = solve_cauchy(prob, {x, 0.0}, t);
    const double T = std::pow(t, alpha / prob.degree) * L.eval(std::pow(t, 1.0 / prob.degree), Site::Infinity);
    for (auto& z : u) z /= T;
    return u;
  };
  // ell = mean over x_set at the largest time
  CVec ell = zeros(prob.initial.vector_dim());
  for (double x : x_set) {
    const CVec u = normalized(x, t_max);
    for (size_t c = 0; c < ell.size(); ++c) ell[c] += u[c];
  }
  for (auto& z : ell) z /= static_cast<double>(x_set.size());
  rep.ell = ell;
  double dev = 0.0;
  for (double t : ts)
    for (double x : x_set) {
      CVec u = normalized(x, t);
      for (size_t c = 0; c < u.size(); ++c) u[c] -= ell[c];
      dev = std::max(dev, norm2(u));
    }
  rep.sup_dev = dev;
  if (!(dev < 0.5 * (1.0 + norm2(ell)))) fail(Err::NotStabilized, "no uniform time limit over the point set");
  return rep;
}

// ---------------------------------------------------------------------------

ConeSeries builtin_series(const std::string& name, size_t length) {
  ConeSeries s;
  s.c.assign(length, cplx(0.0, 0.0));
  if (name == "alt-harmonic") {
    for (size_t n = 1; n < length; ++n) s.c[n] = cplx((n % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(n), 0.0);
    s.tail = ConeSeries::Tail::OInvN;
    s.tail_const = 1.0;
  } else if (name == "grandi") {
    for (size_t n = 0; n < length; ++n) s.c[n] = cplx(n % 2 == 0 ? 1.0 : -1.0, 0.0);
    s.tail = ConeSeries::Tail::None;
  } else if (name == "basel") {
    for (size_t n = 1; n < length; ++n) s.c[n] = cplx(1.0 / (static_cast<double>(n) * static_cast<double>(n)), 0.0);
    s.tail = ConeSeries::Tail::OInvN;
    s.tail_const = 1.0;
  } else if (name == "ones") {
    for (size_t n = 0; n < length; ++n) s.c[n] = cplx(1.0, 0.0);
    s.tail = ConeSeries::Tail::None;
  } else if (name == "linear") {
    for (size_t n = 0; n < length; ++n) s.c[n] = cplx(static_cast<double>(n), 0.0);
    s.tail = ConeSeries::Tail::None;
  } else {
    fail(Err::Config, "unknown builtin series: " + name);
  }
  return s;
}

namespace {

cplx series_sum(const ConeSeries& h, cplx z) {
  // e^{izn} by recurrence, re-seeded in blocks to cap phase drift
  const cplx step = std::exp(cplx(0.0, 1.0) * z);
  KahanSum acc;
  const size_t block = 4096;
  for (size_t base = 0; base < h.c.size(); base += block) {
    cplx e = std::exp(cplx(0.0, 1.0) * (z * static_cast<double>(base)));
    const size_t end = std::min(h.c.size(), base + block);
    for (size_t n = base; n < end; ++n) {
      const cplx& cn = h.c[n];
      if (cn.real() != 0.0 || cn.imag() != 0.0) acc.add(cn * e);
      e *= step;
    }
  }
  return acc.value();
}

double series_tail_bound(const ConeSeries& h, cplx z) {
  if (h.tail == ConeSeries::Tail::None) return 0.0;
  const double sigma = z.imag();
  const double n = static_cast<double>(h.c.size());
  // sum_{m > N} C e^{-sigma m} / m <= C e^{-sigma N} / (N (1 - e^{-sigma}))
  const double damp = -std::expm1(-sigma);
  if (damp <= 0.0) return 1e300;
  return h.tail_const * std::exp(-sigma * n) / (n * damp);
}

}  // namespace

cplx laplace_eval(const ConeSeries& h, cplx z, double* err_bound) {
  if (!(z.imag() > 0.0)) fail(Err::Precondition, "laplace_eval needs Im z > 0");
  if (h.c.empty()) fail(Err::Config, "empty series");
  const cplx val = series_sum(h, z);
  const double bound = series_tail_bound(h, z);
  if (err_bound) *err_bound = bound;
  if (bound > 1e-10 * (std::abs(val) + 1e-300))
    fail(Err::SlowDecay, "stored prefix too short for this damping; tail bound exceeds 1e-10 relative");
  return val;
}

OmegaBoundReport omega_bound_check(const ConeSeries& h, const OmegaRegion& region, double alpha,
                                   const SlowVarySpec& L, int k, double lambda_min, int lambda_count) {
  if (region.kappa < 0.0 || region.kappa >= 1.0) fail(Err::Config, "kappa must lie in [0, 1)");
  if (std::log10(1.0 / lambda_min) < 3.0 - 1e-9) fail(Err::InsufficientRange, "lambda grid must span 3 decades");
  // boundary sample of Omega^kappa: the two side curves x = +-sigma^kappa plus the top edge
  std::vector<std::pair<double, double>> pts;
  for (double s : geomspace(region.sigma_min, 1.0, region.n_sigma)) {
    const double x = std::pow(s, region.kappa);
    pts.emplace_back(x, s);
    pts.emplace_back(-x, s);
  }
  for (double x : linspace(-1.0, 1.0, region.n_top)) pts.emplace_back(x, 1.0);

  const int n = 1;
  const auto lambdas = geomspace(1.0, lambda_min, lambda_count);  // limit order toward 0+
  std::vector<double> lx, lv;
  double runmax = 0.0;
  for (double lam : lambdas) {
    double sup = 0.0;
    for (const auto& [x, sigma] : pts) {
      const cplx z = lam * cplx(x, sigma);
      double bound = 0.0;
      const cplx val = series_sum(h, z);
      bound = series_tail_bound(h, z);
      const double weight = std::pow(sigma, k) * std::pow(lam, n + alpha) / L.eval(1.0 / lam, Site::Infinity);
      sup = std::max(sup, weight * (std::abs(val) + bound));
    }
    runmax = std::max(runmax, sup);
    lx.push_back(std::log(1.0 / lam));
    lv.push_back(std::log(runmax + 1e-280));
  }
  // keep the last two decades of the sweep toward lambda -> 0+
  std::vector<double> tx, tv;
  for (size_t i = 0; i < lx.size(); ++i)
    if (lx[i] >= lx.back() - 2.0 * std::log(10.0)) {
      tx.push_back(lx[i]);
      tv.push_back(lv[i]);
    }
  OmegaBoundReport rep;
  rep.margin = fit_slope(tx, tv);
  rep.bounded = rep.margin <= 0.05;
  return rep;
}

LittlewoodReport littlewood_analyze(const ConeSeries& h) {
  if (h.c.size() < 10000) fail(Err::Precondition, "littlewood analysis needs a prefix of at least 1e4 terms");
  LittlewoodReport rep;

  // Abel limit along a four-point epsilon trend
  const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<cplx> vals;
  for (double e : eps) vals.push_back(laplace_eval(h, cplx(0.0, e)));
  bool monotone = true;
  for (size_t i = 2; i < vals.size(); ++i)
    if (std::abs(vals[i] - vals[i - 1]) > std::abs(vals[i - 1] - vals[i - 2]) + 1e-12) monotone = false;
  const double final_step = std::abs(vals.back() - vals[vals.size() - 2]);
  if (monotone && final_step < 0.05 * (1.0 + std::abs(vals.back()))) {
    // linear-in-epsilon extrapolation from the last two points (ratio 10)
    rep.abel_limit = vals.back() + (vals.back() - vals[vals.size() - 2]) / 9.0;
  }

  // Tauberian hypothesis c_n = O(1/n) on the stored prefix
  double sup_ncn = 0.0;
  for (size_t n = 1; n < h.c.size(); ++n) sup_ncn = std::max(sup_ncn, static_cast<double>(n) * std::abs(h.c[n]));
  const bool o_inv_n = h.tail == ConeSeries::Tail::OInvN && sup_ncn <= 4.0 * h.tail_const;
  bool omega_ok = false;
  if (o_inv_n) {
    OmegaRegion region;
    region.kappa = 0.0;
    omega_ok = omega_bound_check(h, region, -1.0, SlowVarySpec{SlowVarySpec::Family::One, 0.0}, 1).bounded;
  }
  rep.tauberian_ok = o_inv_n && omega_ok;

  // direct partial sums with a Cauchy test over the last tenth
  {
    KahanSum acc;
    const size_t n = h.c.size();
    const size_t win0 = n - n / 10;
    cplx wmin(0, 0), wmax(0, 0);
    double lo_r = 1e300, hi_r = -1e300, lo_i = 1e300, hi_i = -1e300;
    CVec tail_window;
    for (size_t i = 0; i < n; ++i) {
      acc.add(h.c[i]);
      if (i >= win0) {
        const cplx s = acc.value();
        lo_r = std::min(lo_r, s.real());
        hi_r = std::max(hi_r, s.real());
        lo_i = std::min(lo_i, s.imag());
        hi_i = std::max(hi_i, s.imag());
        tail_window.push_back(s);
      }
    }
    const double spread = std::hypot(hi_r - lo_r, hi_i - lo_i);
    const cplx last = acc.value();
    if (spread < 1e-3 * (1.0 + std::abs(last))) {
      cplx mean(0, 0);
      const size_t take = std::min<size_t>(64, tail_window.size());
      for (size_t i = tail_window.size() - take; i < tail_window.size(); ++i) mean += tail_window[i];
      rep.partial_sum_limit = mean / static_cast<double>(take);
    }
  }

  if (rep.tauberian_ok && rep.abel_limit) {
    if (rep.partial_sum_limit &&
        std::abs(*rep.partial_sum_limit - *rep.abel_limit) < 1e-3 * (1.0 + std::abs(*rep.abel_limit))) {
      rep.verdict = "tauberian hypothesis holds; the numerical series is convergent with the Abel sum";
    } else {
      rep.verdict = "INCONSISTENT: Tauberian hypothesis and Abel limit hold but partial sums disagree";
      rep.soundness_violated = true;
    }
  } else if (rep.abel_limit) {
    rep.verdict = "Tauberian hypothesis fails; Abel limit exists but no convergence conclusion";
  } else {
    rep.verdict = "no Abel limit detected";
  }
  return rep;
}

}  // namespace qtb
