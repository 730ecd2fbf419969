#include "tauber.hpp"

#include <algorithm>
#include <cmath>

#include <map>

#include "numerics.hpp"

namespace qtb {

namespace {

double ell(double lambda, Site site) { return site == Site::Infinity ? lambda : 1.0 / lambda; }

std::vector<size_t> decade_window(const ScaleGrid& g, double from_decades, double to_decades) {
  // indices whose distance (in decades) from the limit end lies in [from, to)
  std::vector<size_t> idx;
  const double last = g.lambdas.back();
  for (size_t j = 0; j < g.lambdas.size(); ++j) {
    const double d = std::abs(std::log10(g.lambdas[j] / last));
    if (d >= from_decades - 1e-12 && d < to_decades - 1e-12) idx.push_back(j);
  }
  return idx;
}

}  // namespace

AlphaFit estimate_alpha(const TransformSheet& sheet, int ref_direction) {
  const auto& g = sheet.grid;
  const auto tail = g.tail_indices(2.0);
  if (tail.size() < 6) fail(Err::InsufficientRange, "need at least 6 samples in the last two decades");

  int ref = ref_direction;
  if (ref < 0) {
    double best = -1.0;
    for (size_t d = 0; d < g.dirs.size(); ++d) {
      double m = 0.0;
      for (size_t j : g.tail_indices(1.0)) m += norm2(sheet.at(d, j));
      if (m > best) {
        best = m;
        ref = static_cast<int>(d);
      }
    }
  }
  if (ref < 0 || static_cast<size_t>(ref) >= g.dirs.size()) fail(Err::Config, "reference direction out of range");

  std::vector<double> lx, lyv;
  for (size_t j : tail) {
    const double n = norm2(sheet.at(static_cast<size_t>(ref), j));
    if (n > 1e-250) {
      lx.push_back(std::log(g.lambdas[j]));
      lyv.push_back(std::log(n));
    }
  }
  if (lx.size() < 6) fail(Err::AllZeroSheet, "reference direction vanishes over the last two decades");

  AlphaFit fit;
  fit.ref_direction = ref;

  // per-decade slopes at the reference direction (limit-most decades first in flags order)
  for (int dec = 0; dec < 4; ++dec) {
    std::vector<double> px, py;
    for (size_t j : decade_window(g, dec, dec + 1)) {
      const double n = norm2(sheet.at(static_cast<size_t>(ref), j));
      if (n > 1e-250) {
        px.push_back(std::log(g.lambdas[j]));
        py.push_back(std::log(n));
      }
    }
    if (px.size() >= 3) fit.decade_slopes.push_back(fit_slope(px, py));
  }
  if (fit.decade_slopes.size() >= 2 && std::abs(fit.decade_slopes[0] - fit.decade_slopes[1]) > 0.1)
    fail(Err::NoStableSlope, "per-decade slopes differ by more than 0.1");

  // base slope, then penalized refits with the slowly-varying families
  const double alpha0 = fit_slope(lx, lyv);
  double best_score = 1e300;
  for (auto family : {SlowVarySpec::Family::One, SlowVarySpec::Family::LogPow, SlowVarySpec::Family::LogLogPow}) {
    std::vector<std::vector<double>> cols;
    std::vector<double> rhs;
    std::vector<double> ones, lamcol, wcol;
    for (size_t t = 0; t < lx.size(); ++t) {
      const double lam = std::exp(lx[t]);
      const double e = ell(lam, g.site);
      double w = 0.0;
      if (family == SlowVarySpec::Family::LogPow) {
        if (e < 3.0) continue;
        w = std::log(std::log(e));
      } else if (family == SlowVarySpec::Family::LogLogPow) {
        if (e < 16.0) continue;
        w = std::log(std::log(std::log(e)));
      }
      ones.push_back(1.0);
      lamcol.push_back(lx[t]);
      wcol.push_back(w);
      rhs.push_back(lyv[t]);
    }
    if (rhs.size() < 6) continue;
    cols.push_back(ones);
    cols.push_back(lamcol);
    const int extra = family == SlowVarySpec::Family::One ? 0 : 1;
    if (extra) cols.push_back(wcol);
    const LsqFit f = lsq(cols, rhs);
    const double score = f.rms + 1e-3 * extra;
    if (score < best_score) {
      best_score = score;
      fit.alpha_hat = f.coef[1];
      fit.residual = f.rms;
      fit.slow_vary.family = family;
      fit.slow_vary.b = extra ? f.coef[2] : 0.0;
    }
  }
  if (best_score >= 1e300) {
    fit.alpha_hat = alpha0;
    fit.slow_vary = SlowVarySpec{SlowVarySpec::Family::One, 0.0};
  }
  (void)alpha0;
  return fit;
}

KFit find_tauberian_k(const TransformSheet& sheet, double alpha, const SlowVarySpec& L) {
  const auto& g = sheet.grid;
  const auto tail2 = g.tail_indices(2.0);
  const auto tail1 = g.tail_indices(1.0);
  if (tail2.size() < 6) fail(Err::InsufficientRange, "need at least 6 samples in the last two decades");

  const size_t nd = g.dirs.size();
  std::vector<double> rbar(nd, 0.0);
  double rbar_max = 0.0;
  for (size_t d = 0; d < nd; ++d) {
    double acc = 0.0;
    for (size_t j : tail1) acc += norm2(sheet.at(d, j)) / (std::pow(g.lambdas[j], alpha) * L.eval(g.lambdas[j], g.site));
    rbar[d] = acc / static_cast<double>(tail1.size());
    rbar_max = std::max(rbar_max, rbar[d]);
  }
  // A nonzero limit at scale r forces r^{k+alpha} to stay bounded as r -> 0,
  // so k must absorb a negative alpha before the sphere data can certify it.
  const int k_floor = rbar_max > 1e-250 ? std::max(0, static_cast<int>(std::ceil(-alpha - 0.05))) : 0;

  KFit out;
  for (int k = k_floor; k <= 16; ++k) {
    // lambda stability of the sup over directions
    std::vector<double> lx, lv;
    double runmax = 0.0;
    for (size_t j : tail2) {
      double s = 0.0;
      for (size_t d = 0; d < nd; ++d)
        s = std::max(s, std::pow(g.dirs[d].y, k) * norm2(sheet.at(d, j)) /
                            (std::pow(g.lambdas[j], alpha) * L.eval(g.lambdas[j], g.site)));
      runmax = std::max(runmax, s);
      lx.push_back(std::log(ell(g.lambdas[j], g.site)));
      lv.push_back(std::log(runmax + 1e-280));
    }
    const double slope = fit_slope(lx, lv);
    if (slope > 0.05) continue;
    // envelope profile toward the y -> 0 edge: per scale level, the sup of
    // y^k rbar over directions sharing that y
    std::map<long, double> levels;
    for (size_t d = 0; d < nd; ++d) {
      const long key = std::lround(std::log(g.dirs[d].y) * 1e6);
      double& slot = levels[key];
      slot = std::max(slot, std::pow(g.dirs[d].y, k) * rbar[d]);
    }
    double emax = 0.0;
    for (const auto& [key, e] : levels) emax = std::max(emax, e);
    // regress over the smallest quarter of the scale levels, where a bounded
    // envelope has flattened but a power-law edge still grows
    std::vector<std::pair<double, double>> lev;
    for (const auto& [key, e] : levels) lev.emplace_back(std::exp(static_cast<double>(key) / 1e6), e);
    std::sort(lev.begin(), lev.end());
    const size_t quarter = std::max<size_t>(3, lev.size() / 4);
    std::vector<double> ex, ev;
    for (size_t i = 0; i < lev.size() && i < quarter; ++i) {
      if (lev[i].second > 1e-12 * emax) {
        ex.push_back(std::log(1.0 / lev[i].first));
        ev.push_back(std::log(lev[i].second));
      }
    }
    if (ex.size() >= 3 && fit_slope(ex, ev) > 0.05) continue;
    out.k_hat = k;
    out.margin = slope;
    return out;
  }
  out.margin = 1e300;
  return out;
}

std::vector<LimitEntry> detect_limits(const TransformSheet& sheet, double alpha, const SlowVarySpec& L) {
  const auto& g = sheet.grid;
  const auto tail = g.tail_indices(1.0);
  std::vector<LimitEntry> out(g.dirs.size());
  for (size_t d = 0; d < g.dirs.size(); ++d) {
    std::vector<CVec> r;
    double rmax = 0.0;
    for (size_t j : tail) {
      CVec v = sheet.at(d, j);
      const double s = 1.0 / (std::pow(g.lambdas[j], alpha) * L.eval(g.lambdas[j], g.site));
      for (auto& z : v) z *= s;
      rmax = std::max(rmax, norm2(v));
      r.push_back(std::move(v));
    }
    double dev = 0.0;
    for (size_t i = 0; i < r.size(); ++i)
      for (size_t j2 = i + 1; j2 < r.size(); ++j2) {
        CVec diff = r[i];
        for (size_t c = 0; c < diff.size(); ++c) diff[c] -= r[j2][c];
        dev = std::max(dev, norm2(diff));
      }
    LimitEntry& e = out[d];
    e.deviation = dev;
    e.converged = dev < 1e-3 * (1.0 + rmax);
    if (e.converged) {
      const size_t take = std::min<size_t>(8, r.size());
      CVec mean = zeros(static_cast<int>(r.front().size()));
      for (size_t i = r.size() - take; i < r.size(); ++i)
        for (size_t c = 0; c < mean.size(); ++c) mean[c] += r[i][c];
      for (auto& z : mean) z /= static_cast<double>(take);
      e.value = std::move(mean);
    }
  }
  return out;
}

CriticalFit fit_critical_log(const TransformSheet& sheet, int p) {
  const auto& g = sheet.grid;
  const auto tail = g.tail_indices(2.0);
  if (tail.size() < 6) fail(Err::InsufficientRange, "need at least 6 samples in the last two decades");
  CriticalFit out;
  out.p = p;
  double ss = 0.0;
  for (size_t d = 0; d < g.dirs.size(); ++d) {
    std::vector<std::vector<double>> cols(2);
    CVec rhs;
    for (size_t j : tail) {
      cols[0].push_back(1.0);
      cols[1].push_back(std::log(g.lambdas[j]));
      CVec v = sheet.at(d, j);
      const double s = std::pow(g.lambdas[j], -p);
      rhs.insert(rhs.end(), v.begin(), v.end());
      for (size_t c = 0; c < v.size(); ++c) rhs[rhs.size() - v.size() + c] *= s;
    }
    // solve per component
    const size_t nc = sheet.at(d, 0).size();
    CVec a(nc), b(nc);
    for (size_t c = 0; c < nc; ++c) {
      CVec comp;
      for (size_t t = 0; t < tail.size(); ++t) comp.push_back(rhs[t * nc + c]);
      const LsqFitC f = lsq_complex(cols, comp);
      if (f.cond > 1e8) fail(Err::IllConditioned, "log-lambda design matrix is ill conditioned");
      a[c] = f.coef[0];
      b[c] = f.coef[1];
      ss += f.rms * f.rms;
    }
    out.g_part.push_back(std::move(a));
    out.log_coeff.push_back(std::move(b));
  }
  out.residual = std::sqrt(ss / static_cast<double>(std::max<size_t>(1, g.dirs.size())));
  return out;
}

AahReport test_associate_homogeneous(const std::vector<double>& lambdas, const std::vector<CVec>& samples,
                                     const SlowVarySpec& L, Site site) {
  if (lambdas.size() != samples.size() || lambdas.size() < 16)
    fail(Err::InsufficientRange, "need matching samples on at least 16 scales");
  const double span = std::abs(std::log10(lambdas.back() / lambdas.front()));
  if (span < 3.0 - 1e-9) fail(Err::InsufficientRange, "sample ladder must span at least 3 decades");
  const double rho = lambdas[1] / lambdas[0];
  for (size_t j = 2; j < lambdas.size(); ++j)
    if (std::abs(lambdas[j] / lambdas[j - 1] - rho) > 1e-9 * rho)
      fail(Err::InsufficientRange, "sample ladder must be geometric");

  const size_t nc = samples.front().size();
  const int base_shift = static_cast<int>(std::lround(std::log(2.0) / std::abs(std::log(rho))));
  if (std::abs(std::pow(rho, site == Site::Infinity ? base_shift : -base_shift) - 2.0) > 1e-6)
    fail(Err::InsufficientRange, "ladder ratio must reach a = 2 by an integer shift");

  const double last = lambdas.back();
  AahReport rep;
  std::vector<double> logs = {std::log(2.0), std::log(4.0), std::log(8.0)};
  std::vector<CVec> dbar(3, zeros(static_cast<int>(nc)));
  std::vector<std::vector<CVec>> dvals(3);
  std::vector<std::vector<double>> dlam(3);
  for (int ia = 0; ia < 3; ++ia) {
    const int shift = (ia + 1) * base_shift * (site == Site::Infinity ? 1 : -1);
    size_t count = 0;
    for (size_t j = 0; j < lambdas.size(); ++j) {
      const long js = static_cast<long>(j) + shift;
      if (js < 0 || js >= static_cast<long>(lambdas.size())) continue;
      CVec d = samples[static_cast<size_t>(js)];
      for (size_t c = 0; c < nc; ++c) d[c] -= samples[j][c];
      const double lscale = L.eval(lambdas[j], site);
      for (auto& z : d) z /= lscale;
      dvals[static_cast<size_t>(ia)].push_back(d);
      dlam[static_cast<size_t>(ia)].push_back(lambdas[j]);
      if (std::abs(std::log10(lambdas[j] / last)) <= 1.5) {
        for (size_t c = 0; c < nc; ++c) dbar[static_cast<size_t>(ia)][c] += d[c];
        ++count;
      }
    }
    if (count < 4) fail(Err::InsufficientRange, "not enough overlap for the dilation differences");
    for (auto& z : dbar[static_cast<size_t>(ia)]) z /= static_cast<double>(count);
  }

  double denom = 0.0;
  rep.v_hat = zeros(static_cast<int>(nc));
  for (int ia = 0; ia < 3; ++ia) {
    denom += logs[static_cast<size_t>(ia)] * logs[static_cast<size_t>(ia)];
    for (size_t c = 0; c < nc; ++c) rep.v_hat[c] += logs[static_cast<size_t>(ia)] * dbar[static_cast<size_t>(ia)][c];
  }
  for (auto& z : rep.v_hat) z /= denom;

  const double vn = norm2(rep.v_hat);
  rep.is_aah = true;
  for (int ia = 0; ia < 3 && rep.is_aah; ++ia)
    for (size_t t = 0; t < dvals[static_cast<size_t>(ia)].size(); ++t) {
      if (std::abs(std::log10(dlam[static_cast<size_t>(ia)][t] / last)) > 1.5) continue;
      CVec diff = dvals[static_cast<size_t>(ia)][t];
      for (size_t c = 0; c < nc; ++c) diff[c] -= logs[static_cast<size_t>(ia)] * rep.v_hat[c];
      // the increments must match log(a) v both absolutely and, when v is
      // appreciable, to a few percent of it: slow drifts of the apparent v
      // (e.g. sin(log log)) are thereby classified as bounded, not homogeneous
      const double tol =
          std::min(1e-2 * (1.0 + vn), 0.02 * logs[static_cast<size_t>(ia)] * std::max(vn, 0.05));
      if (norm2(diff) >= tol) {
        rep.is_aah = false;
        break;
      }
    }

  rep.is_ahb = true;
  for (int ia = 0; ia < 3 && rep.is_ahb; ++ia) {
    std::vector<double> lx, lv;
    double runmax = 0.0;
    for (size_t t = 0; t < dvals[static_cast<size_t>(ia)].size(); ++t) {
      runmax = std::max(runmax, norm2(dvals[static_cast<size_t>(ia)][t]));
      if (std::abs(std::log10(dlam[static_cast<size_t>(ia)][t] / last)) <= 1.5) {
        lx.push_back(std::log(ell(dlam[static_cast<size_t>(ia)][t], site)));
        lv.push_back(std::log(runmax + 1e-280));
      }
    }
    if (fit_slope(lx, lv) > 0.05) rep.is_ahb = false;
  }
  return rep;
}

double verify_annihilation(const Kernel& k, const FieldSpec& poly, int order) {
  if (poly.id != FieldId::Polynomial) fail(Err::Precondition, "verify_annihilation expects a polynomial field");
  const TaylorTerms tt = taylor_terms(k, order);
  double worst = 0.0;
  for (int q = 0; q <= order; ++q) {
    std::map<std::array<int, 2>, cplx> res;
    for (const auto& [m, cm] : tt.coef) {
      if (m[0] + m[1] != q) continue;
      for (const auto& term : poly.poly) {
        if (term.m[0] < m[0] || term.m[1] < m[1]) continue;
        double fall = 1.0;
        for (int i = 0; i < m[0]; ++i) fall *= term.m[0] - i;
        for (int i = 0; i < m[1]; ++i) fall *= term.m[1] - i;
        res[{term.m[0] - m[0], term.m[1] - m[1]}] += cm * term.c * fall;
      }
    }
    for (const auto& [mm, v] : res) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

ScalingReport full_report(const Field& f, const Kernel& k, const ScaleGrid& grid, double nondeg_tol) {
  const auto nd = check_nondegenerate(k, nondeg_tol);
  if (!nd.verdict) fail(Err::DegenerateKernel, "kernel is degenerate on a ray; refusing Tauberian analysis");
  const TransformSheet sheet = compute_sheet(f, k, grid);

  ScalingReport rep;
  rep.field_sig = f.signature();
  rep.kernel_sig = k.signature();
  rep.site = grid.site;

  try {
    const AlphaFit afit = estimate_alpha(sheet, -1);
    rep.alpha_hat = afit.alpha_hat;
    rep.slow_vary = afit.slow_vary;
    rep.alpha_residual = afit.residual;
    rep.decade_slopes = afit.decade_slopes;
    rep.ref_direction = afit.ref_direction;
  } catch (const Error& e) {
    rep.flags.push_back(std::string("alpha:") + err_name(e.code()));
    rep.alpha_hat = std::nan("");
    return rep;
  }

  const KFit kf = find_tauberian_k(sheet, rep.alpha_hat, rep.slow_vary);
  rep.k_hat = kf.k_hat;
  rep.k_margin = kf.margin;
  if (!kf.k_hat) rep.flags.push_back("k:NoFiniteK");

  rep.limits = detect_limits(sheet, rep.alpha_hat, rep.slow_vary);
  for (const auto& e : rep.limits) rep.max_cauchy_deviation = std::max(rep.max_cauchy_deviation, e.deviation);

  // homogeneous-extension consistency: compare the limit at doubled radius
  {
    const double rho = grid.ratio();
    const double lr = std::abs(std::log(rho));
    const int s = static_cast<int>(std::lround(std::log(2.0) / lr));
    if (s > 0 && std::abs(std::pow(rho, grid.site == Site::Infinity ? s : -s) - 2.0) < 1e-6) {
      const auto tail = grid.tail_indices(1.0);
      double dev = 0.0;
      double scale = 0.0;
      for (const auto& e : rep.limits) scale = std::max(scale, norm2(e.value));
      for (size_t d = 0; d < grid.dirs.size() && scale > 0.0; ++d) {
        if (!rep.limits[d].converged) continue;
        const size_t take = std::min<size_t>(8, tail.size());
        CVec m2 = zeros(sheet.vector_dim);
        size_t used = 0;
        for (size_t t = tail.size() - take; t < tail.size(); ++t) {
          const long j = static_cast<long>(tail[t]);
          const long js = j - (grid.site == Site::Infinity ? s : -s);
          if (js < 0 || js >= static_cast<long>(grid.lambdas.size())) continue;
          CVec v = sheet.at(d, static_cast<size_t>(j));
          const double den = std::pow(grid.lambdas[static_cast<size_t>(js)], rep.alpha_hat) *
                             rep.slow_vary.eval(grid.lambdas[static_cast<size_t>(js)], grid.site);
          for (auto& z : v) z /= den;
          for (size_t c = 0; c < m2.size(); ++c) m2[c] += v[c];
          ++used;
        }
        if (used == 0) continue;
        for (auto& z : m2) z /= static_cast<double>(used);
        // target carries the fitted slowly-varying ratio at the window scales
        double lratio = 0.0;
        size_t used2 = 0;
        for (size_t t = tail.size() - take; t < tail.size(); ++t) {
          const long j = static_cast<long>(tail[t]);
          const long js = j - (grid.site == Site::Infinity ? s : -s);
          if (js < 0 || js >= static_cast<long>(grid.lambdas.size())) continue;
          lratio += rep.slow_vary.eval(grid.lambdas[static_cast<size_t>(j)], grid.site) /
                    rep.slow_vary.eval(grid.lambdas[static_cast<size_t>(js)], grid.site);
          ++used2;
        }
        lratio = used2 ? lratio / static_cast<double>(used2) : 1.0;
        const double f2 = std::pow(2.0, rep.alpha_hat) * lratio;
        CVec diff = m2;
        for (size_t c = 0; c < diff.size(); ++c) diff[c] -= f2 * rep.limits[d].value[c];
        dev = std::max(dev, norm2(diff) / std::max(scale, 1e-280));
      }
      rep.homogeneity_deviation = dev;
    }
  }

  const double round_a = std::round(rep.alpha_hat);
  if (std::abs(rep.alpha_hat - round_a) <= 0.05) {
    try {
      rep.critical = fit_critical_log(sheet, static_cast<int>(round_a));
    } catch (const Error& e) {
      rep.flags.push_back(std::string("critical:") + err_name(e.code()));
    }
  }
  return rep;
}

}  // namespace qtb
