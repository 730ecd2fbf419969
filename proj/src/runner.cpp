#include "runner.hpp"

#include <algorithm>
#include <cmath>

namespace qtb {

namespace {

json wrap(const std::string& command, const json& eff, const json& result) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = eff;
  j["result"] = result;
  return j;
}

json moments_to_json(const std::map<std::array<int, 2>, cplx>& mom, int dim) {
  json out = json::array();
  for (const auto& [m, v] : mom) {
    json e;
    e["m"] = dim == 1 ? json::array({m[0]}) : json::array({m[0], m[1]});
    e["value"] = cplx_to_json(v);
    out.push_back(e);
  }
  return out;
}

}  // namespace

RunResult run_kernel_check(const json& cfg) {
  json eff;
  eff["command"] = "kernel_check";
  const std::string name = cfg.at("kernel").get<std::string>();
  const int dim = cfg.value("dim", name == "paper_mixed" || name == "degenerate_demo" ? 2 : 1);
  const double tol = cfg.value("tol", 1e-9);
  const int rays = cfg.value("rays", 64);
  const int radial_points = cfg.value("radial_points", 200);
  const int order = cfg.value("taylor_order", 8);
  eff["kernel"] = name;
  eff["dim"] = dim;
  eff["tol"] = tol;
  eff["rays"] = rays;
  eff["radial_points"] = radial_points;
  eff["taylor_order"] = order;

  Kernel k = kernel_create(name, dim);
  k.ray_count = rays;
  k.r_pts = radial_points;

  json result;
  const NondegReport nd = check_nondegenerate(k, tol);
  result["nondegenerate"] = nd.verdict;
  result["worst_ray"] = dim == 1 ? json::array({nd.worst_ray[0]}) : json::array({nd.worst_ray[0], nd.worst_ray[1]});
  result["worst_max"] = nd.worst_max;
  try {
    const StrongNondegReport sn = check_strongly_nondegenerate(k, order, tol);
    result["strongly_nondegenerate"] = sn.verdict;
    result["witness_order"] = sn.witness_order ? json(*sn.witness_order) : json(nullptr);
  } catch (const Error& e) {
    result["strongly_nondegenerate"] = nullptr;
    result["witness_order"] = nullptr;
    result["strong_check_error"] = err_name(e.code());
  }
  try {
    result["moments"] = moments_to_json(moments(k, std::min(order, 4)), dim);
  } catch (const Error& e) {
    result["moments"] = nullptr;
    result["moment_error"] = err_name(e.code());
  }
  try {
    const TaylorTerms tt = taylor_terms(k, order);
    json terms = json::array();
    for (const auto& [m, c] : tt.coef) {
      json e;
      e["m"] = dim == 1 ? json::array({m[0]}) : json::array({m[0], m[1]});
      e["coef"] = cplx_to_json(c);
      terms.push_back(e);
    }
    result["taylor_terms"] = terms;
    result["taylor_fd_error"] = tt.worst_fd_error;
  } catch (const Error& e) {
    result["taylor_terms"] = nullptr;
    result["taylor_error"] = err_name(e.code());
  }
  result["lizorkin_structural"] = k.is_lizorkin();
  RunResult rr;
  rr.report = wrap("kernel_check", eff, result);
  rr.exit_code = nd.verdict ? 0 : 2;
  return rr;
}

RunResult run_transform(const json& cfg) {
  json eff;
  eff["command"] = "transform";
  const Field f = field_sum_from_json(cfg.at("field"));
  const std::string kname = cfg.value("kernel", std::string("gaussian"));
  const Kernel k = kernel_create(kname, f.dim());
  GridConfig gc = grid_config_from_json(cfg.value("grid", json::object()), f.dim());
  if (cfg.contains("site")) gc.site = site_from_name(cfg["site"].get<std::string>());
  const std::string method_str = cfg.value("method", std::string("auto"));
  Method method = Method::Auto;
  if (method_str == "closed_form") method = Method::ClosedForm;
  else if (method_str == "fft") method = Method::FFT;
  else if (method_str != "auto") fail(Err::Config, "unknown method: " + method_str);

  eff["field"] = field_sum_to_json(f);
  eff["kernel"] = kname;
  eff["site"] = site_name(gc.site);
  eff["grid"] = grid_config_to_json(gc);
  eff["method"] = method_str;

  const ScaleGrid grid = build_grid(gc, f.dim());
  const TransformSheet sheet = compute_sheet(f, k, grid, method);
  json result;
  result["rows"] = grid.dirs.size() * grid.lambdas.size();
  result["directions"] = grid.dirs.size();
  result["lambdas"] = grid.lambdas.size();
  result["method"] = method_name(sheet.method);
  RunResult rr;
  rr.report = wrap("transform", eff, result);
  rr.csv = sheet_to_csv(sheet);
  return rr;
}

RunResult run_scaling(const json& cfg) {
  json eff;
  eff["command"] = "scaling";
  const Field f = field_sum_from_json(cfg.at("field"));
  const std::string kname = cfg.value("kernel", std::string("gaussian"));
  const Kernel k = kernel_create(kname, f.dim());
  GridConfig gc = grid_config_from_json(cfg.value("grid", json::object()), f.dim());
  if (cfg.contains("site")) gc.site = site_from_name(cfg["site"].get<std::string>());
  const double tol = cfg.value("nondeg_tol", 1e-9);
  eff["field"] = field_sum_to_json(f);
  eff["kernel"] = kname;
  eff["site"] = site_name(gc.site);
  eff["grid"] = grid_config_to_json(gc);
  eff["nondeg_tol"] = tol;

  const ScaleGrid grid = build_grid(gc, f.dim());
  const ScalingReport rep = full_report(f, k, grid, tol);
  RunResult rr;
  rr.report = wrap("scaling", eff, scaling_report_to_json(rep, grid));
  rr.csv = sheet_to_csv(compute_sheet(f, k, grid));
  rr.exit_code = rep.k_hat ? 0 : 2;
  return rr;
}

RunResult run_calderon(const json& cfg) {
  json eff;
  eff["command"] = "calderon_verify";
  const std::string wavelet = cfg.value("wavelet", std::string("paper_lizorkin"));
  PlaneConfig pc;
  const json pj = cfg.value("plane", json::object());
  pc.x_max = pj.value("x_max", pc.x_max);
  pc.y_min = pj.value("y_min", pc.y_min);
  pc.y_max = pj.value("y_max", pc.y_max);
  pc.rows_per_octave = pj.value("rows_per_octave", pc.rows_per_octave);
  eff["wavelet"] = wavelet;
  eff["plane"] = {{"x_max", pc.x_max}, {"y_min", pc.y_min}, {"y_max", pc.y_max}, {"rows_per_octave", pc.rows_per_octave}};

  const Kernel psi = kernel_create(wavelet, 1);
  const CalderonVerifyReport rep = calderon_verify(psi, pc);
  RunResult rr;
  rr.report = wrap("calderon_verify", eff, calderon_report_to_json(rep));
  return rr;
}

RunResult run_heat(const json& cfg) {
  json eff;
  eff["command"] = "heat";
  const Field f = field_sum_from_json(cfg.value("init", json("heaviside")));
  const int dim = f.dim();
  const double tmax = cfg.value("tmax", 1e7);
  const int tcount = cfg.value("t_count", 33);
  const double x_lo = cfg.value("x_min", -5.0);
  const double x_hi = cfg.value("x_max", 5.0);
  const int x_count = cfg.value("x_count", 11);
  eff["init"] = field_sum_to_json(f);
  eff["dim"] = dim;
  eff["tmax"] = tmax;
  eff["t_count"] = tcount;
  eff["x_min"] = x_lo;
  eff["x_max"] = x_hi;
  eff["x_count"] = x_count;

  const CauchyProblem prob = heat_problem(dim, f);

  double alpha;
  SlowVarySpec L{SlowVarySpec::Family::One, 0.0};
  bool have = false;
  if (cfg.contains("alpha")) {
    alpha = cfg["alpha"].get<double>();
    have = true;
  } else if (f.terms.size() == 1) {
    for (const auto& gt : ground_truth(f.terms.front()))
      if (gt.site == Site::Infinity) {
        alpha = gt.alpha;
        L = gt.L;
        have = true;
      }
  }
  if (!have) {
    const TransformSheet sheet =
        compute_sheet(f, prob.kernel(), dcurve_grid(dim, prob.degree, 16, 1.0, 1.1892071150027210667, 96));
    const AlphaFit afit = estimate_alpha(sheet, -1);
    alpha = afit.alpha_hat;
    L = afit.slow_vary;
  }
  eff["alpha"] = alpha;
  eff["slow_vary"] = slow_vary_to_json(L);

  json result;
  const DCurveReport dc = check_d_curve_stabilization(prob, alpha, L);
  result["stabilizes"] = dc.stabilizes;
  result["l_hat"] = dc.l_hat ? json(*dc.l_hat) : json(nullptr);
  json u0 = json::array();
  for (size_t d = 0; d < dc.dirs.size(); ++d) {
    json e;
    e["x"] = dc.dirs[d].x[0];
    e["t"] = std::pow(dc.dirs[d].y, prob.degree);
    e["status"] = dc.limits[d].converged ? "limit" : "divergent";
    if (dc.limits[d].converged) e["value"] = cvec_to_json(dc.limits[d].value);
    u0.push_back(e);
  }
  result["u0_table"] = u0;

  RunResult rr;
  if (dc.stabilizes) {
    const auto xs = linspace(x_lo, x_hi, x_count);
    const TimeStabilizationReport ts = time_stabilization(prob, alpha, L, xs, tmax, tcount);
    json t;
    t["normalization"] = ts.t_desc;
    t["ell"] = cvec_to_json(ts.ell);
    t["sup_dev"] = ts.sup_dev;
    t["t_window"] = json::array({ts.t_min_checked, ts.t_max_checked});
    result["time_stabilization"] = t;
  }
  rr.report = wrap("heat", eff, result);
  rr.exit_code = dc.stabilizes ? 0 : 2;
  return rr;
}

RunResult run_littlewood(const json& cfg) {
  json eff;
  eff["command"] = "littlewood";
  ConeSeries s;
  if (cfg.contains("builtin")) {
    const auto name = cfg["builtin"].get<std::string>();
    const auto length = cfg.value("length", 400000);
    s = builtin_series(name, static_cast<size_t>(length));
    eff["builtin"] = name;
    eff["length"] = length;
  } else if (cfg.contains("series_csv")) {
    s = series_from_csv(cfg["series_csv"].get<std::string>());
    if (cfg.value("assume_o_inv_n", false)) {
      s.tail = ConeSeries::Tail::OInvN;
      s.tail_const = cfg.value("tail_const", 1.0);
    }
    eff["series_csv"] = cfg["series_csv"];
    eff["assume_o_inv_n"] = cfg.value("assume_o_inv_n", false);
  } else {
    fail(Err::Config, "littlewood needs builtin or series_csv");
  }
  const LittlewoodReport rep = littlewood_analyze(s);
  RunResult rr;
  rr.report = wrap("littlewood", eff, littlewood_report_to_json(rep));
  rr.exit_code = rep.soundness_violated ? 1 : (rep.tauberian_ok ? 0 : 2);
  return rr;
}

RunResult run_command(const json& cfg) {
  const std::string cmd = cfg.at("command").get<std::string>();
  if (cmd == "kernel_check") return run_kernel_check(cfg);
  if (cmd == "transform") return run_transform(cfg);
  if (cmd == "scaling") return run_scaling(cfg);
  if (cmd == "calderon_verify") return run_calderon(cfg);
  if (cmd == "heat") return run_heat(cfg);
  if (cmd == "littlewood") return run_littlewood(cfg);
  fail(Err::Config, "unknown command: " + cmd);
}

json error_report(const Error& e) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["error"] = {{"code", static_cast<int>(e.code())}, {"name", err_name(e.code())}, {"message", e.what()}};
  return j;
}

}  // namespace qtb
