#include "serialize.hpp"

#include <sstream>

namespace qtb {

json cplx_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) return cplx(j[0].get<double>(), j[1].get<double>());
  fail(Err::Config, "complex values are numbers or [re, im] pairs");
}

json cvec_to_json(const CVec& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(cplx_to_json(z));
  return out;
}

json field_to_json(const FieldSpec& f) {
  json j;
  j["dim"] = f.dim;
  j["catalog"] = field_name(f.id);
  j["vector_dim"] = f.vector_dim;
  j["amplitude"] = cvec_to_json(f.amplitude);
  json p = json::object();
  switch (f.id) {
    case FieldId::HomogeneousAbs:
    case FieldId::HomogeneousPlus: p["a"] = f.a; break;
    case FieldId::LogHeaviside:
      p["shift"] = f.shift;
      p["offset"] = f.offset;
      break;
    case FieldId::Polynomial: {
      json terms = json::array();
      for (const auto& t : f.poly) {
        json jt;
        jt["m"] = f.dim == 1 ? json::array({t.m[0]}) : json::array({t.m[0], t.m[1]});
        jt["c"] = cplx_to_json(t.c);
        terms.push_back(jt);
      }
      p["coefficients"] = terms;
      break;
    }
    case FieldId::DeltaComb: {
      json atoms = json::array();
      for (const auto& a : f.atoms) {
        json ja;
        ja["t"] = f.dim == 1 ? json::array({a.t[0]}) : json::array({a.t[0], a.t[1]});
        ja["c"] = cplx_to_json(a.c);
        atoms.push_back(ja);
      }
      p["atoms"] = atoms;
      break;
    }
    default: break;
  }
  if (f.window) p["window_radius"] = f.window->radius;
  j["params"] = p;
  if (f.grid) {
    json g;
    g["u_max"] = f.grid->u_max;
    g["pts"] = f.grid->pts;
    g["growth_bound"] = f.grid->growth_bound;
    json data = json::array();
    for (const auto& z : f.grid->data) data.push_back(cplx_to_json(z));
    g["data"] = data;
    j["fourier_grid"] = g;
  }
  return j;
}

FieldSpec field_from_json(const json& j) {
  FieldSpec f;
  if (j.is_string()) {
    f.id = field_from_name(j.get<std::string>());
    validate(f);
    return f;
  }
  f.dim = j.value("dim", 1);
  f.id = field_from_name(j.at("catalog").get<std::string>());
  f.vector_dim = j.value("vector_dim", 1);
  f.amplitude.assign(static_cast<size_t>(f.vector_dim), cplx(1.0, 0.0));
  if (j.contains("amplitude")) {
    const auto& ja = j["amplitude"];
    if (static_cast<int>(ja.size()) != f.vector_dim) fail(Err::Config, "amplitude length != vector_dim");
    for (size_t i = 0; i < ja.size(); ++i) f.amplitude[i] = cplx_from_json(ja[i]);
  }
  const json p = j.value("params", json::object());
  f.a = p.value("a", 0.5);
  f.shift = p.value("shift", 1.0);
  f.offset = p.value("offset", 0.0);
  if (p.contains("coefficients")) {
    for (const auto& jt : p["coefficients"]) {
      PolyTerm t;
      const auto& m = jt.at("m");
      t.m[0] = m[0].get<int>();
      t.m[1] = m.size() > 1 ? m[1].get<int>() : 0;
      t.c = cplx_from_json(jt.at("c"));
      f.poly.push_back(t);
    }
  }
  if (p.contains("atoms")) {
    for (const auto& ja : p["atoms"]) {
      Atom a;
      const auto& t = ja.at("t");
      a.t[0] = t[0].get<double>();
      a.t[1] = t.size() > 1 ? t[1].get<double>() : 0.0;
      a.c = cplx_from_json(ja.at("c"));
      f.atoms.push_back(a);
    }
  }
  if (p.contains("window_radius")) f.window = Window{p["window_radius"].get<double>()};
  if (j.contains("fourier_grid")) {
    const auto& g = j["fourier_grid"];
    FourierGrid fg;
    fg.u_max = g.at("u_max").get<double>();
    fg.pts = g.at("pts").get<int>();
    fg.growth_bound = g.value("growth_bound", 0.0);
    for (const auto& z : g.at("data")) fg.data.push_back(cplx_from_json(z));
    f.grid = std::move(fg);
  }
  validate(f);
  return f;
}

json field_sum_to_json(const Field& f) {
  if (f.terms.size() == 1) return field_to_json(f.terms.front());
  json terms = json::array();
  for (const auto& t : f.terms) terms.push_back(field_to_json(t));
  json j;
  j["sum"] = terms;
  return j;
}

Field field_sum_from_json(const json& j) {
  Field f;
  if (j.is_object() && j.contains("sum")) {
    for (const auto& jt : j["sum"]) f.terms.push_back(field_from_json(jt));
  } else {
    f.terms.push_back(field_from_json(j));
  }
  validate(f);
  return f;
}

GridConfig grid_config_from_json(const json& j, int /*dim*/) {
  GridConfig g;
  if (j.contains("site")) g.site = site_from_name(j["site"].get<std::string>());
  g.lambda0 = j.value("lambda0", g.lambda0);
  g.ratio = j.value("ratio", g.ratio);
  g.count = j.value("count", g.count);
  g.n_theta = j.value("directions", g.n_theta);
  g.n_phi = j.value("azimuths", g.n_phi);
  return g;
}

json grid_config_to_json(const GridConfig& g) {
  json j;
  j["site"] = site_name(g.site);
  j["lambda0"] = g.lambda0;
  j["ratio"] = g.ratio;
  j["count"] = g.count;
  j["directions"] = g.n_theta;
  j["azimuths"] = g.n_phi;
  return j;
}

ScaleGrid build_grid(const GridConfig& g, int dim) {
  return sphere_grid(dim, g.site, g.n_theta, g.n_phi, g.lambda0, g.ratio, g.count);
}

json slow_vary_to_json(const SlowVarySpec& s) {
  json j;
  switch (s.family) {
    case SlowVarySpec::Family::One: j["family"] = "one"; break;
    case SlowVarySpec::Family::LogPow: j["family"] = "log_pow"; break;
    case SlowVarySpec::Family::LogLogPow: j["family"] = "loglog_pow"; break;
  }
  j["b"] = s.b;
  return j;
}

json scaling_report_to_json(const ScalingReport& rep, const ScaleGrid& grid) {
  json j;
  j["field"] = rep.field_sig;
  j["kernel"] = rep.kernel_sig;
  j["site"] = site_name(rep.site);
  j["alpha_hat"] = rep.alpha_hat;
  j["slow_vary"] = slow_vary_to_json(rep.slow_vary);
  if (rep.k_hat)
    j["k_hat"] = *rep.k_hat;
  else
    j["k_hat"] = nullptr;
  j["k_margin"] = rep.k_margin;
  json limits = json::array();
  for (size_t d = 0; d < rep.limits.size(); ++d) {
    json e;
    e["dir_index"] = d;
    e["x"] = grid.dim == 1 ? json::array({grid.dirs[d].x[0]}) : json::array({grid.dirs[d].x[0], grid.dirs[d].x[1]});
    e["y"] = grid.dirs[d].y;
    e["status"] = rep.limits[d].converged ? "limit" : "divergent";
    if (rep.limits[d].converged) e["value"] = cvec_to_json(rep.limits[d].value);
    e["deviation"] = rep.limits[d].deviation;
    limits.push_back(e);
  }
  j["limits"] = limits;
  if (rep.critical) {
    json c;
    c["p"] = rep.critical->p;
    json gp = json::array(), lc = json::array();
    for (const auto& v : rep.critical->g_part) gp.push_back(cvec_to_json(v));
    for (const auto& v : rep.critical->log_coeff) lc.push_back(cvec_to_json(v));
    c["g_part"] = gp;
    c["log_coeff"] = lc;
    c["residual"] = rep.critical->residual;
    j["critical"] = c;
  }
  json diag;
  diag["alpha_residual"] = rep.alpha_residual;
  diag["decade_slopes"] = rep.decade_slopes;
  diag["max_cauchy_deviation"] = rep.max_cauchy_deviation;
  diag["homogeneity_deviation"] = rep.homogeneity_deviation;
  diag["ref_direction"] = rep.ref_direction;
  j["diagnostics"] = diag;
  j["flags"] = rep.flags;
  return j;
}

json calderon_report_to_json(const CalderonVerifyReport& rep) {
  json j;
  j["c"] = cplx_to_json(rep.c_psi_psi);
  j["is_constant"] = rep.is_constant;
  j["c_psi_eta"] = cplx_to_json(rep.c_psi_eta);
  j["reconstruction_max_rel_err"] = rep.reconstruction_max_rel_err;
  j["pairing_rel_err"] = rep.pairing_rel_err;
  j["test_functions"] = rep.test_functions;
  return j;
}

json littlewood_report_to_json(const LittlewoodReport& rep) {
  json j;
  j["abel_limit"] = rep.abel_limit ? cplx_to_json(*rep.abel_limit) : json(nullptr);
  j["tauberian_ok"] = rep.tauberian_ok;
  j["partial_sum_limit"] = rep.partial_sum_limit ? cplx_to_json(*rep.partial_sum_limit) : json(nullptr);
  j["verdict"] = rep.verdict;
  j["soundness_violated"] = rep.soundness_violated;
  return j;
}

ConeSeries series_from_csv(const std::string& csv) {
  ConeSeries s;
  std::istringstream is(csv);
  std::string line;
  std::vector<std::pair<long, cplx>> entries;
  long max_n = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (std::isalpha(static_cast<unsigned char>(line[line.find_first_not_of(" \t\r")]))) continue;  // header
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> nums;
    while (std::getline(ls, cell, ',')) nums.push_back(std::strtod(cell.c_str(), nullptr));
    if (nums.size() < 2) fail(Err::Config, "series csv rows need n and c_n");
    const long n = static_cast<long>(std::llround(nums[0]));
    if (n < 0) fail(Err::Config, "series indices must be nonnegative");
    entries.emplace_back(n, cplx(nums[1], nums.size() > 2 ? nums[2] : 0.0));
    max_n = std::max(max_n, n);
  }
  if (entries.empty()) fail(Err::Config, "series csv is empty");
  s.c.assign(static_cast<size_t>(max_n) + 1, cplx(0.0, 0.0));
  for (const auto& [n, c] : entries) s.c[static_cast<size_t>(n)] = c;
  s.tail = ConeSeries::Tail::None;
  return s;
}

}  // namespace qtb
