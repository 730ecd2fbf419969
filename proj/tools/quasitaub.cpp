// quasitaub command-line tool. Builds a config object from flags, hands it to
// the shared library through the C API, and writes the returned JSON/CSV.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasitaub.h"

using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    std::exit(1);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fourier grids may reference a CSV file ("csv": path, rows re[,im]); the
// data is inlined here so the library sees a self-contained spec.
void inline_grid_csv(json& spec) {
  if (!spec.is_object()) return;
  if (spec.contains("sum")) {
    for (auto& term : spec["sum"]) inline_grid_csv(term);
    return;
  }
  if (!spec.contains("fourier_grid") || !spec["fourier_grid"].contains("csv")) return;
  json& grid = spec["fourier_grid"];
  std::istringstream rows(read_file(grid["csv"].get<std::string>()));
  json data = json::array();
  std::string line;
  while (std::getline(rows, line)) {
    if (line.empty() || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    std::istringstream cells(line);
    std::string cell;
    std::vector<double> nums;
    while (std::getline(cells, cell, ',')) nums.push_back(std::strtod(cell.c_str(), nullptr));
    data.push_back(json::array({nums.at(0), nums.size() > 1 ? nums[1] : 0.0}));
  }
  grid.erase("csv");
  grid["data"] = data;
}

json field_argument(const std::string& arg) {
  json spec;
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '"' || arg[0] == '[')) {
    spec = json::parse(arg);
  } else if (std::ifstream probe(arg); probe.good()) {
    spec = json::parse(read_file(arg));
  } else {
    return json(arg);  // bare catalog name
  }
  inline_grid_csv(spec);
  return spec;
}

void write_or_print(const std::string& payload, const std::vector<std::string>& path_opt) {
  if (path_opt.empty() || path_opt.front().empty() || path_opt.front() == "-") {
    std::cout << payload << "\n";
    return;
  }
  std::ofstream out(path_opt.front(), std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path_opt.front() << "\n";
    std::exit(1);
  }
  out << payload;
}

int run_config(const json& cfg, const std::vector<std::string>& json_out, const std::string& csv_out) {
  char* report = nullptr;
  char* csv = nullptr;
  int exit_code = 0;
  const std::string cfg_str = cfg.dump();
  const qt_status st = qt_run(cfg_str.c_str(), &report, &csv, &exit_code);
  if (report) {
    write_or_print(report, json_out);
    qt_string_free(report);
  }
  if (csv) {
    if (!csv_out.empty()) {
      std::ofstream out(csv_out, std::ios::binary);
      out << csv;
    }
    qt_string_free(csv);
  }
  if (st != QT_OK) {
    std::cerr << "error: " << qt_last_error() << "\n";
    return 1;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasitaub: regularizing transforms and Tauberian scaling analysis"};
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path, "re-run from an emitted effective config (JSON file)");

  // kernel check
  auto* kernel_cmd = app.add_subcommand("kernel", "kernel catalog operations");
  auto* check_cmd = kernel_cmd->add_subcommand("check", "non-degeneracy / moment / Taylor report");
  std::string kc_id;
  double kc_tol = 1e-9;
  int kc_rays = 64, kc_dim = -1, kc_order = 8;
  std::vector<std::string> kc_json;
  check_cmd->add_option("catalog_id", kc_id, "kernel catalog id")->required();
  check_cmd->add_option("--tol", kc_tol, "non-degeneracy tolerance");
  check_cmd->add_option("--rays", kc_rays, "angular grid size (dim 2)");
  check_cmd->add_option("--dim", kc_dim, "dimension (default per kernel)");
  check_cmd->add_option("--order", kc_order, "Taylor order");
  check_cmd->add_option("--json", kc_json, "write report JSON to file (default stdout)")->expected(0, 1);

  // transform
  auto* tr_cmd = app.add_subcommand("transform", "compute a transform sheet as CSV");
  std::string tr_field, tr_kernel = "gaussian", tr_site = "infinity", tr_out;
  std::string tr_method = "auto";
  int tr_count = 64, tr_dirs = 16;
  double tr_lambda0 = 1.0, tr_ratio = 1.1892071150027210667;
  std::vector<std::string> tr_json;
  tr_cmd->add_option("--field", tr_field, "field JSON file, inline JSON, or catalog name")->required();
  tr_cmd->add_option("--kernel", tr_kernel, "kernel catalog id");
  tr_cmd->add_option("--site", tr_site, "origin|infinity");
  tr_cmd->add_option("--out", tr_out, "CSV output path")->required();
  tr_cmd->add_option("--method", tr_method, "auto|closed_form|fft");
  tr_cmd->add_option("--count", tr_count, "lambda count");
  tr_cmd->add_option("--directions", tr_dirs, "sphere direction count");
  tr_cmd->add_option("--lambda0", tr_lambda0, "lambda ladder start");
  tr_cmd->add_option("--ratio", tr_ratio, "lambda ladder ratio");
  tr_cmd->add_option("--json", tr_json, "write meta JSON to file (default stdout)")->expected(0, 1);

  // scaling
  auto* sc_cmd = app.add_subcommand("scaling", "full Tauberian scaling report");
  std::string sc_field, sc_kernel = "gaussian", sc_site = "infinity", sc_csv;
  int sc_count = 64, sc_dirs = 16;
  double sc_lambda0 = 1.0, sc_ratio = 1.1892071150027210667, sc_tol = 1e-9;
  std::vector<std::string> sc_json;
  sc_cmd->add_option("--field", sc_field, "field JSON file, inline JSON, or catalog name")->required();
  sc_cmd->add_option("--kernel", sc_kernel, "kernel catalog id");
  sc_cmd->add_option("--site", sc_site, "origin|infinity");
  sc_cmd->add_option("--json", sc_json, "write report JSON to file (default stdout)")->expected(0, 1);
  sc_cmd->add_option("--csv", sc_csv, "write the underlying sheet as diagnostics CSV");
  sc_cmd->add_option("--count", sc_count, "lambda count");
  sc_cmd->add_option("--directions", sc_dirs, "sphere direction count");
  sc_cmd->add_option("--lambda0", sc_lambda0, "lambda ladder start");
  sc_cmd->add_option("--ratio", sc_ratio, "lambda ladder ratio");
  sc_cmd->add_option("--nondeg-tol", sc_tol, "kernel non-degeneracy tolerance");

  // calderon verify
  auto* ca_cmd = app.add_subcommand("calderon", "Calderon identity checks");
  auto* cv_cmd = ca_cmd->add_subcommand("verify", "admissibility, reconstruction and pairing check");
  std::string cv_wavelet = "paper_lizorkin";
  double cv_xmax = 16.0, cv_ymin = 0.00390625, cv_ymax = 256.0;
  int cv_rpo = 16;
  std::vector<std::string> cv_json;
  cv_cmd->add_option("--wavelet", cv_wavelet, "Lizorkin wavelet catalog id");
  cv_cmd->add_option("--x-max", cv_xmax, "plane half-width");
  cv_cmd->add_option("--y-min", cv_ymin, "smallest scale row");
  cv_cmd->add_option("--y-max", cv_ymax, "largest scale row");
  cv_cmd->add_option("--rows-per-octave", cv_rpo, "rows per octave of scale");
  cv_cmd->add_option("--json", cv_json, "write report JSON to file (default stdout)")->expected(0, 1);

  // heat
  auto* he_cmd = app.add_subcommand("heat", "heat-equation stabilization driver");
  std::string he_init = "heaviside";
  int he_dim = 1;
  double he_tmax = 1e7;
  std::vector<std::string> he_json;
  he_cmd->add_option("--init", he_init, "initial data (field JSON file, inline JSON, or name)");
  he_cmd->add_option("--dim", he_dim, "spatial dimension");
  he_cmd->add_option("--tmax", he_tmax, "largest time checked");
  he_cmd->add_option("--json", he_json, "write report JSON to file (default stdout)")->expected(0, 1);

  // littlewood
  auto* li_cmd = app.add_subcommand("littlewood", "Abel summability and Littlewood Tauberian check");
  std::string li_series, li_builtin;
  long li_length = 400000;
  bool li_assume = false;
  double li_tail_const = 1.0;
  std::vector<std::string> li_json;
  li_cmd->add_option("--series", li_series, "series CSV path (columns n, c_n[, c_n imaginary])");
  li_cmd->add_option("--builtin", li_builtin, "builtin series: alt-harmonic|grandi|basel|ones|linear");
  li_cmd->add_option("--length", li_length, "builtin prefix length");
  li_cmd->add_flag("--assume-o-inv-n", li_assume, "declare the O(1/n) tail model for a CSV series");
  li_cmd->add_option("--tail-const", li_tail_const, "tail model constant");
  li_cmd->add_option("--json", li_json, "write report JSON to file (default stdout)")->expected(0, 1);

  CLI11_PARSE(app, argc, argv);

  if (!config_path.empty()) {
    const json stored = json::parse(read_file(config_path));
    const json cfg = stored.contains("config") ? stored["config"] : stored;
    return run_config(cfg, {}, "");
  }

  if (check_cmd->parsed()) {
    json cfg;
    cfg["command"] = "kernel_check";
    cfg["kernel"] = kc_id;
    if (kc_dim > 0) cfg["dim"] = kc_dim;
    cfg["tol"] = kc_tol;
    cfg["rays"] = kc_rays;
    cfg["taylor_order"] = kc_order;
    return run_config(cfg, kc_json, "");
  }
  if (tr_cmd->parsed()) {
    json cfg;
    cfg["command"] = "transform";
    cfg["field"] = field_argument(tr_field);
    cfg["kernel"] = tr_kernel;
    cfg["site"] = tr_site;
    cfg["method"] = tr_method;
    cfg["grid"] = {{"site", tr_site}, {"lambda0", tr_lambda0}, {"ratio", tr_ratio}, {"count", tr_count}, {"directions", tr_dirs}};
    return run_config(cfg, tr_json, tr_out);
  }
  if (sc_cmd->parsed()) {
    json cfg;
    cfg["command"] = "scaling";
    cfg["field"] = field_argument(sc_field);
    cfg["kernel"] = sc_kernel;
    cfg["site"] = sc_site;
    cfg["nondeg_tol"] = sc_tol;
    cfg["grid"] = {{"site", sc_site}, {"lambda0", sc_lambda0}, {"ratio", sc_ratio}, {"count", sc_count}, {"directions", sc_dirs}};
    return run_config(cfg, sc_json, sc_csv);
  }
  if (cv_cmd->parsed()) {
    json cfg;
    cfg["command"] = "calderon_verify";
    cfg["wavelet"] = cv_wavelet;
    cfg["plane"] = {{"x_max", cv_xmax}, {"y_min", cv_ymin}, {"y_max", cv_ymax}, {"rows_per_octave", cv_rpo}};
    return run_config(cfg, cv_json, "");
  }
  if (he_cmd->parsed()) {
    json cfg;
    cfg["command"] = "heat";
    cfg["init"] = field_argument(he_init);
    cfg["dim"] = he_dim;
    cfg["tmax"] = he_tmax;
    return run_config(cfg, he_json, "");
  }
  if (li_cmd->parsed()) {
    json cfg;
    cfg["command"] = "littlewood";
    if (!li_builtin.empty()) {
      cfg["builtin"] = li_builtin;
      cfg["length"] = li_length;
    } else if (!li_series.empty()) {
      cfg["series_csv"] = read_file(li_series);
      cfg["assume_o_inv_n"] = li_assume;
      cfg["tail_const"] = li_tail_const;
    } else {
      std::cerr << "littlewood needs --series or --builtin\n";
      return 1;
    }
    return run_config(cfg, li_json, "");
  }

  std::cout << app.help();
  return 0;
}
