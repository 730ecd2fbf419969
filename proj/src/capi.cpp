#include "../include/quasitaub.h"

#include <cstring>
#include <string>

#include "runner.hpp"
#include "transform.hpp"

namespace {

thread_local std::string g_last_error;

qt_status set_error(const qtb::Error& e) {
  g_last_error = e.what();
  return static_cast<qt_status>(e.code());
}

qt_status set_error_generic(const std::exception& e) {
  g_last_error = e.what();
  return QT_E_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct qt_field {
  qtb::Field field;
};
struct qt_kernel {
  qtb::Kernel kernel;
};
struct qt_sheet {
  qtb::TransformSheet sheet;
};

extern "C" {

const char* qt_version(void) { return "1.0.0"; }

const char* qt_last_error(void) { return g_last_error.c_str(); }

void qt_string_free(char* s) { std::free(s); }

qt_status qt_field_create_json(const char* field_json, qt_field** out) {
  if (!field_json || !out) return QT_E_CONFIG;
  try {
    const auto j = qtb::json::parse(field_json);
    auto* f = new qt_field{qtb::field_sum_from_json(j)};
    *out = f;
    return QT_OK;
  } catch (const qtb::Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error_generic(e);
  }
}

void qt_field_destroy(qt_field* f) { delete f; }

qt_status qt_field_vector_dim(const qt_field* f, int* out) {
  if (!f || !out) return QT_E_CONFIG;
  *out = f->field.vector_dim();
  return QT_OK;
}

qt_status qt_field_dim(const qt_field* f, int* out) {
  if (!f || !out) return QT_E_CONFIG;
  *out = f->field.dim();
  return QT_OK;
}

qt_status qt_field_fourier_eval(const qt_field* f, const double* u, double* re, double* im) {
  if (!f || !u || !re || !im) return QT_E_CONFIG;
  try {
    const int dim = f->field.dim();
    qtb::Pt p{u[0], dim > 1 ? u[1] : 0.0};
    qtb::CVec acc = qtb::zeros(f->field.vector_dim());
    for (const auto& term : f->field.terms) {
      const qtb::CVec v = qtb::fourier_eval(term, p);
      for (size_t c = 0; c < acc.size(); ++c) acc[c] += v[c];
    }
    for (size_t c = 0; c < acc.size(); ++c) {
      re[c] = acc[c].real();
      im[c] = acc[c].imag();
    }
    return QT_OK;
  } catch (const qtb::Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error_generic(e);
  }
}

qt_status qt_field_scale(const qt_field* f, double lam, qt_field** out) {
  if (!f || !out) return QT_E_CONFIG;
  try {
    qtb::Field g;
    for (const auto& term : f->field.terms) g.terms.push_back(qtb::scale_field(term, lam));
    *out = new qt_field{std::move(g)};
    return QT_OK;
  } catch (const qtb::Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error_generic(e);
  }
}

qt_status qt_field_to_json(const qt_field* f, char** out_json) {
  if (!f || !out_json) return QT_E_CONFIG;
  try {
    *out_json = dup_string(qtb::field_sum_to_json(f->field).dump());
    return QT_OK;
  } catch (const std::exception& e) {
    return set_error_generic(e);
  }
}

qt_status qt_kernel_create(const char* catalog_id, int dim, qt_kernel** out) {
  if (!catalog_id || !out) return QT_E_CONFIG;
  try {
    *out = new qt_kernel{qtb::kernel_create(catalog_id, dim)};
    return QT_OK;
  } catch (const qtb::Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error_generic(e);
  }
}

void qt_kernel_destroy(qt_kernel* k) { delete k; }

qt_status qt_kernel_check_json(const qt_kernel* k, const char* opts_json, char** out_json) {
  if (!k || !out_json) return QT_E_CONFIG;
  try {
    qtb::json cfg = opts_json ? qtb::json::parse(opts_json) : qtb::json::object();
    cfg["command"] = "kernel_check";
    cfg["kernel"] = qtb::kernel_name(k->kernel.id);
    cfg["dim"] = k->kernel.dim;
    const qtb::RunResult rr = qtb::run_kernel_check(cfg);
    *out_json = dup_string(rr.report.dump(2));
    return QT_OK;
  } catch (const qtb::Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error_generic(e);
  }
}

qt_status qt_eval_transform(const qt_field* f, const qt_kernel* k, const double* x, double y, double* re, double* im) {
  if (!f || !k || !x || !re || !im) return QT_E_CONFIG;
  try {
    const int dim = f->field.dim();
    const qtb::CVec v = qtb::eval_transform(f->field, k->kernel, {x[0], dim > 1 ? x[1] : 0.0}, y);
    for (size_t c = 0; c < v.size(); ++c) {
      re[c] = v[c].real();
      im[c] = v[c].imag();
    }
    return QT_OK;
  } catch (const qtb::Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error_generic(e);
  }
}

qt_status qt_sheet_compute(const qt_field* f, const qt_kernel* k, const char* grid_json, qt_sheet** out) {
  if (!f || !k || !out) return QT_E_CONFIG;
  try {
    const qtb::json gj = grid_json ? qtb::json::parse(grid_json) : qtb::json::object();
    const qtb::GridConfig gc = qtb::grid_config_from_json(gj, f->field.dim());
    const qtb::ScaleGrid grid = qtb::build_grid(gc, f->field.dim());
    *out = new qt_sheet{qtb::compute_sheet(f->field, k->kernel, grid)};
    return QT_OK;
  } catch (const qtb::Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error_generic(e);
  }
}

void qt_sheet_destroy(qt_sheet* s) { delete s; }

qt_status qt_sheet_to_csv(const qt_sheet* s, char** out_csv) {
  if (!s || !out_csv) return QT_E_CONFIG;
  try {
    *out_csv = dup_string(qtb::sheet_to_csv(s->sheet));
    return QT_OK;
  } catch (const std::exception& e) {
    return set_error_generic(e);
  }
}

qt_status qt_run(const char* config_json, char** out_report_json, char** out_csv, int* exit_code) {
  if (!config_json || !out_report_json) return QT_E_CONFIG;
  try {
    const qtb::RunResult rr = qtb::run_command(qtb::json::parse(config_json));
    *out_report_json = dup_string(rr.report.dump(2));
    if (out_csv) *out_csv = rr.csv.empty() ? nullptr : dup_string(rr.csv);
    if (exit_code) *exit_code = rr.exit_code;
    return QT_OK;
  } catch (const qtb::Error& e) {
    *out_report_json = dup_string(qtb::error_report(e).dump(2));
    if (out_csv) *out_csv = nullptr;
    if (exit_code) *exit_code = 1;
    return set_error(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    qtb::json j;
    j["schema_version"] = qtb::kSchemaVersion;
    j["error"] = {{"code", QT_E_INTERNAL}, {"name", "Internal"}, {"message", e.what()}};
    *out_report_json = dup_string(j.dump(2));
    if (out_csv) *out_csv = nullptr;
    if (exit_code) *exit_code = 1;
    return QT_E_INTERNAL;
  }
}

}  // extern "C"
