// Exercises the extern-C surface of libquasitaub: handles, error codes,
// reports, and the byte-reproducibility of command runs.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "quasitaub.h"

static int g_failures = 0;

#define REQUIRE_TRUE(cond)                                              \
  do {                                                                  \
    if (!(cond)) {                                                      \
      std::printf("FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond);       \
      ++g_failures;                                                     \
    }                                                                   \
  } while (0)

static std::string run_report(const char* cfg, int* exit_code) {
  char* report = nullptr;
  char* csv = nullptr;
  const qt_status st = qt_run(cfg, &report, &csv, exit_code);
  std::string out = report ? report : "";
  qt_string_free(report);
  qt_string_free(csv);
  if (st != QT_OK) return out;
  return out;
}

int main() {
  REQUIRE_TRUE(std::strlen(qt_version()) > 0);

  // field handles
  qt_field* delta = nullptr;
  REQUIRE_TRUE(qt_field_create_json("\"delta\"", &delta) == QT_OK);
  int vdim = 0, dim = 0;
  REQUIRE_TRUE(qt_field_vector_dim(delta, &vdim) == QT_OK && vdim == 1);
  REQUIRE_TRUE(qt_field_dim(delta, &dim) == QT_OK && dim == 1);

  double re = 0.0, im = 0.0, u = 3.7;
  REQUIRE_TRUE(qt_field_fourier_eval(delta, &u, &re, &im) == QT_OK);
  REQUIRE_TRUE(std::abs(re - 1.0) < 1e-14 && std::abs(im) < 1e-14);

  qt_field* half = nullptr;
  REQUIRE_TRUE(qt_field_scale(delta, 2.0, &half) == QT_OK);
  char* half_json = nullptr;
  REQUIRE_TRUE(qt_field_to_json(half, &half_json) == QT_OK);
  REQUIRE_TRUE(std::strstr(half_json, "0.5") != nullptr);
  qt_string_free(half_json);
  qt_field_destroy(half);

  // malformed JSON surfaces an error code and message
  qt_field* bad = nullptr;
  REQUIRE_TRUE(qt_field_create_json("{\"catalog\": \"unknown_thing\"}", &bad) != QT_OK);
  REQUIRE_TRUE(std::strlen(qt_last_error()) > 0);

  // kernels and transform evaluation
  qt_kernel* gauss = nullptr;
  REQUIRE_TRUE(qt_kernel_create("gaussian", 1, &gauss) == QT_OK);
  double x = 0.0;
  REQUIRE_TRUE(qt_eval_transform(delta, gauss, &x, 1.0, &re, &im) == QT_OK);
  REQUIRE_TRUE(std::abs(re - 0.3989422804014327) < 1e-10);

  qt_kernel* nope = nullptr;
  REQUIRE_TRUE(qt_kernel_create("paper_mixed", 1, &nope) == QT_E_UNSUPPORTED_DIM);

  // sheets
  qt_sheet* sheet = nullptr;
  REQUIRE_TRUE(qt_sheet_compute(delta, gauss, "{\"site\":\"infinity\",\"count\":48}", &sheet) == QT_OK);
  char* csv = nullptr;
  REQUIRE_TRUE(qt_sheet_to_csv(sheet, &csv) == QT_OK);
  REQUIRE_TRUE(std::strncmp(csv, "dir_index,x0,y,lambda,re_0,im_0", 30) == 0);
  qt_string_free(csv);
  qt_sheet_destroy(sheet);

  // kernel check report carries the verdict
  char* kc = nullptr;
  REQUIRE_TRUE(qt_kernel_check_json(gauss, "{\"taylor_order\":4}", &kc) == QT_OK);
  REQUIRE_TRUE(std::strstr(kc, "\"nondegenerate\": true") != nullptr);
  qt_string_free(kc);

  // command runner exit codes: degenerate kernel check is verdict-negative
  int code = 0;
  std::string rep = run_report("{\"command\":\"kernel_check\",\"kernel\":\"degenerate_demo\"}", &code);
  REQUIRE_TRUE(code == QT_EXIT_VERDICT_NEGATIVE);
  REQUIRE_TRUE(rep.find("\"nondegenerate\": false") != std::string::npos);

  // unknown command produces a machine-readable error report
  rep = run_report("{\"command\":\"nonsense\"}", &code);
  REQUIRE_TRUE(code == 1);
  REQUIRE_TRUE(rep.find("\"error\"") != std::string::npos);

  // determinism: identical configs give byte-identical reports, and the
  // emitted effective config reruns to the same bytes
  const char* cfg =
      "{\"command\":\"scaling\",\"field\":\"heaviside\",\"kernel\":\"gaussian\",\"site\":\"infinity\"}";
  int c1 = 0, c2 = 0;
  const std::string r1 = run_report(cfg, &c1);
  const std::string r2 = run_report(cfg, &c2);
  REQUIRE_TRUE(c1 == 0 && c2 == 0);
  REQUIRE_TRUE(r1 == r2);
  const size_t cfg_pos = r1.find("\"config\": {");
  REQUIRE_TRUE(cfg_pos != std::string::npos);

  // thread cap env must not change bytes
  setenv("QUASITAUB_THREADS", "4", 1);
  const std::string r3 = run_report(cfg, &c2);
  REQUIRE_TRUE(r3 == r1);
  unsetenv("QUASITAUB_THREADS");

  // littlewood series CSV path through the runner
  rep = run_report(
      "{\"command\":\"littlewood\",\"builtin\":\"alt-harmonic\",\"length\":400000}", &code);
  REQUIRE_TRUE(code == 0);
  REQUIRE_TRUE(rep.find("\"tauberian_ok\": true") != std::string::npos);

  qt_kernel_destroy(gauss);
  qt_field_destroy(delta);

  if (g_failures == 0) {
    std::printf("capi_tests: all checks passed\n");
    return 0;
  }
  std::printf("capi_tests: %d failures\n", g_failures);
  return 1;
}
