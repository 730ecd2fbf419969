/* quasitaub C API: regularizing transforms, Tauberian scaling analysis,
 * Calderon reconstruction, and the heat/Laplace application drivers.
 *
 * All functions return qt_status (QT_OK on success); on failure the
 * thread-local message from qt_last_error() describes what went wrong.
 * Strings returned through char** are owned by the caller and must be
 * released with qt_string_free(). Handles are opaque and freed with their
 * matching *_destroy function.
 */
#ifndef QUASITAUB_H
#define QUASITAUB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int qt_status;

#define QT_OK 0
#define QT_E_CONFIG 1
#define QT_E_OUT_OF_GRID 2
#define QT_E_UNSUPPORTED_DIM 3
#define QT_E_GRID_TOO_COARSE 4
#define QT_E_NUMERICALLY_UNSTABLE 5
#define QT_E_DIM_MISMATCH 6
#define QT_E_GRID_ALIASING 7
#define QT_E_EXPONENT_RANGE 8
#define QT_E_NON_INTEGRABLE 9
#define QT_E_DEGENERATE 10
#define QT_E_TRUNCATION_DOMINATED 11
#define QT_E_ZERO_ADMISSIBILITY 12
#define QT_E_ALL_ZERO_SHEET 13
#define QT_E_NO_STABLE_SLOPE 14
#define QT_E_INSUFFICIENT_RANGE 15
#define QT_E_SLOW_DECAY 16
#define QT_E_NOT_STABILIZED 17
#define QT_E_ILL_CONDITIONED 18
#define QT_E_DEGENERATE_KERNEL 19
#define QT_E_PRECONDITION 20
#define QT_E_INTERNAL 21

/* verdict-negative outcome carried by report JSON; exposed for CLI exit codes */
#define QT_EXIT_VERDICT_NEGATIVE 2

typedef struct qt_field qt_field;
typedef struct qt_kernel qt_kernel;
typedef struct qt_sheet qt_sheet;

const char* qt_version(void);
const char* qt_last_error(void);
void qt_string_free(char* s);

/* fields: JSON as documented in docs/fieldspec.md (single spec, sum, or name) */
qt_status qt_field_create_json(const char* field_json, qt_field** out);
void qt_field_destroy(qt_field* f);
qt_status qt_field_vector_dim(const qt_field* f, int* out);
qt_status qt_field_dim(const qt_field* f, int* out);
/* function part of the Fourier transform at u (length = dim) */
qt_status qt_field_fourier_eval(const qt_field* f, const double* u, double* re, double* im);
qt_status qt_field_scale(const qt_field* f, double lam, qt_field** out);
qt_status qt_field_to_json(const qt_field* f, char** out_json);

/* kernels */
qt_status qt_kernel_create(const char* catalog_id, int dim, qt_kernel** out);
void qt_kernel_destroy(qt_kernel* k);
qt_status qt_kernel_check_json(const qt_kernel* k, const char* opts_json, char** out_json);

/* transform evaluation: x has length dim; re/im have length vector_dim */
qt_status qt_eval_transform(const qt_field* f, const qt_kernel* k, const double* x, double y, double* re, double* im);

/* sheets: grid_json = {"site": "...", "lambda0": .., "ratio": .., "count": .., "directions": ..} */
qt_status qt_sheet_compute(const qt_field* f, const qt_kernel* k, const char* grid_json, qt_sheet** out);
void qt_sheet_destroy(qt_sheet* s);
qt_status qt_sheet_to_csv(const qt_sheet* s, char** out_csv);

/* command runners; config schemas in docs/formats.md. exit_code receives
 * 0 (ok) or QT_EXIT_VERDICT_NEGATIVE; csv output may be NULL if unwanted. */
qt_status qt_run(const char* config_json, char** out_report_json, char** out_csv, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* QUASITAUB_H */
