#ifndef QTB_TAUBER_HPP
#define QTB_TAUBER_HPP

#include <optional>
#include <string>
#include <vector>

#include "transform.hpp"

namespace qtb {

struct AlphaFit {
  double alpha_hat = 0.0;
  SlowVarySpec slow_vary;
  double residual = 0.0;
  std::vector<double> decade_slopes;
  int ref_direction = 0;
};

// Slope of log||M|| against log(lambda) over the last two decades, then a
// penalized refit across the slowly-varying families.
AlphaFit estimate_alpha(const TransformSheet& sheet, int ref_direction = -1);

struct KFit {
  std::optional<int> k_hat;
  double margin = 0.0;  // running-max slope at the accepted k
};
KFit find_tauberian_k(const TransformSheet& sheet, double alpha, const SlowVarySpec& L);

struct LimitEntry {
  bool converged = false;
  CVec value;
  double deviation = 0.0;
};
std::vector<LimitEntry> detect_limits(const TransformSheet& sheet, double alpha, const SlowVarySpec& L);

struct CriticalFit {
  int p = 0;
  std::vector<CVec> g_part;     // per direction
  std::vector<CVec> log_coeff;  // per direction
  double residual = 0.0;
};
CriticalFit fit_critical_log(const TransformSheet& sheet, int p);

struct AahReport {
  CVec v_hat;
  bool is_aah = false;
  bool is_ahb = false;
};
AahReport test_associate_homogeneous(const std::vector<double>& lambdas, const std::vector<CVec>& samples,
                                     const SlowVarySpec& L, Site site);

// Max absolute coefficient of P_q(d/dt) applied to the polynomial, q <= order.
double verify_annihilation(const Kernel& k, const FieldSpec& poly, int order);

struct ScalingReport {
  std::string field_sig, kernel_sig;
  Site site = Site::Infinity;
  double alpha_hat = 0.0;
  SlowVarySpec slow_vary;
  std::optional<int> k_hat;
  double k_margin = 0.0;
  std::vector<LimitEntry> limits;
  std::optional<CriticalFit> critical;
  double alpha_residual = 0.0;
  std::vector<double> decade_slopes;
  double max_cauchy_deviation = 0.0;
  double homogeneity_deviation = 0.0;
  int ref_direction = 0;
  std::vector<std::string> flags;
};

ScalingReport full_report(const Field& f, const Kernel& k, const ScaleGrid& grid, double nondeg_tol = 1e-9);

}  // namespace qtb

#endif
