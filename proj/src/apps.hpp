#ifndef QTB_APPS_HPP
#define QTB_APPS_HPP

#include <optional>
#include <string>
#include <vector>

#include "tauber.hpp"
#include "transform.hpp"

namespace qtb {

// Cauchy problem dU/dt = P(d/dx) U with homogeneous symbol P(iu) = -|u|^2
// (heat); the solution is a regularizing transform with the heat-symbol
// kernel at y = t^{1/d}.
struct CauchyProblem {
  int dim = 1;
  int degree = 2;  // homogeneity degree of the symbol
  Field initial;

  Kernel kernel() const { return kernel_create("heat_symbol", dim); }
};

CauchyProblem heat_problem(int dim, Field initial);

CVec solve_cauchy(const CauchyProblem& prob, const Pt& x, double t);

struct DCurveReport {
  bool stabilizes = false;
  std::optional<int> l_hat;
  std::vector<Direction> dirs;       // (x, t^{1/d}) pairs of the sphere sample
  std::vector<LimitEntry> limits;    // U0 table on the sphere
  double k_margin = 0.0;
};

DCurveReport check_d_curve_stabilization(const CauchyProblem& prob, double alpha, const SlowVarySpec& L,
                                         int n_theta = 16, double lambda0 = 1.0,
                                         double ratio = 1.1892071150027210667, int count = 96);

struct TimeStabilizationReport {
  std::string t_desc;
  CVec ell;
  double sup_dev = 0.0;
  double t_min_checked = 0.0, t_max_checked = 0.0;
};

TimeStabilizationReport time_stabilization(const CauchyProblem& prob, double alpha, const SlowVarySpec& L,
                                           const std::vector<double>& x_set, double t_max = 1e7,
                                           int t_count = 33);

// ---------------------------------------------------------------------------

// h(u) = sum c_n delta(u - n) on [0, inf) with an optional O(1/n) tail model.
struct ConeSeries {
  std::vector<cplx> c;
  enum class Tail { None, OInvN };
  Tail tail = Tail::None;
  double tail_const = 1.0;
};

ConeSeries builtin_series(const std::string& name, size_t length = 400000);

// L{h; z} = sum c_n e^{izn}; err_bound (optional out) receives the tail bound.
cplx laplace_eval(const ConeSeries& h, cplx z, double* err_bound = nullptr);

struct OmegaRegion {
  double kappa = 0.0;
  int n_sigma = 12;
  int n_top = 7;
  double sigma_min = 1e-3;
};

struct OmegaBoundReport {
  bool bounded = false;
  double margin = 0.0;
};

OmegaBoundReport omega_bound_check(const ConeSeries& h, const OmegaRegion& region, double alpha,
                                   const SlowVarySpec& L, int k, double lambda_min = 1e-3, int lambda_count = 40);

struct LittlewoodReport {
  std::optional<cplx> abel_limit;
  bool tauberian_ok = false;
  std::optional<cplx> partial_sum_limit;
  std::string verdict;
  bool soundness_violated = false;  // Abel and partial-sum limits disagree despite the hypothesis
};

LittlewoodReport littlewood_analyze(const ConeSeries& h);

}  // namespace qtb

#endif
