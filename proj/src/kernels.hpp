#ifndef QTB_KERNELS_HPP
#define QTB_KERNELS_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "fields.hpp"

namespace qtb {

enum class KernelId {
  Gaussian,
  HeatSymbol,
  PaperLizorkin,
  PaperMixed,
  DegenerateDemo,
  ConeExponential,
  SampledFourier,
  Composed,
};

const char* kernel_name(KernelId id);

struct Kernel {
  int dim = 1;
  KernelId id = KernelId::Gaussian;
  cplx amplitude{1.0, 0.0};
  bool conj_reflect = false;            // Fourier data replaced by conj
  bool reflect = false;                 // Fourier argument negated first
  double dilation = 1.0;                // Fourier argument scaled by this factor
  std::array<int, 2> monomial{0, 0};    // Fourier data multiplied by u0^m0 u1^m1
  std::shared_ptr<const Kernel> lhs, rhs;  // Composed: conj(lhs^) * rhs^
  std::optional<FourierGrid> grid;         // SampledFourier
  std::vector<cplx> ray_norm;              // per-ray divisor (reconstruction wavelets)

  int ray_count = 64;                      // angular grid size for dim 2
  double r_min = 1e-3, r_max = 1e3;
  int r_pts = 200;

  std::string signature() const;
  bool is_lizorkin() const;  // structural: Fourier data flat at the origin
};

Kernel kernel_create(const std::string& name, int dim);
Kernel conj_reflected(Kernel k);
Kernel reflected(Kernel k);
Kernel dilated(Kernel k, double factor);
Kernel with_amplitude(Kernel k, cplx amp);
Kernel poly_multiplied(Kernel k, int m0, int m1 = 0);

cplx kernel_fourier(const Kernel& k, const Pt& u);

// Ray directions of the kernel's angular grid.
std::vector<Pt> ray_grid(const Kernel& k);

// |phi^| peak and the radius beyond which |phi^| < eps * peak.
double kernel_spectral_radius(const Kernel& k, double eps = 1e-9);
double kernel_spectral_peak(const Kernel& k);

// Physical-space evaluation (inverse transform); closed form for the Gaussian
// family, dense cached inverse FFT otherwise (dim 1 only for the cached path).
cplx kernel_phys(const Kernel& k, const Pt& t);
// Cumulative integral of phi up to w (dim 1).
cplx kernel_cdf(const Kernel& k, double w);
// Radius beyond which |phi| is negligible.
double kernel_phys_radius(const Kernel& k);
// Radius beyond which |phi| < eps * max|phi| (dim 1).
double kernel_phys_radius_eps(const Kernel& k, double eps);
// Two-sided tail mass: integral of |phi| over |t| >= s (dim 1).
double kernel_abs_tail(const Kernel& k, double s);
// Total mass: integral of phi = phi^(0).
cplx kernel_mass(const Kernel& k);
// Whether physical-space evaluation is cheap (closed form, or the dim-1 cache).
bool kernel_phys_cheap(const Kernel& k);

// Physical-space evaluator with the profile/closed form resolved once;
// cheap to call in quadrature loops.
class KernelPhys {
 public:
  explicit KernelPhys(const Kernel& k);
  cplx operator()(double t) const;
  cplx cdf(double w) const;
  double radius() const;
  double radius_eps(double eps) const;
  double abs_tail(double s) const;

 private:
  bool closed_ = false;
  double s2_ = 1.0;
  cplx amp_{1.0, 0.0};
  std::shared_ptr<const void> prof_;
};

struct NondegReport {
  bool verdict = false;
  Pt worst_ray{1.0, 0.0};
  double worst_max = 0.0;
};
NondegReport check_nondegenerate(const Kernel& k, double tol = 1e-9);

// Homogeneous Taylor terms of phi^ at the origin, P_q(u) = sum coef_m u^m.
struct TaylorTerms {
  int dim = 1;
  int max_order = 0;
  std::map<std::array<int, 2>, cplx> coef;  // multi-index -> coefficient
  double worst_fd_error = 0.0;
  // P_q evaluated at direction omega (coefficient of r^q along the ray).
  cplx ray_coefficient(int q, const Pt& omega) const;
};
TaylorTerms taylor_terms(const Kernel& k, int order);

struct StrongNondegReport {
  bool verdict = false;
  std::optional<int> witness_order;
};
StrongNondegReport check_strongly_nondegenerate(const Kernel& k, int order, double tol = 1e-9);

// Moment table: m -> integral of t^m phi(t) dt, |m| <= max_order.
std::map<std::array<int, 2>, cplx> moments(const Kernel& k, int max_order);

Kernel compose_lizorkin(const Kernel& phi, const Kernel& psi1);

}  // namespace qtb

#endif
