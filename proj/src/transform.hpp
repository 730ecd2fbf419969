#ifndef QTB_TRANSFORM_HPP
#define QTB_TRANSFORM_HPP

#include <string>
#include <vector>

#include "common.hpp"
#include "fields.hpp"
#include "kernels.hpp"

namespace qtb {

struct Direction {
  Pt x{0.0, 0.0};
  double y = 1.0;
};

// Scale grid: directions paired with a geometric lambda ladder stored in limit
// order (index grows toward the site's limit).
struct ScaleGrid {
  int dim = 1;
  Site site = Site::Infinity;
  std::vector<double> lambdas;
  std::vector<Direction> dirs;

  double ratio() const { return lambdas.size() > 1 ? lambdas[1] / lambdas[0] : 1.0; }
  // indices of the tail covering `decades` decades toward the limit
  std::vector<size_t> tail_indices(double decades) const;
};

void validate(const ScaleGrid& g);

// Sphere grid |x|^2 + y^2 = 1 with Chebyshev-spaced polar angles plus the pole.
ScaleGrid sphere_grid(int dim, Site site, int n_theta = 16, int n_phi = 8, double lambda0 = 1.0,
                      double ratio = 1.1892071150027210667, int count = 64);

// Boundary of Omega^kappa = {|x| <= sigma^kappa, 0 < sigma <= 1} (dim 1).
ScaleGrid omega_boundary_grid(double kappa, Site site, int n_sigma = 24, int n_top = 9, double sigma_min = 1e-3,
                              double lambda0 = 1.0, double ratio = 1.1892071150027210667, int count = 64);

// Sphere in (x, t) for d-curve scaling U(lambda x, lambda^d t): the stored
// direction carries y = t^(1/d).
ScaleGrid dcurve_grid(int dim, int degree, int n_theta = 16, double lambda0 = 1.0,
                      double ratio = 1.1892071150027210667, int count = 64);

enum class Method { Auto, ClosedForm, FFT };
const char* method_name(Method m);

struct TransformSheet {
  ScaleGrid grid;
  std::string field_sig, kernel_sig;
  Method method = Method::Auto;
  int vector_dim = 1;
  std::vector<CVec> values;  // [dir * n_lambda + j]

  const CVec& at(size_t d, size_t j) const { return values[d * grid.lambdas.size() + j]; }
  CVec& at(size_t d, size_t j) { return values[d * grid.lambdas.size() + j]; }
};

CVec eval_transform(const Field& f, const Kernel& k, const Pt& x, double y, Method method = Method::Auto);
TransformSheet compute_sheet(const Field& f, const Kernel& k, const ScaleGrid& grid, Method method = Method::Auto);
TransformSheet wavelet_transform(const Field& f, const Kernel& psi, const ScaleGrid& grid);

// Rectangular (x, y) grid, y log-spaced; dim 1.
struct BoxGrid {
  std::vector<double> xs;
  std::vector<double> ys;
};
BoxGrid default_box_grid(double x_max = 16.0, int nx = 65, double y_min = 0.00390625, double y_max = 256.0,
                         int ny = 129);

struct BoxSheet {
  BoxGrid grid;
  std::string field_sig, kernel_sig;
  int vector_dim = 1;
  std::vector<CVec> values;  // [ix * ny + iy]
  const CVec& at(size_t ix, size_t iy) const { return values[ix * grid.ys.size() + iy]; }
  CVec& at(size_t ix, size_t iy) { return values[ix * grid.ys.size() + iy]; }
};

BoxSheet compute_box_sheet(const Field& f, const Kernel& k, const BoxGrid& grid, Method method = Method::Auto);

struct GrowthFit {
  int k = 0;
  int l = 0;
  double C = 0.0;
};
// Smallest (k, l), k-major, such that ||M(x,y)|| <= C (1/y + y)^k (1 + |x|)^l
// holds stably on the grid (no growth toward any edge).
GrowthFit fit_global_growth(const BoxSheet& sheet);

std::string sheet_to_csv(const TransformSheet& sheet);

}  // namespace qtb

#endif
