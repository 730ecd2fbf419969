#include "transform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include "numerics.hpp"

namespace qtb {

std::vector<size_t> ScaleGrid::tail_indices(double decades) const {
  std::vector<size_t> idx;
  const double last = lambdas.back();
  for (size_t j = 0; j < lambdas.size(); ++j)
    if (std::abs(std::log10(lambdas[j] / last)) <= decades + 1e-12) idx.push_back(j);
  return idx;
}

void validate(const ScaleGrid& g) {
  if (g.dim != 1 && g.dim != 2) fail(Err::UnsupportedDim, "grid dim must be 1 or 2");
  if (g.lambdas.size() < 16) fail(Err::Config, "scale grid needs at least 16 lambda values");
  double lo = g.lambdas.front(), hi = g.lambdas.front();
  for (size_t j = 1; j < g.lambdas.size(); ++j) {
    const bool inc = g.lambdas[j] > g.lambdas[j - 1];
    const bool expect_inc = g.site == Site::Infinity;
    if (inc != expect_inc) fail(Err::Config, "lambda ladder must be monotone toward the site limit");
    lo = std::min(lo, g.lambdas[j]);
    hi = std::max(hi, g.lambdas[j]);
  }
  if (std::log10(hi / lo) < 3.0 - 1e-9) fail(Err::Config, "lambda ladder must span at least 3 decades");
  if (g.dirs.empty()) fail(Err::Config, "grid needs directions");
  for (const auto& d : g.dirs)
    if (!(d.y > 0.0)) fail(Err::Config, "directions must have y > 0");
}

namespace {

std::vector<double> lambda_ladder(Site site, double lambda0, double ratio, int count) {
  if (!(ratio > 1.0)) fail(Err::Config, "lambda ratio must exceed 1");
  std::vector<double> l(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j)
    l[static_cast<size_t>(j)] = site == Site::Infinity ? lambda0 * std::pow(ratio, j) : lambda0 * std::pow(ratio, -j);
  return l;
}

std::vector<double> chebyshev_nodes(int m) {
  std::vector<double> xi(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) xi[static_cast<size_t>(i)] = std::cos(kPi * (2.0 * i + 1.0) / (2.0 * m));
  return xi;
}

}  // namespace

ScaleGrid sphere_grid(int dim, Site site, int n_theta, int n_phi, double lambda0, double ratio, int count) {
  ScaleGrid g;
  g.dim = dim;
  g.site = site;
  g.lambdas = lambda_ladder(site, lambda0, ratio, count);
  if (dim == 1) {
    for (double xi : chebyshev_nodes(n_theta)) {
      const double th = 0.5 * kPi * xi;
      g.dirs.push_back({{std::sin(th), 0.0}, std::cos(th)});
    }
    g.dirs.push_back({{0.0, 0.0}, 1.0});
  } else {
    for (double xi : chebyshev_nodes(n_theta)) {
      const double th = 0.25 * kPi * (1.0 + xi);
      for (int a = 0; a < n_phi; ++a) {
        const double ph = kTwoPi * a / n_phi;
        g.dirs.push_back({{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph)}, std::cos(th)});
      }
    }
    g.dirs.push_back({{0.0, 0.0}, 1.0});
  }
  validate(g);
  return g;
}

ScaleGrid omega_boundary_grid(double kappa, Site site, int n_sigma, int n_top, double sigma_min, double lambda0,
                              double ratio, int count) {
  if (kappa < 0.0 || kappa >= 1.0) fail(Err::Config, "kappa must lie in [0, 1)");
  ScaleGrid g;
  g.dim = 1;
  g.site = site;
  g.lambdas = lambda_ladder(site, lambda0, ratio, count);
  for (double s : geomspace(sigma_min, 1.0, n_sigma)) {
    const double x = std::pow(s, kappa);
    g.dirs.push_back({{x, 0.0}, s});
    g.dirs.push_back({{-x, 0.0}, s});
  }
  for (double x : linspace(-1.0, 1.0, n_top)) g.dirs.push_back({{x, 0.0}, 1.0});
  validate(g);
  return g;
}

ScaleGrid dcurve_grid(int dim, int degree, int n_theta, double lambda0, double ratio, int count) {
  if (degree < 1) fail(Err::Config, "degree must be >= 1");
  ScaleGrid g;
  g.dim = dim;
  g.site = Site::Infinity;
  g.lambdas = lambda_ladder(Site::Infinity, lambda0, ratio, count);
  if (dim == 1) {
    for (double xi : chebyshev_nodes(n_theta)) {
      const double th = 0.5 * kPi * xi;
      g.dirs.push_back({{std::sin(th), 0.0}, std::pow(std::cos(th), 1.0 / degree)});
    }
    g.dirs.push_back({{0.0, 0.0}, 1.0});
  } else {
    for (double xi : chebyshev_nodes(n_theta)) {
      const double th = 0.25 * kPi * (1.0 + xi);
      g.dirs.push_back({{std::sin(th), 0.0}, std::pow(std::cos(th), 1.0 / degree)});
      g.dirs.push_back({{-std::sin(th), 0.0}, std::pow(std::cos(th), 1.0 / degree)});
    }
    g.dirs.push_back({{0.0, 0.0}, 1.0});
  }
  validate(g);
  return g;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::ClosedForm: return "closed_form";
    case Method::FFT: return "fft";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// closed-form / quadrature path for one catalog term

namespace {

struct KernelScaled {
  KernelScaled(const Kernel& kk, double yy, int d)
      : k(kk), y(yy), dim(d), fast(d == 1 ? std::optional<KernelPhys>(KernelPhys(kk)) : std::nullopt) {}
  const Kernel& k;
  double y;
  int dim;
  std::optional<KernelPhys> fast;
  cplx operator()(const Pt& z) const {
    if (fast) return (*fast)(z[0] / y) / y;
    return std::pow(y, -dim) * kernel_phys(k, {z[0] / y, z[1] / y});
  }
};

std::mutex g_mom_mutex;
std::map<std::string, std::map<std::array<int, 2>, cplx>> g_mom_cache;

const std::map<std::array<int, 2>, cplx>& kernel_moments_cached(const Kernel& k, int order) {
  std::lock_guard<std::mutex> lock(g_mom_mutex);
  const std::string key = k.signature() + ":ord" + std::to_string(order);
  auto it = g_mom_cache.find(key);
  if (it == g_mom_cache.end()) it = g_mom_cache.emplace(key, moments(k, order)).first;
  return it->second;
}

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return v;
}

cplx closed_polynomial(const FieldSpec& f, const Kernel& k, const Pt& x, double y) {
  if (k.is_lizorkin()) return 0.0;  // vanishing moments annihilate polynomials exactly
  int maxdeg = 0;
  for (const auto& t : f.poly) maxdeg = std::max(maxdeg, t.m[0] + t.m[1]);
  const auto& mom = kernel_moments_cached(k, maxdeg);
  KahanSum acc;
  for (const auto& term : f.poly) {
    for (int j0 = 0; j0 <= term.m[0]; ++j0) {
      for (int j1 = 0; j1 <= (f.dim > 1 ? term.m[1] : 0); ++j1) {
        const int jj = j0 + j1;
        auto mit = mom.find({j0, j1});
        if (mit == mom.end()) continue;
        const double w = binom(term.m[0], j0) * binom(term.m[1], j1);
        const cplx xpow = std::pow(x[0], term.m[0] - j0) * (f.dim > 1 ? std::pow(x[1], term.m[1] - j1) : 1.0);
        acc.add(term.c * w * xpow * std::pow(-y, jj) * mit->second);
      }
    }
  }
  return acc.value();
}

cplx closed_hom_1d(const FieldSpec& f, const Kernel& k, double x, double y, bool both_branches) {
  const double W = kernel_phys_radius(k) * 1.1;
  const KernelScaled phi{k, y, 1};
  auto branch = [&](double sign) -> cplx {
    // integral over t >= 0 of t^a phi_y(x - sign*t) chi(t)
    double lo = sign > 0 ? x - W * y : -x - W * y;
    double hi = sign > 0 ? x + W * y : -x + W * y;
    lo = std::max(lo, 0.0);
    if (f.window) hi = std::min(hi, 2.0 * f.window->radius);
    if (hi <= lo) return {0.0, 0.0};
    auto g = [&](double t) {
      cplx v = phi({x - sign * t, 0.0});
      if (f.window) v *= f.window->chi(t);
      return v;
    };
    return integrate_power_weight(g, f.a, lo, hi, 1e-11);
  };
  cplx out = branch(1.0);
  if (both_branches) out += branch(-1.0);
  return out;
}

cplx closed_hom_2d(const FieldSpec& f, const Kernel& k, const Pt& x, double y) {
  if (!kernel_phys_cheap(k)) fail(Err::Precondition, "dim-2 homogeneous transforms need a closed-form kernel");
  const double W = kernel_phys_radius(k) * 1.1;
  const double r0 = norm(x, 2);
  const double lo = std::max(0.0, r0 - W * y);
  double hi = r0 + W * y;
  if (f.window) hi = std::min(hi, 2.0 * f.window->radius);
  if (hi <= lo) return {0.0, 0.0};
  const int n_ang = 64;
  const KernelScaled phi{k, y, 2};
  auto ring = [&](double rho) {
    KahanSum s;
    for (int i = 0; i < n_ang; ++i) {
      const double th = kTwoPi * i / n_ang;
      s.add(phi({x[0] - rho * std::cos(th), x[1] - rho * std::sin(th)}));
    }
    cplx v = s.value() * (kTwoPi / n_ang);
    if (f.window) v *= f.window->chi(rho);
    return v;
  };
  return integrate_power_weight(ring, f.a + 1.0, lo, hi, 1e-10);
}

cplx closed_term(const FieldSpec& f, const Kernel& k, const Pt& x, double y) {
  const int n = f.dim;
  const KernelScaled phi{k, y, n};
  switch (f.id) {
    case FieldId::Delta: return phi(x);
    case FieldId::DeltaComb: {
      KahanSum s;
      for (const auto& at : f.atoms) {
        const double w = f.window ? f.window->chi(norm(at.t, n)) : 1.0;
        if (w == 0.0) continue;
        s.add(w * at.c * phi({x[0] - at.t[0], x[1] - at.t[1]}));
      }
      return s.value();
    }
    case FieldId::Heaviside: {
      if (!f.window) return kernel_cdf(k, x[0] / y);
      const double W = kernel_phys_radius(k) * 1.1;
      const double lo = std::max(0.0, x[0] - W * y);
      const double hi = std::min(2.0 * f.window->radius, x[0] + W * y);
      if (hi <= lo) return {0.0, 0.0};
      return integrate_gk([&](double t) { return f.window->chi(t) * phi({x[0] - t, 0.0}); }, lo, hi, 1e-11);
    }
    case FieldId::Constant: {
      if (!f.window) return kernel_mass(k);
      if (n != 1) fail(Err::Precondition, "windowed constant requires dim 1");
      const double W = kernel_phys_radius(k) * 1.1;
      const double lo = std::max(-2.0 * f.window->radius, x[0] - W * y);
      const double hi = std::min(2.0 * f.window->radius, x[0] + W * y);
      if (hi <= lo) return {0.0, 0.0};
      return integrate_gk([&](double t) { return f.window->chi(std::abs(t)) * phi({x[0] - t, 0.0}); }, lo, hi, 1e-11);
    }
    case FieldId::Polynomial: {
      if (!f.window) return closed_polynomial(f, k, x, y);
      if (n != 1) fail(Err::Precondition, "windowed polynomial requires dim 1");
      const double W = kernel_phys_radius(k) * 1.1;
      const double lo = std::max(-2.0 * f.window->radius, x[0] - W * y);
      const double hi = std::min(2.0 * f.window->radius, x[0] + W * y);
      if (hi <= lo) return {0.0, 0.0};
      auto poly_at = [&](double t) {
        cplx v(0.0, 0.0);
        for (const auto& term : f.poly) v += term.c * std::pow(t, term.m[0]);
        return v;
      };
      return integrate_gk([&](double t) { return poly_at(t) * f.window->chi(std::abs(t)) * phi({x[0] - t, 0.0}); },
                          lo, hi, 1e-11);
    }
    case FieldId::HomogeneousAbs:
    case FieldId::HomogeneousPlus: {
      const bool both = f.id == FieldId::HomogeneousAbs;
      if (!f.window) {
        // exact homogeneity: reduce to the unit sphere for stable quadrature
        const double r = n == 1 ? std::hypot(x[0], y) : std::sqrt(x[0] * x[0] + x[1] * x[1] + y * y);
        const Pt xs{x[0] / r, x[1] / r};
        const double ys = y / r;
        const cplx base = n == 1 ? closed_hom_1d(f, k, xs[0], ys, both) : closed_hom_2d(f, k, xs, ys);
        return std::pow(r, f.a) * base;
      }
      if (n != 1) fail(Err::Precondition, "windowed homogeneous transforms require dim 1");
      return closed_hom_1d(f, k, x[0], y, both);
    }
    case FieldId::LogHeaviside: {
      const double W = kernel_phys_radius(k) * 1.1;
      double lo = std::max(f.shift, x[0] - W * y);
      double hi = x[0] + W * y;
      if (f.window) hi = std::min(hi, 2.0 * f.window->radius);
      if (hi <= lo) return {0.0, 0.0};
      auto g = [&](double t) {
        cplx v = (f.offset + std::log(t)) * phi({x[0] - t, 0.0});
        if (f.window) v *= f.window->chi(t);
        return v;
      };
      return integrate_ts(g, lo, hi, 1e-11);
    }
    case FieldId::SampledFourier: fail(Err::Precondition, "sampled fields use the fft path");
  }
  return {0.0, 0.0};
}

bool closed_path_supported(const FieldSpec& f, const Kernel& k) {
  if (f.id == FieldId::SampledFourier) return false;
  if (f.dim == 2) {
    switch (f.id) {
      case FieldId::Delta:
      case FieldId::DeltaComb: return kernel_phys_cheap(k);
      case FieldId::Constant: return !f.window;
      case FieldId::Polynomial: return !f.window;
      case FieldId::HomogeneousAbs: return kernel_phys_cheap(k) && !f.window;
      default: return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// frequency-quadrature path

std::mutex g_spec_mutex;
std::map<std::string, std::pair<double, double>> g_spec_cache;  // sig -> {radius, peak}

std::pair<double, double> spectral_info(const Kernel& k) {
  std::lock_guard<std::mutex> lock(g_spec_mutex);
  auto it = g_spec_cache.find(k.signature());
  if (it == g_spec_cache.end())
    it = g_spec_cache.emplace(k.signature(), std::make_pair(kernel_spectral_radius(k, 1e-10), kernel_spectral_peak(k)))
             .first;
  return it->second;
}

cplx fft_term(const FieldSpec& f, const Kernel& k, const Pt& x, double y) {
  const auto [u_decay, peak] = spectral_info(k);
  const int n = f.dim;
  double osc = std::abs(x[0]) + (n > 1 ? std::abs(x[1]) : 0.0);
  if (f.id == FieldId::DeltaComb)
    for (const auto& at : f.atoms) osc = std::max(osc, std::abs(x[0] - at.t[0]) + (n > 1 ? std::abs(x[1] - at.t[1]) : 0.0));
  if (f.id == FieldId::LogHeaviside) osc += f.shift;

  double U = u_decay / y;
  if (f.id == FieldId::SampledFourier) {
    const double Ug = f.grid->u_max;
    if (Ug < U && std::abs(kernel_fourier(k, {y * Ug, 0.0})) > 1e-8 * peak)
      fail(Err::GridAliasing, "kernel has not decayed at the sampled grid edge");
    U = std::min(U, Ug);
  }
  double du = std::min(kPi / (4.0 * (osc + 1.0)), u_decay / (128.0 * y));
  if (f.id == FieldId::SampledFourier) du = std::min(du, f.grid->du());

  const cplx atom = spectral_delta_atom(f) * kernel_fourier(k, {0.0, 0.0});

  if (n == 1) {
    auto half = static_cast<long>(std::ceil(U / du));
    if (half > (1L << 21)) fail(Err::Config, "frequency grid too large for the fft path");
    KahanSum s;
    for (long i = 0; i < half; ++i) {
      const double u = (static_cast<double>(i) + 0.5) * du;
      cplx term(0.0, 0.0);
      // +u and -u paired so principal-value parts cancel analytically
      term += fourier_shape(f, {u, 0.0}) * kernel_fourier(k, {y * u, 0.0}) * std::exp(cplx(0.0, x[0] * u));
      term += fourier_shape(f, {-u, 0.0}) * kernel_fourier(k, {-y * u, 0.0}) * std::exp(cplx(0.0, -x[0] * u));
      s.add(term);
    }
    return (s.value() * du + atom) / kTwoPi;
  }

  auto side = static_cast<long>(std::ceil(2.0 * U / du));
  if (side > 2048) side = 2048;
  const double step = 2.0 * U / static_cast<double>(side);
  KahanSum s;
  for (long i = 0; i < side; ++i) {
    const double u0 = -U + (static_cast<double>(i) + 0.5) * step;
    for (long j = 0; j < side; ++j) {
      const double u1 = -U + (static_cast<double>(j) + 0.5) * step;
      s.add(fourier_shape(f, {u0, u1}) * kernel_fourier(k, {y * u0, y * u1}) *
            std::exp(cplx(0.0, x[0] * u0 + x[1] * u1)));
    }
  }
  return (s.value() * step * step + atom) / (kTwoPi * kTwoPi);
}

cplx eval_term(const FieldSpec& f, const Kernel& k, const Pt& x, double y, Method method) {
  if (f.dim != k.dim) fail(Err::DimMismatch, "field and kernel dims disagree");
  if (!(y > 0.0)) fail(Err::Precondition, "y must be positive");
  switch (method) {
    case Method::ClosedForm:
      if (!closed_path_supported(f, k)) fail(Err::Precondition, "no closed-form path for this entry");
      return closed_term(f, k, x, y);
    case Method::FFT:
      if (!fft_path_supported(f)) fail(Err::Precondition, "no fft path for this entry");
      return fft_term(f, k, x, y);
    case Method::Auto:
      if (closed_path_supported(f, k)) return closed_term(f, k, x, y);
      if (fft_path_supported(f)) return fft_term(f, k, x, y);
      fail(Err::Precondition, "no transform path for this entry");
  }
  return {0.0, 0.0};
}

}  // namespace

CVec eval_transform(const Field& f, const Kernel& k, const Pt& x, double y, Method method) {
  validate(f);
  CVec out = zeros(f.vector_dim());
  for (const auto& term : f.terms) {
    const cplx shape_val = eval_term(term, k, x, y, method);
    for (int c = 0; c < term.vector_dim; ++c) out[static_cast<size_t>(c)] += term.amplitude[static_cast<size_t>(c)] * shape_val;
  }
  return out;
}

TransformSheet compute_sheet(const Field& f, const Kernel& k, const ScaleGrid& grid, Method method) {
  validate(grid);
  validate(f);
  if (f.dim() != k.dim || f.dim() != grid.dim) fail(Err::DimMismatch, "field/kernel/grid dims disagree");
  TransformSheet sheet;
  sheet.grid = grid;
  sheet.field_sig = f.signature();
  sheet.kernel_sig = k.signature();
  sheet.vector_dim = f.vector_dim();
  Method eff = method;
  if (eff == Method::Auto) {
    bool all_closed = true;
    for (const auto& t : f.terms) all_closed = all_closed && closed_path_supported(t, k);
    eff = all_closed ? Method::ClosedForm : Method::FFT;
  }
  sheet.method = eff;
  const size_t nd = grid.dirs.size(), nl = grid.lambdas.size();
  sheet.values.assign(nd * nl, CVec());
  for (size_t d = 0; d < nd; ++d) {
    const auto& dir = grid.dirs[d];
    for (size_t j = 0; j < nl; ++j) {
      const double lam = grid.lambdas[j];
      sheet.at(d, j) = eval_transform(f, k, {lam * dir.x[0], lam * dir.x[1]}, lam * dir.y, method);
    }
  }
  return sheet;
}

TransformSheet wavelet_transform(const Field& f, const Kernel& psi, const ScaleGrid& grid) {
  return compute_sheet(f, conj_reflected(psi), grid);
}

BoxGrid default_box_grid(double x_max, int nx, double y_min, double y_max, int ny) {
  BoxGrid g;
  g.xs = linspace(-x_max, x_max, nx);
  g.ys = geomspace(y_min, y_max, ny);
  return g;
}

BoxSheet compute_box_sheet(const Field& f, const Kernel& k, const BoxGrid& grid, Method method) {
  validate(f);
  if (f.dim() != 1 || k.dim != 1) fail(Err::UnsupportedDim, "box sheets are dim-1 only");
  BoxSheet sheet;
  sheet.grid = grid;
  sheet.field_sig = f.signature();
  sheet.kernel_sig = k.signature();
  sheet.vector_dim = f.vector_dim();
  sheet.values.assign(grid.xs.size() * grid.ys.size(), CVec());
  for (size_t ix = 0; ix < grid.xs.size(); ++ix)
    for (size_t iy = 0; iy < grid.ys.size(); ++iy)
      sheet.at(ix, iy) = eval_transform(f, k, {grid.xs[ix], 0.0}, grid.ys[iy], method);
  return sheet;
}

GrowthFit fit_global_growth(const BoxSheet& sheet) {
  const auto& xs = sheet.grid.xs;
  const auto& ys = sheet.grid.ys;
  if (ys.size() < 8 || std::log10(ys.back() / ys.front()) < 3.0 - 1e-9)
    fail(Err::Precondition, "box grid must span at least 3 decades in y");
  const double tiny = 1e-280;
  auto scale = [](double y) { return 1.0 / y + y; };
  for (int k = 0; k <= 16; ++k) {
    for (int l = 0; l <= 16; ++l) {
      auto nrm = [&](size_t ix, size_t iy) {
        return norm2(sheet.at(ix, iy)) / (std::pow(scale(ys[iy]), k) * std::pow(1.0 + std::abs(xs[ix]), l));
      };
      // Growth toward the edges rejects a candidate. A missing integer power
      // shows up with slope >= ~1; a bounded envelope saturates with slope
      // O(1/edge). The 0.3 threshold separates the two.
      bool ok = true;
      std::vector<double> ly, lv;
      for (size_t iy = 0; iy < ys.size() && ys[iy] <= ys.front() * 10.0; ++iy) {
        double m = 0.0;
        for (size_t ix = 0; ix < xs.size(); ++ix) m = std::max(m, nrm(ix, iy));
        ly.push_back(std::log(1.0 / ys[iy]));
        lv.push_back(std::log(m + tiny));
      }
      if (fit_slope(ly, lv) > 0.3) ok = false;
      ly.clear();
      lv.clear();
      for (size_t iy = ys.size(); iy-- > 0 && ys[iy] >= ys.back() / 10.0;) {
        double m = 0.0;
        for (size_t ix = 0; ix < xs.size(); ++ix) m = std::max(m, nrm(ix, iy));
        ly.push_back(std::log(ys[iy]));
        lv.push_back(std::log(m + tiny));
      }
      if (ok && fit_slope(ly, lv) > 0.3) ok = false;
      // growth toward the |x| edge (outermost quarter of the columns)
      if (ok) {
        ly.clear();
        lv.clear();
        const double x_hi = std::abs(xs.back());
        for (size_t ix = 0; ix < xs.size(); ++ix) {
          if (std::abs(xs[ix]) < 0.75 * x_hi) continue;
          double m = 0.0;
          for (size_t iy = 0; iy < ys.size(); ++iy) m = std::max(m, nrm(ix, iy));
          ly.push_back(std::log(1.0 + std::abs(xs[ix])));
          lv.push_back(std::log(m + tiny));
        }
        if (fit_slope(ly, lv) > 0.3) ok = false;
      }
      if (ok) {
        double c = 0.0;
        for (size_t ix = 0; ix < xs.size(); ++ix)
          for (size_t iy = 0; iy < ys.size(); ++iy) c = std::max(c, nrm(ix, iy));
        return {k, l, c};
      }
    }
  }
  fail(Err::ExponentRangeExceeded, "no (k, l) <= 16 bounds the sheet");
}

namespace {

std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string sheet_to_csv(const TransformSheet& sheet) {
  std::ostringstream os;
  os << "dir_index,x0";
  if (sheet.grid.dim > 1) os << ",x1";
  os << ",y,lambda";
  for (int c = 0; c < sheet.vector_dim; ++c) os << ",re_" << c;
  for (int c = 0; c < sheet.vector_dim; ++c) os << ",im_" << c;
  os << "\n";
  for (size_t d = 0; d < sheet.grid.dirs.size(); ++d) {
    const auto& dir = sheet.grid.dirs[d];
    for (size_t j = 0; j < sheet.grid.lambdas.size(); ++j) {
      os << d << "," << fmt(dir.x[0]);
      if (sheet.grid.dim > 1) os << "," << fmt(dir.x[1]);
      os << "," << fmt(dir.y) << "," << fmt(sheet.grid.lambdas[j]);
      const auto& v = sheet.at(d, j);
      for (int c = 0; c < sheet.vector_dim; ++c) os << "," << fmt(v[static_cast<size_t>(c)].real());
      for (int c = 0; c < sheet.vector_dim; ++c) os << "," << fmt(v[static_cast<size_t>(c)].imag());
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace qtb
