#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include <fftw3.h>

#include "numerics.hpp"

namespace qtb {

const char* kernel_name(KernelId id) {
  switch (id) {
    case KernelId::Gaussian: return "gaussian";
    case KernelId::HeatSymbol: return "heat_symbol";
    case KernelId::PaperLizorkin: return "paper_lizorkin";
    case KernelId::PaperMixed: return "paper_mixed";
    case KernelId::DegenerateDemo: return "degenerate_demo";
    case KernelId::ConeExponential: return "cone_exponential";
    case KernelId::SampledFourier: return "sampled_fourier";
    case KernelId::Composed: return "composed";
  }
  return "?";
}

Kernel kernel_create(const std::string& name, int dim) {
  Kernel k;
  k.dim = dim;
  if (name == "gaussian") k.id = KernelId::Gaussian;
  else if (name == "heat_symbol") k.id = KernelId::HeatSymbol;
  else if (name == "paper_lizorkin") k.id = KernelId::PaperLizorkin;
  else if (name == "paper_mixed") k.id = KernelId::PaperMixed;
  else if (name == "degenerate_demo") k.id = KernelId::DegenerateDemo;
  else if (name == "cone_exponential") k.id = KernelId::ConeExponential;
  else fail(Err::Config, "unknown kernel catalog id: " + name);
  const bool needs_2d = k.id == KernelId::PaperMixed || k.id == KernelId::DegenerateDemo;
  if (needs_2d && dim != 2) fail(Err::UnsupportedDim, name + " requires dim 2");
  if (k.id == KernelId::ConeExponential && dim != 1) fail(Err::UnsupportedDim, name + " requires dim 1");
  if (dim != 1 && dim != 2) fail(Err::UnsupportedDim, "dim must be 1 or 2");
  return k;
}

Kernel conj_reflected(Kernel k) {
  k.conj_reflect = !k.conj_reflect;
  return k;
}

Kernel reflected(Kernel k) {
  k.reflect = !k.reflect;
  return k;
}

Kernel dilated(Kernel k, double factor) {
  if (!(factor > 0.0)) fail(Err::Precondition, "dilation factor must be positive");
  k.dilation *= factor;
  return k;
}

Kernel with_amplitude(Kernel k, cplx amp) {
  k.amplitude *= amp;
  return k;
}

Kernel poly_multiplied(Kernel k, int m0, int m1) {
  k.monomial[0] += m0;
  k.monomial[1] += m1;
  return k;
}

std::string Kernel::signature() const {
  std::ostringstream os;
  os << kernel_name(id) << ":n" << dim;
  if (id == KernelId::Composed && lhs && rhs) os << "[" << lhs->signature() << "|" << rhs->signature() << "]";
  if (id == KernelId::SampledFourier && grid) os << ":U=" << grid->u_max << ":pts=" << grid->pts;
  if (amplitude != cplx(1.0, 0.0)) os << ":A=" << amplitude.real() << "," << amplitude.imag();
  if (conj_reflect) os << ":cr";
  if (reflect) os << ":refl";
  if (dilation != 1.0) os << ":dil=" << dilation;
  if (monomial[0] || monomial[1]) os << ":u^" << monomial[0] << "," << monomial[1];
  if (!ray_norm.empty()) {
    os << ":raynorm[";
    for (const auto& c : ray_norm) os << c.real() << "," << c.imag() << ";";
    os << "]";
  }
  return os.str();
}

bool Kernel::is_lizorkin() const {
  switch (id) {
    case KernelId::PaperLizorkin: return true;
    case KernelId::Composed: return (lhs && lhs->is_lizorkin()) || (rhs && rhs->is_lizorkin());
    default: return false;
  }
}

namespace {

cplx base_fourier(const Kernel& k, const Pt& u) {
  const double r = norm(u, k.dim);
  switch (k.id) {
    case KernelId::Gaussian: return std::exp(-0.5 * r * r);
    case KernelId::HeatSymbol: return std::exp(-r * r);
    case KernelId::PaperLizorkin: return r == 0.0 ? 0.0 : std::exp(-r - 1.0 / r);
    case KernelId::PaperMixed: {
      const double flat = r == 0.0 ? 0.0 : std::exp(-r - 1.0 / r);
      return flat + u[0] * u[0] * smooth_cutoff(r, 0.5, 1.0);
    }
    case KernelId::DegenerateDemo: return u[0] * u[0] * std::exp(-r * r);
    case KernelId::ConeExponential:
      // e^{-u} on the cone [0, inf), smoothly cut to 0 on (-inf, -1/2].
      return std::exp(-u[0]) * smooth_cutoff(-u[0], 0.5, 1.0);
    case KernelId::SampledFourier: {
      if (!k.grid) fail(Err::Config, "sampled kernel without grid");
      FieldSpec tmp;
      tmp.dim = k.dim;
      tmp.id = FieldId::SampledFourier;
      tmp.grid = k.grid;
      return fourier_shape(tmp, u);
    }
    case KernelId::Composed: {
      if (!k.lhs || !k.rhs) fail(Err::Config, "composed kernel missing factors");
      return std::conj(kernel_fourier(*k.lhs, u)) * kernel_fourier(*k.rhs, u);
    }
  }
  return 0.0;
}

}  // namespace

cplx kernel_fourier(const Kernel& k, const Pt& u) {
  if (k.reflect) {
    Kernel base = k;
    base.reflect = false;
    return kernel_fourier(base, {-u[0], -u[1]});
  }
  Pt v{u[0] * k.dilation, u[1] * k.dilation};
  cplx val = base_fourier(k, v);
  if (k.monomial[0] || k.monomial[1]) {
    double mono = 1.0;
    for (int i = 0; i < k.monomial[0]; ++i) mono *= u[0];
    for (int i = 0; i < k.monomial[1]; ++i) mono *= u[1];
    val *= mono;
  }
  if (!k.ray_norm.empty()) {
    if (k.dim == 1) {
      val /= k.ray_norm[static_cast<size_t>(u[0] >= 0.0 ? 0 : 1)];
    } else {
      // linear interpolation in angle between the stored ray values
      const double step = kTwoPi / static_cast<double>(k.ray_norm.size());
      double th = std::atan2(u[1], u[0]);
      if (th < 0.0) th += kTwoPi;
      const double f = th / step;
      const size_t i = static_cast<size_t>(f) % k.ray_norm.size();
      const size_t j = (i + 1) % k.ray_norm.size();
      const double t = f - std::floor(f);
      val /= (1.0 - t) * k.ray_norm[i] + t * k.ray_norm[j];
    }
  }
  if (k.conj_reflect) val = std::conj(val);
  return k.amplitude * val;
}

std::vector<Pt> ray_grid(const Kernel& k) {
  std::vector<Pt> rays;
  if (k.dim == 1) {
    rays.push_back({1.0, 0.0});
    rays.push_back({-1.0, 0.0});
  } else {
    for (int i = 0; i < k.ray_count; ++i) {
      const double th = kTwoPi * i / k.ray_count;
      rays.push_back({std::cos(th), std::sin(th)});
    }
  }
  return rays;
}

double kernel_spectral_peak(const Kernel& k) {
  double peak = 0.0;
  for (const auto& ray : ray_grid(k))
    for (double r : geomspace(1e-3, 64.0, 160))
      peak = std::max(peak, std::abs(kernel_fourier(k, {r * ray[0], r * ray[1]})));
  return peak;
}

double kernel_spectral_radius(const Kernel& k, double eps) {
  const double peak = kernel_spectral_peak(k);
  if (peak == 0.0) return 1.0;
  const auto rays = ray_grid(k);
  double radius = 1.0;
  for (double r = 1.0; r <= 4096.0; r *= 1.125) {
    double m = 0.0;
    for (const auto& ray : rays) m = std::max(m, std::abs(kernel_fourier(k, {r * ray[0], r * ray[1]})));
    radius = r;
    if (m < eps * peak) break;
  }
  return radius;
}

// ---------------------------------------------------------------------------
// physical-space profiles (dim 1): dense inverse FFT, cached per kernel

namespace {

struct PhysProfile {
  double t0 = 0.0, dt = 0.0;
  std::vector<cplx> vals;
  std::vector<cplx> cdf;        // cumulative trapezoid of vals
  std::vector<double> abs_cdf;  // cumulative trapezoid of |vals|
  cplx total{0.0, 0.0};
  double abs_total = 0.0;
  double radius = 0.0;
};

std::mutex g_phys_mutex;
std::map<std::string, std::shared_ptr<const PhysProfile>> g_phys_cache;

std::vector<cplx> fft_backward(std::vector<cplx> in) {
  const int n = static_cast<int>(in.size());
  std::vector<cplx> out(in.size());
  fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

std::shared_ptr<const PhysProfile> phys_profile(const Kernel& k) {
  if (k.dim != 1) fail(Err::UnsupportedDim, "cached physical profiles are dim-1 only");
  const std::string key = k.signature();
  {
    std::lock_guard<std::mutex> lock(g_phys_mutex);
    auto it = g_phys_cache.find(key);
    if (it != g_phys_cache.end()) return it->second;
  }
  const double u_decay = kernel_spectral_radius(k, 1e-16);
  const double u_pad = 4.0 * std::max(8.0, u_decay);
  const int n = 1 << 17;
  const double du = 2.0 * u_pad / n;
  std::vector<cplx> spec(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double u = (j - n / 2) * du;
    cplx v = kernel_fourier(k, {u, 0.0});
    if (j % 2 != 0) v = -v;  // (-1)^j factor recentres the transform
    spec[static_cast<size_t>(j)] = v;
  }
  auto ft = fft_backward(std::move(spec));
  auto prof = std::make_shared<PhysProfile>();
  prof->dt = kTwoPi / (n * du);
  prof->t0 = -0.5 * n * prof->dt;
  prof->vals.resize(static_cast<size_t>(n));
  const double scale = du / kTwoPi;
  for (int j = 0; j < n; ++j) {
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    prof->vals[static_cast<size_t>(j)] = scale * sgn * ft[static_cast<size_t>(j)];
  }
  prof->cdf.resize(static_cast<size_t>(n));
  prof->abs_cdf.resize(static_cast<size_t>(n));
  KahanSum acc;
  double abs_acc = 0.0;
  prof->cdf[0] = 0.0;
  prof->abs_cdf[0] = 0.0;
  for (int j = 1; j < n; ++j) {
    acc.add(0.5 * prof->dt * (prof->vals[static_cast<size_t>(j - 1)] + prof->vals[static_cast<size_t>(j)]));
    abs_acc += 0.5 * prof->dt *
               (std::abs(prof->vals[static_cast<size_t>(j - 1)]) + std::abs(prof->vals[static_cast<size_t>(j)]));
    prof->cdf[static_cast<size_t>(j)] = acc.value();
    prof->abs_cdf[static_cast<size_t>(j)] = abs_acc;
  }
  prof->total = acc.value();
  prof->abs_total = abs_acc;
  double peak = 0.0;
  for (const auto& v : prof->vals) peak = std::max(peak, std::abs(v));
  double radius = 8.0;
  for (int j = 0; j < n; ++j) {
    const double t = std::abs(prof->t0 + j * prof->dt);
    if (std::abs(prof->vals[static_cast<size_t>(j)]) > 1e-15 * peak) radius = std::max(radius, t);
  }
  prof->radius = radius;
  std::lock_guard<std::mutex> lock(g_phys_mutex);
  g_phys_cache[key] = prof;
  return prof;
}

bool gaussian_family(const Kernel& k, double* variance) {
  if (k.id != KernelId::Gaussian && k.id != KernelId::HeatSymbol) return false;
  if (k.monomial[0] || k.monomial[1] || !k.ray_norm.empty()) return false;
  // phi^(u) = e^{-s^2 u^2 /2} with s^2 = dil^2 (Gaussian) or 2 dil^2 (heat);
  // phi(t) = (2 pi s^2)^{-n/2} e^{-t^2/(2 s^2)} scaled by dil bookkeeping below.
  const double base = k.id == KernelId::Gaussian ? 1.0 : 2.0;
  *variance = base * k.dilation * k.dilation;
  return true;
}

}  // namespace

cplx kernel_phys(const Kernel& k, const Pt& t) {
  double s2;
  if (gaussian_family(k, &s2)) {
    const double r2 = dot(t, t, k.dim);
    const double val = std::pow(kTwoPi * s2, -0.5 * k.dim) * std::exp(-0.5 * r2 / s2);
    return (k.conj_reflect ? std::conj(k.amplitude) : k.amplitude) * val;
  }
  if (k.dim == 1) return KernelPhys(k)(t[0]);
  // dim-2 fallback: direct frequency quadrature (midpoint tensor grid)
  const double U = kernel_spectral_radius(k, 1e-12);
  const int m = 384;
  const double du = 2.0 * U / m;
  KahanSum acc;
  for (int i = 0; i < m; ++i) {
    const double u0 = -U + (i + 0.5) * du;
    for (int j = 0; j < m; ++j) {
      const double u1 = -U + (j + 0.5) * du;
      acc.add(kernel_fourier(k, {u0, u1}) * std::exp(cplx(0.0, u0 * t[0] + u1 * t[1])));
    }
  }
  return acc.value() * du * du / (kTwoPi * kTwoPi);
}

cplx kernel_cdf(const Kernel& k, double w) {
  if (k.dim != 1) fail(Err::UnsupportedDim, "cdf is dim-1 only");
  double s2;
  if (gaussian_family(k, &s2)) {
    const double val = 0.5 * std::erfc(-w / std::sqrt(2.0 * s2));
    return (k.conj_reflect ? std::conj(k.amplitude) : k.amplitude) * val;
  }
  return KernelPhys(k).cdf(w);
}

double kernel_phys_radius(const Kernel& k) {
  double s2;
  if (gaussian_family(k, &s2)) return std::sqrt(s2) * 10.0;
  if (k.dim == 1) return phys_profile(k)->radius;
  return 64.0;
}

double kernel_phys_radius_eps(const Kernel& k, double eps) { return KernelPhys(k).radius_eps(eps); }

cplx kernel_mass(const Kernel& k) { return kernel_fourier(k, {0.0, 0.0}); }

double kernel_abs_tail(const Kernel& k, double s) {
  if (k.dim != 1) fail(Err::UnsupportedDim, "abs tails are dim-1 only");
  return KernelPhys(k).abs_tail(s);
}

bool kernel_phys_cheap(const Kernel& k) {
  double s2;
  return k.dim == 1 || gaussian_family(k, &s2);
}

// ---------------------------------------------------------------------------

KernelPhys::KernelPhys(const Kernel& k) {
  if (gaussian_family(k, &s2_)) {
    closed_ = true;
    amp_ = k.conj_reflect ? std::conj(k.amplitude) : k.amplitude;
    return;
  }
  if (k.dim != 1) fail(Err::UnsupportedDim, "KernelPhys fast path is dim-1 only");
  prof_ = phys_profile(k);
}

cplx KernelPhys::operator()(double t) const {
  if (closed_) return amp_ * std::pow(kTwoPi * s2_, -0.5) * std::exp(-0.5 * t * t / s2_);
  const auto* p = static_cast<const PhysProfile*>(prof_.get());
  return interp_cubic(p->vals, p->t0, p->dt, t);
}

cplx KernelPhys::cdf(double w) const {
  if (closed_) return amp_ * 0.5 * std::erfc(-w / std::sqrt(2.0 * s2_));
  const auto* p = static_cast<const PhysProfile*>(prof_.get());
  if (w <= p->t0) return {0.0, 0.0};
  const double t_last = p->t0 + (static_cast<double>(p->vals.size()) - 1.0) * p->dt;
  if (w >= t_last) return p->total;
  return interp_cubic(p->cdf, p->t0, p->dt, w);
}

double KernelPhys::radius() const {
  if (closed_) return std::sqrt(s2_) * 10.0;
  return static_cast<const PhysProfile*>(prof_.get())->radius;
}

double KernelPhys::radius_eps(double eps) const {
  if (closed_) return std::sqrt(s2_ * std::max(4.0, -2.0 * std::log(eps)));
  const auto* p = static_cast<const PhysProfile*>(prof_.get());
  double peak = 0.0;
  for (const auto& v : p->vals) peak = std::max(peak, std::abs(v));
  double radius = 1.0;
  const auto n = static_cast<long>(p->vals.size());
  for (long j = 0; j < n; ++j) {
    const double t = std::abs(p->t0 + static_cast<double>(j) * p->dt);
    if (std::abs(p->vals[static_cast<size_t>(j)]) > eps * peak) radius = std::max(radius, t);
  }
  return radius;
}

double KernelPhys::abs_tail(double s) const {
  s = std::abs(s);
  if (closed_) return std::abs(amp_) * std::erfc(s / std::sqrt(2.0 * s2_));
  const auto* p = static_cast<const PhysProfile*>(prof_.get());
  const double t_last = p->t0 + (static_cast<double>(p->vals.size()) - 1.0) * p->dt;
  if (s >= t_last) return 0.0;
  auto cum_at = [&](double w) {
    const double u = (w - p->t0) / p->dt;
    const auto n = static_cast<long>(p->abs_cdf.size());
    long i = std::clamp<long>(static_cast<long>(std::floor(u)), 0, n - 2);
    const double f = u - static_cast<double>(i);
    return (1.0 - f) * p->abs_cdf[static_cast<size_t>(i)] + f * p->abs_cdf[static_cast<size_t>(i + 1)];
  };
  return std::max(0.0, p->abs_total - (cum_at(s) - cum_at(-s)));
}

NondegReport check_nondegenerate(const Kernel& k, double tol) {
  if (!(tol > 0.0)) fail(Err::Precondition, "tolerance must be positive");
  if (k.r_pts < 8) fail(Err::GridTooCoarse, "radial grid needs at least 8 points");
  const auto radii = geomspace(k.r_min, k.r_max, k.r_pts);
  NondegReport rep;
  rep.verdict = true;
  double worst = 1e300;
  for (const auto& ray : ray_grid(k)) {
    double m = 0.0;
    for (double r : radii) m = std::max(m, std::abs(kernel_fourier(k, {r * ray[0], r * ray[1]})));
    if (m < worst) {
      worst = m;
      rep.worst_ray = ray;
      rep.worst_max = m;
    }
    if (!(m > tol)) rep.verdict = false;
  }
  return rep;
}

namespace {

// FD of the mixed partial D^{(m0,m1)} phi^(0) over the step ladder.
cplx fd_partial(const Kernel& k, int m0, int m1, double* err) {
  const auto off0 = fd_stencil_offsets(m0);
  const auto w0 = fd_stencil_weights(m0, off0);
  const auto off1 = fd_stencil_offsets(m1);
  const auto w1 = fd_stencil_weights(m1, off1);
  auto eval = [&](double h) {
    KahanSum s;
    for (size_t i = 0; i < off0.size(); ++i) {
      if (m1 == 0) {
        s.add(w0[i] * kernel_fourier(k, {off0[i] * h, 0.0}));
        continue;
      }
      for (size_t j = 0; j < off1.size(); ++j)
        s.add(w0[i] * w1[j] * kernel_fourier(k, {off0[i] * h, off1[j] * h}));
    }
    return s.value() / std::pow(h, m0 + m1);
  };
  return fd_ladder_extrapolate(eval, err);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TaylorTerms taylor_terms(const Kernel& k, int order) {
  if (order < 0 || order > 12) fail(Err::Precondition, "taylor order out of range");
  TaylorTerms tt;
  tt.dim = k.dim;
  tt.max_order = order;
  for (int q = 0; q <= order; ++q) {
    for (int m0 = q; m0 >= 0; --m0) {
      const int m1 = q - m0;
      if (k.dim == 1 && m1 > 0) continue;
      double err = 0.0;
      cplx d;
      if (q == 0) {
        d = kernel_fourier(k, {0.0, 0.0});
      } else {
        d = fd_partial(k, m0, m1, &err);
      }
      const double denom = factorial(m0) * factorial(m1);
      const cplx coef = d / denom;
      const double coef_err = err / denom;
      if (coef_err > 1e-4 * std::max(1.0, std::abs(coef)))
        fail(Err::NumericallyUnstable, "finite-difference ladder failed to settle for a Taylor coefficient");
      tt.worst_fd_error = std::max(tt.worst_fd_error, coef_err);
      tt.coef[{m0, m1}] = coef;
    }
  }
  return tt;
}

cplx TaylorTerms::ray_coefficient(int q, const Pt& omega) const {
  cplx s(0.0, 0.0);
  for (const auto& [m, c] : coef) {
    if (m[0] + m[1] != q) continue;
    double w = 1.0;
    for (int i = 0; i < m[0]; ++i) w *= omega[0];
    for (int i = 0; i < m[1]; ++i) w *= omega[1];
    s += c * w;
  }
  return s;
}

StrongNondegReport check_strongly_nondegenerate(const Kernel& k, int order, double tol) {
  const TaylorTerms tt = taylor_terms(k, order);
  const auto rays = ray_grid(k);
  StrongNondegReport rep;
  for (int upto = 0; upto <= order; ++upto) {
    bool all_rays = true;
    for (const auto& ray : rays) {
      bool any = false;
      for (int q = 0; q <= upto && !any; ++q)
        if (std::abs(tt.ray_coefficient(q, ray)) > tol) any = true;
      if (!any) {
        all_rays = false;
        break;
      }
    }
    if (all_rays) {
      rep.verdict = true;
      rep.witness_order = upto;
      return rep;
    }
  }
  return rep;
}

std::map<std::array<int, 2>, cplx> moments(const Kernel& k, int max_order) {
  std::map<std::array<int, 2>, cplx> out;
  for (int q = 0; q <= max_order; ++q) {
    for (int m0 = q; m0 >= 0; --m0) {
      const int m1 = q - m0;
      if (k.dim == 1 && m1 > 0) continue;
      double err = 0.0;
      const cplx d = q == 0 ? kernel_fourier(k, {0.0, 0.0}) : fd_partial(k, m0, m1, &err);
      if (err > 1e-4 * std::max(1.0, std::abs(d)))
        fail(Err::NumericallyUnstable, "finite-difference ladder failed to settle for a moment");
      // i^{|m|} d^m phi^(0) = integral of t^m phi
      const cplx ipow = std::pow(cplx(0.0, 1.0), q);
      out[{m0, m1}] = ipow * d;
    }
  }
  return out;
}

Kernel compose_lizorkin(const Kernel& phi, const Kernel& psi1) {
  if (phi.dim != psi1.dim) fail(Err::DimMismatch, "composed kernels must share dim");
  if (!psi1.is_lizorkin()) {
    const auto mom = moments(psi1, 2);
    for (const auto& [m, v] : mom)
      if (std::abs(v) > 1e-8) fail(Err::Precondition, "second factor is not a Lizorkin kernel");
  }
  Kernel k;
  k.dim = phi.dim;
  k.id = KernelId::Composed;
  k.lhs = std::make_shared<Kernel>(phi);
  k.rhs = std::make_shared<Kernel>(psi1);
  k.ray_count = std::max(phi.ray_count, psi1.ray_count);
  return k;
}

}  // namespace qtb
