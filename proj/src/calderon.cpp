#include "calderon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <fftw3.h>

#include "numerics.hpp"

namespace qtb {

namespace {

constexpr int kAdmissPoints = 2048;
constexpr double kAdmissRMin = 1e-6;
constexpr double kAdmissRMax = 1e6;

}  // namespace

AdmissibilityReport admissibility(const Kernel& psi, const Kernel& eta) {
  if (psi.dim != eta.dim) fail(Err::DimMismatch, "admissibility kernels must share dim");
  AdmissibilityReport rep;
  const auto rays = ray_grid(psi);
  const double dv = std::log(kAdmissRMax / kAdmissRMin) / (kAdmissPoints - 1);
  for (const auto& ray : rays) {
    KahanSum acc;
    double head = 0.0, tail = 0.0;
    for (int i = 0; i < kAdmissPoints; ++i) {
      const double r = kAdmissRMin * std::exp(dv * i);
      const Pt u{r * ray[0], r * ray[1]};
      const cplx val = std::conj(kernel_fourier(psi, u)) * kernel_fourier(eta, u);
      const double w = (i == 0 || i == kAdmissPoints - 1) ? 0.5 : 1.0;
      acc.add(w * dv * val);
      if (i < 8) head = std::max(head, std::abs(val));
      if (i >= kAdmissPoints - 8) tail = std::max(tail, std::abs(val));
    }
    if (head > 1e-12 || tail > 1e-12)
      fail(Err::NonIntegrable, "admissibility integrand does not vanish at the radial ends");
    rep.c_values.push_back(acc.value());
  }
  cplx mean(0.0, 0.0);
  for (const auto& c : rep.c_values) mean += c;
  mean /= static_cast<double>(rep.c_values.size());
  double dev = 0.0;
  for (const auto& c : rep.c_values) dev = std::max(dev, std::abs(c - mean));
  rep.is_constant = dev < 1e-6 * (std::abs(mean) + 1e-300);
  rep.c = mean;
  return rep;
}

Kernel reconstruction_wavelet(const Kernel& psi) {
  if (!psi.is_lizorkin()) fail(Err::Precondition, "reconstruction wavelets need a Lizorkin kernel");
  if (!check_nondegenerate(psi).verdict) fail(Err::Degenerate, "kernel is degenerate on a ray");
  const AdmissibilityReport self = admissibility(psi, psi);
  for (const auto& c : self.c_values)
    if (std::abs(c) < 1e-12) fail(Err::Degenerate, "self-admissibility vanishes on a ray");
  Kernel eta = psi;
  eta.ray_norm = self.c_values;
  return eta;
}

namespace {

std::vector<cplx> fft_backward_local(std::vector<cplx> in) {
  const int n = static_cast<int>(in.size());
  std::vector<cplx> out(in.size());
  fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

// Row values of (2pi)^{-1} int g(u) e^{i x u} du on a uniform x grid via FFT.
void spectrum_row(const std::function<cplx(double)>& g, double u_decay, double x_extent, double dx_target,
                  PlaneRow* row) {
  const double du_max = kTwoPi / (2.0 * x_extent + 64.0);
  double du = du_max;
  long m = static_cast<long>(std::ceil(kTwoPi / (du * dx_target)));
  long mp = 64;
  while (mp < m) mp <<= 1;
  if (mp > (1L << 18)) mp = 1L << 18;
  // keep the spectral span at least the kernel decay range
  while (mp * du < 2.2 * u_decay && mp < (1L << 18)) mp <<= 1;
  std::vector<cplx> spec(static_cast<size_t>(mp));
  for (long j = 0; j < mp; ++j) {
    const double u = (static_cast<double>(j) - static_cast<double>(mp) / 2.0) * du;
    cplx v = g(u);
    if (j % 2 != 0) v = -v;
    spec[static_cast<size_t>(j)] = v;
  }
  auto ft = fft_backward_local(std::move(spec));
  row->dx = kTwoPi / (static_cast<double>(mp) * du);
  row->x0 = -0.5 * static_cast<double>(mp) * row->dx;
  row->vals.resize(static_cast<size_t>(mp));
  const double scale = du / kTwoPi;
  for (long j = 0; j < mp; ++j) {
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    row->vals[static_cast<size_t>(j)] = scale * sgn * ft[static_cast<size_t>(j)];
  }
}

std::vector<double> plane_y_ladder(const PlaneConfig& cfg) {
  const double octaves = std::log2(cfg.y_max / cfg.y_min);
  const int n = static_cast<int>(std::lround(octaves * cfg.rows_per_octave)) + 1;
  return geomspace(cfg.y_min, cfg.y_max, n);
}

}  // namespace

CalderonPlane wavelet_plane_of_testfn(const Kernel& rho, const Kernel& psi, const PlaneConfig& cfg) {
  if (rho.dim != 1 || psi.dim != 1) fail(Err::UnsupportedDim, "Calderon planes are dim-1 only");
  CalderonPlane plane;
  const auto ys = plane_y_ladder(cfg);
  const double dlog = std::log(ys[1] / ys[0]);
  const double u_decay_rho = kernel_spectral_radius(rho, 1e-14);
  const double u_decay_psi = kernel_spectral_radius(psi, 1e-14);
  double global_peak = 0.0;
  for (double u : linspace(1e-3, u_decay_rho, 256))
    global_peak = std::max(global_peak, std::abs(kernel_fourier(rho, {u, 0.0})));
  for (size_t i = 0; i < ys.size(); ++i) {
    const double y = ys[i];
    auto g = [&](double u) { return kernel_fourier(rho, {u, 0.0}) * std::conj(kernel_fourier(psi, {y * u, 0.0})); };
    double peak = 0.0;
    for (double u : geomspace(1e-4, std::min(u_decay_rho, u_decay_psi / y) + 1.0, 96))
      peak = std::max({peak, std::abs(g(u)), std::abs(g(-u))});
    PlaneRow row;
    row.y = y;
    row.logw = (i == 0 || i + 1 == ys.size()) ? 0.5 * dlog : dlog;
    if (peak < 1e-17 * (global_peak + 1e-300)) {
      row.x0 = 0.0;
      row.dx = 1.0;
      plane.rows.push_back(std::move(row));  // empty row: no contribution at this scale
      continue;
    }
    spectrum_row(g, std::min(u_decay_rho, u_decay_psi / y), cfg.x_max, std::min(0.25, y / 6.0), &row);
    plane.rows.push_back(std::move(row));
  }
  return plane;
}

cplx synthesis(const CalderonPlane& plane, const Kernel& psi, double t) {
  if (psi.dim != 1) fail(Err::UnsupportedDim, "synthesis is dim-1 only");
  const KernelPhys phys(psi);
  // window where the synthesis kernel still matters; beyond it |psi| < 1e-8 peak
  const double w_phys = phys.radius_eps(1e-8) * 1.05;
  KahanSum acc;
  double boundary = 0.0;
  double interior_l1 = 0.0;
  for (const auto& row : plane.rows) {
    if (row.vals.empty()) continue;
    const double y = row.y;
    long j0 = static_cast<long>(std::floor((t - w_phys * y - row.x0) / row.dx));
    long j1 = static_cast<long>(std::ceil((t + w_phys * y - row.x0) / row.dx));
    j0 = std::max<long>(j0, 0);
    j1 = std::min<long>(j1, static_cast<long>(row.vals.size()) - 1);
    if (j1 < j0) continue;
    KahanSum rowsum;
    for (long j = j0; j <= j1; ++j) {
      const double x = row.x0 + static_cast<double>(j) * row.dx;
      rowsum.add(row.vals[static_cast<size_t>(j)] * phys((t - x) / y));
    }
    const cplx row_contrib = rowsum.value() * row.dx * row.logw / y;
    acc.add(row_contrib);
    interior_l1 += std::abs(row_contrib);
    // boundary-magnitude heuristic: charge the edge cells of the window as if
    // they continued for another 8 cells; interior windows end where
    // |psi| < 1e-8 of its peak, so only plane-clamped rows charge visibly
    auto edge_cell = [&](long j) {
      const double x = row.x0 + static_cast<double>(j) * row.dx;
      return std::abs(row.vals[static_cast<size_t>(j)] * phys((t - x) / y));
    };
    boundary += (edge_cell(j0) + edge_cell(j1)) * row.dx * row.logw / y * 8.0;
  }
  // scale-end rows: charge the first and last nonempty rows as if the ladder
  // continued for another 8 rows on each side
  const PlaneRow* first_row = nullptr;
  const PlaneRow* last_row = nullptr;
  for (const auto& row : plane.rows)
    if (!row.vals.empty()) {
      if (!first_row) first_row = &row;
      last_row = &row;
    }
  for (const PlaneRow* row : {first_row, last_row}) {
    if (!row) continue;
    double m = 0.0;
    for (const auto& v : row->vals) m = std::max(m, std::abs(v));
    boundary += 8.0 * m * phys.abs_tail(0.0) * row->logw;
  }
  const cplx result = acc.value();
  // truncation is judged against the integral's mass: a mean-zero wavelet
  // cancels most of the pointwise value without invalidating the quadrature
  if (boundary > 1e-4 * (std::max(std::abs(result), interior_l1) + 1e-9)) {
    if (std::getenv("QTB_DEBUG_SYNTH"))
      std::fprintf(stderr, "synth t=%g result=%g l1=%g boundary=%g\n", t, std::abs(result), interior_l1, boundary);
    fail(Err::TruncationDominated, "plane truncation dominates the synthesis estimate");
  }
  return result;
}

CVec plane_pairing_against_field(const Field& f, const Kernel& psi, const CalderonPlane& plane) {
  validate(f);
  if (f.dim() != 1) fail(Err::UnsupportedDim, "plane pairings are dim-1 only");
  const Kernel wk = conj_reflected(psi);
  std::vector<KahanSum> acc(static_cast<size_t>(f.vector_dim()));
  for (const auto& row : plane.rows) {
    if (row.vals.empty()) continue;
    // restrict to columns within the configured extent; rows are FFT-periodic
    double rowmax = 0.0;
    for (const auto& v : row.vals) rowmax = std::max(rowmax, std::abs(v));
    for (size_t j = 0; j < row.vals.size(); ++j) {
      const cplx phi_val = row.vals[j];
      if (std::abs(phi_val) < 1e-13 * rowmax) continue;
      const double x = row.x0 + static_cast<double>(j) * row.dx;
      const CVec wf = eval_transform(f, wk, {x, 0.0}, row.y);
      for (size_t c = 0; c < acc.size(); ++c) acc[c].add(wf[c] * phi_val * row.dx * row.logw);
    }
  }
  CVec out(static_cast<size_t>(f.vector_dim()));
  for (size_t c = 0; c < out.size(); ++c) out[c] = acc[c].value();
  return out;
}

CVec desingularized_pairing(const Field& f, const Kernel& rho, const Kernel& psi, const Kernel& eta,
                            const PlaneConfig& cfg) {
  const AdmissibilityReport adm = admissibility(psi, eta);
  if (!adm.is_constant) fail(Err::Precondition, "cross-admissibility must be direction independent");
  if (std::abs(adm.c) < 1e-14) fail(Err::ZeroAdmissibility, "cross-admissibility vanishes");
  const CalderonPlane plane = wavelet_plane_of_testfn(rho, conj_reflected(eta), cfg);
  CVec out = plane_pairing_against_field(f, psi, plane);
  for (auto& z : out) z /= adm.c;
  return out;
}

CalderonVerifyReport calderon_verify(const Kernel& psi, const PlaneConfig& cfg) {
  CalderonVerifyReport rep;
  const AdmissibilityReport self = admissibility(psi, psi);
  rep.c_psi_psi = self.c;
  rep.is_constant = self.is_constant;
  const Kernel eta = reconstruction_wavelet(psi);
  rep.c_psi_eta = admissibility(psi, eta).c;

  const Kernel gauss = kernel_create("gaussian", 1);
  const Kernel lizorkin = kernel_create("paper_lizorkin", 1);
  std::vector<Kernel> tests;
  tests.push_back(psi);
  tests.push_back(compose_lizorkin(gauss, lizorkin));
  tests.push_back(compose_lizorkin(lizorkin, lizorkin));
  tests.push_back(dilated(lizorkin, 1.5));
  tests.push_back(poly_multiplied(compose_lizorkin(gauss, lizorkin), 2));
  for (const auto& k : tests) rep.test_functions.push_back(k.signature());

  double worst = 0.0;
  for (const auto& rho : tests) {
    const CalderonPlane plane = wavelet_plane_of_testfn(rho, psi, cfg);
    double sup_rho = 0.0;
    const auto ts = linspace(-3.0, 3.0, 25);
    std::vector<cplx> truth(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
      truth[i] = kernel_phys(rho, {ts[i], 0.0});
      sup_rho = std::max(sup_rho, std::abs(truth[i]));
    }
    for (size_t i = 0; i < ts.size(); ++i) {
      const cplx recon = synthesis(plane, eta, ts[i]) / rep.c_psi_eta;
      worst = std::max(worst, std::abs(recon - truth[i]) / sup_rho);
    }
  }
  rep.reconstruction_max_rel_err = worst;

  // desingularized pairing against the two-atom comb
  FieldSpec comb;
  comb.id = FieldId::DeltaComb;
  comb.atoms = {{{0.0, 0.0}, cplx(1.0, 0.0)}, {{1.0, 0.0}, cplx(-1.0, 0.0)}};
  const Kernel rho = compose_lizorkin(gauss, lizorkin);
  const CVec got = desingularized_pairing(Field(comb), rho, psi, eta, cfg);
  const cplx want = kernel_phys(rho, {0.0, 0.0}) - kernel_phys(rho, {1.0, 0.0});
  rep.pairing_rel_err = std::abs(got[0] - want) / std::abs(want);
  return rep;
}

}  // namespace qtb
