#ifndef QTB_CALDERON_HPP
#define QTB_CALDERON_HPP

#include <string>
#include <vector>

#include "transform.hpp"

namespace qtb {

struct AdmissibilityReport {
  std::vector<cplx> c_values;  // per ray of the kernel's angular grid
  bool is_constant = false;
  cplx c{0.0, 0.0};
};

// c_{psi,eta}(w) = int_0^inf conj(psi^)(r w) eta^(r w) dr/r by log-substituted
// trapezoid quadrature on r in [1e-6, 1e6], 2048 points.
AdmissibilityReport admissibility(const Kernel& psi, const Kernel& eta);

// eta with eta^(u) = psi^(u) / c_{psi,psi}(u/|u|); c_{psi,eta} = 1.
Kernel reconstruction_wavelet(const Kernel& psi);

// Calderon-plane samples of a scalar function Phi(x, y): log-spaced rows in y,
// each row a uniform x grid at a resolution matched to its scale.
struct PlaneRow {
  double y = 1.0;
  double x0 = 0.0, dx = 1.0;
  std::vector<cplx> vals;
  double logw = 1.0;  // trapezoid weight for the integral d(log y)
};
struct CalderonPlane {
  std::vector<PlaneRow> rows;
};

struct PlaneConfig {
  double x_max = 16.0;
  double y_min = 0.00390625;  // 2^-8
  double y_max = 256.0;       // 2^8
  int rows_per_octave = 16;
};

// W_psi rho(x, y) for a test function rho given as a kernel object; rows are
// synthesized by inverse FFT of rho^(u) conj(psi^(y u)).
CalderonPlane wavelet_plane_of_testfn(const Kernel& rho, const Kernel& psi, const PlaneConfig& cfg = {});

// Wavelet synthesis M_psi Phi(t) = int int Phi(x,y) y^{-n} psi((t-x)/y) dx dy/y.
cplx synthesis(const CalderonPlane& plane, const Kernel& psi, double t);

// <f, rho> via the Calderon-plane integral of two wavelet transforms.
CVec desingularized_pairing(const Field& f, const Kernel& rho, const Kernel& psi, const Kernel& eta,
                            const PlaneConfig& cfg = {});

// int int W_psi f . Phi dx dy/y with Phi sampled on the plane (scalar Phi).
CVec plane_pairing_against_field(const Field& f, const Kernel& psi, const CalderonPlane& plane);

struct CalderonVerifyReport {
  cplx c_psi_psi{0.0, 0.0};
  bool is_constant = false;
  cplx c_psi_eta{0.0, 0.0};
  double reconstruction_max_rel_err = 0.0;
  double pairing_rel_err = 0.0;
  std::vector<std::string> test_functions;
};

CalderonVerifyReport calderon_verify(const Kernel& psi, const PlaneConfig& cfg = {});

}  // namespace qtb

#endif
