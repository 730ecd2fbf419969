#ifndef QTB_FIELDS_HPP
#define QTB_FIELDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace qtb {

enum class FieldId {
  Delta,
  Heaviside,
  HomogeneousAbs,
  HomogeneousPlus,
  LogHeaviside,
  Constant,
  Polynomial,
  DeltaComb,
  SampledFourier,
};

const char* field_name(FieldId id);
FieldId field_from_name(const std::string& name);

struct PolyTerm {
  std::array<int, 2> m{0, 0};  // monomial powers; m[1] ignored for dim 1
  cplx c{0.0, 0.0};
};

struct Atom {
  Pt t{0.0, 0.0};
  cplx c{0.0, 0.0};
};

// Uniform grid of Fourier samples on [-u_max, u_max]^dim, symmetric about 0.
struct FourierGrid {
  double u_max = 0.0;
  int pts = 0;  // samples per axis, odd so that 0 is a node
  std::vector<cplx> data;  // row-major for dim 2
  double growth_bound = 0.0;
  double du() const { return 2.0 * u_max / (pts - 1); }
};

// Smooth compactly supported window: 1 on |t| <= radius, 0 on |t| >= 2*radius.
struct Window {
  double radius = 1.0;
  double chi(double r) const { return smooth_cutoff(r, radius, 2.0 * radius); }
};

struct FieldSpec {
  int dim = 1;
  FieldId id = FieldId::Delta;
  double a = 0.5;           // exponent of the homogeneous entries
  double shift = 1.0;       // LogHeaviside support cut
  double offset = 0.0;      // LogHeaviside additive constant
  std::vector<PolyTerm> poly;
  std::vector<Atom> atoms;
  std::optional<FourierGrid> grid;
  int vector_dim = 1;
  CVec amplitude{cplx(1.0, 0.0)};
  std::optional<Window> window;

  std::string signature() const;
};

void validate(const FieldSpec& f);

enum class Site { Origin, Infinity };
const char* site_name(Site s);
Site site_from_name(const std::string& s);

struct SlowVarySpec {
  enum class Family { One, LogPow, LogLogPow };
  Family family = Family::One;
  double b = 0.0;
  // Evaluated in the variable ell = lambda (Infinity) or 1/lambda (Origin);
  // below the family's natural domain the value is clamped to 1.
  double eval(double lambda, Site site) const;
  std::string to_string() const;
};

struct GroundTruthScaling {
  Site site = Site::Infinity;
  double alpha = 0.0;
  SlowVarySpec L;
  FieldSpec limit_field;
};

// Analytically known scaling data; empty when the entry has none at either site.
std::vector<GroundTruthScaling> ground_truth(const FieldSpec& f);

// Function part of the Fourier transform of the catalog shape times amplitude.
// Atoms at u = 0 (Constant's (2pi)^n delta, Heaviside's pi delta) are exposed
// through spectral_delta_atom and consumed by the transform module.
CVec fourier_eval(const FieldSpec& f, const Pt& u);

// Scalar shape transform (amplitude not applied).
cplx fourier_shape(const FieldSpec& f, const Pt& u);

// Coefficient of delta(u) in the shape transform.
double spectral_delta_atom(const FieldSpec& f);

// Whether the frequency-quadrature transform path supports this entry.
bool fft_path_supported(const FieldSpec& f);

FieldSpec scale_field(const FieldSpec& f, double lam);

// A field is a finite sum of catalog terms (all same dim / vector_dim).
struct Field {
  std::vector<FieldSpec> terms;
  Field() = default;
  explicit Field(FieldSpec one) { terms.push_back(std::move(one)); }
  int dim() const { return terms.empty() ? 1 : terms.front().dim; }
  int vector_dim() const { return terms.empty() ? 1 : terms.front().vector_dim; }
  std::string signature() const;
};

void validate(const Field& f);

}  // namespace qtb

#endif
