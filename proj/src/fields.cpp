#include "fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "numerics.hpp"

namespace qtb {

const char* field_name(FieldId id) {
  switch (id) {
    case FieldId::Delta: return "delta";
    case FieldId::Heaviside: return "heaviside";
    case FieldId::HomogeneousAbs: return "homogeneous_abs";
    case FieldId::HomogeneousPlus: return "homogeneous_plus";
    case FieldId::LogHeaviside: return "log_heaviside";
    case FieldId::Constant: return "constant";
    case FieldId::Polynomial: return "polynomial";
    case FieldId::DeltaComb: return "delta_comb";
    case FieldId::SampledFourier: return "sampled_fourier";
  }
  return "?";
}

FieldId field_from_name(const std::string& name) {
  for (FieldId id : {FieldId::Delta, FieldId::Heaviside, FieldId::HomogeneousAbs, FieldId::HomogeneousPlus,
                     FieldId::LogHeaviside, FieldId::Constant, FieldId::Polynomial, FieldId::DeltaComb,
                     FieldId::SampledFourier})
    if (name == field_name(id)) return id;
  fail(Err::Config, "unknown field catalog id: " + name);
}

const char* site_name(Site s) { return s == Site::Origin ? "origin" : "infinity"; }

Site site_from_name(const std::string& s) {
  if (s == "origin") return Site::Origin;
  if (s == "infinity") return Site::Infinity;
  fail(Err::Config, "unknown site: " + s);
}

double SlowVarySpec::eval(double lambda, Site site) const {
  const double ell = site == Site::Infinity ? lambda : 1.0 / lambda;
  switch (family) {
    case Family::One: return 1.0;
    case Family::LogPow: {
      const double x = std::log(ell);
      return x > 1.0 ? std::pow(x, b) : 1.0;
    }
    case Family::LogLogPow: {
      const double x = std::log(ell);
      if (x <= 1.0) return 1.0;
      const double y = std::log(x);
      return y > 1.0 ? std::pow(y, b) : 1.0;
    }
  }
  return 1.0;
}

std::string SlowVarySpec::to_string() const {
  std::ostringstream os;
  switch (family) {
    case Family::One: os << "one"; break;
    case Family::LogPow: os << "log_pow(" << b << ")"; break;
    case Family::LogLogPow: os << "loglog_pow(" << b << ")"; break;
  }
  return os.str();
}

std::string FieldSpec::signature() const {
  std::ostringstream os;
  os << field_name(id) << ":n" << dim << ":d" << vector_dim;
  switch (id) {
    case FieldId::HomogeneousAbs:
    case FieldId::HomogeneousPlus: os << ":a=" << a; break;
    case FieldId::LogHeaviside: os << ":s=" << shift << ":c=" << offset; break;
    case FieldId::Polynomial:
      for (const auto& t : poly) os << ":m" << t.m[0] << "," << t.m[1] << "=" << t.c;
      break;
    case FieldId::DeltaComb:
      os << ":atoms=" << atoms.size();
      if (!atoms.empty()) os << "@" << atoms.front().t[0] << ".." << atoms.back().t[0];
      break;
    case FieldId::SampledFourier:
      if (grid) os << ":U=" << grid->u_max << ":pts=" << grid->pts;
      break;
    default: break;
  }
  for (const auto& z : amplitude) os << ":A" << z.real() << (z.imag() >= 0 ? "+" : "") << z.imag();
  if (window) os << ":w=" << window->radius;
  return os.str();
}

void validate(const FieldSpec& f) {
  if (f.dim != 1 && f.dim != 2) fail(Err::UnsupportedDim, "dim must be 1 or 2");
  if (f.vector_dim < 1) fail(Err::Config, "vector_dim must be >= 1");
  if (static_cast<int>(f.amplitude.size()) != f.vector_dim) fail(Err::Config, "amplitude length != vector_dim");
  const bool needs_1d =
      f.id == FieldId::Heaviside || f.id == FieldId::HomogeneousPlus || f.id == FieldId::LogHeaviside;
  if (needs_1d && f.dim != 1) fail(Err::UnsupportedDim, std::string(field_name(f.id)) + " requires dim 1");
  if (f.id == FieldId::HomogeneousAbs || f.id == FieldId::HomogeneousPlus) {
    if (f.a <= -f.dim) fail(Err::Config, "homogeneous exponent must exceed -dim");
    if (std::abs(f.a - std::round(f.a)) < 1e-12)
      fail(Err::Config, "homogeneous exponent must be non-integer; use polynomial/log_heaviside at integers");
  }
  if (f.id == FieldId::LogHeaviside && f.shift <= 0.0) fail(Err::Config, "log_heaviside shift must be positive");
  if (f.id == FieldId::DeltaComb) {
    for (const auto& at : f.atoms)
      if (!std::isfinite(at.t[0]) || !std::isfinite(at.t[1]) || !std::isfinite(at.c.real()) ||
          !std::isfinite(at.c.imag()))
        fail(Err::Config, "delta_comb atoms must be finite");
    for (size_t i = 0; i < f.atoms.size(); ++i)
      for (size_t j = i + 1; j < f.atoms.size(); ++j) {
        const double dx = f.atoms[i].t[0] - f.atoms[j].t[0];
        const double dy = f.atoms[i].t[1] - f.atoms[j].t[1];
        if (dx == 0.0 && (f.dim == 1 || dy == 0.0)) fail(Err::Config, "delta_comb atom locations must be distinct");
      }
  }
  if (f.id == FieldId::SampledFourier) {
    if (!f.grid) fail(Err::Config, "sampled_fourier needs a grid");
    if (f.grid->pts < 2) fail(Err::GridTooCoarse, "sampled grid needs >= 2 samples per axis");
    const size_t expect = f.dim == 1 ? static_cast<size_t>(f.grid->pts)
                                     : static_cast<size_t>(f.grid->pts) * static_cast<size_t>(f.grid->pts);
    if (f.grid->data.size() != expect) fail(Err::Config, "sampled grid data size mismatch");
    if (f.grid->u_max <= 0.0) fail(Err::Config, "sampled grid needs positive u_max");
  }
}

void validate(const Field& f) {
  if (f.terms.empty()) fail(Err::Config, "field has no terms");
  for (const auto& t : f.terms) {
    validate(t);
    if (t.dim != f.dim()) fail(Err::DimMismatch, "field terms disagree on dim");
    if (t.vector_dim != f.vector_dim()) fail(Err::DimMismatch, "field terms disagree on vector_dim");
  }
}

std::string Field::signature() const {
  std::string s;
  for (const auto& t : terms) {
    if (!s.empty()) s += "+";
    s += t.signature();
  }
  return s;
}

namespace {

cplx sampled_lookup(const FieldSpec& f, const Pt& u) {
  const auto& g = *f.grid;
  const double du = g.du();
  if (f.dim == 1) {
    if (std::abs(u[0]) > g.u_max + 1e-12) fail(Err::OutOfGrid, "u beyond sampled grid");
    return interp_linear(g.data, -g.u_max, du, std::clamp(u[0], -g.u_max, g.u_max));
  }
  if (std::abs(u[0]) > g.u_max + 1e-12 || std::abs(u[1]) > g.u_max + 1e-12)
    fail(Err::OutOfGrid, "u beyond sampled grid");
  const double fx = (std::clamp(u[0], -g.u_max, g.u_max) + g.u_max) / du;
  const double fy = (std::clamp(u[1], -g.u_max, g.u_max) + g.u_max) / du;
  const int n = g.pts;
  int i = std::min(static_cast<int>(fx), n - 2);
  int j = std::min(static_cast<int>(fy), n - 2);
  const double tx = fx - i, ty = fy - j;
  auto at = [&](int ii, int jj) { return g.data[static_cast<size_t>(ii) * n + jj]; };
  return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) + (1 - tx) * ty * at(i, j + 1) +
         tx * ty * at(i + 1, j + 1);
}

}  // namespace

cplx fourier_shape(const FieldSpec& f, const Pt& u) {
  if (f.window && f.id != FieldId::Delta && f.id != FieldId::DeltaComb)
    fail(Err::Precondition, "windowed fields have no closed-form transform; sample them instead");
  const double r = norm(u, f.dim);
  switch (f.id) {
    case FieldId::Delta: return 1.0;
    case FieldId::DeltaComb: {
      KahanSum s;
      for (const auto& at : f.atoms) {
        const double w = f.window ? f.window->chi(norm(at.t, f.dim)) : 1.0;
        s.add(w * at.c * std::exp(cplx(0.0, -dot(u, at.t, f.dim))));
      }
      return s.value();
    }
    case FieldId::Heaviside:
      if (r == 0.0) fail(Err::Precondition, "heaviside transform singular at u=0");
      return cplx(0.0, -1.0) / u[0];
    case FieldId::HomogeneousAbs: {
      if (r == 0.0) fail(Err::Precondition, "transform singular at u=0");
      const double n = f.dim;
      const double c = std::pow(2.0, f.a + n) * std::pow(kPi, n / 2.0) * std::tgamma((n + f.a) / 2.0) /
                       std::tgamma(-f.a / 2.0);
      return c * std::pow(r, -f.a - n);
    }
    case FieldId::HomogeneousPlus: {
      if (r == 0.0) fail(Err::Precondition, "transform singular at u=0");
      const double mag = std::tgamma(f.a + 1.0) * std::pow(r, -1.0 - f.a);
      const double phase = -kPi * (f.a + 1.0) * 0.5 * (u[0] > 0 ? 1.0 : -1.0);
      return mag * std::exp(cplx(0.0, phase));
    }
    case FieldId::LogHeaviside: {
      if (r == 0.0) fail(Err::Precondition, "transform singular at u=0");
      const cplx ius(0.0, u[0] * f.shift);
      const cplx iu(0.0, u[0]);
      return std::exp(-ius) * (f.offset + std::log(f.shift)) / iu + expint_e1(ius) / iu;
    }
    case FieldId::Constant: return 0.0;
    case FieldId::Polynomial: return 0.0;
    case FieldId::SampledFourier: return sampled_lookup(f, u);
  }
  return 0.0;
}

CVec fourier_eval(const FieldSpec& f, const Pt& u) {
  validate(f);
  const cplx s = fourier_shape(f, u);
  CVec out = f.amplitude;
  for (auto& z : out) z *= s;
  return out;
}

double spectral_delta_atom(const FieldSpec& f) {
  switch (f.id) {
    case FieldId::Constant: return std::pow(kTwoPi, f.dim);
    case FieldId::Heaviside: return kPi;
    default: return 0.0;
  }
}

bool fft_path_supported(const FieldSpec& f) {
  if (f.window && f.id != FieldId::Delta && f.id != FieldId::DeltaComb) return false;
  switch (f.id) {
    case FieldId::Delta:
    case FieldId::DeltaComb:
    case FieldId::Constant:
    case FieldId::SampledFourier: return true;
    case FieldId::Heaviside: return f.dim == 1;
    default: return false;
  }
}

FieldSpec scale_field(const FieldSpec& f, double lam) {
  if (!(lam > 0.0)) fail(Err::Precondition, "scale factor must be positive");
  FieldSpec g = f;
  auto mul_amp = [&](double s) {
    for (auto& z : g.amplitude) z *= s;
  };
  switch (f.id) {
    case FieldId::Delta: mul_amp(std::pow(lam, -f.dim)); break;
    case FieldId::Heaviside:
    case FieldId::Constant: break;
    case FieldId::HomogeneousAbs:
    case FieldId::HomogeneousPlus: mul_amp(std::pow(lam, f.a)); break;
    case FieldId::LogHeaviside:
      g.shift = f.shift / lam;
      g.offset = f.offset + std::log(lam);
      break;
    case FieldId::Polynomial:
      for (auto& t : g.poly) t.c *= std::pow(lam, t.m[0] + (f.dim > 1 ? t.m[1] : 0));
      break;
    case FieldId::DeltaComb: {
      const double s = std::pow(lam, -f.dim);
      for (auto& at : g.atoms) {
        at.t[0] /= lam;
        at.t[1] /= lam;
        at.c *= s;
      }
      break;
    }
    case FieldId::SampledFourier: {
      g.grid->u_max = f.grid->u_max * lam;
      const double s = std::pow(lam, -f.dim);
      for (auto& z : g.grid->data) z *= s;
      break;
    }
  }
  if (g.window) g.window->radius = f.window->radius / lam;
  return g;
}

std::vector<GroundTruthScaling> ground_truth(const FieldSpec& f) {
  std::vector<GroundTruthScaling> out;
  const SlowVarySpec one{SlowVarySpec::Family::One, 0.0};
  auto both_sites = [&](double alpha, const FieldSpec& g) {
    out.push_back({Site::Origin, alpha, one, g});
    if (!f.window) out.push_back({Site::Infinity, alpha, one, g});
  };
  switch (f.id) {
    case FieldId::Delta: both_sites(-f.dim, f); break;
    case FieldId::Heaviside: both_sites(0.0, f); break;
    case FieldId::HomogeneousAbs:
    case FieldId::HomogeneousPlus: both_sites(f.a, f); break;
    case FieldId::Constant: both_sites(0.0, f); break;
    case FieldId::LogHeaviside: {
      FieldSpec h = f;
      h.id = FieldId::Heaviside;
      out.push_back({Site::Infinity, 0.0, SlowVarySpec{SlowVarySpec::Family::LogPow, 1.0}, h});
      break;
    }
    case FieldId::Polynomial: {
      if (f.poly.empty()) break;
      auto deg = [&](const PolyTerm& t) { return t.m[0] + (f.dim > 1 ? t.m[1] : 0); };
      int dmin = 1 << 20, dmax = -1;
      for (const auto& t : f.poly) {
        dmin = std::min(dmin, deg(t));
        dmax = std::max(dmax, deg(t));
      }
      FieldSpec lead = f, trail = f;
      lead.poly.clear();
      trail.poly.clear();
      for (const auto& t : f.poly) {
        if (deg(t) == dmax) lead.poly.push_back(t);
        if (deg(t) == dmin) trail.poly.push_back(t);
      }
      out.push_back({Site::Origin, static_cast<double>(dmin), one, trail});
      if (!f.window) out.push_back({Site::Infinity, static_cast<double>(dmax), one, lead});
      break;
    }
    case FieldId::DeltaComb: {
      cplx total(0.0, 0.0);
      cplx at_zero(0.0, 0.0);
      for (const auto& at : f.atoms) {
        total += at.c;
        if (norm(at.t, f.dim) == 0.0) at_zero += at.c;
      }
      FieldSpec d = f;
      d.id = FieldId::Delta;
      d.atoms.clear();
      if (std::abs(total) > 0.0 && !f.window) {
        FieldSpec g = d;
        for (auto& z : g.amplitude) z *= total;
        out.push_back({Site::Infinity, -static_cast<double>(f.dim), one, g});
      }
      if (std::abs(at_zero) > 0.0) {
        FieldSpec g = d;
        for (auto& z : g.amplitude) z *= at_zero;
        out.push_back({Site::Origin, -static_cast<double>(f.dim), one, g});
      }
      break;
    }
    case FieldId::SampledFourier: break;
  }
  return out;
}

}  // namespace qtb
