#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tauber.hpp"

using namespace qtb;

namespace {

Field f_of(FieldId id, double a = 0.5) {
  FieldSpec f;
  f.id = id;
  f.a = a;
  if (id == FieldId::Polynomial) f.poly = {{{1, 0}, cplx(1.0, 0.0)}};
  return Field(f);
}

const SlowVarySpec kOne{SlowVarySpec::Family::One, 0.0};

ScaleGrid wide_grid(Site site) { return sphere_grid(1, site, 16, 8, 1.0, 1.1892071150027210667, 160); }

}  // namespace

TEST_CASE("alpha estimation across the catalog") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity);
  const AlphaFit delta = estimate_alpha(compute_sheet(f_of(FieldId::Delta), g, grid), -1);
  CHECK(std::abs(delta.alpha_hat + 1.0) < 0.01);
  CHECK(delta.slow_vary.family == SlowVarySpec::Family::One);

  const AlphaFit hom = estimate_alpha(compute_sheet(f_of(FieldId::HomogeneousAbs), g, grid), -1);
  CHECK(std::abs(hom.alpha_hat - 0.5) < 0.02);
  CHECK(hom.slow_vary.family == SlowVarySpec::Family::One);

  const AlphaFit logh = estimate_alpha(compute_sheet(f_of(FieldId::LogHeaviside), g, wide_grid(Site::Infinity)), -1);
  CHECK(std::abs(logh.alpha_hat) < 0.02);
  CHECK(logh.slow_vary.family == SlowVarySpec::Family::LogPow);
  CHECK(std::abs(logh.slow_vary.b - 1.0) < 0.1);
}

TEST_CASE("tauberian exponent search") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity);
  CHECK(find_tauberian_k(compute_sheet(f_of(FieldId::Delta), g, grid), -1.0, kOne).k_hat == 1);
  CHECK(find_tauberian_k(compute_sheet(f_of(FieldId::Heaviside), g, grid), 0.0, kOne).k_hat == 0);
  CHECK_FALSE(find_tauberian_k(compute_sheet(f_of(FieldId::Polynomial), g, grid), 0.0, kOne).k_hat.has_value());
}

TEST_CASE("limit detection against oracles") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity);
  const size_t pole = grid.dirs.size() - 1;

  const auto delta = detect_limits(compute_sheet(f_of(FieldId::Delta), g, grid), -1.0, kOne);
  REQUIRE(delta[pole].converged);
  CHECK(std::abs(delta[pole].value[0] - 1.0 / std::sqrt(kTwoPi)) < 1e-10);

  const auto heav = detect_limits(compute_sheet(f_of(FieldId::Heaviside), g, grid), 0.0, kOne);
  REQUIRE(heav[pole].converged);
  CHECK(std::abs(heav[pole].value[0] - 0.5) < 1e-10);

  const auto hom = detect_limits(compute_sheet(f_of(FieldId::HomogeneousAbs), g, grid), 0.5, kOne);
  REQUIRE(hom[pole].converged);
  CHECK(std::abs(hom[pole].value[0] - oracle::abs_moment_gaussian(0.5)) < 1e-8);
}

TEST_CASE("critical-degree log fits") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = wide_grid(Site::Infinity);
  const size_t pole = grid.dirs.size() - 1;

  const CriticalFit logh = fit_critical_log(compute_sheet(f_of(FieldId::LogHeaviside), g, grid), 0);
  CHECK(std::abs(logh.log_coeff[pole][0] - 0.5) < 0.01);
  CHECK(std::isfinite(logh.g_part[pole][0].real()));

  const CriticalFit heav = fit_critical_log(compute_sheet(f_of(FieldId::Heaviside), g, grid), 0);
  CHECK(std::abs(heav.log_coeff[pole][0]) < 1e-3);
  CHECK(std::abs(heav.g_part[pole][0] - 0.5) < 1e-6);

  const CriticalFit delta = fit_critical_log(compute_sheet(f_of(FieldId::Delta), g, grid), -1);
  CHECK(std::abs(delta.log_coeff[pole][0]) < 1e-3);
}

TEST_CASE("associate homogeneous classification of sampled data") {
  const auto lambdas = geomspace(1.0, 1048576.0, 81);
  auto sample = [&](auto fn) {
    std::vector<CVec> c;
    for (double l : lambdas) c.push_back(CVec{cplx(fn(l), 0.0)});
    return c;
  };
  const auto aah =
      test_associate_homogeneous(lambdas, sample([](double l) { return std::log(l); }), kOne, Site::Infinity);
  CHECK(aah.is_aah);
  CHECK(std::abs(aah.v_hat[0] - 1.0) < 1e-3);

  const auto ahb = test_associate_homogeneous(
      lambdas, sample([](double l) { return std::sin(std::log(std::log(l + 3.0))); }), kOne, Site::Infinity);
  CHECK(ahb.is_ahb);
  CHECK_FALSE(ahb.is_aah);

  const auto bad =
      test_associate_homogeneous(lambdas, sample([](double l) { return std::pow(l, 0.1); }), kOne, Site::Infinity);
  CHECK_FALSE(bad.is_aah);
  CHECK_FALSE(bad.is_ahb);
}

TEST_CASE("annihilation equations on polynomials") {
  FieldSpec poly;
  poly.id = FieldId::Polynomial;
  poly.poly = {{{3, 0}, cplx(1.0, 0.0)}, {{1, 0}, cplx(-2.0, 0.0)}};
  CHECK(verify_annihilation(kernel_create("paper_lizorkin", 1), poly, 8) < 1e-7);

  FieldSpec t2cubed;
  t2cubed.dim = 2;
  t2cubed.id = FieldId::Polynomial;
  t2cubed.poly = {{{0, 3}, cplx(1.0, 0.0)}};
  CHECK(verify_annihilation(kernel_create("paper_mixed", 2), t2cubed, 4) < 1e-7);

  FieldSpec lin;
  lin.id = FieldId::Polynomial;
  lin.poly = {{{1, 0}, cplx(1.0, 0.0)}};
  CHECK(verify_annihilation(kernel_create("gaussian", 1), lin, 2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("full report composites") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScalingReport rep = full_report(f_of(FieldId::Delta), g, sphere_grid(1, Site::Infinity));
  CHECK(std::abs(rep.alpha_hat + 1.0) < 0.01);
  CHECK(rep.slow_vary.family == SlowVarySpec::Family::One);
  CHECK(rep.k_hat == 1);
  CHECK(rep.homogeneity_deviation < 2e-2);

  CHECK_THROWS_AS(
      (void)full_report(f_of(FieldId::Delta), kernel_create("degenerate_demo", 2), sphere_grid(2, Site::Infinity)),
      Error);
}

TEST_CASE("a slope transition inside the tail raises NoStableSlope") {
  // Delta + small constant: the reference slope crosses from -1 to 0 inside
  // the last two decades of a short ladder
  const Kernel g = kernel_create("gaussian", 1);
  Field mix = f_of(FieldId::Delta);
  FieldSpec c;
  c.id = FieldId::Constant;
  c.amplitude = {cplx(2e-4, 0.0)};
  mix.terms.push_back(c);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity, 6, 8, 1.0, 1.1892071150027210667, 44);
  CHECK_THROWS_AS((void)estimate_alpha(compute_sheet(mix, g, grid), static_cast<int>(grid.dirs.size()) - 1), Error);
}

TEST_CASE("negative-exponent homogeneous entries work through the pipeline") {
  const Kernel g = kernel_create("gaussian", 1);
  const Field f = f_of(FieldId::HomogeneousAbs, -0.5);
  const cplx v = eval_transform(f, g, {0.0, 0.0}, 1.0)[0];
  CHECK(std::abs(v.real() - oracle::abs_moment_gaussian(-0.5)) < 1e-7);
  const ScalingReport rep = full_report(f, g, sphere_grid(1, Site::Infinity));
  CHECK(std::abs(rep.alpha_hat + 0.5) < 0.02);
  CHECK(rep.slow_vary.family == SlowVarySpec::Family::One);
  CHECK(rep.k_hat.has_value());
}

TEST_CASE("an identically-zero sheet yields a flagged partial report") {
  const Kernel lz = kernel_create("paper_lizorkin", 1);
  FieldSpec poly;
  poly.id = FieldId::Polynomial;
  poly.poly = {{{1, 0}, cplx(1.0, 0.0)}};
  const ScalingReport rep = full_report(Field(poly), lz, sphere_grid(1, Site::Infinity));
  CHECK(std::isnan(rep.alpha_hat));
  REQUIRE(rep.flags.size() >= 1);
  CHECK(rep.flags.front() == "alpha:AllZeroSheet");
}

TEST_CASE("catalog round trip: alpha and family recovered for ground-truth entries") {
  for (const char* kname : {"gaussian", "heat_symbol"}) {
    const Kernel k = kernel_create(kname, 1);
    for (FieldId id : {FieldId::Delta, FieldId::Heaviside, FieldId::HomogeneousPlus, FieldId::Constant}) {
      const Field f = f_of(id);
      for (const auto& gt : ground_truth(f.terms.front())) {
        const ScalingReport rep = full_report(f, k, sphere_grid(1, gt.site));
        CHECK(std::abs(rep.alpha_hat - gt.alpha) < 0.02);
        CHECK(rep.slow_vary.family == gt.L.family);
      }
    }
  }
}

TEST_CASE("polynomial terms are invisible to Lizorkin analysis") {
  const Kernel lz = kernel_create("paper_lizorkin", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity);
  FieldSpec poly;
  poly.id = FieldId::Polynomial;
  poly.poly = {{{0, 0}, cplx(1.0, 0.0)},
               {{1, 0}, cplx(-2.0, 0.0)},
               {{2, 0}, cplx(0.5, 0.0)},
               {{3, 0}, cplx(1.0, 0.0)},
               {{4, 0}, cplx(-0.25, 0.0)}};
  Field plain = f_of(FieldId::Delta);
  Field shifted = plain;
  shifted.terms.push_back(poly);
  const ScalingReport a = full_report(plain, lz, grid);
  const ScalingReport b = full_report(shifted, lz, grid);
  CHECK(std::abs(a.alpha_hat - b.alpha_hat) < 1e-6);
  CHECK(a.k_hat == b.k_hat);
  REQUIRE(a.limits.size() == b.limits.size());
  for (size_t d = 0; d < a.limits.size(); ++d) {
    CHECK(a.limits[d].converged == b.limits[d].converged);
    if (a.limits[d].converged)
      CHECK(norm2(a.limits[d].value) == doctest::Approx(norm2(b.limits[d].value)).epsilon(1e-6));
  }
}

TEST_CASE("origin reports are local: far-field windows change nothing") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Origin, 16, 8, 1.0, 1.1892071150027210667, 64);
  for (FieldId id : {FieldId::Heaviside, FieldId::HomogeneousAbs}) {
    Field plain = f_of(id);
    Field windowed = plain;
    windowed.terms.front().window = Window{1.0};
    const ScalingReport a = full_report(plain, g, grid);
    const ScalingReport b = full_report(windowed, g, grid);
    CHECK(std::abs(a.alpha_hat - b.alpha_hat) < 2e-2);
    CHECK(a.slow_vary.family == b.slow_vary.family);
    CHECK(a.k_hat == b.k_hat);
    for (size_t d = 0; d < a.limits.size(); ++d)
      if (a.limits[d].converged && b.limits[d].converged && norm2(a.limits[d].value) > 1e-6)
        CHECK(norm2(a.limits[d].value) == doctest::Approx(norm2(b.limits[d].value)).epsilon(2e-2));
  }
}

TEST_CASE("origin scaling is insensitive to the observation window") {
  const Kernel g = kernel_create("gaussian", 1);
  for (FieldId id : {FieldId::Delta, FieldId::Heaviside, FieldId::HomogeneousAbs}) {
    const ScalingReport full = full_report(f_of(id), g, sphere_grid(1, Site::Origin, 12, 8, 1.0));
    const ScalingReport clipped = full_report(f_of(id), g, sphere_grid(1, Site::Origin, 12, 8, 0.5));
    CHECK(std::abs(full.alpha_hat - clipped.alpha_hat) < 0.02);
  }
}

TEST_CASE("positive rescaling shifts log-limits only") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity);
  for (double c : {1e-3, 1e3}) {
    Field base = f_of(FieldId::HomogeneousAbs);
    Field scaled = base;
    scaled.terms.front().amplitude[0] *= c;
    const ScalingReport a = full_report(base, g, grid);
    const ScalingReport b = full_report(scaled, g, grid);
    CHECK(std::abs(a.alpha_hat - b.alpha_hat) < 1e-8);
    CHECK(a.k_hat == b.k_hat);
    CHECK(a.slow_vary.family == b.slow_vary.family);
    for (size_t d = 0; d < a.limits.size(); ++d) {
      CHECK(a.limits[d].converged == b.limits[d].converged);
      if (a.limits[d].converged && norm2(a.limits[d].value) > 1e-12)
        CHECK(std::log(norm2(b.limits[d].value)) - std::log(norm2(a.limits[d].value)) ==
              doctest::Approx(std::log(c)).epsilon(1e-8));
    }
  }
}

TEST_CASE("slowly varying families pass the Karamata self-check") {
  // L(a lambda)/L(lambda) -> 1: the deviation must shrink along the tail
  for (auto family : {SlowVarySpec::Family::One, SlowVarySpec::Family::LogPow, SlowVarySpec::Family::LogLogPow}) {
    const SlowVarySpec L{family, 1.0};
    for (double a : {2.0, 10.0}) {
      double prev = 1e300;
      for (double lam : {1e6, 1e9, 1e12, 1e15}) {
        const double dev = std::abs(L.eval(a * lam, Site::Infinity) / L.eval(lam, Site::Infinity) - 1.0);
        CHECK(dev <= prev + 1e-15);
        prev = dev;
      }
      CHECK(prev < 0.1);
      prev = 1e300;
      for (double lam : {1e-6, 1e-9, 1e-12, 1e-15}) {
        const double dev = std::abs(L.eval(lam / a, Site::Origin) / L.eval(lam, Site::Origin) - 1.0);
        CHECK(dev <= prev + 1e-15);
        prev = dev;
      }
      CHECK(prev < 0.1);
    }
  }
}

TEST_CASE("dim-2 sheets recover the planar point-mass scaling") {
  FieldSpec delta;
  delta.id = FieldId::Delta;
  delta.dim = 2;
  const Kernel g = kernel_create("gaussian", 2);
  const ScaleGrid grid = sphere_grid(2, Site::Infinity, 6, 6, 1.0, 1.1892071150027210667, 48);
  const ScalingReport rep = full_report(Field(delta), g, grid);
  CHECK(std::abs(rep.alpha_hat + 2.0) < 0.01);
  CHECK(rep.k_hat == 2);
  const size_t pole = rep.limits.size() - 1;
  REQUIRE(rep.limits[pole].converged);
  CHECK(std::abs(rep.limits[pole].value[0] - 1.0 / kTwoPi) < 1e-9);  // (2pi)^{-1} e^{0}
}

TEST_CASE("vector-valued fields carry componentwise scaling data") {
  FieldSpec delta;
  delta.id = FieldId::Delta;
  delta.vector_dim = 2;
  delta.amplitude = {cplx(1.0, 0.0), cplx(0.0, 3.0)};
  const Kernel g = kernel_create("gaussian", 1);
  const ScalingReport rep = full_report(Field(delta), g, sphere_grid(1, Site::Infinity));
  CHECK(std::abs(rep.alpha_hat + 1.0) < 0.01);
  const size_t pole = rep.limits.size() - 1;
  REQUIRE(rep.limits[pole].converged);
  CHECK(std::abs(rep.limits[pole].value[0] - cplx(1.0 / std::sqrt(kTwoPi), 0.0)) < 1e-9);
  CHECK(std::abs(rep.limits[pole].value[1] - cplx(0.0, 3.0 / std::sqrt(kTwoPi))) < 1e-9);
}
