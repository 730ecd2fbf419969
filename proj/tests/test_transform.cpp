#include <doctest.h>

#include "numerics.hpp"
#include "oracles.hpp"
#include "tauber.hpp"
#include "transform.hpp"

using namespace qtb;

namespace {

Field f_of(FieldId id, double a = 0.5) {
  FieldSpec f;
  f.id = id;
  f.a = a;
  if (id == FieldId::Polynomial) f.poly = {{{1, 0}, cplx(1.0, 0.0)}};
  return Field(f);
}

}  // namespace

TEST_CASE("pointwise transform values against closed forms and oracles") {
  const Kernel g = kernel_create("gaussian", 1);
  CHECK(eval_transform(f_of(FieldId::Delta), g, {0, 0}, 1.0)[0].real() ==
        doctest::Approx(1.0 / std::sqrt(kTwoPi)).epsilon(1e-12));
  for (double y : {0.2, 1.0, 7.0})
    CHECK(eval_transform(f_of(FieldId::Heaviside), g, {0, 0}, y)[0].real() == doctest::Approx(0.5).epsilon(1e-12));
  const double want = oracle::abs_moment_gaussian(0.5);
  CHECK(eval_transform(f_of(FieldId::HomogeneousAbs), g, {0, 0}, 1.0)[0].real() ==
        doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("sheet homogeneity columns") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity);
  const TransformSheet delta = compute_sheet(f_of(FieldId::Delta), g, grid);
  for (size_t d = 0; d < grid.dirs.size(); ++d) {
    const double base = delta.at(d, 0)[0].real() * grid.lambdas[0];
    for (size_t j = 1; j < grid.lambdas.size(); ++j)
      CHECK(std::abs(delta.at(d, j)[0].real() * grid.lambdas[j] - base) < 1e-12 * (1.0 + std::abs(base)));
  }
  const TransformSheet heav = compute_sheet(f_of(FieldId::Heaviside), g, grid);
  for (size_t d = 0; d < grid.dirs.size(); ++d)
    for (size_t j = 1; j < grid.lambdas.size(); ++j)
      CHECK(std::abs(heav.at(d, j)[0] - heav.at(d, 0)[0]) < 1e-12);
}

TEST_CASE("log-heaviside sheet grows like half a logarithm at the pole") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity, 4, 8, 1.0, 1.1892071150027210667, 96);
  const TransformSheet sheet = compute_sheet(f_of(FieldId::LogHeaviside), g, grid);
  const size_t pole = grid.dirs.size() - 1;
  std::vector<double> residue;
  for (size_t j = grid.lambdas.size() - 8; j < grid.lambdas.size(); ++j)
    residue.push_back(sheet.at(pole, j)[0].real() - 0.5 * std::log(grid.lambdas[j]));
  for (size_t i = 1; i < residue.size(); ++i) CHECK(std::abs(residue[i] - residue[i - 1]) < 2e-4);
  // the constant is int_0^inf log(s) phi(-s) ds
  const double c0 = oracle::tanh_sinh([](double s) { return std::log(s) * oracle::gaussian_pdf(s); }, 0.0, 40.0);
  CHECK(residue.back() == doctest::Approx(c0).epsilon(5e-3));
}

TEST_CASE("wavelet transform reduces to the sheet for real even kernels") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity, 4, 8, 1.0, 1.1892071150027210667, 48);
  const TransformSheet w = wavelet_transform(f_of(FieldId::Heaviside), g, grid);
  const TransformSheet m = compute_sheet(f_of(FieldId::Heaviside), g, grid);
  for (size_t i = 0; i < w.values.size(); ++i) CHECK(std::abs(w.values[i][0] - m.values[i][0]) < 1e-12);
}

TEST_CASE("vanishing moments annihilate polynomials") {
  const Kernel lz = kernel_create("paper_lizorkin", 1);
  FieldSpec poly;
  poly.id = FieldId::Polynomial;
  poly.poly = {{{0, 0}, cplx(2.0, 0.0)}, {{1, 0}, cplx(-1.0, 0.0)}, {{4, 0}, cplx(0.25, 0.0)}};
  const ScaleGrid grid = sphere_grid(1, Site::Infinity, 4, 8, 1.0, 1.1892071150027210667, 48);
  for (const Kernel& k : {lz, compose_lizorkin(kernel_create("gaussian", 1), lz)}) {
    const TransformSheet sheet = wavelet_transform(Field(poly), k, grid);
    for (const auto& v : sheet.values) CHECK(std::abs(v[0]) < 1e-8);
  }

  Field mixed;
  FieldSpec delta;
  delta.id = FieldId::Delta;
  FieldSpec lin;
  lin.id = FieldId::Polynomial;
  lin.poly = {{{1, 0}, cplx(1.0, 0.0)}};
  mixed.terms = {delta, lin};
  const TransformSheet both = wavelet_transform(mixed, lz, grid);
  const TransformSheet alone = wavelet_transform(Field(delta), lz, grid);
  for (size_t i = 0; i < both.values.size(); ++i) CHECK(std::abs(both.values[i][0] - alone.values[i][0]) < 1e-8);
}

TEST_CASE("global growth exponents on box sheets") {
  const Kernel g = kernel_create("gaussian", 1);
  const BoxGrid box = default_box_grid();
  const GrowthFit fd = fit_global_growth(compute_box_sheet(f_of(FieldId::Delta), g, box));
  CHECK(fd.k == 1);
  CHECK(fd.l == 0);
  const GrowthFit fh = fit_global_growth(compute_box_sheet(f_of(FieldId::Heaviside), g, box));
  CHECK(fh.k == 0);
  CHECK(fh.l == 0);
  FieldSpec sq;
  sq.id = FieldId::Polynomial;
  sq.poly = {{{2, 0}, cplx(1.0, 0.0)}};
  const GrowthFit fp = fit_global_growth(compute_box_sheet(Field(sq), g, box));
  CHECK(fp.k == 2);
  CHECK(fp.l == 2);
}

TEST_CASE("abelian consistency: normalized sheets approach the limit transform") {
  const Kernel g = kernel_create("gaussian", 1);
  for (FieldId id : {FieldId::Delta, FieldId::Heaviside, FieldId::HomogeneousAbs, FieldId::Constant}) {
    const Field f = f_of(id);
    for (const auto& gt : ground_truth(f.terms.front())) {
      const ScaleGrid grid = sphere_grid(1, gt.site, 6, 8);
      const TransformSheet sheet = compute_sheet(f, g, grid);
      const size_t last = grid.lambdas.size() - 1;
      for (size_t d = 0; d < grid.dirs.size(); ++d) {
        const CVec lim = eval_transform(Field(gt.limit_field), g, grid.dirs[d].x, grid.dirs[d].y);
        const double den = std::pow(grid.lambdas[last], gt.alpha) * gt.L.eval(grid.lambdas[last], gt.site);
        const cplx got = sheet.at(d, last)[0] / den;
        CHECK(std::abs(got - lim[0]) <= 1e-3 * (1.0 + std::abs(lim[0])));
      }
    }
  }
}

TEST_CASE("frequency and closed-form paths agree to 1e-6") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity, 6, 8, 1.0, 1.1892071150027210667, 48);
  for (FieldId id : {FieldId::Delta, FieldId::Heaviside}) {
    const TransformSheet closed = compute_sheet(f_of(id), g, grid, Method::ClosedForm);
    const TransformSheet fft = compute_sheet(f_of(id), g, grid, Method::FFT);
    for (size_t i = 0; i < closed.values.size(); ++i) {
      const double scale = std::abs(closed.values[i][0]);
      if (scale < 1e-14) continue;
      CHECK(std::abs(closed.values[i][0] - fft.values[i][0]) < 1e-6 * scale);
    }
  }
}

TEST_CASE("sheet linearity on the frequency path") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity, 4, 8, 1.0, 1.1892071150027210667, 48);
  FieldSpec delta;
  delta.id = FieldId::Delta;
  FieldSpec comb;
  comb.id = FieldId::DeltaComb;
  comb.atoms = {{{0.7, 0.0}, cplx(0.5, 0.25)}};
  Field sum;
  sum.terms = {delta, comb};
  const TransformSheet s_sum = compute_sheet(sum, g, grid, Method::FFT);
  const TransformSheet s_a = compute_sheet(Field(delta), g, grid, Method::FFT);
  const TransformSheet s_b = compute_sheet(Field(comb), g, grid, Method::FFT);
  for (size_t i = 0; i < s_sum.values.size(); ++i)
    CHECK(std::abs(s_sum.values[i][0] - s_a.values[i][0] - s_b.values[i][0]) < 1e-10);
}

namespace {

// lambda-scaled box bound: smallest (k, l) with a stable running max of
// max_box ||M(lambda x, lambda y)|| / (lambda^a L (1/y+y)^k (1+|x|)^l).
std::optional<std::pair<int, int>> scaled_box_growth(const Field& f, const Kernel& kern, double alpha) {
  const auto xs = linspace(-8.0, 8.0, 17);
  const auto ys = geomspace(0.0625, 16.0, 17);
  const auto lams = geomspace(1.0, 256.0, 17);
  for (int k = 0; k <= 16; ++k)
    for (int l = 0; l <= 16; ++l) {
      std::vector<double> lx, lv;
      double runmax = 0.0;
      for (double lam : lams) {
        double sup = 0.0;
        for (double x : xs)
          for (double y : ys) {
            const double n = norm2(eval_transform(f, kern, {lam * x, 0.0}, lam * y));
            sup = std::max(sup, n / (std::pow(lam, alpha) * std::pow(1.0 / y + y, k) * std::pow(1.0 + std::abs(x), l)));
          }
        runmax = std::max(runmax, sup);
        lx.push_back(std::log(lam));
        lv.push_back(std::log(runmax + 1e-280));
      }
      if (fit_slope(lx, lv) <= 0.05) return std::make_pair(k, l);
    }
  return std::nullopt;
}

}  // namespace

TEST_CASE("sphere estimate and scaled box bound succeed or fail together") {
  const Kernel g = kernel_create("gaussian", 1);
  const ScaleGrid grid = sphere_grid(1, Site::Infinity, 8, 8);
  const SlowVarySpec one{SlowVarySpec::Family::One, 0.0};
  struct Case {
    FieldId id;
    double alpha;
  };
  for (const Case& c : {Case{FieldId::Delta, -1.0}, Case{FieldId::Heaviside, 0.0},
                        Case{FieldId::HomogeneousAbs, 0.5}, Case{FieldId::Polynomial, 1.0}}) {
    const Field f = f_of(c.id);
    const KFit kf = find_tauberian_k(compute_sheet(f, g, grid), c.alpha, one);
    const auto box = scaled_box_growth(f, g, c.alpha);
    CHECK(kf.k_hat.has_value());
    CHECK(box.has_value());
  }
  // wrong normalization: both searches must fail
  const Field lin = f_of(FieldId::Polynomial);
  const KFit kf = find_tauberian_k(compute_sheet(lin, g, grid), 0.0, one);
  CHECK_FALSE(kf.k_hat.has_value());
  CHECK_FALSE(scaled_box_growth(lin, g, 0.0).has_value());
}

TEST_CASE("grid aliasing guard on sampled spectra") {
  FieldSpec sampled;
  sampled.id = FieldId::SampledFourier;
  FourierGrid fg;
  fg.u_max = 2.0;  // far too narrow for the kernel at small y
  fg.pts = 64 + 1;
  for (int i = 0; i <= 64; ++i) fg.data.push_back(cplx(1.0, 0.0));
  sampled.grid = fg;
  const Kernel g = kernel_create("gaussian", 1);
  CHECK_THROWS_AS((void)eval_transform(Field(sampled), g, {0.0, 0.0}, 0.05), Error);
  CHECK_NOTHROW((void)eval_transform(Field(sampled), g, {0.0, 0.0}, 8.0));
}

TEST_CASE("scale grid validation") {
  ScaleGrid g = sphere_grid(1, Site::Infinity);
  g.lambdas.resize(8);
  CHECK_THROWS_AS(validate(g), Error);
  ScaleGrid g2 = sphere_grid(1, Site::Infinity);
  g2.dirs[0].y = -1.0;
  CHECK_THROWS_AS(validate(g2), Error);
}
