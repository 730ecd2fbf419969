#include <doctest.h>

#include <random>

#include "kernels.hpp"
#include "oracles.hpp"

using namespace qtb;

TEST_CASE("non-degeneracy verdicts across the catalog") {
  CHECK(check_nondegenerate(kernel_create("gaussian", 1), 1e-9).verdict);
  CHECK(check_nondegenerate(kernel_create("heat_symbol", 1), 1e-9).verdict);
  CHECK(check_nondegenerate(kernel_create("paper_lizorkin", 1), 1e-9).verdict);
  CHECK(check_nondegenerate(kernel_create("paper_mixed", 2), 1e-9).verdict);
  CHECK(check_nondegenerate(kernel_create("cone_exponential", 1), 1e-9).verdict);

  const NondegReport bad = check_nondegenerate(kernel_create("degenerate_demo", 2), 1e-9);
  CHECK_FALSE(bad.verdict);
  CHECK(std::abs(bad.worst_ray[0]) < 1e-9);  // vanishing ray is the u1 = 0 axis
  CHECK(std::abs(std::abs(bad.worst_ray[1]) - 1.0) < 1e-9);
}

TEST_CASE("grid too coarse guard") {
  Kernel g = kernel_create("gaussian", 1);
  g.r_pts = 4;
  CHECK_THROWS_AS((void)check_nondegenerate(g), Error);
}

TEST_CASE("taylor terms of the catalog kernels") {
  const TaylorTerms tg = taylor_terms(kernel_create("gaussian", 1), 2);
  CHECK(std::abs(tg.coef.at({0, 0}) - 1.0) < 1e-10);
  CHECK(std::abs(tg.coef.at({1, 0})) < 1e-10);
  CHECK(std::abs(tg.coef.at({2, 0}) + 0.5) < 1e-8);

  const TaylorTerms tl = taylor_terms(kernel_create("paper_lizorkin", 1), 4);
  for (const auto& [m, c] : tl.coef) CHECK(std::abs(c) < 1e-6);

  const TaylorTerms tm = taylor_terms(kernel_create("paper_mixed", 2), 2);
  CHECK(std::abs(tm.coef.at({0, 0})) < 1e-6);
  CHECK(std::abs(tm.coef.at({1, 0})) < 1e-6);
  CHECK(std::abs(tm.coef.at({0, 1})) < 1e-6);
  CHECK(std::abs(tm.coef.at({2, 0}) - 1.0) < 1e-8);
  CHECK(std::abs(tm.coef.at({0, 2})) < 1e-6);
  CHECK(std::abs(tm.coef.at({1, 1})) < 1e-6);
}

TEST_CASE("strong non-degeneracy matches the catalog classification") {
  const StrongNondegReport g = check_strongly_nondegenerate(kernel_create("gaussian", 1), 2, 1e-9);
  CHECK(g.verdict);
  CHECK(g.witness_order == 0);
  CHECK_FALSE(check_strongly_nondegenerate(kernel_create("paper_lizorkin", 1), 8, 1e-9).verdict);
  CHECK_FALSE(check_strongly_nondegenerate(kernel_create("paper_mixed", 2), 8, 1e-9).verdict);
}

TEST_CASE("moments against quadrature oracles") {
  const auto mg = moments(kernel_create("gaussian", 1), 4);
  CHECK(std::abs(mg.at({0, 0}) - 1.0) < 1e-12);
  const double second = oracle::gauss_kronrod([](double t) { return t * t * oracle::gaussian_pdf(t); }, -40.0, 40.0);
  CHECK(std::abs(mg.at({2, 0}) - second) < 1e-7);

  const auto ml = moments(kernel_create("paper_lizorkin", 1), 4);
  for (const auto& [m, v] : ml) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("lizorkin membership surrogate: flat radial data near the origin") {
  const Kernel lz = kernel_create("paper_lizorkin", 1);
  for (double r : {1e-3, 2e-3, 5e-3, 1e-2}) {
    CHECK(std::abs(kernel_fourier(lz, {r, 0.0})) < 1e-10);
    // sampled radial finite differences stay at the same scale
    const double fd = std::abs(kernel_fourier(lz, {r + 1e-3, 0.0}) - kernel_fourier(lz, {r, 0.0})) / 1e-3;
    CHECK(fd < 1e-10);
  }
}

TEST_CASE("compose_lizorkin examples") {
  const Kernel g1 = kernel_create("gaussian", 1);
  const Kernel lz = kernel_create("paper_lizorkin", 1);
  const Kernel c = compose_lizorkin(g1, lz);
  CHECK(c.is_lizorkin());
  CHECK(check_nondegenerate(c).verdict);
  const double r = 0.7;
  CHECK(std::abs(kernel_fourier(c, {r, 0.0}) - std::exp(-0.5 * r * r) * std::exp(-r - 1.0 / r)) < 1e-14);

  const Kernel lz2 = kernel_create("paper_lizorkin", 2);
  const Kernel dd = kernel_create("degenerate_demo", 2);
  const Kernel dc = compose_lizorkin(dd, lz2);
  CHECK_FALSE(check_nondegenerate(dc).verdict);

  const auto mm = moments(compose_lizorkin(lz, lz), 4);
  for (const auto& [m, v] : mm) CHECK(std::abs(v) < 1e-8);

  CHECK_THROWS_AS((void)compose_lizorkin(g1, lz2), Error);   // dim mismatch
  CHECK_THROWS_AS((void)compose_lizorkin(lz, g1), Error);    // second factor not Lizorkin
}

TEST_CASE("non-degeneracy verdict is invariant under nonzero constant multiples") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int rep = 0; rep < 5; ++rep) {
    const cplx c(uni(rng), uni(rng));
    if (std::abs(c) < 0.1) continue;
    CHECK(check_nondegenerate(with_amplitude(kernel_create("paper_lizorkin", 1), c)).verdict);
    CHECK_FALSE(check_nondegenerate(with_amplitude(kernel_create("degenerate_demo", 2), c)).verdict);
  }
}

TEST_CASE("strongly non-degenerate implies non-degenerate over the catalog") {
  for (const auto& [name, dim] : std::vector<std::pair<std::string, int>>{{"gaussian", 1},
                                                                          {"heat_symbol", 1},
                                                                          {"paper_lizorkin", 1},
                                                                          {"paper_mixed", 2},
                                                                          {"degenerate_demo", 2},
                                                                          {"cone_exponential", 1}}) {
    const Kernel k = kernel_create(name, dim);
    const StrongNondegReport s = check_strongly_nondegenerate(k, 4, 1e-9);
    if (s.verdict) CHECK(check_nondegenerate(k).verdict);
  }
}

TEST_CASE("physical profiles match quadrature oracles") {
  const Kernel g1 = kernel_create("gaussian", 1);
  CHECK(kernel_phys(g1, {0.7, 0.0}).real() == doctest::Approx(oracle::gaussian_pdf(0.7)).epsilon(1e-10));
  CHECK(kernel_cdf(g1, -0.3).real() == doctest::Approx(oracle::gaussian_cdf(-0.3)).epsilon(1e-10));

  const Kernel lz = kernel_create("paper_lizorkin", 1);
  // psi(t) = (1/pi) int_0^inf e^{-r-1/r} cos(rt) dr
  for (double t : {0.0, 1.3, 4.0}) {
    const double want =
        oracle::gauss_kronrod([&](double r) { return std::exp(-r - 1.0 / r) * std::cos(r * t); }, 0.0, 60.0) / kPi;
    CHECK(kernel_phys(lz, {t, 0.0}).real() == doctest::Approx(want).epsilon(1e-7));
    CHECK(std::abs(kernel_phys(lz, {t, 0.0}).imag()) < 1e-10);
  }
  // Lizorkin kernels have zero total mass
  CHECK(std::abs(kernel_cdf(lz, 1e4)) < 1e-9);
}

TEST_CASE("cone exponential matches e^{-u} on the cone") {
  const Kernel ce = kernel_create("cone_exponential", 1);
  for (double u : {0.0, 0.5, 3.0, 20.0}) CHECK(kernel_fourier(ce, {u, 0.0}).real() == doctest::Approx(std::exp(-u)));
  CHECK(std::abs(kernel_fourier(ce, {-2.0, 0.0})) == 0.0);
  CHECK(std::abs(kernel_mass(ce) - 1.0) < 1e-14);
}
