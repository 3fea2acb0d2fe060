#include <doctest.h>

#include <cmath>

#include "trigfront/branch_point.hpp"
#include "trigfront/dispersion.hpp"

using namespace trigfront;

// values from tests/oracles/closed_forms.py
constexpr double kLam = 1.24197858236787062112;
constexpr double kC = 1.62207592591743338058;
constexpr double kMu = -0.261864413951873081290;
constexpr double kKappa = 0.840070779091305986733;

TEST_CASE("closed forms at alpha = 1") {
  auto cf = closed_form_spreading(1.0);
  CHECK(cf.c_lin == doctest::Approx(kC).epsilon(1e-15));
  CHECK(std::abs(cf.lambda_lin - cplx(0, kLam)) < 1e-15);
  CHECK(cf.mu_lin == doctest::Approx(kMu).epsilon(1e-15));
  CHECK(cf.kappa_lin == doctest::Approx(kKappa).epsilon(1e-15));
}

TEST_CASE("closed forms scale as lambda ~ a^2, c ~ a^1.5, nu ~ a^0.5") {
  auto one = closed_form_spreading(1.0);
  for (double a : {0.5, 2.0, 3.7}) {
    auto cf = closed_form_spreading(a);
    CHECK(cf.c_lin == doctest::Approx(one.c_lin * std::pow(a, 1.5)).epsilon(1e-13));
    CHECK(std::abs(cf.lambda_lin - one.lambda_lin * a * a) < 1e-12 * a * a);
    CHECK(std::abs(cf.nu_lin() - one.nu_lin() * std::sqrt(a)) < 1e-13);
  }
}

TEST_CASE("Newton from the candidate seeds lands on the pinched root") {
  auto bp = find_double_root(1.0, kC, pinched_candidate_seed(1.0, kC));
  CHECK(std::abs(bp.lambda_br - cplx(0, kLam)) < 1e-12);
  CHECK(std::abs(bp.nu_br - cplx(kMu, kKappa)) < 1e-12);
  CHECK(bp.residual_d < 1e-12);
  CHECK(bp.residual_dnu < 1e-12);
  CHECK(bp.pinched);
  CHECK(pinching_check(bp));
}

TEST_CASE("fastest-growing-mode seed also converges") {
  auto bp = find_double_root(1.0, kC, fastest_growing_mode_seed(1.0, kC));
  CHECK(std::abs(bp.lambda_br - cplx(0, kLam)) < 1e-10);
}

TEST_CASE("the real double root is not pinched") {
  // ∂νd = −4ν³ − 2ν + c has one real root, giving a real λ; ν₂ and ν₃ there are not from opposite sides
  double nu = 0;
  for (int i = 0; i < 60; ++i) nu -= (-4 * nu * nu * nu - 2 * nu + kC) / (-12 * nu * nu - 2);
  cplx lam = eval_dispersion(1.0, kC, 0.0, nu);  // d(λ, ν) = d(0, ν) − λ
  DoubleRootOptions o;
  o.check_pinching = false;
  auto bp = find_double_root(1.0, kC, {lam, nu}, o);
  CHECK(std::abs(bp.nu_br.imag()) < 1e-12);
  CHECK_FALSE(pinching_check(bp));
}

TEST_CASE("spreading speed search reproduces the closed forms") {
  for (double a : {0.5, 1.0, 2.0}) {
    auto num = find_spreading_speed(a);
    auto cf = closed_form_spreading(a);
    CHECK(num.c_lin == doctest::Approx(cf.c_lin).epsilon(1e-10));
    CHECK(std::abs(num.lambda_lin - cf.lambda_lin) < 1e-9 * std::abs(cf.lambda_lin));
  }
}

TEST_CASE("at c_lin the branch point sits on the imaginary axis") {
  for (double a : {0.5, 2.0}) {
    auto cf = closed_form_spreading(a);
    CHECK(std::abs(cf.lambda_lin.real()) < 1e-14);
    CHECK(std::abs(eval_dispersion(a, cf.c_lin, cf.lambda_lin, cf.nu_lin())) < 1e-12);
  }
}
