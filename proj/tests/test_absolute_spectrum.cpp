#include <doctest.h>

#include <cmath>

#include "trigfront/absolute_spectrum.hpp"
#include "trigfront/dispersion.hpp"

using namespace trigfront;

namespace {
BranchPoint origin(double chi, double c) { return find_double_root(chi, c, pinched_candidate_seed(chi, c)); }
}  // namespace

TEST_CASE("points on the curve carry two roots of equal real part") {
  double c = 1.5;
  auto curve = trace_absolute(origin(1.0, c), 8.0, 0.02);
  REQUIRE(curve.points.size() > 20);
  for (const auto& q : curve.points) {
    auto [a, b] = q.nu_pair;
    CHECK(std::abs(a.real() - b.real()) < 1e-8);
    CHECK(std::abs(eval_dispersion(1.0, c, q.lambda, a)) < 1e-8 * (1 + std::norm(q.lambda)));
    CHECK(std::abs(eval_dispersion(1.0, c, q.lambda, b)) < 1e-8 * (1 + std::norm(q.lambda)));
    // the pair is the middle one of the ordered set
    auto r = spatial_roots(1.0, c, q.lambda);
    CHECK(std::abs(r.nu[1].real() - r.nu[2].real()) < 1e-7);
  }
  CHECK(genericity_check(curve));
}

TEST_CASE("the curve starts at the branch point and that is its rightmost point") {
  double c = 1.5;
  auto bp = origin(1.0, c);
  auto curve = trace_absolute(bp, 8.0, 0.02);
  CHECK(std::abs(curve.points.front().lambda - bp.lambda_br) < 1e-8);
  cplx right = rightmost_absolute(1.0, c);
  CHECK(std::abs(right - bp.lambda_br) < 1e-10);
  for (const auto& q : curve.points) CHECK(q.lambda.real() <= right.real() + 1e-10);
}

TEST_CASE("departure from the branch point is quadratic in the separation") {
  auto bp = origin(1.0, 1.622);
  auto curve = trace_absolute(bp, 2.0, 0.002);
  // ratio (λ − λ_br)/γ² settles to a constant as γ → 0
  double r1 = 0, r2 = 0;
  for (const auto& q : curve.points) {
    double g = q.gamma_sep;
    if (r1 == 0 && g > 0.05) r1 = std::abs(q.lambda - bp.lambda_br) / (g * g);
    if (r2 == 0 && g > 0.1) r2 = std::abs(q.lambda - bp.lambda_br) / (g * g);
  }
  REQUIRE(r1 > 0);
  REQUIRE(r2 > 0);
  CHECK(std::abs(r1 / r2 - 1) < 0.1);
}

TEST_CASE("conjugate branch point gives the mirrored curve") {
  auto bp = origin(1.0, 1.5);
  BranchPoint mirror = find_double_root(1.0, 1.5, {std::conj(bp.lambda_br), std::conj(bp.nu_br)});
  CHECK(std::abs(mirror.lambda_br - std::conj(bp.lambda_br)) < 1e-12);
}
