#include <doctest.h>

#include <cmath>

#include "trigfront/errors.hpp"
#include "trigfront/hopf.hpp"
#include "trigfront/simulate.hpp"

using namespace trigfront;

namespace {
ModelParams at(double ell, double gamma) {
  ModelParams p;
  p.ell = ell;
  p.gamma = gamma;
  return p;
}
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

// tests/oracles/hopf_theta.py shoots the exact piecewise solutions in extended precision and integrates
// on a fine grid. Its quadrature of the tails limits agreement to ~1e-3 for the inner normalization.
TEST_CASE("theta+ with inner-product normalization matches the shooting oracle") {
  struct Row {
    double ell;
    cplx theta;
  };
  for (auto r : {Row{10, {-0.34374, -0.23813}}, Row{20, {-0.0863558, -0.0618399}}, Row{40, {-0.0144331, -0.0105721}}}) {
    auto h = compute_hopf(at(r.ell, 1.0), Normalization::inner_product);
    CHECK(rel(h.theta_plus, r.theta) < 3e-3);
    CHECK(h.direction == Direction::subcritical);
    CHECK(h.sbp_mismatch < 1e-6);
  }
}

TEST_CASE("paper_AB normalization matches the oracle where the plateau fit holds") {
  HopfPipelineOptions o;
  auto h = compute_hopf(at(40, 1.0), Normalization::paper_AB, o);
  CHECK(rel(h.theta_plus, {-0.0229506, -0.0168522}) < 1e-4);
  CHECK(h.fit_r2 == doctest::Approx(0.99536).epsilon(1e-4));
}

TEST_CASE("paper_AB fit gate trips at l = 20") {
  CHECK_THROWS_AS(compute_hopf(at(20, 1.0), Normalization::paper_AB), NormalizationFitFailure);
  HopfPipelineOptions o;
  o.min_fit_r2 = 0;
  auto h = compute_hopf(at(20, 1.0), Normalization::paper_AB, o);
  CHECK(rel(h.theta_plus, {-0.2227869, -0.1610359}) < 1e-4);
  CHECK(h.fit_r2 == doctest::Approx(0.983738).epsilon(1e-4));
}

TEST_CASE("theta+ is linear in gamma and theta- is its conjugate") {
  auto a = compute_hopf(at(20, 1.0), Normalization::inner_product);
  auto b = compute_hopf(at(20, -0.3), Normalization::inner_product);
  CHECK(rel(b.theta_plus, -0.3 * a.theta_plus) < 1e-10);
  CHECK(std::abs(a.theta_minus - std::conj(a.theta_plus)) < 1e-14);
  CHECK(b.direction == Direction::supercritical);
  CHECK(b.mu_prime > 0);
  CHECK(b.mu_prime == doctest::Approx(-b.dRe_dc));
  CHECK(b.upsilon_c == doctest::Approx(b.theta_plus.real() / b.mu_prime));
}

TEST_CASE("leading-order value") {
  cplx t = leading_order_theta(1.0, 1.0);
  CHECK(std::abs(t - cplx(-1.1414201982564333, -17.011433276598946)) < 1e-12);
  CHECK(std::abs(leading_order_theta(1.0, -2.0) + 2.0 * t) < 1e-12);
}

TEST_CASE("branch prediction bends toward smaller c for gamma < 0") {
  auto h = compute_hopf(at(20, -1.0), Normalization::inner_product);
  auto rows = branch_prediction(h, {0.0, 0.1, 0.2});
  CHECK(rows[0].c == doctest::Approx(h.c_star));
  CHECK(rows[0].omega == doctest::Approx(h.omega_star));
  CHECK(rows[1].c < h.c_star);
  CHECK(rows[2].c < rows[1].c);
  CHECK(rows[2].omega == doctest::Approx(h.omega_star + h.theta_plus.imag() * 0.04));
}

TEST_CASE("quadratic modes solve their linear problems for a synthetic f''") {
  ModelParams p = at(20, -1.0);
  auto cr = find_hopf_crossing(p);
  p.c = cr.c_star;
  double L = std::ceil(35 / 0.05 - 1e-9) * 0.05;
  auto op = build_operator(p, L, 0.05);
  auto pair = leading_pair(op, cr.lambda_star);
  RVec fpp(op.n);
  for (int i = 0; i < op.n; ++i) fpp[i] = 0.5 * std::exp(-op.x[i] * op.x[i] / 50);
  auto m = solve_quadratic_modes(op, pair, cr.lambda_star.imag(), fpp);
  CHECK_FALSE(m.trivial);
  CHECK(m.residual_plus < 1e-8);
  CHECK(m.residual_zero < 1e-8);
  auto h0 = hopf_coefficient(op, pair, solve_quadratic_modes(op, pair, cr.lambda_star.imag(), RVec(op.n, 0.0)), cr,
                             Normalization::inner_product);
  auto h1 = hopf_coefficient(op, pair, m, cr, Normalization::inner_product);
  CHECK(std::abs(h1.theta_plus - h0.theta_plus) > 1e-6);  // the quadratic modes feed back
  CHECK(h1.sbp_mismatch < 1e-6);
}

TEST_CASE("normal form predicts the simulated amplitude") {
  ModelParams p = at(20, -1.0);
  auto h = compute_hopf(p, Normalization::inner_product);
  // |p| at its maximum, same normalization as theta
  ModelParams q = p;
  q.c = h.c_star;
  double L = std::ceil(35 / 0.05 - 1e-9) * 0.05;
  auto op = build_operator(q, L, 0.05);
  auto pair = leading_pair(op, h.lambda);
  double pmax = 0, xr = 0;
  for (int i = 0; i < op.n; ++i)
    if (std::abs(pair.v[i]) > pmax) pmax = std::abs(pair.v[i]), xr = op.x[i];
  const double dc = 0.005;
  // ż = (iω + μ′Δc) z − (θ₊/6)|z|² z with u ≈ z p + c.c.
  double predicted = 2 * pmax * std::sqrt(6 * h.mu_prime * dc / h.theta_plus.real());

  SimConfig s;
  s.params = p;
  s.params.c = h.c_star - dc;
  s.t_final = 5000;
  s.n_modes = 2560;
  s.record_every = 10;
  s.x_probe = xr;
  s.perturbation = GaussianBump{0, 1e-2, 2};
  s.perturbation_shape = PerturbationShape::mass_free;
  auto r = run(s);
  REQUIRE(r.diag.classification == Classification::sustained);
  MESSAGE("predicted ", predicted, " simulated ", r.diag.amplitude);
  CHECK(r.diag.amplitude == doctest::Approx(predicted).epsilon(0.05));
  CHECK(r.diag.frequency == doctest::Approx(h.omega_star).epsilon(0.02));
}
