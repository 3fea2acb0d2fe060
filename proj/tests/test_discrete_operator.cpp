#include <doctest.h>

#include <cmath>

#include "trigfront/discrete_operator.hpp"
#include "trigfront/errors.hpp"
#include "trigfront/fd_weights.hpp"

using namespace trigfront;

namespace {
ModelParams at(double ell, double c) {
  ModelParams p;
  p.ell = ell;
  p.c = c;
  return p;
}
constexpr cplx kRoot(0.0059346949773609367, 1.1178894201749697185);  // matching determinant, ℓ=15, c=1.5
}  // namespace

// tests/oracles/fd_eigs.py builds a jump-corrected fourth-order scheme independently with scipy
TEST_CASE("leading eigenvalue agrees with the independent scipy build") {
  struct Row {
    double h;
    cplx lam;
  };
  for (auto r : {Row{0.2, {0.005967672800571082, 1.1178865140623937}},
                 Row{0.1, {0.005936761603421514, 1.1178892414895802}},
                 Row{0.05, {0.0059348241417224385, 1.1178894090526275}}}) {
    LeadingOptions o;
    o.h = r.h;
    o.margin = 30;
    auto pair = leading_pair(at(15, 1.5), kRoot, o);
    // the two builds differ in their one-sided interface stencils, so they agree up to a small
    // fraction of the discretization error and share the limit
    CHECK(std::abs(pair.lambda - r.lam) < 0.05 * std::abs(r.lam - kRoot));
    CHECK(pair.residual < 1e-8);
  }
}

TEST_CASE("fourth-order convergence to the matching-determinant root") {
  double prev = 0;
  for (double h : {0.2, 0.1, 0.05}) {
    LeadingOptions o;
    o.h = h;
    o.margin = 30;
    double err = std::abs(leading_pair(at(15, 1.5), kRoot, o).lambda - kRoot);
    if (prev > 0) CHECK(std::log2(prev / err) == doctest::Approx(4.0).epsilon(0.12));
    prev = err;
  }
}

TEST_CASE("midpoint interface variant converges more slowly") {
  LeadingOptions o;
  o.margin = 30;
  o.h = 0.05;
  o.interface = InterfaceTreatment::midpoint;
  double e_mid = std::abs(leading_pair(at(15, 1.5), kRoot, o).lambda - kRoot);
  o.interface = InterfaceTreatment::jump_corrected;
  double e_jump = std::abs(leading_pair(at(15, 1.5), kRoot, o).lambda - kRoot);
  CHECK(e_jump < 0.1 * e_mid);
}

TEST_CASE("eigenpair normalization") {
  auto op = build_operator(at(15, 1.5), 30.0, 0.1);
  auto pair = leading_pair(op, kRoot);
  REQUIRE(pair.normalized);
  cplx ip = 0;
  double nv = 0;
  for (int i = 0; i < op.n; ++i) ip += std::conj(pair.w[i]) * pair.v[i], nv += std::norm(pair.v[i]);
  CHECK(std::abs(op.h * ip - 1.0) < 1e-10);
  CHECK(op.h * nv == doctest::Approx(1.0).epsilon(1e-10));
  // left vector really is a left eigenvector
  CVec mv = trigfront::apply(op, pair.v);
  double r = 0, s = 0;
  for (int i = 0; i < op.n; ++i) r += std::norm(mv[i] - pair.lambda * pair.v[i]), s += std::norm(pair.v[i]);
  CHECK(std::sqrt(r / s) < 1e-8);
}

TEST_CASE("dense spectrum is conjugation symmetric and contains the leading pair") {
  auto op = build_operator(at(10, 1.5), 22.0, 0.2);
  SpectrumOptions so;
  so.left_vectors = false;
  auto all = spectrum(op, so);
  REQUIRE(all.size() == static_cast<std::size_t>(op.n));
  auto lead = leading_pair(op, {0.02, 1.0}, 0.5);
  double best = INFINITY, mirror = INFINITY;
  for (const auto& e : all) {
    best = std::min(best, std::abs(e.lambda - lead.lambda));
    mirror = std::min(mirror, std::abs(e.lambda - std::conj(lead.lambda)));
  }
  CHECK(best < 1e-8);
  CHECK(mirror < 1e-8);
  so.region = ComplexBox{-0.1, 2.0, 0.0, 3.0};
  for (const auto& e : spectrum(op, so)) CHECK(so.region->contains(e.lambda));
}

TEST_CASE("weighted operator has the same eigenvalues") {
  ModelParams p = at(15, 1.5);
  auto plain = leading_pair(p, kRoot);
  p.eta = 0.1;
  auto weighted = leading_pair(p, kRoot);
  CHECK(std::abs(plain.lambda - weighted.lambda) < 1e-8);
}

TEST_CASE("Fornberg weights reproduce derivatives of polynomials") {
  RVec z = {-2, -1, 0, 1, 2};
  auto w = fornberg_weights(0.0, z, 2);
  double d1 = 0, d2 = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double f = std::pow(z[i], 3) + 2 * z[i] * z[i];  // f' (0) = 0, f''(0) = 4
    d1 += w[1][i] * f;
    d2 += w[2][i] * f;
  }
  CHECK(std::abs(d1) < 1e-12);
  CHECK(d2 == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("too small a margin is refused") {
  CHECK_THROWS_AS(build_operator(at(15, 1.5), 16.0, 0.1), GeometryMismatch);
  CHECK_THROWS_AS(leading_pair(build_operator(at(15, 1.5), 30.0, 0.2), {5.0, 40.0}, 0.01), NoEigenvalueNearSeed);
}
