#include <doctest.h>

#include <cmath>

#include "trigfront/branch_point.hpp"
#include "trigfront/errors.hpp"
#include "trigfront/evans.hpp"

using namespace trigfront;

namespace {
ModelParams at(double ell, double c) {
  ModelParams p;
  p.ell = ell;
  p.c = c;
  return p;
}
}  // namespace

// (ω*, c*) from tests/oracles/crossing.py, 40-digit matching determinant
TEST_CASE("first crossing matches the extended-precision oracle") {
  struct Row {
    double ell, omega, c;
  };
  for (auto r : {Row{10, 1.0298270454819077562, 1.4191596292410860525},
                 Row{20, 1.1796522191534428554, 1.5638234676462768454},
                 Row{40, 1.2251756477047391794, 1.6065019507732280359}}) {
    auto cr = find_hopf_crossing(at(r.ell, 1.6));
    CHECK(cr.c_star == doctest::Approx(r.c).epsilon(1e-10));
    CHECK(cr.lambda_star.imag() == doctest::Approx(r.omega).epsilon(1e-10));
    CHECK(std::abs(cr.lambda_star.real()) < 1e-12);
    CHECK(cr.simple);
    CHECK(cr.dRe_dc < 0);
    CHECK(cr.dRe_dc == doctest::Approx(cr.dRe_dc_implicit).epsilon(1e-5));
  }
}

TEST_CASE("fixed-speed eigenvalue matches the oracle at l = 15, c = 1.5") {
  cplx lam = track_eigenvalue(at(15, 1.5), {0.006, 1.118});
  CHECK(std::abs(lam - cplx(0.0059346949773609367, 1.1178894201749697185)) < 1e-11);
}

TEST_CASE("expansion of the crossing at l = 20") {
  auto ex = expansion_crossing(20, 1.0);
  CHECK(ex.c_hat == doctest::Approx(-0.066495924296079469).epsilon(1e-12));
  CHECK(std::abs(ex.lambda_hat - cplx(0, -0.072144993379341911)) < 1e-14);
  CHECK(std::abs(ex.lambda_hat_verbatim - cplx(0, -0.085879660589290161)) < 1e-14);
}

TEST_CASE("plateau determinant vanishes at the crossing and is conjugation symmetric") {
  auto cr = find_hopf_crossing(at(20, 1.6));
  ModelParams p = at(20, cr.c_star);
  auto g0 = plateau_gauged(p, cr.lambda_star);
  auto g1 = plateau_gauged(p, cr.lambda_star + cplx(0.01, 0));
  CHECK(std::abs(g0.g) < 1e-10 * std::abs(g1.g));
  auto a = plateau_gauged(p, {0.2, 0.7}), b = plateau_gauged(p, {0.2, -0.7});
  CHECK(std::abs(a.g - std::conj(b.g)) < 1e-10 * std::abs(a.g));
}

TEST_CASE("analytic and propagated subspaces give the same roots") {
  ModelParams p = at(15, 1.5);
  cplx lam(0.0059346949773609367, 1.1178894201749697185);
  PlateauOptions o;
  o.mode = SubspaceMode::propagated;
  auto e = plateau_determinant(p, lam, o);
  auto far = plateau_determinant(p, lam + cplx(0, 0.05), o);
  CHECK(std::abs(e.value) * std::exp(e.log_scale - far.log_scale) < 1e-4 * std::abs(far.value));
}

TEST_CASE("argument principle counts") {
  auto cr = find_hopf_crossing(at(20, 1.6));
  CHECK(count_eigs_in_box(at(20, cr.c_star - 0.05), {0.0, 2.0, -3, 3}) == 2);
  CHECK(count_eigs_in_box(at(20, cr.c_star - 0.05), {0.0, 2.0, 0, 3}) == 1);
  CHECK(count_eigs_in_box(at(20, cr.c_star + 0.05), {0.0, 2.0, -3, 3}) == 0);
}

TEST_CASE("front and back Evans functions do not vanish off the absolute spectrum") {
  ModelParams p = at(20, 1.6220759259174);
  for (cplx lam : {cplx(0.5, 0.5), cplx(1.5, 2.5), cplx(-0.3, 1.0)}) {
    auto f = evans_front(p, lam), b = evans_back(p, lam);
    CHECK(std::abs(f.value) > 0);
    CHECK(std::abs(b.value) > 0);
    CHECK(std::isfinite(f.log_scale));
  }
}

TEST_CASE("null solution is continuous across the interfaces") {
  auto cr = find_hopf_crossing(at(20, 1.6));
  ModelParams p = at(20, cr.c_star);
  for (bool adj : {false, true}) {
    auto s = null_solution(p, cr.lambda_star, adj);
    for (double x0 : {-20.0, 20.0}) {
      auto l = s.eval(x0 - 1e-9), r = s.eval(x0 + 1e-9);
      double scale = std::abs(s.eval(0.0)[0]) + std::abs(l[0]);
      for (int k = 0; k < 4; ++k) CHECK(std::abs(l[k] - r[k]) < 1e-6 * scale);
    }
    CHECK(s.sigma_ratio < 1e-10);
    CHECK(s.sigma_gap > 1e-6);
  }
}

TEST_CASE("eigenfunction profiles: plateau fit quality improves with l") {
  double prev = 0;
  for (double ell : {20.0, 40.0}) {
    auto cr = find_hopf_crossing(at(ell, 1.6));
    const int n = static_cast<int>(std::lround(2 * ell / 0.05));
    RVec g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = -ell + 2 * ell * i / n;
    auto prof = eigenfunction_profiles(cr, at(ell, cr.c_star), g);
    double worst = std::min(prof.fit_r2_p, prof.fit_r2_psi);
    CHECK(worst > 0.97);
    CHECK(worst > prev);
    prev = worst;
  }
}

TEST_CASE("invalid parameters are rejected") {
  ModelParams p = at(-1, 1.5);
  CHECK_THROWS_AS(find_hopf_crossing(p), ValidationError);
}
