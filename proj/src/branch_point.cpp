#include "trigfront/branch_point.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "trigfront/dispersion.hpp"
#include "trigfront/errors.hpp"

namespace trigfront {

LinearSpreading closed_form_spreading(double alpha) {
  if (!(alpha > 0)) throw PreconditionError("closed_form_spreading: alpha must be positive");
  using ld = long double;
  const ld s7 = std::sqrt(7.0L);
  const ld a = alpha;
  LinearSpreading r;
  r.alpha = alpha;
  r.lambda_lin = cplx(0.0, static_cast<double>((3 + s7) * std::sqrt((2 + s7) / 96) * a * a));
  r.c_lin = static_cast<double>(2 / (3 * std::sqrt(6.0L)) * (2 + s7) * std::sqrt(s7 - 1) * std::pow(a, 1.5L));
  r.mu_lin = static_cast<double>(-std::sqrt((s7 - 1) / 24) * std::sqrt(a));
  r.kappa_lin = static_cast<double>(std::sqrt((s7 + 3) / 8) * std::sqrt(a));
  return r;
}

BranchPoint find_double_root(double chi, double c, std::pair<cplx, cplx> seed, const DoubleRootOptions& opt) {
  auto [lam, nu] = seed;
  bool converged = false;
  for (int it = 0; it < opt.max_iter; ++it) {
    cplx d = eval_dispersion(chi, c, lam, nu);
    cplx d1 = dispersion_dnu(chi, c, nu);
    cplx d2 = dispersion_dnu2(chi, nu);
    if (std::abs(d2) < 1e-6) throw DegenerateDoubleRoot("second ν-derivative vanishes at the double root");
    // J = [[−1, ∂νd], [0, ∂²νd]]
    cplx dnu = -d1 / d2;
    cplx dlam = d + d1 * dnu;
    lam += dlam;
    nu += dnu;
    double scale = 1.0 + std::abs(lam) + std::abs(nu);
    if (std::abs(dnu) + std::abs(dlam) < opt.tol * scale) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NoConvergence("find_double_root: Newton did not converge");
  if (std::abs(dispersion_dnu2(chi, nu)) < 1e-6) throw DegenerateDoubleRoot("second ν-derivative vanishes");

  BranchPoint bp;
  bp.lambda_br = lam;
  bp.nu_br = nu;
  bp.c = c;
  bp.chi = chi;
  bp.residual_d = std::abs(eval_dispersion(chi, c, lam, nu));
  bp.residual_dnu = std::abs(dispersion_dnu(chi, c, nu));
  if (opt.check_pinching) bp.pinched = pinching_check(bp);
  return bp;
}

std::pair<cplx, cplx> fastest_growing_mode_seed(double chi, double c) {
  // Re λ(ik) = −k⁴ + χk² peaks at k² = χ/2; deform ν off the axis towards decay
  double k = chi > 0 ? std::sqrt(chi / 2) : 0.5;
  cplx nu(-0.25 * std::sqrt(std::abs(chi)), k);
  cplx lam = -nu * nu * nu * nu - chi * nu * nu + c * nu;
  return {lam, nu};
}

std::pair<cplx, cplx> pinched_candidate_seed(double chi, double c) {
  // ∂νd = −4ν³ − 2χν + c = 0, i.e. ν³ + (χ/2)ν − c/4 = 0
  Eigen::Matrix3cd C = Eigen::Matrix3cd::Zero();
  C(1, 0) = C(2, 1) = 1.0;
  C(0, 2) = c / 4;
  C(1, 2) = -chi / 2;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(C, false);
  cplx best = es.eigenvalues()(0);
  for (int j = 1; j < 3; ++j)
    if (es.eigenvalues()(j).imag() > best.imag()) best = es.eigenvalues()(j);
  cplx lam = -best * best * best * best - chi * best * best + c * best;
  return {lam, best};
}

namespace {

// index of the root nearest to z, with a check that the choice is unambiguous
int match_root(const std::array<cplx, 4>& roots, cplx z, double& dist, bool& ambiguous) {
  int best = 0;
  double d0 = 1e300, d1 = 1e300;
  for (int j = 0; j < 4; ++j) {
    double d = std::abs(roots[j] - z);
    if (d < d0) {
      d1 = d0, d0 = d, best = j;
    } else if (d < d1) {
      d1 = d;
    }
  }
  dist = d0;
  ambiguous = d1 < 2.0 * d0;
  return best;
}

}  // namespace

bool pinching_check(const BranchPoint& bp, const PinchingOptions& opt) {
  const double chi = bp.chi, c = bp.c;
  const double T = opt.horizon_factor * std::max(1.0, std::abs(bp.lambda_br));
  const int N = opt.steps;
  auto t_at = [&](int k) { return T * (double(k) / N) * (double(k) / N); };

  // degenerate start: split along ±√(2t/∂²νd)
  double t = t_at(1);
  cplx split = std::sqrt(2.0 * t / dispersion_dnu2(chi, bp.nu_br));
  auto roots = spatial_roots(chi, c, bp.lambda_br + t).nu;
  double dist;
  bool amb;
  int ia = match_root(roots, bp.nu_br + split, dist, amb);
  int ib = match_root(roots, bp.nu_br - split, dist, amb);
  if (ia == ib) throw TrackingAmbiguity("pinching_check: split directions map to one root");
  cplx a = roots[ia], b = roots[ib];

  for (int k = 2; k <= N; ++k) {
    double tn = t_at(k), dt = tn - t;
    cplx pa = a + dt / dispersion_dnu(chi, c, a);
    cplx pb = b + dt / dispersion_dnu(chi, c, b);
    roots = spatial_roots(chi, c, bp.lambda_br + tn).nu;
    double sep = 1e300;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) sep = std::min(sep, std::abs(roots[i] - roots[j]));
    double da, db;
    bool amba, ambb;
    ia = match_root(roots, pa, da, amba);
    ib = match_root(roots, pb, db, ambb);
    if (ia == ib || da > 0.25 * sep || db > 0.25 * sep)
      throw TrackingAmbiguity("pinching_check: root matching ambiguous at t = " + std::to_string(tn));
    a = roots[ia];
    b = roots[ib];
    t = tn;
  }
  return (a.real() > 0) != (b.real() > 0);
}

LinearSpreading find_spreading_speed(double chi) {
  if (!(chi > 0)) throw PreconditionError("find_spreading_speed: plateau coefficient must be positive");
  DoubleRootOptions opt;
  opt.check_pinching = false;
  auto re_br = [&](double c) {
    return find_double_root(chi, c, pinched_candidate_seed(chi, c), opt).lambda_br.real();
  };

  // geometric scan for a sign change of Re λ_br(c)
  double lo = 1e-3, flo = re_br(lo);
  double hi = lo, fhi = flo;
  bool found = false;
  for (int k = 0; k < 60; ++k) {
    hi = lo * 1.5;
    fhi = re_br(hi);
    if ((flo > 0) != (fhi > 0)) {
      found = true;
      break;
    }
    lo = hi, flo = fhi;
  }
  if (!found) throw BracketFailure("find_spreading_speed: Re λ_br(c) does not change sign");

  boost::uintmax_t max_iter = 200;
  auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-15 * std::abs(x); };
  auto [a, b] = boost::math::tools::toms748_solve(re_br, lo, hi, flo, fhi, tol, max_iter);
  double c = 0.5 * (a + b);
  BranchPoint bp = find_double_root(chi, c, pinched_candidate_seed(chi, c), opt);
  if (std::abs(bp.lambda_br.real()) > 1e-10) throw NoConvergence("find_spreading_speed: |Re λ_br| above tolerance");

  LinearSpreading r;
  r.alpha = chi;
  r.c_lin = c;
  r.lambda_lin = bp.lambda_br;
  r.mu_lin = bp.nu_br.real();
  r.kappa_lin = bp.nu_br.imag();
  return r;
}

}  // namespace trigfront
