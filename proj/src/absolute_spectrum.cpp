#include "trigfront/absolute_spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "trigfront/dispersion.hpp"
#include "trigfront/errors.hpp"

namespace trigfront {

namespace {

const cplx I(0.0, 1.0);

struct Corrected {
  cplx lambda, nu;
  int iters = 0;
  bool ok = false;
  double jac = 0;
};

// Newton on d(λ,ν) = d(λ,ν+iγ) = 0 at fixed γ
Corrected correct(double chi, double c, double gamma, cplx lam, cplx nu) {
  Corrected r;
  for (int it = 1; it <= 20; ++it) {
    cplx f1 = eval_dispersion(chi, c, lam, nu);
    cplx f2 = eval_dispersion(chi, c, lam, nu + I * gamma);
    cplx a = dispersion_dnu(chi, c, nu), b = dispersion_dnu(chi, c, nu + I * gamma);
    cplx det = a - b;  // det [[−1, a], [−1, b]] = −b + a
    r.jac = std::abs(det);
    if (std::abs(det) < 1e-14) return r;
    cplx dnu = (f1 - f2) / (b - a);
    cplx dlam = f1 + a * dnu;
    lam += dlam;
    nu += dnu;
    r.iters = it;
    if (std::abs(dlam) + std::abs(dnu) < 1e-14 * (1 + std::abs(lam))) {
      r.lambda = lam;
      r.nu = nu;
      r.ok = std::abs(eval_dispersion(chi, c, lam, nu)) < 1e-10 &&
             std::abs(eval_dispersion(chi, c, lam, nu + I * gamma)) < 1e-10;
      return r;
    }
  }
  return r;
}

// the pair must be the middle two roots of the ordered set
bool is_middle_pair(double chi, double c, cplx lam, cplx lo, cplx hi, double tol) {
  auto rs = spatial_roots(chi, c, lam);
  auto near = [&](cplx a, cplx b) { return std::abs(a - b) < 1e-6 * (1 + std::abs(a)); };
  bool as_set = (near(rs.nu[1], hi) && near(rs.nu[2], lo)) || (near(rs.nu[1], lo) && near(rs.nu[2], hi));
  return as_set && std::abs(rs.nu[1].real() - rs.nu[2].real()) < 1e3 * tol;
}

}  // namespace

AbsSpecCurve trace_absolute(const BranchPoint& bp, double arclength_max, double step, const AbsTraceOptions& opt) {
  if (!bp.pinched) throw PreconditionError("trace_absolute: branch point is not pinched");
  if (bp.residual_d > 1e-10 || bp.residual_dnu > 1e-10) throw PreconditionError("trace_absolute: branch point residuals");
  const double chi = bp.chi, c = bp.c;

  AbsSpecCurve curve;
  curve.c = c;
  curve.chi = chi;
  curve.origin = bp;
  curve.points.push_back({bp.lambda_br, {bp.nu_br, bp.nu_br}, 0.0});

  // local unfolding ν = ν_br − iγ/2, λ = λ_br − ∂²νd·γ²/8
  const cplx d2 = dispersion_dnu2(chi, bp.nu_br);
  double g = step, h = step;
  Corrected first;
  for (;;) {
    first = correct(chi, c, g, bp.lambda_br - d2 * g * g / 8.0, bp.nu_br - I * g / 2.0);
    if (first.ok) break;
    g *= 0.5;
    if (g < opt.min_step) throw ContinuationStall("trace_absolute: cannot leave the branch point");
  }
  curve.points.push_back({first.lambda, {first.nu, first.nu + I * g}, g});

  double arclength = std::abs(first.lambda - bp.lambda_br);
  while (true) {
    if (arclength >= arclength_max) {
      curve.stop_reason = "arclength";
      break;
    }
    if (g >= opt.gamma_max) {
      curve.stop_reason = "gamma_max";
      break;
    }
    auto& p1 = curve.points[curve.points.size() - 1];
    auto& p0 = curve.points[curve.points.size() - 2];
    double dg = p1.gamma_sep - p0.gamma_sep;
    double gn = std::min(g + h, opt.gamma_max);
    double s = (gn - p1.gamma_sep) / dg;
    // secant predictor in γ
    cplx lam_p = p1.lambda + s * (p1.lambda - p0.lambda);
    cplx nu_p = p1.nu_pair.first + s * (p1.nu_pair.first - p0.nu_pair.first);
    Corrected r = correct(chi, c, gn, lam_p, nu_p);
    if (!r.ok) {
      if (r.jac < 1e-10) {
        curve.fold_detected = true;
        curve.stop_reason = "fold";
        break;
      }
      h *= 0.5;
      if (h < opt.min_step) throw ContinuationStall("trace_absolute: corrector failed at minimum step");
      continue;
    }
    if (!is_middle_pair(chi, c, r.lambda, r.nu, r.nu + I * gn, opt.tol_abs)) {
      curve.stop_reason = "left the middle pair";
      break;
    }
    arclength += std::abs(r.lambda - p1.lambda);
    curve.points.push_back({r.lambda, {r.nu, r.nu + I * gn}, gn});
    g = gn;
    if (r.iters <= 3) h = std::min(2 * h, opt.max_step);
    else if (r.iters > 6) h *= 0.5;
  }
  return curve;
}

cplx rightmost_absolute(double chi, double c) {
  BranchPoint bp = find_double_root(chi, c, pinched_candidate_seed(chi, c));
  if (!bp.pinched) throw PreconditionError("rightmost_absolute: upper branch point is not pinched");
  AbsSpecCurve curve = trace_absolute(bp, 5.0, 1e-3);
  cplx best = bp.lambda_br;
  for (auto& p : curve.points)
    for (cplx z : {p.lambda, std::conj(p.lambda)})
      if (z.real() > best.real() + 1e-12) best = z;
  if (std::abs(best - bp.lambda_br) > 1e-9 && std::abs(best - std::conj(bp.lambda_br)) > 1e-9)
    throw Error("rightmost_absolute: rightmost point is not the branch point");
  return bp.lambda_br;
}

bool genericity_check(const AbsSpecCurve& curve, double tol_gen, std::string* warning) {
  if (curve.points.size() < 10 && warning) *warning = "curve has fewer than 10 points";
  for (std::size_t j = 1; j < curve.points.size(); ++j) {
    const auto& p = curve.points[j];
    const auto& q = curve.points[j - 1];
    double sep = std::abs((p.nu_pair.first - p.nu_pair.second).imag());
    if (!(p.gamma_sep > 0) || !(sep > 0)) return false;
    cplx dl = p.lambda - q.lambda;
    if (std::abs(dl) == 0) return false;
    cplx dpair = (p.nu_pair.second - p.nu_pair.first) - (q.nu_pair.second - q.nu_pair.first);
    if (!(std::abs(dpair / dl) > tol_gen)) return false;
  }
  return true;
}

}  // namespace trigfront
