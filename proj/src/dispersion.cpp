#include "trigfront/dispersion.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "trigfront/errors.hpp"

namespace trigfront {

std::vector<std::string> ModelParams::violations() const {
  std::vector<std::string> v;
  auto finite = [](double x) { return std::isfinite(x); };
  if (!(beta > 0)) v.push_back("beta > 0");
  if (!(ell > 0)) v.push_back("ell > 0");
  if (!(c > 0)) v.push_back("c > 0");
  if (!(eta >= 0)) v.push_back("eta >= 0");
  if (!finite(chi_plus) || !finite(chi_minus) || !finite(gamma))
    v.push_back("chi_plus, chi_minus, gamma finite");
  return v;
}

std::vector<std::string> ModelParams::warnings() const {
  std::vector<std::string> w;
  if (!(chi_plus > 0 && chi_minus < 0)) w.push_back("chi_plus > 0 > chi_minus (example model) not satisfied");
  return w;
}

void ModelParams::validate() const {
  auto v = violations();
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid model parameters:";
  for (auto& s : v) os << " [" << s << "]";
  throw ValidationError(os.str());
}

cplx eval_dispersion(double chi, double c, cplx lambda, cplx nu) {
  cplx nu2 = nu * nu;
  return -nu2 * nu2 - chi * nu2 + c * nu - lambda;
}

cplx dispersion_dnu(double chi, double c, cplx nu) { return -4.0 * nu * nu * nu - 2.0 * chi * nu + c; }

cplx dispersion_dnu2(double chi, cplx nu) { return -12.0 * nu * nu - 2.0 * chi; }

double relative_residual(double chi, double c, cplx lambda, cplx nu) {
  double a = std::abs(nu);
  double scale = a * a * a * a + std::abs(chi) * a * a + std::abs(c) * a + std::abs(lambda);
  double r = std::abs(eval_dispersion(chi, c, lambda, nu));
  return scale > 0 ? r / scale : r;
}

SpatialRootSet spatial_roots(double chi, double c, cplx lambda, double tol_root) {
  // monic ν⁴ + χν² − cν + λ = 0 as a companion matrix
  Eigen::Matrix4cd C = Eigen::Matrix4cd::Zero();
  C(1, 0) = C(2, 1) = C(3, 2) = 1.0;
  C(0, 3) = -lambda;
  C(1, 3) = c;
  C(2, 3) = -chi;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(C, false);
  if (es.info() != Eigen::Success) throw RootSolveFailure("companion eigensolve failed");

  SpatialRootSet out;
  out.lambda = lambda;
  out.chi = chi;
  out.c = c;
  for (int j = 0; j < 4; ++j) {
    cplx nu = es.eigenvalues()(j);
    // Newton polish, accepted only while it lowers the residual
    for (int it = 0; it < 3; ++it) {
      cplx dn = dispersion_dnu(chi, c, nu);
      if (dn == 0.0) break;
      cplx trial = nu - eval_dispersion(chi, c, lambda, nu) / dn;
      if (std::abs(eval_dispersion(chi, c, lambda, trial)) < std::abs(eval_dispersion(chi, c, lambda, nu)))
        nu = trial;
      else
        break;
    }
    out.nu[j] = nu;
    out.max_residual = std::max(out.max_residual, relative_residual(chi, c, lambda, nu));
  }
  if (!(out.max_residual < tol_root))
    throw RootSolveFailure("spatial roots residual " + std::to_string(out.max_residual));

  auto& r = out.nu;
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  // real parts equal up to rounding count as ties
  double scale = 1.0;
  for (auto z : r) scale = std::max(scale, std::abs(z));
  const double tie = 64 * 2.2e-16 * scale;
  for (int pass = 0; pass < 3; ++pass)
    for (int j = 0; j + 1 < 4; ++j)
      if (std::abs(r[j].real() - r[j + 1].real()) <= tie && r[j].imag() < r[j + 1].imag()) std::swap(r[j], r[j + 1]);

  out.morse_index = static_cast<int>(std::count_if(r.begin(), r.end(), [](cplx z) { return z.real() > 0; }));
  return out;
}

cplx essential_point(double chi, double c, double eta_signed, double k) {
  cplx nu(-eta_signed, k);
  cplx nu2 = nu * nu;
  return -nu2 * nu2 - chi * nu2 + c * nu;
}

SpectrumCurve essential_curve(Side side, double chi, double c, double eta, const RVec& k_grid) {
  SpectrumCurve out;
  out.side = side;
  out.eta = eta;
  double s = side == Side::plus ? eta : -eta;
  for (double k : k_grid) out.samples.push_back({k, essential_point(chi, c, s, k)});
  return out;
}

SpectrumCurve essential_curve(Side side, const ModelParams& p, double eta, const RVec& k_grid) {
  return essential_curve(side, side == Side::plus ? p.chi_plus : p.chi_minus, p.c, eta, k_grid);
}

double distance_to_essential(double chi, double c, cplx lambda) {
  // |Im λ(k)| ≈ |k|^... grows, so the nearest k is bounded by a few |λ|^{1/4}
  double kmax = 2.0 + 2.0 * std::pow(std::abs(lambda), 0.25) + std::abs(lambda) / std::max(c, 1e-3);
  auto dist = [&](double k) { return std::abs(essential_point(chi, c, 0.0, k) - lambda); };
  const int n = 4000;
  double best = dist(-kmax), kb = -kmax;
  for (int i = 1; i <= n; ++i) {
    double k = -kmax + 2 * kmax * i / n;
    double d = dist(k);
    if (d < best) best = d, kb = k;
  }
  // golden-section polish in the bracketing cell
  double a = kb - 2 * kmax / n, b = kb + 2 * kmax / n;
  const double g = 0.5 * (std::sqrt(5.0) - 1);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = dist(x1), f2 = dist(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = x2, x2 = x1, f2 = f1, x1 = b - g * (b - a), f1 = dist(x1);
    } else {
      a = x1, x1 = x2, f1 = f2, x2 = a + g * (b - a), f2 = dist(x2);
    }
  }
  return std::min(best, std::min(f1, f2));
}

}  // namespace trigfront
