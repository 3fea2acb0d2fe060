#include "trigfront/hopf.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "trigfront/branch_point.hpp"
#include "trigfront/dispersion.hpp"
#include "trigfront/errors.hpp"

namespace trigfront {

const char* to_string(Normalization n) { return n == Normalization::paper_AB ? "paper_AB" : "inner_product"; }
const char* to_string(Direction d) { return d == Direction::supercritical ? "supercritical" : "subcritical"; }

namespace {

double hnorm(const CVec& v, double h) {
  double s = 0;
  for (auto z : v) s += std::norm(z);
  return std::sqrt(h * s);
}

// ∫ f conj(g) by the trapezoid rule; f and g vanish at the clamped ends
cplx pairing(const CVec& f, const CVec& g, double h) {
  cplx s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
  return h * s;
}

// physical eigenfunctions from the (possibly conjugated) discrete pair
void unweight(const GridOperator& op, const EigenPair& pair, CVec& p, CVec& psi) {
  p = pair.v;
  psi = pair.w;
  if (op.eta > 0)
    for (int i = 0; i < op.n; ++i) {
      double w = inner_weight(op, op.x[i]);
      p[i] /= w;
      if (!psi.empty()) psi[i] *= w;
    }
}

CVec solve_shifted(const GridOperator& op, cplx shift, const CVec& rhs, double& residual) {
  // (shift − M) φ = rhs, in the operator's coordinates
  const int n = op.n;
  Eigen::SparseMatrix<cplx> B = -op.matrix.cast<cplx>();
  for (int i = 0; i < n; ++i) B.coeffRef(i, i) += shift;
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(B);
  if (lu.info() != Eigen::Success) throw ResonantSolve("quadratic mode system is singular");
  Eigen::Map<const Eigen::VectorXcd> b(rhs.data(), n);
  Eigen::VectorXcd x = lu.solve(b);
  residual = (B * x - b).norm() / b.norm();
  if (!(x.norm() < 1e10 * b.norm())) throw ResonantSolve("quadratic mode system is nearly singular");
  return CVec(x.data(), x.data() + n);
}

}  // namespace

QuadraticModes solve_quadratic_modes(const GridOperator& op, const EigenPair& pair, double omega, const RVec& fpp) {
  if (static_cast<int>(fpp.size()) != op.n) throw PreconditionError("solve_quadratic_modes: f″ profile size mismatch");
  QuadraticModes m;
  m.fpp = fpp;
  const int n = op.n;
  if (std::all_of(fpp.begin(), fpp.end(), [](double v) { return v == 0.0; })) {
    m.phi_plus.assign(n, 0.0);
    m.phi_zero.assign(n, 0.0);
    m.phi_minus.assign(n, 0.0);
    m.trivial = true;
    return m;
  }
  CVec p, psi;
  unweight(op, pair, p, psi);
  CVec sq(n), ab(n);
  for (int i = 0; i < n; ++i) {
    sq[i] = fpp[i] * p[i] * p[i];
    ab[i] = fpp[i] * std::norm(p[i]);
  }
  CVec rp = trigfront::apply(op.d2, sq), r0 = trigfront::apply(op.d2, ab);
  for (int i = 0; i < n; ++i) {
    double w = inner_weight(op, op.x[i]);
    rp[i] *= w;
    r0[i] *= w;
  }
  m.phi_plus = solve_shifted(op, cplx(0, 2 * omega), rp, m.residual_plus);
  m.phi_zero = solve_shifted(op, 0.0, r0, m.residual_zero);
  m.phi_minus.resize(n);
  for (int i = 0; i < n; ++i) {
    double w = inner_weight(op, op.x[i]);
    m.phi_plus[i] /= w;
    m.phi_zero[i] = m.phi_zero[i].real() / w;
    m.phi_minus[i] = std::conj(m.phi_plus[i]);
  }
  if (m.residual_plus > 1e-8 || m.residual_zero > 1e-8) throw ResonantSolve("quadratic mode residual above 1e-8");
  return m;
}

HopfResult hopf_coefficient(const GridOperator& op, const EigenPair& pair, const QuadraticModes& modes,
                            const CrossingData& crossing, Normalization normalization, double min_fit_r2) {
  if (pair.w.empty()) throw PreconditionError("hopf_coefficient: eigenpair has no adjoint vector");
  const int n = op.n;
  const double h = op.h, ell = op.params.ell;
  const double fppp = 6 * op.params.gamma;
  CVec p, psi;
  unweight(op, pair, p, psi);

  // ‖p‖ = 1, ⟨ψ, p⟩ = 1 fixes θ₊ up to nothing
  double pn = hnorm(p, h);
  for (auto& z : p) z /= pn;
  cplx ip = pairing(p, psi, h);
  for (auto& z : psi) z /= std::conj(ip);

  auto nonlinear = [&](const CVec& a, const CVec& phi0, const CVec& phi_pm) {
    CVec g(n);
    for (int i = 0; i < n; ++i)
      g[i] = 3 * fppp * a[i] * a[i] * std::conj(a[i]) + modes.fpp[i] * (a[i] * phi0[i] + std::conj(a[i]) * phi_pm[i]);
    return g;
  };
  const CVec& phi0 = modes.phi_zero;
  CVec gp = nonlinear(p, phi0, modes.phi_plus);
  cplx theta = pairing(trigfront::apply(op.d2, gp), psi, h);
  cplx theta_sbp = pairing(gp, trigfront::apply(op.d2, psi), h);

  CVec pc(n), psic(n);
  for (int i = 0; i < n; ++i) pc[i] = std::conj(p[i]), psic[i] = std::conj(psi[i]);
  cplx theta_m = pairing(trigfront::apply(op.d2, nonlinear(pc, phi0, modes.phi_minus)), psic, h);

  HopfResult r;
  r.sbp_mismatch = std::abs(theta - theta_sbp) / std::abs(theta);
  if (r.sbp_mismatch > 1e-6) throw Error("hopf_coefficient: summation-by-parts cross-check failed");
  r.normalization = normalization;
  r.ell = ell;
  r.lambda = pair.lambda;

  if (normalization == Normalization::paper_AB) {
    auto lin = closed_form_spreading(op.params.chi_plus);
    auto np = spatial_roots(op.params.chi_plus, op.params.c, pair.lambda).nu;
    cplx center = 0.5 * (np[1] + np[2]);
    auto fit = [&](const CVec& f, cplx rate, double& r2) {
      cplx num = 0;
      double den = 0;
      for (int i = 0; i < n; ++i) {
        double x = op.x[i];
        if (std::abs(x) > ell) continue;
        double s = std::sin(std::numbers::pi * (x - ell) / (2 * ell));
        cplx fd = f[i] * std::exp(-rate * x);
        num += fd * s;
        den += s * s;
      }
      cplx a = num / den;
      double res = 0, tot = 0;
      for (int i = 0; i < n; ++i) {
        double x = op.x[i];
        if (std::abs(x) > ell) continue;
        double s = std::sin(std::numbers::pi * (x - ell) / (2 * ell));
        cplx fd = f[i] * std::exp(-rate * x);
        res += std::norm(fd - a * s);
        tot += std::norm(fd);  // no intercept, so uncentered
      }
      r2 = 1 - res / tot;
      return a;
    };
    double r2p, r2s;
    cplx ap = fit(p, center, r2p);
    cplx as = fit(psi, -std::conj(center), r2s);
    r.fit_r2 = std::min(r2p, r2s);
    if (r.fit_r2 < min_fit_r2) throw NormalizationFitFailure("paper_AB plateau fit R² = " + std::to_string(r.fit_r2));
    // rescale to A, B > 0 with A³B = e^{2μℓ}
    cplx scale = std::exp(2 * lin.mu_lin * ell) / (ap * std::norm(ap) * std::conj(as));
    theta *= scale;
    theta_m *= std::conj(scale);
  }

  r.theta_plus = theta;
  r.theta_minus = theta_m;
  r.dRe_dc = crossing.dRe_dc;
  r.mu_prime = -crossing.dRe_dc;
  r.upsilon_c = theta.real() / r.mu_prime;
  r.upsilon_omega = theta.imag();
  r.direction = theta.real() > 0 ? Direction::supercritical : Direction::subcritical;
  r.c_star = crossing.c_star;
  r.omega_star = crossing.lambda_star.imag();
  return r;
}

cplx leading_order_theta(double alpha, double gamma) {
  auto s = closed_form_spreading(alpha);
  cplx nu = s.nu_lin();
  cplx t = 2.0 * nu + std::conj(nu);
  return -27.0 * gamma * t * t / (8.0 * s.mu_lin);
}

std::vector<BranchRow> branch_prediction(const HopfResult& r, const RVec& r_grid) {
  std::vector<BranchRow> out;
  for (double x : r_grid) out.push_back({x, r.c_star - r.upsilon_c * x * x, r.omega_star + r.upsilon_omega * x * x});
  return out;
}

HopfResult compute_hopf(const ModelParams& params, Normalization normalization, const HopfPipelineOptions& opt) {
  auto crossing = find_hopf_crossing(params);
  ModelParams p = params;
  p.c = crossing.c_star;
  p.eta = opt.eta;
  double L = std::ceil((p.ell + opt.margin) / opt.h - 1e-9) * opt.h;
  auto op = build_operator(p, L, opt.h);
  auto pair = leading_pair(op, crossing.lambda_star);
  auto modes = solve_quadratic_modes(op, pair, crossing.lambda_star.imag(), RVec(op.n, 0.0));
  return hopf_coefficient(op, pair, modes, crossing, normalization, opt.min_fit_r2);
}

}  // namespace trigfront
