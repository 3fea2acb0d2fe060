#include "trigfront/evans.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "trigfront/branch_point.hpp"
#include "trigfront/dispersion.hpp"
#include "trigfront/dual.hpp"
#include "trigfront/errors.hpp"

namespace trigfront {

namespace {

template <class T>
using V4 = std::array<T, 4>;
template <class T>
using Cols = std::array<V4<T>, 4>;

constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
// Laplace sign for rows (r1, r2) against columns (0, 1)
constexpr double kPairSign[6] = {1, -1, 1, 1, -1, 1};

template <class T>
T det2(const V4<T>& a, const V4<T>& b, int r1, int r2) {
  return a[r1] * b[r2] - a[r2] * b[r1];
}

template <class T>
T det4(const Cols<T>& m) {
  T s(0.0);
  for (int k = 0; k < 6; ++k)
    s += T(kPairSign[k]) * det2(m[0], m[1], kPairs[k][0], kPairs[k][1]) *
         det2(m[2], m[3], kPairs[5 - k][0], kPairs[5 - k][1]);
  return s;
}

// eigenvector of the first-order system: primal (u, u', θ, θ'), θ = u''+χu, or adjoint (φ, φ', φ'', φ''')
template <class T>
V4<T> mode_vec(const T& nu, double chi, bool adjoint) {
  T n2 = nu * nu;
  if (adjoint) return {T(1.0), nu, n2, n2 * nu};
  T t = n2 + T(chi);
  return {T(1.0), nu, t, nu * t};
}

// divided difference [a,b] of mode_vec, exact for the cubic entries
template <class T>
V4<T> mode_dd(const T& a, const T& b, double chi, bool adjoint) {
  T last = a * a + a * b + b * b;
  if (!adjoint) last += T(chi);
  return {T(0.0), T(1.0), a + b, last};
}

std::array<cplx, 4> roots_for(double chi, double c, cplx lambda, bool adjoint) {
  // adjoint roots m = −ν solve d with c → −c
  return spatial_roots(chi, adjoint ? -c : c, lambda).nu;
}

// roots as dual numbers along the direction (λ', c')
V4<Dual> lift(const std::array<cplx, 4>& r, double chi, double c, bool adjoint, cplx dlam, double dc) {
  V4<Dual> out;
  double ce = adjoint ? -c : c;
  double dce = adjoint ? -dc : dc;
  for (int k = 0; k < 4; ++k) out[k] = Dual(r[k], (dlam - r[k] * dce) / dispersion_dnu(chi, ce, r[k]));
  return out;
}

bool symmetric_gauge(const std::array<cplx, 4>& np, double ell) {
  return ell * std::abs(np[1].real() - np[2].real()) < 20.0;
}

template <class T>
T gauge_ref(const V4<T>& np, double ell, bool sym) {
  if (sym) return T(2 * ell) * (np[0] + T(0.5) * (np[1] + np[2]));
  return T(2 * ell) * (np[0] + np[1]);
}

// det[exp(2ℓM₊)Ê_u | Ê_s]·e^{−ref} through the plateau eigenbasis
template <class T>
T plateau_core(const V4<T>& np, const V4<T>& nm, double chip, double chim, double ell, bool adj, const T& ref) {
  Cols<T> V;
  for (int k = 0; k < 4; ++k) V[k] = mode_vec(np[k], chip, adj);
  V4<T> eu0 = mode_vec(nm[0], chim, adj), eu1 = mode_dd(nm[0], nm[1], chim, adj);
  V4<T> es0 = mode_vec(nm[2], chim, adj), es1 = mode_dd(nm[2], nm[3], chim, adj);
  T detV = det4(V);
  T sum(0.0);
  for (const auto& pr : kPairs) {
    const int a = pr[0], b = pr[1];
    Cols<T> G = V;
    G[a] = eu0;
    G[b] = eu1;
    Cols<T> W{V[a], V[b], es0, es1};
    sum += exp(T(2 * ell) * (np[a] + np[b]) - ref) * det4(G) * det4(W);
  }
  return sum / detV;
}

double min_separation(const std::array<cplx, 4>& r) {
  double s = 1e300;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) s = std::min(s, std::abs(r[i] - r[j]));
  return s;
}

bool ill_conditioned(const std::array<cplx, 4>& np) {
  double scale = 1.0;
  for (auto z : np) scale = std::max(scale, std::abs(z));
  return min_separation(np) < 1e-5 * scale;
}

Eigen::Matrix4cd system_matrix(double chi, double c, cplx lambda, bool adjoint) {
  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  M(0, 1) = M(2, 3) = 1.0;
  if (adjoint) {
    M(1, 2) = 1.0;
    M(3, 0) = -lambda;
    M(3, 1) = -c;
    M(3, 2) = -chi;
  } else {
    M(1, 0) = -chi;
    M(1, 2) = 1.0;
    M(3, 0) = -lambda;
    M(3, 1) = c;
  }
  return M;
}

Eigen::Vector4cd to_eigen(const V4<cplx>& v) { return {v[0], v[1], v[2], v[3]}; }

// log det[exp(2ℓM₊)Ê_u | Ê_s] by QR-renormalized stepping; used when the plateau eigenbasis degenerates
cplx propagated_log_det(const ModelParams& p, cplx lambda, bool adjoint) {
  auto nm = roots_for(p.chi_minus, p.c, lambda, adjoint);
  Eigen::Matrix4cd M = system_matrix(p.chi_plus, p.c, lambda, adjoint);
  double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int steps = std::max(1, static_cast<int>(std::ceil(2 * p.ell * norm / 0.25)));
  double h = 2 * p.ell / steps;
  Eigen::Matrix4cd P = Eigen::Matrix4cd::Identity(), term = Eigen::Matrix4cd::Identity();
  for (int k = 1; k < 30; ++k) {
    term = term * (h * M) / double(k);
    P += term;
  }
  Eigen::Matrix<cplx, 4, 2> Y;
  Y.col(0) = to_eigen(mode_vec(nm[0], p.chi_minus, adjoint));
  Y.col(1) = to_eigen(mode_dd(nm[0], nm[1], p.chi_minus, adjoint));
  cplx logacc = 0;
  for (int s = 0; s < steps; ++s) {
    Y = P * Y;
    Eigen::HouseholderQR<Eigen::Matrix<cplx, 4, 2>> qr(Y);
    Eigen::Matrix<cplx, 4, 2> Q = qr.householderQ() * Eigen::Matrix<cplx, 4, 2>::Identity();
    Eigen::Matrix2cd R = Q.adjoint() * Y;
    logacc += std::log(R.determinant());
    Y = Q;
  }
  Eigen::Matrix4cd F;
  F.col(0) = Y.col(0);
  F.col(1) = Y.col(1);
  F.col(2) = to_eigen(mode_vec(nm[2], p.chi_minus, adjoint));
  F.col(3) = to_eigen(mode_dd(nm[2], nm[3], p.chi_minus, adjoint));
  return std::log(F.determinant()) + logacc;
}

cplx gauged_value(const ModelParams& p, cplx lambda, bool adjoint, cplx* ref_out, bool* fallback) {
  auto np = roots_for(p.chi_plus, p.c, lambda, adjoint);
  auto nm = roots_for(p.chi_minus, p.c, lambda, adjoint);
  if (!(nm[1].real() - nm[2].real() > 1e-12))
    throw OnEssentialSpectrum("plateau determinant: exterior splitting degenerates (absolute spectrum of the exterior)");
  bool sym = symmetric_gauge(np, p.ell);
  V4<cplx> a = np, b = nm;
  cplx ref = gauge_ref(a, p.ell, sym);
  if (ref_out) *ref_out = ref;
  if (ill_conditioned(np)) {
    if (fallback) *fallback = true;
    return std::exp(propagated_log_det(p, lambda, adjoint) - ref);
  }
  if (fallback) *fallback = false;
  return plateau_core(a, b, p.chi_plus, p.chi_minus, p.ell, adjoint, ref);
}

}  // namespace

// ---------------------------------------------------------------------------------------------

namespace {

EvansValue vandermonde_pair(const ModelParams& p, cplx lambda, bool front) {
  auto rp = spatial_roots(p.chi_plus, p.c, lambda).nu;
  auto rm = spatial_roots(p.chi_minus, p.c, lambda).nu;
  for (auto z : rp)
    if (std::abs(z.real()) < 1e-12 && lambda != 0.0) throw OnEssentialSpectrum("λ on the plus essential spectrum");
  for (auto z : rm)
    if (std::abs(z.real()) < 1e-12 && lambda != 0.0) throw OnEssentialSpectrum("λ on the minus essential spectrum");
  // front: (ν₁⁺,ν₂⁺ | ν₃⁻,ν₄⁻); back: (ν₁⁻,ν₂⁻ | ν₃⁺,ν₄⁺)
  const auto& up = front ? rp : rm;
  const auto& dn = front ? rm : rp;
  cplx v = 1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 2; j < 4; ++j) v *= dn[j] - up[i];
  EvansValue e;
  e.lambda = lambda;
  e.value = v;
  e.log_scale = 0;
  e.kind = front ? EvansKind::front : EvansKind::back;
  const auto& fam_u = front ? rp : rm;
  const auto& fam_s = front ? rm : rp;
  e.on_absolute = std::abs(fam_u[1].real() - fam_u[2].real()) < 1e-9 || std::abs(fam_s[1].real() - fam_s[2].real()) < 1e-9;
  return e;
}

}  // namespace

EvansValue evans_front(const ModelParams& p, cplx lambda) { return vandermonde_pair(p, lambda, true); }
EvansValue evans_back(const ModelParams& p, cplx lambda) { return vandermonde_pair(p, lambda, false); }

EvansValue plateau_determinant(const ModelParams& p, cplx lambda, const PlateauOptions& opt) {
  EvansValue e;
  e.lambda = lambda;
  e.kind = EvansKind::plateau;
  const bool adj = opt.adjoint;

  if (opt.mode == SubspaceMode::propagated) {
    // boundary subspaces from propagating a fixed generic frame over the exterior margin
    auto np = roots_for(p.chi_plus, p.c, lambda, adj);
    auto nm = roots_for(p.chi_minus, p.c, lambda, adj);
    if (ill_conditioned(np)) throw EigenbasisIllConditioned("propagated mode needs a plateau eigenbasis");
    Eigen::Matrix4cd Vm, Vp;
    for (int k = 0; k < 4; ++k) {
      Vm.col(k) = to_eigen(mode_vec(nm[k], p.chi_minus, adj));
      Vp.col(k) = to_eigen(mode_vec(np[k], p.chi_plus, adj));
    }
    Eigen::Matrix<cplx, 4, 2> F0;
    F0 << 1.0, 0.2, 0.3, 1.0, -0.2, 0.5, 0.1, -0.4;
    Eigen::Matrix<cplx, 4, 2> Cu = Vm.partialPivLu().solve(F0), Cs = Cu;
    for (int k = 0; k < 4; ++k) {
      Cu.row(k) *= std::exp(opt.margin * (nm[k] - nm[0]));
      Cs.row(k) *= std::exp(-opt.margin * (nm[k] - nm[3]));
    }
    Eigen::Matrix<cplx, 4, 2> Eu = Vm * Cu, Es = Vm * Cs;
    Eu.col(0).normalize(), Eu.col(1).normalize(), Es.col(0).normalize(), Es.col(1).normalize();
    cplx ref = gauge_ref(V4<cplx>(np), p.ell, symmetric_gauge(np, p.ell));
    Eigen::Matrix<cplx, 4, 2> G = Vp.partialPivLu().solve(Eu);
    cplx sum = 0;
    for (const auto& pr : kPairs) {
    const int a = pr[0], b = pr[1];
      Eigen::Matrix2cd g2;
      g2 << G(a, 0), G(a, 1), G(b, 0), G(b, 1);
      Eigen::Matrix4cd W;
      W << Vp.col(a), Vp.col(b), Es.col(0), Es.col(1);
      sum += std::exp(2 * p.ell * (np[a] + np[b]) - ref) * g2.determinant() * W.determinant();
    }
    e.value = sum * std::exp(cplx(0, ref.imag()));
    e.log_scale = ref.real();
    return e;
  }

  cplx ref;
  bool fb = false;
  cplx g = gauged_value(p, lambda, adj, &ref, &fb);
  e.value = g * std::exp(cplx(0, ref.imag()));
  e.log_scale = ref.real();
  e.fallback = fb;

  if (!fb) {
    // Plücker coordinates of the propagated unstable frame and of Ê_s
    auto np = roots_for(p.chi_plus, p.c, lambda, adj);
    auto nm = roots_for(p.chi_minus, p.c, lambda, adj);
    Cols<cplx> V;
    for (int k = 0; k < 4; ++k) V[k] = mode_vec(np[k], p.chi_plus, adj);
    V4<cplx> eu0 = mode_vec(nm[0], p.chi_minus, adj), eu1 = mode_dd(nm[0], nm[1], p.chi_minus, adj);
    V4<cplx> es0 = mode_vec(nm[2], p.chi_minus, adj), es1 = mode_dd(nm[2], nm[3], p.chi_minus, adj);
    cplx detV = det4(V);
    std::array<cplx, 6> y{}, q{};
    for (const auto& pr : kPairs) {
    const int a = pr[0], b = pr[1];
      Cols<cplx> G = V;
      G[a] = eu0;
      G[b] = eu1;
      cplx w = std::exp(2 * p.ell * (np[a] + np[b]) - ref) * det4(G) / detV;
      for (int r = 0; r < 6; ++r) y[r] += det2(V[a], V[b], kPairs[r][0], kPairs[r][1]) * w;
    }
    double ny = 0, nq = 0;
    for (int r = 0; r < 6; ++r) {
      q[r] = det2(es0, es1, kPairs[r][0], kPairs[r][1]);
      ny += std::norm(y[r]);
      nq += std::norm(q[r]);
    }
    e.transversality = std::abs(g) / std::sqrt(ny * nq);
  }
  return e;
}

GaugedDeterminant plateau_gauged(const ModelParams& p, cplx lambda, bool adjoint) {
  auto np = roots_for(p.chi_plus, p.c, lambda, adjoint);
  auto nm = roots_for(p.chi_minus, p.c, lambda, adjoint);
  GaugedDeterminant out;
  if (ill_conditioned(np)) {
    out.fallback = true;
    const double h = 1e-6;
    out.g = gauged_value(p, lambda, adjoint, &out.ref, nullptr);
    out.dg_dlambda = (gauged_value(p, lambda + h, adjoint, nullptr, nullptr) -
                      gauged_value(p, lambda - h, adjoint, nullptr, nullptr)) / (2 * h);
    ModelParams a = p, b = p;
    a.c += h;
    b.c -= h;
    out.dg_dc = (gauged_value(a, lambda, adjoint, nullptr, nullptr) - gauged_value(b, lambda, adjoint, nullptr, nullptr)) / (2 * h);
    return out;
  }
  bool sym = symmetric_gauge(np, p.ell);
  for (int dir = 0; dir < 2; ++dir) {
    cplx dl = dir == 0 ? 1.0 : 0.0;
    double dc = dir == 0 ? 0.0 : 1.0;
    auto P = lift(np, p.chi_plus, p.c, adjoint, dl, dc);
    auto M = lift(nm, p.chi_minus, p.c, adjoint, dl, dc);
    Dual ref = gauge_ref(P, p.ell, sym);
    Dual g = plateau_core(P, M, p.chi_plus, p.chi_minus, p.ell, adjoint, ref);
    out.g = g.v;
    out.ref = ref.v;
    (dir == 0 ? out.dg_dlambda : out.dg_dc) = g.d;
  }
  return out;
}

// ---------------------------------------------------------------------------------------------

namespace {

double arg_increment(const std::function<cplx(cplx)>& f, cplx z0, cplx z1, cplx v0, cplx v1, int depth) {
  cplx zm = 0.5 * (z0 + z1);
  cplx vm = f(zm);
  double whole = std::arg(v1 / v0);
  double left = std::arg(vm / v0), right = std::arg(v1 / vm);
  if (std::abs(left) < std::numbers::pi / 2 && std::abs(right) < std::numbers::pi / 2 &&
      std::abs(left + right - whole) < 1e-6)
    return whole;
  if (depth == 0) throw ContourTooCoarse("argument increments stay above π/2 after maximal refinement");
  return arg_increment(f, z0, zm, v0, vm, depth - 1) + arg_increment(f, zm, z1, vm, v1, depth - 1);
}

}  // namespace

int winding_number(const ModelParams& p, const std::vector<cplx>& polygon, int max_depth) {
  auto f = [&](cplx z) {
    cplx v = plateau_determinant(p, z).value;
    return v / std::abs(v);
  };
  double total = 0;
  std::vector<cplx> vals(polygon.size());
  for (std::size_t i = 0; i < polygon.size(); ++i) vals[i] = f(polygon[i]);
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    std::size_t j = (i + 1) % polygon.size();
    total += arg_increment(f, polygon[i], polygon[j], vals[i], vals[j], max_depth);
  }
  double w = total / (2 * std::numbers::pi);
  long n = std::lround(w);
  if (std::abs(w - n) > 1e-3) throw ContourTooCoarse("winding number not close to an integer");
  return static_cast<int>(n);
}

int count_eigs_in_box(const ModelParams& p, const ComplexBox& box, int n_contour) {
  if (n_contour < 1) throw PreconditionError("count_eigs_in_box: n_contour must be positive");
  std::vector<cplx> poly;
  cplx corners[4] = {{box.re_min, box.im_min}, {box.re_max, box.im_min}, {box.re_max, box.im_max}, {box.re_min, box.im_max}};
  for (int e = 0; e < 4; ++e)
    for (int k = 0; k < n_contour; ++k) poly.push_back(corners[e] + (corners[(e + 1) % 4] - corners[e]) * (double(k) / n_contour));
  int w = winding_number(p, poly);
  if (w < 0) throw Error("negative winding number for an analytic determinant");
  return w;
}

cplx track_eigenvalue(const ModelParams& p, cplx seed, int max_iter) {
  cplx lam = seed;
  for (int it = 0; it < max_iter; ++it) {
    auto g = plateau_gauged(p, lam);
    cplx step = g.g / g.dg_dlambda;
    if (std::abs(step) > 0.1) step *= 0.1 / std::abs(step);
    lam -= step;
    if (std::abs(step) < 1e-14 * (1 + std::abs(lam))) return lam;
  }
  throw NoConvergence("track_eigenvalue: Newton did not converge");
}

ExpansionCrossing expansion_crossing(double ell, double alpha) {
  if (!(ell > 0) || !(alpha > 0)) throw PreconditionError("expansion_crossing: ell and alpha must be positive");
  auto s = closed_form_spreading(alpha);
  const double mu = s.mu_lin, ka = s.kappa_lin;
  const double f = std::numbers::pi * std::numbers::pi / (4 * mu * ell * ell);
  ExpansionCrossing e;
  e.c_hat = -f * (alpha + 6 * (mu * mu - ka * ka));
  e.lambda_hat = cplx(0, ka * f * (-alpha + 6 * (mu * mu + ka * ka)));
  e.lambda_hat_verbatim = cplx(0, f * (-alpha + 6 * (mu * mu + ka * ka)));
  return e;
}

CrossingData find_hopf_crossing(const ModelParams& p0, const CrossingOptions& opt) {
  p0.validate();
  ModelParams p = p0;
  double omega, c;
  if (opt.seed) {
    std::tie(omega, c) = *opt.seed;
  } else {
    auto s = closed_form_spreading(p.chi_plus);
    auto e = expansion_crossing(p.ell, p.chi_plus);
    omega = (s.lambda_lin + e.lambda_hat).imag();
    c = s.c_lin + e.c_hat;
  }

  CrossingData out;
  out.ell = p.ell;
  bool converged = false;
  for (int it = 0; it < opt.max_iter; ++it) {
    p.c = c;
    auto g = plateau_gauged(p, cplx(0, omega));
    cplx gw = cplx(0, 1) * g.dg_dlambda;
    Eigen::Matrix2d J;
    J << gw.real(), g.dg_dc.real(), gw.imag(), g.dg_dc.imag();
    Eigen::Vector2d rhs(-g.g.real(), -g.g.imag());
    Eigen::Vector2d d = J.fullPivLu().solve(rhs);
    double len = d.norm();
    if (len > 0.1) d *= 0.1 / len;
    omega += d(0);
    c += d(1);
    out.newton_iterations = it + 1;
    if (d.norm() < opt.tol * (1 + std::abs(omega) + c)) {
      converged = true;
      break;
    }
  }
  if (!converged || !(c > 0)) throw NoConvergence("find_hopf_crossing: Newton on (ω, c) did not converge");

  p.c = c;
  out.c_star = c;
  out.lambda_star = cplx(0, omega);
  auto g = plateau_gauged(p, out.lambda_star);
  out.dRe_dc_implicit = -(g.dg_dc / g.dg_dlambda).real();

  ModelParams a = p, b = p;
  a.c = c + opt.fd_step;
  b.c = c - opt.fd_step;
  cplx la = track_eigenvalue(a, out.lambda_star), lb = track_eigenvalue(b, out.lambda_star);
  out.dRe_dc = (la.real() - lb.real()) / (2 * opt.fd_step);

  // simplicity: exactly one zero inside a small circle
  const double r = 1e-3;
  std::vector<cplx> circle;
  for (int k = 0; k < 32; ++k) circle.push_back(out.lambda_star + r * std::polar(1.0, 2 * std::numbers::pi * k / 32));
  out.simple = winding_number(p, circle) == 1;
  if (!out.simple) throw NotSimple("find_hopf_crossing: zero is not simple");

  if (opt.verify_first_crossing) {
    int n = count_eigs_in_box(p, {-0.02, 2.0, -3.0, 3.0}, 64);
    if (n != 2) throw Error("first-crossing check failed: " + std::to_string(n) + " zeros in the right box");
  }
  return out;
}

// ---------------------------------------------------------------------------------------------

std::array<cplx, 4> PiecewiseSolution::vec(cplx nu, double chi) const { return mode_vec(nu, chi, adjoint_); }

std::array<cplx, 4> PiecewiseSolution::exterior(double y, cplx n0, cplx n1, const cplx* w, double chi) const {
  auto v0 = vec(n0, chi);
  cplx e0 = std::exp(n0 * y);
  std::array<cplx, 4> dd;
  if (std::abs(n1 - n0) > 1e-7 * (1 + std::abs(n0))) {
    auto v1 = vec(n1, chi);
    cplx e1 = std::exp(n1 * y);
    for (int i = 0; i < 4; ++i) dd[i] = (v1[i] * e1 - v0[i] * e0) / (n1 - n0);
  } else {
    // ∂ν[v(ν)e^{νy}]
    V4<cplx> dv = {0.0, 1.0, 2.0 * n0, 3.0 * n0 * n0 + (adjoint_ ? 0.0 : chi)};
    for (int i = 0; i < 4; ++i) dd[i] = (dv[i] + y * v0[i]) * e0;
  }
  std::array<cplx, 4> u;
  for (int i = 0; i < 4; ++i) u[i] = w[0] * v0[i] * e0 + w[1] * dd[i];
  return u;
}

std::array<cplx, 4> PiecewiseSolution::eval(double x) const {
  if (x < -ell_) return exterior(x + ell_, nu_m_[0], nu_m_[1], a_, chi_m_);
  if (x > ell_) return exterior(x - ell_, nu_m_[2], nu_m_[3], b_, chi_m_);
  std::array<cplx, 4> u{};
  for (int k = 0; k < 4; ++k) {
    double xr = nu_p_[k].real() > 0 ? ell_ : -ell_;
    auto v = vec(nu_p_[k], chi_p_);
    cplx e = coef_[k] * std::exp(nu_p_[k] * (x - xr));
    for (int i = 0; i < 4; ++i) u[i] += v[i] * e;
  }
  return u;
}

PiecewiseSolution null_solution(const ModelParams& p, cplx lambda, bool adjoint) {
  PiecewiseSolution s;
  s.ell_ = p.ell;
  s.chi_p_ = p.chi_plus;
  s.chi_m_ = p.chi_minus;
  s.adjoint_ = adjoint;
  s.nu_p_ = roots_for(p.chi_plus, p.c, lambda, adjoint);
  s.nu_m_ = roots_for(p.chi_minus, p.c, lambda, adjoint);
  if (ill_conditioned(s.nu_p_)) throw EigenbasisIllConditioned("null_solution: plateau roots nearly coincide");

  using M8 = Eigen::Matrix<cplx, 8, 8>;
  M8 A = M8::Zero();
  const double l = p.ell;
  for (int k = 0; k < 4; ++k) {
    double xr = s.nu_p_[k].real() > 0 ? l : -l;
    auto v = s.vec(s.nu_p_[k], p.chi_plus);
    cplx el = std::exp(s.nu_p_[k] * (-l - xr)), er = std::exp(s.nu_p_[k] * (l - xr));
    for (int i = 0; i < 4; ++i) {
      A(i, k) = v[i] * el;
      A(4 + i, k) = v[i] * er;
    }
  }
  auto eu0 = mode_vec(s.nu_m_[0], p.chi_minus, adjoint), eu1 = mode_dd(s.nu_m_[0], s.nu_m_[1], p.chi_minus, adjoint);
  auto es0 = mode_vec(s.nu_m_[2], p.chi_minus, adjoint), es1 = mode_dd(s.nu_m_[2], s.nu_m_[3], p.chi_minus, adjoint);
  for (int i = 0; i < 4; ++i) {
    A(i, 4) = -eu0[i];
    A(i, 5) = -eu1[i];
    A(4 + i, 6) = -es0[i];
    A(4 + i, 7) = -es1[i];
  }
  Eigen::JacobiSVD<M8> svd(A, Eigen::ComputeFullV);
  auto sv = svd.singularValues();
  s.sigma_ratio = sv(7) / sv(0);
  s.sigma_gap = sv(6) / sv(0);
  if (s.sigma_gap < 1e-8) throw NullVectorDegenerate("null_solution: two-dimensional null space");
  Eigen::Matrix<cplx, 8, 1> z = svd.matrixV().col(7);
  for (int k = 0; k < 4; ++k) s.coef_[k] = z(k);
  s.a_[0] = z(4), s.a_[1] = z(5), s.b_[0] = z(6), s.b_[1] = z(7);
  return s;
}

EigenfunctionProfile eigenfunction_profiles(const CrossingData& crossing, const ModelParams& p0, const RVec& grid) {
  ModelParams p = p0;
  p.c = crossing.c_star;
  const double l = p.ell;
  if (grid.empty() || grid.front() > -l || grid.back() < l) throw PreconditionError("eigenfunction_profiles: grid must cover the plateau");
  auto sp = null_solution(p, crossing.lambda_star, false);
  auto sa = null_solution(p, crossing.lambda_star, true);
  if (sp.sigma_ratio > 1e-6 || sa.sigma_ratio > 1e-6)
    throw NullVectorDegenerate("eigenfunction_profiles: matching matrix is not singular at λ*");

  EigenfunctionProfile out;
  out.grid = grid;
  for (double x : grid) {
    out.p.push_back(sp.value(x));
    out.psi.push_back(std::conj(sa.value(x)));
  }
  auto lin = closed_form_spreading(p.chi_plus);
  auto np = spatial_roots(p.chi_plus, p.c, crossing.lambda_star).nu;
  cplx center = 0.5 * (np[1] + np[2]);
  out.alpha_ell = center - lin.nu_lin();
  const cplx nu = lin.nu_lin() + out.alpha_ell;

  // least-squares fit of the demodulated profiles to sin(π(x−ℓ)/(2ℓ)) on the plateau
  auto fit = [&](const CVec& f, cplx rate, double& r2) {
    cplx num = 0;
    double den = 0;
    std::vector<std::pair<cplx, double>> pts;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double x = grid[i];
      if (x < -l || x > l) continue;
      double sn = std::sin(std::numbers::pi * (x - l) / (2 * l));
      cplx fd = f[i] * std::exp(-rate * x);
      pts.push_back({fd, sn});
      num += fd * sn;
      den += sn * sn;
    }
    cplx a = num / den;
    // no intercept in the model, so R² is uncentered
    double ss_res = 0, ss_tot = 0;
    for (auto& [fd, sn] : pts) {
      ss_res += std::norm(fd - a * sn);
      ss_tot += std::norm(fd);
    }
    r2 = 1 - ss_res / ss_tot;
    return a;
  };
  cplx ap = fit(out.p, nu, out.fit_r2_p);
  cplx apsi = fit(out.psi, -std::conj(nu), out.fit_r2_psi);

  out.A = out.B = std::exp(lin.mu_lin * l / 2);
  double pmax = 0, res = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.p[i] *= out.A / ap;
    out.psi[i] *= out.B / apsi;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double x = grid[i];
    if (x < -l || x > l) continue;
    pmax = std::max(pmax, std::abs(out.p[i]));
    cplx model = out.A * std::exp(nu * x) * std::sin(std::numbers::pi * (x - l) / (2 * l));
    res = std::max(res, std::abs(out.p[i] - model));
  }
  out.plateau_residual = res / pmax;
  return out;
}

}  // namespace trigfront
