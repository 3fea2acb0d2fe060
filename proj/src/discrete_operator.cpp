#include "trigfront/discrete_operator.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <memory>

#include "trigfront/errors.hpp"
#include "trigfront/fd_weights.hpp"

namespace trigfront {

namespace {

using Trip = Eigen::Triplet<double>;
using SpMat = Eigen::SparseMatrix<double>;

constexpr double kW2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
constexpr double kW1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};

double factorial(int m) {
  double f = 1;
  for (int k = 2; k <= m; ++k) f *= k;
  return f;
}

// sparse row functional: (column, weight) pairs
using Row = std::vector<std::pair<int, double>>;

Row scaled(const Row& r, double s) {
  Row o = r;
  for (auto& [j, w] : o) w *= s;
  return o;
}

Row combine(const Row& a, double sa, const Row& b, double sb) {
  Row o = scaled(a, sa);
  for (auto [j, w] : b) o.push_back({j, w * sb});
  return o;
}

void add_row(std::vector<Trip>& t, int i, const Row& r, double s) {
  for (auto [j, w] : r) t.emplace_back(i, j, s * w);
}

}  // namespace

double inner_weight(const GridOperator& op, double x) { return std::exp(op.eta * std::sqrt(1 + x * x)); }

GridOperator build_operator(const ModelParams& params, double L_half, double h, const OperatorOptions& opt) {
  params.validate();
  const double ell = params.ell, c = params.c;
  double cells = 2 * L_half / h;
  if (!(h > 0) || std::abs(cells - std::round(cells)) > 1e-9 * cells)
    throw GeometryMismatch("build_operator: h must divide the truncated domain");
  if (L_half - ell < opt.min_margin || 2 * ell < 16 * h)
    throw GeometryMismatch("build_operator: interfaces too close to the boundary or to each other");

  GridOperator op;
  op.params = params;
  op.L_half = L_half;
  op.h = h;
  op.n = static_cast<int>(std::lround(cells)) - 1;
  op.eta = params.eta;
  op.interface = opt.interface;
  const int n = op.n;
  op.x.resize(n);
  for (int i = 0; i < n; ++i) op.x[i] = -L_half + h * (i + 1);

  const double tol = 1e-9 * h;
  RVec chi(n);
  for (int i = 0; i < n; ++i) chi[i] = (op.x[i] > -ell + tol && op.x[i] <= ell + tol) ? params.chi_plus : params.chi_minus;
  if (opt.interface == InterfaceTreatment::midpoint)
    for (int i = 0; i < n; ++i)
      if (std::abs(std::abs(op.x[i]) - ell) <= tol) chi[i] = 0.5 * (params.chi_plus + params.chi_minus);

  std::vector<Trip> d2, d1, a, tcorr, ucorr;
  for (int i = 0; i < n; ++i)
    for (int k = -2; k <= 2; ++k) {
      int j = i + k;
      if (j < 0 || j >= n) continue;
      d2.emplace_back(i, j, kW2[k + 2] / (h * h));
      if (k != 0) d1.emplace_back(i, j, kW1[k + 2] / h);
    }
  a = d2;
  for (int i = 0; i < n; ++i) a.emplace_back(i, i, chi[i]);
  std::vector<Trip> d1c = d1;

  if (opt.interface == InterfaceTreatment::jump_corrected) {
    for (double x0 : {-ell, ell}) {
      // last node on the left side; the node at x0 itself belongs to the left
      int i0 = static_cast<int>(std::floor((x0 + L_half) / h + 1e-9)) - 1;
      const double chiL = x0 < 0 ? params.chi_minus : params.chi_plus;
      const double chiR = x0 < 0 ? params.chi_plus : params.chi_minus;
      const double jc = chiR - chiL, jsq = chiR * chiR - chiL * chiL;

      // one-sided interpolation of u, u', u'' at x0 from the left
      std::vector<double> z;
      Row base;
      for (int j = i0 - 6; j <= i0; ++j) z.push_back(op.x[j] - x0), base.push_back({j, 0.0});
      auto F = fornberg_weights(0.0, z, 2);
      Row f0 = base, f1 = base, f2 = base;
      for (std::size_t q = 0; q < z.size(); ++q) f0[q].second = F[0][q], f1[q].second = F[1][q], f2[q].second = F[2][q];
      Row th0 = combine(f2, 1.0, f0, chiL);
      Row J[5];
      J[2] = scaled(f0, -jc);
      J[3] = scaled(f1, -jc);
      J[4] = combine(th0, -jc, f0, jsq);
      // θ''(x0) from the five nodes nearest x0
      int ic = static_cast<int>(std::lround((x0 + L_half) / h)) - 1;
      std::vector<double> zc;
      Row g;
      for (int j = ic - 2; j <= ic + 2; ++j) zc.push_back(op.x[j] - x0), g.push_back({j, 0.0});
      auto G = fornberg_weights(0.0, zc, 2);
      for (std::size_t q = 0; q < zc.size(); ++q) g[q].second = G[2][q];

      for (int i = i0 - 2; i <= i0 + 3; ++i)
        for (int k = -2; k <= 2; ++k) {
          int j = i + k;
          double s;
          if (i <= i0 && j > i0) s = 1.0;
          else if (i > i0 && j <= i0) s = -1.0;
          else continue;
          double xr = op.x[j] - x0;
          for (int m = 2; m <= 4; ++m) {
            double coef = s * std::pow(xr, m) / factorial(m);
            add_row(a, i, J[m], -kW2[k + 2] / (h * h) * coef);
            add_row(d1c, i, J[m], -kW1[k + 2] / h * coef);
          }
          // θ jumps: [θ'''] = −c[χ]u(x0), [θ''''] = −[χ]θ''(x0)
          add_row(ucorr, i, f0, kW2[k + 2] / (h * h) * s * std::pow(xr, 3) / 6 * (-c * jc));
          add_row(tcorr, i, g, kW2[k + 2] / (h * h) * s * std::pow(xr, 4) / 24 * (-jc));
        }
    }
  }

  auto make = [n](std::vector<Trip>& t) {
    SpMat m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  };
  SpMat D2 = make(d2), A = make(a), D1c = make(d1c), T = make(tcorr), U = make(ucorr);
  SpMat M = SpMat(-(SpMat(D2 - T) * A)) + U + c * D1c;
  if (op.eta > 0) {
    RVec wgt(n);
    for (int i = 0; i < n; ++i) wgt[i] = inner_weight(op, op.x[i]);
    for (int k = 0; k < M.outerSize(); ++k)
      for (SpMat::InnerIterator it(M, k); it; ++it) it.valueRef() *= wgt[it.row()] / wgt[it.col()];
  }
  M.prune(0.0);
  op.matrix = M;
  op.d2 = D2;
  return op;
}

CVec apply(const SpMat& m, const CVec& u) {
  Eigen::Map<const Eigen::VectorXcd> v(u.data(), static_cast<Eigen::Index>(u.size()));
  Eigen::VectorXcd r = m.cast<cplx>() * v;
  return CVec(r.data(), r.data() + r.size());
}

CVec apply(const GridOperator& op, const CVec& u) { return apply(op.matrix, u); }

namespace {

double residual_of(const SpMat& M, cplx lambda, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd r = M.cast<cplx>() * v - lambda * v;
  return r.norm() / v.norm();
}

Eigen::VectorXcd left_vector(const SpMat& M, cplx lambda, int iters = 3) {
  // w with w^H M = λ w^H, i.e. Mᵀ conj(w) = λ conj(w)
  const int n = M.rows();
  Eigen::SparseMatrix<cplx> B = M.transpose().cast<cplx>();
  cplx shift = lambda + cplx(1e-10, 1e-10) * (1.0 + std::abs(lambda));
  for (int i = 0; i < n; ++i) B.coeffRef(i, i) -= shift;
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(B);
  if (lu.info() != Eigen::Success) throw EigensolverFailure("left eigenvector factorization failed");
  Eigen::VectorXcd y = Eigen::VectorXcd::Ones(n);
  for (int k = 0; k < iters; ++k) {
    y = lu.solve(y);
    y /= y.norm();
  }
  return y.conjugate();
}

}  // namespace

void normalize_pair(EigenPair& pair, double h) {
  Eigen::Map<Eigen::VectorXcd> v(pair.v.data(), pair.v.size());
  Eigen::Index imax;
  v.cwiseAbs().maxCoeff(&imax);
  cplx phase = std::abs(v(imax)) / v(imax);
  v *= phase / (std::sqrt(h) * v.norm());
  if (!pair.w.empty()) {
    Eigen::Map<Eigen::VectorXcd> w(pair.w.data(), pair.w.size());
    cplx ip = h * w.dot(v);  // Σ conj(w) v
    w /= std::conj(ip);
    pair.normalized = true;
  }
}

std::vector<EigenPair> spectrum(const GridOperator& op, const SpectrumOptions& opt) {
  if (op.n > opt.dense_limit) throw PreconditionError("spectrum: matrix exceeds the dense limit");
  Eigen::MatrixXd D = Eigen::MatrixXd(op.matrix);
  Eigen::EigenSolver<Eigen::MatrixXd> es(D, true);
  if (es.info() != Eigen::Success) throw EigensolverFailure("dense eigensolve failed");
  std::vector<EigenPair> out;
  for (int k = 0; k < op.n; ++k) {
    cplx lam = es.eigenvalues()(k);
    if (opt.region && !opt.region->contains(lam)) continue;
    Eigen::VectorXcd v = es.eigenvectors().col(k);
    EigenPair p;
    p.lambda = lam;
    p.residual = residual_of(op.matrix, lam, v);
    if (!(p.residual < 1e-8)) throw EigensolverFailure("spectrum: eigenpair residual above 1e-8");
    p.v.assign(v.data(), v.data() + v.size());
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
    return a.lambda.imag() > b.lambda.imag();
  });
  if (opt.left_vectors && out.size() <= 50)
    for (auto& p : out) {
      Eigen::VectorXcd w = left_vector(op.matrix, p.lambda);
      p.w.assign(w.data(), w.data() + w.size());
    }
  for (auto& p : out) normalize_pair(p, op.h);
  return out;
}

EigenPair leading_pair(const GridOperator& op, cplx seed, double max_distance) {
  const int n = op.n;
  Eigen::SparseMatrix<cplx> Mc = op.matrix.cast<cplx>();
  auto factor = [&](cplx sigma) {
    Eigen::SparseMatrix<cplx> B = Mc;
    for (int i = 0; i < n; ++i) B.coeffRef(i, i) -= sigma;
    auto lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<cplx>>>();
    lu->compute(B);
    if (lu->info() != Eigen::Success) throw EigensolverFailure("shift-invert factorization failed");
    return lu;
  };

  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n);
  cplx lam = seed;
  for (int stage = 0; stage < 3; ++stage) {
    // shift moves onto the current estimate after the first stage
    cplx sigma = stage == 0 ? seed : lam + cplx(1e-9, 1e-9);
    auto lu = factor(sigma);
    for (int it = 0; it < 30; ++it) {
      Eigen::VectorXcd y = lu->solve(v);
      cplx mu = v.dot(y) / v.squaredNorm();
      cplx next = sigma + 1.0 / mu;
      v = y / y.norm();
      bool done = std::abs(next - lam) < 1e-14 * (1 + std::abs(next));
      lam = next;
      if (done) break;
    }
    if (residual_of(op.matrix, lam, v) < 1e-11) break;
  }
  if (std::abs(lam - seed) > max_distance) throw NoEigenvalueNearSeed("leading_pair: nearest eigenvalue too far from the seed");

  EigenPair p;
  p.lambda = lam;
  p.residual = residual_of(op.matrix, lam, v);
  if (!(p.residual < 1e-8)) throw EigensolverFailure("leading_pair: residual above 1e-8");
  p.v.assign(v.data(), v.data() + n);
  Eigen::VectorXcd w = left_vector(op.matrix, lam);
  p.w.assign(w.data(), w.data() + n);
  normalize_pair(p, op.h);
  return p;
}

EigenPair leading_pair(const ModelParams& params, cplx seed, const LeadingOptions& opt) {
  double L = params.ell + opt.margin;
  L = std::ceil(L / opt.h - 1e-9) * opt.h;
  OperatorOptions oo;
  oo.interface = opt.interface;
  auto op = build_operator(params, L, opt.h, oo);
  return leading_pair(op, seed, opt.max_distance);
}

}  // namespace trigfront
