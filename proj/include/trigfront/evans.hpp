#pragma once

#include <array>
#include <optional>
#include <string>

#include "trigfront/params.hpp"
#include "trigfront/types.hpp"

namespace trigfront {

enum class EvansKind { front, back, plateau };

struct EvansValue {
  cplx lambda;
  cplx value;            // true determinant = value·exp(log_scale)
  double log_scale = 0;
  EvansKind kind = EvansKind::plateau;
  bool on_absolute = false;
  double transversality = -1;  // plateau only: |det| over the Plücker norms, in [0,1]
  bool fallback = false;       // plateau only: propagated instead of eigenbasis
};

// Vandermonde of (ν₁⁺,ν₂⁺,ν₃⁻,ν₄⁻) resp. (ν₁⁻,ν₂⁻,ν₃⁺,ν₄⁺), divided by the within-family factors
EvansValue evans_front(const ModelParams& p, cplx lambda);
EvansValue evans_back(const ModelParams& p, cplx lambda);

enum class SubspaceMode { analytic, propagated };

struct PlateauOptions {
  SubspaceMode mode = SubspaceMode::analytic;
  double margin = 10.0;   // propagation length for SubspaceMode::propagated
  bool adjoint = false;   // matching problem of the transposed operator
};

EvansValue plateau_determinant(const ModelParams& p, cplx lambda, const PlateauOptions& opt = {});

// The analytically gauged determinant g = det·exp(−ref) and its λ- and c-derivatives.
struct GaugedDeterminant {
  cplx g, dg_dlambda, dg_dc;
  cplx ref;
  bool fallback = false;
};

GaugedDeterminant plateau_gauged(const ModelParams& p, cplx lambda, bool adjoint = false);

// winding number of the plateau determinant around the closed polygon
int winding_number(const ModelParams& p, const std::vector<cplx>& polygon, int max_depth = 24);
int count_eigs_in_box(const ModelParams& p, const ComplexBox& box, int n_contour = 64);

struct CrossingData {
  double ell = 0;
  double c_star = 0;
  cplx lambda_star;
  double dRe_dc = 0;           // central difference of the tracked root
  double dRe_dc_implicit = 0;  // −Re(∂c g / ∂λ g)
  bool simple = false;
  int newton_iterations = 0;
};

struct CrossingOptions {
  int max_iter = 40;
  double tol = 1e-12;
  double fd_step = 1e-5;
  bool verify_first_crossing = false;
  std::optional<std::pair<double, double>> seed;  // (ω, c)
};

CrossingData find_hopf_crossing(const ModelParams& p, const CrossingOptions& opt = {});

// nearest zero of the determinant at fixed c, by complex Newton from the seed
cplx track_eigenvalue(const ModelParams& p, cplx seed, int max_iter = 40);

struct ExpansionCrossing {
  double c_hat = 0;
  cplx lambda_hat;           // includes the κ_lin factor
  cplx lambda_hat_verbatim;  // the displayed formula without κ_lin
};

ExpansionCrossing expansion_crossing(double ell, double alpha);

// exact piecewise-exponential solution of the matching problem at an eigenvalue
class PiecewiseSolution {
 public:
  // U = (u, u', u''+χu, (u''+χu)') for the primal problem, (φ, φ', φ'', φ''') for the adjoint
  std::array<cplx, 4> eval(double x) const;
  cplx value(double x) const { return eval(x)[0]; }
  double sigma_ratio = 0;  // smallest / largest singular value of the matching matrix
  double sigma_gap = 0;    // second smallest / largest

  friend PiecewiseSolution null_solution(const ModelParams& p, cplx lambda, bool adjoint);

 private:
  double ell_ = 0, chi_p_ = 0, chi_m_ = 0;
  bool adjoint_ = false;
  std::array<cplx, 4> nu_p_{}, nu_m_{};
  std::array<cplx, 4> coef_{};
  cplx a_[2]{}, b_[2]{};
  std::array<cplx, 4> vec(cplx nu, double chi) const;
  std::array<cplx, 4> exterior(double y, cplx n0, cplx n1, const cplx* w, double chi) const;
};

PiecewiseSolution null_solution(const ModelParams& p, cplx lambda, bool adjoint = false);

struct EigenfunctionProfile {
  RVec grid;
  CVec p, psi;
  double A = 0, B = 0;
  cplx alpha_ell;
  double fit_r2_p = 0, fit_r2_psi = 0;
  double plateau_residual = 0;  // max |p − fit| / max |p| on the plateau
};

EigenfunctionProfile eigenfunction_profiles(const CrossingData& crossing, const ModelParams& p, const RVec& grid);

}  // namespace trigfront
