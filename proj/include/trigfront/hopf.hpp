#pragma once

#include <string>
#include <vector>

#include "trigfront/discrete_operator.hpp"
#include "trigfront/evans.hpp"

namespace trigfront {

struct QuadraticModes {
  CVec phi_plus, phi_zero, phi_minus;  // physical (unweighted) coordinates
  RVec fpp;                            // f″(x, u*) on the grid
  double residual_plus = 0, residual_zero = 0;
  bool trivial = false;                // f″ ≡ 0, nothing solved
};

QuadraticModes solve_quadratic_modes(const GridOperator& op, const EigenPair& pair, double omega, const RVec& fpp_profile);

enum class Normalization { paper_AB, inner_product };
enum class Direction { supercritical, subcritical };

const char* to_string(Normalization n);
const char* to_string(Direction d);

struct HopfResult {
  cplx theta_plus, theta_minus;
  double mu_prime = 0;   // −dReλ*/dc, derivative along the destabilizing direction −c
  double dRe_dc = 0;     // raw signed derivative
  double upsilon_c = 0;  // Re θ₊ / μ′
  double upsilon_omega = 0;
  Direction direction = Direction::subcritical;
  double ell = 0;
  Normalization normalization = Normalization::inner_product;
  double c_star = 0, omega_star = 0;
  cplx lambda;           // discrete eigenvalue used
  double fit_r2 = 1;     // min R² of the plateau fits (paper_AB only)
  double sbp_mismatch = 0;
};

HopfResult hopf_coefficient(const GridOperator& op, const EigenPair& pair, const QuadraticModes& modes,
                            const CrossingData& crossing, Normalization normalization, double min_fit_r2 = 0.99);

// −27γ(2ν_lin + ν̄_lin)² / (8μ_lin)
cplx leading_order_theta(double alpha, double gamma);

struct BranchRow {
  double r, c, omega;
};

// c(r) = c* − Υ_c r², ω(r) = ω* + Im θ₊ r²
std::vector<BranchRow> branch_prediction(const HopfResult& result, const RVec& r_grid);

struct HopfPipelineOptions {
  double margin = 15.0;
  double h = 0.05;
  double eta = 0.0;
  double min_fit_r2 = 0.99;
};

// θ₊ for the example model (f″ = 0), from the crossing and the discrete eigenpair at c*
HopfResult compute_hopf(const ModelParams& params, Normalization normalization, const HopfPipelineOptions& opt = {});

}  // namespace trigfront
