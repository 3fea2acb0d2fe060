#pragma once

#include <utility>

#include "trigfront/types.hpp"

namespace trigfront {

struct BranchPoint {
  cplx lambda_br;
  cplx nu_br;
  double c = 0, chi = 0;
  double residual_d = 0, residual_dnu = 0;
  bool pinched = false;
};

struct LinearSpreading {
  double alpha = 0;
  double c_lin = 0;
  cplx lambda_lin;
  double mu_lin = 0, kappa_lin = 0;
  cplx nu_lin() const { return {mu_lin, kappa_lin}; }
};

// closed forms for d with χ = α, evaluated in long double
LinearSpreading closed_form_spreading(double alpha);

struct DoubleRootOptions {
  int max_iter = 50;
  double tol = 1e-13;
  bool check_pinching = true;
};

BranchPoint find_double_root(double chi, double c, std::pair<cplx, cplx> seed, const DoubleRootOptions& opt = {});

// fastest-growing mode of λ(ik) = −k⁴ + χk² + ick, used as a seed when no closed form is known
std::pair<cplx, cplx> fastest_growing_mode_seed(double chi, double c);

// all three double roots at (χ, c): roots of ∂νd = 0, upper half plane first
std::pair<cplx, cplx> pinched_candidate_seed(double chi, double c);

struct PinchingOptions {
  int steps = 10000;
  double horizon_factor = 100.0;  // T = factor·max(1, |λ_br|)
};

bool pinching_check(const BranchPoint& bp, const PinchingOptions& opt = {});

// χ is the plateau coefficient, which is also the instability strength α
LinearSpreading find_spreading_speed(double chi);

}  // namespace trigfront
