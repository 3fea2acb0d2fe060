#pragma once

#include <string>
#include <utility>
#include <vector>

#include "trigfront/branch_point.hpp"
#include "trigfront/types.hpp"

namespace trigfront {

struct AbsSpecPoint {
  cplx lambda;
  std::pair<cplx, cplx> nu_pair;  // (ν, ν + iγ): ν₃ and ν₂ of the ordered set
  double gamma_sep = 0;
};

struct AbsSpecCurve {
  double c = 0, chi = 0;
  std::vector<AbsSpecPoint> points;
  BranchPoint origin;
  bool fold_detected = false;
  std::string stop_reason;
};

struct AbsTraceOptions {
  double gamma_max = 10.0;
  double min_step = 1e-9;
  double max_step = 0.05;
  double tol_abs = 1e-9;
};

AbsSpecCurve trace_absolute(const BranchPoint& bp, double arclength_max, double step, const AbsTraceOptions& opt = {});

// rightmost point of Σ_abs for d with coefficient χ; equals the upper branch point
cplx rightmost_absolute(double chi, double c);

// false when some non-origin point has a collapsed pair or a flat (ν₂−ν₃)(λ)
bool genericity_check(const AbsSpecCurve& curve, double tol_gen = 1e-6, std::string* warning = nullptr);

}  // namespace trigfront
