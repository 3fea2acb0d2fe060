#pragma once

#include <array>
#include <string>
#include <vector>

#include "trigfront/params.hpp"
#include "trigfront/types.hpp"

namespace trigfront {

// d(λ,ν) = −ν⁴ − χν² + cν − λ
cplx eval_dispersion(double chi, double c, cplx lambda, cplx nu);
cplx dispersion_dnu(double chi, double c, cplx nu);
cplx dispersion_dnu2(double chi, cplx nu);

struct SpatialRootSet {
  cplx lambda;
  double chi = 0, c = 0;
  std::array<cplx, 4> nu{};  // Re descending, ties by Im descending
  int morse_index = 0;
  double max_residual = 0;   // backward error, relative to the term magnitudes
};

constexpr double kTolRoot = 1e-11;

SpatialRootSet spatial_roots(double chi, double c, cplx lambda, double tol_root = kTolRoot);

// relative residual |d| / (|ν|⁴ + |χ||ν|² + c|ν| + |λ|)
double relative_residual(double chi, double c, cplx lambda, cplx nu);

enum class Side { plus, minus };

struct SpectrumCurve {
  struct Sample {
    double k;
    cplx lambda;
  };
  std::vector<Sample> samples;
  Side side = Side::plus;
  double eta = 0;
};

// λ(k) with ν = ik − s·η, s = +1 on the plus side and −1 on the minus side
cplx essential_point(double chi, double c, double eta_signed, double k);
SpectrumCurve essential_curve(Side side, double chi, double c, double eta, const RVec& k_grid);
SpectrumCurve essential_curve(Side side, const ModelParams& p, double eta, const RVec& k_grid);

// distance from λ to the curve k ↦ λ(k), η = 0
double distance_to_essential(double chi, double c, cplx lambda);

struct ResonanceEntry {
  int k;
  cplx lambda;
  double dist_plus, dist_minus;
  double transversality;  // normalized plateau matching determinant
  bool ok;
};

struct ResonanceReport {
  std::vector<ResonanceEntry> entries;
  std::vector<int> flagged;
  bool passed = true;
};

struct ResonanceThresholds {
  double min_distance = 1e-3;
  double min_transversality = 1e-8;
};

ResonanceReport check_no_resonance(const ModelParams& params, double omega_star, int k_max,
                                   const ResonanceThresholds& thr = {});

}  // namespace trigfront
