#pragma once

#include <Eigen/Sparse>
#include <optional>

#include "trigfront/params.hpp"
#include "trigfront/types.hpp"

namespace trigfront {

enum class InterfaceTreatment {
  jump_corrected,  // immersed-interface corrections from the continuity of (u, u', θ, θ')
  midpoint         // plain stencils with χ = (χ₊+χ₋)/2 at the jump point
};

struct GridOperator {
  ModelParams params;
  double L_half = 0, h = 0;
  int n = 0;
  RVec x;                              // interior nodes, u = u' = 0 beyond ±L_half
  Eigen::SparseMatrix<double> matrix;  // conjugated by e^{η⟨x⟩} when eta > 0
  Eigen::SparseMatrix<double> d2;      // plain fourth-order second difference
  double eta = 0;
  InterfaceTreatment interface = InterfaceTreatment::jump_corrected;
  const char* boundary = "dirichlet_clamped";
};

struct OperatorOptions {
  InterfaceTreatment interface = InterfaceTreatment::jump_corrected;
  double min_margin = 4.0;  // geometric sanity only; accuracy wants ~15
};

GridOperator build_operator(const ModelParams& params, double L_half, double h, const OperatorOptions& opt = {});

struct EigenPair {
  cplx lambda;
  CVec v, w;
  bool normalized = false;  // h·Σ conj(w)v = 1 and h·Σ|v|² = 1
  double residual = 0;      // ‖(M − λ)v‖ / ‖v‖
};

struct SpectrumOptions {
  std::optional<ComplexBox> region;
  int dense_limit = 4000;
  bool left_vectors = true;
};

std::vector<EigenPair> spectrum(const GridOperator& op, const SpectrumOptions& opt = {});

struct LeadingOptions {
  double margin = 15.0;
  double h = 0.05;
  double max_distance = 0.25;
  InterfaceTreatment interface = InterfaceTreatment::jump_corrected;
};

EigenPair leading_pair(const GridOperator& op, cplx seed_lambda, double max_distance = 0.25);
EigenPair leading_pair(const ModelParams& params, cplx seed_lambda, const LeadingOptions& opt = {});

// rescale v to h·Σ|v|² = 1 with its largest entry real positive, then w to h·Σ conj(w)v = 1
void normalize_pair(EigenPair& pair, double h);

CVec apply(const GridOperator& op, const CVec& u);
CVec apply(const Eigen::SparseMatrix<double>& m, const CVec& u);
double inner_weight(const GridOperator& op, double x);  // e^{η⟨x⟩}

}  // namespace trigfront
