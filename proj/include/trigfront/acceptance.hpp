#pragma once

#include <functional>
#include <string>
#include <vector>

#include "trigfront/branch_point.hpp"
#include "trigfront/io.hpp"

namespace trigfront {

struct CriterionResult {
  std::string id, title;
  bool passed = false;
  std::string measured, expected;
  JsonObject details;
  double seconds = 0;
};

enum class VerifyLevel { fast, full };

using ClosedFormFn = std::function<LinearSpreading(double)>;

CriterionResult criterion_a1(const ClosedFormFn& closed_form = closed_form_spreading);  // closed forms vs solvers
CriterionResult criterion_a2();  // crossing asymptotics, order ≈ 3
CriterionResult criterion_a3();  // finite differences vs matching determinant
CriterionResult criterion_a4();  // argument-principle counts
CriterionResult criterion_a5();  // front/back Evans functions do not vanish
CriterionResult criterion_a6();  // sign and size of θ₊
CriterionResult criterion_a7();  // conservation and convective/absolute classification
CriterionResult criterion_a8();  // supercritical amplitude law
CriterionResult criterion_a9();  // property suite

// fast: everything except the simulation criteria A7, A8
std::vector<CriterionResult> verify(VerifyLevel level);
CriterionResult run_criterion(const std::string& id);

std::string report_line(const CriterionResult& r);
JsonObject report_json(const std::vector<CriterionResult>& results);

}  // namespace trigfront
