#pragma once

#include <string>
#include <vector>

namespace trigfront {

// f(x,u) = χ(x)u + γu³ − βu⁵ with χ = chi_plus on |x| < ell and chi_minus outside.
// Speeds and lengths are in the nondimensional units of the co-moving PDE.
struct ModelParams {
  double chi_plus = 1.0;
  double chi_minus = -1.0;
  double gamma = -1.0;
  double beta = 1.0;
  double ell = 20.0;
  double c = 1.6220759259174;
  double eta = 0.0;

  // violated invariants, empty when valid; the sign condition on χ± is a warning only
  std::vector<std::string> violations() const;
  std::vector<std::string> warnings() const;
  void validate() const;  // throws ValidationError listing all violations
};

}  // namespace trigfront
