#pragma once

#include <vector>

namespace trigfront {

// Fornberg weights: w[m][j] approximates the m-th derivative at z from samples at x[j]
std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int max_order);

}  // namespace trigfront
