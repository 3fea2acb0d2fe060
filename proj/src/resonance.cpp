#include "trigfront/dispersion.hpp"
#include "trigfront/errors.hpp"
#include "trigfront/evans.hpp"

namespace trigfront {

ResonanceReport check_no_resonance(const ModelParams& params, double omega_star, int k_max, const ResonanceThresholds& thr) {
  if (omega_star == 0) throw PreconditionError("check_no_resonance: omega_star must be nonzero");
  if (k_max < 2) throw PreconditionError("check_no_resonance: k_max must be at least 2");
  ResonanceReport rep;
  for (int k = 2; k <= k_max; ++k) {
    // negative harmonics are conjugates of these
    ResonanceEntry e;
    e.k = k;
    e.lambda = cplx(0, k * omega_star);
    e.dist_plus = distance_to_essential(params.chi_plus, params.c, e.lambda);
    e.dist_minus = distance_to_essential(params.chi_minus, params.c, e.lambda);
    e.transversality = plateau_determinant(params, e.lambda).transversality;
    e.ok = e.dist_plus > thr.min_distance && e.dist_minus > thr.min_distance && e.transversality > thr.min_transversality;
    if (!e.ok) {
      rep.flagged.push_back(k);
      rep.passed = false;
    }
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace trigfront
