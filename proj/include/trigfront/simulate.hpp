#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trigfront/params.hpp"
#include "trigfront/types.hpp"

namespace trigfront {

// mass·N(center, width²); for perturbations `amplitude` is the peak height instead
struct GaussianBump {
  double center = 0, amplitude = 0, width = 1;
};

enum class TriggerKind { piecewise, gaussian_sum, uniform };
enum class Scheme { imex_euler, sbdf2 };
enum class Classification { decaying, sustained, indeterminate };
// mass_free: Ricker profile (1 − z²)e^{−z²/2}, zero mass and first moment, so the neutral
// conserved mode is not excited and cannot circulate around the periodic domain
enum class PerturbationShape { gaussian, mass_free };

const char* to_string(Classification c);

// χ(x) inside f(x,u) = χu + γu³ − βu⁵
//   piecewise:    χ₊ on |x| < ℓ, χ₋ outside, midpoint at the jump (tanh of `smooth_width` if > 0)
//   gaussian_sum: χ₋ + Σ bump masses
//   uniform:      χ₊ everywhere
struct Trigger {
  TriggerKind kind = TriggerKind::piecewise;
  std::vector<GaussianBump> bumps;
  double smooth_width = 0.0;
};

struct SimConfig {
  ModelParams params;
  double domain_length = 400;  // periodic, x ∈ [−D/2, D/2)
  int n_modes = 1280;          // grid points; 1280 puts x = ±20 on nodes of the default domain
  double dt = 0.02;
  double t_final = 500;
  Trigger trigger;
  std::vector<GaussianBump> source;           // χ_src in the c·χ_src term, empty for the piecewise example
  std::optional<GaussianBump> perturbation;   // added to the initial state, peak height `amplitude`
  PerturbationShape perturbation_shape = PerturbationShape::gaussian;
  Scheme scheme = Scheme::sbdf2;
  // χ_ref in the implicit symbol −k⁴ + χ_ref k² + ick; the rest of χ is explicit.
  // plateau (max χ) keeps the explicit part where the unstable modes are small
  enum class Reference { plateau, exterior } chi_reference = Reference::plateau;
  bool dealias = true;
  int record_every = 5;
  double x_probe = 0.0;
  std::vector<double> extra_probes;  // recorded alongside, no diagnostics derived
  double blowup_cap = 1e3;
  double classify_window = 0.0;  // 0 → t_final / 10
  int save_field_every = 0;      // 0 → no field dump
  std::string field_path;        // prefix for <path>.bin and <path>.json
  double front_offset = 0;       // demo only: constant level right of all sources in the front guess

  std::vector<std::string> violations() const;
  void validate() const;  // PreconditionError listing every violation
  double dt_bound() const;
  // distance of ±ℓ from the nearest node in units of dx (piecewise trigger). Off-node jumps shift the
  // discrete threshold by O(dx) with a sign that depends on this offset; on-node jumps converge as O(dx²)
  double jump_offset() const;
};

struct Diagnostics {
  std::vector<std::pair<double, double>> probe_series;
  std::vector<std::pair<double, double>> mass_series;
  std::vector<std::vector<std::pair<double, double>>> extra_series;
  double amplitude = 0;
  double sup_amplitude = 0;  // max over x and the trailing 20% of |u − mean(u)|
  double frequency = 0;  // angular
  Classification classification = Classification::indeterminate;
  double mass_drift = 0;       // max |mean(t) − mean(0) − c·mean(χ_src)·t|
  double spectral_tail = 0;    // energy fraction in the top third of the resolved band
  int steps = 0;
};

struct SimResult {
  RVec state;
  RVec x;
  Diagnostics diag;
};

RVec grid(const SimConfig& cfg);
RVec chi_profile(const SimConfig& cfg);
RVec source_profile(const SimConfig& cfg);

SimResult run(const SimConfig& cfg, const RVec* initial = nullptr);

// (max − min)/2 over the trailing `fraction` of the series
double trailing_amplitude(const std::vector<std::pair<double, double>>& series, double fraction = 0.2);
// angular frequency of the dominant peak over the trailing `fraction`, Hann window and parabolic interpolation
double dominant_frequency(const std::vector<std::pair<double, double>>& series, double fraction = 0.5);
// slope of log of the local maxima of |u| over [t0, t1]
double envelope_growth_rate(const std::vector<std::pair<double, double>>& series, double t0, double t1);

Classification classify(const Diagnostics& diag, double window);

struct SweepRow {
  double c, amplitude, frequency;
  Classification classification;
};

enum class SweepMode { independent, continuation_up, continuation_down };

// independent runs may use a worker pool; continuation sweeps reuse the previous final state and run in order
std::vector<SweepRow> amplitude_sweep(const SimConfig& base, const RVec& c_values, int threads = 1,
                                      SweepMode mode = SweepMode::independent);

struct PowerLawFit {
  double beta = 0, prefactor = 0, r2 = 0;
  int points = 0;
};

// amplitude ∝ (c* − c)^β over rows with c < c* that were classified sustained
PowerLawFit fit_power_law(const std::vector<SweepRow>& rows, double c_star);

struct RelaxOptions {
  int max_iter = 200;
  double tol = 1e-9;
  double tau0 = 1e6;  // large: the front may be unstable, so stay close to Newton
};

// steady front of the sourced equation by pseudo-transient continuation (dense bordered Newton with
// backtracking, mean fixed); unstable fronts converge too since the pseudo-step starts large
RVec relax_front(const SimConfig& cfg, const RVec& guess, const RelaxOptions& opt = {});

struct DemoResult {
  RVec front;
  SimResult sim;
  Classification classification;
  std::string field_bin, field_header;
};

// integrates from the perturbed relaxed front; writes the space-time field if cfg.field_path is set
DemoResult gaussian_trigger_demo(const SimConfig& cfg);

// documented defaults: sources of unit mass at −110 and −40, a sink of mass −2 at 150,
// χ ≡ 1 (f = u − u³ − u⁵ with the default γ, β), perturbation at −75
SimConfig gaussian_demo_config(double c);

}  // namespace trigfront
