#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "trigfront/errors.hpp"
#include "trigfront/evans.hpp"
#include "trigfront/simulate.hpp"

using namespace trigfront;

namespace {
constexpr double kCStar20 = 1.5638234676462768;  // first crossing at ℓ = 20

SimConfig base(double c) {
  SimConfig s;
  s.params.ell = 20;
  s.params.c = c;
  return s;
}

double max_diff(const RVec& a, const RVec& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<std::pair<double, double>> series(double rate, double omega, double t1, double dt = 0.1) {
  std::vector<std::pair<double, double>> s;
  for (double t = 0; t <= t1 + 1e-9; t += dt) s.emplace_back(t, std::exp(rate * t) * std::sin(omega * t));
  return s;
}
}  // namespace

TEST_CASE("zero data stays zero") {
  SimConfig s = base(1.5);
  s.t_final = 50;
  auto r = run(s);
  for (double v : r.state) CHECK(v == 0.0);
  CHECK(r.diag.classification == Classification::decaying);
}

TEST_CASE("mean follows the source exactly") {
  SimConfig s = base(1.4);
  s.t_final = 40;
  s.source = {GaussianBump{30, 0.5, 3}};
  s.perturbation = GaussianBump{0, 0.1, 2};
  auto r = run(s);
  CHECK(r.diag.mass_drift < 1e-12);
  double mean = 0;
  for (double v : r.state) mean += v;
  mean /= r.state.size();
  double mean0 = 0.1 * std::sqrt(2 * std::numbers::pi) * 2 / s.domain_length;
  CHECK(mean == doctest::Approx(mean0 + s.params.c * 0.5 / s.domain_length * s.t_final).epsilon(1e-10));
}

TEST_CASE("SBDF2 is second order in time, IMEX Euler first order") {
  for (auto scheme : {Scheme::sbdf2, Scheme::imex_euler}) {
    std::vector<RVec> out;
    for (double dt : {0.04, 0.02, 0.01}) {
      SimConfig s = base(1.5);
      s.scheme = scheme;
      s.dt = dt;
      s.t_final = 8;
      s.record_every = 1;
      s.perturbation = GaussianBump{-5, 0.6, 3};
      out.push_back(run(s).state);
    }
    double order = std::log2(max_diff(out[0], out[1]) / max_diff(out[1], out[2]));
    CHECK(order == doctest::Approx(scheme == Scheme::sbdf2 ? 2.0 : 1.0).epsilon(0.15));
  }
}

TEST_CASE("early growth rate matches the eigenvalue below onset") {
  double c = kCStar20 - 0.05;
  ModelParams p;
  p.ell = 20;
  p.c = c;
  cplx lam = track_eigenvalue(p, {0.013, 1.14});
  SimConfig s = base(c);
  s.t_final = 800;
  s.record_every = 2;
  s.x_probe = -17;
  s.perturbation = GaussianBump{-10, 1e-8, 2};
  s.perturbation_shape = PerturbationShape::mass_free;
  auto r = run(s);
  double rate = envelope_growth_rate(r.diag.probe_series, 300, 800);
  CHECK(rate == doctest::Approx(lam.real()).epsilon(0.05));
  CHECK(r.diag.mass_drift < 1e-14);
}

TEST_CASE("piecewise trigger profile and jump alignment") {
  SimConfig s = base(1.5);
  auto chi = chi_profile(s);
  auto x = grid(s);
  for (std::size_t j = 0; j < x.size(); ++j) {
    double ax = std::abs(x[j]);
    if (ax < 20 - 1e-9) CHECK(chi[j] == 1.0);
    else if (ax > 20 + 1e-9) CHECK(chi[j] == -1.0);
    else CHECK(chi[j] == 0.0);
  }
  CHECK(s.jump_offset() < 1e-9);
  s.n_modes = 1024;
  CHECK(s.jump_offset() > 0.1);
}

TEST_CASE("invalid configurations list every violation") {
  SimConfig s = base(1.5);
  s.dt = 5;
  s.n_modes = 15;
  s.record_every = 0;
  CHECK(s.violations().size() >= 3);
  CHECK_THROWS_AS(s.validate(), PreconditionError);
  CHECK_THROWS_AS(run(s), PreconditionError);
}

TEST_CASE("blow-up is reported") {
  SimConfig s = base(1.5);
  s.params.gamma = 1;
  s.params.beta = 1e-6;  // quintic saturation only near |u| ~ 1e3
  s.perturbation = GaussianBump{0, 3, 3};
  s.blowup_cap = 50;
  s.t_final = 200;
  CHECK_THROWS_AS(run(s), BlowupDetected);
}

TEST_CASE("diagnostics of synthetic series") {
  auto s = series(0, 1.3, 400);
  CHECK(dominant_frequency(s) == doctest::Approx(1.3).epsilon(1e-3));
  CHECK(trailing_amplitude(s) == doctest::Approx(1.0).epsilon(1e-3));
  Diagnostics d;
  d.probe_series = s;
  CHECK(classify(d, 40) == Classification::sustained);
  d.probe_series = series(-0.05, 1.3, 400);
  CHECK(classify(d, 40) == Classification::decaying);
  d.probe_series = series(0.01, 1.3, 400);
  CHECK(classify(d, 40) == Classification::indeterminate);
  CHECK(envelope_growth_rate(series(0.02, 1.3, 400), 50, 350) == doctest::Approx(0.02).epsilon(1e-3));
}

TEST_CASE("power-law fit") {
  std::vector<SweepRow> rows;
  for (double dc : {0.04, 0.02, 0.01, 0.005})
    rows.push_back({2.0 - dc, 3 * std::pow(dc, 0.5), 1, Classification::sustained});
  rows.push_back({2.01, 0.5, 1, Classification::sustained});   // above c*: ignored
  rows.push_back({1.9, 0.0, 1, Classification::decaying});     // not sustained: ignored
  auto f = fit_power_law(rows, 2.0);
  CHECK(f.points == 4);
  CHECK(f.beta == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("threaded sweep equals the serial one") {
  SimConfig s = base(1.5);
  s.t_final = 60;
  s.n_modes = 640;
  s.perturbation = GaussianBump{-10, 1e-2, 2};
  RVec cs = {1.45, 1.5, 1.55};
  auto a = amplitude_sweep(s, cs, 1), b = amplitude_sweep(s, cs, 3);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    CHECK(a[i].c == cs[i]);
    CHECK(a[i].amplitude == b[i].amplitude);
    CHECK(a[i].frequency == b[i].frequency);
  }
  CHECK_THROWS_AS(amplitude_sweep(s, {1.5, 1.4}), PreconditionError);
}

TEST_CASE("field dump has the documented header") {
  auto dir = std::filesystem::temp_directory_path() / "trigfront_field_test";
  std::filesystem::create_directories(dir);
  SimConfig s = base(1.5);
  s.t_final = 2;
  s.n_modes = 256;
  s.dt = 0.01;
  s.save_field_every = 50;
  s.field_path = (dir / "f").string();
  s.perturbation = GaussianBump{0, 0.1, 2};
  run(s);
  std::ifstream hin(s.field_path + ".json");
  auto j = nlohmann::json::parse(hin);
  CHECK(j["nx"] == 256);
  CHECK(j["nt"] == 5);
  CHECK(j["dx"].get<double>() == doctest::Approx(400.0 / 256));
  CHECK(j["dt"].get<double>() == doctest::Approx(0.5));
  CHECK(std::filesystem::file_size(s.field_path + ".bin") == 256u * 5u * sizeof(double));
}

TEST_CASE("Gaussian trigger demo: fast front decays, slow front oscillates") {
  auto fast = gaussian_demo_config(1.9);
  fast.n_modes = 512;
  auto a = gaussian_trigger_demo(fast);
  CHECK(a.classification == Classification::decaying);
  auto slow = gaussian_demo_config(1.2);
  slow.n_modes = 512;
  auto b = gaussian_trigger_demo(slow);
  CHECK(b.classification == Classification::sustained);
  CHECK(b.sim.diag.frequency > 0.5);
  CHECK(b.sim.diag.mass_drift < 1e-12);
}
