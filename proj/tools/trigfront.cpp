#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "trigfront/absolute_spectrum.hpp"
#include "trigfront/acceptance.hpp"
#include "trigfront/branch_point.hpp"
#include "trigfront/config.hpp"
#include "trigfront/discrete_operator.hpp"
#include "trigfront/dispersion.hpp"
#include "trigfront/errors.hpp"
#include "trigfront/evans.hpp"
#include "trigfront/hopf.hpp"
#include "trigfront/io.hpp"
#include "trigfront/simulate.hpp"

using namespace trigfront;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Session {
  std::string config_path;
  std::vector<std::string> overrides;  // section.key=value
  Config cfg;
  std::string command;
  Clock::time_point t0 = Clock::now();

  void resolve() {
    cfg = config_path.empty() ? Config{} : parse_config_file(config_path);
    apply_env_overrides(cfg);
    for (const auto& kv : overrides) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw ValidationError("--set expects section.key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
  }
  // flag value wins over file and environment, and takes part in the hash
  template <class T>
  void bind(const std::string& key, const std::optional<T>& v) {
    if (!v) return;
    std::ostringstream s;
    s.imbue(std::locale::classic());
    if constexpr (std::is_floating_point_v<T>)
      s << fmt17(*v);
    else
      s << *v;
    cfg.set(key, s.str());
  }
  std::string path(const std::string& name) const {
    fs::path p(name);
    if (p.is_absolute() || p.has_parent_path()) return name;
    return (fs::path(cfg.get("output.dir")) / p).string();
  }
  // writes text to `out` or stdout; data files get a manifest next to them
  void emit(const std::string& out, const std::string& text, std::vector<std::string> extra = {}) {
    if (out.empty()) {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << '\n';
      if (!extra.empty()) finish(extra);
      return;
    }
    std::string p = path(out);
    write_text(p, text);
    extra.insert(extra.begin(), p);
    finish(extra);
  }
  void finish(const std::vector<std::string>& outputs) {
    RunManifest m;
    m.command = command;
    m.config_hash = config_hash(cfg);
    m.tool_version = tool_version();
    m.outputs = outputs;
    m.timings["total_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
    m.write(outputs.front() + ".manifest.json");
  }
};

cplx parse_complex(const std::string& s) {
  auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ValidationError("expected RE,IM but got '" + s + "'");
  }
}

std::string join_argv(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) s += (i > 1 ? " " : "") + std::string(argv[i]);
  return s;
}

JsonObject crossing_json(const CrossingData& c) {
  JsonObject o;
  o.set("ell", c.ell).set("c_star", c.c_star).set("lambda_star", c.lambda_star).set("dRe_dc", c.dRe_dc);
  o.set("dRe_dc_implicit", c.dRe_dc_implicit).set("simple", c.simple).set("newton_iterations", c.newton_iterations);
  return o;
}

JsonObject hopf_json(const HopfResult& h) {
  JsonObject o;
  o.set("ell", h.ell).set("normalization", to_string(h.normalization)).set("theta_plus", h.theta_plus);
  o.set("theta_minus", h.theta_minus).set("mu_prime", h.mu_prime).set("dRe_dc", h.dRe_dc);
  o.set("upsilon_c", h.upsilon_c).set("upsilon_omega", h.upsilon_omega).set("direction", to_string(h.direction));
  o.set("c_star", h.c_star).set("omega_star", h.omega_star).set("lambda", h.lambda).set("fit_r2", h.fit_r2);
  o.set("sbp_mismatch", h.sbp_mismatch);
  return o;
}

SimConfig sim_config(const Config& cfg) {
  SimConfig s;
  s.params = model_params(cfg);
  s.domain_length = cfg.number("simulate.domain_length");
  s.n_modes = cfg.integer("simulate.n_modes");
  s.dt = cfg.number("simulate.dt");
  s.t_final = cfg.number("simulate.t_final");
  s.record_every = cfg.integer("simulate.record_every");
  s.x_probe = cfg.number("simulate.x_probe");
  std::string scheme = cfg.get("simulate.scheme");
  if (scheme == "sbdf2")
    s.scheme = Scheme::sbdf2;
  else if (scheme == "imex_euler")
    s.scheme = Scheme::imex_euler;
  else
    throw ValidationError("simulate.scheme must be sbdf2 or imex_euler, got '" + scheme + "'");
  s.dealias = cfg.flag("simulate.dealias");
  s.blowup_cap = cfg.number("simulate.blowup_cap");
  return s;
}

std::string series_csv(const Diagnostics& d) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < d.probe_series.size(); ++i)
    rows.push_back({d.probe_series[i].first, d.probe_series[i].second,
                    i < d.mass_series.size() ? d.mass_series[i].second : 0.0});
  return csv_string({"t", "u_probe", "mean_u"}, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trigfront: linear spectra and dynamics of triggered fronts"};
  app.require_subcommand(1);
  Session ses;
  ses.command = join_argv(argc, argv);
  app.add_option("--config", ses.config_path, "INI-style config file")->check(CLI::ExistingFile);
  app.add_option("--set", ses.overrides, "override a config key, section.key=value");
  std::string out;
  app.add_option("--out", out, "write the result here (under output.dir unless it has a directory)");

  std::optional<double> chi, speed, ell, gamma, alpha, eta;
  auto model_flags = [&](CLI::App* s, bool with_chi) {
    if (with_chi) s->add_option("--chi", chi, "plateau coefficient chi_plus");
    s->add_option("--speed", speed, "front speed c");
    s->add_option("--ell", ell, "plateau half-length");
    s->add_option("--gamma", gamma, "cubic coefficient");
    s->add_option("--eta", eta, "exponential weight");
  };

  // dispersion
  auto* disp = app.add_subcommand("dispersion", "constant-coefficient dispersion relation");
  disp->require_subcommand(1);
  auto* roots = disp->add_subcommand("roots", "the four spatial roots at a given lambda");
  std::string lambda_s = "0,0";
  model_flags(roots, true);
  roots->add_option("--lambda", lambda_s, "RE,IM")->required();
  auto* ess = disp->add_subcommand("ess-curve", "essential spectrum curve as CSV");
  std::string side_s = "plus";
  double kmin = -10, kmax = 10;
  int nk = 401;
  model_flags(ess, false);
  ess->add_option("--side", side_s)->check(CLI::IsMember({"plus", "minus"}));
  ess->add_option("--kmin", kmin);
  ess->add_option("--kmax", kmax);
  ess->add_option("--n", nk)->check(CLI::PositiveNumber);

  // branch-point
  auto* bpc = app.add_subcommand("branch-point", "pinched double root and linear spreading speed");
  double bp_alpha = 1.0;
  bpc->add_option("--alpha", bp_alpha)->check(CLI::PositiveNumber);
  auto* bp_closed = bpc->add_flag("--closed-form", "closed-form values only");
  auto* bp_newton = bpc->add_flag("--newton", "numerical search only");
  bp_closed->excludes(bp_newton);

  // abs-spectrum
  auto* absc = app.add_subcommand("abs-spectrum", "absolute spectrum curve as CSV");
  double gmax = 10, abs_step = 0.02, abs_len = 60;
  model_flags(absc, true);
  absc->add_option("--gmax", gmax, "largest real-part separation of the root pair");
  absc->add_option("--step", abs_step);
  absc->add_option("--arclength", abs_len);

  // evans
  auto* ev = app.add_subcommand("evans", "Evans functions, crossings and eigenfunctions");
  ev->require_subcommand(1);
  auto* ev_eval = ev->add_subcommand("eval", "front and back Evans functions");
  auto* ev_plat = ev->add_subcommand("plateau", "plateau matching determinant");
  for (auto* s : {ev_eval, ev_plat}) {
    model_flags(s, false);
    s->add_option("--lambda", lambda_s, "RE,IM")->required();
  }
  auto* ev_cross = ev->add_subcommand("crossing", "first Hopf crossing (c*, lambda*)");
  model_flags(ev_cross, false);
  ev_cross->add_option("--alpha", alpha, "plateau coefficient chi_plus");
  auto* ev_eig = ev->add_subcommand("eigenfunction", "p and psi on a grid as CSV");
  model_flags(ev_eig, false);
  double ef_half = 40, ef_h = 0.05;
  ev_eig->add_option("--half-length", ef_half);
  ev_eig->set_help_flag("--help");  // frees -h for the grid step
  ev_eig->add_option("--h", ef_h);

  // eigs
  auto* eg = app.add_subcommand("eigs", "finite-difference spectrum");
  model_flags(eg, false);
  std::optional<double> half, hstep;
  std::string region_s, vectors;
  eg->add_option("--half-length", half, "defaults to ell + numerics.margin");
  eg->set_help_flag("--help");
  eg->add_option("--h", hstep, "defaults to numerics.h");
  eg->add_option("--region", region_s, "RE_MIN,RE_MAX,IM_MIN,IM_MAX");
  eg->add_option("--vectors", vectors, "CSV prefix for eigenvectors in the region");

  // hopf
  auto* hp = app.add_subcommand("hopf", "first Lyapunov-type coefficient theta+");
  model_flags(hp, false);
  std::optional<std::string> norm_s;
  hp->add_option("--normalization", norm_s)->check(CLI::IsMember({"paper", "inner", "paper_AB", "inner_product"}));
  auto* hp_branch = hp->add_subcommand("branch", "predicted branch c(r), omega(r) as CSV");
  double rmax = 0.2;
  int nr = 21;
  hp_branch->add_option("--rmax", rmax)->check(CLI::PositiveNumber);
  hp_branch->add_option("--n", nr)->check(CLI::PositiveNumber);

  // simulate
  auto* sim = app.add_subcommand("simulate", "pseudo-spectral simulation in the co-moving frame");
  model_flags(sim, false);
  std::optional<double> tfinal, probe, dt;
  int save_every = 0;
  std::string field;
  std::optional<double> pert_amp;
  double pert_x = -10;
  sim->add_option("--tfinal", tfinal);
  sim->add_option("--dt", dt);
  sim->add_option("--probe", probe, "probe position");
  sim->add_option("--save-field", save_every, "store every N-th step")->check(CLI::NonNegativeNumber);
  sim->add_option("--field", field, "prefix for <prefix>.bin and <prefix>.json (default: field)");
  sim->add_option("--perturb", pert_amp, "amplitude of a zero-mass seed perturbation");
  sim->add_option("--perturb-at", pert_x);
  auto* sweep = sim->add_subcommand("sweep", "amplitude and frequency over a range of speeds");
  double cmin = 0, cmax = 0;
  int nc = 5, threads = 0;
  std::string sweep_mode = "independent";
  sweep->add_option("--cmin", cmin)->required();
  sweep->add_option("--cmax", cmax)->required();
  sweep->add_option("--n", nc)->check(CLI::PositiveNumber);
  sweep->add_option("--threads", threads, "worker pool size (default simulate.threads)");
  sweep->add_option("--mode", sweep_mode)->check(CLI::IsMember({"independent", "up", "down"}));
  auto* demo = sim->add_subcommand("demo", "Gaussian-trigger front: relax, perturb, integrate");

  // verify
  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  bool full = false;
  std::vector<std::string> only;
  std::string report;
  ver->add_flag("--full", full, "include the simulation criteria");
  ver->add_option("--only", only, "criterion ids, e.g. A3");
  ver->add_option("--json", report, "write the report as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    ses.resolve();
    ses.bind("model.chi_plus", chi);
    ses.bind("model.chi_plus", alpha);
    ses.bind("model.c", speed);
    ses.bind("model.ell", ell);
    ses.bind("model.gamma", gamma);
    ses.bind("model.eta", eta);
    ses.bind("simulate.t_final", tfinal);
    ses.bind("simulate.x_probe", probe);
    ses.bind("simulate.dt", dt);
    ses.bind("numerics.h", hstep);
    if (norm_s) ses.cfg.set("hopf.normalization", norm_s->rfind("paper", 0) == 0 ? "paper_AB" : "inner_product");
    ModelParams p = model_params(ses.cfg);

    if (roots->parsed()) {
      auto r = spatial_roots(p.chi_plus, p.c, parse_complex(lambda_s));
      std::vector<JsonObject> nus;
      JsonObject o;
      o.set("chi", r.chi).set("speed", r.c).set("lambda", r.lambda);
      std::vector<double> re, im;
      for (auto z : r.nu) re.push_back(z.real()), im.push_back(z.imag());
      o.set("re_nu", re).set("im_nu", im).set("morse_index", r.morse_index).set("max_residual", r.max_residual);
      ses.emit(out, o.dump());
    } else if (ess->parsed()) {
      Side side = side_s == "plus" ? Side::plus : Side::minus;
      RVec k(nk);
      for (int i = 0; i < nk; ++i) k[i] = nk == 1 ? kmin : kmin + (kmax - kmin) * i / (nk - 1);
      auto curve = essential_curve(side, p, p.eta, k);
      std::vector<std::vector<double>> rows;
      for (const auto& s : curve.samples) rows.push_back({s.k, s.lambda.real(), s.lambda.imag()});
      ses.emit(out, csv_string({"k", "re_lambda", "im_lambda"}, rows));
    } else if (bpc->parsed()) {
      LinearSpreading ls;
      BranchPoint bp;
      if (*bp_newton) {
        ls = find_spreading_speed(bp_alpha);
        bp = find_double_root(bp_alpha, ls.c_lin, pinched_candidate_seed(bp_alpha, ls.c_lin));
      } else {
        ls = closed_form_spreading(bp_alpha);
        bp.lambda_br = ls.lambda_lin;
        bp.nu_br = ls.nu_lin();
        bp.c = ls.c_lin;
        bp.chi = bp_alpha;
        bp.residual_d = std::abs(eval_dispersion(bp_alpha, ls.c_lin, ls.lambda_lin, ls.nu_lin()));
        bp.residual_dnu = std::abs(dispersion_dnu(bp_alpha, ls.c_lin, ls.nu_lin()));
        bp.pinched = pinching_check(bp);
      }
      JsonObject res;
      res.set("d", bp.residual_d).set("dnu", bp.residual_dnu);
      JsonObject o;
      o.set("alpha", bp_alpha).set("method", *bp_newton ? "newton" : "closed_form").set("c_lin", ls.c_lin);
      o.set("lambda_lin", ls.lambda_lin).set("nu_lin", ls.nu_lin()).set("residuals", res).set("pinched", bp.pinched);
      ses.emit(out, o.dump());
    } else if (absc->parsed()) {
      auto bp = find_double_root(p.chi_plus, p.c, pinched_candidate_seed(p.chi_plus, p.c));
      AbsTraceOptions opt;
      opt.gamma_max = gmax;
      auto curve = trace_absolute(bp, abs_len, abs_step, opt);
      std::vector<std::vector<double>> rows;
      for (const auto& q : curve.points)
        rows.push_back({q.gamma_sep, q.lambda.real(), q.lambda.imag(), q.nu_pair.first.real(), q.nu_pair.first.imag()});
      ses.emit(out, csv_string({"gamma", "re_lambda", "im_lambda", "re_nu", "im_nu"}, rows));
      std::string warn;
      if (!genericity_check(curve, 1e-6, &warn)) std::cerr << "warning: " << warn << "\n";
      if (!curve.stop_reason.empty()) std::cerr << "stopped: " << curve.stop_reason << "\n";
    } else if (ev_eval->parsed() || ev_plat->parsed()) {
      cplx lam = parse_complex(lambda_s);
      auto val = [](const EvansValue& e) {
        JsonObject o;
        o.set("value", e.value).set("log_scale", e.log_scale).set("on_absolute", e.on_absolute);
        return o;
      };
      JsonObject o;
      o.set("lambda", lam).set("speed", p.c);
      if (ev_eval->parsed()) {
        o.set("front", val(evans_front(p, lam))).set("back", val(evans_back(p, lam)));
      } else {
        auto e = plateau_determinant(p, lam);
        o.set("ell", p.ell).set("plateau", val(e)).set("transversality", e.transversality).set("fallback", e.fallback);
      }
      ses.emit(out, o.dump());
    } else if (ev_cross->parsed()) {
      ses.emit(out, crossing_json(find_hopf_crossing(p)).dump());
    } else if (ev_eig->parsed()) {
      auto cr = find_hopf_crossing(p);
      int n = static_cast<int>(std::lround(2 * ef_half / ef_h)) + 1;
      RVec g(n);
      for (int i = 0; i < n; ++i) g[i] = -ef_half + ef_h * i;
      auto prof = eigenfunction_profiles(cr, p, g);
      std::vector<std::vector<double>> rows;
      for (int i = 0; i < n; ++i)
        rows.push_back({g[i], prof.p[i].real(), prof.p[i].imag(), prof.psi[i].real(), prof.psi[i].imag()});
      ses.emit(out.empty() ? "profile.csv" : out, csv_string({"x", "re_p", "im_p", "re_psi", "im_psi"}, rows));
    } else if (eg->parsed()) {
      double h = ses.cfg.number("numerics.h");
      double L = half ? *half : p.ell + ses.cfg.number("numerics.margin");
      L = std::ceil(L / h - 1e-9) * h;
      auto op = build_operator(p, L, h);
      SpectrumOptions so;
      so.left_vectors = false;
      if (!region_s.empty()) {
        double b[4];
        if (std::sscanf(region_s.c_str(), "%lf,%lf,%lf,%lf", b, b + 1, b + 2, b + 3) != 4)
          throw ValidationError("--region expects RE_MIN,RE_MAX,IM_MIN,IM_MAX");
        so.region = ComplexBox{b[0], b[1], b[2], b[3]};
      }
      auto pairs = spectrum(op, so);
      std::vector<std::vector<double>> rows;
      for (const auto& e : pairs) rows.push_back({e.lambda.real(), e.lambda.imag()});
      std::vector<std::string> extra;
      if (!vectors.empty()) {
        for (std::size_t k = 0; k < pairs.size(); ++k) {
          std::vector<std::vector<double>> vr;
          for (int i = 0; i < op.n; ++i) vr.push_back({op.x[i], pairs[k].v[i].real(), pairs[k].v[i].imag()});
          std::string f = ses.path(vectors + "_" + std::to_string(k) + ".csv");
          write_text(f, csv_string({"x", "re_v", "im_v"}, vr));
          extra.push_back(f);
        }
        if (out.empty()) out = "eigs.csv";
      }
      ses.emit(out, csv_string({"re_lambda", "im_lambda"}, rows), extra);
    } else if (hp->parsed()) {
      HopfPipelineOptions o;
      o.h = ses.cfg.number("numerics.h");
      o.margin = ses.cfg.number("numerics.margin");
      o.eta = p.eta;
      Normalization nm = ses.cfg.get("hopf.normalization") == "paper_AB" ? Normalization::paper_AB
                                                                          : Normalization::inner_product;
      auto h = compute_hopf(p, nm, o);
      if (hp_branch->parsed()) {
        RVec r(nr);
        for (int i = 0; i < nr; ++i) r[i] = nr == 1 ? rmax : rmax * i / (nr - 1);
        std::vector<std::vector<double>> rows;
        for (const auto& b : branch_prediction(h, r)) rows.push_back({b.r, b.c, b.omega});
        ses.emit(out, csv_string({"r", "c", "omega"}, rows));
      } else {
        ses.emit(out, hopf_json(h).dump());
      }
    } else if (sweep->parsed()) {
      SimConfig s = sim_config(ses.cfg);
      s.perturbation = GaussianBump{pert_x, pert_amp.value_or(1e-3), 2};
      s.perturbation_shape = PerturbationShape::mass_free;
      RVec cs(nc);
      for (int i = 0; i < nc; ++i) cs[i] = nc == 1 ? cmin : cmin + (cmax - cmin) * i / (nc - 1);
      int th = threads > 0 ? threads : ses.cfg.integer("simulate.threads");
      SweepMode m = sweep_mode == "up"     ? SweepMode::continuation_up
                    : sweep_mode == "down" ? SweepMode::continuation_down
                                           : SweepMode::independent;
      auto rows = amplitude_sweep(s, cs, th, m);
      std::ostringstream csv;
      csv << "c,amplitude,frequency,classification\n";
      for (const auto& r : rows)
        csv << fmt17(r.c) << ',' << fmt17(r.amplitude) << ',' << fmt17(r.frequency) << ','
            << to_string(r.classification) << '\n';
      ses.emit(out, csv.str());
    } else if (demo->parsed()) {
      SimConfig s = gaussian_demo_config(p.c);
      if (tfinal) s.t_final = *tfinal;
      if (dt) s.dt = *dt;
      if (probe) s.x_probe = *probe;
      s.save_field_every = save_every;
      if (save_every > 0) s.field_path = ses.path(field.empty() ? "demo_field" : field);
      auto d = gaussian_trigger_demo(s);
      std::vector<std::string> extra;
      if (!d.field_bin.empty()) extra = {d.field_bin, d.field_header};
      JsonObject o;
      o.set("speed", p.c).set("classification", to_string(d.classification));
      o.set("amplitude", d.sim.diag.amplitude).set("frequency", d.sim.diag.frequency);
      o.set("mass_drift", d.sim.diag.mass_drift).set("steps", d.sim.diag.steps);
      if (out.empty() && !extra.empty()) out = "demo.json";
      ses.emit(out, o.dump(), extra);
    } else if (sim->parsed()) {
      SimConfig s = sim_config(ses.cfg);
      if (pert_amp) {
        s.perturbation = GaussianBump{pert_x, *pert_amp, 2};
        s.perturbation_shape = PerturbationShape::mass_free;
      }
      s.save_field_every = save_every;
      if (save_every > 0) s.field_path = ses.path(field.empty() ? "field" : field);
      auto r = run(s);
      std::vector<std::string> extra;
      if (save_every > 0) extra = {s.field_path + ".bin", s.field_path + ".json"};
      JsonObject o;
      o.set("ell", p.ell).set("speed", p.c).set("gamma", p.gamma).set("classification", to_string(r.diag.classification));
      o.set("amplitude", r.diag.amplitude).set("frequency", r.diag.frequency).set("mass_drift", r.diag.mass_drift);
      o.set("spectral_tail", r.diag.spectral_tail).set("steps", r.diag.steps).set("x_probe", s.x_probe);
      if (!out.empty() || !extra.empty()) {
        std::string series = ses.path((out.empty() ? std::string("simulate") : out) + ".series.csv");
        write_text(series, series_csv(r.diag));
        extra.insert(extra.begin(), series);
        if (out.empty()) out = "simulate.json";
      }
      ses.emit(out, o.dump(), extra);
    } else if (ver->parsed()) {
      std::vector<CriterionResult> results;
      if (!only.empty())
        for (const auto& id : only) results.push_back(run_criterion(id));
      else
        results = verify(full ? VerifyLevel::full : VerifyLevel::fast);
      bool ok = true;
      for (const auto& r : results) {
        std::cout << report_line(r) << "\n";
        ok = ok && r.passed;
      }
      if (!report.empty()) {
        std::string path = ses.path(report);
        write_text(path, report_json(results).dump());
        ses.finish({path});
      }
      return ok ? 0 : 1;
    }
  } catch (const ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
