#include "trigfront/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "trigfront/absolute_spectrum.hpp"
#include "trigfront/discrete_operator.hpp"
#include "trigfront/dispersion.hpp"
#include "trigfront/errors.hpp"
#include "trigfront/evans.hpp"
#include "trigfront/hopf.hpp"
#include "trigfront/simulate.hpp"

namespace trigfront {

namespace {

std::string g6(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

std::string c6(cplx z) { return g6(z.real()) + (z.imag() < 0 ? "" : "+") + g6(z.imag()) + "i"; }

template <class F>
CriterionResult timed(const char* id, const char* title, F&& body) {
  CriterionResult r;
  r.id = id;
  r.title = title;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.measured = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.details.set("seconds", r.seconds);
  return r;
}

ModelParams at_ell(double ell) {
  ModelParams p;
  p.ell = ell;
  return p;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

// A4 box edges: every eigenvalue satisfies Re λ ≤ max χ² / 4 = 1/4 (numerical range), so Re ≤ 2 loses nothing
constexpr double kReMax = 2.0;

// A5 regression bound: the recorded minimum (1.6012, front) rounded down
constexpr double kA5Bound = 1.5;

}  // namespace

CriterionResult criterion_a1(const ClosedFormFn& closed_form) {
  return timed("A1", "closed forms vs double-root Newton and spreading-speed search", [&](CriterionResult& r) {
    double worst = 0, worst_res = 0;
    std::vector<JsonObject> rows;
    for (double alpha : {0.5, 1.0, 2.0}) {
      LinearSpreading cf = closed_form(alpha);
      LinearSpreading num = find_spreading_speed(alpha);
      BranchPoint bp = find_double_root(alpha, cf.c_lin, pinched_candidate_seed(alpha, cf.c_lin));
      double e = std::max({std::abs(num.c_lin - cf.c_lin) / cf.c_lin, rel(num.lambda_lin, cf.lambda_lin),
                           rel(num.nu_lin(), cf.nu_lin()), rel(bp.lambda_br, cf.lambda_lin), rel(bp.nu_br, cf.nu_lin())});
      double res = std::max(std::abs(eval_dispersion(alpha, cf.c_lin, cf.lambda_lin, cf.nu_lin())),
                            std::abs(dispersion_dnu(alpha, cf.c_lin, cf.nu_lin())));
      worst = std::max(worst, e);
      worst_res = std::max(worst_res, res);
      JsonObject o;
      o.set("alpha", alpha).set("c_lin", cf.c_lin).set("c_search", num.c_lin).set("lambda_lin", cf.lambda_lin);
      o.set("lambda_newton", bp.lambda_br).set("max_rel_error", e).set("residual", res);
      rows.push_back(o);
    }
    r.details.set("cases", rows);
    r.passed = worst < 1e-8 && worst_res < 1e-10;
    r.measured = "max rel err " + g6(worst) + ", max residual " + g6(worst_res);
    r.expected = "rel err < 1e-8, residuals < 1e-10";
  });
}

CriterionResult criterion_a2() {
  return timed("A2", "crossing vs expansion, O(l^-3) remainder", [](CriterionResult& r) {
    auto lin = closed_form_spreading(1.0);
    std::vector<double> el, ec;
    std::vector<JsonObject> rows;
    for (double ell : {10.0, 20.0, 40.0}) {
      auto cr = find_hopf_crossing(at_ell(ell));
      auto ex = expansion_crossing(ell, 1.0);
      el.push_back(std::abs(cr.lambda_star - (lin.lambda_lin + ex.lambda_hat)));
      ec.push_back(std::abs(cr.c_star - (lin.c_lin + ex.c_hat)));
      JsonObject o;
      o.set("ell", ell).set("c_star", cr.c_star).set("lambda_star", cr.lambda_star);
      o.set("err_lambda", el.back()).set("err_c", ec.back());
      rows.push_back(o);
    }
    double ol[2], oc[2];
    for (int i = 0; i < 2; ++i) ol[i] = std::log2(el[i] / el[i + 1]), oc[i] = std::log2(ec[i] / ec[i + 1]);
    r.details.set("cases", rows);
    r.details.set("order_lambda", std::vector<double>{ol[0], ol[1]}).set("order_c", std::vector<double>{oc[0], oc[1]});
    auto in = [](double o) { return o >= 2.5 && o <= 3.5; };
    r.passed = in(ol[0]) && in(ol[1]) && in(oc[0]) && in(oc[1]) && el[2] < el[1] && el[1] < el[0];
    r.measured = "orders lambda " + g6(ol[0]) + ", " + g6(ol[1]) + "; c " + g6(oc[0]) + ", " + g6(oc[1]);
    r.expected = "all orders in [2.5, 3.5]";
  });
}

CriterionResult criterion_a3() {
  return timed("A3", "finite-difference eigenvalue vs matching determinant at l = 15", [](CriterionResult& r) {
    ModelParams p = at_ell(15);
    auto cr = find_hopf_crossing(p);
    p.c = cr.c_star;
    std::vector<cplx> lam;
    std::vector<double> hs = {0.2, 0.1, 0.05, 0.025}, resid;
    for (double h : hs) {
      LeadingOptions o;
      o.h = h;
      o.margin = 30;
      auto pair = leading_pair(p, cr.lambda_star, o);
      lam.push_back(pair.lambda);
      resid.push_back(pair.residual);
    }
    double o1 = std::log2(std::abs(lam[0] - lam[1]) / std::abs(lam[1] - lam[2]));
    double o2 = std::log2(std::abs(lam[1] - lam[2]) / std::abs(lam[2] - lam[3]));
    cplx rich = lam[3] + (lam[3] - lam[2]) / 15.0;
    double gap = std::abs(rich - cr.lambda_star);
    std::vector<double> re, im;
    for (auto z : lam) re.push_back(z.real()), im.push_back(z.imag());
    r.details.set("h", hs).set("lambda_re", re).set("lambda_im", im).set("residuals", resid);
    r.details.set("orders", std::vector<double>{o1, o2}).set("richardson", rich).set("determinant_root", cr.lambda_star);
    r.details.set("gap", gap);
    r.passed = o2 >= 3.5 && o2 <= 4.5 && gap < 1e-4;
    r.measured = "order " + g6(o2) + " (coarser pair " + g6(o1) + "), |Richardson - root| " + g6(gap);
    r.expected = "order in [3.5, 4.5], gap < 1e-4";
  });
}

CriterionResult criterion_a4() {
  return timed("A4", "argument-principle counts around the first crossing", [](CriterionResult& r) {
    ModelParams p = at_ell(20);
    auto cr = find_hopf_crossing(p);
    p.c = cr.c_star;
    int n1 = count_eigs_in_box(p, {-0.02, kReMax, -3, 3});
    p.c = cr.c_star + 0.1;
    int n2 = count_eigs_in_box(p, {0.0, kReMax, -10, 10});
    r.details.set("c_star", cr.c_star).set("count_at_c_star", n1).set("count_above", n2);
    r.passed = n1 == 2 && n2 == 0;
    r.measured = "count " + std::to_string(n1) + " at c*, " + std::to_string(n2) + " at c*+0.1";
    r.expected = "2 and 0";
  });
}

CriterionResult criterion_a5() {
  return timed("A5", "front/back Evans functions bounded away from zero", [](CriterionResult& r) {
    ModelParams p;  // c = c_lin
    auto bp = find_double_root(p.chi_plus, p.c, pinched_candidate_seed(p.chi_plus, p.c));
    auto curve = trace_absolute(bp, 10.0, 0.02);
    std::vector<cplx> poly;
    for (const auto& q : curve.points) poly.push_back(q.lambda);
    // distance to the traced polyline and its mirror image
    auto dist_abs = [&](cplx z) {
      double d = INFINITY;
      for (cplx w : {z, std::conj(z)})
        for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
          cplx a = poly[i], b = poly[i + 1];
          double n = std::norm(b - a);
          double t = n > 0 ? std::clamp(std::real((w - a) * std::conj(b - a)) / n, 0.0, 1.0) : 0.0;
          d = std::min(d, std::abs(w - (a + t * (b - a))));
        }
      return d;
    };
    double min_f = INFINITY, min_b = INFINITY;
    cplx at_f, at_b;
    int used = 0, excluded = 0;
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 40; ++j) {
        cplx z(-0.5 + 2.5 * i / 39, 3.0 * j / 39);
        if (std::abs(z) < 0.05 || dist_abs(z) < 0.05) {
          ++excluded;
          continue;
        }
        ++used;
        auto f = evans_front(p, z), b = evans_back(p, z);
        double mf = std::abs(f.value) * std::exp(f.log_scale), mb = std::abs(b.value) * std::exp(b.log_scale);
        if (mf < min_f) min_f = mf, at_f = z;
        if (mb < min_b) min_b = mb, at_b = z;
      }
    r.details.set("points", used).set("excluded", excluded).set("min_front", min_f).set("argmin_front", at_f);
    r.details.set("min_back", min_b).set("argmin_back", at_b).set("regression_bound", kA5Bound);
    double m = std::min(min_f, min_b);
    r.passed = std::isfinite(m) && m > 0 && m >= kA5Bound;
    r.measured = "min |D_f| " + g6(min_f) + " at " + c6(at_f) + ", min |D_b| " + g6(min_b) + " at " + c6(at_b);
    r.expected = "> 0 and >= regression bound " + g6(kA5Bound);
  });
}

CriterionResult criterion_a6() {
  return timed("A6", "branching sign and paper_AB size of theta+", [](CriterionResult& r) {
    bool signs = true;
    std::vector<JsonObject> rows;
    for (double g : {1.0, -1.0, 0.3, -0.3}) {
      ModelParams p = at_ell(20);
      p.gamma = g;
      auto h = compute_hopf(p, Normalization::inner_product);
      bool ok = (h.theta_plus.real() > 0) == (g < 0);
      signs = signs && ok;
      JsonObject o;
      o.set("gamma", g).set("theta_plus", h.theta_plus).set("direction", to_string(h.direction)).set("sign_ok", ok);
      rows.push_back(o);
    }
    r.details.set("sign_cases", rows);

    const double lead = leading_order_theta(1.0, 1.0).real();
    double gap[2] = {NAN, NAN}, val[2] = {NAN, NAN}, r2[2] = {NAN, NAN};
    bool fit_ok = true;
    std::string fit_msg;
    for (int i = 0; i < 2; ++i) {
      ModelParams p = at_ell(i == 0 ? 20 : 40);
      p.gamma = 1;
      HopfPipelineOptions o;
      try {
        compute_hopf(p, Normalization::paper_AB, o);
      } catch (const NormalizationFitFailure& e) {
        fit_ok = false;
        fit_msg += std::string(i ? " l=40: " : " l=20: ") + e.what();
      }
      // the value is still reported when the fit gate trips
      o.min_fit_r2 = 0;
      auto h = compute_hopf(p, Normalization::paper_AB, o);
      val[i] = h.theta_plus.real();
      r2[i] = h.fit_r2;
      gap[i] = std::abs(val[i] - lead) / std::abs(lead);
    }
    r.details.set("leading_value", lead).set("re_theta_over_gamma", std::vector<double>{val[0], val[1]});
    r.details.set("fit_r2", std::vector<double>{r2[0], r2[1]}).set("relative_gap", std::vector<double>{gap[0], gap[1]});
    r.details.set("fit_gate", fit_ok ? std::string("passed") : "NormalizationFitFailure:" + fit_msg);
    bool size_ok = fit_ok && gap[0] <= 0.3 && gap[1] < gap[0];
    r.details.set("sign_part", signs).set("size_part", size_ok);
    r.passed = signs && size_ok;
    r.measured = std::string("signs ") + (signs ? "ok" : "WRONG") + "; paper_AB Re theta/gamma " + g6(val[0]) +
                 " (l=20, R2 " + g6(r2[0]) + ", gap " + g6(100 * gap[0]) + "%), " + g6(val[1]) + " (l=40, gap " +
                 g6(100 * gap[1]) + "%)" + (fit_ok ? "" : ", plateau fit gate tripped");
    r.expected = "sign(Re theta+) = -sign(gamma); within 30% of " + g6(lead) + " with the gap shrinking l=20 -> 40";
  });
}

CriterionResult criterion_a7() {
  return timed("A7", "conservation and convective/absolute classification", [](CriterionResult& r) {
    ModelParams p = at_ell(20);
    auto cr = find_hopf_crossing(p);

    SimConfig s;
    s.params = p;
    s.params.c = cr.c_star - 0.05;
    s.t_final = 2000;
    s.perturbation = GaussianBump{-10, 1e-3, 2};
    auto below = run(s);
    ModelParams q = s.params;
    double omega = std::abs(track_eigenvalue(q, cr.lambda_star).imag());
    double ferr = std::abs(below.diag.frequency - omega) / omega;

    SimConfig a = s;
    a.params.c = cr.c_star + 0.1;
    a.perturbation_shape = PerturbationShape::mass_free;
    auto above = run(a);
    double peak = 0, tail = 0;
    const double t_tail = 0.8 * a.t_final;
    for (const auto& [t, v] : above.diag.probe_series) {
      peak = std::max(peak, std::abs(v));
      if (t >= t_tail) tail = std::max(tail, std::abs(v));
    }
    double decay = peak / tail;

    bool pa = below.diag.mass_drift < 1e-12 && above.diag.mass_drift < 1e-12;
    bool pb = above.diag.classification == Classification::decaying && decay >= 100;
    bool pc = below.diag.classification == Classification::sustained && ferr < 0.1;
    r.details.set("mass_drift", std::max(below.diag.mass_drift, above.diag.mass_drift));
    r.details.set("above_class", to_string(above.diag.classification)).set("above_decay_factor", decay);
    r.details.set("below_class", to_string(below.diag.classification)).set("below_frequency", below.diag.frequency);
    r.details.set("determinant_frequency", omega).set("frequency_rel_error", ferr);
    r.details.set("part_a", pa).set("part_b", pb).set("part_c", pc);
    r.passed = pa && pb && pc;
    r.measured = "drift " + g6(std::max(below.diag.mass_drift, above.diag.mass_drift)) + "; c*+0.1 " +
                 to_string(above.diag.classification) + " decay x" + g6(decay) + "; c*-0.05 " +
                 to_string(below.diag.classification) + " freq " + g6(below.diag.frequency) + " vs " + g6(omega) +
                 " (" + g6(100 * ferr) + "%)";
    r.expected = "drift < 1e-12; decaying with >= 100x; sustained with freq within 10%";
  });
}

CriterionResult criterion_a8() {
  return timed("A8", "supercritical amplitude law", [](CriterionResult& r) {
    ModelParams p = at_ell(20);
    p.gamma = -1;
    auto cr = find_hopf_crossing(p);
    // measure where the critical mode peaks; far from it the O(r³) shape change dominates the probe
    ModelParams q = p;
    q.c = cr.c_star;
    auto pair = leading_pair(q, cr.lambda_star);
    double xr = 0;
    {
      LeadingOptions lo;
      double L = std::ceil((q.ell + lo.margin) / lo.h - 1e-9) * lo.h;
      auto op = build_operator(q, L, lo.h);
      double best = 0;
      for (int i = 0; i < op.n; ++i)
        if (std::abs(pair.v[i]) > best) best = std::abs(pair.v[i]), xr = op.x[i];
    }
    SimConfig s;
    s.params = p;
    s.t_final = 5000;
    // jumps on nodes and dx = 0.156: the discrete threshold sits ~3e-5 from c*, small next to c* − c
    s.n_modes = 2560;
    s.record_every = 10;
    s.perturbation = GaussianBump{0, 1e-2, 2};
    s.perturbation_shape = PerturbationShape::mass_free;
    s.x_probe = xr;
    s.extra_probes = {0.0};
    // the sup norm of the pattern is the primary amplitude; single probes are reported alongside since the
    // O(r³) change of shape along the branch tilts their fitted exponent depending on where they sit
    std::vector<SweepRow> rows, rows_peak, rows0;
    bool all_sustained = true;
    for (double dc : {0.04, 0.03, 0.02, 0.015, 0.01, 0.0075, 0.005}) {
      s.params.c = cr.c_star - dc;
      auto res = run(s);
      auto cls = res.diag.classification;
      rows.push_back({s.params.c, res.diag.sup_amplitude, res.diag.frequency, cls});
      rows_peak.push_back({s.params.c, res.diag.amplitude, res.diag.frequency, cls});
      rows0.push_back({s.params.c, trailing_amplitude(res.diag.extra_series[0]), 0, cls});
      all_sustained = all_sustained && cls == Classification::sustained;
    }
    auto fit = fit_power_law(rows, cr.c_star);
    auto fit_peak = fit_power_law(rows_peak, cr.c_star);
    auto fit0 = fit_power_law(rows0, cr.c_star);
    auto column = [](const std::vector<SweepRow>& v) {
      std::vector<double> out;
      for (const auto& r : v) out.push_back(r.amplitude);
      return out;
    };
    std::vector<double> dcs;
    for (const auto& row : rows) dcs.push_back(cr.c_star - row.c);
    r.details.set("c_star", cr.c_star).set("c_star_minus_c", dcs).set("sup_amplitude", column(rows));
    r.details.set("beta", fit.beta).set("fit_r2", fit.r2).set("prefactor", fit.prefactor);
    r.details.set("probe_x", xr).set("amplitude_at_mode_peak", column(rows_peak)).set("beta_at_mode_peak", fit_peak.beta);
    r.details.set("amplitude_at_x0", column(rows0)).set("beta_at_x0", fit0.beta);
    r.passed = all_sustained && fit.points == 7 && fit.beta >= 0.4 && fit.beta <= 0.6;
    r.measured = "beta " + g6(fit.beta) + " from sup|u| (R2 " + g6(fit.r2) + "); probes: mode peak x=" + g6(xr) +
                 " gives " + g6(fit_peak.beta) + ", x=0 gives " + g6(fit0.beta);
    r.expected = "beta in [0.4, 0.6], all runs sustained";
  });
}

CriterionResult criterion_a9() {
  return timed("A9", "property suite", [](CriterionResult& r) {
    std::vector<std::string> failed;
    auto check = [&](bool ok, const char* name) {
      r.details.set(name, ok);
      if (!ok) failed.push_back(name);
    };
    // root ordering is deterministic and respects the invariant
    {
      bool ok = true;
      for (int i = 0; i < 50; ++i) {
        cplx lam(std::sin(1.3 * i) * 2, std::cos(0.7 * i) * 3);
        auto a = spatial_roots(1, 1.5, lam), b = spatial_roots(1, 1.5, lam);
        for (int j = 0; j < 4; ++j) ok = ok && a.nu[j] == b.nu[j];
        for (int j = 0; j < 3; ++j) ok = ok && a.nu[j].real() >= a.nu[j + 1].real() - 1e-12;
      }
      check(ok, "root_ordering_determinism");
    }
    // roots at conj λ are the conjugates
    {
      bool ok = true;
      for (int i = 0; i < 20; ++i) {
        cplx lam(0.3 * i - 2, 0.2 * i + 0.1);
        auto a = spatial_roots(-1, 1.2, lam), b = spatial_roots(-1, 1.2, std::conj(lam));
        for (int j = 0; j < 4; ++j) {
          double d = INFINITY;
          for (int k = 0; k < 4; ++k) d = std::min(d, std::abs(std::conj(a.nu[j]) - b.nu[k]));
          ok = ok && d < 1e-10 * (1 + std::abs(a.nu[j]));
        }
      }
      check(ok, "conjugation_equivariance");
    }
    {
      bool ok = true;
      for (double chi : {1.0, -1.0})
        for (double c : {0.5, 1.0, 2.0}) ok = ok && spatial_roots(chi, c, {100, 3}).morse_index == 2;
      check(ok, "morse_index_right_of_spectrum");
    }
    {
      auto cf = closed_form_spreading(1.0);
      auto bp = find_double_root(1.0, cf.c_lin, {cf.lambda_lin, cf.nu_lin()});
      check(bp.pinched && pinching_check(bp), "branch_point_pinched");
    }
    ModelParams p = at_ell(20);
    auto cr = find_hopf_crossing(p);
    {
      ModelParams q = p;
      q.c = cr.c_star - 0.01;
      int whole = count_eigs_in_box(q, {-0.02, kReMax, 0.2, 3});
      int lower = count_eigs_in_box(q, {-0.02, kReMax, 0.2, 1.6});
      int upper = count_eigs_in_box(q, {-0.02, kReMax, 1.6, 3});
      r.details.set("winding_counts", std::vector<double>{double(whole), double(lower), double(upper)});
      check(whole == lower + upper && whole == 1, "winding_additivity");
    }
    {
      ModelParams q = p;
      q.c = cr.c_star;
      HopfPipelineOptions o;
      auto base = compute_hopf(p, Normalization::inner_product, o);
      check(std::abs(base.theta_minus - std::conj(base.theta_plus)) <= 1e-12 * std::abs(base.theta_plus),
            "theta_minus_is_conjugate");

      double L = std::ceil((q.ell + o.margin) / o.h - 1e-9) * o.h;
      auto op = build_operator(q, L, o.h);
      auto pair = leading_pair(op, cr.lambda_star);
      auto modes = solve_quadratic_modes(op, pair, cr.lambda_star.imag(), RVec(op.n, 0.0));
      bool ok = true;
      for (cplx s : {cplx(3, -2), cplx(-0.01, 0), cplx(0, 7)}) {
        EigenPair scaled = pair;
        for (auto& z : scaled.v) z *= s;
        for (auto& z : scaled.w) z *= std::conj(s) * 0.5;
        auto h = hopf_coefficient(op, scaled, modes, cr, Normalization::inner_product);
        ok = ok && (h.theta_plus.real() > 0) == (base.theta_plus.real() > 0);
      }
      check(ok, "theta_sign_under_rescaling");
      bool ok2 = true;
      std::vector<double> res;
      for (double h : {0.1, 0.05, 0.025}) {
        HopfPipelineOptions oh;
        oh.h = h;
        auto hr = compute_hopf(p, Normalization::inner_product, oh);
        res.push_back(hr.theta_plus.real());
        ok2 = ok2 && (hr.theta_plus.real() > 0) == (base.theta_plus.real() > 0);
      }
      r.details.set("re_theta_by_h", res);
      check(ok2, "theta_sign_under_refinement");
    }
    r.passed = failed.empty();
    r.measured = failed.empty() ? "all 9 properties hold" : "failed:";
    for (const auto& f : failed) r.measured += " " + f;
    r.expected = "all properties hold";
  });
}

CriterionResult run_criterion(const std::string& id) {
  if (id == "A1") return criterion_a1();
  if (id == "A2") return criterion_a2();
  if (id == "A3") return criterion_a3();
  if (id == "A4") return criterion_a4();
  if (id == "A5") return criterion_a5();
  if (id == "A6") return criterion_a6();
  if (id == "A7") return criterion_a7();
  if (id == "A8") return criterion_a8();
  if (id == "A9") return criterion_a9();
  throw PreconditionError("unknown criterion " + id);
}

std::vector<CriterionResult> verify(VerifyLevel level) {
  std::vector<std::string> ids = {"A1", "A2", "A3", "A4", "A5", "A6", "A9"};
  if (level == VerifyLevel::full) ids = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9"};
  std::vector<CriterionResult> out;
  for (const auto& id : ids) out.push_back(run_criterion(id));
  return out;
}

std::string report_line(const CriterionResult& r) {
  char t[32];
  std::snprintf(t, sizeof t, "%.2fs", r.seconds);
  return r.id + " " + (r.passed ? "PASS" : "FAIL") + "  " + r.title + " | measured: " + r.measured +
         " | expected: " + r.expected + " | " + t;
}

JsonObject report_json(const std::vector<CriterionResult>& results) {
  std::vector<JsonObject> items;
  bool all = true;
  for (const auto& r : results) {
    JsonObject o;
    o.set("id", r.id).set("title", r.title).set("passed", r.passed).set("measured", r.measured);
    o.set("expected", r.expected).set("details", r.details);
    items.push_back(o);
    all = all && r.passed;
  }
  JsonObject j;
  j.set("all_passed", all).set("criteria", items);
  return j;
}

}  // namespace trigfront
