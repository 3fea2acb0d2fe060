#include "trigfront/simulate.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <thread>

#include "trigfront/errors.hpp"
#include "trigfront/io.hpp"

namespace trigfront {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::decaying: return "decaying";
    case Classification::sustained: return "sustained";
    default: return "indeterminate";
  }
}

namespace {

// planner calls are not thread-safe; execution on distinct plans is
std::mutex g_plan_mutex;

class RealFFT {
 public:
  explicit RealFFT(int n) : n_(n) {
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(g_plan_mutex);
    fwd_ = fftw_plan_dft_r2c_1d(n, in_, out_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(n, out_, in_, FFTW_ESTIMATE);
  }
  ~RealFFT() {
    {
      std::lock_guard lock(g_plan_mutex);
      fftw_destroy_plan(fwd_);
      fftw_destroy_plan(bwd_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFFT(const RealFFT&) = delete;
  RealFFT& operator=(const RealFFT&) = delete;

  // unnormalized: forward gives Σ u_j e^{−ikx_j}
  void forward(const double* u, cplx* uh) {
    std::copy(u, u + n_, in_);
    fftw_execute(fwd_);
    auto* o = reinterpret_cast<cplx*>(out_);
    std::copy(o, o + n_ / 2 + 1, uh);
  }
  // divides by n, so backward(forward(u)) = u
  void backward(const cplx* uh, double* u) {
    auto* o = reinterpret_cast<cplx*>(out_);
    std::copy(uh, uh + n_ / 2 + 1, o);
    fftw_execute(bwd_);
    for (int j = 0; j < n_; ++j) u[j] = in_[j] / n_;
  }
  int size() const { return n_; }

 private:
  int n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan fwd_, bwd_;
};

double gauss(const GaussianBump& b, double x, double period) {
  // nearest periodic image is enough for widths far below the period
  double d = std::remainder(x - b.center, period);
  return std::exp(-0.5 * d * d / (b.width * b.width)) / (b.width * std::sqrt(2 * std::numbers::pi));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// the quintic needs 3N points for exact dealiasing of a band-limited u
constexpr int kPad = 3;

struct Stepper {
  const SimConfig& cfg;
  int n, nk;
  double period;
  RVec x, chi, dchi;
  double chi_ref;
  std::vector<double> k;
  CVec src_hat, lin;
  RealFFT fft;
  std::unique_ptr<RealFFT> fine;
  RVec work, wfine;
  CVec tmp, tmpf;

  explicit Stepper(const SimConfig& c) : cfg(c), n(c.n_modes), nk(c.n_modes / 2 + 1), period(c.domain_length), fft(c.n_modes) {
    x = grid(cfg);
    chi = chi_profile(cfg);
    chi_ref = cfg.chi_reference == SimConfig::Reference::plateau ? *std::max_element(chi.begin(), chi.end())
                                                                 : *std::min_element(chi.begin(), chi.end());
    dchi.resize(n);
    for (int j = 0; j < n; ++j) dchi[j] = chi[j] - chi_ref;
    k.resize(nk);
    lin.resize(nk);
    for (int j = 0; j < nk; ++j) {
      k[j] = 2 * std::numbers::pi * j / period;
      double k2 = k[j] * k[j];
      lin[j] = cplx(-k2 * k2 + chi_ref * k2, cfg.params.c * k[j]);
    }
    lin[nk - 1] = cplx(lin[nk - 1].real(), 0.0);  // Nyquist carries no odd derivative
    RVec s = source_profile(cfg);
    src_hat.resize(nk);
    fft.forward(s.data(), src_hat.data());
    for (auto& z : src_hat) z *= cfg.params.c;
    src_hat[nk - 1] = 0;
    work.resize(n);
    tmp.resize(nk);
    if (cfg.dealias) {
      fine = std::make_unique<RealFFT>(kPad * n);
      wfine.resize(kPad * n);
      tmpf.resize(kPad * n / 2 + 1);
    }
  }

  // explicit part k²·F[(χ − χ_ref)u + γu³ − βu⁵] + c·F[χ_src]
  void explicit_rhs(const CVec& uh, CVec& out, double& umax) {
    const double g = cfg.params.gamma, b = cfg.params.beta;
    fft.backward(uh.data(), work.data());
    umax = 0;
    for (double v : work) umax = std::max(umax, std::abs(v));
    if (cfg.dealias) {
      std::fill(tmpf.begin(), tmpf.end(), cplx(0));
      // coefficients are Σ over n points; the fine grid wants Σ over 3n
      for (int j = 0; j < nk - 1; ++j) tmpf[j] = uh[j] * double(kPad);
      fine->backward(tmpf.data(), wfine.data());
      for (auto& v : wfine) {
        double u2 = v * v;
        v = v * u2 * (g - b * u2);
      }
      fine->forward(wfine.data(), tmpf.data());
      for (int j = 0; j < nk; ++j) out[j] = tmpf[j] / double(kPad);
    } else {
      RVec w(n);
      for (int j = 0; j < n; ++j) {
        double u2 = work[j] * work[j];
        w[j] = work[j] * u2 * (g - b * u2);
      }
      fft.forward(w.data(), out.data());
    }
    for (int j = 0; j < n; ++j) work[j] *= dchi[j];
    fft.forward(work.data(), tmp.data());
    for (int j = 0; j < nk; ++j) out[j] = k[j] * k[j] * (out[j] + tmp[j]) + src_hat[j];
    out[nk - 1] = 0;
  }
};

double probe_value(const Stepper& st, const RVec& u, double xp) {
  // nearest node; the default grids contain x = 0
  double rel = (xp + 0.5 * st.period) / st.period * st.n;
  int j = static_cast<int>(std::lround(rel)) % st.n;
  if (j < 0) j += st.n;
  return u[j];
}

void write_field_header(const std::string& path, int nx, int nt, double dx, double dt_frame, double x0) {
  std::ofstream h(path);
  h << "{\"nx\": " << nx << ", \"nt\": " << nt << ", \"dx\": " << fmt17(dx) << ", \"dt\": " << fmt17(dt_frame)
    << ", \"x0\": " << fmt17(x0) << ", \"dtype\": \"float64-le\", \"layout\": \"row-major (t, x)\", \"columns\": [\"u\"]}\n";
}

}  // namespace

std::vector<std::string> SimConfig::violations() const {
  std::vector<std::string> v = params.violations();
  if (!(domain_length > 0)) v.push_back("domain_length > 0");
  if (trigger.kind == TriggerKind::piecewise && domain_length < 6 * params.ell) v.push_back("domain_length >= 6*ell");
  if (n_modes < 16 || n_modes % 2) v.push_back("n_modes even and >= 16");
  if (!(dt > 0)) v.push_back("dt > 0");
  else if (dt > dt_bound()) v.push_back("dt <= stability bound " + fmt17(dt_bound()));
  if (!(t_final > dt)) v.push_back("t_final > dt");
  if (record_every < 1) v.push_back("record_every >= 1");
  for (const auto& b : source)
    if (!(b.width > 0)) v.push_back("source widths > 0");
  for (const auto& b : trigger.bumps)
    if (!(b.width > 0)) v.push_back("trigger widths > 0");
  if (perturbation && !(perturbation->width > 0)) v.push_back("perturbation width > 0");
  if (!(blowup_cap > 0)) v.push_back("blowup_cap > 0");
  return v;
}

double SimConfig::jump_offset() const {
  if (trigger.kind != TriggerKind::piecewise || n_modes < 1) return 0;
  double pos = (0.5 * domain_length - params.ell) * n_modes / domain_length;
  double off = std::abs(pos - std::round(pos));
  pos = (0.5 * domain_length + params.ell) * n_modes / domain_length;
  return std::max(off, std::abs(pos - std::round(pos)));
}

void SimConfig::validate() const {
  auto v = violations();
  if (v.empty()) return;
  std::string msg = "SimConfig invalid:";
  for (const auto& s : v) msg += " [" + s + "]";
  throw PreconditionError(msg);
}

// The explicit part acts on mode k at rate |χ − χ_ref|k². Where that exceeds the implicit damping
// k⁴ − χ_ref k², i.e. k² < Δχ + χ_ref, dt times the explicit rate must stay below 1/2; dt ≤ 0.5 always.
double SimConfig::dt_bound() const {
  if (n_modes < 2 || !(domain_length > 0)) return 0.5;
  RVec chi = chi_profile(*this);
  auto [lo, hi] = std::minmax_element(chi.begin(), chi.end());
  double ref = chi_reference == Reference::plateau ? *hi : *lo;
  double dchi = *hi - *lo;
  double k2 = std::max(dchi + ref, 0.0);
  double rate = dchi * k2;
  return rate > 0 ? std::min(0.5, 0.5 / rate) : 0.5;
}

RVec grid(const SimConfig& cfg) {
  RVec x(cfg.n_modes);
  double dx = cfg.domain_length / cfg.n_modes;
  for (int j = 0; j < cfg.n_modes; ++j) x[j] = -0.5 * cfg.domain_length + j * dx;
  return x;
}

RVec chi_profile(const SimConfig& cfg) {
  const auto& p = cfg.params;
  RVec x = grid(cfg), chi(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    switch (cfg.trigger.kind) {
      case TriggerKind::uniform: chi[j] = p.chi_plus; break;
      case TriggerKind::gaussian_sum: {
        double s = p.chi_minus;
        for (const auto& b : cfg.trigger.bumps) s += b.amplitude * gauss(b, x[j], cfg.domain_length);
        chi[j] = s;
        break;
      }
      default: {
        double d = p.ell - std::abs(x[j]);
        if (cfg.trigger.smooth_width > 0)
          chi[j] = p.chi_minus + (p.chi_plus - p.chi_minus) * 0.5 * (1 + std::tanh(d / cfg.trigger.smooth_width));
        else if (std::abs(d) < 1e-12 * p.ell)
          chi[j] = 0.5 * (p.chi_plus + p.chi_minus);
        else
          chi[j] = d > 0 ? p.chi_plus : p.chi_minus;
      }
    }
  }
  return chi;
}

RVec source_profile(const SimConfig& cfg) {
  RVec x = grid(cfg), s(x.size(), 0.0);
  for (std::size_t j = 0; j < x.size(); ++j)
    for (const auto& b : cfg.source) s[j] += b.amplitude * gauss(b, x[j], cfg.domain_length);
  return s;
}

SimResult run(const SimConfig& cfg, const RVec* initial) {
  cfg.validate();
  Stepper st(cfg);
  const int n = st.n, nk = st.nk;
  const double dt = cfg.dt;

  RVec u(n, 0.0);
  if (initial) {
    if (static_cast<int>(initial->size()) != n) throw PreconditionError("run: initial state size mismatch");
    u = *initial;
  }
  if (cfg.perturbation) {
    const auto& b = *cfg.perturbation;
    for (int j = 0; j < n; ++j) {
      double z = std::remainder(st.x[j] - b.center, cfg.domain_length) / b.width;
      double shape = cfg.perturbation_shape == PerturbationShape::mass_free ? 1 - z * z : 1.0;
      u[j] += b.amplitude * shape * std::exp(-0.5 * z * z);
    }
  }

  CVec uh(nk), uh_prev(nk), N0(nk), N1(nk);
  st.fft.forward(u.data(), uh.data());
  uh[nk - 1] = 0;

  SimResult res;
  auto& d = res.diag;
  d.extra_series.resize(cfg.extra_probes.size());
  const double mean0 = uh[0].real() / n;
  const double mean_rate = st.src_hat[0].real() / n;
  int save_frames = 0;
  std::ofstream field;
  if (cfg.save_field_every > 0 && !cfg.field_path.empty()) field.open(cfg.field_path + ".bin", std::ios::binary);

  auto record = [&](double t) {
    st.fft.backward(uh.data(), u.data());
    d.probe_series.emplace_back(t, probe_value(st, u, cfg.x_probe));
    for (std::size_t q = 0; q < cfg.extra_probes.size(); ++q)
      d.extra_series[q].emplace_back(t, probe_value(st, u, cfg.extra_probes[q]));
    double mean = uh[0].real() / n;
    d.mass_series.emplace_back(t, mean);
    d.mass_drift = std::max(d.mass_drift, std::abs(mean - mean0 - mean_rate * t));
    if (t >= 0.8 * cfg.t_final)
      for (double v : u) d.sup_amplitude = std::max(d.sup_amplitude, std::abs(v - mean));
  };
  auto save = [&]() {
    if (!field.is_open()) return;
    st.fft.backward(uh.data(), u.data());
    field.write(reinterpret_cast<const char*>(u.data()), sizeof(double) * n);
    ++save_frames;
  };

  const int steps = static_cast<int>(std::llround(cfg.t_final / dt));
  record(0.0);
  if (cfg.save_field_every > 0) save();
  for (int s = 1; s <= steps; ++s) {
    double umax;
    st.explicit_rhs(uh, N1, umax);
    if (!(umax <= cfg.blowup_cap))
      throw BlowupDetected("run: |u| exceeded " + fmt17(cfg.blowup_cap) + " at t = " + fmt17((s - 1) * dt));
    // the mean only feels the source, so it is advanced exactly
    cplx mean_next = uh[0] + dt * st.src_hat[0];
    if (s == 1 || cfg.scheme == Scheme::imex_euler) {
      uh_prev = uh;
      for (int j = 1; j < nk; ++j) uh[j] = (uh[j] + dt * N1[j]) / (1.0 - dt * st.lin[j]);
    } else {
      for (int j = 1; j < nk; ++j) {
        cplx next = (4.0 * uh[j] - uh_prev[j] + 2 * dt * (2.0 * N1[j] - N0[j])) / (3.0 - 2 * dt * st.lin[j]);
        uh_prev[j] = uh[j];
        uh[j] = next;
      }
    }
    uh_prev[0] = uh[0];
    uh[0] = mean_next;
    uh[nk - 1] = 0;
    std::swap(N0, N1);
    if (s % cfg.record_every == 0) record(s * dt);
    if (cfg.save_field_every > 0 && s % cfg.save_field_every == 0) save();
  }
  d.steps = steps;

  st.fft.backward(uh.data(), u.data());
  for (double v : u)
    if (!std::isfinite(v)) throw BlowupDetected("run: non-finite state");
  double tot = 0, tail = 0;
  for (int j = 0; j < nk; ++j) {
    double e = std::norm(uh[j]);
    tot += e;
    if (3 * j > 2 * (nk - 1)) tail += e;
  }
  d.spectral_tail = tot > 0 ? tail / tot : 0;
  d.amplitude = trailing_amplitude(d.probe_series);
  d.frequency = dominant_frequency(d.probe_series);
  d.classification = classify(d, cfg.classify_window > 0 ? cfg.classify_window : cfg.t_final / 10);
  if (field.is_open()) {
    field.close();
    write_field_header(cfg.field_path + ".json", n, save_frames, cfg.domain_length / n, cfg.save_field_every * dt,
                       st.x[0]);
  }
  res.state = u;
  res.x = st.x;
  return res;
}

double trailing_amplitude(const std::vector<std::pair<double, double>>& s, double fraction) {
  if (s.empty()) return 0;
  double t0 = s.back().first - fraction * (s.back().first - s.front().first);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& [t, v] : s)
    if (t >= t0) lo = std::min(lo, v), hi = std::max(hi, v);
  return 0.5 * (hi - lo);
}

double dominant_frequency(const std::vector<std::pair<double, double>>& s, double fraction) {
  if (s.size() < 8) return 0;
  double t0 = s.back().first - fraction * (s.back().first - s.front().first);
  RVec v;
  for (const auto& [t, y] : s)
    if (t >= t0) v.push_back(y);
  const int m = static_cast<int>(v.size());
  if (m < 8) return 0;
  const double dt = (s.back().first - s.front().first) / (s.size() - 1);
  double mean = 0;
  for (double y : v) mean += y;
  mean /= m;
  for (int j = 0; j < m; ++j) v[j] = (v[j] - mean) * 0.5 * (1 - std::cos(2 * std::numbers::pi * j / (m - 1)));
  RealFFT fft(m);
  CVec h(m / 2 + 1);
  fft.forward(v.data(), h.data());
  int best = 1;
  for (int j = 1; j < m / 2 + 1; ++j)
    if (std::abs(h[j]) > std::abs(h[best])) best = j;
  double shift = 0;
  if (best > 0 && best < m / 2) {
    double a = std::log(std::abs(h[best - 1]) + 1e-300), b = std::log(std::abs(h[best])),
           c = std::log(std::abs(h[best + 1]) + 1e-300);
    double den = a - 2 * b + c;
    if (den != 0) shift = 0.5 * (a - c) / den;
  }
  return 2 * std::numbers::pi * (best + shift) / (m * dt);
}

double envelope_growth_rate(const std::vector<std::pair<double, double>>& s, double t0, double t1) {
  std::vector<double> tt, ll;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    double t = s[i].first;
    if (t < t0 || t > t1) continue;
    double a = std::abs(s[i - 1].second), b = std::abs(s[i].second), c = std::abs(s[i + 1].second);
    if (b >= a && b > c && b > 0) tt.push_back(t), ll.push_back(std::log(b));
  }
  if (tt.size() < 3) throw Error("envelope_growth_rate: fewer than 3 maxima in window");
  double mt = 0, ml = 0;
  for (std::size_t i = 0; i < tt.size(); ++i) mt += tt[i], ml += ll[i];
  mt /= tt.size();
  ml /= tt.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < tt.size(); ++i) num += (tt[i] - mt) * (ll[i] - ml), den += (tt[i] - mt) * (tt[i] - mt);
  return num / den;
}

Classification classify(const Diagnostics& diag, double window) {
  const auto& s = diag.probe_series;
  if (s.size() < 2 || !(window > 0)) return Classification::indeterminate;
  const double t_end = s.back().first;
  const int nw = static_cast<int>(std::floor((t_end - s.front().first) / window + 1e-9));
  if (nw < 3) return Classification::indeterminate;
  // window amplitudes counted back from the end
  std::vector<double> amp(nw, 0.0), lo(nw, INFINITY), hi(nw, -INFINITY);
  for (const auto& [t, v] : s) {
    int w = static_cast<int>(std::floor((t_end - t) / window));
    if (t == t_end) w = 0;
    if (w >= nw) continue;
    lo[w] = std::min(lo[w], v);
    hi[w] = std::max(hi[w], v);
  }
  for (int w = 0; w < nw; ++w) amp[w] = hi[w] >= lo[w] ? 0.5 * (hi[w] - lo[w]) : 0.0;
  double peak = *std::max_element(amp.begin(), amp.end());
  if (peak == 0) return Classification::decaying;
  if (amp[0] / peak < 0.01) return Classification::decaying;
  if (std::abs(amp[0] - amp[1]) <= 0.1 * std::max(amp[0], amp[1])) return Classification::sustained;
  return Classification::indeterminate;
}

std::vector<SweepRow> amplitude_sweep(const SimConfig& base, const RVec& c_values, int threads, SweepMode mode) {
  if (!std::is_sorted(c_values.begin(), c_values.end())) throw PreconditionError("amplitude_sweep: c_values must be sorted");
  std::vector<SweepRow> rows(c_values.size());
  auto one = [&](std::size_t i, const RVec* init) {
    SimConfig cfg = base;
    cfg.params.c = c_values[i];
    cfg.save_field_every = 0;
    auto r = run(cfg, init);
    rows[i] = {c_values[i], r.diag.amplitude, r.diag.frequency, r.diag.classification};
    return r.state;
  };
  if (mode != SweepMode::independent) {
    RVec state;
    const std::size_t m = c_values.size();
    for (std::size_t q = 0; q < m; ++q) {
      std::size_t i = mode == SweepMode::continuation_up ? q : m - 1 - q;
      state = one(i, q == 0 ? nullptr : &state);
    }
    return rows;
  }
  threads = std::max(1, std::min<int>(threads, static_cast<int>(c_values.size())));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < c_values.size(); i += threads) one(i, nullptr);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

PowerLawFit fit_power_law(const std::vector<SweepRow>& rows, double c_star) {
  std::vector<double> lx, ly;
  for (const auto& r : rows)
    if (r.c < c_star && r.classification == Classification::sustained && r.amplitude > 0) {
      lx.push_back(std::log(c_star - r.c));
      ly.push_back(std::log(r.amplitude));
    }
  PowerLawFit f;
  f.points = static_cast<int>(lx.size());
  if (f.points < 2) return f;
  double mx = 0, my = 0;
  for (int i = 0; i < f.points; ++i) mx += lx[i], my += ly[i];
  mx /= f.points;
  my /= f.points;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < f.points; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  f.beta = sxy / sxx;
  f.prefactor = std::exp(my - f.beta * mx);
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1;
  return f;
}

RVec relax_front(const SimConfig& cfg, const RVec& guess, const RelaxOptions& opt) {
  const int n = cfg.n_modes;
  if (static_cast<int>(guess.size()) != n) throw PreconditionError("relax_front: guess size mismatch");
  RVec src = source_profile(cfg), chi = chi_profile(cfg);
  double net = 0;
  for (double v : src) net += v;
  if (std::abs(net) * cfg.domain_length / n > 1e-8)
    throw FrontRelaxationFailure("relax_front: net source mass is nonzero, no steady state on a periodic domain");

  // dense spectral differentiation matrices
  RealFFT fft(n);
  const int nk = n / 2 + 1;
  Eigen::MatrixXd D1(n, n), D2(n, n);
  {
    RVec e(n, 0.0), col(n);
    CVec h(nk), g(nk);
    for (int j = 0; j < n; ++j) {
      std::fill(e.begin(), e.end(), 0.0);
      e[j] = 1;
      fft.forward(e.data(), h.data());
      for (int q = 0; q < nk; ++q) {
        double k = 2 * std::numbers::pi * q / cfg.domain_length;
        g[q] = (q == nk - 1) ? 0.0 : cplx(0, k) * h[q];
      }
      fft.backward(g.data(), col.data());
      for (int i = 0; i < n; ++i) D1(i, j) = col[i];
      for (int q = 0; q < nk; ++q) {
        double k = 2 * std::numbers::pi * q / cfg.domain_length;
        g[q] = -k * k * h[q];
      }
      fft.backward(g.data(), col.data());
      for (int i = 0; i < n; ++i) D2(i, j) = col[i];
    }
  }
  const double c = cfg.params.c, gm = cfg.params.gamma, bt = cfg.params.beta;
  Eigen::Map<const Eigen::VectorXd> s(src.data(), n);
  Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(guess.data(), n);
  const double mean0 = u.mean();
  auto residual = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = chi[i] * v[i] + gm * std::pow(v[i], 3) - bt * std::pow(v[i], 5);
    Eigen::VectorXd r = -D2 * (D2 * v + f) + c * (D1 * v) + c * s;
    return r;
  };
  Eigen::VectorXd R = residual(u);
  double tau = opt.tau0, rn = R.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < opt.max_iter; ++it) {
    if (rn < opt.tol) {
      return RVec(u.data(), u.data() + n);
    }
    Eigen::MatrixXd J = -D2 * D2 + c * D1;
    for (int i = 0; i < n; ++i) {
      double fp = chi[i] + 3 * gm * u[i] * u[i] - 5 * bt * std::pow(u[i], 4);
      J.col(i) -= D2.col(i) * fp;
    }
    // [(I/τ − J) 1; 1ᵀ 0] keeps the mean fixed
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n + 1, n + 1);
    B.topLeftCorner(n, n) = -J;
    B.topLeftCorner(n, n).diagonal().array() += 1 / tau;
    B.col(n).head(n).setOnes();
    B.row(n).head(n).setOnes();
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = R;
    rhs[n] = n * mean0 - u.sum();
    Eigen::VectorXd sol = B.partialPivLu().solve(rhs);
    // backtrack until the residual falls
    double step = 1;
    Eigen::VectorXd un, Rn;
    double rnn = INFINITY;
    for (int bt_it = 0; bt_it < 30; ++bt_it, step *= 0.5) {
      un = u + step * sol.head(n);
      Rn = residual(un);
      rnn = Rn.lpNorm<Eigen::Infinity>();
      if (std::isfinite(rnn) && rnn < rn) break;
    }
    if (!(rnn < rn)) throw FrontRelaxationFailure("relax_front: no descent at residual " + fmt17(rn));
    // switched evolution relaxation: grow the pseudo-step as the residual falls
    tau = std::min(1e12, tau * std::clamp(rn / rnn, 0.2, 10.0));
    u = un;
    R = Rn;
    rn = rnn;
  }
  throw FrontRelaxationFailure("relax_front: residual " + fmt17(rn) + " after " + std::to_string(opt.max_iter) +
                               " pseudo-time steps");
}

SimConfig gaussian_demo_config(double c) {
  SimConfig cfg;
  cfg.params.c = c;
  cfg.params.chi_plus = 1;
  cfg.params.chi_minus = -1;  // unused by the uniform trigger
  cfg.trigger.kind = TriggerKind::uniform;
  cfg.domain_length = 400;
  cfg.n_modes = 1024;
  cfg.dt = 0.01;
  cfg.t_final = 400;
  cfg.source = {{-110, 1, 2}, {-40, 1, 2}, {150, -2, 2}};
  cfg.perturbation = GaussianBump{-75, 1e-2, 2};
  cfg.perturbation_shape = PerturbationShape::mass_free;
  cfg.x_probe = -75;
  cfg.front_offset = 1;  // levels 1 | 0 | −1 | 1 from left to right
  return cfg;
}

DemoResult gaussian_trigger_demo(const SimConfig& cfg) {
  if (cfg.source.empty()) throw PreconditionError("gaussian_trigger_demo: source_chi must be set");
  cfg.validate();
  // crossing a source of mass m leftward raises u by m; the offset picks the conserved mean
  RVec x = grid(cfg), guess(x.size(), cfg.front_offset);
  for (std::size_t j = 0; j < x.size(); ++j)
    for (const auto& b : cfg.source) guess[j] += b.amplitude * normal_cdf((b.center - x[j]) / b.width);
  DemoResult out;
  out.front = relax_front(cfg, guess);
  SimConfig run_cfg = cfg;
  out.sim = run(run_cfg, &out.front);
  out.classification = out.sim.diag.classification;
  if (!cfg.field_path.empty() && cfg.save_field_every > 0) {
    out.field_bin = cfg.field_path + ".bin";
    out.field_header = cfg.field_path + ".json";
  }
  return out;
}

}  // namespace trigfront
