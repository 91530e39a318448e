#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "strongcat/ati.hpp"
#include "strongcat/conditioning.hpp"
#include "strongcat/errors.hpp"
#include "strongcat/fock.hpp"
#include "strongcat/sfa.hpp"
#include "strongcat/spectrometer.hpp"
#include "strongcat/states.hpp"
#include "strongcat/tomography.hpp"
#include "strongcat/wigner.hpp"

namespace strongcat::cli {

void RunContext::write(const std::string& name, const std::function<void(std::ostream&)>& body) {
  const auto path = out_dir / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  body(os);
  if (!os) throw std::runtime_error("failed writing " + path.string());
  outputs.push_back(name);
}

void RunContext::write_json(const std::string& name, const nlohmann::json& j) {
  write(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

namespace {

// ---- shared config blocks -------------------------------------------------------------

struct StateSpec {
  std::string kind;
  CoherentAmplitude alpha, chi;
  int n = 0;
  int parity = 1;
  double k = 0.0;
  std::string file;
  int trunc = 0;  // 0: pick from the amplitudes
};

struct StateModel {
  std::string descriptor;
  std::function<double(CoherentAmplitude)> wigner;
  DensityMatrix rho;
};

StateSpec read_state(ConfigReader& c, const std::string& fallback, bool allow_none) {
  StateSpec s;
  s.kind = allow_none ? c.choice("state", fallback, {"none", "coherent", "fock", "squeezed", "cat", "parity-cat", "file"})
                      : c.choice("state", fallback, {"coherent", "fock", "squeezed", "cat", "parity-cat", "file"});
  if (s.kind == "none") return s;
  if (s.kind == "file") {
    s.file = c.text("state_file", "");
    if (s.file.empty()) c.fail("state_file", "required when state = file");
    return s;
  }
  if (s.kind == "fock") {
    s.n = c.integer("n", 1, 0, 200);
  } else {
    s.alpha = {c.real("alpha", 2.0, -20.0, 20.0), c.real("alpha_im", 0.0, -20.0, 20.0)};
  }
  if (s.kind == "squeezed") s.k = c.real("k", 0.8, -3.0, 3.0);
  if (s.kind == "cat") {
    s.chi = {c.real("chi", 1.5, -20.0, 20.0), c.real("chi_im", 0.0, -20.0, 20.0)};
    if (std::abs(s.chi.value()) == 0.0) c.fail("chi", "must be nonzero for a cat state");
  }
  if (s.kind == "parity-cat") {
    s.parity = c.integer("parity", 1, -1, 1);
    if (s.parity == 0) c.fail("parity", "must be +1 or -1");
  }
  s.trunc = c.integer("state_trunc", 0, 0, 400);
  return s;
}

std::string describe(CoherentAmplitude a) {
  return format_double(a.re()) + (a.im() < 0 ? "" : "+") + format_double(a.im()) + "i";
}

StateModel build_state(const StateSpec& s) {
  StateModel m;
  auto pick = [&](int automatic) { return s.trunc > 0 ? s.trunc : automatic; };
  if (s.kind == "coherent") {
    m.descriptor = "coherent alpha=" + describe(s.alpha);
    m.wigner = [a = s.alpha](CoherentAmplitude b) { return wigner_coherent(a, b); };
    m.rho = DensityMatrix::pure(coherent_fock_coeffs(s.alpha, pick(required_truncation(s.alpha))));
  } else if (s.kind == "fock") {
    m.descriptor = "fock n=" + std::to_string(s.n);
    m.wigner = [n = s.n](CoherentAmplitude b) { return wigner_fock(n, b); };
    m.rho = DensityMatrix::fock(s.n, pick(s.n + 10));
    if (m.rho.dim() <= s.n) throw UsageError("state_trunc must exceed n");
  } else if (s.kind == "squeezed") {
    const SqueezeParams sp{s.k, s.alpha};
    m.descriptor = "squeezed alpha=" + describe(s.alpha) + " k=" + format_double(s.k);
    m.wigner = [sp](CoherentAmplitude b) { return wigner_squeezed(sp, b); };
    const int automatic = required_truncation(s.alpha) + 10 * static_cast<int>(std::ceil(std::exp(2.0 * std::abs(s.k))));
    m.rho = DensityMatrix::pure(squeezed_fock_coeffs(sp, pick(automatic)));
  } else if (s.kind == "cat" || s.kind == "parity-cat") {
    const auto state = s.kind == "cat" ? CoherentSuperposition::shifted_cat(s.alpha, s.chi)
                                       : CoherentSuperposition::parity_cat(s.alpha, s.parity);
    if (s.kind == "cat") {
      m.descriptor = "cat alpha=" + describe(s.alpha) + " chi=" + describe(s.chi);
      m.wigner = [a = s.alpha, c = s.chi](CoherentAmplitude b) { return wigner_shifted_cat(a, c, b); };
    } else {
      m.descriptor = "parity-cat alpha=" + describe(s.alpha) + " parity=" + std::to_string(s.parity);
      m.wigner = [state](CoherentAmplitude b) { return wigner_css(state, b); };
    }
    m.rho = DensityMatrix::pure(superposition_fock_coeffs(state.normalized(), pick(required_truncation(state))));
  } else if (s.kind == "file") {
    std::ifstream is(s.file);
    if (!is) throw UsageError("cannot read state_file '" + s.file + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(s.file + ": " + e.what());
    }
    m.rho = density_matrix_from_json(j);
    m.descriptor = "file " + s.file;
    m.wigner = [rho = m.rho](CoherentAmplitude b) { return wigner_from_rho(rho, b); };
  } else {
    throw UsageError("no state to build");
  }
  return m;
}

GridSpec read_grid(ConfigReader& c) {
  const double r = c.positive("range", 8.0);
  const int n = c.integer("points", 101, 2, 2001);
  return {-r, r, -r, r, n, n};
}

struct PulseUnits {
  double intensity = 8e13;   // W/cm^2
  double wavelength = 800;   // nm
  double duration = 30;      // fs, intensity FWHM of the sin^2 field envelope
  double cycles = 0;         // overrides duration when > 0
  double ip = 12.13;         // eV
};

struct PulseRead {
  LaserPulse pulse;
  AtomSpec atom;
  double intensity = 0.0;
  double wavelength_nm = 0.0;
  double ip_ev = 0.0;
};

// Physical units stop here: everything downstream is atomic units.
PulseRead read_pulse(ConfigReader& c, const PulseUnits& d, bool envelope_keys) {
  PulseRead r;
  r.intensity = c.real("intensity", d.intensity, 0.0, 1e18);
  r.wavelength_nm = c.real("wavelength", d.wavelength, 10.0, 1e5);
  r.ip_ev = c.positive("ip", d.ip);
  r.pulse.F0 = units::intensity_to_field(r.intensity);
  r.pulse.omega = units::wavelength_nm_to_omega(r.wavelength_nm);
  r.pulse.cep = c.real("cep", 0.0, -10.0, 10.0);
  const double cycles = c.real("cycles", d.cycles, 0.0, 1000.0);
  if (cycles > 0.0) {
    r.pulse.n_cycles = cycles;
  } else {
    const double fwhm = units::fs_to_au(c.positive("duration", d.duration));
    const double fraction = 1.0 - 2.0 / kPi * std::asin(std::pow(0.5, 0.25));
    r.pulse.n_cycles = std::max(1.0, std::round(fwhm / fraction / r.pulse.period()));
  }
  if (envelope_keys) {
    r.pulse.envelope = parse_envelope(c.choice("envelope", "sin2", {"sin2", "gaussian", "flat"}));
    r.pulse.steps_per_cycle = c.integer("steps_per_cycle", 128, 16, 8192);
  }
  r.atom.ip = units::ev_to_au(r.ip_ev);
  return r;
}

void write_rows(std::ostream& os, const std::string& header, const std::vector<std::vector<double>>& columns) {
  os << header << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format_double(columns[c][i]);
    os << '\n';
  }
}

double grid_min(const WignerGrid& g) { return g.values.minCoeff(); }

nlohmann::json grid_summary(const WignerGrid& g, const std::string& descriptor) {
  auto j = g.metadata(descriptor);
  j["min"] = grid_min(g);
  j["max"] = g.values.maxCoeff();
  return j;
}

// ---- wigner ---------------------------------------------------------------------------

}  // namespace

void cmd_wigner(RunContext& ctx) {
  auto& c = ctx.cfg;
  const auto spec = read_state(c, "coherent", false);
  const auto grid = read_grid(c);
  const int phases = c.integer("phases", 12, 1, 720);
  const int shots = c.integer("shots", 10000, 0, 10000000);
  const double efficiency = c.real("efficiency", 1.0, 0.0, 1.0);
  c.finish("wigner");

  const auto state = build_state(spec);
  const auto w = evaluate_wigner(grid, state.wigner, ctx.threads);
  ctx.write("wigner.csv", [&](std::ostream& os) { w.write_csv(os); });
  ctx.write_json("wigner.json", grid_summary(w, state.descriptor));
  ctx.summary["state"] = state.descriptor;
  ctx.summary["integral"] = w.integral();
  ctx.summary["min"] = grid_min(w);
  ctx.summary["max"] = w.values.maxCoeff();
  if (shots > 0) {
    const auto phi = uniform_phases(phases);
    const auto trace = sample_homodyne(state.rho, phi, shots, ctx.seed, {efficiency, ctx.threads});
    ctx.write("homodyne.csv", [&](std::ostream& os) { trace.write_csv(os); });
    ctx.summary["samples"] = trace.total_samples();
  }
}

// ---- hhg ------------------------------------------------------------------------------

void cmd_hhg(RunContext& ctx) {
  auto& c = ctx.cfg;
  const auto pr = read_pulse(c, PulseUnits{}, true);
  const int n_c = c.integer("n_c", 41, 1, 1000);
  const double g_eff = c.positive("g_eff", 1.0);
  const double n_ph = c.positive("n_ph", 1.0);
  c.finish("hhg");

  const double photon_ev = units::kPhotonEvNm / pr.wavelength_nm;
  auto& s = ctx.summary;
  s["photon_ev"] = photon_ev;
  s["n_cycles"] = pr.pulse.n_cycles;
  if (pr.intensity == 0.0) {
    ctx.write("spectrum.csv", [](std::ostream& os) { os << "q,photon_ev,chi_re,chi_im,power\n"; });
    s["note"] = "zero field: no harmonic emission";
    return;
  }
  const double up_ev = ponderomotive_energy(pr.intensity, pr.wavelength_nm * 1e-3);
  const double cutoff_ev = cutoff_energy(up_ev, pr.ip_ev);
  s["up_ev"] = up_ev;
  s["keldysh_gamma"] = keldysh_gamma(pr.ip_ev, up_ev);
  s["cutoff_ev"] = cutoff_ev;
  s["cutoff_order"] = cutoff_ev / photon_ev;

  double max_return = 0.0;
  for (const auto& r : classical_return_spectrum(pr.pulse)) max_return = std::max(max_return, r.energy);
  s["classical_max_return_up"] = max_return / pr.pulse.ponderomotive();

  SfaOptions opts;
  opts.threads = ctx.threads;
  const auto dipole = sfa_dipole(pr.pulse, pr.atom, opts);
  const auto shifts = harmonic_shifts(dipole, n_c, g_eff, n_ph);
  ctx.write("dipole.csv", [&](std::ostream& os) { write_rows(os, "t,d", {dipole.t, dipole.d}); });
  std::vector<double> q, ev, re, im, power;
  for (int k = 1; k <= n_c; ++k) {
    q.push_back(k);
    ev.push_back(k * photon_ev);
    re.push_back(shifts[k].real());
    im.push_back(shifts[k].imag());
    power.push_back(std::norm(shifts[k]));
  }
  ctx.write("spectrum.csv", [&](std::ostream& os) { write_rows(os, "q,photon_ev,chi_re,chi_im,power", {q, ev, re, im, power}); });
  s["plateau_edge"] = plateau_edge(shifts);
}

// ---- condition ------------------------------------------------------------------------

namespace {

HarmonicShiftSet read_model_shifts(ConfigReader& c, double chi1_fallback) {
  const Complex chi1{c.real("chi1", chi1_fallback, -20.0, 20.0), c.real("chi1_im", 0.0, -20.0, 20.0)};
  const double plateau = c.real("chi_plateau", 0.01, 0.0, 20.0);
  const int n_c = c.integer("n_c", 11, 1, 200);
  const int cutoff_q = c.integer("cutoff_q", 11, 1, 200);
  return model_shifts(chi1, plateau, cutoff_q, n_c);
}

void write_cat(RunContext& ctx, const CoherentSuperposition& cat, const GridSpec& grid, const std::string& label) {
  const auto normalized = cat.normalized();
  const auto rho = DensityMatrix::pure(superposition_fock_coeffs(normalized, required_truncation(normalized)));
  ctx.write_json("cat.json", to_json(rho));
  const auto w = evaluate_wigner(grid, [&](CoherentAmplitude b) { return wigner_css(normalized, b); }, ctx.threads);
  ctx.write("wigner.csv", [&](std::ostream& os) { w.write_csv(os); });
  ctx.write_json("wigner.json", grid_summary(w, label));
  ctx.summary["cat_mean_photon"] = mean_photon(rho);
  ctx.summary["wigner_min"] = grid_min(w);
  nlohmann::json branches = nlohmann::json::array();
  for (const auto& b : normalized.branches()) {
    branches.push_back({{"coeff", {b.coeff.real(), b.coeff.imag()}}, {"alpha", {b.alpha.re(), b.alpha.im()}}});
  }
  ctx.summary["cat_branches"] = branches;
}

void condition_ati(RunContext& ctx) {
  auto& c = ctx.cfg;
  PulseUnits d;
  d.intensity = units::field_to_intensity(0.05);
  d.wavelength = units::kPhotonEvNm / units::au_to_ev(0.057);
  d.cycles = 5;
  d.ip = units::au_to_ev(0.5);
  const auto pr = read_pulse(c, d, false);
  const double momentum = c.real("momentum", 0.32, -10.0, 10.0);
  const double magnitude = c.real("alpha", 7.0, 0.0, 100.0);
  AtiOptions o;
  o.g_eff = c.positive("g_eff", 2.5e-3);
  c.finish("condition mode ati");

  const ElectronTag tag{momentum * std::sqrt(pr.pulse.ponderomotive())};
  const auto r = ati_conditioned_state(pr.pulse, pr.atom, tag, driver_amplitude(pr.pulse, magnitude), o);
  const auto psi = ati_fundamental_state(r.state);
  const auto pn = photon_distribution(psi);
  std::vector<double> n(pn.size());
  std::iota(n.begin(), n.end(), 0.0);
  ctx.write("pn.csv", [&](std::ostream& os) { write_rows(os, "n,p", {n, pn}); });
  ctx.write_json("state.json", to_json(r.state));
  auto& s = ctx.summary;
  s["momentum_au"] = tag.v;
  s["mean_photon"] = mean_photon(psi);
  s["reference_mean_photon"] = magnitude * magnitude;
  s["peaks"] = distribution_peaks(pn, 0.25);
  s["steps_per_cycle"] = r.steps_per_cycle;
  s["probability"] = r.probability;
}

}  // namespace

void cmd_condition(RunContext& ctx) {
  auto& c = ctx.cfg;
  const auto mode = c.choice("mode", "ir-cat", {"post-hhg", "ir-cat", "xuv-cat", "two-color", "ati"});
  if (mode == "ati") return condition_ati(ctx);

  const CoherentAmplitude alpha{c.real("alpha", 2.0, -20.0, 20.0), c.real("alpha_im", 0.0, -20.0, 20.0)};
  const auto shifts = read_model_shifts(c, -0.5);
  int q = 0;
  CoherentAmplitude alpha2, chi2;
  if (mode == "xuv-cat") q = c.integer("q", 3, 2, shifts.n_c());
  if (mode == "two-color") {
    alpha2 = {c.real("alpha2", 2.0, -20.0, 20.0), c.real("alpha2_im", 0.0, -20.0, 20.0)};
    chi2 = {c.real("chi2", -0.5, -20.0, 20.0), c.real("chi2_im", 0.0, -20.0, 20.0)};
  }
  const auto grid = mode == "post-hhg" ? GridSpec{} : read_grid(c);
  c.finish("condition mode " + mode);

  auto& s = ctx.summary;
  if (mode == "two-color") {
    std::vector<CoherentAmplitude> harmonics;
    for (int k = 2; k <= shifts.n_c(); ++k) harmonics.emplace_back(shifts[k]);
    const auto state = two_color_condition(alpha, alpha2, shifts[1], chi2, harmonics);
    const std::vector<int> first{0};
    s["linear_entropy"] = linear_entropy(state, first);
    s["entropy_bits"] = von_neumann_entropy(state, first);
    ctx.write_json("state.json", to_json(state));
    return;
  }
  const auto product = post_hhg_product(alpha, shifts);
  const auto state = condition_on_hhg(product, alpha);
  const Complex coupling = conditioning_coupling(product, alpha);
  s["coupling_abs"] = std::abs(coupling);
  s["conditioned_norm"] = 1.0 - std::norm(coupling);
  if (state.mode_count() > 1) {
    const std::vector<int> fundamental{0};
    s["linear_entropy_fundamental"] = linear_entropy(state, fundamental);
  }
  ctx.write_json("state.json", to_json(state));
  if (mode == "ir-cat") {
    write_cat(ctx, ir_cat(state), grid, "ir-cat");
    s["xi_abs"] = std::abs(coherent_overlap(alpha, alpha + CoherentAmplitude{shifts[1]}));
  } else if (mode == "xuv-cat") {
    write_cat(ctx, xuv_cat(state, q), grid, "xuv-cat q=" + std::to_string(q));
    s["xi_abs"] = std::abs(coherent_overlap({}, CoherentAmplitude{shifts[q]}));
  }
}

// ---- tomo -----------------------------------------------------------------------------

void cmd_tomo(RunContext& ctx) {
  auto& c = ctx.cfg;
  const auto input = c.has("input") ? c.text("input", "") : std::string();
  const auto spec = read_state(c, input.empty() ? "coherent" : "none", true);
  if (input.empty() && spec.kind == "none") c.fail("state", "either input or a state to synthesize is required");
  int phases = 0, shots = 0;
  double efficiency = 1.0;
  if (input.empty()) {
    phases = c.integer("phases", 12, 1, 720);
    shots = c.integer("shots", 10000, 1, 10000000);
    efficiency = c.real("efficiency", 1.0, 0.0, 1.0);
  }
  const auto method = c.choice("method", "both", {"maxlik", "radon", "both"});
  const int n_trunc = c.integer("n_trunc", 12, 1, 80);
  const int max_iter = c.integer("max_iter", 5000, 1, 1000000);
  const double tol = c.positive("tol", 1e-9);
  const double bin_width = c.positive("bin_width", 0.05);
  const double cutoff = c.positive("cutoff", 4.0);
  const auto grid = read_grid(c);
  c.finish("tomo");

  std::optional<StateModel> reference;
  if (spec.kind != "none") reference = build_state(spec);
  HomodyneTrace trace;
  if (input.empty()) {
    trace = sample_homodyne(reference->rho, uniform_phases(phases), shots, ctx.seed, {efficiency, ctx.threads});
    ctx.write("homodyne.csv", [&](std::ostream& os) { trace.write_csv(os); });
  } else {
    std::ifstream is(input);
    if (!is) throw UsageError("cannot read input '" + input + "'");
    trace = HomodyneTrace::read_csv(is);
  }
  auto& s = ctx.summary;
  s["samples"] = trace.total_samples();
  if (reference) s["reference"] = reference->descriptor;
  if (method != "radon") {
    const auto r = maxlik_reconstruct(trace, n_trunc, max_iter, tol, {bin_width});
    ctx.write_json("rho.json", to_json(r.rho));
    std::vector<double> it(r.log_likelihood.size());
    std::iota(it.begin(), it.end(), 0.0);
    ctx.write("loglik.csv", [&](std::ostream& os) { write_rows(os, "iteration,log_likelihood", {it, r.log_likelihood}); });
    const auto w = wigner_grid_from_rho(r.rho, grid, ctx.threads);
    ctx.write("wigner_maxlik.csv", [&](std::ostream& os) { w.write_csv(os); });
    s["iterations"] = r.iterations;
    s["diluted_steps"] = r.diluted_steps;
    s["merged_bins"] = r.merged_bins;
    s["log_likelihood"] = r.log_likelihood.back();
    s["mean_photon"] = mean_photon(r.rho);
    s["purity"] = r.rho.purity();
    if (reference) {
      s["fidelity"] = fidelity(r.rho, reference->rho.resized(n_trunc).normalized());
      s["reference_leakage"] = 1.0 - reference->rho.resized(n_trunc).trace().real();
    }
  }
  if (method != "maxlik") {
    const auto w = inverse_radon(trace, grid, cutoff, bin_width);
    ctx.write("wigner_radon.csv", [&](std::ostream& os) { w.write_csv(os); });
    s["radon_integral"] = w.integral();
    s["radon_min"] = grid_min(w);
  }
}

// ---- qs -------------------------------------------------------------------------------

void cmd_qs(RunContext& ctx) {
  auto& c = ctx.cfg;
  QsModel m;
  m.shots = c.integer("shots", m.shots, 1000, 100000000);
  m.q_eff = c.positive("q_eff", m.q_eff);
  if (c.has("q_orders")) m.q_orders = c.integers("q_orders", {}, 1, 1000);
  m.absorption = c.choice("absorption", "discrete", {"discrete", "continuous"}) == "discrete" ? Absorption::discrete
                                                                                          : Absorption::continuous;
  m.hhg_fraction = c.real("hhg_fraction", m.hhg_fraction, 0.0, 1.0);
  m.ir_photons = c.positive("ir_photons", m.ir_photons);
  m.hh_photons = c.positive("hh_photons", m.hh_photons);
  m.noise_ir = c.positive("noise_ir", m.noise_ir);
  m.noise_hh = c.positive("noise_hh", m.noise_hh);
  const double width = c.positive("width", 0.15);
  c.finish("qs");
  m.seed = ctx.seed;
  m.threads = ctx.threads;

  const auto sample = simulate_shots(m);
  const auto fit = fit_diagonal(sample.shots);
  const auto selected = select_diagonal(sample.shots, width, fit);
  ctx.write("shots.csv", [&](std::ostream& os) { write_shots_csv(os, sample.shots, fit, width); });
  auto& s = ctx.summary;
  s["pearson_all"] = pearson(sample.shots);
  s["pearson_selected"] = pearson(selected);
  s["selected"] = selected.size();
  s["precision"] = hhg_precision(selected);
  s["ir_scale"] = sample.ir_scale;
  s["hh_scale"] = sample.hh_scale;
  if (selected.size() >= 1000) {
    const auto pir = conditioned_pir(selected, fit, sample.ir_scale);
    ctx.write("pir.csv", [&](std::ostream& os) { pir.write_csv(os); });
    s["pir_spacing"] = peak_spacing(pir);
    s["pir_peaks"] = pir_peaks(pir);
  } else {
    s["note"] = "fewer than 1000 selected shots: no P_IR histogram";
  }
}

// ---- sweep ----------------------------------------------------------------------------

void cmd_sweep(RunContext& ctx) {
  auto& c = ctx.cfg;
  const auto kind = c.choice("kind", "slin", {"slin", "ati-entropy"});
  auto& s = ctx.summary;
  if (kind == "slin") {
    const CoherentAmplitude alpha{c.real("alpha", 2.0, -20.0, 20.0), c.real("alpha_im", 0.0, -20.0, 20.0)};
    const double plateau = c.real("chi_plateau", 0.3, 0.0, 20.0);
    const int n_c = c.integer("n_c", 11, 2, 200);
    const int cutoff_q = c.integer("cutoff_q", 11, 1, 200);
    const double chi1_max = c.positive("chi1_max", 8.0);
    const int points = c.integer("points", 161, 2, 100000);
    c.finish("sweep kind slin");

    std::vector<double> x, y;
    const std::vector<int> fundamental{0};
    for (int k = 0; k < points; ++k) {
      const double chi1 = chi1_max * k / (points - 1);
      const auto shifts = model_shifts(-chi1, plateau, cutoff_q, n_c);
      const auto state = condition_on_hhg(post_hhg_product(alpha, shifts), alpha);
      x.push_back(chi1);
      y.push_back(linear_entropy(state, fundamental));
    }
    ctx.write("sweep.csv", [&](std::ostream& os) { write_rows(os, "chi1_abs,linear_entropy", {x, y}); });
    const auto peak = std::max_element(y.begin(), y.end());
    s["max_linear_entropy"] = *peak;
    s["argmax_chi1_abs"] = x[static_cast<std::size_t>(peak - y.begin())];
    s["last_linear_entropy"] = y.back();
    return;
  }
  PulseUnits d;
  d.intensity = units::field_to_intensity(0.005);
  d.wavelength = units::kPhotonEvNm / units::au_to_ev(0.010);
  d.cycles = 5;
  d.ip = units::au_to_ev(0.5);
  const auto pr = read_pulse(c, d, false);
  AtiOptions o;
  o.g_eff = c.positive("g_eff", 1e-6);
  const double e_min = c.positive("e_min", 1.0);
  const double e_max = c.positive("e_max", 8.0);
  c.finish("sweep kind ati-entropy");

  const auto sweep = ati_entropy_sweep(pr.pulse, pr.atom, e_min, e_max, o);
  std::vector<double> x, y;
  int decreases = 0;
  for (const auto& p : sweep) {
    if (!y.empty() && p.entropy <= y.back()) ++decreases;
    x.push_back(p.energy_up);
    y.push_back(p.entropy);
  }
  ctx.write("sweep.csv", [&](std::ostream& os) { write_rows(os, "energy_up,entropy", {x, y}); });
  s["omega_au"] = pr.pulse.omega;
  s["points"] = sweep.size();
  s["non_increasing_steps"] = decreases;
}

}  // namespace strongcat::cli
