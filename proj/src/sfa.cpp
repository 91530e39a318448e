#include "strongcat/sfa.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include "strongcat/errors.hpp"

namespace strongcat {

namespace units {
double ev_to_au(double ev) { return ev / kHartreeEv; }
double au_to_ev(double au) { return au * kHartreeEv; }
double intensity_to_field(double w_per_cm2) { return std::sqrt(w_per_cm2 / kAtomicIntensity); }
double field_to_intensity(double field) { return field * field * kAtomicIntensity; }
double wavelength_nm_to_omega(double nm) { return ev_to_au(kPhotonEvNm / nm); }
double fs_to_au(double fs) { return fs / kAtomicTimeFs; }
double au_to_fs(double au) { return au * kAtomicTimeFs; }
}  // namespace units

Envelope parse_envelope(const std::string& name) {
  if (name == "sin2") return Envelope::sin2;
  if (name == "gaussian") return Envelope::gaussian;
  if (name == "flat") return Envelope::flat;
  throw UsageError("unknown envelope '" + name + "' (expected sin2, gaussian or flat)");
}

std::string to_string(Envelope e) {
  switch (e) {
    case Envelope::sin2: return "sin2";
    case Envelope::gaussian: return "gaussian";
    case Envelope::flat: return "flat";
  }
  return "?";
}

namespace {

// 4-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 4> kGlX{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                     0.8611363115940526};
constexpr std::array<double, 4> kGlW{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                     0.3478548451374538};

template <class F>
double gauss_legendre(F&& f, double a, double b) {
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t k = 0; k < 4; ++k) s += kGlW[k] * f(m + h * kGlX[k]);
  return s * h;
}

double envelope_derivative(const LaserPulse& p, double t) {
  const double T = p.duration();
  switch (p.envelope) {
    case Envelope::sin2:
      if (t <= 0.0 || t >= T) return 0.0;
      return (kPi / T) * std::sin(2.0 * kPi * t / T);
    case Envelope::gaussian: {
      const double s = T / 8.0, u = t - 0.5 * T;
      return -u / (s * s) * std::exp(-0.5 * u * u / (s * s));
    }
    case Envelope::flat: return 0.0;
  }
  return 0.0;
}

}  // namespace

int LaserPulse::n_steps() const {
  return static_cast<int>(std::lround(n_cycles * steps_per_cycle));
}

std::vector<double> LaserPulse::time_grid() const {
  const int n = n_steps();
  std::vector<double> t(static_cast<std::size_t>(n + 1));
  const double h = dt();
  for (int i = 0; i <= n; ++i) t[static_cast<std::size_t>(i)] = i * h;
  return t;
}

double LaserPulse::envelope_at(double t) const {
  const double T = duration();
  switch (envelope) {
    case Envelope::sin2: {
      if (t <= 0.0 || t >= T) return 0.0;
      const double s = std::sin(kPi * t / T);
      return s * s;
    }
    case Envelope::gaussian: {
      const double s = T / 8.0, u = t - 0.5 * T;
      return std::exp(-0.5 * u * u / (s * s));
    }
    case Envelope::flat: return 1.0;
  }
  return 0.0;
}

double LaserPulse::vector_potential(double t) const {
  return -(F0 / omega) * envelope_at(t) * std::sin(omega * (t - 0.5 * duration()) + cep);
}

double LaserPulse::field(double t) const {
  const double ph = omega * (t - 0.5 * duration()) + cep;
  return (F0 / omega) * (envelope_derivative(*this, t) * std::sin(ph) + envelope_at(t) * omega * std::cos(ph));
}

double LaserPulse::ponderomotive() const { return F0 * F0 / (4.0 * omega * omega); }

HarmonicShiftSet HarmonicShiftSet::scaled_atoms(double n_ph_new) const {
  HarmonicShiftSet out = *this;
  const double r = n_ph_new / n_ph;
  for (auto& c : out.chi) c *= r;
  out.n_ph = n_ph_new;
  return out;
}

double ponderomotive_energy(double intensity_w_cm2, double wavelength_um) {
  return 9.33e-14 * intensity_w_cm2 * wavelength_um * wavelength_um;
}

double keldysh_gamma(double ip, double up) {
  if (!(up > 0.0)) throw ZeroField("Keldysh parameter undefined for U_p = 0");
  return std::sqrt(ip / (2.0 * up));
}

double cutoff_energy(double up, double ip) { return 3.17 * up + 1.32 * ip; }

ClassicalReturn classical_return(const LaserPulse& pulse, double t_ion) {
  const double a_ion = pulse.vector_potential(t_ion);
  auto velocity = [&](double s) { return pulse.vector_potential(s) - a_ion; };
  const double h = pulse.period() / 256.0;
  const double t_end = pulse.duration();
  double x_prev = 0.0;
  double t = t_ion;
  while (t + h <= t_end + 1e-12) {
    const double x = x_prev + gauss_legendre(velocity, t, t + h);
    if (t > t_ion && x_prev != 0.0 && ((x > 0.0) != (x_prev > 0.0))) {
      double lo = t, hi = t + h;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double xm = x_prev + gauss_legendre(velocity, t, mid);
        if ((xm > 0.0) == (x_prev > 0.0)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double t_ret = 0.5 * (lo + hi);
      const double v = velocity(t_ret);
      return {t_ion, t_ret, 0.5 * v * v};
    }
    x_prev = x;
    t += h;
  }
  throw NoReturns("electron born at t=" + std::to_string(t_ion) + " never recollides");
}

std::vector<ClassicalReturn> classical_return_spectrum(const LaserPulse& pulse, int samples_per_cycle) {
  if (!(pulse.F0 > 0.0)) throw ZeroField("no driving field");
  std::vector<ClassicalReturn> out;
  const double h = pulse.period() / samples_per_cycle;
  const int n = static_cast<int>(pulse.duration() / h);
  for (int i = 0; i < n; ++i) {
    try {
      out.push_back(classical_return(pulse, i * h));
    } catch (const NoReturns&) {
    }
  }
  if (out.empty()) throw NoReturns("no ionization time leads to a recollision");
  return out;
}

namespace {

// Hydrogen-like 1s bound-continuum dipole along the polarization, up to the factor i.
double dipole_element(double v, double ip) {
  const double a = v * v + 2.0 * ip;
  return v / (a * a * a);
}

}  // namespace

DipoleSeries sfa_dipole(const LaserPulse& pulse, const AtomSpec& atom, const SfaOptions& opts) {
  if (!(atom.ip > 0.0)) throw UsageError("ionization potential must be positive");
  const double dt = pulse.dt();
  const double cutoff = cutoff_energy(pulse.ponderomotive(), atom.ip);
  if (dt > kPi / (2.0 * cutoff)) {
    throw GridTooCoarse("dt=" + std::to_string(dt) + " exceeds pi/(2 Omega_cutoff)=" +
                        std::to_string(kPi / (2.0 * cutoff)));
  }
  const int n = pulse.n_steps();
  const auto t = pulse.time_grid();
  const std::size_t np1 = static_cast<std::size_t>(n + 1);
  std::vector<double> a(np1), e(np1), pa(np1, 0.0), pa2(np1, 0.0);
  for (std::size_t i = 0; i < np1; ++i) {
    a[i] = pulse.vector_potential(t[i]);
    e[i] = pulse.field(t[i]);
  }
  for (std::size_t i = 1; i < np1; ++i) {
    pa[i] = pa[i - 1] + gauss_legendre([&](double s) { return pulse.vector_potential(s); }, t[i - 1], t[i]);
    pa2[i] = pa2[i - 1] + gauss_legendre([&](double s) {
               const double v = pulse.vector_potential(s);
               return v * v;
             }, t[i - 1], t[i]);
  }

  const int jmax = std::max(1, static_cast<int>(std::lround(opts.max_excursion_cycles * pulse.steps_per_cycle)));
  const double eps = opts.epsilon_cycles * pulse.period();
  // spreading prefactor with a cos^2 taper over the last fifth of the excursion window
  std::vector<Complex> pref(static_cast<std::size_t>(jmax + 1));
  const int taper_start = static_cast<int>(0.8 * jmax);
  for (int j = 1; j <= jmax; ++j) {
    const double tau = j * dt;
    double w = 1.0;
    if (j > taper_start) {
      const double c = std::cos(0.5 * kPi * (j - taper_start) / static_cast<double>(jmax - taper_start));
      w = c * c;
    }
    pref[static_cast<std::size_t>(j)] = w * std::pow(kPi / Complex(eps, 0.5 * tau), 1.5);
  }
  const double norm_c = std::pow(2.0, 3.5) * std::pow(2.0 * atom.ip, 1.25) / kPi;
  const double scale = norm_c * norm_c * dt;

  DipoleSeries out{t, std::vector<double>(np1, 0.0), pulse.omega};
  auto block = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Complex acc{};
      const int jm = std::min(i, jmax);
      for (int j = 1; j <= jm; ++j) {
        const int k = i - j;
        const double tau = j * dt;
        const double ia = pa[static_cast<std::size_t>(i)] - pa[static_cast<std::size_t>(k)];
        const double ia2 = pa2[static_cast<std::size_t>(i)] - pa2[static_cast<std::size_t>(k)];
        const double ps = -ia / tau;
        const double action = atom.ip * tau - 0.5 * ia * ia / tau + 0.5 * ia2;
        const double amp = dipole_element(ps + a[static_cast<std::size_t>(i)], atom.ip) *
                           e[static_cast<std::size_t>(k)] *
                           dipole_element(ps + a[static_cast<std::size_t>(k)], atom.ip);
        acc += pref[static_cast<std::size_t>(j)] * amp * std::polar(1.0, -action);
      }
      out.d[static_cast<std::size_t>(i)] = 2.0 * scale * (kI * acc).real();
    }
  };
  const int workers = std::clamp(opts.threads, 1, n + 1);
  if (workers == 1) {
    block(0, n + 1);
  } else {
    std::vector<std::jthread> pool;
    const int chunk = (n + 1 + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int b = w * chunk, en = std::min(n + 1, b + chunk);
      if (b < en) pool.emplace_back(block, b, en);
    }
  }
  return out;
}

HarmonicShiftSet harmonic_shifts(const DipoleSeries& dipole, int n_c, double g_eff, double n_ph) {
  if (n_c < 1) throw UsageError("n_c must be at least 1");
  if (!(dipole.omega > 0.0)) throw UsageError("dipole series carries no carrier frequency");
  HarmonicShiftSet out{std::vector<Complex>(static_cast<std::size_t>(n_c)), n_ph, g_eff};
  const std::size_t n = dipole.t.size();
  if (n < 2) return out;
  const double dt = dipole.t[1] - dipole.t[0];
  if (n_c * dipole.omega > kPi / dt) {
    throw NyquistViolation("harmonic " + std::to_string(n_c) + " above the grid Nyquist frequency");
  }
  for (int q = 1; q <= n_c; ++q) {
    const double wq = q * dipole.omega;
    Complex acc{};
    for (std::size_t i = 0; i < n; ++i) {
      const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
      acc += w * dipole.d[i] * std::polar(1.0, wq * dipole.t[i]);
    }
    out.chi[static_cast<std::size_t>(q - 1)] = -n_ph * g_eff * std::sqrt(static_cast<double>(q)) * acc * dt;
  }
  return out;
}

double calibrate_coupling(const DipoleSeries& dipole, double target_abs, double n_ph) {
  const auto unit = harmonic_shifts(dipole, 1, 1.0, n_ph);
  const double c1 = std::abs(unit[1]);
  if (!(c1 > 0.0)) throw ZeroField("fundamental shift vanishes; cannot calibrate coupling");
  return target_abs / c1;
}

HarmonicShiftSet model_shifts(Complex chi1, Complex chi_plateau, int cutoff_q, int n_c) {
  HarmonicShiftSet out{std::vector<Complex>(static_cast<std::size_t>(n_c)), 1.0, 1.0};
  if (n_c >= 1) out.chi[0] = chi1;
  for (int q = 3; q <= std::min(cutoff_q, n_c); q += 2) out.chi[static_cast<std::size_t>(q - 1)] = chi_plateau;
  return out;
}

int plateau_edge(const HarmonicShiftSet& shifts, int first_plateau_q, double drop_db) {
  const int q0 = first_plateau_q | 1;
  double level = 0.0;
  for (int q = q0; q <= shifts.n_c(); q += 2) level = std::max(level, std::norm(shifts[q]));
  if (!(level > 0.0)) throw UsageError("no harmonic power above the plateau start");
  level *= std::pow(10.0, -drop_db / 10.0);
  int edge = q0;
  for (int q = q0; q <= shifts.n_c(); q += 2) {
    if (std::norm(shifts[q]) >= level) edge = q;
  }
  return edge;
}

}  // namespace strongcat
