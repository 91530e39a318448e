#pragma once

#include <string>
#include <vector>

#include "strongcat/types.hpp"

namespace strongcat {

// Atomic units throughout unless a name says otherwise.
namespace units {
inline constexpr double kHartreeEv = 27.211386245988;
inline constexpr double kAtomicIntensity = 3.50944758e16;  // W/cm^2 for unit field amplitude
inline constexpr double kAtomicTimeFs = 0.024188843265857;
inline constexpr double kPhotonEvNm = 1239.84198;          // hbar*omega [eV] * lambda [nm]

double ev_to_au(double ev);
double au_to_ev(double au);
/// Peak field amplitude for a cycle-averaged intensity in W/cm^2.
double intensity_to_field(double w_per_cm2);
double field_to_intensity(double field);
double wavelength_nm_to_omega(double nm);
double fs_to_au(double fs);
double au_to_fs(double au);
}  // namespace units

enum class Envelope { sin2, gaussian, flat };

Envelope parse_envelope(const std::string& name);
std::string to_string(Envelope e);

/// Linearly polarized pulse defined through its vector potential
///   A(t) = -(F0/omega) f(t) sin(omega (t - T/2) + cep),  E(t) = -dA/dt,
/// on [0, T] with T = n_cycles * 2pi/omega. The sin^2 envelope spans the whole
/// window; the Gaussian uses sigma = T/8 on the field envelope.
struct LaserPulse {
  double F0 = 0.05;
  double omega = 0.057;
  double n_cycles = 10.0;
  double cep = 0.0;
  Envelope envelope = Envelope::sin2;
  int steps_per_cycle = 128;

  double period() const { return 2.0 * kPi / omega; }
  double duration() const { return n_cycles * period(); }
  double dt() const { return period() / steps_per_cycle; }
  int n_steps() const;
  /// Uniform grid t_i = i dt, i = 0..n_steps.
  std::vector<double> time_grid() const;

  double envelope_at(double t) const;
  double vector_potential(double t) const;
  double field(double t) const;
  /// U_p = F0^2 / (4 omega^2).
  double ponderomotive() const;
};

/// Ground state of a single-active-electron atom with hydrogen-like 1s dipole matrix element.
struct AtomSpec {
  double ip = 0.5;
};

/// <d(t)> sampled on the pulse grid.
struct DipoleSeries {
  std::vector<double> t;
  std::vector<double> d;
  double omega = 0.0;  // carrier frequency the grid was built for
};

/// Per-mode displacements chi_q for q = 1..n_c, index q-1.
struct HarmonicShiftSet {
  std::vector<Complex> chi;
  double n_ph = 1.0;
  double g_eff = 1.0;

  int n_c() const { return static_cast<int>(chi.size()); }
  Complex operator[](int q) const { return chi.at(static_cast<std::size_t>(q - 1)); }
  HarmonicShiftSet scaled_atoms(double n_ph_new) const;
};

/// 9.33e-14 * I[W/cm^2] * lambda[um]^2, in eV.
double ponderomotive_energy(double intensity_w_cm2, double wavelength_um);

/// sqrt(ip / (2 up)). Throws ZeroField for up <= 0.
double keldysh_gamma(double ip, double up);

/// 3.17 up + 1.32 ip (same units in and out).
double cutoff_energy(double up, double ip);

struct ClassicalReturn {
  double t_ion;
  double t_ret;
  double energy;  // return kinetic energy
};

/// First recollision of an electron born at rest at t_ion. Throws NoReturns if
/// it never comes back within the pulse window.
ClassicalReturn classical_return(const LaserPulse& pulse, double t_ion);

/// Scan of ionization times on the pulse grid, keeping those that return.
/// Throws NoReturns when no trajectory recollides.
std::vector<ClassicalReturn> classical_return_spectrum(const LaserPulse& pulse, int samples_per_cycle = 512);

struct SfaOptions {
  /// Longest excursion time, in cycles, kept in the ionization-time integral.
  double max_excursion_cycles = 1.0;
  /// Spreading-prefactor regularization, in cycles.
  double epsilon_cycles = 1e-4;
  int threads = 1;
};

/// Lewenstein dipole with saddle-point momentum and direct quadrature over excursion time.
/// Throws GridTooCoarse when dt > pi / (2 * cutoff frequency).
DipoleSeries sfa_dipole(const LaserPulse& pulse, const AtomSpec& atom, const SfaOptions& opts = {});

/// chi_q = -n_ph * g_eff * sqrt(q) * int d(t) e^{i q omega t} dt for q = 1..n_c.
/// Throws NyquistViolation when q omega exceeds pi/dt.
HarmonicShiftSet harmonic_shifts(const DipoleSeries& dipole, int n_c, double g_eff, double n_ph);

/// g_eff giving |chi_1| = target_abs for the given dipole and atom number.
double calibrate_coupling(const DipoleSeries& dipole, double target_abs, double n_ph);

/// Idealized plateau: chi_1 for the fundamental, chi_plateau on odd harmonics up to
/// cutoff_q, zero elsewhere.
HarmonicShiftSet model_shifts(Complex chi1, Complex chi_plateau, int cutoff_q, int n_c);

/// Highest odd harmonic whose power stays within `drop_db` of the strongest odd
/// harmonic at or above `first_plateau_q`.
int plateau_edge(const HarmonicShiftSet& shifts, int first_plateau_q = 7, double drop_db = 10.0);

}  // namespace strongcat
