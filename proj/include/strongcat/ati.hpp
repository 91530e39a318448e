#pragma once

#include <optional>
#include <vector>

#include "strongcat/conditioning.hpp"
#include "strongcat/fock.hpp"
#include "strongcat/sfa.hpp"

namespace strongcat {

/// Photoelectron label: canonical momentum v along the polarization. A vanishes at the
/// pulse end, so v is also the final kinetic momentum.
struct ElectronTag {
  double v = 0.0;

  /// Final kinetic energy v^2/2 in units of U_p.
  double energy_up(double up) const { return 0.5 * v * v / up; }
  static ElectronTag from_energy(double energy_up, double up, int sign = +1);
};

/// Electron tags paired with the field state each one leaves behind. Distinct tags are
/// orthogonal; the squared norm of each field part is that tag's probability.
struct LightMatterState {
  struct Part {
    ElectronTag tag;
    EntangledMultimodeState field;
  };
  std::vector<Part> parts;
};

struct AtiOptions {
  /// Coupling of mode q is g_eff * sqrt(q).
  double g_eff = 1e-3;
  /// Fundamental plus n_modes-1 harmonics.
  int n_modes = 1;
  /// Starting branch density; doubled until the fundamental P(n) settles.
  int steps_per_cycle = 64;
  int max_steps_per_cycle = 16384;
  /// Total-variation change of P(n) accepted between successive doublings.
  double tolerance = 1e-3;
  /// Accepted infidelity of the fundamental-mode state and relative change of the
  /// ionization probability between successive doublings.
  double amplitude_tolerance = 1e-4;
  /// Bound-state dipole whose shifts chi_q(t') precede ionization; none when empty.
  std::optional<DipoleSeries> bound_dipole;
  double n_ph = 1.0;
};

/// Coherent amplitude of the driving mode whose mean field reproduces the pulse carrier.
CoherentAmplitude driver_amplitude(const LaserPulse& pulse, double magnitude);

/// delta_q(t, t_ion, v) = -g_eff sqrt(q) int_{t_ion}^t r(tau) e^{i q omega tau} dtau, with
/// r(tau) = int_{t_ion}^tau (v + A(s)) ds the electron excursion.
Complex ati_displacement(const LaserPulse& pulse, const ElectronTag& tag, double t_ion, double t, int q,
                         double g_eff);

struct AtiResult {
  /// One branch per ionization time, normalized.
  EntangledMultimodeState state;
  int steps_per_cycle = 0;
  /// Total-variation change of P(n) at the last doubling.
  double last_change = 0.0;
  /// Fundamental-mode infidelity at the last doubling.
  double last_infidelity = 0.0;
  /// Squared norm before normalization; comparable between tags of the same pulse and atom.
  double probability = 0.0;
};

/// Field state of all modes for a photoelectron with the given tag, from direct ionization
/// at every grid time t' with the hydrogen-like bound-continuum dipole. Throws
/// ConvergenceFailure when the doubling test fails at max_steps_per_cycle.
AtiResult ati_conditioned_state(const LaserPulse& pulse, const AtomSpec& atom, const ElectronTag& tag,
                                CoherentAmplitude alpha_L, const AtiOptions& opts = {});

/// Fundamental-mode state with the harmonics projected onto vacuum, normalized.
FockVector ati_fundamental_state(const EntangledMultimodeState& state, int n_trunc = 0);

/// Truncation large enough for every fundamental-mode branch.
int ati_truncation(const EntangledMultimodeState& state);

/// sum_v w_v |Phi(v)><Phi(v)| / sum_v w_v over fundamental-mode states of a common size.
DensityMatrix ati_mixed_state(const std::vector<FockVector>& states, const std::vector<double>& weights);

/// Von Neumann entropy (bits) of either party; needs at least one part.
double entropy_of_entanglement(const LightMatterState& state);

struct EntropySample {
  double energy_up = 0.0;
  double entropy = 0.0;
};

/// Entropy of entanglement of the two-tag state |v>|Phi(v)> + |-v>|Phi(-v)> (normalized
/// field parts, equal weights) at the ATI comb energies n*omega - ip - U_p that fall in
/// [e_min_up, e_max_up], in units of U_p. The driver amplitude drops out of every overlap.
std::vector<EntropySample> ati_entropy_sweep(const LaserPulse& pulse, const AtomSpec& atom, double e_min_up,
                                             double e_max_up, const AtiOptions& opts = {});

/// <a|b> for two multimode superpositions.
Complex multimode_inner(const EntangledMultimodeState& a, const EntangledMultimodeState& b);

/// Photon numbers of the local maxima of P(n) holding at least `min_fraction` of the largest
/// one. Neighbouring maxima without a dip below 90% of the lower one count once.
std::vector<int> distribution_peaks(const std::vector<double>& pn, double min_fraction = 0.05);

}  // namespace strongcat
