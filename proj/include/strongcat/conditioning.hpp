#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "strongcat/sfa.hpp"
#include "strongcat/states.hpp"

namespace strongcat {

/// One term of a multimode coherent superposition: coeff * e^{i phase} * prod_q |alphas[q]>.
/// Mode index 0 is the fundamental, index q-1 the q-th harmonic.
struct MultimodeBranch {
  Complex coeff{1.0, 0.0};
  std::vector<CoherentAmplitude> alphas;
  double phase = 0.0;

  Complex weight() const { return coeff * std::polar(1.0, phase); }
  int mode_count() const { return static_cast<int>(alphas.size()); }
};

/// prod_q <a_q|b_q> over the listed modes (all modes when `modes` is empty).
Complex multimode_overlap(const MultimodeBranch& a, const MultimodeBranch& b, std::span<const int> modes = {});

/// Finite superposition of multimode coherent products.
class EntangledMultimodeState {
 public:
  EntangledMultimodeState() = default;
  explicit EntangledMultimodeState(std::vector<MultimodeBranch> branches);

  const std::vector<MultimodeBranch>& branches() const { return branches_; }
  int mode_count() const { return branches_.empty() ? 0 : branches_.front().mode_count(); }
  std::size_t size() const { return branches_.size(); }

  /// G_ij = prod_q <alpha_q^(i)|alpha_q^(j)> restricted to `modes`.
  Eigen::MatrixXcd gram(std::span<const int> modes = {}) const;
  double squared_norm() const;
  /// Throws DegenerateSuperposition when the squared norm is below 1e-300.
  EntangledMultimodeState normalized() const;

  /// Projects every mode except `keep` onto the coherent states `onto` (indexed by mode,
  /// entry for `keep` ignored) and returns the unnormalized single-mode remainder.
  CoherentSuperposition project_onto(int keep, std::span<const CoherentAmplitude> onto) const;

 private:
  std::vector<MultimodeBranch> branches_;
};

/// Fundamental alpha_L + chi_1 and harmonics chi_q, as a single product branch.
MultimodeBranch post_hhg_product(CoherentAmplitude alpha_L, const HarmonicShiftSet& shifts);

/// (1 - |0~><0~|) applied to the post-HHG product, renormalized. Throws
/// NullConditioning when the conditioned norm vanishes (no harmonic radiation).
EntangledMultimodeState condition_on_hhg(const MultimodeBranch& product, CoherentAmplitude alpha_L);

/// Overall coupling xi_1 * prod_{q>=2} xi_q of the conditioned state.
Complex conditioning_coupling(const MultimodeBranch& product, CoherentAmplitude alpha_L);

/// Fundamental-mode cat after projecting the harmonics onto their shifted coherent states.
CoherentSuperposition ir_cat(const EntangledMultimodeState& state);

/// Harmonic-q cat after projecting every other mode (fundamental included) onto the
/// first branch. Throws DegenerateSuperposition when chi_q vanishes.
CoherentSuperposition xuv_cat(const EntangledMultimodeState& state, int q);

/// Two driver modes after conditioning; harmonics enter only through prod_q |xi_q|^2.
EntangledMultimodeState two_color_condition(CoherentAmplitude a1, CoherentAmplitude a2, CoherentAmplitude chi1,
                                            CoherentAmplitude chi2, std::span<const CoherentAmplitude> harmonics);

/// Eigenvalues of the reduced state of `part` (mode indices), via the branch Gram matrices.
Eigen::VectorXd reduced_spectrum(const EntangledMultimodeState& state, std::span<const int> part);

/// 1 - Tr(rho_A^2) for the reduced state of `part`.
double linear_entropy(const EntangledMultimodeState& state, std::span<const int> part);

/// -Tr(rho_A log2 rho_A) for the reduced state of `part`.
double von_neumann_entropy(const EntangledMultimodeState& state, std::span<const int> part);

/// Shannon entropy (base 2) of a probability spectrum; entries below 1e-15 are dropped.
double entropy_bits(const Eigen::VectorXd& spectrum);

nlohmann::json to_json(const MultimodeBranch& b);
nlohmann::json to_json(const EntangledMultimodeState& s);
EntangledMultimodeState multimode_state_from_json(const nlohmann::json& j);

}  // namespace strongcat
