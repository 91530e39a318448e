#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "strongcat/types.hpp"

namespace strongcat {

/// <a1|a2> = exp(-(|a1|^2 + |a2|^2 - 2 conj(a1) a2)/2).
Complex coherent_overlap(CoherentAmplitude a1, CoherentAmplitude a2);

/// Displaced squeezed vacuum D(alpha) S(k)|0>.
///
/// k > 0 narrows the x quadrature: Var(x) = e^{-2k}/2, Var(p) = e^{2k}/2.
struct SqueezeParams {
  double k = 0.0;
  CoherentAmplitude alpha{};
};

/// Single-mode superposition sum_i c_i |alpha_i> (not necessarily normalized).
class CoherentSuperposition {
 public:
  struct Branch {
    Complex coeff;
    CoherentAmplitude alpha;
  };

  CoherentSuperposition() = default;
  explicit CoherentSuperposition(std::vector<Branch> branches);

  /// |alpha> as a one-branch superposition.
  static CoherentSuperposition coherent(CoherentAmplitude alpha);
  /// Shifted cat |alpha + chi> - xi |alpha> with xi = <alpha|alpha + chi>.
  static CoherentSuperposition shifted_cat(CoherentAmplitude alpha, CoherentAmplitude chi);
  /// Even (+1) or odd (-1) cat |alpha> +/- |-alpha>.
  static CoherentSuperposition parity_cat(CoherentAmplitude alpha, int parity);

  const std::vector<Branch>& branches() const { return branches_; }
  std::size_t size() const { return branches_.size(); }

  /// Branches closer than merge_tol are combined (coefficients summed).
  CoherentSuperposition merged(double merge_tol = 1e-8) const;

  /// G_ij = <alpha_i|alpha_j>.
  Eigen::MatrixXcd gram() const;

  /// sum_ij conj(c_i) c_j G_ij.
  double squared_norm() const;

  /// Rescaled to unit norm. Throws DegenerateSuperposition when the squared
  /// norm is below 1e-12.
  CoherentSuperposition normalized() const;

  /// <a> for the normalized state.
  Complex mean_amplitude() const;

 private:
  std::vector<Branch> branches_;
};

/// Gram matrix <alpha_i|alpha_j> of an arbitrary set of amplitudes.
Eigen::MatrixXcd coherent_gram(std::span<const CoherentAmplitude> alphas);

}  // namespace strongcat
