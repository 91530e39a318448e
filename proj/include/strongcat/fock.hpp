#pragma once

#include <vector>

#include <Eigen/Dense>

#include "strongcat/states.hpp"

namespace strongcat {

/// Maximum admissible weight |c_{N-1}|^2 in the last retained Fock level.
inline constexpr double kMaxTruncationLeakage = 1e-8;

/// ceil(|alpha|^2 + 8|alpha| + 20): keeps the Poissonian tail below 1e-10 up to |alpha| ~ 4.
int required_truncation(CoherentAmplitude alpha);

/// Truncation that covers every branch of a superposition.
int required_truncation(const CoherentSuperposition& state);

/// Pure state in a truncated Fock basis, amplitudes <n|psi>.
struct FockVector {
  Eigen::VectorXcd coeffs;

  int n_trunc() const { return static_cast<int>(coeffs.size()); }
  double squared_norm() const { return coeffs.squaredNorm(); }
  /// Weight in the last retained level.
  double leakage() const;
  FockVector normalized() const;
};

/// Fock-truncated density operator.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Eigen::MatrixXcd elements);

  static DensityMatrix pure(const FockVector& psi);
  static DensityMatrix fock(int n, int n_trunc);
  /// Geometric (thermal) photon distribution with the given mean.
  static DensityMatrix thermal(double mean_photon, int n_trunc);

  const Eigen::MatrixXcd& elements() const { return rho_; }
  Complex operator()(Eigen::Index n, Eigen::Index m) const { return rho_(n, m); }
  int dim() const { return static_cast<int>(rho_.rows()); }
  Complex trace() const { return rho_.trace(); }
  double purity() const;

  /// Hermitian part with unit trace.
  DensityMatrix normalized() const;

  /// Throws NumericalError when Hermiticity (1e-12), unit trace (1e-10) or
  /// positivity (eigenvalues >= -1e-10) fails.
  void validate() const;

  /// Larger or smaller truncation; the trailing block is zero-filled or dropped.
  DensityMatrix resized(int n_trunc) const;

 private:
  Eigen::MatrixXcd rho_;
};

/// c_n = e^{-|a|^2/2} a^n / sqrt(n!). Throws TruncationTooSmall when |c_{N-1}|^2 >= 1e-8.
FockVector coherent_fock_coeffs(CoherentAmplitude alpha, int n_trunc);

FockVector fock_state(int n, int n_trunc);

/// Fock expansion of a (normalized) coherent superposition.
FockVector superposition_fock_coeffs(const CoherentSuperposition& state, int n_trunc);

/// D(alpha) S(k)|0>, evaluated on an enlarged working basis and truncated.
FockVector squeezed_fock_coeffs(const SqueezeParams& params, int n_trunc);

/// <m|D(alpha)|n> for m, n < dim.
Eigen::MatrixXcd displacement_matrix(CoherentAmplitude alpha, int dim);

/// P_n = |<n|psi>|^2.
std::vector<double> photon_distribution(const FockVector& psi);
/// P_n = rho_nn.
std::vector<double> photon_distribution(const DensityMatrix& rho);

/// sum_n n rho_nn.
double mean_photon(const DensityMatrix& rho);
double mean_photon(const FockVector& psi);

/// (<n^2> - <n>)/<n>^2. Throws ZeroMeanPhoton when <n> vanishes.
double g2_zero(const DensityMatrix& rho);
double g2_zero(const FockVector& psi);

/// Photon loss: beam splitter of transmissivity eta followed by tracing out the
/// reflected port.
DensityMatrix apply_loss(const DensityMatrix& rho, double eta);

}  // namespace strongcat
