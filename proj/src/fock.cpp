#include "strongcat/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "strongcat/errors.hpp"
#include "strongcat/special.hpp"

namespace strongcat {

int required_truncation(CoherentAmplitude alpha) {
  const double a = alpha.magnitude();
  return static_cast<int>(std::ceil(a * a + 8.0 * a + 20.0));
}

int required_truncation(const CoherentSuperposition& state) {
  int n = 1;
  for (const auto& b : state.branches()) n = std::max(n, required_truncation(b.alpha));
  return n;
}

double FockVector::leakage() const {
  if (coeffs.size() == 0) return 0.0;
  return std::norm(coeffs(coeffs.size() - 1));
}

FockVector FockVector::normalized() const {
  const double n = coeffs.norm();
  if (!(n > 0.0)) throw NumericalError("cannot normalize a zero Fock vector");
  return {coeffs / n};
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd elements) : rho_(std::move(elements)) {
  if (rho_.rows() != rho_.cols()) throw NumericalError("density matrix must be square");
}

DensityMatrix DensityMatrix::pure(const FockVector& psi) {
  return DensityMatrix(psi.coeffs * psi.coeffs.adjoint());
}

DensityMatrix DensityMatrix::fock(int n, int n_trunc) {
  return pure(fock_state(n, n_trunc));
}

DensityMatrix DensityMatrix::thermal(double mean_photon, int n_trunc) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n_trunc, n_trunc);
  const double r = mean_photon / (1.0 + mean_photon);
  double p = 1.0 / (1.0 + mean_photon);
  for (int n = 0; n < n_trunc; ++n) {
    rho(n, n) = p;
    p *= r;
  }
  return DensityMatrix(std::move(rho));
}

double DensityMatrix::purity() const {
  return std::real((rho_ * rho_).trace());
}

DensityMatrix DensityMatrix::normalized() const {
  Eigen::MatrixXcd h = 0.5 * (rho_ + rho_.adjoint());
  const double tr = std::real(h.trace());
  if (!(tr > 0.0)) throw NumericalError("density matrix has non-positive trace");
  return DensityMatrix(h / tr);
}

void DensityMatrix::validate() const {
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) throw NumericalError("density matrix not Hermitian: " + std::to_string(herm));
  const Complex tr = rho_.trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw NumericalError("density matrix trace " + std::to_string(tr.real()) + " != 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -1e-10) throw NumericalError("density matrix eigenvalue " + std::to_string(lo) + " < 0");
}

DensityMatrix DensityMatrix::resized(int n_trunc) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_trunc, n_trunc);
  const int k = std::min(n_trunc, dim());
  out.topLeftCorner(k, k) = rho_.topLeftCorner(k, k);
  return DensityMatrix(std::move(out));
}

FockVector coherent_fock_coeffs(CoherentAmplitude alpha, int n_trunc) {
  if (n_trunc < 1) throw TruncationTooSmall("n_trunc must be positive");
  const Complex a = alpha.value();
  Eigen::VectorXcd c(n_trunc);
  c(0) = std::exp(-0.5 * std::norm(a));
  for (int n = 1; n < n_trunc; ++n) c(n) = c(n - 1) * a / std::sqrt(static_cast<double>(n));
  FockVector out{std::move(c)};
  if (out.leakage() >= kMaxTruncationLeakage) {
    throw TruncationTooSmall("|alpha|=" + std::to_string(alpha.magnitude()) + " needs more than " +
                             std::to_string(n_trunc) + " levels (leakage " +
                             std::to_string(out.leakage()) + ")");
  }
  return out;
}

FockVector fock_state(int n, int n_trunc) {
  if (n < 0 || n >= n_trunc) throw TruncationTooSmall("Fock level outside truncation");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_trunc);
  c(n) = 1.0;
  return {std::move(c)};
}

FockVector superposition_fock_coeffs(const CoherentSuperposition& state, int n_trunc) {
  const auto s = state.normalized();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_trunc);
  for (const auto& b : s.branches()) {
    const Complex a = b.alpha.value();
    Complex term = b.coeff * std::exp(-0.5 * std::norm(a));
    for (int n = 0; n < n_trunc; ++n) {
      if (n > 0) term *= a / std::sqrt(static_cast<double>(n));
      c(n) += term;
    }
  }
  FockVector out{std::move(c)};
  if (out.leakage() >= kMaxTruncationLeakage) {
    throw TruncationTooSmall("superposition needs more than " + std::to_string(n_trunc) + " levels");
  }
  return out;
}

namespace {

// <m|D(alpha)|n> for m >= n:
//   sqrt(n!/m!) alpha^{m-n} e^{-|alpha|^2/2} L_n^{(m-n)}(|alpha|^2)
// and for m < n the adjoint relation <m|D(alpha)|n> = conj(<n|D(-alpha)|m>).
Eigen::MatrixXcd displacement_block(Complex a, int rows, int cols) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(rows, cols);
  const double r = std::abs(a);
  if (r == 0.0) {
    for (int i = 0; i < std::min(rows, cols); ++i) d(i, i) = 1.0;
    return d;
  }
  const double x = r * r;
  const double log_r = std::log(r);
  const double theta = std::arg(a);
  const int max_dim = std::max(rows, cols);
  std::vector<double> lag(static_cast<std::size_t>(max_dim));
  for (int k = 0; k < max_dim; ++k) {
    // entries on the k-th off-diagonal: (n + k, n) below, (n, n + k) above
    special::laguerre_sequence(k, x, lag);
    for (int n = 0; n + k < max_dim; ++n) {
      const double log_mag = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + k + 1.0)) + k * log_r - 0.5 * x;
      const double mag = std::exp(log_mag) * lag[static_cast<std::size_t>(n)];
      if (n + k < rows && n < cols) d(n + k, n) = std::polar(mag, k * theta);
      if (k > 0 && n < rows && n + k < cols) {
        // conj of (-alpha)^k = (-1)^k conj(alpha)^k
        d(n, n + k) = std::polar(mag * ((k % 2) ? -1.0 : 1.0), -k * theta);
      }
    }
  }
  return d;
}

}  // namespace

Eigen::MatrixXcd displacement_matrix(CoherentAmplitude alpha, int dim) {
  return displacement_block(alpha.value(), dim, dim);
}

FockVector squeezed_fock_coeffs(const SqueezeParams& params, int n_trunc) {
  const double k = params.k;
  const double t = std::tanh(std::abs(k));
  // squeezed-vacuum support: keep 2m with t^{2m} below 1e-18
  int sv_dim = 2;
  if (t > 0.0) sv_dim = static_cast<int>(std::ceil(41.5 / -std::log(t))) + 4;
  sv_dim = std::max(sv_dim, 2);
  Eigen::VectorXcd sv = Eigen::VectorXcd::Zero(sv_dim);
  const double sign = k >= 0.0 ? -1.0 : 1.0;
  sv(0) = 1.0 / std::sqrt(std::cosh(k));
  for (int m = 1; 2 * m < sv_dim; ++m) {
    const double ratio = sign * t * std::sqrt((2.0 * m) * (2.0 * m - 1.0)) / (2.0 * m);
    sv(2 * m) = sv(2 * m - 2) * ratio;
  }
  const Eigen::MatrixXcd d = displacement_block(params.alpha.value(), n_trunc, sv_dim);
  FockVector out{d * sv};
  if (out.leakage() >= kMaxTruncationLeakage) {
    throw TruncationTooSmall("squeezed state needs more than " + std::to_string(n_trunc) + " levels");
  }
  return out;
}

std::vector<double> photon_distribution(const FockVector& psi) {
  std::vector<double> p(static_cast<std::size_t>(psi.n_trunc()));
  for (int n = 0; n < psi.n_trunc(); ++n) p[static_cast<std::size_t>(n)] = std::norm(psi.coeffs(n));
  return p;
}

std::vector<double> photon_distribution(const DensityMatrix& rho) {
  std::vector<double> p(static_cast<std::size_t>(rho.dim()));
  for (int n = 0; n < rho.dim(); ++n) p[static_cast<std::size_t>(n)] = std::max(0.0, rho(n, n).real());
  return p;
}

namespace {

struct Moments {
  double mean = 0.0;
  double factorial2 = 0.0;  // <n(n-1)>
};

Moments moments(const std::vector<double>& p) {
  Moments m;
  double total = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double nd = static_cast<double>(n);
    total += p[n];
    m.mean += nd * p[n];
    m.factorial2 += nd * (nd - 1.0) * p[n];
  }
  if (total > 0.0) {
    m.mean /= total;
    m.factorial2 /= total;
  }
  return m;
}

double g2_from(const std::vector<double>& p) {
  const Moments m = moments(p);
  if (!(m.mean > 1e-14)) throw ZeroMeanPhoton("g2(0) undefined for <n> = 0");
  return m.factorial2 / (m.mean * m.mean);
}

}  // namespace

double mean_photon(const DensityMatrix& rho) {
  double acc = 0.0;
  for (int n = 0; n < rho.dim(); ++n) acc += n * rho(n, n).real();
  return acc;
}

double mean_photon(const FockVector& psi) { return moments(photon_distribution(psi)).mean; }

double g2_zero(const DensityMatrix& rho) { return g2_from(photon_distribution(rho)); }
double g2_zero(const FockVector& psi) { return g2_from(photon_distribution(psi)); }

DensityMatrix apply_loss(const DensityMatrix& rho, double eta) {
  if (eta < 0.0 || eta > 1.0) throw UsageError("transmissivity must lie in [0, 1]");
  if (eta == 1.0) return rho;
  const int dim = rho.dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  const double log_eta = std::log(eta);  // -inf at eta = 0, handled below
  const double log_loss = std::log1p(-eta);
  auto log_binom = [](int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  };
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m < dim; ++m) {
      const Complex r = rho(n, m);
      if (r == Complex{}) continue;
      for (int k = 0; k <= std::min(n, m); ++k) {
        const double kept = 0.5 * (n + m) - k;
        if (eta == 0.0 && kept > 0.0) continue;
        double lw = 0.5 * (log_binom(n, k) + log_binom(m, k)) + k * log_loss;
        if (kept > 0.0) lw += kept * log_eta;
        out(n - k, m - k) += std::exp(lw) * r;
      }
    }
  }
  return DensityMatrix(std::move(out));
}

}  // namespace strongcat
