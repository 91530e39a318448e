#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "strongcat/fock.hpp"
#include "strongcat/states.hpp"

namespace strongcat {

// Wigner functions are normalized over the complex plane, int W(beta) d^2beta = 1,
// with d^2beta = d(Re beta) d(Im beta). The vacuum peak is 2/pi.

/// (2/pi) exp(-2|beta - alpha|^2).
double wigner_coherent(CoherentAmplitude alpha, CoherentAmplitude beta);

/// (2/pi) (-1)^n exp(-2|beta|^2) L_n(4|beta|^2).
double wigner_fock(int n, CoherentAmplitude beta);

/// Anisotropic Gaussian centred at alpha; Var(Re beta) = e^{-2k}/4, Var(Im beta) = e^{2k}/4.
double wigner_squeezed(const SqueezeParams& params, CoherentAmplitude beta);

/// Wigner function of an arbitrary coherent superposition, assembled from the
/// cross kernels W_{|a><g|}(beta) = (2/pi) <g|a> exp(-2 (beta - a)(conj(beta) - conj(g))).
/// Throws DegenerateSuperposition when the state norm underflows.
double wigner_css(const CoherentSuperposition& state, CoherentAmplitude beta);

/// Closed form for |alpha + chi> - xi |alpha>, xi = <alpha|alpha + chi>, normalized by
/// 1 - exp(-|chi|^2). Throws DegenerateSuperposition when chi -> 0.
double wigner_shifted_cat(CoherentAmplitude alpha, CoherentAmplitude chi, CoherentAmplitude beta);

/// Fock-basis evaluation sum_mn rho_mn W_{|m><n|}(beta).
double wigner_from_rho(const DensityMatrix& rho, CoherentAmplitude beta);

/// Rectangular sampling of W on the (x, p) quadrature plane.
///
/// values(j, i) holds W(beta) at x = x(i), p = p(j), beta = (x + ip)/sqrt(2).
struct WignerGrid {
  double x_min = -5.0, x_max = 5.0;
  double p_min = -5.0, p_max = 5.0;
  int nx = 101, np = 101;
  Eigen::MatrixXd values;

  double x(int i) const;
  double p(int j) const;
  double dx() const;
  double dp() const;

  /// Riemann sum of W over the grid in the d^2beta = dx dp / 2 measure.
  double integral() const;
  double max_abs() const;

  /// Header row of x values, then one row per p: "p, W(x_0, p), ...".
  void write_csv(std::ostream& os) const;
  /// Ranges, sizes, state descriptor and the quadrature convention tag.
  nlohmann::json metadata(const std::string& state_descriptor) const;
};

struct GridSpec {
  double x_min = -5.0, x_max = 5.0;
  double p_min = -5.0, p_max = 5.0;
  int nx = 101, np = 101;
};

/// Evaluates w(beta) on the grid; rows are partitioned across `threads` workers.
WignerGrid evaluate_wigner(const GridSpec& spec, const std::function<double(CoherentAmplitude)>& w,
                           int threads = 1);

inline constexpr const char* kQuadratureConvention = "x=(a+a†)/√2";

}  // namespace strongcat
