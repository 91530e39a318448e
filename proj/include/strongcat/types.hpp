#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace strongcat {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Complex amplitude alpha of a coherent state |alpha>.
///
/// Quadrature convention throughout the library: x = (a + a^dag)/sqrt(2),
/// p = (a - a^dag)/(i sqrt(2)), so the vacuum has dx = dp = 1/sqrt(2) and the
/// coherent state is centred at (x0, p0) = sqrt(2) (Re alpha, Im alpha).
class CoherentAmplitude {
 public:
  constexpr CoherentAmplitude() = default;
  constexpr CoherentAmplitude(double re, double im = 0.0) : z_(re, im) {}
  constexpr CoherentAmplitude(Complex z) : z_(z) {}

  static CoherentAmplitude from_polar(double magnitude, double theta) {
    return {std::polar(magnitude, theta)};
  }
  static CoherentAmplitude from_quadratures(double x0, double p0) {
    return {x0 / std::numbers::sqrt2, p0 / std::numbers::sqrt2};
  }

  constexpr Complex value() const { return z_; }
  constexpr double re() const { return z_.real(); }
  constexpr double im() const { return z_.imag(); }
  double magnitude() const { return std::abs(z_); }
  double phase() const { return std::arg(z_); }
  double mean_photon() const { return std::norm(z_); }
  double x0() const { return std::numbers::sqrt2 * z_.real(); }
  double p0() const { return std::numbers::sqrt2 * z_.imag(); }
  bool finite() const { return std::isfinite(z_.real()) && std::isfinite(z_.imag()); }

  friend constexpr CoherentAmplitude operator+(CoherentAmplitude a, CoherentAmplitude b) {
    return {a.z_ + b.z_};
  }
  friend constexpr CoherentAmplitude operator-(CoherentAmplitude a, CoherentAmplitude b) {
    return {a.z_ - b.z_};
  }
  friend constexpr CoherentAmplitude operator-(CoherentAmplitude a) { return {-a.z_}; }
  friend constexpr bool operator==(CoherentAmplitude a, CoherentAmplitude b) = default;

 private:
  Complex z_{};
};

/// Phase-space point beta = (x + i p)/sqrt(2) at which Wigner functions are evaluated.
inline CoherentAmplitude phase_space_point(double x, double p) {
  return CoherentAmplitude::from_quadratures(x, p);
}

}  // namespace strongcat
