#include <cmath>

#include <gtest/gtest.h>

#include "strongcat/errors.hpp"
#include "strongcat/sfa.hpp"

using namespace strongcat;

namespace {

// Xe in an 800 nm, 8e13 W/cm^2 pulse; 30 fs intensity FWHM of a sin^2 field envelope.
LaserPulse xenon_pulse() {
  LaserPulse p;
  p.F0 = std::sqrt(8e13 / 3.50944758e16);
  p.omega = 1239.84198 / 800.0 / 27.211386245988;
  p.n_cycles = std::round(30.0 / 0.024188843265857 / 0.3634 / p.period());
  p.steps_per_cycle = 128;
  return p;
}

double xenon_ip() { return 12.13 / 27.211386245988; }

LaserPulse cw_pulse(int cycles) {
  LaserPulse p;
  p.F0 = 0.05;
  p.omega = 0.057;
  p.n_cycles = cycles;
  p.envelope = Envelope::flat;
  return p;
}

}  // namespace

TEST(Ponderomotive, Examples) {
  EXPECT_NEAR(ponderomotive_energy(1e14, 0.8), 5.97, 0.005);
  EXPECT_EQ(ponderomotive_energy(0.0, 0.8), 0.0);
  EXPECT_NEAR(ponderomotive_energy(8e13, 0.8), 4.78, 0.005);
}

TEST(Ponderomotive, AtomicUnitCrossCheck) {
  // F0^2 / (4 omega^2) with F0 from I = 3.51e16 F0^2 and omega = 0.05695 at 800 nm
  for (double intensity : {5e13, 1e14, 3e14}) {
    const double f2 = intensity / 3.50944758e16;
    const double w = 45.5633525 / 800.0;
    const double up_ev = f2 / (4 * w * w) * 27.211386245988;
    EXPECT_NEAR(ponderomotive_energy(intensity, 0.8) / up_ev, 1.0, 2e-3);
  }
}

TEST(Keldysh, Examples) {
  EXPECT_DOUBLE_EQ(keldysh_gamma(2.0, 1.0), 1.0);
  EXPECT_NEAR(keldysh_gamma(12.13, ponderomotive_energy(8e13, 0.8)), 1.13, 0.005);
  EXPECT_LT(keldysh_gamma(12.13, 1e12), 1e-5);
  EXPECT_THROW(keldysh_gamma(12.13, 0.0), ZeroField);
}

TEST(Cutoff, Examples) {
  EXPECT_DOUBLE_EQ(cutoff_energy(0.0, 10.0), 13.2);
  const double c = cutoff_energy(ponderomotive_energy(8e13, 0.8), 12.13);
  EXPECT_NEAR(c, 31.2, 0.1);
  EXPECT_NEAR(c / 1.55, 20.0, 0.2);
}

TEST(Units, RoundTrips) {
  EXPECT_NEAR(units::field_to_intensity(units::intensity_to_field(8e13)), 8e13, 1e-2);
  EXPECT_NEAR(units::wavelength_nm_to_omega(800.0), 0.05695, 1e-5);
  EXPECT_NEAR(units::au_to_fs(units::fs_to_au(30.0)), 30.0, 1e-12);
  EXPECT_THROW(parse_envelope("boxcar"), UsageError);
  EXPECT_EQ(parse_envelope(to_string(Envelope::gaussian)), Envelope::gaussian);
}

TEST(Pulse, VectorPotentialVanishesAtEnds) {
  LaserPulse p = xenon_pulse();
  for (double cep : {0.0, 0.7, kPi / 2}) {
    p.cep = cep;
    const double scale = p.F0 / p.omega;
    EXPECT_LT(std::abs(p.vector_potential(0.0)), 1e-10 * scale);
    EXPECT_LT(std::abs(p.vector_potential(p.duration())), 1e-10 * scale);
  }
}

TEST(Pulse, ZeroDcField) {
  LaserPulse p = xenon_pulse();
  p.n_cycles = 5;
  p.cep = 0.3;
  // composite Simpson on a fine grid
  const int n = 20000;
  const double h = p.duration() / n;
  double s = p.field(0.0) + p.field(p.duration());
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * p.field(i * h);
  s *= h / 3.0;
  EXPECT_LT(std::abs(s), 1e-10 * p.F0 * p.duration());
}

TEST(Pulse, FieldIsMinusDerivativeOfVectorPotential) {
  const LaserPulse p = xenon_pulse();
  const double h = 1e-4;
  for (double t : {10.0, 700.0, 1500.0}) {
    const double num = -(p.vector_potential(t + h) - p.vector_potential(t - h)) / (2 * h);
    EXPECT_NEAR(p.field(t), num, 1e-8);
  }
}

TEST(Classical, ZeroCrossingIonizationNeverReturns) {
  const auto p = cw_pulse(8);
  // E = F0 cos(omega (t - T/2)) vanishes a quarter period after the centre
  EXPECT_THROW(classical_return(p, 0.5 * p.duration() + 0.25 * p.period()), NoReturns);
}

TEST(Classical, MaximumReturnEnergyIs317Up) {
  const auto p = cw_pulse(8);
  const auto returns = classical_return_spectrum(p);
  double emax = 0.0;
  for (const auto& r : returns) emax = std::max(emax, r.energy);
  EXPECT_NEAR(emax / p.ponderomotive() / 3.17, 1.0, 0.005);
}

TEST(Classical, NoFieldNoReturns) {
  auto p = cw_pulse(8);
  p.F0 = 0.0;
  EXPECT_THROW(classical_return_spectrum(p), ZeroField);
}

TEST(Sfa, ZeroFieldGivesZeroDipole) {
  LaserPulse p = xenon_pulse();
  p.F0 = 0.0;
  p.n_cycles = 4;
  const auto d = sfa_dipole(p, {xenon_ip()});
  for (double v : d.d) EXPECT_EQ(v, 0.0);
  const auto s = harmonic_shifts(d, 10, 1.0, 1.0);
  for (int q = 1; q <= 10; ++q) EXPECT_EQ(s[q], Complex{});
}

TEST(Sfa, GridTooCoarse) {
  LaserPulse p = xenon_pulse();
  p.steps_per_cycle = 32;
  EXPECT_THROW(sfa_dipole(p, {xenon_ip()}), GridTooCoarse);
}

TEST(Sfa, OddHarmonicsOnly) {
  const auto d = sfa_dipole(xenon_pulse(), {xenon_ip()});
  const auto s = harmonic_shifts(d, 24, 1.0, 1.0);
  for (int q = 2; q <= 22; q += 2) {
    const double neighbour = std::min(std::norm(s[q - 1]), std::norm(s[q + 1]));
    EXPECT_LT(std::norm(s[q]), 1e-4 * neighbour) << "q=" << q;
  }
}

TEST(Sfa, PlateauEdgeNearCutoffLaw) {
  const auto p = xenon_pulse();
  const auto d = sfa_dipole(p, {xenon_ip()});
  const auto s = harmonic_shifts(d, 40, 1.0, 1.0);
  const int edge = plateau_edge(s);
  const double cutoff_q = cutoff_energy(p.ponderomotive(), xenon_ip()) / p.omega;
  EXPECT_NEAR(edge, 20, 2);
  EXPECT_NEAR(edge, cutoff_q, 2.0);
}

TEST(Sfa, PlateauMatchesClassicalReturns) {
  auto p = xenon_pulse();
  const auto d = sfa_dipole(p, {xenon_ip()});
  const int edge = plateau_edge(harmonic_shifts(d, 40, 1.0, 1.0));
  const auto returns = classical_return_spectrum(p, 256);
  double emax = 0.0;
  for (const auto& r : returns) emax = std::max(emax, r.energy);
  EXPECT_NEAR(edge, (emax + xenon_ip()) / p.omega, 2.0);
}

TEST(Sfa, ThreadCountDoesNotChangeOutput) {
  auto p = xenon_pulse();
  p.n_cycles = 6;
  SfaOptions one, many;
  many.threads = 3;
  EXPECT_EQ(sfa_dipole(p, {xenon_ip()}, one).d, sfa_dipole(p, {xenon_ip()}, many).d);
}

TEST(Shifts, LinearInAtomNumberAndCoupling) {
  auto p = xenon_pulse();
  p.n_cycles = 6;
  const auto d = sfa_dipole(p, {xenon_ip()});
  const auto s1 = harmonic_shifts(d, 15, 0.3, 1000.0);
  const auto s2 = harmonic_shifts(d, 15, 0.3, 2000.0);
  const auto s3 = harmonic_shifts(d, 15, 0.9, 1000.0);
  const auto s4 = s1.scaled_atoms(2000.0);
  for (int q = 1; q <= 15; ++q) {
    EXPECT_EQ(s2[q], 2.0 * s1[q]);
    EXPECT_LT(std::abs(s3[q] - 3.0 * s1[q]), 1e-12 * std::abs(s3[q]) + 1e-300);
    EXPECT_LT(std::abs(s4[q] - s2[q]), 1e-12 * std::abs(s2[q]) + 1e-300);
  }
}

TEST(Shifts, ZeroDipole) {
  DipoleSeries d{{0.0, 1.0, 2.0, 3.0}, {0.0, 0.0, 0.0, 0.0}, 0.1};
  const auto s = harmonic_shifts(d, 3, 1.0, 1.0);
  for (int q = 1; q <= 3; ++q) EXPECT_EQ(s[q], Complex{});
}

TEST(Shifts, NyquistViolation) {
  DipoleSeries d{{0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 0.0, 0.0}, 0.5};
  EXPECT_NO_THROW(harmonic_shifts(d, 6, 1.0, 1.0));
  EXPECT_THROW(harmonic_shifts(d, 7, 1.0, 1.0), NyquistViolation);
}

TEST(Shifts, CalibratedFundamental) {
  auto p = xenon_pulse();
  p.n_cycles = 8;
  const auto d = sfa_dipole(p, {xenon_ip()});
  const double g = calibrate_coupling(d, 0.2, 1e4);
  const auto s = harmonic_shifts(d, 11, g, 1e4);
  EXPECT_NEAR(std::abs(s[1]), 0.2, 1e-12);
}

TEST(Shifts, ModelPlateau) {
  const auto s = model_shifts(-0.2, 0.03, 11, 15);
  EXPECT_EQ(s[1], Complex(-0.2));
  for (int q = 3; q <= 11; q += 2) EXPECT_EQ(s[q], Complex(0.03));
  for (int q = 2; q <= 15; q += 2) EXPECT_EQ(s[q], Complex{});
  EXPECT_EQ(s[13], Complex{});
  EXPECT_EQ(plateau_edge(s, 3), 11);
}
