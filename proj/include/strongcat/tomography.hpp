#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "strongcat/fock.hpp"
#include "strongcat/wigner.hpp"

namespace strongcat {

/// Phase-tagged quadrature samples x_phi = cos(phi) x + sin(phi) p.
struct HomodyneTrace {
  struct Entry {
    double phi = 0.0;
    std::vector<double> samples;
  };
  std::vector<Entry> entries;

  std::size_t total_samples() const;

  /// "phi,x" header then one row per sample, full double precision.
  void write_csv(std::ostream& os) const;
  /// Rows are grouped by consecutive equal phi. Throws FormatError on malformed rows.
  static HomodyneTrace read_csv(std::istream& is);
};

/// n uniformly spaced phases over [0, span).
std::vector<double> uniform_phases(int n, double span = kPi);

/// <x_phi|rho|x_phi> = sum_nm rho_nm e^{-i(n-m)phi} psi_n(x) psi_m(x).
double quadrature_pdf(const DensityMatrix& rho, double phi, double x);

struct SamplingOptions {
  /// Detector efficiency, modelled as loss before an ideal detector.
  double efficiency = 1.0;
  int threads = 1;
};

/// Inverse-CDF sampling of quadrature_pdf, one mt19937_64 stream per phase seeded from
/// (seed, phase index) so results do not depend on the thread count.
HomodyneTrace sample_homodyne(const DensityMatrix& rho, std::span<const double> phases, int shots_per_phase,
                              std::uint64_t seed, const SamplingOptions& opts = {});

struct MaxLikOptions {
  double bin_width = 0.05;
};

struct MaxLikResult {
  DensityMatrix rho;
  /// Log-likelihood per sample after each accepted iteration, starting with the initial guess.
  std::vector<double> log_likelihood;
  int iterations = 0;
  /// Steps that had to be diluted to keep the likelihood from falling.
  int diluted_steps = 0;
  /// Bins merged after a projector probability underflowed.
  int merged_bins = 0;
};

/// Iterative rho <- N[R rho R] over binned quadrature projectors, starting from I/n_trunc.
/// A step that lowers the likelihood is replaced by the diluted map R_e = (1 + e R)/(1 + e)
/// with e halved until it does not. Stops once the relative likelihood change falls below
/// tol. Throws InsufficientPhases when the phases leave a gap wider than pi/2 modulo pi,
/// UsageError with fewer than 10 n_trunc^2 samples, IllConditioned when a projector
/// probability underflows twice, NonConvergence after max_iter iterations.
MaxLikResult maxlik_reconstruct(const HomodyneTrace& trace, int n_trunc, int max_iter = 5000, double tol = 1e-9,
                                const MaxLikOptions& opts = {});

/// Filtered back-projection of per-phase histograms with a ramp filter cut at |k| = cutoff.
/// Values follow the WignerGrid convention. Throws InsufficientPhases below 12 distinct
/// phases modulo pi.
WignerGrid inverse_radon(const HomodyneTrace& trace, const GridSpec& grid, double cutoff = 4.0,
                         double bin_width = 0.05);

/// W on a grid from the Fock-basis oracle.
WignerGrid wigner_grid_from_rho(const DensityMatrix& rho, const GridSpec& grid, int threads = 1);

/// (Tr sqrt(sqrt(a) b sqrt(a)))^2. Throws UsageError on differing truncations.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

nlohmann::json to_json(const DensityMatrix& rho);
/// Throws FormatError on malformed input; the result is validated.
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

}  // namespace strongcat
