#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace strongcat {

enum class ShotSource { hhg, background };

/// One laser shot: IR and harmonic signals, each divided by its population mean.
struct ShotRecord {
  double s_ir = 0.0;
  double s_hh = 0.0;
  ShotSource truth = ShotSource::background;  // hidden label, for validation only
};

enum class Absorption {
  /// Each harmonic photon removes an integer number of IR photons drawn from q_orders.
  discrete,
  /// The IR loss is q_eff times a continuous harmonic yield.
  continuous,
};

/// Two-population shot model. Correlated shots emit k ~ Poisson(hh_photons) harmonic
/// photons and lose the corresponding IR quanta; background shots are independent
/// Gaussians with the same means and variances as the correlated population.
struct QsModel {
  /// Harmonic orders drawn with equal probability per emitted photon; empty means {q_eff}.
  std::vector<int> q_orders;
  double q_eff = 11.0;
  Absorption absorption = Absorption::discrete;
  double hhg_fraction = 0.7;
  /// IR photons per shot before absorption, in the same quanta as the loss.
  double ir_photons = 200.0;
  double hh_photons = 4.0;
  /// Relative IR fluctuation (times ir_photons) and harmonic fluctuation (times hh_photons).
  double noise_ir = 0.0025;
  double noise_hh = 0.05;
  int shots = 100000;
  std::uint64_t seed = 1;
  int threads = 1;

  /// Throws UsageError for probabilities outside [0, 1], non-positive scales or orders,
  /// or fewer than 1000 shots.
  void validate() const;
  double mean_order() const;
};

struct ShotSample {
  std::vector<ShotRecord> shots;
  /// Population means the raw signals were divided by: IR photons and harmonic photons.
  double ir_scale = 0.0;
  double hh_scale = 0.0;
};

/// Shots are generated in chunks of 4096, each with its own mt19937_64 stream seeded from
/// (seed, chunk index); the output does not depend on the thread count.
ShotSample simulate_shots(const QsModel& model);

/// Total-least-squares line through the shot cloud in standardized coordinates
/// z = (s - mean) / std. The residual of a shot is its perpendicular distance to the line.
struct DiagonalFit {
  double mean_ir = 1.0, mean_hh = 1.0;
  double sd_ir = 1.0, sd_hh = 1.0;
  /// Unit normal (n_ir, n_hh) of the line in z coordinates.
  double n_ir = 0.0, n_hh = 0.0;

  double residual(const ShotRecord& s) const;
  /// s_ir on the line where the harmonic signal vanishes.
  double ir_at_zero_harmonics() const;
};

/// Throws EmptySelection with fewer than two shots or a degenerate cloud.
DiagonalFit fit_diagonal(const std::vector<ShotRecord>& shots);

/// Shots whose |residual| <= width (standardized units) around the fitted line.
/// Throws UsageError for width <= 0 and EmptySelection when no shot passes.
std::vector<ShotRecord> select_diagonal(const std::vector<ShotRecord>& shots, double width,
                                        const DiagonalFit& fit);
std::vector<ShotRecord> select_diagonal(const std::vector<ShotRecord>& shots, double width);

/// Unit-width histogram of the IR photon loss ir_scale * (s_ref - s_ir) with s_ref the
/// fitted IR level at zero harmonic signal. Bin k is centred on the integer lo + k.
struct PirHistogram {
  int lo = 0;
  std::vector<double> probability;

  double center(std::size_t k) const { return lo + static_cast<double>(k); }
  void write_csv(std::ostream& os) const;
};

/// Throws UsageError with fewer than 1000 selected shots.
PirHistogram conditioned_pir(const std::vector<ShotRecord>& selected, const DiagonalFit& fit, double ir_scale);

/// Lag of the strongest local maximum of the mean-removed histogram autocorrelation,
/// refined by a parabola through its neighbours. Returns 0 when there is none.
double peak_spacing(const PirHistogram& pir);

/// Centers of local maxima holding at least min_fraction of the largest bin.
std::vector<double> pir_peaks(const PirHistogram& pir, double min_fraction = 0.1);

double pearson(const std::vector<ShotRecord>& shots);

/// Fraction of shots with truth == hhg. Throws EmptySelection on an empty list.
double hhg_precision(const std::vector<ShotRecord>& shots);

/// "s_ir,s_hh,truth,selected" rows; selected marks |residual| <= width.
void write_shots_csv(std::ostream& os, const std::vector<ShotRecord>& shots, const DiagonalFit& fit, double width);

}  // namespace strongcat
