#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "strongcat/errors.hpp"
#include "strongcat/spectrometer.hpp"

using namespace strongcat;

namespace {

std::vector<ShotRecord> only(const std::vector<ShotRecord>& shots, ShotSource src) {
  std::vector<ShotRecord> out;
  for (const auto& s : shots) {
    if (s.truth == src) out.push_back(s);
  }
  return out;
}

bool near_any(double x, std::initializer_list<double> targets, double tol) {
  for (double t : targets) {
    if (std::abs(x - t) <= tol) return true;
  }
  return false;
}

}  // namespace

TEST(SimulateShots, NoiselessCorrelatedShotsLieOnLine) {
  QsModel m;
  m.hhg_fraction = 1.0;
  m.noise_ir = 1e-12;
  m.noise_hh = 1e-12;
  m.shots = 5000;
  const auto s = simulate_shots(m);
  // raw IR = ir_photons - q_eff * raw HH exactly
  for (const auto& r : s.shots) {
    EXPECT_NEAR(r.s_ir * s.ir_scale, m.ir_photons - m.q_eff * r.s_hh * s.hh_scale, 1e-6);
  }
  const auto fit = fit_diagonal(s.shots);
  const auto sel = select_diagonal(s.shots, 1e-6, fit);
  EXPECT_EQ(sel.size(), s.shots.size());
}

TEST(SimulateShots, BackgroundIsUncorrelated) {
  QsModel m;
  m.hhg_fraction = 0.0;
  m.shots = 10000;
  EXPECT_LT(std::abs(pearson(simulate_shots(m).shots)), 0.05);
}

TEST(SimulateShots, MeansNormalizedAndDeterministic) {
  QsModel m;
  m.shots = 20000;
  const auto a = simulate_shots(m);
  double ir = 0.0, hh = 0.0;
  for (const auto& s : a.shots) {
    EXPECT_GE(s.s_ir, 0.0);
    EXPECT_GE(s.s_hh, 0.0);
    ir += s.s_ir;
    hh += s.s_hh;
  }
  EXPECT_NEAR(ir / m.shots, 1.0, 2.0 / std::sqrt(m.shots));
  EXPECT_NEAR(hh / m.shots, 1.0, 2.0 / std::sqrt(m.shots));

  QsModel threaded = m;
  threaded.threads = 3;
  const auto b = simulate_shots(threaded);
  ASSERT_EQ(a.shots.size(), b.shots.size());
  for (std::size_t i = 0; i < a.shots.size(); ++i) {
    EXPECT_EQ(a.shots[i].s_ir, b.shots[i].s_ir);
    EXPECT_EQ(a.shots[i].s_hh, b.shots[i].s_hh);
  }
  QsModel other = m;
  other.seed = 2;
  EXPECT_NE(simulate_shots(other).shots[0].s_ir, a.shots[0].s_ir);
}

TEST(SimulateShots, ModelValidation) {
  QsModel m;
  m.shots = 10;
  EXPECT_THROW(simulate_shots(m), UsageError);
  m.shots = 1000;
  m.hhg_fraction = 1.5;
  EXPECT_THROW(simulate_shots(m), UsageError);
  m.hhg_fraction = 0.5;
  m.noise_ir = 0.0;
  EXPECT_THROW(simulate_shots(m), UsageError);
}

TEST(SelectDiagonal, DefaultModelAnticorrelationAndPrecision) {
  const auto s = simulate_shots(QsModel{});
  const auto fit = fit_diagonal(s.shots);
  const auto sel = select_diagonal(s.shots, 0.15, fit);
  EXPECT_LE(pearson(sel), -0.9);
  EXPECT_GE(hhg_precision(sel), 0.9);
  // hidden-truth oracle: the correlated subset itself is strongly anticorrelated
  EXPECT_LE(pearson(only(s.shots, ShotSource::hhg)), -0.9);
}

TEST(SelectDiagonal, WidthMonotonicity) {
  QsModel m;
  m.shots = 30000;
  const auto s = simulate_shots(m);
  const auto fit = fit_diagonal(s.shots);
  std::size_t last_count = 0;
  double last_precision = 1.0;
  for (double w : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
    const auto sel = select_diagonal(s.shots, w, fit);
    EXPECT_GE(sel.size(), last_count);
    const double p = hhg_precision(sel);
    EXPECT_LE(p, last_precision + 1e-12);
    last_count = sel.size();
    last_precision = p;
  }
}

TEST(SelectDiagonal, Errors) {
  const std::vector<ShotRecord> shots{{1.0, 0.0, ShotSource::hhg}, {0.0, 1.0, ShotSource::hhg}, {0.5, 0.5, ShotSource::hhg}};
  EXPECT_THROW(select_diagonal(shots, 0.0), UsageError);
  DiagonalFit far;
  far.n_ir = 1.0;
  far.mean_ir = 100.0;
  EXPECT_THROW(select_diagonal(shots, 0.1, far), EmptySelection);
  EXPECT_THROW(fit_diagonal({}), EmptySelection);
}

TEST(ConditionedPir, SingleOrderSpacing) {
  for (double q : {11.0, 15.0}) {
    QsModel m;
    m.q_eff = q;
    const auto s = simulate_shots(m);
    const auto fit = fit_diagonal(s.shots);
    const auto pir = conditioned_pir(select_diagonal(s.shots, 0.15, fit), fit, s.ir_scale);
    EXPECT_NEAR(peak_spacing(pir), q, 0.05 * q);
    EXPECT_GE(pir_peaks(pir).size(), 3u);
  }
}

TEST(ConditionedPir, MixtureShowsEachOrder) {
  QsModel m;
  m.q_orders = {11, 13, 15};
  const auto s = simulate_shots(m);
  const auto fit = fit_diagonal(s.shots);
  const auto pir = conditioned_pir(select_diagonal(s.shots, 0.15, fit), fit, s.ir_scale);
  // single-photon absorption peaks, within one quantum of the generating orders
  int first_order = 0;
  for (double c : pir_peaks(pir)) {
    if (c > 5.0 && c < 18.0) {
      EXPECT_TRUE(near_any(c, {11.0, 13.0, 15.0}, 1.0)) << c;
      ++first_order;
    }
  }
  EXPECT_EQ(first_order, 3);
}

TEST(ConditionedPir, ContinuousLossIsSinglePeaked) {
  QsModel m;
  m.absorption = Absorption::continuous;
  const auto s = simulate_shots(m);
  const auto fit = fit_diagonal(s.shots);
  const auto pir = conditioned_pir(select_diagonal(s.shots, 0.15, fit), fit, s.ir_scale);
  EXPECT_EQ(pir_peaks(pir).size(), 1u);
  double total = 0.0;
  for (double p : pir.probability) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(ConditionedPir, NeedsThousandShots) {
  std::vector<ShotRecord> few(10, ShotRecord{1.0, 1.0, ShotSource::hhg});
  EXPECT_THROW(conditioned_pir(few, DiagonalFit{}, 100.0), UsageError);
}

TEST(ShotsCsv, HeaderAndRows) {
  QsModel m;
  m.shots = 1000;
  const auto s = simulate_shots(m);
  const auto fit = fit_diagonal(s.shots);
  std::ostringstream os;
  write_shots_csv(os, s.shots, fit, 0.15);
  const std::string out = os.str();
  EXPECT_EQ(out.rfind("s_ir,s_hh,truth,selected\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(out.begin(), out.end(), '\n')), s.shots.size() + 1);
}
