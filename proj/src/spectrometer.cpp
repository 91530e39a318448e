#include "strongcat/spectrometer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <thread>

#include "strongcat/errors.hpp"

namespace strongcat {

namespace {

constexpr int kChunk = 4096;

struct Moments {
  double mean_ir, sd_ir, mean_hh, sd_hh;
};

// Means and spreads of the correlated population, which the background copies.
Moments correlated_moments(const QsModel& m) {
  const double q1 = m.mean_order();
  double q2 = q1 * q1;
  if (m.absorption == Absorption::discrete && !m.q_orders.empty()) {
    q2 = 0.0;
    for (int q : m.q_orders) q2 += static_cast<double>(q) * q;
    q2 /= static_cast<double>(m.q_orders.size());
  }
  const double ir_noise = m.noise_ir * m.ir_photons;
  const double hh_noise = m.noise_hh * m.hh_photons;
  return {m.ir_photons - m.hh_photons * q1, std::sqrt(m.hh_photons * q2 + ir_noise * ir_noise), m.hh_photons,
          std::sqrt(m.hh_photons + hh_noise * hh_noise)};
}

void generate_chunk(const QsModel& m, const Moments& bg, int chunk, std::vector<ShotRecord>& out) {
  std::seed_seq seq{static_cast<std::uint32_t>(m.seed), static_cast<std::uint32_t>(m.seed >> 32),
                    static_cast<std::uint32_t>(chunk)};
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::poisson_distribution<int> emitted(m.hh_photons);
  std::gamma_distribution<double> yield(m.hh_photons, 1.0);
  const std::vector<int> orders = m.q_orders.empty() ? std::vector<int>{} : m.q_orders;
  std::uniform_int_distribution<std::size_t> pick(0, orders.empty() ? 0 : orders.size() - 1);
  const double q1 = m.mean_order();

  const int begin = chunk * kChunk;
  const int end = std::min(m.shots, begin + kChunk);
  for (int i = begin; i < end; ++i) {
    ShotRecord& s = out[static_cast<std::size_t>(i)];
    if (uniform(gen) < m.hhg_fraction) {
      double harmonics = 0.0, loss = 0.0;
      if (m.absorption == Absorption::discrete) {
        const int k = emitted(gen);
        harmonics = k;
        for (int j = 0; j < k; ++j) loss += orders.empty() ? m.q_eff : orders[pick(gen)];
      } else {
        // Gamma yield: same mean and variance as Poisson(hh_photons), no mass at zero
        harmonics = yield(gen);
        loss = q1 * harmonics;
      }
      s.s_ir = m.ir_photons - loss + m.noise_ir * m.ir_photons * normal(gen);
      s.s_hh = harmonics + m.noise_hh * m.hh_photons * normal(gen);
      s.truth = ShotSource::hhg;
    } else {
      s.s_ir = bg.mean_ir + bg.sd_ir * normal(gen);
      s.s_hh = bg.mean_hh + bg.sd_hh * normal(gen);
      s.truth = ShotSource::background;
    }
    s.s_ir = std::max(0.0, s.s_ir);
    s.s_hh = std::max(0.0, s.s_hh);
  }
}

}  // namespace

void QsModel::validate() const {
  if (shots < 1000) throw UsageError("the shot model needs at least 1000 shots");
  if (hhg_fraction < 0.0 || hhg_fraction > 1.0) throw UsageError("hhg_fraction must lie in [0, 1]");
  if (!(q_eff > 0.0) || !(ir_photons > 0.0) || !(hh_photons > 0.0)) {
    throw UsageError("q_eff, ir_photons and hh_photons must be positive");
  }
  if (!(noise_ir > 0.0) || !(noise_hh > 0.0)) throw UsageError("noise scales must be positive");
  for (int q : q_orders) {
    if (q < 1) throw UsageError("harmonic orders must be positive");
  }
  if (threads < 1) throw UsageError("threads must be >= 1");
}

double QsModel::mean_order() const {
  if (q_orders.empty()) return q_eff;
  return std::accumulate(q_orders.begin(), q_orders.end(), 0.0) / static_cast<double>(q_orders.size());
}

ShotSample simulate_shots(const QsModel& model) {
  model.validate();
  const Moments bg = correlated_moments(model);
  ShotSample out;
  out.shots.resize(static_cast<std::size_t>(model.shots));
  const int chunks = (model.shots + kChunk - 1) / kChunk;
  const int workers = std::min(model.threads, chunks);
  if (workers <= 1) {
    for (int c = 0; c < chunks; ++c) generate_chunk(model, bg, c, out.shots);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int c = w; c < chunks; c += workers) generate_chunk(model, bg, c, out.shots);
      });
    }
  }
  double ir = 0.0, hh = 0.0;
  for (const auto& s : out.shots) {
    ir += s.s_ir;
    hh += s.s_hh;
  }
  out.ir_scale = ir / model.shots;
  out.hh_scale = hh / model.shots;
  for (auto& s : out.shots) {
    s.s_ir /= out.ir_scale;
    s.s_hh /= out.hh_scale;
  }
  return out;
}

double DiagonalFit::residual(const ShotRecord& s) const {
  return n_ir * (s.s_ir - mean_ir) / sd_ir + n_hh * (s.s_hh - mean_hh) / sd_hh;
}

double DiagonalFit::ir_at_zero_harmonics() const {
  if (n_ir == 0.0) throw NumericalError("fitted line is parallel to the IR axis");
  const double z_hh = -mean_hh / sd_hh;
  return mean_ir + sd_ir * (-n_hh * z_hh / n_ir);
}

DiagonalFit fit_diagonal(const std::vector<ShotRecord>& shots) {
  if (shots.size() < 2) throw EmptySelection("need at least two shots to fit the diagonal");
  const double n = static_cast<double>(shots.size());
  DiagonalFit f;
  f.mean_ir = f.mean_hh = 0.0;
  for (const auto& s : shots) {
    f.mean_ir += s.s_ir;
    f.mean_hh += s.s_hh;
  }
  f.mean_ir /= n;
  f.mean_hh /= n;
  double vir = 0.0, vhh = 0.0, cov = 0.0;
  for (const auto& s : shots) {
    const double a = s.s_ir - f.mean_ir, b = s.s_hh - f.mean_hh;
    vir += a * a;
    vhh += b * b;
    cov += a * b;
  }
  if (!(vir > 0.0) || !(vhh > 0.0)) throw EmptySelection("shot cloud has no spread");
  f.sd_ir = std::sqrt(vir / (n - 1));
  f.sd_hh = std::sqrt(vhh / (n - 1));
  // In z coordinates the covariance is [[1, c], [c, 1]]; the line follows the larger
  // eigenvector and its normal the smaller one.
  const double c = cov / std::sqrt(vir * vhh);
  const double h = 1.0 / std::sqrt(2.0);
  f.n_ir = h;
  f.n_hh = c < 0.0 ? h : -h;
  return f;
}

std::vector<ShotRecord> select_diagonal(const std::vector<ShotRecord>& shots, double width, const DiagonalFit& fit) {
  if (!(width > 0.0)) throw UsageError("selection width must be positive");
  std::vector<ShotRecord> out;
  for (const auto& s : shots) {
    if (std::abs(fit.residual(s)) <= width) out.push_back(s);
  }
  if (out.empty()) throw EmptySelection("no shot lies within " + std::to_string(width) + " of the diagonal");
  return out;
}

std::vector<ShotRecord> select_diagonal(const std::vector<ShotRecord>& shots, double width) {
  return select_diagonal(shots, width, fit_diagonal(shots));
}

void PirHistogram::write_csv(std::ostream& os) const {
  os << "ir_photons_absorbed,probability\n";
  for (std::size_t k = 0; k < probability.size(); ++k) os << center(k) << ',' << probability[k] << '\n';
}

PirHistogram conditioned_pir(const std::vector<ShotRecord>& selected, const DiagonalFit& fit, double ir_scale) {
  if (selected.size() < 1000) throw UsageError("P_IR needs at least 1000 selected shots");
  if (!(ir_scale > 0.0)) throw UsageError("IR scale must be positive");
  const double ref = fit.ir_at_zero_harmonics();
  std::vector<double> loss;
  loss.reserve(selected.size());
  for (const auto& s : selected) loss.push_back(ir_scale * (ref - s.s_ir));
  const auto [mn, mx] = std::minmax_element(loss.begin(), loss.end());
  PirHistogram h;
  h.lo = static_cast<int>(std::lround(*mn));
  h.probability.assign(static_cast<std::size_t>(std::lround(*mx) - h.lo + 1), 0.0);
  const double w = 1.0 / static_cast<double>(loss.size());
  for (double l : loss) h.probability[static_cast<std::size_t>(std::lround(l) - h.lo)] += w;
  return h;
}

double peak_spacing(const PirHistogram& pir) {
  const auto& p = pir.probability;
  const std::size_t n = p.size();
  if (n < 4) return 0.0;
  const double mean = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(n);
  std::vector<double> ac(n / 2 + 1, 0.0);
  for (std::size_t lag = 0; lag < ac.size(); ++lag) {
    for (std::size_t i = 0; i + lag < n; ++i) ac[lag] += (p[i] - mean) * (p[i + lag] - mean);
  }
  std::size_t best = 0;
  for (std::size_t lag = 2; lag + 1 < ac.size(); ++lag) {
    if (ac[lag] > ac[lag - 1] && ac[lag] >= ac[lag + 1] && ac[lag] > 0.0 && (best == 0 || ac[lag] > ac[best])) best = lag;
  }
  if (best == 0) return 0.0;
  const double a = ac[best - 1], b = ac[best], c = ac[best + 1];
  const double denom = a - 2.0 * b + c;
  return static_cast<double>(best) + (denom != 0.0 ? 0.5 * (a - c) / denom : 0.0);
}

std::vector<double> pir_peaks(const PirHistogram& pir, double min_fraction) {
  const auto& p = pir.probability;
  std::vector<double> out;
  if (p.empty()) return out;
  const double top = *std::max_element(p.begin(), p.end());
  // local maxima above threshold; neighbours whose valley stays above 75% of the lower
  // one count once, keeping the taller
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double left = k > 0 ? p[k - 1] : 0.0;
    const double right = k + 1 < p.size() ? p[k + 1] : 0.0;
    if (p[k] > left && p[k] >= right && p[k] >= min_fraction * top) {
      if (!idx.empty()) {
        const std::size_t prev = idx.back();
        const double valley = *std::min_element(p.begin() + static_cast<std::ptrdiff_t>(prev), p.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        if (valley >= 0.75 * std::min(p[prev], p[k])) {
          if (p[k] > p[prev]) idx.back() = k;
          continue;
        }
      }
      idx.push_back(k);
    }
  }
  for (std::size_t k : idx) out.push_back(pir.center(k));
  return out;
}

double pearson(const std::vector<ShotRecord>& shots) {
  if (shots.size() < 2) throw EmptySelection("correlation needs at least two shots");
  const double n = static_cast<double>(shots.size());
  double mi = 0.0, mh = 0.0;
  for (const auto& s : shots) {
    mi += s.s_ir;
    mh += s.s_hh;
  }
  mi /= n;
  mh /= n;
  double vi = 0.0, vh = 0.0, c = 0.0;
  for (const auto& s : shots) {
    vi += (s.s_ir - mi) * (s.s_ir - mi);
    vh += (s.s_hh - mh) * (s.s_hh - mh);
    c += (s.s_ir - mi) * (s.s_hh - mh);
  }
  if (!(vi > 0.0) || !(vh > 0.0)) return 0.0;
  return c / std::sqrt(vi * vh);
}

double hhg_precision(const std::vector<ShotRecord>& shots) {
  if (shots.empty()) throw EmptySelection("precision of an empty selection");
  const auto hits = std::count_if(shots.begin(), shots.end(), [](const ShotRecord& s) { return s.truth == ShotSource::hhg; });
  return static_cast<double>(hits) / static_cast<double>(shots.size());
}

void write_shots_csv(std::ostream& os, const std::vector<ShotRecord>& shots, const DiagonalFit& fit, double width) {
  os << "s_ir,s_hh,truth,selected\n";
  for (const auto& s : shots) {
    os << s.s_ir << ',' << s.s_hh << ',' << (s.truth == ShotSource::hhg ? "hhg" : "background") << ','
       << (std::abs(fit.residual(s)) <= width ? 1 : 0) << '\n';
  }
}

}  // namespace strongcat
