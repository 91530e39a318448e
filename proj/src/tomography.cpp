#include "strongcat/tomography.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

#include "strongcat/errors.hpp"
#include "strongcat/special.hpp"

namespace strongcat {

namespace {

// Rows psi_n(x_k) for n < n_states, columns x_k.
Eigen::MatrixXd hermite_matrix(std::span<const double> xs, int n_states) {
  Eigen::MatrixXd h(n_states, static_cast<Eigen::Index>(xs.size()));
  std::vector<double> col(static_cast<std::size_t>(n_states));
  for (std::size_t k = 0; k < xs.size(); ++k) {
    special::hermite_functions(xs[k], col);
    for (int n = 0; n < n_states; ++n) h(n, static_cast<Eigen::Index>(k)) = col[static_cast<std::size_t>(n)];
  }
  return h;
}

// Real part of e^{-i phi n} rho e^{i phi m}; the quadrature density is psi^T M psi.
Eigen::MatrixXd rotated_real(const DensityMatrix& rho, double phi) {
  const int d = rho.dim();
  Eigen::MatrixXd m(d, d);
  for (int n = 0; n < d; ++n) {
    for (int k = 0; k < d; ++k) m(n, k) = (rho(n, k) * std::polar(1.0, -phi * (n - k))).real();
  }
  return m;
}

Eigen::VectorXd pdf_on(const Eigen::MatrixXd& rotated, std::span<const double> xs) {
  const Eigen::MatrixXd h = hermite_matrix(xs, static_cast<int>(rotated.rows()));
  return (h.array() * (rotated * h).array()).colwise().sum().transpose().cwiseMax(0.0);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return out;
}

std::vector<double> sample_phase(const DensityMatrix& rho, double phi, int shots, std::mt19937_64& gen) {
  const Eigen::MatrixXd rot = rotated_real(rho, phi);
  // coarse pass locates the support, the fine pass carries the inverse CDF
  const double reach = std::sqrt(2.0 * rho.dim() + 1.0) + 6.0;
  const auto coarse = linspace(-reach, reach, 1201);
  const Eigen::VectorXd pc = pdf_on(rot, coarse);
  const double floor = 1e-14 * pc.maxCoeff();
  std::size_t lo = 0, hi = coarse.size() - 1;
  while (lo < hi && pc(static_cast<Eigen::Index>(lo)) <= floor) ++lo;
  while (hi > lo && pc(static_cast<Eigen::Index>(hi)) <= floor) --hi;
  const double step = coarse[1] - coarse[0];
  const auto xs = linspace(coarse[lo] - 2.0 * step, coarse[hi] + 2.0 * step, 8192);
  const Eigen::VectorXd pdf = pdf_on(rot, xs);
  std::vector<double> cdf(xs.size(), 0.0);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    cdf[k] = cdf[k - 1] + 0.5 * (xs[k] - xs[k - 1]) * (pdf(static_cast<Eigen::Index>(k - 1)) + pdf(static_cast<Eigen::Index>(k)));
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw NumericalError("quadrature distribution has no weight");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> out(static_cast<std::size_t>(shots));
  for (auto& s : out) {
    const double u = uniform(gen) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) it = std::prev(cdf.end());
    if (it == cdf.begin()) it = std::next(it);
    const auto k = static_cast<std::size_t>(it - cdf.begin());
    const double span = cdf[k] - cdf[k - 1];
    const double frac = span > 0.0 ? (u - cdf[k - 1]) / span : 0.5;
    s = xs[k - 1] + frac * (xs[k] - xs[k - 1]);
  }
  return out;
}

struct FoldedPhase {
  double phi;  // in [0, pi)
  std::vector<double> samples;
};

// Maps every entry into [0, pi) using x_{phi + pi} = -x_phi and pools equal phases.
std::vector<FoldedPhase> fold_phases(const HomodyneTrace& trace) {
  std::vector<FoldedPhase> out;
  for (const auto& e : trace.entries) {
    double phi = std::fmod(e.phi, 2.0 * kPi);
    if (phi < 0.0) phi += 2.0 * kPi;
    double sign = 1.0;
    if (phi >= kPi) {
      phi -= kPi;
      sign = -1.0;
    }
    if (kPi - phi < 1e-9) {
      phi = 0.0;
      sign = -sign;
    }
    auto it = std::find_if(out.begin(), out.end(), [&](const FoldedPhase& f) { return std::abs(f.phi - phi) < 1e-9; });
    if (it == out.end()) {
      out.push_back({phi, {}});
      it = std::prev(out.end());
    }
    for (double x : e.samples) it->samples.push_back(sign * x);
  }
  std::sort(out.begin(), out.end(), [](const FoldedPhase& a, const FoldedPhase& b) { return a.phi < b.phi; });
  return out;
}

// Largest gap between neighbouring phases on the circle of circumference pi.
double widest_gap(const std::vector<FoldedPhase>& phases) {
  if (phases.empty()) return kPi;
  double gap = phases.front().phi + kPi - phases.back().phi;
  for (std::size_t i = 1; i < phases.size(); ++i) gap = std::max(gap, phases[i].phi - phases[i - 1].phi);
  return gap;
}

struct Bins {
  Eigen::MatrixXcd u;                // one projector vector per column, sqrt(bin width) |x_phi>
  std::vector<int> owner;            // bin of each column
  std::vector<double> freq;          // relative frequency per bin
  std::vector<double> center_phi, center_x;  // for merging
};

Bins make_bins(const std::vector<FoldedPhase>& phases, int n_trunc, double width) {
  Bins b;
  std::vector<std::pair<double, double>> cols;  // (phi, x)
  double total = 0.0;
  for (const auto& ph : phases) {
    std::map<long, long> counts;
    for (double x : ph.samples) ++counts[static_cast<long>(std::floor(x / width))];
    for (const auto& [k, c] : counts) {
      const double x = (k + 0.5) * width;
      b.owner.push_back(static_cast<int>(b.freq.size()));
      b.freq.push_back(static_cast<double>(c));
      b.center_phi.push_back(ph.phi);
      b.center_x.push_back(x);
      cols.emplace_back(ph.phi, x);
      total += static_cast<double>(c);
    }
  }
  for (auto& f : b.freq) f /= total;
  b.u.resize(n_trunc, static_cast<Eigen::Index>(cols.size()));
  std::vector<double> psi(static_cast<std::size_t>(n_trunc));
  const double s = std::sqrt(width);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    special::hermite_functions(cols[j].second, psi);
    for (int n = 0; n < n_trunc; ++n) {
      b.u(n, static_cast<Eigen::Index>(j)) = s * psi[static_cast<std::size_t>(n)] * std::polar(1.0, cols[j].first * n);
    }
  }
  return b;
}

// Merges bin j into its nearest neighbour at the same phase.
void merge_bin(Bins& b, int j) {
  int best = -1;
  double dist = 0.0;
  for (int k = 0; k < static_cast<int>(b.freq.size()); ++k) {
    if (k == j || b.freq[static_cast<std::size_t>(k)] < 0.0) continue;
    if (std::abs(b.center_phi[static_cast<std::size_t>(k)] - b.center_phi[static_cast<std::size_t>(j)]) > 1e-12) continue;
    const double d = std::abs(b.center_x[static_cast<std::size_t>(k)] - b.center_x[static_cast<std::size_t>(j)]);
    if (best < 0 || d < dist) {
      best = k;
      dist = d;
    }
  }
  if (best < 0) throw IllConditioned("projector probability underflow in an isolated bin");
  b.freq[static_cast<std::size_t>(best)] += b.freq[static_cast<std::size_t>(j)];
  b.freq[static_cast<std::size_t>(j)] = -1.0;  // retired
  for (auto& o : b.owner) {
    if (o == j) o = best;
  }
}

struct Evaluation {
  Eigen::VectorXd p;  // per bin
  double log_likelihood = 0.0;
  int underflow = -1;
};

Evaluation evaluate(const Bins& b, const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd ru = rho * b.u;
  Evaluation ev;
  ev.p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.freq.size()));
  for (Eigen::Index c = 0; c < b.u.cols(); ++c) {
    ev.p(b.owner[static_cast<std::size_t>(c)]) += b.u.col(c).dot(ru.col(c)).real();
  }
  for (std::size_t j = 0; j < b.freq.size(); ++j) {
    const double f = b.freq[j];
    if (f <= 0.0) continue;
    const double p = ev.p(static_cast<Eigen::Index>(j));
    if (!(p > 1e-300)) {
      ev.underflow = static_cast<int>(j);
      return ev;
    }
    ev.log_likelihood += f * std::log(p);
  }
  return ev;
}

Eigen::MatrixXcd r_operator(const Bins& b, const Evaluation& ev) {
  Eigen::VectorXd w(b.u.cols());
  for (Eigen::Index c = 0; c < b.u.cols(); ++c) {
    const auto j = static_cast<std::size_t>(b.owner[static_cast<std::size_t>(c)]);
    w(c) = b.freq[j] > 0.0 ? b.freq[j] / ev.p(static_cast<Eigen::Index>(j)) : 0.0;
  }
  return b.u * w.asDiagonal() * b.u.adjoint();
}

Eigen::MatrixXcd hermitian_trace_one(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  return h / h.trace().real();
}

double ramp_kernel(double y, double kc) {
  // int_{-kc}^{kc} |k| e^{iky} dk
  const double z = kc * y;
  if (std::abs(z) < 1e-3) return kc * kc * (1.0 - z * z / 4.0 + z * z * z * z / 72.0);
  return 2.0 * (kc * std::sin(z) / y + (std::cos(z) - 1.0) / (y * y));
}

double parse_double(std::string_view s, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw FormatError("homodyne CSV line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::size_t HomodyneTrace::total_samples() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.samples.size();
  return n;
}

void HomodyneTrace::write_csv(std::ostream& os) const {
  os << "phi,x\n";
  char buf[64];
  for (const auto& e : entries) {
    for (double x : e.samples) {
      auto* end = std::to_chars(buf, buf + sizeof(buf), e.phi).ptr;
      *end++ = ',';
      end = std::to_chars(end, buf + sizeof(buf), x).ptr;
      *end++ = '\n';
      os.write(buf, end - buf);
    }
  }
}

HomodyneTrace HomodyneTrace::read_csv(std::istream& is) {
  HomodyneTrace t;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (n == 1 && line.rfind("phi", 0) == 0) continue;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw FormatError("homodyne CSV line " + std::to_string(n) + ": expected phi,x");
    const std::string_view view(line);
    const double phi = parse_double(view.substr(0, comma), n);
    const double x = parse_double(view.substr(comma + 1), n);
    if (t.entries.empty() || t.entries.back().phi != phi) t.entries.push_back({phi, {}});
    t.entries.back().samples.push_back(x);
  }
  return t;
}

std::vector<double> uniform_phases(int n, double span) {
  if (n < 1) throw UsageError("need at least one phase");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = span * i / n;
  return out;
}

double quadrature_pdf(const DensityMatrix& rho, double phi, double x) {
  const double xs[] = {x};
  return pdf_on(rotated_real(rho, phi), xs)(0);
}

HomodyneTrace sample_homodyne(const DensityMatrix& rho, std::span<const double> phases, int shots_per_phase,
                              std::uint64_t seed, const SamplingOptions& opts) {
  if (shots_per_phase < 1) throw UsageError("shots_per_phase must be >= 1");
  if (phases.empty()) throw UsageError("no phases to sample");
  const DensityMatrix measured = apply_loss(rho, opts.efficiency);
  HomodyneTrace trace;
  trace.entries.resize(phases.size());
  auto run = [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 gen(seq);
    trace.entries[i] = {phases[i], sample_phase(measured, phases[i], shots_per_phase, gen)};
  };
  const auto workers = static_cast<std::size_t>(std::clamp(opts.threads, 1, static_cast<int>(phases.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < phases.size(); ++i) run(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < phases.size(); i += workers) run(i);
      });
    }
  }
  return trace;
}

MaxLikResult maxlik_reconstruct(const HomodyneTrace& trace, int n_trunc, int max_iter, double tol,
                                const MaxLikOptions& opts) {
  if (n_trunc < 1) throw UsageError("n_trunc must be positive");
  if (!(opts.bin_width > 0.0)) throw UsageError("bin width must be positive");
  const auto phases = fold_phases(trace);
  if (widest_gap(phases) > 0.5 * kPi + 1e-12) {
    throw InsufficientPhases("phases leave a gap wider than pi/2 modulo pi");
  }
  const double needed = 10.0 * n_trunc * n_trunc;
  if (static_cast<double>(trace.total_samples()) < needed) {
    throw UsageError("maximum likelihood needs at least " + std::to_string(static_cast<long>(needed)) + " samples");
  }

  Bins bins = make_bins(phases, n_trunc, opts.bin_width);
  MaxLikResult res;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_trunc, n_trunc);
  // a projector probability underflow merges that bin and restarts once
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::MatrixXcd rho = id / static_cast<double>(n_trunc);
    Evaluation ev = evaluate(bins, rho);
    if (ev.underflow >= 0) throw IllConditioned("projector probability underflows for the initial guess");
    res.log_likelihood.assign(1, ev.log_likelihood);
    res.diluted_steps = 0;
    int underflow = -1;
    for (int it = 1; it <= max_iter && underflow < 0; ++it) {
      const Eigen::MatrixXcd r = r_operator(bins, ev);
      Eigen::MatrixXcd next = hermitian_trace_one(r * rho * r);
      Evaluation ev_next = evaluate(bins, next);
      if (ev_next.underflow >= 0) {
        underflow = ev_next.underflow;
        break;
      }
      if (ev_next.log_likelihood < ev.log_likelihood) {
        // (1 + e R) rho (1 + e R) raises the likelihood for small enough e
        bool improved = false;
        for (double e = 1.0; e > 1e-10; e *= 0.5) {
          const Eigen::MatrixXcd re = id + e * r;
          next = hermitian_trace_one(re * rho * re);
          ev_next = evaluate(bins, next);
          if (ev_next.underflow < 0 && ev_next.log_likelihood >= ev.log_likelihood) {
            improved = true;
            break;
          }
        }
        ++res.diluted_steps;
        if (!improved) {
          // no ascent left at working precision
          res.rho = DensityMatrix(hermitian_trace_one(rho));
          res.iterations = it - 1;
          return res;
        }
      }
      const double change = std::abs(ev_next.log_likelihood - ev.log_likelihood) / std::abs(ev_next.log_likelihood);
      rho = std::move(next);
      ev = std::move(ev_next);
      res.log_likelihood.push_back(ev.log_likelihood);
      if (change < tol) {
        res.rho = DensityMatrix(rho);
        res.iterations = it;
        return res;
      }
    }
    if (underflow < 0) break;
    if (attempt == 1) throw IllConditioned("projector probability underflow after merging");
    merge_bin(bins, underflow);
    ++res.merged_bins;
  }
  throw NonConvergence("likelihood still changing after " + std::to_string(max_iter) + " iterations");
}

WignerGrid inverse_radon(const HomodyneTrace& trace, const GridSpec& grid, double cutoff, double bin_width) {
  if (!(cutoff > 0.0) || !(bin_width > 0.0)) throw UsageError("cutoff and bin width must be positive");
  const auto phases = fold_phases(trace);
  if (phases.size() < 12) {
    throw InsufficientPhases("filtered back-projection needs 12 distinct phases over [0, pi), got " +
                             std::to_string(phases.size()));
  }
  // trapezoid weights on the circle of circumference pi
  const std::size_t n_ph = phases.size();
  std::vector<double> weight(n_ph);
  for (std::size_t i = 0; i < n_ph; ++i) {
    const double prev = i == 0 ? phases[0].phi + kPi - phases[n_ph - 1].phi : phases[i].phi - phases[i - 1].phi;
    const double next = i + 1 == n_ph ? phases[0].phi + kPi - phases[i].phi : phases[i + 1].phi - phases[i].phi;
    weight[i] = 0.5 * (prev + next);
  }
  struct Histogram {
    double c, s;
    std::vector<double> x, mass;
  };
  std::vector<Histogram> hist;
  for (std::size_t i = 0; i < n_ph; ++i) {
    std::map<long, long> counts;
    for (double x : phases[i].samples) ++counts[static_cast<long>(std::floor(x / bin_width))];
    Histogram h{std::cos(phases[i].phi), std::sin(phases[i].phi), {}, {}};
    const double n = static_cast<double>(phases[i].samples.size());
    for (const auto& [k, c] : counts) {
      h.x.push_back((k + 0.5) * bin_width);
      h.mass.push_back(weight[i] * static_cast<double>(c) / n);
    }
    hist.push_back(std::move(h));
  }
  // W(x, p) dx dp = (1/4pi^2) int dphi int dk |k| P~(k) e^{ik(x cos + p sin)}; W(beta) = 2 W(x, p)
  const double norm = 2.0 / (4.0 * kPi * kPi);
  return evaluate_wigner(grid, [&](CoherentAmplitude beta) {
    const double x = std::sqrt(2.0) * beta.re(), p = std::sqrt(2.0) * beta.im();
    double acc = 0.0;
    for (const auto& h : hist) {
      const double proj = x * h.c + p * h.s;
      for (std::size_t b = 0; b < h.x.size(); ++b) acc += h.mass[b] * ramp_kernel(proj - h.x[b], cutoff);
    }
    return norm * acc;
  });
}

WignerGrid wigner_grid_from_rho(const DensityMatrix& rho, const GridSpec& grid, int threads) {
  return evaluate_wigner(grid, [&](CoherentAmplitude beta) { return wigner_from_rho(rho, beta); }, threads);
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw UsageError("fidelity needs equal truncations");
  const Eigen::MatrixXcd ah = 0.5 * (a.elements() + a.elements().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ah);
  const Eigen::VectorXd sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd s = es.eigenvectors() * sv.asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::MatrixXcd m = s * b.elements() * s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  // eigenvalues at roundoff level would otherwise add ~1e-8 each through the square root
  const Eigen::VectorXd lam = em.eigenvalues();
  const double floor = 1e-14 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  double root = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > floor) root += std::sqrt(lam(i));
  }
  return std::clamp(root * root, 0.0, 1.0);
}

nlohmann::json to_json(const DensityMatrix& rho) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int n = 0; n < rho.dim(); ++n) {
    nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
    for (int m = 0; m < rho.dim(); ++m) {
      rr.push_back(rho(n, m).real());
      ri.push_back(rho(n, m).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"n_trunc", rho.dim()}, {"re", re}, {"im", im}};
}

DensityMatrix density_matrix_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n_trunc").get<int>();
    if (n < 1) throw FormatError("density matrix n_trunc must be positive");
    Eigen::MatrixXcd m(n, n);
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (re.size() != static_cast<std::size_t>(n) || im.size() != static_cast<std::size_t>(n)) {
      throw FormatError("density matrix rows disagree with n_trunc");
    }
    for (int r = 0; r < n; ++r) {
      if (re[static_cast<std::size_t>(r)].size() != static_cast<std::size_t>(n) ||
          im[static_cast<std::size_t>(r)].size() != static_cast<std::size_t>(n)) {
        throw FormatError("density matrix row " + std::to_string(r) + " has the wrong length");
      }
      for (int c = 0; c < n; ++c) {
        m(r, c) = {re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>(),
                   im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>()};
      }
    }
    DensityMatrix rho(std::move(m));
    try {
      rho.validate();
    } catch (const NumericalError& e) {
      throw FormatError(e.what());
    }
    return rho;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("density matrix JSON: ") + e.what());
  }
}

}  // namespace strongcat
