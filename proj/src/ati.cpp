#include "strongcat/ati.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "strongcat/errors.hpp"

namespace strongcat {

namespace {

constexpr std::array<double, 4> kGlNode{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                        0.8611363115940526};
constexpr std::array<double, 4> kGlWeight{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                          0.3478548451374538};

template <class F>
auto gauss4(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  decltype(f(a)) s{};
  for (int i = 0; i < 4; ++i) s += kGlWeight[i] * f(mid + half * kGlNode[i]);
  return s * half;
}

// Trapezoid weights with Gregory end corrections through fourth differences. The ionization
// integrand does not vanish smoothly at the pulse edges, and the plain trapezoid error from
// there swamps the small net amplitude left after the oscillatory cancellation.
double gregory_weight(int k, int n) {
  static constexpr std::array<double, 5> kEnd{95.0 / 288.0, 317.0 / 240.0, 23.0 / 30.0, 793.0 / 720.0, 157.0 / 160.0};
  const int e = std::min(k, n - k);
  return e < 5 ? kEnd[static_cast<std::size_t>(e)] : 1.0;
}

// Hydrogen-like 1s bound-continuum dipole, constant prefactor dropped.
double continuum_dipole(double k, double ip) {
  const double den = k * k + 2.0 * ip;
  return k / (den * den * den);
}

// Cumulative trapezoid chi_q(t) and its composition phase int Im(chi' chi*) on the dipole grid.
struct ChiHistory {
  std::vector<double> t;
  std::vector<std::vector<Complex>> chi;  // [mode][sample]
  std::vector<std::vector<double>> phase;

  static ChiHistory build(const DipoleSeries& d, int n_modes, double g_eff, double n_ph) {
    ChiHistory h;
    h.t = d.t;
    const std::size_t n = d.t.size();
    h.chi.assign(static_cast<std::size_t>(n_modes), std::vector<Complex>(n));
    h.phase.assign(static_cast<std::size_t>(n_modes), std::vector<double>(n));
    for (int q = 1; q <= n_modes; ++q) {
      auto& c = h.chi[static_cast<std::size_t>(q - 1)];
      auto& ph = h.phase[static_cast<std::size_t>(q - 1)];
      const double scale = -n_ph * g_eff * std::sqrt(static_cast<double>(q));
      const double wq = q * d.omega;
      auto rate = [&](std::size_t i) { return scale * d.d[i] * std::polar(1.0, wq * d.t[i]); };
      for (std::size_t i = 1; i < n; ++i) {
        const double dt = d.t[i] - d.t[i - 1];
        const Complex r0 = rate(i - 1), r1 = rate(i);
        c[i] = c[i - 1] + 0.5 * dt * (r0 + r1);
        ph[i] = ph[i - 1] + 0.5 * dt * (std::imag(r0 * std::conj(c[i - 1])) + std::imag(r1 * std::conj(c[i])));
      }
    }
    return h;
  }

  template <class T>
  T interpolate(const std::vector<T>& y, double x) const {
    if (x <= t.front()) return y.front();
    if (x >= t.back()) return y.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const auto i = static_cast<std::size_t>(it - t.begin());
    const double u = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return y[i - 1] + u * (y[i] - y[i - 1]);
  }
};

// delta_q and its Magnus phase for every ionization time of a uniform grid, final time T.
//
// With R(tau) = v tau + int_0^tau A, G = int_0 R e, E = int_0 e and e = e^{i q omega tau},
//   delta(t') = -c [(G(T) - G') - R' (E(T) - E')],
// and the phase int_{t'}^T Im(delta' delta*) expands into six suffix integrals of products
// of e with R, G*, E*.
struct DisplacementTable {
  std::vector<Complex> delta;
  std::vector<double> phase;
};

DisplacementTable displacement_table(const LaserPulse& pulse, double v, int q, double c, int n) {
  const double h = pulse.duration() / n;
  const double wq = q * pulse.omega;
  auto A = [&](double x) { return pulse.vector_potential(x); };
  auto e_at = [&](double x) { return std::polar(1.0, wq * x); };
  auto E_at = [&](double x) { return (std::polar(1.0, wq * x) - 1.0) / (kI * wq); };

  std::vector<double> P(static_cast<std::size_t>(n) + 1), R(P.size());
  std::vector<Complex> G(P.size()), E(P.size());
  std::array<std::vector<Complex>, 6> J;
  for (auto& j : J) j.assign(P.size(), Complex{});

  for (int k = 0; k <= n; ++k) E[static_cast<std::size_t>(k)] = E_at(k * h);
  R[0] = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double a = k * h, b = a + h;
    auto P_at = [&](double x) { return P[i] + gauss4(A, a, x); };
    auto R_at = [&](double x) { return v * x + P_at(x); };
    auto G_at = [&](double x) { return G[i] + gauss4([&](double s) { return R_at(s) * e_at(s); }, a, x); };
    std::array<Complex, 6> acc{};
    const double mid = 0.5 * (a + b), half = 0.5 * h;
    for (int g = 0; g < 4; ++g) {
      const double x = mid + half * kGlNode[g];
      const double r = R_at(x);
      const Complex e = e_at(x), gx = G_at(x), ex = E_at(x);
      const Complex vals[6] = {e * r * std::conj(gx), e * r * std::conj(ex), e * r, e * std::conj(gx), e * std::conj(ex), e};
      for (int m = 0; m < 6; ++m) acc[static_cast<std::size_t>(m)] += kGlWeight[g] * half * vals[m];
    }
    for (int m = 0; m < 6; ++m) J[static_cast<std::size_t>(m)][i + 1] = J[static_cast<std::size_t>(m)][i] + acc[static_cast<std::size_t>(m)];
    P[i + 1] = P[i] + gauss4(A, a, b);
    R[i + 1] = v * b + P[i + 1];
    G[i + 1] = G_at(b);
  }

  DisplacementTable out;
  out.delta.resize(P.size());
  out.phase.resize(P.size());
  const auto last = static_cast<std::size_t>(n);
  for (std::size_t k = 0; k <= last; ++k) {
    std::array<Complex, 6> I;
    for (int m = 0; m < 6; ++m) I[static_cast<std::size_t>(m)] = J[static_cast<std::size_t>(m)][last] - J[static_cast<std::size_t>(m)][k];
    const double r = R[k];
    const Complex g = G[k], e = E[k];
    out.delta[k] = -c * ((G[last] - g) - r * (E[last] - e));
    const Complex s = I[0] - std::conj(g) * I[2] - r * I[1] + r * std::conj(e) * I[2] - r * I[3] +
                      r * std::conj(g) * I[5] + r * r * I[4] - r * r * std::conj(e) * I[5];
    out.phase[k] = c * c * s.imag();
  }
  return out;
}

// Unnormalized fundamental-mode amplitudes with the harmonics projected onto vacuum.
Eigen::VectorXcd fundamental_amplitudes(const EntangledMultimodeState& state, int n_trunc) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_trunc);
  for (const auto& b : state.branches()) {
    Complex w = b.weight();
    for (int q = 1; q < b.mode_count(); ++q) w *= coherent_overlap(CoherentAmplitude{}, b.alphas[static_cast<std::size_t>(q)]);
    const Complex a = b.alphas[0].value();
    Complex term = w * std::exp(-0.5 * std::norm(a));
    for (int k = 0; k < n_trunc; ++k) {
      if (k > 0) term *= a / std::sqrt(static_cast<double>(k));
      c(k) += term;
    }
  }
  return c;
}

// <a|b>; single-mode states go through the Fock basis, which is linear in the branch count.
Complex inner_product(const EntangledMultimodeState& a, const EntangledMultimodeState& b) {
  if (a.mode_count() == 1 && b.mode_count() == 1) {
    const int n = std::max(ati_truncation(a), ati_truncation(b));
    return fundamental_amplitudes(a, n).dot(fundamental_amplitudes(b, n));
  }
  return multimode_inner(a, b);
}

struct BuiltState {
  EntangledMultimodeState state;
  double norm2;
};

BuiltState build_branches(const LaserPulse& pulse, const AtomSpec& atom, const ElectronTag& tag,
                          CoherentAmplitude alpha_L, const AtiOptions& opts, const ChiHistory* chi, int spc) {
  const int n = static_cast<int>(std::lround(pulse.n_cycles * spc));
  const double h = pulse.duration() / n;
  const double v = tag.v;

  std::vector<DisplacementTable> tables;
  for (int q = 1; q <= opts.n_modes; ++q) {
    tables.push_back(displacement_table(pulse, v, q, opts.g_eff * std::sqrt(static_cast<double>(q)), n));
  }

  // Volkov action pieces int_0 A and int_0 A^2 on the same grid
  double P = 0.0, Q = 0.0;
  std::vector<MultimodeBranch> branches;
  for (int k = 0; k <= n; ++k) {
    const double t = k * h;
    if (k > 0) {
      P += gauss4([&](double x) { return pulse.vector_potential(x); }, t - h, t);
      Q += gauss4([&](double x) { const double a = pulse.vector_potential(x); return a * a; }, t - h, t);
    }
    const double amp = gregory_weight(k, n) * h * pulse.field(t) * continuum_dipole(v + pulse.vector_potential(t), atom.ip);
    if (amp == 0.0) continue;
    const double action = atom.ip * t + 0.5 * (v * v * t + 2.0 * v * P + Q);

    MultimodeBranch b;
    b.coeff = -kI * amp * std::polar(1.0, action);
    b.alphas.resize(static_cast<std::size_t>(opts.n_modes));
    double phase = 0.0;
    for (int q = 1; q <= opts.n_modes; ++q) {
      const auto m = static_cast<std::size_t>(q - 1);
      const Complex d = tables[m].delta[static_cast<std::size_t>(k)];
      Complex c{};
      if (chi != nullptr) {
        c = chi->interpolate(chi->chi[m], t);
        phase += chi->interpolate(chi->phase[m], t);
      }
      phase += tables[m].phase[static_cast<std::size_t>(k)] + std::imag(d * std::conj(c));
      b.alphas[m] = CoherentAmplitude(c + d);
    }
    phase += std::imag(alpha_L.value() * std::conj(b.alphas[0].value()));
    b.alphas[0] = alpha_L + b.alphas[0];
    b.phase = phase;
    branches.push_back(std::move(b));
  }
  if (branches.empty()) throw ZeroField("no ionization amplitude anywhere in the pulse");
  EntangledMultimodeState s(std::move(branches));
  const double norm2 = std::real(inner_product(s, s));
  if (!(norm2 > 0.0)) throw DegenerateSuperposition("ionization amplitude vanishes for v = " + std::to_string(v));
  std::vector<MultimodeBranch> scaled = s.branches();
  for (auto& b : scaled) b.coeff /= std::sqrt(norm2);
  return {EntangledMultimodeState(std::move(scaled)), norm2};
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    s += std::abs(x - y);
  }
  return 0.5 * s;
}

}  // namespace

ElectronTag ElectronTag::from_energy(double energy_up, double up, int sign) {
  if (energy_up < 0.0 || up <= 0.0) throw UsageError("photoelectron energy and U_p must be non-negative");
  return {(sign < 0 ? -1.0 : 1.0) * std::sqrt(2.0 * energy_up * up)};
}

CoherentAmplitude driver_amplitude(const LaserPulse& pulse, double magnitude) {
  // <E> = 2 g |alpha| sin(omega t - theta) follows the carrier F0 cos(omega (t - T/2) + cep)
  const double theta = 0.5 * pulse.omega * pulse.duration() - pulse.cep - 0.5 * kPi;
  return CoherentAmplitude::from_polar(magnitude, theta);
}

Complex ati_displacement(const LaserPulse& pulse, const ElectronTag& tag, double t_ion, double t, int q,
                         double g_eff) {
  if (t < t_ion) throw UsageError("observation time precedes ionization");
  if (q < 1) throw UsageError("mode index must be >= 1");
  if (t == t_ion) return {};
  const double wq = q * pulse.omega;
  const int panels = std::max(1, static_cast<int>(std::ceil((t - t_ion) / pulse.period() * 256.0)));
  const double h = (t - t_ion) / panels;
  auto velocity = [&](double x) { return tag.v + pulse.vector_potential(x); };
  double r_left = 0.0;
  Complex acc{};
  for (int k = 0; k < panels; ++k) {
    const double a = t_ion + k * h;
    acc += gauss4([&](double x) { return (r_left + gauss4(velocity, a, x)) * std::polar(1.0, wq * x); }, a, a + h);
    r_left += gauss4(velocity, a, a + h);
  }
  return -g_eff * std::sqrt(static_cast<double>(q)) * acc;
}

AtiResult ati_conditioned_state(const LaserPulse& pulse, const AtomSpec& atom, const ElectronTag& tag,
                                CoherentAmplitude alpha_L, const AtiOptions& opts) {
  if (opts.n_modes < 1) throw UsageError("need at least the fundamental mode");
  if (opts.steps_per_cycle < 64) throw UsageError("ionization grid needs at least 64 steps per cycle");
  std::optional<ChiHistory> chi;
  if (opts.bound_dipole) chi = ChiHistory::build(*opts.bound_dipole, opts.n_modes, opts.g_eff, opts.n_ph);
  const ChiHistory* chi_ptr = chi ? &*chi : nullptr;

  auto built = build_branches(pulse, atom, tag, alpha_L, opts, chi_ptr, opts.steps_per_cycle);
  int n_trunc = ati_truncation(built.state);
  auto psi = ati_fundamental_state(built.state, n_trunc);
  for (int spc = 2 * opts.steps_per_cycle; spc <= opts.max_steps_per_cycle; spc *= 2) {
    auto finer = build_branches(pulse, atom, tag, alpha_L, opts, chi_ptr, spc);
    n_trunc = std::max(n_trunc, ati_truncation(finer.state));
    const auto psi_fine = ati_fundamental_state(finer.state, n_trunc);
    Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(n_trunc);
    padded.head(psi.n_trunc()) = psi.coeffs;
    const double change = total_variation(photon_distribution(FockVector{padded}), photon_distribution(psi_fine));
    const double infidelity = 1.0 - std::norm(padded.dot(psi_fine.coeffs));
    const double norm_change = std::abs(finer.norm2 - built.norm2) / finer.norm2;
    if (change < opts.tolerance && infidelity < opts.amplitude_tolerance && norm_change < opts.amplitude_tolerance) {
      return {std::move(finer.state), spc, change, infidelity, finer.norm2};
    }
    built = std::move(finer);
    psi = psi_fine;
  }
  throw ConvergenceFailure("fundamental P(n) still changing at " + std::to_string(opts.max_steps_per_cycle) +
                           " steps per cycle");
}

int ati_truncation(const EntangledMultimodeState& state) {
  int n = 1;
  for (const auto& b : state.branches()) n = std::max(n, required_truncation(b.alphas.at(0)));
  return n;
}

FockVector ati_fundamental_state(const EntangledMultimodeState& state, int n_trunc) {
  if (state.size() == 0) throw UsageError("empty state");
  if (n_trunc <= 0) n_trunc = ati_truncation(state);
  Eigen::VectorXcd c = fundamental_amplitudes(state, n_trunc);
  FockVector out{std::move(c)};
  if (!(out.squared_norm() > 0.0)) throw DegenerateSuperposition("fundamental mode has no weight on harmonic vacuum");
  out = out.normalized();
  if (out.leakage() >= kMaxTruncationLeakage) {
    throw TruncationTooSmall("fundamental state needs more than " + std::to_string(n_trunc) + " levels");
  }
  return out;
}

DensityMatrix ati_mixed_state(const std::vector<FockVector>& states, const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size()) throw UsageError("need one weight per momentum state");
  const int dim = states.front().n_trunc();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].n_trunc() != dim) throw UsageError("momentum states must share a truncation");
    if (weights[i] < 0.0) throw UsageError("momentum weights must be non-negative");
    const auto psi = states[i].normalized();
    rho += weights[i] * psi.coeffs * psi.coeffs.adjoint();
    total += weights[i];
  }
  if (!(total > 0.0)) throw UsageError("momentum weights sum to zero");
  return DensityMatrix(rho / total);
}

Complex multimode_inner(const EntangledMultimodeState& a, const EntangledMultimodeState& b) {
  if (a.mode_count() != b.mode_count()) throw UsageError("states disagree on the number of modes");
  Complex s{};
  for (const auto& x : a.branches()) {
    const Complex wx = std::conj(x.weight());
    for (const auto& y : b.branches()) s += wx * y.weight() * multimode_overlap(x, y);
  }
  return s;
}

double entropy_of_entanglement(const LightMatterState& state) {
  const auto n = static_cast<Eigen::Index>(state.parts.size());
  if (n == 0) throw UsageError("light-matter state has no parts");
  // tags are orthogonal, so the electron reduced state is the field Gram matrix
  Eigen::MatrixXcd rho(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      rho(i, j) = inner_product(state.parts[static_cast<std::size_t>(j)].field, state.parts[static_cast<std::size_t>(i)].field);
      rho(j, i) = std::conj(rho(i, j));
    }
  }
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw DegenerateSuperposition("light-matter state has zero norm");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho / tr, Eigen::EigenvaluesOnly);
  return entropy_bits(es.eigenvalues().cwiseMax(0.0));
}

std::vector<EntropySample> ati_entropy_sweep(const LaserPulse& pulse, const AtomSpec& atom, double e_min_up,
                                             double e_max_up, const AtiOptions& opts) {
  if (!(e_min_up > 0.0) || !(e_max_up >= e_min_up)) throw UsageError("entropy sweep needs 0 < e_min <= e_max");
  const double up = pulse.ponderomotive();
  if (!(up > 0.0)) throw ZeroField("entropy sweep needs a nonzero field");
  std::vector<EntropySample> out;
  const int n_first = static_cast<int>(std::ceil((e_min_up * up + atom.ip + up) / pulse.omega));
  for (int n = std::max(n_first, 1);; ++n) {
    const double e = (n * pulse.omega - atom.ip - up) / up;
    if (e < e_min_up) continue;
    if (e > e_max_up) break;
    LightMatterState lm;
    for (int sign : {1, -1}) {
      const auto tag = ElectronTag::from_energy(e, up, sign);
      lm.parts.push_back({tag, ati_conditioned_state(pulse, atom, tag, CoherentAmplitude{}, opts).state});
    }
    out.push_back({e, entropy_of_entanglement(lm)});
  }
  return out;
}

std::vector<int> distribution_peaks(const std::vector<double>& pn, double min_fraction) {
  std::vector<int> peaks;
  if (pn.empty()) return peaks;
  const double top = *std::max_element(pn.begin(), pn.end());
  for (std::size_t i = 0; i < pn.size(); ++i) {
    const double left = i > 0 ? pn[i - 1] : -1.0;
    const double right = i + 1 < pn.size() ? pn[i + 1] : -1.0;
    if (!(pn[i] > left && pn[i] >= right && pn[i] >= min_fraction * top)) continue;
    // a neighbour without a real dip in between is the same peak; keep the taller one
    if (!peaks.empty()) {
      const auto prev = static_cast<std::size_t>(peaks.back());
      const double valley = *std::min_element(pn.begin() + static_cast<std::ptrdiff_t>(prev), pn.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      if (valley > 0.9 * std::min(pn[prev], pn[i])) {
        if (pn[i] > pn[prev]) peaks.back() = static_cast<int>(i);
        continue;
      }
    }
    peaks.push_back(static_cast<int>(i));
  }
  return peaks;
}

}  // namespace strongcat
