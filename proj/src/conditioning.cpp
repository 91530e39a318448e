#include "strongcat/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "strongcat/errors.hpp"

namespace strongcat {

namespace {

std::vector<int> all_modes(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  return m;
}

std::vector<int> complement(std::span<const int> part, int n) {
  std::vector<int> out;
  for (int q = 0; q < n; ++q) {
    if (std::find(part.begin(), part.end(), q) == part.end()) out.push_back(q);
  }
  return out;
}

void check_modes(std::span<const int> modes, int n) {
  for (int q : modes) {
    if (q < 0 || q >= n) throw UsageError("mode index " + std::to_string(q) + " outside 0.." + std::to_string(n - 1));
  }
}

// Hermitian square root of a positive semidefinite matrix, negative eigenvalues clipped.
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (g + g.adjoint()));
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// Gram matrix over exactly the listed modes; an empty list gives all ones.
Eigen::MatrixXcd subset_gram(const std::vector<MultimodeBranch>& branches, std::span<const int> modes) {
  const auto n = static_cast<Eigen::Index>(branches.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Complex acc{1.0, 0.0};
      for (int q : modes) {
        const auto k = static_cast<std::size_t>(q);
        acc *= coherent_overlap(branches[static_cast<std::size_t>(i)].alphas[k], branches[static_cast<std::size_t>(j)].alphas[k]);
      }
      g(i, j) = acc;
      g(j, i) = std::conj(acc);
    }
  }
  return g;
}

}  // namespace

Complex multimode_overlap(const MultimodeBranch& a, const MultimodeBranch& b, std::span<const int> modes) {
  Complex acc{1.0, 0.0};
  if (modes.empty()) {
    for (int q = 0; q < a.mode_count(); ++q) acc *= coherent_overlap(a.alphas[static_cast<std::size_t>(q)], b.alphas[static_cast<std::size_t>(q)]);
  } else {
    for (int q : modes) acc *= coherent_overlap(a.alphas[static_cast<std::size_t>(q)], b.alphas[static_cast<std::size_t>(q)]);
  }
  return acc;
}

EntangledMultimodeState::EntangledMultimodeState(std::vector<MultimodeBranch> branches)
    : branches_(std::move(branches)) {
  for (const auto& b : branches_) {
    if (b.mode_count() != mode_count()) throw UsageError("branches disagree on the number of modes");
  }
}

Eigen::MatrixXcd EntangledMultimodeState::gram(std::span<const int> modes) const {
  const auto all = all_modes(mode_count());
  return subset_gram(branches_, modes.empty() ? std::span<const int>(all) : modes);
}

double EntangledMultimodeState::squared_norm() const {
  const auto g = gram();
  Eigen::VectorXcd w(static_cast<Eigen::Index>(branches_.size()));
  for (std::size_t i = 0; i < branches_.size(); ++i) w(static_cast<Eigen::Index>(i)) = branches_[i].weight();
  return std::real(w.dot(g * w));
}

EntangledMultimodeState EntangledMultimodeState::normalized() const {
  const double n2 = squared_norm();
  if (!(n2 > 1e-300)) throw DegenerateSuperposition("multimode state has vanishing norm");
  auto out = *this;
  const double s = 1.0 / std::sqrt(n2);
  for (auto& b : out.branches_) b.coeff *= s;
  return out;
}

CoherentSuperposition EntangledMultimodeState::project_onto(int keep, std::span<const CoherentAmplitude> onto) const {
  const int n = mode_count();
  check_modes(std::span<const int>(&keep, 1), n);
  if (static_cast<int>(onto.size()) != n) throw UsageError("projection needs one amplitude per mode");
  std::vector<CoherentSuperposition::Branch> out;
  out.reserve(branches_.size());
  for (const auto& b : branches_) {
    Complex c = b.weight();
    for (int q = 0; q < n; ++q) {
      if (q != keep) c *= coherent_overlap(onto[static_cast<std::size_t>(q)], b.alphas[static_cast<std::size_t>(q)]);
    }
    out.push_back({c, b.alphas[static_cast<std::size_t>(keep)]});
  }
  return CoherentSuperposition(std::move(out));
}

MultimodeBranch post_hhg_product(CoherentAmplitude alpha_L, const HarmonicShiftSet& shifts) {
  MultimodeBranch b;
  b.alphas.reserve(shifts.chi.size());
  for (int q = 1; q <= shifts.n_c(); ++q) b.alphas.emplace_back(shifts[q]);
  if (!b.alphas.empty()) b.alphas[0] = alpha_L + b.alphas[0];
  else b.alphas.push_back(alpha_L);
  return b;
}

Complex conditioning_coupling(const MultimodeBranch& product, CoherentAmplitude alpha_L) {
  Complex xi = coherent_overlap(alpha_L, product.alphas.at(0));
  for (int q = 1; q < product.mode_count(); ++q) xi *= coherent_overlap(CoherentAmplitude{}, product.alphas[static_cast<std::size_t>(q)]);
  return xi;
}

EntangledMultimodeState condition_on_hhg(const MultimodeBranch& product, CoherentAmplitude alpha_L) {
  const Complex xi = conditioning_coupling(product, alpha_L);
  // <psi|psi> = 1 - |xi|^2 for |P> - xi |V>
  if (!(1.0 - std::norm(xi) > 1e-14)) {
    throw NullConditioning("no harmonic radiation: the conditioned state has zero norm");
  }
  MultimodeBranch vac;
  vac.alphas.assign(product.alphas.size(), CoherentAmplitude{});
  vac.alphas[0] = alpha_L;
  vac.coeff = -xi * product.weight();
  return EntangledMultimodeState({product, vac}).normalized();
}

CoherentSuperposition ir_cat(const EntangledMultimodeState& state) {
  if (state.size() == 0) throw UsageError("empty state");
  const auto& ref = state.branches().front().alphas;
  return state.project_onto(0, ref).normalized();
}

CoherentSuperposition xuv_cat(const EntangledMultimodeState& state, int q) {
  if (q < 2 || q > state.mode_count()) throw UsageError("harmonic order outside 2..N_c");
  const auto& ref = state.branches().front().alphas;
  const auto proj = state.project_onto(q - 1, ref);
  if (proj.merged().size() < 2) throw DegenerateSuperposition("harmonic " + std::to_string(q) + " carries no shift");
  return proj.normalized();
}

EntangledMultimodeState two_color_condition(CoherentAmplitude a1, CoherentAmplitude a2, CoherentAmplitude chi1,
                                            CoherentAmplitude chi2, std::span<const CoherentAmplitude> harmonics) {
  Complex xi = coherent_overlap(a1, a1 + chi1) * coherent_overlap(a2, a2 + chi2);
  for (const auto& h : harmonics) xi *= std::norm(coherent_overlap(CoherentAmplitude{}, h));
  MultimodeBranch shifted{Complex{1.0}, {a1 + chi1, a2 + chi2}, 0.0};
  MultimodeBranch initial{-xi, {a1, a2}, 0.0};
  return EntangledMultimodeState({shifted, initial}).normalized();
}

Eigen::VectorXd reduced_spectrum(const EntangledMultimodeState& state, std::span<const int> part) {
  const int n = state.mode_count();
  check_modes(part, n);
  const auto rest = complement(part, n);
  const Eigen::MatrixXcd ga = subset_gram(state.branches(), part);
  const Eigen::MatrixXcd gb = subset_gram(state.branches(), rest);
  const auto nb = static_cast<Eigen::Index>(state.size());
  Eigen::VectorXcd w(nb);
  for (Eigen::Index i = 0; i < nb; ++i) w(i) = state.branches()[static_cast<std::size_t>(i)].weight();
  // rho_A = sum_ij |A_i> M_ij <A_j|, M_ij = w_i conj(w_j) <B_j|B_i>
  const Eigen::MatrixXcd m = (w * w.adjoint()).cwiseProduct(gb.transpose());
  const Eigen::MatrixXcd s = psd_sqrt(ga);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s * m * s, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  const double tr = ev.sum();
  if (!(tr > 0.0)) throw DegenerateSuperposition("reduced state has zero trace");
  return ev / tr;
}

double linear_entropy(const EntangledMultimodeState& state, std::span<const int> part) {
  const Eigen::VectorXd ev = reduced_spectrum(state, part);
  return std::max(0.0, 1.0 - ev.squaredNorm());
}

double entropy_bits(const Eigen::VectorXd& spectrum) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    const double p = spectrum(i);
    if (p > 1e-15) s -= p * std::log2(p);
  }
  return std::max(0.0, s);
}

double von_neumann_entropy(const EntangledMultimodeState& state, std::span<const int> part) {
  return entropy_bits(reduced_spectrum(state, part));
}

nlohmann::json to_json(const MultimodeBranch& b) {
  nlohmann::json alphas = nlohmann::json::array();
  for (const auto& a : b.alphas) alphas.push_back({a.re(), a.im()});
  return {{"coeff", {b.coeff.real(), b.coeff.imag()}}, {"alphas", alphas}, {"phase", b.phase}};
}

nlohmann::json to_json(const EntangledMultimodeState& s) {
  nlohmann::json br = nlohmann::json::array();
  for (const auto& b : s.branches()) br.push_back(to_json(b));
  return {{"mode_count", s.mode_count()}, {"branches", br}};
}

EntangledMultimodeState multimode_state_from_json(const nlohmann::json& j) {
  try {
    std::vector<MultimodeBranch> out;
    for (const auto& b : j.at("branches")) {
      MultimodeBranch mb;
      mb.coeff = {b.at("coeff").at(0).get<double>(), b.at("coeff").at(1).get<double>()};
      mb.phase = b.value("phase", 0.0);
      for (const auto& a : b.at("alphas")) mb.alphas.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
      out.push_back(std::move(mb));
    }
    return EntangledMultimodeState(std::move(out));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("multimode state JSON: ") + e.what());
  }
}

}  // namespace strongcat
