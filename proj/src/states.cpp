#include "strongcat/states.hpp"

#include <cmath>

#include "strongcat/errors.hpp"

namespace strongcat {

Complex coherent_overlap(CoherentAmplitude a1, CoherentAmplitude a2) {
  const Complex z1 = a1.value();
  const Complex z2 = a2.value();
  return std::exp(-0.5 * (std::norm(z1) + std::norm(z2)) + std::conj(z1) * z2);
}

CoherentSuperposition::CoherentSuperposition(std::vector<Branch> branches)
    : branches_(std::move(branches)) {}

CoherentSuperposition CoherentSuperposition::coherent(CoherentAmplitude alpha) {
  return CoherentSuperposition({{Complex{1.0, 0.0}, alpha}});
}

CoherentSuperposition CoherentSuperposition::shifted_cat(CoherentAmplitude alpha,
                                                         CoherentAmplitude chi) {
  const Complex xi = coherent_overlap(alpha, alpha + chi);
  return CoherentSuperposition({{Complex{1.0, 0.0}, alpha + chi}, {-xi, alpha}});
}

CoherentSuperposition CoherentSuperposition::parity_cat(CoherentAmplitude alpha, int parity) {
  const double sign = parity >= 0 ? 1.0 : -1.0;
  return CoherentSuperposition({{Complex{1.0, 0.0}, alpha}, {Complex{sign, 0.0}, -alpha}});
}

CoherentSuperposition CoherentSuperposition::merged(double merge_tol) const {
  std::vector<Branch> out;
  out.reserve(branches_.size());
  for (const auto& b : branches_) {
    bool absorbed = false;
    for (auto& o : out) {
      if (std::abs(o.alpha.value() - b.alpha.value()) < merge_tol) {
        o.coeff += b.coeff;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) out.push_back(b);
  }
  return CoherentSuperposition(std::move(out));
}

Eigen::MatrixXcd coherent_gram(std::span<const CoherentAmplitude> alphas) {
  const auto n = static_cast<Eigen::Index>(alphas.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      g(i, j) = coherent_overlap(alphas[i], alphas[j]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

Eigen::MatrixXcd CoherentSuperposition::gram() const {
  std::vector<CoherentAmplitude> alphas;
  alphas.reserve(branches_.size());
  for (const auto& b : branches_) alphas.push_back(b.alpha);
  return coherent_gram(alphas);
}

double CoherentSuperposition::squared_norm() const {
  const auto m = merged();
  const auto g = m.gram();
  Eigen::VectorXcd c(static_cast<Eigen::Index>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) c(static_cast<Eigen::Index>(i)) = m.branches_[i].coeff;
  return std::real(c.dot(g * c));
}

CoherentSuperposition CoherentSuperposition::normalized() const {
  const double n2 = squared_norm();
  if (!(n2 > 1e-12)) {
    throw DegenerateSuperposition("squared norm " + std::to_string(n2) + " below 1e-12");
  }
  auto out = merged();
  const double s = 1.0 / std::sqrt(n2);
  for (auto& b : out.branches_) b.coeff *= s;
  return out;
}

Complex CoherentSuperposition::mean_amplitude() const {
  const auto s = normalized();
  // <psi|a|psi> = sum_ij conj(c_i) c_j alpha_j <alpha_i|alpha_j>
  Complex acc{};
  for (const auto& bi : s.branches_) {
    for (const auto& bj : s.branches_) {
      acc += std::conj(bi.coeff) * bj.coeff * bj.alpha.value() * coherent_overlap(bi.alpha, bj.alpha);
    }
  }
  return acc;
}

}  // namespace strongcat
