#include "strongcat/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>
#include <vector>

#include "strongcat/errors.hpp"
#include "strongcat/special.hpp"

namespace strongcat {

namespace {

constexpr double kTwoOverPi = 2.0 / kPi;

// W_{|a><g|}(beta) without the 2/pi prefactor.
Complex cross_kernel(Complex a, Complex g, Complex beta) {
  const Complex overlap = std::exp(-0.5 * (std::norm(a) + std::norm(g)) + std::conj(g) * a);
  return overlap * std::exp(-2.0 * (beta - a) * (std::conj(beta) - std::conj(g)));
}

}  // namespace

double wigner_coherent(CoherentAmplitude alpha, CoherentAmplitude beta) {
  return kTwoOverPi * std::exp(-2.0 * std::norm(beta.value() - alpha.value()));
}

double wigner_fock(int n, CoherentAmplitude beta) {
  const double r2 = std::norm(beta.value());
  const double sign = (n % 2) ? -1.0 : 1.0;
  return kTwoOverPi * sign * std::exp(-2.0 * r2) * special::laguerre(n, 0, 4.0 * r2);
}

double wigner_squeezed(const SqueezeParams& params, CoherentAmplitude beta) {
  const Complex d = beta.value() - params.alpha.value();
  const double e = std::exp(2.0 * params.k);
  return kTwoOverPi * std::exp(-2.0 * (e * d.real() * d.real() + d.imag() * d.imag() / e));
}

double wigner_css(const CoherentSuperposition& state, CoherentAmplitude beta) {
  const auto s = state.normalized();
  const auto& br = s.branches();
  const Complex b = beta.value();
  double acc = 0.0;
  for (std::size_t i = 0; i < br.size(); ++i) {
    const Complex ai = br[i].alpha.value();
    acc += std::norm(br[i].coeff) * std::exp(-2.0 * std::norm(b - ai));
    for (std::size_t j = i + 1; j < br.size(); ++j) {
      const Complex w = br[i].coeff * std::conj(br[j].coeff) * cross_kernel(ai, br[j].alpha.value(), b);
      acc += 2.0 * w.real();
    }
  }
  return kTwoOverPi * acc;
}

double wigner_shifted_cat(CoherentAmplitude alpha, CoherentAmplitude chi, CoherentAmplitude beta) {
  const Complex c = chi.value();
  const double norm = -std::expm1(-std::norm(c));
  if (!(norm > 1e-12)) throw DegenerateSuperposition("shifted cat with |chi| -> 0");
  const Complex d = beta.value() - alpha.value();
  const double damp = std::exp(-std::norm(c)) * std::exp(-2.0 * std::norm(d));
  const double fringe = (std::exp(2.0 * d * std::conj(c)) + std::exp(2.0 * std::conj(d) * c)).real();
  return kTwoOverPi / norm * (std::exp(-2.0 * std::norm(d - c)) + damp - fringe * damp);
}

double wigner_from_rho(const DensityMatrix& rho, CoherentAmplitude beta) {
  const int dim = rho.dim();
  const Complex b = beta.value();
  const double r2 = std::norm(b);
  const double x = 4.0 * r2;
  const double log_2r = r2 > 0.0 ? std::log(2.0 * std::sqrt(r2)) : 0.0;
  const double theta = std::arg(b);
  std::vector<double> lag(static_cast<std::size_t>(dim));
  double acc = 0.0;
  for (int d = 0; d < dim; ++d) {
    if (d > 0 && r2 == 0.0) break;  // (2 beta)^d vanishes at the origin
    special::laguerre_sequence(d, x, std::span<double>(lag.data(), static_cast<std::size_t>(dim - d)));
    for (int m = 0; m + d < dim; ++m) {
      const int n = m + d;
      const double log_mag = -2.0 * r2 + 0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)) + d * log_2r;
      const double mag = std::exp(log_mag) * lag[static_cast<std::size_t>(m)] * ((m % 2) ? -1.0 : 1.0);
      if (d == 0) {
        acc += rho(m, m).real() * mag;
      } else {
        acc += 2.0 * (rho(m, n) * std::polar(mag, d * theta)).real();
      }
    }
  }
  return kTwoOverPi * acc;
}

double WignerGrid::x(int i) const { return nx > 1 ? x_min + i * dx() : 0.5 * (x_min + x_max); }
double WignerGrid::p(int j) const { return np > 1 ? p_min + j * dp() : 0.5 * (p_min + p_max); }
double WignerGrid::dx() const { return nx > 1 ? (x_max - x_min) / (nx - 1) : 0.0; }
double WignerGrid::dp() const { return np > 1 ? (p_max - p_min) / (np - 1) : 0.0; }

double WignerGrid::integral() const { return values.sum() * dx() * dp() / 2.0; }

double WignerGrid::max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }

void WignerGrid::write_csv(std::ostream& os) const {
  os.precision(10);
  os << "p\\x";
  for (int i = 0; i < nx; ++i) os << ',' << x(i);
  os << '\n';
  for (int j = 0; j < np; ++j) {
    os << p(j);
    for (int i = 0; i < nx; ++i) os << ',' << values(j, i);
    os << '\n';
  }
}

nlohmann::json WignerGrid::metadata(const std::string& state_descriptor) const {
  return {{"x_range", {x_min, x_max}},
          {"p_range", {p_min, p_max}},
          {"nx", nx},
          {"np", np},
          {"state", state_descriptor},
          {"convention", kQuadratureConvention},
          {"measure", "d2beta = dx dp / 2"},
          {"integral", integral()}};
}

WignerGrid evaluate_wigner(const GridSpec& spec, const std::function<double(CoherentAmplitude)>& w,
                           int threads) {
  if (spec.nx < 1 || spec.np < 1) throw UsageError("grid sizes must be positive");
  WignerGrid g{spec.x_min, spec.x_max, spec.p_min, spec.p_max, spec.nx, spec.np,
               Eigen::MatrixXd::Zero(spec.np, spec.nx)};
  auto rows = [&](int begin, int end) {
    for (int j = begin; j < end; ++j) {
      for (int i = 0; i < g.nx; ++i) g.values(j, i) = w(phase_space_point(g.x(i), g.p(j)));
    }
  };
  const int workers = std::clamp(threads, 1, g.np);
  if (workers == 1) {
    rows(0, g.np);
    return g;
  }
  std::vector<std::jthread> pool;
  const int chunk = (g.np + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    const int begin = t * chunk;
    const int end = std::min(g.np, begin + chunk);
    if (begin < end) pool.emplace_back(rows, begin, end);
  }
  for (auto& th : pool) th.join();
  return g;
}

}  // namespace strongcat
