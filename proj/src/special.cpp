#include "strongcat/special.hpp"

#include <cmath>
#include <numbers>

namespace strongcat::special {

double laguerre(int n, int k, double x) {
  if (n < 0) return 0.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + k - x;
  for (int m = 1; m < n; ++m) {
    const double next = ((2.0 * m + 1.0 + k - x) * cur - (m + k) * prev) / (m + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void laguerre_sequence(int k, double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = 1.0 + k - x;
  for (std::size_t m = 1; m + 1 < out.size(); ++m) {
    const double md = static_cast<double>(m);
    out[m + 1] = ((2.0 * md + 1.0 + k - x) * out[m] - (md + k) * out[m - 1]) / (md + 1.0);
  }
}

void hermite_functions(double x, std::span<double> out) {
  if (out.empty()) return;
  static const double inv_pi_quarter = std::pow(std::numbers::pi, -0.25);
  out[0] = inv_pi_quarter * std::exp(-0.5 * x * x);
  if (out.size() == 1) return;
  out[1] = std::numbers::sqrt2 * x * out[0];
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const double nd = static_cast<double>(n);
    out[n + 1] = std::sqrt(2.0 / (nd + 1.0)) * x * out[n] - std::sqrt(nd / (nd + 1.0)) * out[n - 1];
  }
}

std::vector<double> hermite_functions(double x, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  hermite_functions(x, out);
  return out;
}

}  // namespace strongcat::special
