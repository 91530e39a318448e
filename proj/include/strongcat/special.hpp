#pragma once

#include <span>
#include <vector>

namespace strongcat::special {

// All evaluations use three-term recurrences; no factorial ratios are formed.

/// Generalized Laguerre polynomial L_n^{(k)}(x).
double laguerre(int n, int k, double x);

/// Fills out[n] = L_n^{(k)}(x) for n = 0..out.size()-1.
void laguerre_sequence(int k, double x, std::span<double> out);

/// Normalized oscillator eigenfunctions psi_n(x) = <x|n> for n = 0..out.size()-1,
/// psi_0(x) = pi^{-1/4} exp(-x^2/2).
void hermite_functions(double x, std::span<double> out);

std::vector<double> hermite_functions(double x, int count);

}  // namespace strongcat::special
