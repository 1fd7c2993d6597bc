#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace deflator {

using RealFunction = std::function<double(double)>;

// Nodes and weights with sum_i w_i f(z_i) ~ E f(Z).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Hermite rule for Z ~ N(0,1); weights sum to 1.
GaussRule gauss_hermite_normal(std::size_t n);

// Adaptive Simpson on [a, b] to absolute tolerance abs_tol.
double adaptive_simpson(const RealFunction& f, double a, double b, double abs_tol = 1e-10,
                        int max_depth = 50);

// E f(Z) for Z ~ N(0,1) by adaptive Gauss-Kronrod on [-14, 14], split at
// the given kinks of f.
double normal_expectation(const RealFunction& f, std::vector<double> kinks = {});

double normal_pdf(double z);
double normal_cdf(double z);

}  // namespace deflator
