#include "deflator/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "deflator/error.hpp"

namespace deflator {
namespace {

constexpr double kNormalCutoff = 14.0;

double simpson_step(const RealFunction& f, double a, double fa, double b, double fb, double m,
                    double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

GaussRule gauss_hermite_normal(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidInput, "Gauss-Hermite rule needs at least one node");
  // Golub-Welsch: eigenvalues of the Jacobi matrix of the probabilists'
  // Hermite recurrence are the nodes; squared first eigenvector components
  // are the weights.
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 1; k < m; ++k) {
    J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  GaussRule rule;
  for (Eigen::Index i = 0; i < m; ++i) {
    rule.nodes.push_back(eig.eigenvalues()(i));
    const double v = eig.eigenvectors()(0, i);
    rule.weights.push_back(v * v);
  }
  // Symmetrize to remove eigen-solver noise.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double adaptive_simpson(const RealFunction& f, double a, double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_expectation(const RealFunction& f, std::vector<double> kinks) {
  std::vector<double> cuts = {-kNormalCutoff};
  std::sort(kinks.begin(), kinks.end());
  for (double k : kinks) {
    if (k > cuts.back() && k < kNormalCutoff) cuts.push_back(k);
  }
  cuts.push_back(kNormalCutoff);
  auto integrand = [&](double z) { return f(z) * normal_pdf(z); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, cuts[i],
                                                                           cuts[i + 1], 15, 1e-14);
  }
  return total;
}

}  // namespace deflator
