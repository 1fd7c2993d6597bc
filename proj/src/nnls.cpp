#include "deflator/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "deflator/error.hpp"

namespace deflator {
namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const std::vector<Eigen::Index>& passive) {
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = A.col(passive[k]);
  // Minimum-norm solution keeps the step well defined when columns are
  // numerically dependent.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sub);
  return cod.solve(b);
}

}  // namespace

NnlsResult solve_nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol,
                      int max_iterations) {
  if (A.rows() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "nnls: matrix has " + std::to_string(A.rows()) +
                                                  " rows but right-hand side has " +
                                                  std::to_string(b.size()));
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "nnls: tolerance must be positive");

  const Eigen::Index n = A.cols();
  const int cap = max_iterations > 0
                      ? max_iterations
                      : 10 * static_cast<int>(std::max<Eigen::Index>(A.rows(), n));

  double max_col = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) max_col = std::max(max_col, A.col(j).norm());
  const double scale = max_col * std::max(b.norm(), max_col);
  const double eps = tol * (scale > 0.0 ? scale : 1.0);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> in_passive(static_cast<std::size_t>(n), false);
  std::vector<bool> rejected(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> passive;
  int iterations = 0;

  Eigen::VectorXd w = A.transpose() * (b - A * x);
  while (true) {
    Eigen::Index entering = -1;
    double best = eps;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (!in_passive[uj] && !rejected[uj] && w(j) > best) {
        best = w(j);
        entering = j;
      }
    }
    if (entering < 0) break;

    passive.push_back(entering);
    in_passive[static_cast<std::size_t>(entering)] = true;
    bool first_solve = true;
    bool moved = false;

    while (true) {
      if (++iterations > cap) {
        throw Error(ErrorCode::NonConvergence,
                    "nnls: active-set iteration cap of " + std::to_string(cap) +
                        " exceeded (ill-conditioned payoff matrix?)");
      }
      const Eigen::VectorXd s = solve_passive(A, b, passive);

      bool feasible = true;
      for (std::size_t k = 0; k < passive.size(); ++k) {
        if (!(s(static_cast<Eigen::Index>(k)) > 0.0)) feasible = false;
      }
      if (feasible) {
        for (std::size_t k = 0; k < passive.size(); ++k) x(passive[k]) = s(static_cast<Eigen::Index>(k));
        moved = true;
        break;
      }

      if (first_solve && !(s(static_cast<Eigen::Index>(passive.size() - 1)) > 0.0)) {
        // Rounding made the entering column look useful; park it until x moves.
        passive.pop_back();
        in_passive[static_cast<std::size_t>(entering)] = false;
        rejected[static_cast<std::size_t>(entering)] = true;
        break;
      }
      first_solve = false;

      double alpha = 1.0;
      std::size_t blocking = passive.size();
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const double sk = s(static_cast<Eigen::Index>(k));
        if (sk <= 0.0) {
          const double xk = x(passive[k]);
          const double ratio = xk / (xk - sk);
          if (ratio < alpha) {
            alpha = ratio;
            blocking = k;
          }
        }
      }
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const Eigen::Index j = passive[k];
        x(j) += alpha * (s(static_cast<Eigen::Index>(k)) - x(j));
      }
      if (blocking < passive.size()) x(passive[blocking]) = 0.0;
      moved = true;

      std::vector<Eigen::Index> kept;
      for (Eigen::Index j : passive) {
        if (x(j) > 0.0) {
          kept.push_back(j);
        } else {
          x(j) = 0.0;
          in_passive[static_cast<std::size_t>(j)] = false;
        }
      }
      passive.swap(kept);
      if (passive.empty()) break;
    }

    if (moved) std::fill(rejected.begin(), rejected.end(), false);
    w = A.transpose() * (b - A * x);
  }

  NnlsResult out;
  out.solution = x;
  out.gradient = w;
  out.residual_norm = (A * x - b).norm();
  double kkt = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = x(j) > 0.0 ? std::abs(w(j)) : std::max(0.0, w(j));
    kkt = std::max(kkt, v);
  }
  out.kkt_residual = kkt;
  out.iterations = iterations;
  return out;
}

}  // namespace deflator
