#pragma once

#include <Eigen/Dense>

namespace deflator {

struct NnlsResult {
  Eigen::VectorXd solution;   // w >= 0
  Eigen::VectorXd gradient;   // A^T (b - A w); <= kkt_tolerance on the zero set
  double residual_norm = 0.0; // ||A w - b||
  double kkt_residual = 0.0;  // max violation of the optimality conditions
  int iterations = 0;         // least-squares solves performed
};

// Lawson-Hanson active-set solver for min ||A w - b|| subject to w >= 0.
//
// `tol` is relative: the dual feasibility test is max_j (A^T r)_j <= tol * s
// with s = max column norm * max(||b||, max column norm). Throws
// Error(NonConvergence) when more than `max_iterations` least-squares solves
// are needed; max_iterations <= 0 selects 10 * max(rows, cols).
NnlsResult solve_nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol,
                      int max_iterations = 0);

}  // namespace deflator
