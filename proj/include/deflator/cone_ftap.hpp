#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace deflator {

inline constexpr double kDefaultTol = 1e-9;

// One-period market: prices x in R^m today and the sampled range of the
// terminal price map, one row X(w_j) per outcome. Rows need not be
// probability-weighted samples; ray generators of unbounded payoff
// directions are admissible rows.
class OnePeriodMarket {
 public:
  OnePeriodMarket(Eigen::VectorXd prices, Eigen::MatrixXd payoffs,
                  std::vector<std::string> labels = {},
                  std::vector<std::string> atom_labels = {});

  const Eigen::VectorXd& prices() const noexcept { return prices_; }
  const Eigen::MatrixXd& payoffs() const noexcept { return payoffs_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& atom_labels() const noexcept { return atom_labels_; }

  Eigen::Index instrument_count() const noexcept { return prices_.size(); }
  Eigen::Index atom_count() const noexcept { return payoffs_.rows(); }

  // Column index of a named instrument; throws InvalidInput if absent.
  Eigen::Index instrument_index(const std::string& name) const;

  OnePeriodMarket scaled(double lambda) const;

 private:
  Eigen::VectorXd prices_;
  Eigen::MatrixXd payoffs_;
  std::vector<std::string> labels_;
  std::vector<std::string> atom_labels_;
};

// Euclidean projection of the price vector onto cone{X(w_1), ..., X(w_N)}.
struct ConeProjection {
  Eigen::VectorXd target;   // x
  Eigen::VectorXd x_star;   // nearest cone point
  Eigen::VectorXd weights;  // pi_j >= 0 with x_star = sum_j pi_j X(w_j)
  double residual_norm = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

// gamma with gamma.x < 0 and gamma.X(w) >= 0 on every sampled outcome.
struct ArbitrageCertificate {
  Eigen::VectorXd gamma;
  double setup_gain = 0.0;  // -gamma.x
  double min_payoff = 0.0;  // min_j gamma.X(w_j)
};

// Nonnegative weights on the sampled atoms; <X, Pi> reprices the market.
struct Deflator {
  Eigen::VectorXd atom_weights;

  double mass() const { return atom_weights.sum(); }
};

struct PositionReport {
  double cost = 0.0;
  double min_payoff = 0.0;
  bool is_arbitrage = false;
};

ConeProjection project_to_cone(const OnePeriodMarket& market, double tol = kDefaultTol);

// True when the projection residual is within tol * (1 + ||x||); the same
// threshold drives find_arbitrage and deflator_from_projection so that
// exactly one of them succeeds.
bool within_cone(const ConeProjection& projection, double tol = kDefaultTol);

std::optional<ArbitrageCertificate> certificate_from_projection(const OnePeriodMarket& market,
                                                                const ConeProjection& projection,
                                                                double tol = kDefaultTol);

std::optional<ArbitrageCertificate> find_arbitrage(const OnePeriodMarket& market,
                                                   double tol = kDefaultTol);

PositionReport verify_position(const OnePeriodMarket& market, const Eigen::VectorXd& gamma,
                               double tol = kDefaultTol);

std::optional<Deflator> deflator_from_projection(const ConeProjection& projection,
                                                 double tol = kDefaultTol);

}  // namespace deflator
