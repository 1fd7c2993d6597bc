#include "deflator/cone_ftap.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "deflator/error.hpp"
#include "deflator/nnls.hpp"

namespace deflator {

OnePeriodMarket::OnePeriodMarket(Eigen::VectorXd prices, Eigen::MatrixXd payoffs,
                                 std::vector<std::string> labels,
                                 std::vector<std::string> atom_labels)
    : prices_(std::move(prices)),
      payoffs_(std::move(payoffs)),
      labels_(std::move(labels)),
      atom_labels_(std::move(atom_labels)) {
  if (prices_.size() < 1) throw Error(ErrorCode::InvalidInput, "market needs at least one instrument");
  if (payoffs_.rows() < 1) throw Error(ErrorCode::InvalidInput, "market needs at least one outcome");
  if (payoffs_.cols() != prices_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "payoff rows have " + std::to_string(payoffs_.cols()) + " entries, expected " +
                    std::to_string(prices_.size()));
  }
  if (!prices_.allFinite() || !payoffs_.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "market entries must be finite");
  }
  if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != prices_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "instrument label count differs from price count");
  }
  if (!atom_labels_.empty() && static_cast<Eigen::Index>(atom_labels_.size()) != payoffs_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "outcome label count differs from payoff rows");
  }
}

Eigen::Index OnePeriodMarket::instrument_index(const std::string& name) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == name) return static_cast<Eigen::Index>(i);
  }
  throw Error(ErrorCode::InvalidInput, "no instrument named '" + name + "'");
}

OnePeriodMarket OnePeriodMarket::scaled(double lambda) const {
  return OnePeriodMarket(prices_ * lambda, payoffs_ * lambda, labels_, atom_labels_);
}

ConeProjection project_to_cone(const OnePeriodMarket& market, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "tolerance must be positive");
  // Columns of the NNLS design matrix are the payoff rows.
  const Eigen::MatrixXd generators = market.payoffs().transpose();
  const NnlsResult fit = solve_nnls(generators, market.prices(), tol);

  ConeProjection out;
  out.target = market.prices();
  out.weights = fit.solution;
  out.x_star = generators * fit.solution;
  out.residual_norm = (out.x_star - out.target).norm();
  out.kkt_residual = fit.kkt_residual;
  out.iterations = fit.iterations;
  return out;
}

bool within_cone(const ConeProjection& projection, double tol) {
  return projection.residual_norm <= tol * (1.0 + projection.target.norm());
}

std::optional<ArbitrageCertificate> certificate_from_projection(const OnePeriodMarket& market,
                                                                const ConeProjection& projection,
                                                                double tol) {
  if (within_cone(projection, tol)) return std::nullopt;
  ArbitrageCertificate cert;
  cert.gamma = projection.x_star - projection.target;
  cert.setup_gain = -cert.gamma.dot(market.prices());
  cert.min_payoff = (market.payoffs() * cert.gamma).minCoeff();
  return cert;
}

std::optional<ArbitrageCertificate> find_arbitrage(const OnePeriodMarket& market, double tol) {
  return certificate_from_projection(market, project_to_cone(market, tol), tol);
}

PositionReport verify_position(const OnePeriodMarket& market, const Eigen::VectorXd& gamma,
                               double tol) {
  if (gamma.size() != market.instrument_count()) {
    throw Error(ErrorCode::DimensionMismatch,
                "position has " + std::to_string(gamma.size()) + " entries, market has " +
                    std::to_string(market.instrument_count()) + " instruments");
  }
  PositionReport report;
  report.cost = gamma.dot(market.prices());
  report.min_payoff = (market.payoffs() * gamma).minCoeff();
  report.is_arbitrage = report.cost < -tol && report.min_payoff >= -tol;
  return report;
}

std::optional<Deflator> deflator_from_projection(const ConeProjection& projection, double tol) {
  if (!within_cone(projection, tol)) return std::nullopt;
  return Deflator{projection.weights};
}

}  // namespace deflator
