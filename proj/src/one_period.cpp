#include "deflator/one_period.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deflator/error.hpp"

namespace deflator {
namespace {

constexpr double kGramSingularity = 1e-12;

void require_atoms(const OnePeriodMarket& market, Eigen::Index n, const char* what) {
  if (n != market.atom_count()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has " + std::to_string(n) +
                                                  " entries, market has " +
                                                  std::to_string(market.atom_count()) + " atoms");
  }
}

bool gram_is_singular(const Eigen::MatrixXd& gram) {
  if (gram.rows() == 0) return false;
  const double max_diag = gram.diagonal().maxCoeff();
  if (!(max_diag > 0.0)) return true;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  return ldlt.vectorD().minCoeff() <= kGramSingularity * max_diag;
}

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
  return X.transpose() * w.asDiagonal() * X;
}

}  // namespace

Eigen::VectorXd sample_payoff(const OnePeriodMarket& market, Eigen::Index underlying,
                              const PayoffFunction& payoff) {
  if (underlying < 0 || underlying >= market.instrument_count()) {
    throw Error(ErrorCode::DimensionMismatch, "underlying column out of range");
  }
  Eigen::VectorXd out(market.atom_count());
  for (Eigen::Index j = 0; j < market.atom_count(); ++j) out(j) = payoff(market.payoffs()(j, underlying));
  return out;
}

double price_payoff(const OnePeriodMarket& market, const Deflator& deflator,
                    const Eigen::VectorXd& payoff) {
  require_atoms(market, payoff.size(), "payoff");
  require_atoms(market, deflator.atom_weights.size(), "deflator");
  return payoff.dot(deflator.atom_weights);
}

Eigen::VectorXd realized_return(const OnePeriodMarket& market, const Eigen::VectorXd& gamma,
                                double tol) {
  if (gamma.size() != market.instrument_count()) {
    throw Error(ErrorCode::DimensionMismatch, "position length differs from instrument count");
  }
  const double cost = gamma.dot(market.prices());
  if (std::abs(cost) <= tol) {
    throw Error(ErrorCode::ZeroCost, "position costs nothing to set up; realized return undefined");
  }
  return (market.payoffs() * gamma) / cost;
}

std::vector<std::size_t> redundant_instruments(const OnePeriodMarket& market,
                                               const Deflator& deflator) {
  require_atoms(market, deflator.atom_weights.size(), "deflator");
  std::vector<Eigen::Index> kept;
  std::vector<std::size_t> redundant;
  for (Eigen::Index i = 0; i < market.instrument_count(); ++i) {
    std::vector<Eigen::Index> trial = kept;
    trial.push_back(i);
    Eigen::MatrixXd cols(market.atom_count(), static_cast<Eigen::Index>(trial.size()));
    for (std::size_t k = 0; k < trial.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = market.payoffs().col(trial[k]);
    if (gram_is_singular(weighted_gram(cols, deflator.atom_weights))) {
      redundant.push_back(static_cast<std::size_t>(i));
    } else {
      kept.push_back(i);
    }
  }
  return redundant;
}

HedgeResult least_squares_hedge(const OnePeriodMarket& market, const Deflator& deflator,
                                const Eigen::VectorXd& payoff) {
  require_atoms(market, payoff.size(), "payoff");
  require_atoms(market, deflator.atom_weights.size(), "deflator");
  const Eigen::MatrixXd& X = market.payoffs();
  const Eigen::VectorXd& pi = deflator.atom_weights;

  const Eigen::MatrixXd gram = weighted_gram(X, pi);
  if (gram_is_singular(gram)) {
    auto redundant = redundant_instruments(market, deflator);
    std::string names;
    for (std::size_t i : redundant) {
      if (!names.empty()) names += ", ";
      names += market.labels().empty() ? "#" + std::to_string(i) : market.labels()[i];
    }
    throw SingularGramError(std::move(redundant),
                            "hedge instruments are collinear under the deflator: " + names);
  }
  const Eigen::VectorXd xv = X.transpose() * pi.asDiagonal() * payoff;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);

  HedgeResult out;
  out.gamma = ldlt.solve(xv);
  const double v2 = payoff.cwiseProduct(payoff).dot(pi);
  out.least_squared_error = std::max(0.0, v2 - xv.dot(out.gamma));
  const Eigen::VectorXd hedge = X * out.gamma;
  out.direct_error = (hedge - payoff).cwiseAbs2().dot(pi);
  out.hedge_cost = out.gamma.dot(market.prices());

  const double mass = pi.sum();
  if (mass > 0.0) {
    const Eigen::VectorXd p = pi / mass;
    const double eh = hedge.dot(p);
    const double ev = payoff.dot(p);
    const Eigen::VectorXd dh = hedge.array() - eh;
    const Eigen::VectorXd dv = payoff.array() - ev;
    const double denom = std::sqrt(dh.cwiseAbs2().dot(p) * dv.cwiseAbs2().dot(p));
    out.correlation = denom > 0.0 ? dh.cwiseProduct(dv).dot(p) / denom : 0.0;
  }
  return out;
}

BinomialQuote binomial_price(double R, double s, double d, double u, const PayoffFunction& payoff) {
  if (!(R > 0.0) || !(s > 0.0) || !(d > 0.0) || !(u > d)) {
    throw Error(ErrorCode::InvalidInput, "binomial model needs R > 0, s > 0 and 0 < d < u");
  }
  if (R < d || R > u) {
    throw Error(ErrorCode::NoArbitrageViolation,
                "d <= R <= u violated (R=" + std::to_string(R) + ", d=" + std::to_string(d) +
                    ", u=" + std::to_string(u) + ")");
  }
  const double down = payoff(s * d);
  const double up = payoff(s * u);
  BinomialQuote q;
  q.value = ((u - R) / (u - d) * down + (R - d) / (u - d) * up) / R;
  q.shares = (up - down) / (s * u - s * d);
  q.bond = (down - q.shares * s * d) / R;
  return q;
}

BinomialQuote binomial_price_states(double R, double s, double s_down, double s_up,
                                    const PayoffFunction& payoff) {
  if (!(R > 0.0) || !(s_up > s_down)) {
    throw Error(ErrorCode::InvalidInput, "binomial model needs R > 0 and S- < S+");
  }
  const double forward = R * s;
  if (forward < s_down || forward > s_up) {
    throw Error(ErrorCode::NoArbitrageViolation, "S- <= R s <= S+ violated");
  }
  const double down = payoff(s_down);
  const double up = payoff(s_up);
  const double spread = s_up - s_down;
  BinomialQuote q;
  q.value = ((s_up - forward) / spread * down + (forward - s_down) / spread * up) / R;
  q.shares = (up - down) / spread;
  q.bond = (down - q.shares * s_down) / R;
  return q;
}

OnePeriodMarket binomial_market(double R, double s, double d, double u,
                                const PayoffFunction& payoff, double claim_price) {
  Eigen::MatrixXd X(2, 3);
  X << R, s * d, payoff(s * d),
       R, s * u, payoff(s * u);
  return OnePeriodMarket(Eigen::Vector3d(1.0, s, claim_price), X, {"bond", "stock", "claim"},
                         {"down", "up"});
}

OnePeriodMarket put_call_parity_market(double R, double s, double k, double call, double put) {
  const std::vector<double> outcomes = {0.0, 0.5 * k, k, 1.5 * k, 2.0 * k};
  Eigen::MatrixXd X(static_cast<Eigen::Index>(outcomes.size()) + 1, 4);
  std::vector<std::string> atoms;
  for (std::size_t j = 0; j < outcomes.size(); ++j) {
    const double w = outcomes[j];
    X.row(static_cast<Eigen::Index>(j)) << R, w, std::max(w - k, 0.0), std::max(k - w, 0.0);
    atoms.push_back("w=" + std::to_string(w));
  }
  X.row(static_cast<Eigen::Index>(outcomes.size())) << 0.0, 1.0, 1.0, 0.0;
  atoms.push_back("ray");
  return OnePeriodMarket(Eigen::Vector4d(1.0, s, call, put), X, {"bond", "stock", "call", "put"},
                         atoms);
}

OnePeriodMarket cost_of_carry_market(double R, double s, double forward) {
  Eigen::MatrixXd X(2, 3);
  X << R, 0.0, -forward,
       0.0, 1.0, 1.0;
  return OnePeriodMarket(Eigen::Vector3d(1.0, s, 0.0), X, {"bond", "stock", "forward"},
                         {"w=0", "ray"});
}

std::vector<OnePeriodFixture> parity_and_carry_fixtures() {
  const double R = 1.1, s = 100.0, k = 100.0, put = 5.0;
  const double call = put + s - k / R;
  const Eigen::Vector4d parity_hedge(-k / R, 1.0, -1.0, 1.0);

  std::vector<OnePeriodFixture> out;
  out.push_back({"parity", put_call_parity_market(R, s, k, call, put), parity_hedge, false});
  out.push_back({"parity_call_up", put_call_parity_market(R, s, k, call + 0.5, put), parity_hedge, true});
  out.push_back({"parity_call_down", put_call_parity_market(R, s, k, call - 0.5, put), parity_hedge, true});

  const double carry_R = 1.05;
  out.push_back({"carry", cost_of_carry_market(carry_R, s, carry_R * s), std::nullopt, false});
  out.push_back({"carry_rich", cost_of_carry_market(carry_R, s, carry_R * s + 1.0), std::nullopt, true});
  return out;
}

}  // namespace deflator
