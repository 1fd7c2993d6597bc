#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "deflator/cone_ftap.hpp"

namespace deflator {

using PayoffFunction = std::function<double(double)>;

struct HedgeResult {
  Eigen::VectorXd gamma;
  double least_squared_error = 0.0;  // <V^2,Pi> - <XV,Pi>^T <XX^T,Pi>^{-1} <XV,Pi>, floored at 0
  double direct_error = 0.0;         // <(gamma.X - V)^2, Pi> evaluated atom by atom
  double hedge_cost = 0.0;           // gamma.x
  double correlation = 0.0;          // corr(gamma.X, V) under P = Pi / Pi(Omega)
};

struct BinomialQuote {
  double value = 0.0;
  double shares = 0.0;  // stock units in the replicating portfolio
  double bond = 0.0;    // zero coupon bond units (each pays R)
};

// Samples a terminal payoff V(X_underlying(w_j)) on every atom.
Eigen::VectorXd sample_payoff(const OnePeriodMarket& market, Eigen::Index underlying,
                              const PayoffFunction& payoff);

// <V, Pi>
double price_payoff(const OnePeriodMarket& market, const Deflator& deflator,
                    const Eigen::VectorXd& payoff);

// Per-atom realized return gamma.X(w_j) / gamma.x. Throws ZeroCost when
// |gamma.x| <= tol.
Eigen::VectorXd realized_return(const OnePeriodMarket& market, const Eigen::VectorXd& gamma,
                                double tol = kDefaultTol);

// Minimizes <(gamma.X - V)^2, Pi> through the Gram system <XX^T,Pi> gamma = <XV,Pi>.
// Throws SingularGramError (listing redundant columns) when the smallest
// LDL^T pivot falls below 1e-12 times the largest Gram diagonal.
HedgeResult least_squares_hedge(const OnePeriodMarket& market, const Deflator& deflator,
                                const Eigen::VectorXd& payoff);

// Columns that are (numerically) spanned by the preceding ones under the Pi
// inner product.
std::vector<std::size_t> redundant_instruments(const OnePeriodMarket& market,
                                               const Deflator& deflator);

// Standard binomial: outcomes s*d and s*u, bond returning R. Requires
// 0 < d <= R <= u, otherwise NoArbitrageViolation.
BinomialQuote binomial_price(double R, double s, double d, double u, const PayoffFunction& payoff);

// Same market parameterized by the two terminal stock prices.
BinomialQuote binomial_price_states(double R, double s, double s_down, double s_up,
                                    const PayoffFunction& payoff);

// (bond, stock, claim) market with the claim quoted at the given price.
OnePeriodMarket binomial_market(double R, double s, double d, double u,
                                const PayoffFunction& payoff, double claim_price);

// Bond, stock, call, put on [0, inf): atoms at 0, k, 2k plus the ray
// (0, 1, 1, 0) = lim X(w)/w.
OnePeriodMarket put_call_parity_market(double R, double s, double k, double call, double put);

// Bond, stock, forward on [0, inf): generators X(0) = (R, 0, -f) and the ray (0, 1, 1).
OnePeriodMarket cost_of_carry_market(double R, double s, double forward);

struct OnePeriodFixture {
  std::string name;
  OnePeriodMarket market;
  std::optional<Eigen::VectorXd> hedge;  // position with gamma.X == 0 identically, if any
  bool arbitrage_expected = false;
};

// Parity and carry markets, consistent and perturbed, with their expected verdicts.
std::vector<OnePeriodFixture> parity_and_carry_fixtures();

}  // namespace deflator
