#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deflator/cone_ftap.hpp"
#include "deflator/filtration.hpp"

namespace deflator {

// Prices X_j and cash flows C_j of m instruments at times t_0 < ... < t_n.
// X_j and C_j may be given on any algebra that A_j refines (a recombining
// tree supplies them on coarser, non-increasing algebras); they are lifted
// to A_j for every computation. C_0 is identically zero.
class MarketPanel {
 public:
  // `cashflows` holds either n entries (times 1..n) or n + 1 entries whose
  // first one is zero; an empty vector means no cash flows.
  MarketPanel(std::vector<double> times, Filtration filtration, std::vector<VectorFunction> prices,
              std::vector<VectorFunction> cashflows = {}, std::vector<std::string> labels = {});

  std::size_t periods() const noexcept { return times_.size() - 1; }
  Eigen::Index instrument_count() const noexcept { return prices_.front().dim(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const Filtration& filtration() const noexcept { return filtration_; }
  const Algebra& algebra(std::size_t j) const { return filtration_.at(j); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  // X_j and C_j lifted to A_j.
  const VectorFunction& price(std::size_t j) const { return prices_.at(j); }
  const VectorFunction& cashflow(std::size_t j) const { return cashflows_.at(j); }

  // max|X| + max|C|, at least 1; multiplies every tolerance in this module.
  double scale() const noexcept { return scale_; }

 private:
  std::vector<double> times_;
  Filtration filtration_;
  std::vector<VectorFunction> prices_;
  std::vector<VectorFunction> cashflows_;
  std::vector<std::string> labels_;
  double scale_ = 1.0;
};

// Trades Gamma_j (A_j measurable) for j = 0..n.
class Strategy {
 public:
  explicit Strategy(std::vector<VectorFunction> trades);
  static Strategy zero(const MarketPanel& panel);

  const std::vector<VectorFunction>& trades() const noexcept { return trades_; }
  const VectorFunction& trade(std::size_t j) const { return trades_.at(j); }

  // Xi_j = Gamma_0 + ... + Gamma_j on A_j.
  VectorFunction position(std::size_t j, const Filtration& filtration) const;

 private:
  std::vector<VectorFunction> trades_;
};

struct DeflatorSequence {
  std::vector<FAMeasure> measures;  // Pi_j on A_j

  // Pi_0 > 0 on every block and Pi_j >= 0.
  bool in_dual_cone() const;
};

struct AccountProcess {
  std::vector<SimpleFunction> entries;  // A_j = Xi_{j-1}.C_j - Gamma_j.X_j
};

struct AccountWitness {
  std::size_t time = 0;
  std::size_t block = 0;
  double amount = 0.0;
};

struct ArbitrageVerdict {
  bool is_arbitrage = false;
  std::size_t closed_out_at = 0;
  std::optional<AccountWitness> witness;  // first entry breaking the definition
};

struct DeflatorCheck {
  bool holds = false;
  bool in_dual_cone = false;
  double max_violation = 0.0;
  std::size_t worst_time = 0;
  std::size_t worst_block = 0;
  Eigen::Index worst_component = 0;
};

struct NodeArbitrage {
  std::size_t time = 0;  // A_0 block whose local market fails
  std::size_t block = 0;
  ArbitrageCertificate certificate;
  Strategy strategy;  // multi-period arbitrage assembled from the local certificates
  std::vector<std::pair<std::size_t, std::size_t>> dead_nodes;  // (time, block) without a local deflator
};

struct TreeDeflatorResult {
  std::optional<DeflatorSequence> deflators;
  std::optional<NodeArbitrage> arbitrage;

  bool arbitrage_free() const noexcept { return deflators.has_value(); }
};

struct ReplicationResult {
  SimpleFunction cost;      // Gamma_0.X_0 on A_0
  SimpleFunction terminal;  // Xi_{n-1}.C_n - Gamma_n.X_n on A_n
  double pairing_residual = 0.0;
  bool pairing_holds = false;
};

AccountProcess account_process(const MarketPanel& panel, const Strategy& strategy);

// Throws NotClosedOut unless Xi_n vanishes. Requires A_0 > tol*scale on every
// A_0 block and A_j >= -tol*scale up to the close-out time.
ArbitrageVerdict is_arbitrage_strategy(const MarketPanel& panel, const Strategy& strategy,
                                       double tol = kDefaultTol);

// X_i Pi_i == (C_{i+1} + X_{i+1}) Pi_{i+1}|_{A_i} for i < n, componentwise
// within tol*scale, together with membership in the dual cone.
DeflatorCheck check_deflator(const MarketPanel& panel, const DeflatorSequence& deflators,
                             double tol = kDefaultTol);

// (sum_{j<i<k} C_i Pi_i|_{A_j} + (C_k + X_k) Pi_k|_{A_j}) / Pi_j.
VectorFunction propagate_prices(const MarketPanel& panel, const DeflatorSequence& deflators,
                                std::size_t j, std::size_t k);

// Node-by-node cone projection on a tree filtration. Nodes whose local
// market admits no deflator over their viable children are marked dead and
// receive zero weight from their parent; a dead A_0 block yields an
// arbitrage strategy, otherwise Pi_0 = 1 per A_0 block and weights multiply
// along paths.
TreeDeflatorResult find_tree_deflator(const MarketPanel& panel, double tol = kDefaultTol);

// Throws NotClosedOut / NotSelfFinancingError. Checks
// <Gamma_0.X_0, Pi_0> == <terminal, Pi_n> blockwise on A_0.
ReplicationResult replication_cost(const MarketPanel& panel, const DeflatorSequence& deflators,
                                   const Strategy& strategy, double tol = kDefaultTol);

// Self-financing closed strategy paying `payoff` (on A_n) at t_n, built by
// backward induction. Throws InvalidInput if some node cannot replicate its
// children's values within tol*scale.
Strategy replicate_payoff(const MarketPanel& panel, const SimpleFunction& payoff,
                          double tol = kDefaultTol);

// Blocks of A_{j+1} inside each block of A_j.
std::vector<std::vector<std::size_t>> children(const Filtration& filtration, std::size_t j);

// Two-instrument panel (R^j, s e^{mu j + sigma Z_j}) on the n-step binary tree.
MarketPanel binomial_panel(std::size_t steps, double R, double s, double mu, double sigma);

}  // namespace deflator
