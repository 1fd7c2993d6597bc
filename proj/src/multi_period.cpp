#include "deflator/multi_period.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deflator/error.hpp"

namespace deflator {
namespace {

Eigen::VectorXd row_dot(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.cwiseProduct(b).rowwise().sum();
}

SimpleFunction to_simple(const Algebra& alg, const Eigen::VectorXd& v) {
  return SimpleFunction(alg, std::vector<double>(v.data(), v.data() + v.size()));
}

void require_measures(const MarketPanel& panel, const DeflatorSequence& deflators) {
  if (deflators.measures.size() != panel.periods() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "deflator sequence length differs from panel times");
  }
  for (std::size_t j = 0; j < deflators.measures.size(); ++j) {
    if (deflators.measures[j].algebra() != panel.algebra(j)) {
      throw Error(ErrorCode::AlgebraMismatch, "deflator " + std::to_string(j) + " is not on A_" +
                                                  std::to_string(j));
    }
  }
}

VectorFunction lifted_trade(const Strategy& strategy, const MarketPanel& panel, std::size_t j) {
  const VectorFunction& g = strategy.trade(j);
  if (g.dim() != panel.instrument_count()) {
    throw Error(ErrorCode::DimensionMismatch, "trade dimension differs from instrument count");
  }
  return lift(g, panel.algebra(j));
}

void require_strategy(const MarketPanel& panel, const Strategy& strategy) {
  if (strategy.trades().size() != panel.periods() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "strategy needs one trade per panel time");
  }
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

MarketPanel::MarketPanel(std::vector<double> times, Filtration filtration,
                         std::vector<VectorFunction> prices, std::vector<VectorFunction> cashflows,
                         std::vector<std::string> labels)
    : times_(std::move(times)), filtration_(std::move(filtration)), labels_(std::move(labels)) {
  if (times_.size() < 2) throw Error(ErrorCode::InvalidInput, "panel needs at least two times");
  for (std::size_t j = 1; j < times_.size(); ++j) {
    if (!(times_[j] > times_[j - 1])) throw Error(ErrorCode::InvalidInput, "panel times must increase");
  }
  const std::size_t n = times_.size() - 1;
  if (filtration_.size() != n + 1) {
    throw Error(ErrorCode::DimensionMismatch, "filtration length differs from panel times");
  }
  for (std::size_t j = 1; j <= n; ++j) {
    if (!filtration_.at(j).refines(filtration_.at(j - 1))) {
      throw Error(ErrorCode::InvalidInput, "panel filtration must be increasing");
    }
  }
  if (prices.size() != n + 1) throw Error(ErrorCode::DimensionMismatch, "need one price function per time");
  const Eigen::Index m = prices.front().dim();
  if (m < 1) throw Error(ErrorCode::InvalidInput, "panel needs at least one instrument");

  auto adopt = [&](const VectorFunction& f, std::size_t j, const char* what) {
    if (f.dim() != m) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " dimension mismatch");
    if (!filtration_.at(j).refines(f.algebra())) {
      throw Error(ErrorCode::AlgebraMismatch, std::string(what) + " at time " + std::to_string(j) +
                                                  " is not measurable with respect to A_" +
                                                  std::to_string(j));
    }
    return lift(f, filtration_.at(j));
  };

  for (std::size_t j = 0; j <= n; ++j) prices_.push_back(adopt(prices[j], j, "price"));

  if (cashflows.empty()) {
    for (std::size_t j = 0; j <= n; ++j) cashflows_.push_back(VectorFunction::zero(filtration_.at(j), m));
  } else if (cashflows.size() == n) {
    cashflows_.push_back(VectorFunction::zero(filtration_.at(0), m));
    for (std::size_t j = 1; j <= n; ++j) cashflows_.push_back(adopt(cashflows[j - 1], j, "cash flow"));
  } else if (cashflows.size() == n + 1) {
    if (max_abs(cashflows[0].values()) != 0.0) {
      throw Error(ErrorCode::InvalidInput, "cash flow at t_0 must be zero");
    }
    for (std::size_t j = 0; j <= n; ++j) cashflows_.push_back(adopt(cashflows[j], j, "cash flow"));
  } else {
    throw Error(ErrorCode::DimensionMismatch, "cash flows need n or n + 1 entries");
  }

  if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != m) {
    throw Error(ErrorCode::DimensionMismatch, "label count differs from instrument count");
  }

  double max_x = 0.0, max_c = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    max_x = std::max(max_x, max_abs(prices_[j].values()));
    max_c = std::max(max_c, max_abs(cashflows_[j].values()));
  }
  scale_ = std::max(1.0, max_x + max_c);
}

Strategy::Strategy(std::vector<VectorFunction> trades) : trades_(std::move(trades)) {
  if (trades_.empty()) throw Error(ErrorCode::InvalidInput, "strategy needs at least one trade");
  for (const auto& t : trades_) {
    if (t.dim() != trades_.front().dim()) throw Error(ErrorCode::DimensionMismatch, "trade dimensions differ");
  }
}

Strategy Strategy::zero(const MarketPanel& panel) {
  std::vector<VectorFunction> trades;
  for (std::size_t j = 0; j <= panel.periods(); ++j) {
    trades.push_back(VectorFunction::zero(panel.algebra(j), panel.instrument_count()));
  }
  return Strategy(std::move(trades));
}

VectorFunction Strategy::position(std::size_t j, const Filtration& filtration) const {
  const Algebra& alg = filtration.at(j);
  VectorFunction acc = VectorFunction::zero(alg, trades_.front().dim());
  for (std::size_t i = 0; i <= j; ++i) acc.values() += lift(trades_.at(i), alg).values();
  return acc;
}

bool DeflatorSequence::in_dual_cone() const {
  if (measures.empty()) return false;
  for (double w : measures.front().weights()) {
    if (!(w > 0.0)) return false;
  }
  for (std::size_t j = 1; j < measures.size(); ++j) {
    if (!measures[j].nonnegative()) return false;
  }
  return true;
}

AccountProcess account_process(const MarketPanel& panel, const Strategy& strategy) {
  require_strategy(panel, strategy);
  AccountProcess out;
  for (std::size_t j = 0; j <= panel.periods(); ++j) {
    const Algebra& alg = panel.algebra(j);
    const VectorFunction trade = lifted_trade(strategy, panel, j);
    Eigen::VectorXd entry = -row_dot(trade.values(), panel.price(j).values());
    if (j > 0) {
      const VectorFunction held = lift(strategy.position(j - 1, panel.filtration()), alg);
      entry += row_dot(held.values(), panel.cashflow(j).values());
    }
    out.entries.push_back(to_simple(alg, entry));
  }
  return out;
}

ArbitrageVerdict is_arbitrage_strategy(const MarketPanel& panel, const Strategy& strategy,
                                       double tol) {
  require_strategy(panel, strategy);
  const std::size_t n = panel.periods();
  const double eps = tol * panel.scale();
  if (max_abs(strategy.position(n, panel.filtration()).values()) > eps) {
    throw Error(ErrorCode::NotClosedOut, "position is not closed out at the final time");
  }
  ArbitrageVerdict verdict;
  std::size_t closed = n;
  while (closed > 0 && max_abs(strategy.position(closed - 1, panel.filtration()).values()) <= eps) --closed;
  verdict.closed_out_at = closed;

  const AccountProcess account = account_process(panel, strategy);
  for (std::size_t b = 0; b < account.entries[0].values().size(); ++b) {
    const double a = account.entries[0][b];
    if (!(a > eps)) {
      verdict.witness = AccountWitness{0, b, a};
      return verdict;
    }
  }
  for (std::size_t j = 1; j <= closed; ++j) {
    for (std::size_t b = 0; b < account.entries[j].values().size(); ++b) {
      const double a = account.entries[j][b];
      if (a < -eps) {
        verdict.witness = AccountWitness{j, b, a};
        return verdict;
      }
    }
  }
  verdict.is_arbitrage = true;
  return verdict;
}

DeflatorCheck check_deflator(const MarketPanel& panel, const DeflatorSequence& deflators,
                             double tol) {
  require_measures(panel, deflators);
  DeflatorCheck out;
  out.in_dual_cone = deflators.in_dual_cone();
  for (std::size_t i = 0; i < panel.periods(); ++i) {
    const VectorMeasure lhs = product(panel.price(i), deflators.measures[i]);
    const VectorFunction next(panel.algebra(i + 1),
                              panel.cashflow(i + 1).values() + panel.price(i + 1).values());
    const VectorMeasure rhs = restrict(product(next, deflators.measures[i + 1]), panel.algebra(i));
    const Eigen::MatrixXd diff = (lhs.weights() - rhs.weights()).cwiseAbs();
    Eigen::Index r = 0, c = 0;
    const double worst = diff.maxCoeff(&r, &c);
    if (worst > out.max_violation) {
      out.max_violation = worst;
      out.worst_time = i;
      out.worst_block = static_cast<std::size_t>(r);
      out.worst_component = c;
    }
  }
  out.holds = out.in_dual_cone && out.max_violation <= tol * panel.scale();
  return out;
}

VectorFunction propagate_prices(const MarketPanel& panel, const DeflatorSequence& deflators,
                                std::size_t j, std::size_t k) {
  require_measures(panel, deflators);
  if (!(j < k && k <= panel.periods())) {
    throw Error(ErrorCode::InvalidInterval, "propagate_prices needs j < k <= n");
  }
  const Algebra& base = panel.algebra(j);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(base.block_count()),
                                              panel.instrument_count());
  for (std::size_t i = j + 1; i < k; ++i) {
    acc += restrict(product(panel.cashflow(i), deflators.measures[i]), base).weights();
  }
  const VectorFunction last(panel.algebra(k), panel.cashflow(k).values() + panel.price(k).values());
  acc += restrict(product(last, deflators.measures[k]), base).weights();
  return divide(VectorMeasure(base, std::move(acc)), deflators.measures[j]);
}

std::vector<std::vector<std::size_t>> children(const Filtration& filtration, std::size_t j) {
  const auto parent = filtration.at(j + 1).coarsening_map(filtration.at(j));
  std::vector<std::vector<std::size_t>> out(filtration.at(j).block_count());
  for (std::size_t c = 0; c < parent.size(); ++c) out[parent[c]].push_back(c);
  return out;
}

namespace {

struct NodeSolution {
  bool live = true;
  std::vector<double> child_weights;  // aligned with the node's child list
  ArbitrageCertificate certificate;
};

Eigen::MatrixXd child_rows(const MarketPanel& panel, std::size_t j,
                           const std::vector<std::size_t>& kids) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(kids.size()), panel.instrument_count());
  for (std::size_t r = 0; r < kids.size(); ++r) {
    const auto c = static_cast<Eigen::Index>(kids[r]);
    rows.row(static_cast<Eigen::Index>(r)) =
        panel.cashflow(j + 1).values().row(c) + panel.price(j + 1).values().row(c);
  }
  return rows;
}

NodeSolution solve_node(const MarketPanel& panel, std::size_t j, std::size_t block,
                        const std::vector<std::size_t>& kids, const std::vector<bool>& live_next,
                        double tol) {
  const Eigen::VectorXd x = panel.price(j).row(block);
  std::vector<std::size_t> viable;
  for (std::size_t c : kids) {
    if (live_next[c]) viable.push_back(c);
  }

  NodeSolution out;
  out.child_weights.assign(kids.size(), 0.0);
  if (viable.empty()) {
    if (x.norm() <= tol * (1.0 + x.norm())) return out;
    out.live = false;
    out.certificate.gamma = -x;
    out.certificate.setup_gain = x.squaredNorm();
  } else {
    const OnePeriodMarket local(x, child_rows(panel, j, viable));
    const ConeProjection proj = project_to_cone(local, tol);
    if (auto cert = certificate_from_projection(local, proj, tol)) {
      out.live = false;
      out.certificate = *cert;
    } else {
      for (std::size_t r = 0, v = 0; r < kids.size(); ++r) {
        if (live_next[kids[r]]) out.child_weights[r] = proj.weights(static_cast<Eigen::Index>(v++));
      }
      return out;
    }
  }
  // A certificate that is nonnegative on every child needs no covering later.
  if (viable.size() != kids.size()) {
    const OnePeriodMarket full(x, child_rows(panel, j, kids));
    if (auto cert = find_arbitrage(full, tol)) out.certificate = *cert;
  }
  if (out.certificate.gamma.size() > 0 && !kids.empty()) {
    out.certificate.min_payoff = (child_rows(panel, j, kids) * out.certificate.gamma).minCoeff();
  }
  return out;
}

}  // namespace

TreeDeflatorResult find_tree_deflator(const MarketPanel& panel, double tol) {
  const std::size_t n = panel.periods();
  const Filtration& filt = panel.filtration();

  std::vector<std::vector<NodeSolution>> nodes(n);
  std::vector<std::vector<bool>> live(n + 1);
  live[n].assign(filt.at(n).block_count(), true);
  std::vector<std::vector<std::vector<std::size_t>>> kids(n);

  for (std::size_t jj = n; jj-- > 0;) {
    kids[jj] = children(filt, jj);
    const std::size_t blocks = filt.at(jj).block_count();
    nodes[jj].resize(blocks);
    live[jj].assign(blocks, true);
    for (std::size_t b = 0; b < blocks; ++b) {
      nodes[jj][b] = solve_node(panel, jj, b, kids[jj][b], live[jj + 1], tol);
      live[jj][b] = nodes[jj][b].live;
    }
  }

  TreeDeflatorResult result;
  const bool root_live = std::all_of(live[0].begin(), live[0].end(), [](bool v) { return v; });

  if (root_live) {
    DeflatorSequence seq;
    std::vector<double> w(filt.at(0).block_count(), 1.0);
    seq.measures.emplace_back(filt.at(0), w);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> next(filt.at(j + 1).block_count(), 0.0);
      for (std::size_t b = 0; b < kids[j].size(); ++b) {
        for (std::size_t r = 0; r < kids[j][b].size(); ++r) {
          next[kids[j][b][r]] = seq.measures[j][b] * nodes[j][b].child_weights[r];
        }
      }
      seq.measures.emplace_back(filt.at(j + 1), std::move(next));
    }
    result.deflators = std::move(seq);
    return result;
  }

  // Open every dead root certificate; at each later dead node, top up with
  // that node's own certificate so the account never goes negative.
  const Eigen::Index m = panel.instrument_count();
  std::vector<VectorFunction> trades;
  std::vector<Eigen::MatrixXd> held;
  {
    Eigen::MatrixXd g0 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(filt.at(0).block_count()), m);
    for (std::size_t b = 0; b < live[0].size(); ++b) {
      if (!live[0][b]) g0.row(static_cast<Eigen::Index>(b)) = nodes[0][b].certificate.gamma.transpose();
    }
    held.push_back(g0);
    trades.emplace_back(filt.at(0), g0);
  }
  for (std::size_t j = 1; j <= n; ++j) {
    const Algebra& alg = filt.at(j);
    const auto parent = alg.coarsening_map(filt.at(j - 1));
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(alg.block_count()), m);
    Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(alg.block_count()), m);
    for (std::size_t c = 0; c < alg.block_count(); ++c) {
      const auto ci = static_cast<Eigen::Index>(c);
      const Eigen::VectorXd h = held[j - 1].row(static_cast<Eigen::Index>(parent[c])).transpose();
      if (h.isZero(0.0)) continue;
      g.row(ci) = -h.transpose();
      if (j < n && !live[j][c]) {
        const NodeSolution& node = nodes[j][c];
        const Eigen::VectorXd flow =
            (panel.cashflow(j).values().row(ci) + panel.price(j).values().row(ci)).transpose();
        const double value = h.dot(flow);
        if (value < 0.0) {
          const double lambda = -2.0 * value / node.certificate.setup_gain;
          xi.row(ci) = lambda * node.certificate.gamma.transpose();
          g.row(ci) += xi.row(ci);
        }
      }
    }
    held.push_back(xi);
    trades.emplace_back(alg, g);
  }

  NodeArbitrage arb{0, 0, {}, Strategy(std::move(trades)), {}};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t b = 0; b < live[j].size(); ++b) {
      if (!live[j][b]) arb.dead_nodes.emplace_back(j, b);
    }
  }
  for (std::size_t b = 0; b < live[0].size(); ++b) {
    if (!live[0][b]) {
      arb.block = b;
      arb.certificate = nodes[0][b].certificate;
      break;
    }
  }
  result.arbitrage = std::move(arb);
  return result;
}

ReplicationResult replication_cost(const MarketPanel& panel, const DeflatorSequence& deflators,
                                   const Strategy& strategy, double tol) {
  require_measures(panel, deflators);
  require_strategy(panel, strategy);
  const std::size_t n = panel.periods();
  const double eps = tol * panel.scale();
  if (max_abs(strategy.position(n, panel.filtration()).values()) > eps) {
    throw Error(ErrorCode::NotClosedOut, "replicating strategy is not closed out at t_n");
  }
  const AccountProcess account = account_process(panel, strategy);
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t b = 0; b < account.entries[j].values().size(); ++b) {
      if (std::abs(account.entries[j][b]) > eps) {
        throw NotSelfFinancingError(j, b, account.entries[j][b]);
      }
    }
  }
  std::vector<double> cost = account.entries[0].values();
  for (double& c : cost) c = -c;
  ReplicationResult out{SimpleFunction(panel.algebra(0), std::move(cost)), account.entries[n], 0.0, false};

  const FAMeasure lhs = product(out.cost, deflators.measures[0]);
  const FAMeasure rhs = restrict(product(out.terminal, deflators.measures[n]), panel.algebra(0));
  for (std::size_t b = 0; b < lhs.weights().size(); ++b) {
    out.pairing_residual = std::max(out.pairing_residual, std::abs(lhs[b] - rhs[b]));
  }
  out.pairing_holds = out.pairing_residual <= eps;
  return out;
}

Strategy replicate_payoff(const MarketPanel& panel, const SimpleFunction& payoff, double tol) {
  const std::size_t n = panel.periods();
  const Filtration& filt = panel.filtration();
  const Eigen::Index m = panel.instrument_count();
  SimpleFunction target = lift(payoff, filt.at(n));
  std::vector<Eigen::MatrixXd> xi(n);

  for (std::size_t jj = n; jj-- > 0;) {
    const auto kids = children(filt, jj);
    const std::size_t blocks = filt.at(jj).block_count();
    xi[jj] = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(blocks), m);
    std::vector<double> value(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      const Eigen::MatrixXd rows = child_rows(panel, jj, kids[b]);
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(kids[b].size()));
      for (std::size_t r = 0; r < kids[b].size(); ++r) rhs(static_cast<Eigen::Index>(r)) = target[kids[b][r]];
      const Eigen::VectorXd h = rows.completeOrthogonalDecomposition().solve(rhs);
      const double miss = (rows * h - rhs).cwiseAbs().maxCoeff();
      if (miss > tol * panel.scale() * std::max(1.0, rhs.cwiseAbs().maxCoeff())) {
        throw Error(ErrorCode::InvalidInput, "payoff is not replicable at time " + std::to_string(jj) +
                                                 ", block " + std::to_string(b));
      }
      xi[jj].row(static_cast<Eigen::Index>(b)) = h.transpose();
      value[b] = h.dot(panel.price(jj).row(b));
    }
    target = SimpleFunction(filt.at(jj), std::move(value));
  }

  std::vector<VectorFunction> trades;
  trades.emplace_back(filt.at(0), xi[0]);
  for (std::size_t j = 1; j <= n; ++j) {
    const VectorFunction prev = lift(VectorFunction(filt.at(j - 1), xi[j - 1]), filt.at(j));
    const Eigen::MatrixXd now = j < n ? xi[j] : Eigen::MatrixXd::Zero(prev.values().rows(), m);
    trades.emplace_back(filt.at(j), now - prev.values());
  }
  return Strategy(std::move(trades));
}

MarketPanel binomial_panel(std::size_t steps, double R, double s, double mu, double sigma) {
  if (steps < 1) throw Error(ErrorCode::InvalidInput, "binomial panel needs at least one step");
  Filtration filt = Filtration::binary_tree(steps);
  std::vector<double> times;
  std::vector<VectorFunction> prices;
  for (std::size_t j = 0; j <= steps; ++j) {
    times.push_back(static_cast<double>(j));
    const SimpleFunction z = random_walk(steps, j);
    Eigen::MatrixXd v(static_cast<Eigen::Index>(z.values().size()), 2);
    for (std::size_t b = 0; b < z.values().size(); ++b) {
      const auto bi = static_cast<Eigen::Index>(b);
      v(bi, 0) = std::pow(R, static_cast<double>(j));
      v(bi, 1) = s * std::exp(mu * static_cast<double>(j) + sigma * z[b]);
    }
    prices.emplace_back(filt.at(j), std::move(v));
  }
  return MarketPanel(std::move(times), std::move(filt), std::move(prices), {}, {"bond", "stock"});
}

}  // namespace deflator
