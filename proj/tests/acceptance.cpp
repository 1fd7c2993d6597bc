// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fail.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli_cases.hpp"
#include "deflator/analytic_models.hpp"
#include "deflator/cone_ftap.hpp"
#include "deflator/multi_period.hpp"
#include "deflator/one_period.hpp"
#include "deflator/rates.hpp"
#include "oracles.hpp"

using namespace deflator;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

OnePeriodMarket sampled_market(Eigen::VectorXd x, const std::vector<double>& omegas,
                               const std::function<Eigen::VectorXd(double)>& row) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(omegas.size()), x.size());
  for (std::size_t j = 0; j < omegas.size(); ++j) X.row(static_cast<Eigen::Index>(j)) = row(omegas[j]).transpose();
  return OnePeriodMarket(std::move(x), std::move(X));
}

Outcome criterion1() {
  const OnePeriodMarket m = sampled_market(vec({1, 100, 6}), {90, 95, 100, 105, 110}, [](double w) {
    return vec({1, w, std::max(w - 100, 0.0)});
  });
  const double tol = 1e-9;
  const auto cert = find_arbitrage(m, tol);
  const bool no_deflator = !deflator_from_projection(project_to_cone(m, tol), tol);
  const PositionReport known = verify_position(m, vec({-90, 1, -2}), tol);
  Outcome o;
  o.pass = cert && no_deflator && verify_position(m, cert->gamma, tol).is_arbitrage &&
           std::abs(known.cost + 2.0) <= tol && std::abs(known.min_payoff) <= tol && known.is_arbitrage;
  o.detail = "certificate gain " + fmt("%.3e", cert ? cert->setup_gain : 0.0) + ", quoted position cost " +
             fmt("%.12g", known.cost) + ", min payoff " + fmt("%.12g", known.min_payoff);
  return o;
}

Outcome criterion2() {
  const OnePeriodMarket m = sampled_market(vec({100, 9.1}), {90, 95, 100, 105, 110}, [](double w) {
    return vec({w, std::max(w - 100, 0.0)});
  });
  const double tol = 1e-9;
  const auto cert = find_arbitrage(m, tol);
  std::vector<double> dense;
  for (int i = 0; i <= 400; ++i) dense.push_back(90.0 + 0.05 * i);
  const OnePeriodMarket fine = sampled_market(vec({100, 9.1}), dense, [](double w) {
    return vec({w, std::max(w - 100, 0.0)});
  });
  const PositionReport known = verify_position(fine, vec({1, -11}), tol);
  Outcome o;
  o.pass = cert && verify_position(m, cert->gamma, tol).is_arbitrage && std::abs(known.cost + 0.1) <= tol &&
           known.min_payoff >= 0.0 && known.is_arbitrage;
  o.detail = "quoted position cost " + fmt("%.12g", known.cost) + ", min payoff over 401 samples " +
             fmt("%.12g", known.min_payoff);
  return o;
}

Outcome criterion3() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dm(1, 5), dn(1, 12);
  std::uniform_real_distribution<double> entry(-1.0, 2.0), weight(0.0, 1.0);
  const double tol = 1e-9;
  int certificates = 0, deflators = 0, failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = dm(rng), n = dn(rng);
    Eigen::MatrixXd X(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) X(i, j) = entry(rng);
    Eigen::VectorXd x(m);
    if (trial % 2 == 0) {
      for (int j = 0; j < m; ++j) x(j) = entry(rng);
    } else {
      Eigen::VectorXd pi(n);
      for (int i = 0; i < n; ++i) pi(i) = weight(rng) < 0.3 ? 0.0 : weight(rng);
      x = X.transpose() * pi;
    }
    const OnePeriodMarket market(x, X);
    const auto cert = find_arbitrage(market, tol);
    const auto defl = deflator_from_projection(project_to_cone(market, tol), tol);
    if (cert.has_value() == defl.has_value()) {
      ++failures;
      continue;
    }
    if (cert) {
      ++certificates;
      if (!verify_position(market, cert->gamma, tol).is_arbitrage) ++failures;
    } else {
      ++deflators;
      const double miss = (X.transpose() * defl->atom_weights - x).norm();
      if (miss > tol * (1.0 + x.norm()) || (defl->atom_weights.array() < 0.0).any()) ++failures;
    }
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = std::to_string(certificates) + " certificates, " + std::to_string(deflators) + " deflators, " +
             std::to_string(failures) + " failures";
  return o;
}

Outcome criterion4() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst_price = 0.0, worst_replication = 0.0;
  bool shares_exact = true;
  for (int trial = 0; trial < 100; ++trial) {
    const double R = 0.95 + 0.2 * uni(rng), s = 50.0 + 100.0 * uni(rng);
    const double d = trial % 10 == 0 ? R : R * (0.6 + 0.4 * uni(rng));
    const double u = trial % 10 == 5 ? R : R * (1.0 + 0.6 * uni(rng));
    if (!(d < u)) continue;
    const double k = s * (d + (u - d) * uni(rng));
    const int shape = trial % 4;
    const PayoffFunction V = [=](double x) {
      switch (shape) {
        case 0: return std::max(x - k, 0.0);
        case 1: return std::max(k - x, 0.0);
        case 2: return x > k ? 1.0 : 0.0;
        default: return 0.01 * x * x - 0.5 * x;
      }
    };
    const BinomialQuote q = binomial_price(R, s, d, u, V);
    Eigen::MatrixXd X(2, 2);
    X << R, s * d, R, s * u;
    const OnePeriodMarket market(vec({1.0, s}), X);
    const auto defl = deflator_from_projection(project_to_cone(market));
    if (!defl) return {false, "cone projection reported arbitrage in a d <= R <= u market"};
    const double cone_price = price_payoff(market, *defl, vec({V(s * d), V(s * u)}));
    worst_price = std::max(worst_price, std::abs(cone_price - q.value));
    const double shares = (V(s * u) - V(s * d)) / (s * u - s * d);
    shares_exact = shares_exact && q.shares == shares;
    worst_replication = std::max({worst_replication, std::abs(q.shares * s * d + q.bond * R - V(s * d)),
                                  std::abs(q.shares * s * u + q.bond * R - V(s * u))});
  }
  Outcome o;
  o.pass = worst_price <= 1e-10 && shares_exact && worst_replication <= 1e-10;
  o.detail = "max price gap " + fmt("%.2e", worst_price) + ", shares bit-exact " + (shares_exact ? "yes" : "no") +
             ", max replication miss " + fmt("%.2e", worst_replication);
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::string verdicts;
  for (const auto& f : parity_and_carry_fixtures()) {
    const bool arb = find_arbitrage(f.market).has_value();
    o.pass = o.pass && arb == f.arbitrage_expected;
    verdicts += f.name + (arb ? "=arb " : "=ok ");
    if (f.hedge) {
      const double leak = (f.market.payoffs() * *f.hedge).cwiseAbs().maxCoeff();
      o.pass = o.pass && leak <= 1e-12;
    }
  }
  const double R = 1.05, s = 100.0;
  const auto defl = deflator_from_projection(project_to_cone(cost_of_carry_market(R, s, R * s)));
  double implied = std::nan("");
  if (defl) implied = defl->atom_weights(1) / defl->atom_weights(0);
  const bool up = find_arbitrage(cost_of_carry_market(R, s, R * s + 1e-4)).has_value();
  const bool down = find_arbitrage(cost_of_carry_market(R, s, R * s - 1e-4)).has_value();
  o.pass = o.pass && defl && std::abs(implied - R * s) <= 1e-10 && up && down;
  o.detail = verdicts + "| implied forward " + fmt("%.15g", implied) + " vs Rs " + fmt("%.15g", R * s) +
             ", f = Rs +/- 1e-4 arbitrage: " + (up && down ? "yes" : "no");
  return o;
}

Outcome criterion6() {
  Outcome o;
  double worst_atm = 0.0;
  for (double R : {0.95, 1.0, 1.05}) {
    const BachelierParams p{R, 100.0, 0.2};
    const double price = bachelier_put(p, p.forward()).price;
    const double expected = p.s * p.sigma / std::sqrt(2.0 * std::numbers::pi);
    worst_atm = std::max(worst_atm, std::abs(price - expected) / expected);
  }
  double worst_grid = 0.0;
  int points = 0;
  for (double k : {90.0, 105.0, 120.0})
    for (double sigma : {0.05, 0.15, 0.3})
      for (double R : {0.98, 1.0, 1.05}) {
        const BachelierParams p{R, 100.0, sigma};
        const double f = p.forward();
        const double quad = oracle::normal_expectation(
            [&](double z) { return std::max(k - f * (1.0 + sigma * z), 0.0); }, {(k / f - 1.0) / sigma}) / R;
        worst_grid = std::max(worst_grid, std::abs(bachelier_put(p, k).price - quad) / std::max(1.0, quad));
        ++points;
      }
  const double target = 1.0 / std::sqrt(2.0 - 2.0 / std::numbers::pi);
  double worst_corr = 0.0;
  for (const auto& [R, s, sigma] : {std::tuple{1.0, 100.0, 0.2}, std::tuple{1.05, 50.0, 0.1}, std::tuple{0.97, 250.0, 0.35}}) {
    const double f = R * s;
    auto S = [&](double z) { return f * (1.0 + sigma * z); };
    auto C = [&](double z) { return std::max(S(z) - f, 0.0); };
    const double ec = oracle::normal_expectation(C, {0.0});
    const double ec2 = oracle::normal_expectation([&](double z) { return C(z) * C(z); }, {0.0});
    const double esc = oracle::normal_expectation([&](double z) { return (S(z) - f) * C(z); }, {0.0});
    const double corr = esc / (f * sigma * std::sqrt(ec2 - ec * ec));
    worst_corr = std::max(worst_corr, std::abs(corr - target));
  }
  o.pass = worst_atm <= 4 * std::numeric_limits<double>::epsilon() && points == 27 && worst_grid <= 1e-10 &&
           worst_corr <= 1e-4 && std::abs(atm_call_correlation() - target) == 0.0 &&
           std::abs(target - 0.856) <= 5e-4;
  o.detail = "ATM rel gap " + fmt("%.1e", worst_atm) + ", 27-point grid max gap " + fmt("%.1e", worst_grid) +
             ", correlation " + fmt("%.6f", target) + " (quadrature max gap " + fmt("%.1e", worst_corr) + ")";
  return o;
}

DeflatorSequence binomial_deflators(const MarketPanel& panel, double R) {
  DeflatorSequence seq;
  for (std::size_t j = 0; j <= panel.periods(); ++j) {
    const double w = std::pow(R, -static_cast<double>(j)) * std::pow(0.5, static_cast<double>(j));
    seq.measures.emplace_back(panel.algebra(j), std::vector<double>(panel.algebra(j).block_count(), w));
  }
  return seq;
}

Outcome criterion7() {
  const double R = 1.01, s = 100.0;
  Outcome o;
  std::string detail;
  for (double sigma : {0.005, 0.2}) {
    const double mu = std::log(R / std::cosh(sigma));
    const MarketPanel fair = binomial_panel(6, R, s, mu, sigma);
    const DeflatorCheck check = check_deflator(fair, binomial_deflators(fair, R), 1e-12);
    o.pass = o.pass && check.holds;
    detail += "sigma=" + fmt("%g", sigma) + ": fair violation " + fmt("%.1e", check.max_violation) + "; ";
  }
  const double sigma = 0.005;
  const MarketPanel shifted = binomial_panel(6, R, s, std::log(R / std::cosh(sigma)) + 0.01, sigma);
  const bool old_fails = !check_deflator(shifted, binomial_deflators(shifted, R), 1e-12).holds;
  const TreeDeflatorResult res = find_tree_deflator(shifted);
  bool lifted = false;
  if (res.arbitrage) lifted = is_arbitrage_strategy(shifted, res.arbitrage->strategy).is_arbitrage;
  o.pass = o.pass && old_fails && res.arbitrage && lifted;
  o.detail = detail + "mu+0.01 at sigma=0.005: node certificate " + (res.arbitrage ? "found" : "missing") +
             ", lifted strategy is arbitrage: " + (lifted ? "yes" : "no");
  return o;
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uni(0.5, 1.5);
  double worst = 0.0;
  int trees = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t depth = 1 + trial % 4;
    const Filtration filt = oracle::random_tree(depth, 3, rng);
    const Eigen::Index m = 2;
    DeflatorSequence seq;
    std::vector<Eigen::MatrixXd> X(depth + 1), C(depth + 1);
    for (std::size_t j = 0; j <= depth; ++j) {
      const auto blocks = filt.at(j).block_count();
      std::vector<double> w(blocks);
      for (double& x : w) x = uni(rng) / std::pow(2.0, static_cast<double>(j));
      seq.measures.emplace_back(filt.at(j), w);
      C[j] = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(blocks), m);
      if (j > 0) C[j] = Eigen::MatrixXd::NullaryExpr(static_cast<Eigen::Index>(blocks), m, [&] { return uni(rng) - 0.5; });
    }
    X[depth] = Eigen::MatrixXd::NullaryExpr(static_cast<Eigen::Index>(filt.at(depth).block_count()), m,
                                            [&] { return 10.0 * uni(rng); });
    for (std::size_t j = depth; j-- > 0;) {
      const auto kids = oracle::kids_of(filt, j);
      X[j] = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kids.size()), m);
      for (std::size_t b = 0; b < kids.size(); ++b) {
        for (std::size_t c : kids[b]) {
          X[j].row(static_cast<Eigen::Index>(b)) +=
              (C[j + 1].row(static_cast<Eigen::Index>(c)) + X[j + 1].row(static_cast<Eigen::Index>(c))) *
              seq.measures[j + 1][c];
        }
        X[j].row(static_cast<Eigen::Index>(b)) /= seq.measures[j][b];
      }
    }
    std::vector<double> times;
    std::vector<VectorFunction> prices, flows;
    for (std::size_t j = 0; j <= depth; ++j) {
      times.push_back(static_cast<double>(j));
      prices.emplace_back(filt.at(j), X[j]);
      flows.emplace_back(filt.at(j), C[j]);
    }
    const MarketPanel panel(times, filt, prices, flows);
    for (std::size_t j = 0; j < depth; ++j)
      for (std::size_t k = j + 1; k <= depth; ++k)
        worst = std::max(worst, (propagate_prices(panel, seq, j, k).values() - X[j]).cwiseAbs().maxCoeff());
    ++trees;
  }

  const double R = 1.02, sigma = 0.1, s = 100.0, strike = 100.0;
  const double mu = std::log(R / std::cosh(sigma));
  const MarketPanel panel = binomial_panel(3, R, s, mu, sigma);
  std::vector<double> payoff;
  for (std::size_t b = 0; b < panel.algebra(3).block_count(); ++b) {
    payoff.push_back(std::max(panel.price(3).values()(static_cast<Eigen::Index>(b), 1) - strike, 0.0));
  }
  const Strategy strategy = replicate_payoff(panel, SimpleFunction(panel.algebra(3), payoff));
  const ReplicationResult rep = replication_cost(panel, binomial_deflators(panel, R), strategy);
  const double up = std::exp(mu + sigma), down = std::exp(mu - sigma);
  const double q = (R - down) / (up - down);
  std::vector<double> v;
  for (int i = 0; i <= 3; ++i) v.push_back(std::max(s * std::pow(up, i) * std::pow(down, 3 - i) - strike, 0.0));
  for (int step = 3; step > 0; --step) {
    for (int i = 0; i < step; ++i) v[i] = (q * v[i + 1] + (1.0 - q) * v[i]) / R;
  }
  const double gap = std::abs(rep.cost[0] - v[0]);
  Outcome o;
  o.pass = trees == 25 && worst <= 1e-10 && rep.pairing_residual <= 1e-12 && gap <= 1e-12;
  o.detail = "propagation max gap " + fmt("%.1e", worst) + " over 25 trees, pairing residual " +
             fmt("%.1e", rep.pairing_residual) + ", replication cost " + fmt("%.12g", rep.cost[0]) +
             " vs backward induction " + fmt("%.12g", v[0]);
  return o;
}

double ho_lee_martingale_gap(double sigma, double t, double u) {
  const HoLeeParams p = HoLeeParams::constant([](double s) { return 0.02 + 0.01 * s; }, sigma);
  // (B_t, I) jointly normal with I = int_0^t sigma B_s ds.
  const double var_i = sigma * sigma * t * t * t / 3.0, cov = sigma * t * t / 2.0;
  const double a = cov / std::sqrt(t), b = std::sqrt(std::max(0.0, var_i - a * a));
  const double drift = 0.02 * t + 0.005 * t * t;
  const double lhs = oracle::normal_expectation([&](double z1) {
    const double d = ho_lee_discount(p, t, u, std::sqrt(t) * z1);
    return d * oracle::normal_expectation([&](double z2) { return std::exp(-drift + a * z1 + b * z2); });
  });
  const double rhs = ho_lee_discount(p, 0.0, u, 0.0);
  return std::abs(lhs - rhs) / rhs;
}

Outcome criterion9() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst_leg = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const Filtration filt = oracle::random_tree(n, 3, rng);
    ShortRateProcess rates;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> r(filt.at(j).block_count());
      for (double& x : r) x = 0.97 + 0.11 * uni(rng);
      rates.rates.emplace_back(filt.at(j), r);
    }
    std::vector<double> p(filt.atom_count());
    double total = 0.0;
    for (double& x : p) total += (x = 0.1 + uni(rng));
    for (double& x : p) x /= total;
    const DeflatorSequence seq = deflators_from_short_rate(filt, rates, FAMeasure::on_atoms(p));
    std::vector<double> times = {0.0}, fractions;
    for (std::size_t j = 1; j <= n; ++j) {
      fractions.push_back(0.2 + 0.8 * uni(rng));
      times.push_back(times.back() + fractions.back());
    }
    worst_leg = std::max(worst_leg, floating_leg_value(seq, Schedule(times, fractions)).max_violation);
  }

  double worst_par = 0.0;
  bool swap_exact = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> mats, discs;
    double t = 0.0, logd = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double dt = 0.25 + 0.75 * uni(rng);
      t += dt;
      logd -= (-0.02 + 0.1 * uni(rng)) * dt;
      mats.push_back(t);
      discs.push_back(std::exp(logd));
    }
    const DiscountCurve curve(mats, discs);
    std::vector<double> times = {0.0};
    times.insert(times.end(), mats.begin(), mats.begin() + 1 + trial % 8);
    const Schedule sch = Schedule::from_times(times);
    worst_par = std::max(worst_par, std::abs(bond_price(curve, sch, par_coupon(curve, sch)) - 1.0));
    const Schedule one({mats[trial % 4], mats[trial % 4 + 1]}, {0.1 + uni(rng)});
    swap_exact = swap_exact && swap_par(curve, one, 0.0) == forward_rate(curve, one.times[0], one.times[1], one.fractions[0]);
  }

  const HoLeeParams hl = HoLeeParams::constant([](double) { return 0.03; }, 0.01);
  bool convexity_ok = std::abs(ho_lee_convexity(hl, 2.0) - 2e-4) <= 1e-18;
  for (double t : {0.5, 1.0, 2.0, 7.3}) {
    convexity_ok = convexity_ok && ho_lee_convexity(hl, t) == 0.5 * 0.01 * 0.01 * t * t &&
                   ho_lee_convexity(hl, 2.0 * t) == 4.0 * ho_lee_convexity(hl, t);
  }
  const double gap = std::max(ho_lee_martingale_gap(0.01, 1.0, 3.0), ho_lee_martingale_gap(0.05, 2.0, 5.0));

  Outcome o;
  o.pass = worst_leg <= 1e-12 && worst_par <= 1e-12 && swap_exact && convexity_ok && gap <= 1e-8;
  o.detail = "floating leg max violation " + fmt("%.1e", worst_leg) + ", par roundtrip max gap " +
             fmt("%.1e", worst_par) + ", swap==FRA bit-exact " + (swap_exact ? "yes" : "no") +
             ", convexity checks " + (convexity_ok ? "ok" : "bad") + ", Ho-Lee martingale rel gap " + fmt("%.1e", gap);
  return o;
}

Outcome criterion10() {
  double worst_quad = 0.0, worst_delta = 0.0, worst_gamma = 0.0, worst_levy = 0.0;
  for (const GbmParams& p : {GbmParams{0.05, 100.0, 0.2, 1.0}, GbmParams{0.01, 50.0, 0.4, 2.5}}) {
    for (double mk : {0.8, 1.0, 1.2}) {
      const double k = mk * p.s;
      const GbmPutQuote q = gbm_put(p, k);
      const double vol = p.sigma * std::sqrt(p.t), f = p.s * std::exp(p.r * p.t);
      const double kink = (std::log(k / f) + 0.5 * vol * vol) / vol;
      const double quad = oracle::normal_expectation(
          [&](double z) { return std::max(k - f * std::exp(vol * z - 0.5 * vol * vol), 0.0); }, {kink});
      worst_quad = std::max(worst_quad, std::abs(q.forward_value - quad) / quad);

      const double h = 1e-4 * p.s;
      auto pv = [&](double s) {
        GbmParams b = p;
        b.s = s;
        return gbm_put(b, k).pv;
      };
      const double fd_delta = (pv(p.s + h) - pv(p.s - h)) / (2.0 * h);
      const double fd_gamma = (pv(p.s + h) - 2.0 * pv(p.s) + pv(p.s - h)) / (h * h);
      worst_delta = std::max(worst_delta, std::abs(fd_delta - q.delta) / std::abs(q.delta));
      worst_gamma = std::max(worst_gamma, std::abs(fd_gamma - q.gamma) / std::abs(q.gamma));

      LevyModelParams lp;
      lp.r = p.r;
      lp.s = p.s;
      lp.sigma = p.sigma;
      lp.t = p.t;
      lp.base = KolmogorovID{0.0, {{0.0, 1.0}}};
      worst_levy = std::max(worst_levy, std::abs(levy_put(lp, k) - q.forward_value) / q.forward_value);
    }
  }
  const KolmogorovID normal{0.0, {{0.0, 1.0}}};
  bool tilt_exact = true;
  for (double s : {0.1, 0.3, 1.7}) {
    const KolmogorovID star = k_transform(normal, s);
    tilt_exact = tilt_exact && star.gamma == s && star.nodes.size() == 1 && star.nodes[0].x == 0.0 &&
                 star.nodes[0].mass == 1.0;
  }
  bool compose_exact = true;
  for (const auto& [s, t] : {std::pair{0.25, 0.5}, std::pair{0.1, 0.7}, std::pair{-0.3, 0.9}}) {
    const KolmogorovID twice = k_transform(k_transform(normal, s), t);
    const KolmogorovID once = k_transform(normal, s + t);
    compose_exact = compose_exact && twice.gamma == once.gamma && twice.nodes[0].mass == once.nodes[0].mass;
  }
  // Node lists away from zero: same identity, compared to rounding.
  const KolmogorovID jumps{0.1, {{-0.5, 0.2}, {0.0, 0.5}, {0.75, 0.3}}};
  double compose_gap = 0.0;
  {
    const KolmogorovID twice = k_transform(k_transform(jumps, 0.4), 0.35);
    const KolmogorovID once = k_transform(jumps, 0.75);
    compose_gap = std::abs(twice.gamma - once.gamma) / std::abs(once.gamma);
    for (std::size_t i = 0; i < once.nodes.size(); ++i)
      compose_gap = std::max(compose_gap, std::abs(twice.nodes[i].mass - once.nodes[i].mass) / once.nodes[i].mass);
  }
  Outcome o;
  o.pass = worst_quad <= 1e-8 && worst_delta <= 1e-6 && worst_gamma <= 1e-6 && worst_levy <= 1e-6 && tilt_exact &&
           compose_exact && compose_gap <= 8 * std::numeric_limits<double>::epsilon();
  o.detail = "quadrature rel " + fmt("%.1e", worst_quad) + ", delta FD rel " + fmt("%.1e", worst_delta) +
             ", gamma FD rel " + fmt("%.1e", worst_gamma) + ", Levy vs GBM rel " + fmt("%.1e", worst_levy) +
             ", normal tilt exact " + (tilt_exact ? "yes" : "no") + ", composition exact " +
             (compose_exact ? "yes" : "no") + " (3-node rel " + fmt("%.1e", compose_gap) + ")";
  return o;
}

Outcome criterion11() {
  int mismatched = 0, wrong_exit = 0, unstable = 0;
  for (const auto& c : cli_cases::kCases) {
    const auto first = cli_cases::run(DEFLATOR_BIN, SOURCE_DIR, c.args);
    const auto second = cli_cases::run(DEFLATOR_BIN, SOURCE_DIR, c.args);
    std::ifstream in(std::string(SOURCE_DIR) + "/tests/golden/" + c.name + ".json", std::ios::binary);
    std::stringstream golden;
    golden << in.rdbuf();
    if (!in || golden.str() != first.out) ++mismatched;
    if (first.exit_code != c.exit_code || second.exit_code != c.exit_code) ++wrong_exit;
    if (first.out != second.out) ++unstable;
  }
  Outcome o;
  o.pass = mismatched == 0 && wrong_exit == 0 && unstable == 0;
  o.detail = std::to_string(cli_cases::kCases.size()) + " cases: " + std::to_string(mismatched) +
             " golden mismatches, " + std::to_string(wrong_exit) + " wrong exit codes, " + std::to_string(unstable) +
             " non-identical reruns";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Call-spread market arbitrage", criterion1},
      {"Stock and call market arbitrage", criterion2},
      {"Dichotomy on 1000 random markets", criterion3},
      {"Binomial oracle equivalence", criterion4},
      {"Put-call parity and carry", criterion5},
      {"Bachelier formulas", criterion6},
      {"Multi-period binomial", criterion7},
      {"Price propagation and replication", criterion8},
      {"Fixed income", criterion9},
      {"GBM and Levy pricing", criterion10},
      {"CLI goldens and exit codes", criterion11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
