#include "deflator/cli.hpp"

#include <cmath>
#include <functional>

#include <CLI11.hpp>

#include "deflator/error.hpp"
#include "deflator/spec_io.hpp"

namespace deflator::cli {
namespace {

double tolerance(const MarketSpec& spec, const Options& opts) {
  return opts.tol.value_or(spec.tolerance.value_or(kDefaultTol));
}

void emit(std::ostream& out, const Json& doc) { out << doc.dump(2) << '\n'; }

Json scalar(double x) { return {{"value", x}, {"display", display(x)}}; }

std::string instrument_name(const std::vector<std::string>& labels, std::size_t i) {
  return i < labels.size() ? labels[i] : "#" + std::to_string(i);
}

// Wraps a command so library failures map onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const SingularGramError& e) {
    err << e.what() << '\n';
    return kSingularGram;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::ArbitrageInInput ? kArbitrage : kInputError;
  } catch (const std::exception& e) {
    err << "InvalidInput: " << e.what() << '\n';
    return kInputError;
  }
}

Eigen::Index underlying_column(const OnePeriodMarket& market, const MarketSpec& spec) {
  if (spec.underlying.empty()) throw Error(ErrorCode::InvalidInput, "spec names no underlying instrument");
  return market.instrument_index(spec.underlying);
}

Eigen::VectorXd one_period_payoff(const MarketSpec& spec, const PayoffSpec& payoff) {
  const OnePeriodMarket& market = *spec.one_period;
  if (payoff.kind == PayoffSpec::Kind::Table) {
    if (static_cast<Eigen::Index>(payoff.table.size()) != market.atom_count()) {
      throw Error(ErrorCode::DimensionMismatch, "payoff table needs one value per outcome");
    }
    return Eigen::Map<const Eigen::VectorXd>(payoff.table.data(), market.atom_count());
  }
  return sample_payoff(market, underlying_column(market, spec), payoff);
}

// The input file's explicit deflator if it reprices the market, otherwise the
// projection deflator. Arbitrage is reported through `arbitrage`.
std::optional<Deflator> one_period_deflator(const MarketSpec& spec, double tol, Json& arbitrage) {
  const OnePeriodMarket& market = *spec.one_period;
  if (spec.deflator) {
    const Eigen::VectorXd repriced = market.payoffs().transpose() * *spec.deflator;
    if ((repriced - market.prices()).norm() > tol * (1.0 + market.prices().norm())) {
      throw Error(ErrorCode::InvalidInput, "explicit deflator does not reprice the instruments");
    }
    return Deflator{*spec.deflator};
  }
  const ConeProjection proj = project_to_cone(market, tol);
  if (auto d = deflator_from_projection(proj, tol)) return d;
  auto cert = certificate_from_projection(market, proj, tol);
  arbitrage = {{"verdict", "arbitrage"}, {"certificate", to_json(*cert)}, {"diagnostics", to_json(proj)}};
  return std::nullopt;
}

int report_arbitrage(Json doc, const char* command, std::ostream& out, std::ostream& err) {
  doc["command"] = command;
  emit(out, doc);
  err << to_string(ErrorCode::ArbitrageInInput) << ": market admits arbitrage\n";
  return kArbitrage;
}

Json panel_arbitrage_json(const MarketPanel& panel, const NodeArbitrage& arb, double tol) {
  Json dead = Json::array();
  for (const auto& [t, b] : arb.dead_nodes) dead.push_back({t, b});
  const ArbitrageVerdict verdict = is_arbitrage_strategy(panel, arb.strategy, tol);
  const AccountProcess account = account_process(panel, arb.strategy);
  Json entries = Json::array();
  for (const auto& e : account.entries) entries.push_back(e.values());
  Json cert = to_json(arb.certificate);
  cert["time"] = arb.time;
  cert["block"] = arb.block;
  return {{"verdict", "arbitrage"},
          {"certificate", cert},
          {"strategy", to_json(arb.strategy)},
          {"account", entries},
          {"dead_nodes", dead},
          {"verification", {{"is_arbitrage", verdict.is_arbitrage}, {"closed_out_at", verdict.closed_out_at}}}};
}

SimpleFunction panel_payoff(const MarketSpec& spec, const PayoffSpec& payoff) {
  const MarketPanel& panel = *spec.panel;
  const std::size_t n = panel.periods();
  const Algebra& last = panel.algebra(n);
  if (payoff.kind == PayoffSpec::Kind::Table) {
    if (payoff.table.size() != last.block_count()) {
      throw Error(ErrorCode::DimensionMismatch, "payoff table needs one value per final block");
    }
    return SimpleFunction(last, payoff.table);
  }
  const auto& labels = panel.labels();
  auto it = std::find(labels.begin(), labels.end(), spec.underlying);
  if (spec.underlying.empty() || it == labels.end()) {
    throw Error(ErrorCode::InvalidInput, "underlying \"" + spec.underlying + "\" is not a panel instrument");
  }
  const auto col = static_cast<Eigen::Index>(it - labels.begin());
  std::vector<double> v;
  for (std::size_t b = 0; b < last.block_count(); ++b) {
    v.push_back(payoff(panel.price(n).values()(static_cast<Eigen::Index>(b), col)));
  }
  return SimpleFunction(last, std::move(v));
}

void require_builtin(const PayoffSpec& payoff, const std::string& kind) {
  if (payoff.kind == PayoffSpec::Kind::Table) {
    throw Error(ErrorCode::InvalidInput, kind + " specs take call:K or put:K payoffs only");
  }
}

Json model_price(const MarketSpec& spec, const PayoffSpec& payoff) {
  require_builtin(payoff, spec.kind);
  const bool call = payoff.kind == PayoffSpec::Kind::Call;
  const double k = payoff.strike;
  Json doc = {{"kind", spec.kind}, {"payoff", call ? "call" : "put"}, {"strike", k}};

  if (spec.bachelier) {
    const BachelierParams& p = *spec.bachelier;
    const PutQuote put = bachelier_put(p, k);
    const double f = p.forward();
    const double quad =
        normal_expectation([&](double z) { return payoff(f * (1.0 + p.sigma * z)); }, {(k / f - 1.0) / p.sigma}) / p.R;
    const double closed = call ? bachelier_call(p, k) : put.price;
    doc["price"] = scalar(closed);
    doc["delta"] = call ? put.delta + 1.0 : put.delta;
    doc["quadrature"] = quad;
    doc["difference"] = closed - quad;
  } else if (spec.gbm) {
    const GbmParams& p = *spec.gbm;
    const GbmPutQuote put = gbm_put(p, k);
    const double disc = std::exp(-p.r * p.t);
    const double vol = p.sigma * std::sqrt(p.t);
    const double f = p.s / disc;
    const double kink = (std::log(k / f) + 0.5 * vol * vol) / vol;
    const double quad =
        disc * normal_expectation([&](double z) { return payoff(f * std::exp(vol * z - 0.5 * vol * vol)); }, {kink});
    const double closed = call ? put.pv + p.s - k * disc : put.pv;
    doc["price"] = scalar(closed);
    doc["delta"] = call ? put.delta + 1.0 : put.delta;
    doc["gamma"] = put.gamma;
    doc["quadrature"] = quad;
    doc["difference"] = closed - quad;
  } else {
    const LevyModelParams& p = *spec.levy;
    const double disc = std::exp(-p.r * p.t);
    const double put = disc * levy_put(p, k);
    doc["price"] = scalar(call ? put + p.s - k * disc : put);
  }
  return doc;
}

OnePeriodMarket bachelier_market(const BachelierParams& p, std::size_t nodes, Deflator& deflator) {
  const GaussRule rule = gauss_hermite_normal(nodes);
  const auto n = static_cast<Eigen::Index>(nodes);
  Eigen::MatrixXd X(n, 2);
  deflator.atom_weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    X(i, 0) = p.R;
    X(i, 1) = p.forward() * (1.0 + p.sigma * rule.nodes[si]);
    deflator.atom_weights(i) = rule.weights[si] / p.R;
  }
  return OnePeriodMarket(Eigen::Vector2d(1.0, p.s), X, {"bond", "stock"});
}

}  // namespace

int detect(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MarketSpec spec = load_spec(path);
    const double tol = tolerance(spec, opts);
    Json doc = {{"command", "detect"}, {"kind", spec.kind}, {"tolerance", tol}};
    if (spec.one_period) {
      const OnePeriodMarket& market = *spec.one_period;
      const ConeProjection proj = project_to_cone(market, tol);
      doc["diagnostics"] = to_json(proj);
      if (auto d = deflator_from_projection(proj, tol)) {
        doc["verdict"] = "deflator";
        doc["weights"] = to_json(d->atom_weights);
        emit(out, doc);
        return int(kDeflator);
      }
      doc["verdict"] = "arbitrage";
      doc["certificate"] = to_json(*certificate_from_projection(market, proj, tol));
      emit(out, doc);
      return int(kArbitrage);
    }
    if (spec.panel) {
      const TreeDeflatorResult res = find_tree_deflator(*spec.panel, tol);
      if (res.deflators) {
        const DeflatorCheck check = check_deflator(*spec.panel, *res.deflators, tol);
        doc["verdict"] = "deflator";
        doc["deflators"] = to_json(*res.deflators);
        doc["diagnostics"] = {{"max_violation", check.max_violation}, {"holds", check.holds}};
        emit(out, doc);
        return int(kDeflator);
      }
      doc.update(panel_arbitrage_json(*spec.panel, *res.arbitrage, tol));
      emit(out, doc);
      return int(kArbitrage);
    }
    throw Error(ErrorCode::InvalidInput, "detect supports one_period and panel specs, not " + spec.kind);
  });
}

int price(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MarketSpec spec = load_spec(path);
    const PayoffSpec payoff = parse_payoff(opts.payoff);
    const double tol = tolerance(spec, opts);
    Json doc = {{"command", "price"}, {"kind", spec.kind}};
    if (spec.one_period) {
      Json arb;
      const auto deflator = one_period_deflator(spec, tol, arb);
      if (!deflator) return report_arbitrage(arb, "price", out, err);
      const double p = price_payoff(*spec.one_period, *deflator, one_period_payoff(spec, payoff));
      doc["price"] = scalar(p);
      doc["deflator"] = to_json(deflator->atom_weights);
      emit(out, doc);
      return int(kDeflator);
    }
    if (spec.panel) {
      const MarketPanel& panel = *spec.panel;
      const TreeDeflatorResult res = find_tree_deflator(panel, tol);
      if (!res.deflators) {
        Json arb = panel_arbitrage_json(panel, *res.arbitrage, tol);
        arb["kind"] = spec.kind;
        return report_arbitrage(arb, "price", out, err);
      }
      const auto& pis = res.deflators->measures;
      const SimpleFunction v = panel_payoff(spec, payoff);
      const SimpleFunction p = divide(restrict(product(v, pis.back()), panel.algebra(0)), pis.front());
      Json prices = Json::array(), shown = Json::array();
      for (double x : p.values()) {
        prices.push_back(x);
        shown.push_back(display(x));
      }
      doc["prices"] = prices;
      doc["display"] = shown;
      emit(out, doc);
      return int(kDeflator);
    }
    if (spec.bachelier || spec.gbm || spec.levy) {
      doc.update(model_price(spec, payoff));
      emit(out, doc);
      return int(kDeflator);
    }
    throw Error(ErrorCode::InvalidInput, "price does not support " + spec.kind + " specs");
  });
}

int hedge(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MarketSpec spec = load_spec(path);
    const PayoffSpec payoff = parse_payoff(opts.payoff);
    const double tol = tolerance(spec, opts);
    Json doc = {{"command", "hedge"}, {"kind", spec.kind}};

    std::optional<OnePeriodMarket> market;
    Deflator deflator;
    Eigen::VectorXd v;
    if (spec.one_period) {
      Json arb;
      auto d = one_period_deflator(spec, tol, arb);
      if (!d) return report_arbitrage(arb, "hedge", out, err);
      deflator = *d;
      market = spec.one_period;
      v = one_period_payoff(spec, payoff);
    } else if (spec.bachelier) {
      require_builtin(payoff, spec.kind);
      market = bachelier_market(*spec.bachelier, spec.hedge_nodes, deflator);
      v = sample_payoff(*market, 1, payoff);
      doc["hedge_nodes"] = spec.hedge_nodes;
    } else {
      throw Error(ErrorCode::InvalidInput, "hedge supports one_period and bachelier specs, not " + spec.kind);
    }

    try {
      doc["hedge"] = to_json(least_squares_hedge(*market, deflator, v));
    } catch (const SingularGramError& e) {
      Json names = Json::array();
      for (std::size_t i : e.redundant()) names.push_back(instrument_name(market->labels(), i));
      doc["error"] = to_string(ErrorCode::SingularGram);
      doc["redundant"] = names;
      emit(out, doc);
      err << e.what() << '\n';
      return int(kSingularGram);
    }
    doc["labels"] = market->labels();
    doc["price"] = scalar(price_payoff(*market, deflator, v));
    emit(out, doc);
    return int(kDeflator);
  });
}

int curve(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DiscountCurve c = load_curve(path);
    const Schedule schedule = parse_schedule(opts.schedule);
    Json doc = {{"command", "curve"}, {"quantity", opts.quantity}, {"schedule", schedule.times},
                {"fractions", schedule.fractions}};
    if (opts.quantity == "par") {
      doc.update(scalar(par_coupon(c, schedule)));
    } else if (opts.quantity == "swap") {
      doc["at"] = opts.at;
      doc.update(scalar(swap_par(c, schedule, opts.at)));
    } else if (opts.quantity == "price") {
      doc["coupon"] = opts.coupon;
      doc.update(scalar(bond_price(c, schedule, opts.coupon)));
    } else if (opts.quantity == "fra") {
      Json values = Json::array(), shown = Json::array();
      for (std::size_t j = 1; j < schedule.times.size(); ++j) {
        const double f = forward_rate(c, schedule.times[j - 1], schedule.times[j], schedule.fractions[j - 1]);
        values.push_back(f);
        shown.push_back(display(f));
      }
      doc["values"] = values;
      doc["display"] = shown;
    } else {
      throw Error(ErrorCode::InvalidInput, "unknown curve quantity \"" + opts.quantity + "\"");
    }
    emit(out, doc);
    return int(kDeflator);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arbitrage detection, deflator pricing and hedging"};
  app.require_subcommand(1);
  Options opts;
  std::string path;
  double tol = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("path", path, "spec file")->required();
    sub->add_option("--tol", tol, "classification tolerance")->check(CLI::PositiveNumber);
  };
  CLI::App* det = app.add_subcommand("detect", "classify a market: deflator or arbitrage");
  add_common(det);
  CLI::App* pri = app.add_subcommand("price", "price a payoff with a deflator or model formula");
  add_common(pri);
  pri->add_option("--payoff", opts.payoff, "call:K, put:K or payoff file")->required();
  CLI::App* hed = app.add_subcommand("hedge", "least-squares hedge of a payoff");
  add_common(hed);
  hed->add_option("--payoff", opts.payoff, "call:K, put:K or payoff file")->required();
  CLI::App* cur = app.add_subcommand("curve", "discount curve analytics");
  cur->add_option("path", path, "curve file")->required();
  cur->add_option("quantity", opts.quantity, "par | fra | swap | price")
      ->required()
      ->check(CLI::IsMember({"par", "fra", "swap", "price"}));
  cur->add_option("--schedule", opts.schedule, "t0,t1,...;d1,...")->required();
  cur->add_option("--coupon", opts.coupon, "bond coupon for price");
  cur->add_option("--at", opts.at, "swap valuation time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kDeflator;
  } catch (const CLI::ParseError& e) {
    err << "InvalidInput: " << e.what() << '\n';
    return kInputError;
  }
  for (CLI::App* sub : {det, pri, hed}) {
    if (sub->parsed() && sub->count("--tol") > 0) opts.tol = tol;
  }

  if (det->parsed()) return detect(path, opts, out, err);
  if (pri->parsed()) return price(path, opts, out, err);
  if (hed->parsed()) return hedge(path, opts, out, err);
  return curve(path, opts, out, err);
}

}  // namespace deflator::cli
