#include "deflator/spec_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "deflator/error.hpp"

namespace deflator {
namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return obj.at(key);
}

double number(const Json& v, const std::string& where) {
  if (!v.is_number()) bad(where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(where + " must be finite");
  return x;
}

double number_field(const Json& obj, const char* key) { return number(field(obj, key), key); }

std::optional<double> optional_number(const Json& obj, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj.at(key), key);
}

std::vector<double> numbers(const Json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Eigen::VectorXd vector(const Json& v, const std::string& where) {
  const auto x = numbers(v, where);
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

Eigen::MatrixXd matrix(const Json& v, Eigen::Index cols, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array of rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(v.size()), cols);
  for (std::size_t r = 0; r < v.size(); ++r) {
    const auto row = numbers(v[r], where + "[" + std::to_string(r) + "]");
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      bad(where + "[" + std::to_string(r) + "] needs " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

std::string text(const Json& v, const std::string& where) {
  if (!v.is_string()) bad(where + " must be a string");
  return v.get<std::string>();
}

Algebra algebra(const Json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array of block indices");
  std::vector<std::size_t> blocks;
  for (const auto& b : v) {
    if (!b.is_number_unsigned()) bad(where + " entries must be nonnegative integers");
    blocks.push_back(b.get<std::size_t>());
  }
  return Algebra(std::move(blocks));
}

std::vector<Algebra> algebras(const Json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array");
  std::vector<Algebra> out;
  for (std::size_t j = 0; j < v.size(); ++j) out.push_back(algebra(v[j], where + "[" + std::to_string(j) + "]"));
  return out;
}

void parse_one_period(const Json& doc, MarketSpec& spec) {
  const Json& inst = field(doc, "instruments");
  if (!inst.is_array() || inst.empty()) bad("instruments must be a nonempty array");
  std::vector<std::string> labels;
  Eigen::VectorXd prices(static_cast<Eigen::Index>(inst.size()));
  for (std::size_t i = 0; i < inst.size(); ++i) {
    labels.push_back(text(field(inst[i], "name"), "instrument name"));
    prices(static_cast<Eigen::Index>(i)) = number_field(inst[i], "price");
  }
  const Json& outcomes = field(doc, "outcomes");
  if (!outcomes.is_array() || outcomes.empty()) bad("outcomes must be a nonempty array");
  Eigen::MatrixXd payoffs(static_cast<Eigen::Index>(outcomes.size()), prices.size());
  std::vector<std::string> atoms;
  for (std::size_t j = 0; j < outcomes.size(); ++j) {
    const Json& o = outcomes[j];
    atoms.push_back(o.contains("label") ? text(o.at("label"), "outcome label") : "w" + std::to_string(j));
    const Eigen::VectorXd row = vector(field(o, "payoff"), "outcome payoff");
    if (row.size() != prices.size()) bad("outcome " + atoms.back() + " payoff length differs from instrument count");
    payoffs.row(static_cast<Eigen::Index>(j)) = row.transpose();
  }
  spec.one_period.emplace(prices, payoffs, labels, atoms);
  if (doc.contains("deflator")) {
    Eigen::VectorXd w = vector(doc.at("deflator"), "deflator");
    if (w.size() != payoffs.rows()) bad("deflator needs one weight per outcome");
    if ((w.array() < 0.0).any()) bad("deflator weights must be nonnegative");
    spec.deflator = std::move(w);
  }
  if (spec.underlying.empty() && labels.size() > 1) spec.underlying = labels[1];
}

std::vector<VectorFunction> per_time(const Json& values, const std::vector<Algebra>& algs,
                                     Eigen::Index m, const std::string& where) {
  if (!values.is_array() || values.size() != algs.size()) {
    bad(where + " needs one entry per algebra (" + std::to_string(algs.size()) + ")");
  }
  std::vector<VectorFunction> out;
  for (std::size_t j = 0; j < algs.size(); ++j) {
    Eigen::MatrixXd v = matrix(values[j], m, where + "[" + std::to_string(j) + "]");
    if (static_cast<std::size_t>(v.rows()) != algs[j].block_count()) {
      bad(where + "[" + std::to_string(j) + "] needs one row per block");
    }
    out.emplace_back(algs[j], std::move(v));
  }
  return out;
}

void parse_panel(const Json& doc, MarketSpec& spec) {
  if (doc.contains("binomial")) {
    const Json& b = doc.at("binomial");
    const Json& steps = field(b, "steps");
    if (!steps.is_number_unsigned()) bad("binomial.steps must be a positive integer");
    spec.panel.emplace(binomial_panel(steps.get<std::size_t>(), number_field(b, "R"),
                                      number_field(b, "s"), number_field(b, "mu"),
                                      number_field(b, "sigma")));
    if (spec.underlying.empty()) spec.underlying = "stock";
    return;
  }
  std::vector<std::string> labels;
  const Json& inst = field(doc, "instruments");
  if (!inst.is_array() || inst.empty()) bad("instruments must be a nonempty array");
  for (const auto& name : inst) labels.push_back(text(name, "instrument name"));
  const auto m = static_cast<Eigen::Index>(labels.size());
  const std::vector<double> times = numbers(field(doc, "times"), "times");
  const std::vector<Algebra> filt = algebras(field(doc, "filtration"), "filtration");
  Filtration filtration(filt);

  const std::vector<Algebra> price_algs =
      doc.contains("price_blocks") ? algebras(doc.at("price_blocks"), "price_blocks") : filt;
  std::vector<VectorFunction> prices = per_time(field(doc, "prices"), price_algs, m, "prices");

  std::vector<VectorFunction> flows;
  if (doc.contains("cashflows")) {
    const Json& c = doc.at("cashflows");
    std::vector<Algebra> flow_algs;
    if (doc.contains("cashflow_blocks")) {
      flow_algs = algebras(doc.at("cashflow_blocks"), "cashflow_blocks");
    } else if (c.is_array() && c.size() + 1 == filt.size()) {
      flow_algs.assign(filt.begin() + 1, filt.end());
    } else {
      flow_algs = filt;
    }
    flows = per_time(c, flow_algs, m, "cashflows");
  }
  spec.panel.emplace(times, std::move(filtration), std::move(prices), std::move(flows), labels);
  if (spec.underlying.empty() && labels.size() > 1) spec.underlying = labels[1];
}

KolmogorovID kolmogorov(const Json& v) {
  KolmogorovID id;
  id.gamma = number_field(v, "gamma");
  const Json& nodes = field(v, "nodes");
  if (!nodes.is_array()) bad("nodes must be an array");
  for (const auto& n : nodes) id.nodes.push_back({number_field(n, "x"), number_field(n, "mass")});
  id.validate();
  return id;
}

}  // namespace

MarketSpec parse_spec(const Json& doc) {
  if (!doc.is_object()) bad("spec must be a JSON object");
  MarketSpec spec;
  spec.kind = text(field(doc, "kind"), "kind");
  if (doc.contains("underlying")) spec.underlying = text(doc.at("underlying"), "underlying");
  if (doc.contains("options")) {
    const Json& opt = doc.at("options");
    if (!opt.is_object()) bad("options must be an object");
    spec.tolerance = optional_number(opt, "tolerance");
    if (spec.tolerance && !(*spec.tolerance > 0.0)) bad("tolerance must be positive");
  }

  if (spec.kind == "one_period") {
    parse_one_period(doc, spec);
  } else if (spec.kind == "panel") {
    parse_panel(doc, spec);
  } else if (spec.kind == "bachelier") {
    BachelierParams p{number_field(doc, "R"), number_field(doc, "s"), number_field(doc, "sigma")};
    p.validate();
    spec.bachelier = p;
    if (doc.contains("hedge_nodes")) {
      const Json& n = doc.at("hedge_nodes");
      if (!n.is_number_unsigned() || n.get<std::size_t>() < 2) bad("hedge_nodes must be an integer >= 2");
      spec.hedge_nodes = n.get<std::size_t>();
    }
  } else if (spec.kind == "gbm") {
    GbmParams p{number_field(doc, "r"), number_field(doc, "s"), number_field(doc, "sigma"), number_field(doc, "t")};
    p.validate();
    spec.gbm = p;
  } else if (spec.kind == "levy") {
    LevyModelParams p;
    p.r = number_field(doc, "r");
    p.s = number_field(doc, "s");
    p.sigma = number_field(doc, "sigma");
    p.t = number_field(doc, "t");
    p.base = kolmogorov(field(doc, "base"));
    p.smoothing = optional_number(doc, "smoothing").value_or(0.0);
    if (!(p.s > 0.0 && p.sigma > 0.0 && p.t > 0.0 && p.smoothing >= 0.0)) {
      bad("levy spec needs s, sigma, t > 0 and smoothing >= 0");
    }
    spec.levy = p;
  } else if (spec.kind == "curve") {
    spec.curve.emplace(numbers(field(doc, "maturities"), "maturities"),
                       numbers(field(doc, "discounts"), "discounts"));
  } else {
    bad("unknown kind \"" + spec.kind + "\"");
  }
  return spec;
}

MarketSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  return parse_spec(doc);
}

DiscountCurve parse_curve_text(std::istream& in) {
  std::vector<double> maturities, discounts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    double t = 0.0, d = 0.0;
    std::string rest;
    if (!(row >> t >> d) || (row >> rest)) {
      bad("curve line " + std::to_string(lineno) + ": expected \"maturity discount\"");
    }
    maturities.push_back(t);
    discounts.push_back(d);
  }
  if (maturities.empty()) bad("curve has no entries");
  return DiscountCurve(std::move(maturities), std::move(discounts));
}

DiscountCurve load_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  if (in.peek() == '{') {
    MarketSpec spec = load_spec(path);
    if (!spec.curve) bad(path.string() + " is not a curve spec");
    return *spec.curve;
  }
  return parse_curve_text(in);
}

Schedule parse_schedule(const std::string& spec_text) {
  auto split = [](const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(item, &used);
      } catch (const std::exception&) {
        bad("schedule entry \"" + item + "\" is not a number");
      }
      if (item.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(x)) {
        bad("schedule entry \"" + item + "\" is not a number");
      }
      out.push_back(x);
    }
    return out;
  };
  const auto semi = spec_text.find(';');
  std::vector<double> times = split(spec_text.substr(0, semi));
  if (semi == std::string::npos) return Schedule::from_times(std::move(times));
  return Schedule(std::move(times), split(spec_text.substr(semi + 1)));
}

double PayoffSpec::operator()(double x) const {
  switch (kind) {
    case Kind::Call:
      return std::max(x - strike, 0.0);
    case Kind::Put:
      return std::max(strike - x, 0.0);
    case Kind::Table:
      break;
  }
  bad("tabulated payoff cannot be evaluated as a function");
}

PayoffSpec parse_payoff(const std::string& spec_text) {
  PayoffSpec p;
  for (const auto& [prefix, kind] : {std::pair{"call:", PayoffSpec::Kind::Call}, std::pair{"put:", PayoffSpec::Kind::Put}}) {
    const std::string pre = prefix;
    if (spec_text.rfind(pre, 0) == 0) {
      p.kind = kind;
      std::size_t used = 0;
      try {
        p.strike = std::stod(spec_text.substr(pre.size()), &used);
      } catch (const std::exception&) {
        bad("payoff strike in \"" + spec_text + "\" is not a number");
      }
      if (used != spec_text.size() - pre.size() || !std::isfinite(p.strike)) {
        bad("payoff strike in \"" + spec_text + "\" is not a number");
      }
      return p;
    }
  }
  std::ifstream in(spec_text);
  if (!in) bad("payoff \"" + spec_text + "\" is neither call:K, put:K nor a readable file");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    bad(spec_text + ": " + e.what());
  }
  p.table = numbers(field(doc, "payoff"), "payoff");
  return p;
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return out;
}

Json to_json(const ArbitrageCertificate& c) {
  return {{"gamma", to_json(c.gamma)}, {"setup_gain", c.setup_gain}, {"min_payoff", c.min_payoff}};
}

Json to_json(const ConeProjection& p) {
  return {{"residual_norm", p.residual_norm},
          {"kkt_residual", p.kkt_residual},
          {"iterations", p.iterations},
          {"projection", to_json(p.x_star)}};
}

Json to_json(const DeflatorSequence& d) {
  Json out = Json::array();
  for (const auto& m : d.measures) out.push_back(m.weights());
  return out;
}

Json to_json(const Strategy& s) {
  Json out = Json::array();
  for (const auto& t : s.trades()) out.push_back(to_json(t.values()));
  return out;
}

Json to_json(const HedgeResult& h) {
  return {{"gamma", to_json(h.gamma)},
          {"hedge_cost", h.hedge_cost},
          {"least_squared_error", h.least_squared_error},
          {"direct_error", h.direct_error},
          {"correlation", h.correlation}};
}

std::string display(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace deflator
