#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "deflator/analytic_models.hpp"
#include "deflator/cone_ftap.hpp"
#include "deflator/multi_period.hpp"
#include "deflator/one_period.hpp"
#include "deflator/rates.hpp"

namespace deflator {

using Json = nlohmann::json;

// A loaded spec file; `kind` says which of the optional members is set.
// Layout is documented in docs/spec_format.md.
struct MarketSpec {
  std::string kind;  // one_period | panel | bachelier | gbm | levy | curve
  std::optional<double> tolerance;
  std::string underlying;  // instrument that built-in payoffs read

  std::optional<OnePeriodMarket> one_period;
  std::optional<Eigen::VectorXd> deflator;  // explicit atom weights, one_period only
  std::optional<MarketPanel> panel;
  std::optional<BachelierParams> bachelier;
  std::size_t hedge_nodes = 64;  // Gauss-Hermite atoms for the sampled Bachelier market
  std::optional<GbmParams> gbm;
  std::optional<LevyModelParams> levy;
  std::optional<DiscountCurve> curve;
};

// Throws Error(InvalidInput) for schema violations, non-finite numbers and
// unreadable files.
MarketSpec parse_spec(const Json& doc);
MarketSpec load_spec(const std::filesystem::path& path);

// Text curve: one "maturity discount" pair per line; blank lines and lines
// starting with '#' are skipped.
DiscountCurve parse_curve_text(std::istream& in);
DiscountCurve load_curve(const std::filesystem::path& path);

// "t0,t1,...,tn;d1,...,dn"; the fraction list may be omitted.
Schedule parse_schedule(const std::string& text);

struct PayoffSpec {
  enum class Kind { Call, Put, Table } kind = Kind::Table;
  double strike = 0.0;
  std::vector<double> table;  // one value per atom (one_period) or A_n block (panel)

  double operator()(double x) const;
};

// "call:K", "put:K", or a path to {"payoff": [...]}.
PayoffSpec parse_payoff(const std::string& text);

Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);
Json to_json(const ArbitrageCertificate& c);
Json to_json(const ConeProjection& p);
Json to_json(const DeflatorSequence& d);
Json to_json(const Strategy& s);
Json to_json(const HedgeResult& h);

// 12 significant digits for display next to the full-precision value.
std::string display(double x);

}  // namespace deflator
