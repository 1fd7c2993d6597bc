#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace deflator::cli {

enum ExitCode : int {
  kDeflator = 0,
  kInputError = 2,
  kArbitrage = 3,
  kSingularGram = 4,
};

struct Options {
  std::optional<double> tol;  // overrides options.tolerance from the input file
  std::string payoff;         // call:K | put:K | payoff file
  std::string schedule;       // t0,...,tn;d1,...,dn
  std::string quantity;       // par | fra | swap | price
  double coupon = 0.0;
  double at = 0.0;            // swap valuation time
};

// Each command writes one JSON document to `out`, diagnostics to `err`, and
// returns the exit code.
int detect(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err);
int price(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err);
int hedge(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err);
int curve(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace deflator::cli
