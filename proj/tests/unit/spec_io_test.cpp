#include <gtest/gtest.h>

#include <sstream>

#include "deflator/error.hpp"
#include "deflator/spec_io.hpp"

using namespace deflator;

namespace {
std::string fixture(const std::string& name) { return std::string(SOURCE_DIR) + "/data/fixtures/" + name; }
}  // namespace

TEST(SpecIo, OnePeriodFixture) {
  const MarketSpec s = load_spec(fixture("call_spread.json"));
  ASSERT_EQ(s.kind, "one_period");
  ASSERT_TRUE(s.one_period);
  EXPECT_EQ(s.one_period->prices(), Eigen::Vector3d(1, 100, 6));
  EXPECT_EQ(s.one_period->atom_count(), 5);
  EXPECT_EQ(s.underlying, "stock");
}

TEST(SpecIo, BinomialPanelGenerator) {
  const MarketSpec s = load_spec(fixture("panel_binomial.json"));
  ASSERT_TRUE(s.panel);
  EXPECT_EQ(s.panel->periods(), 3u);
  EXPECT_EQ(s.panel->algebra(3).block_count(), 8u);
}

TEST(SpecIo, RejectsBadDocuments) {
  EXPECT_THROW(load_spec(fixture("malformed.json")), Error);
  EXPECT_THROW(load_spec(fixture("bad_kind.json")), Error);
  EXPECT_THROW(load_spec(fixture("does_not_exist.json")), Error);
  EXPECT_THROW(parse_spec(Json::parse(R"({"kind":"one_period","instruments":[{"name":"a","price":1}],"outcomes":[{"label":"w","payoff":[1,2]}]})")),
               Error);
}

TEST(SpecIo, CurveText) {
  std::istringstream in("# maturity discount\n\n1 0.95\n2 0.90\n");
  const DiscountCurve c = parse_curve_text(in);
  EXPECT_EQ(c.discount(2.0), 0.90);
  std::istringstream bad("1 0.95\n2 abc\n");
  EXPECT_THROW(parse_curve_text(bad), Error);
}

TEST(SpecIo, Schedule) {
  const Schedule s = parse_schedule("0,1,2;1,0.5");
  EXPECT_EQ(s.times, (std::vector<double>{0, 1, 2}));
  EXPECT_EQ(s.fractions, (std::vector<double>{1, 0.5}));
  EXPECT_EQ(parse_schedule("0,0.5,1.5").fractions, (std::vector<double>{0.5, 1.0}));
  EXPECT_THROW(parse_schedule("0"), Error);
  EXPECT_THROW(parse_schedule("0,1;1,2"), Error);
  EXPECT_THROW(parse_schedule("0,x"), Error);
}

TEST(SpecIo, Payoffs) {
  const PayoffSpec call = parse_payoff("call:100");
  EXPECT_EQ(call(110.0), 10.0);
  EXPECT_EQ(call(90.0), 0.0);
  EXPECT_EQ(parse_payoff("put:100")(90.0), 10.0);
  EXPECT_THROW(parse_payoff("straddle:100"), Error);
  EXPECT_THROW(parse_payoff("call:abc"), Error);
  const PayoffSpec table = parse_payoff(fixture("payoff_digital.json"));
  EXPECT_EQ(table.table, (std::vector<double>{0, 1}));
}

TEST(SpecIo, JsonRoundTripsDoubles) {
  const Eigen::VectorXd v = Eigen::Vector3d(0.1, 1.0 / 3.0, -2.5e-300);
  const Json j = to_json(v);
  const Json back = Json::parse(j.dump());
  for (int i = 0; i < 3; ++i) EXPECT_EQ(back[static_cast<std::size_t>(i)].get<double>(), v(i));
  EXPECT_EQ(display(0.054054054054054036), "0.0540540540541");
}
