#include "deflator/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "deflator/error.hpp"
#include "deflator/quadrature.hpp"

namespace deflator {
namespace {

constexpr double kMaturityMatch = 1e-12;
constexpr double kPredictableTol = 1e-10;

void require_index(const DeflatorSequence& deflators, std::size_t k) {
  if (k >= deflators.measures.size()) {
    throw Error(ErrorCode::InvalidInterval, "time index " + std::to_string(k) + " beyond deflator sequence");
  }
}

void require_positive_fraction(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidInput, "day count fraction must be positive");
  }
}

SimpleFunction map_values(const SimpleFunction& f, const std::function<double(double)>& g) {
  std::vector<double> v = f.values();
  for (double& x : v) x = g(x);
  return SimpleFunction(f.algebra(), std::move(v));
}

}  // namespace

DiscountCurve::DiscountCurve(std::vector<double> maturities, std::vector<double> discounts)
    : maturities_(std::move(maturities)), discounts_(std::move(discounts)) {
  if (maturities_.size() != discounts_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "curve needs one discount per maturity");
  }
  for (std::size_t i = 0; i < maturities_.size(); ++i) {
    const double t = maturities_[i], d = discounts_[i];
    if (!std::isfinite(t) || t < 0.0) throw Error(ErrorCode::InvalidInput, "curve maturities must be finite and >= 0");
    if (i > 0 && !(t > maturities_[i - 1])) throw Error(ErrorCode::InvalidInput, "curve maturities must increase");
    if (!std::isfinite(d) || !(d > 0.0)) throw Error(ErrorCode::InvalidInput, "discount factors must be positive");
    if (t == 0.0 && d != 1.0) throw Error(ErrorCode::InvalidInput, "discount at maturity 0 must be 1");
  }
}

double DiscountCurve::discount(double t) const {
  if (t == 0.0) return 1.0;
  const double slack = kMaturityMatch * std::max(1.0, std::abs(t));
  for (std::size_t i = 0; i < maturities_.size(); ++i) {
    if (std::abs(maturities_[i] - t) <= slack) return discounts_[i];
  }
  throw Error(ErrorCode::MissingMaturity, "no discount factor for maturity " + std::to_string(t));
}

Schedule::Schedule(std::vector<double> t, std::vector<double> d) : times(std::move(t)), fractions(std::move(d)) {
  if (times.size() < 2) throw Error(ErrorCode::InvalidInput, "schedule needs at least one period");
  if (fractions.size() != times.size() - 1) {
    throw Error(ErrorCode::DimensionMismatch, "schedule needs one day count fraction per period");
  }
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (!(times[j] > times[j - 1])) throw Error(ErrorCode::InvalidInput, "schedule times must increase");
  }
  for (double delta : fractions) require_positive_fraction(delta);
}

Schedule Schedule::from_times(std::vector<double> times) {
  std::vector<double> fractions;
  for (std::size_t j = 1; j < times.size(); ++j) fractions.push_back(times[j] - times[j - 1]);
  return Schedule(std::move(times), std::move(fractions));
}

DeflatorSequence deflators_from_short_rate(const Filtration& filtration,
                                           const ShortRateProcess& short_rate, const FAMeasure& P) {
  if (short_rate.rates.size() + 1 != filtration.size()) {
    throw Error(ErrorCode::DimensionMismatch, "need one short rate per period");
  }
  for (const auto& R : short_rate.rates) {
    for (double r : R.values()) {
      if (!(r > 0.0)) throw Error(ErrorCode::NonpositiveRate, "gross short rate must be positive");
    }
  }
  DeflatorSequence seq;
  SimpleFunction discount = SimpleFunction::constant(filtration.at(0), 1.0);
  for (std::size_t j = 0; j < filtration.size(); ++j) {
    const Algebra& alg = filtration.at(j);
    if (j > 0) {
      const SimpleFunction R = lift(short_rate.rates[j - 1], filtration.at(j - 1));
      discount = lift(discount, alg);
      const SimpleFunction Rj = lift(R, alg);
      std::vector<double> v = discount.values();
      for (std::size_t b = 0; b < v.size(); ++b) v[b] /= Rj[b];
      discount = SimpleFunction(alg, std::move(v));
    }
    seq.measures.push_back(product(discount, restrict(P, alg)));
  }
  return seq;
}

MarketPanel short_rate_panel(std::vector<double> times, const Filtration& filtration,
                             const ShortRateProcess& short_rate) {
  if (short_rate.rates.size() + 1 != filtration.size()) {
    throw Error(ErrorCode::DimensionMismatch, "need one short rate per period");
  }
  std::vector<VectorFunction> prices, flows;
  for (std::size_t j = 0; j < filtration.size(); ++j) {
    const Algebra& alg = filtration.at(j);
    prices.emplace_back(alg, Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(alg.block_count()), 1));
    if (j > 0) {
      const SimpleFunction R = lift(lift(short_rate.rates[j - 1], filtration.at(j - 1)), alg);
      Eigen::MatrixXd c(static_cast<Eigen::Index>(alg.block_count()), 1);
      for (std::size_t b = 0; b < alg.block_count(); ++b) c(static_cast<Eigen::Index>(b), 0) = R[b] - 1.0;
      flows.emplace_back(alg, std::move(c));
    }
  }
  return MarketPanel(std::move(times), filtration, std::move(prices), std::move(flows), {"deposit"});
}

SimpleFunction zcb_price(const DeflatorSequence& deflators, std::size_t j, std::size_t k) {
  require_index(deflators, k);
  if (j > k) throw Error(ErrorCode::InvalidInterval, "zero coupon bond needs j <= k");
  const FAMeasure& pj = deflators.measures[j];
  return divide(restrict(deflators.measures[k], pj.algebra()), pj);
}

double forward_rate(const DiscountCurve& curve, double t_j, double t_k, double delta) {
  if (!(t_j < t_k)) throw Error(ErrorCode::InvalidInterval, "forward rate needs t_j < t_k");
  require_positive_fraction(delta);
  const double dj = curve.discount(t_j), dk = curve.discount(t_k);
  return (dj - dk) / (delta * dk);
}

SimpleFunction forward_rate(const DeflatorSequence& deflators, std::size_t i, std::size_t j,
                            std::size_t k, double delta) {
  if (!(i <= j && j < k)) throw Error(ErrorCode::InvalidInterval, "forward rate needs i <= j < k");
  require_positive_fraction(delta);
  const SimpleFunction dj = zcb_price(deflators, i, j);
  const SimpleFunction dk = zcb_price(deflators, i, k);
  std::vector<double> v(dj.values().size());
  for (std::size_t b = 0; b < v.size(); ++b) v[b] = (dj[b] / dk[b] - 1.0) / delta;
  return SimpleFunction(dj.algebra(), std::move(v));
}

double bond_price(const DiscountCurve& curve, const Schedule& schedule, double coupon) {
  const double d0 = curve.discount(schedule.times.front());
  double annuity = 0.0;
  for (std::size_t j = 1; j < schedule.times.size(); ++j) {
    annuity += schedule.fractions[j - 1] * curve.discount(schedule.times[j]);
  }
  return (coupon * annuity + curve.discount(schedule.times.back())) / d0;
}

double par_coupon(const DiscountCurve& curve, const Schedule& schedule) {
  double annuity = 0.0;
  for (std::size_t j = 1; j < schedule.times.size(); ++j) {
    annuity += schedule.fractions[j - 1] * curve.discount(schedule.times[j]);
  }
  return (curve.discount(schedule.times.front()) - curve.discount(schedule.times.back())) / annuity;
}

double swap_par(const DiscountCurve& curve, const Schedule& schedule, double t) {
  if (t > schedule.times.front()) {
    throw Error(ErrorCode::InvalidInterval, "swap valuation time must not follow t_0");
  }
  // D_t(x) = D(x) / D(t); the common factor cancels from the ratio.
  curve.discount(t);
  return par_coupon(curve, schedule);
}

FloatingLegCheck floating_leg_value(const DeflatorSequence& deflators, const Schedule& schedule) {
  const std::size_t n = schedule.periods();
  if (deflators.measures.size() != n + 1) {
    throw Error(ErrorCode::DimensionMismatch, "deflator sequence and schedule lengths differ");
  }
  const Algebra& base = deflators.measures.front().algebra();
  FloatingLegCheck out;
  out.floating.assign(base.block_count(), 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const double delta = schedule.fractions[j - 1];
    const SimpleFunction F = forward_rate(deflators, j - 1, j - 1, j, delta);
    const SimpleFunction payment = map_values(F, [delta](double f) { return f * delta; });
    const FAMeasure& pj = deflators.measures[j];
    const FAMeasure term = restrict(product(lift(payment, pj.algebra()), pj), base);
    for (std::size_t b = 0; b < out.floating.size(); ++b) out.floating[b] += term[b];
  }
  const FAMeasure last = restrict(deflators.measures[n], base);
  for (std::size_t b = 0; b < out.floating.size(); ++b) {
    out.boundary.push_back(deflators.measures[0][b] - last[b]);
    out.max_violation = std::max(out.max_violation, std::abs(out.floating[b] - out.boundary[b]));
  }
  return out;
}

std::vector<SimpleFunction> futures_quotes(const DeflatorSequence& deflators, const FAMeasure& P,
                                           const SimpleFunction& terminal, std::size_t k) {
  require_index(deflators, k);
  for (std::size_t j = 0; j < k; ++j) {
    const Algebra& fine = deflators.measures[j + 1].algebra();
    const Algebra& coarse = deflators.measures[j].algebra();
    const FAMeasure p = restrict(P, fine);
    const auto parent = fine.coarsening_map(coarse);
    std::vector<double> density(coarse.block_count(), std::nan(""));
    for (std::size_t c = 0; c < fine.block_count(); ++c) {
      if (p[c] == 0.0) continue;
      const double d = deflators.measures[j + 1][c] / p[c];
      double& ref = density[parent[c]];
      if (std::isnan(ref)) {
        ref = d;
      } else if (std::abs(d - ref) > kPredictableTol * std::max(std::abs(d), std::abs(ref))) {
        throw Error(ErrorCode::NonPredictableDeflator,
                    "Pi_" + std::to_string(j + 1) + " / P varies within block " +
                        std::to_string(parent[c]) + " of A_" + std::to_string(j));
      }
    }
  }
  const Algebra& ak = deflators.measures[k].algebra();
  const FAMeasure weighted = product(lift(terminal, ak), restrict(P, ak));
  std::vector<SimpleFunction> quotes;
  for (std::size_t j = 0; j <= k; ++j) {
    const Algebra& aj = deflators.measures[j].algebra();
    quotes.push_back(divide(restrict(weighted, aj), restrict(P, aj)));
  }
  return quotes;
}

MarketPanel futures_panel(std::vector<double> times, const Filtration& filtration,
                          const std::vector<SimpleFunction>& quotes) {
  if (quotes.size() != filtration.size()) {
    throw Error(ErrorCode::DimensionMismatch, "need one futures quote per time");
  }
  std::vector<VectorFunction> prices, flows;
  for (std::size_t j = 0; j < quotes.size(); ++j) {
    const Algebra& alg = filtration.at(j);
    prices.push_back(VectorFunction::zero(alg, 1));
    if (j > 0) {
      const SimpleFunction now = lift(quotes[j], alg);
      const SimpleFunction before = lift(quotes[j - 1], alg);
      Eigen::MatrixXd c(static_cast<Eigen::Index>(alg.block_count()), 1);
      for (std::size_t b = 0; b < alg.block_count(); ++b) c(static_cast<Eigen::Index>(b), 0) = now[b] - before[b];
      flows.emplace_back(alg, std::move(c));
    }
  }
  return MarketPanel(std::move(times), filtration, std::move(prices), std::move(flows), {"futures"});
}

double futures_convexity(const std::vector<double>& forward, const std::vector<double>& discount) {
  if (forward.size() != discount.size() || forward.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "convexity needs equally many nonempty F and D samples");
  }
  const auto n = static_cast<double>(forward.size());
  const double mf = std::accumulate(forward.begin(), forward.end(), 0.0) / n;
  const double md = std::accumulate(discount.begin(), discount.end(), 0.0) / n;
  if (md == 0.0) throw Error(ErrorCode::InvalidInput, "mean discount is zero");
  double cov = 0.0;
  for (std::size_t i = 0; i < forward.size(); ++i) cov += (forward[i] - mf) * (discount[i] - md);
  return -(cov / n) / md;
}

HoLeeParams HoLeeParams::constant(std::function<double(double)> phi, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidInput, "Ho-Lee volatility must be nonnegative");
  HoLeeParams p;
  p.phi = std::move(phi);
  p.sigma = [sigma](double) { return sigma; };
  p.Sigma = [sigma](double s) { return sigma * s; };
  p.constant_sigma = sigma;
  return p;
}

double ho_lee_discount(const HoLeeParams& params, double t, double u, double B_t) {
  if (!(u >= t)) throw Error(ErrorCode::InvalidInterval, "Ho-Lee discount needs u >= t");
  const double drift = adaptive_simpson(params.phi, t, u);
  if (params.constant_sigma) {
    const double sigma = *params.constant_sigma, h = u - t;
    return std::exp(-drift + sigma * sigma * h * h * h / 6.0 + sigma * h * B_t);
  }
  const double su = params.Sigma(u);
  const double spread = adaptive_simpson([&](double s) {
    const double d = params.Sigma(s) - su;
    return d * d;
  }, t, u);
  return std::exp(-drift + 0.5 * spread + (su - params.Sigma(t)) * B_t);
}

double ho_lee_convexity(const HoLeeParams& params, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidInterval, "Ho-Lee convexity needs t >= 0");
  if (params.constant_sigma) {
    const double sigma = *params.constant_sigma;
    return 0.5 * sigma * sigma * t * t;
  }
  const double st = params.Sigma(t);
  return params.sigma(t) * adaptive_simpson([&](double s) { return st - params.Sigma(s); }, 0.0, t);
}

double forward_price(double spot, double s, double t, const DiscountCurve& curve,
                     const std::vector<Dividend>& dividends) {
  if (!(s < t)) throw Error(ErrorCode::InvalidInterval, "forward needs s < t");
  const double ds = curve.discount(s);
  double carry = spot;
  for (const auto& d : dividends) {
    if (!(d.time > s && d.time <= t)) {
      throw Error(ErrorCode::InvalidInput, "dividend dates must lie in (s, t]");
    }
    carry -= d.amount * (curve.discount(d.time) / ds);
  }
  return carry / (curve.discount(t) / ds);
}

}  // namespace deflator
