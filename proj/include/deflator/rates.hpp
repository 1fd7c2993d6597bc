#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "deflator/filtration.hpp"
#include "deflator/multi_period.hpp"

namespace deflator {

// Gross one-period returns R_j on A_j, j = 0..n-1.
struct ShortRateProcess {
  std::vector<SimpleFunction> rates;
};

// Zero coupon discounts D_0(t) at the listed maturities. D_0(0) = 1 is
// implied; rates may be negative, so the curve need not be monotone.
class DiscountCurve {
 public:
  DiscountCurve(std::vector<double> maturities, std::vector<double> discounts);

  const std::vector<double>& maturities() const noexcept { return maturities_; }
  const std::vector<double>& discounts() const noexcept { return discounts_; }

  // Throws MissingMaturity unless t is 0 or a listed maturity.
  double discount(double t) const;

 private:
  std::vector<double> maturities_;
  std::vector<double> discounts_;
};

// Calculation times t_0 < ... < t_n with day count fractions delta_j for
// (t_{j-1}, t_j], j = 1..n.
struct Schedule {
  Schedule(std::vector<double> times, std::vector<double> fractions);

  // Fractions default to t_j - t_{j-1}.
  static Schedule from_times(std::vector<double> times);

  std::size_t periods() const noexcept { return times.size() - 1; }

  std::vector<double> times;
  std::vector<double> fractions;
};

// Pi_j = P|_{A_j} / (R_0 ... R_{j-1}). P lives on A_n (or any algebra A_n
// refines). Throws NonpositiveRate.
DeflatorSequence deflators_from_short_rate(const Filtration& filtration,
                                           const ShortRateProcess& short_rate, const FAMeasure& P);

// The money market account as a single instrument: X_j = 1 and
// C_{j+1} = R_j - 1 (interest paid, principal rolled).
MarketPanel short_rate_panel(std::vector<double> times, const Filtration& filtration,
                             const ShortRateProcess& short_rate);

// D_j(k) = Pi_k|_{A_j} / Pi_j on A_j.
SimpleFunction zcb_price(const DeflatorSequence& deflators, std::size_t j, std::size_t k);

// (D(t_j) / D(t_k) - 1) / delta
double forward_rate(const DiscountCurve& curve, double t_j, double t_k, double delta);
SimpleFunction forward_rate(const DeflatorSequence& deflators, std::size_t i, std::size_t j,
                            std::size_t k, double delta);

// Coupon c paid on delta_j at t_1..t_n plus unit principal at t_n, valued at t_0.
double bond_price(const DiscountCurve& curve, const Schedule& schedule, double coupon);
double par_coupon(const DiscountCurve& curve, const Schedule& schedule);

// Par swap rate seen at time t <= t_0.
double swap_par(const DiscountCurve& curve, const Schedule& schedule, double t);

struct FloatingLegCheck {
  std::vector<double> floating;  // sum_j F_{j-1}(j-1,j) delta_j Pi_j|_{A_0}
  std::vector<double> boundary;  // Pi_0 - Pi_n|_{A_0}
  double max_violation = 0.0;
};

// Deflator index j corresponds to schedule time t_j.
FloatingLegCheck floating_leg_value(const DeflatorSequence& deflators, const Schedule& schedule);

// Futures quotes Phi_j = (S_k P)|_{A_j} / P|_{A_j}, j = 0..k. Throws
// NonPredictableDeflator unless each Pi_{j+1} / P is constant on the blocks of A_j.
std::vector<SimpleFunction> futures_quotes(const DeflatorSequence& deflators, const FAMeasure& P,
                                           const SimpleFunction& terminal, std::size_t k);

// Zero-price instrument paying Phi_j - Phi_{j-1} at t_j.
MarketPanel futures_panel(std::vector<double> times, const Filtration& filtration,
                          const std::vector<SimpleFunction>& quotes);

// -Cov(F, D) / E D over joint samples with equal weight.
double futures_convexity(const std::vector<double>& forward, const std::vector<double>& discount);

// Short rate R_t = phi(t) + sigma(t) B_t with Sigma' = sigma.
struct HoLeeParams {
  std::function<double(double)> phi;
  std::function<double(double)> sigma;
  std::function<double(double)> Sigma;
  std::optional<double> constant_sigma;

  static HoLeeParams constant(std::function<double(double)> phi, double sigma);
};

// exp(-int_t^u phi + 1/2 int_t^u (Sigma(s) - Sigma(u))^2 ds + (Sigma(u) - Sigma(t)) B_t)
double ho_lee_discount(const HoLeeParams& params, double t, double u, double B_t);

// Futures minus forward rate at t: sigma(t) int_0^t (Sigma(t) - Sigma(s)) ds.
double ho_lee_convexity(const HoLeeParams& params, double t);

struct Dividend {
  double time = 0.0;
  double amount = 0.0;
};

// Forward price at s for delivery at t: (S_s - sum_j d_j D_s(t_j)) / D_s(t)
// with D_s(x) = D(x) / D(s), dividends paid in (s, t].
double forward_price(double spot, double s, double t, const DiscountCurve& curve,
                     const std::vector<Dividend>& dividends = {});

}  // namespace deflator
