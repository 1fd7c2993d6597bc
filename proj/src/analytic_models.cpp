#include "deflator/analytic_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "deflator/error.hpp"

namespace deflator {
namespace {

constexpr double kSeriesCutoff = 0.5;
constexpr double kCharfnFloor = 1e-12;
constexpr double kMaxTruncation = 1e6;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidInput, what);
}

// sum_{n>=2} a^n / n! divided by a^2, for a real or imaginary argument.
template <typename T>
T shifted_exp_series(T a) {
  T term = T(0.5);
  T sum = term;
  for (int n = 3; n < 28; ++n) {
    term *= a / static_cast<double>(n);
    sum += term;
  }
  return sum;
}

}  // namespace

void BachelierParams::validate() const {
  require(R > 0.0 && s > 0.0 && sigma > 0.0, "Bachelier model needs R > 0, s > 0, sigma > 0");
}

PutQuote bachelier_put(const BachelierParams& params, double k) {
  params.validate();
  const double f = params.forward();
  const double z = (k - f) / (f * params.sigma);
  PutQuote q;
  q.price = (k - f) / params.R * normal_cdf(z) + params.s * params.sigma * normal_pdf(z);
  q.delta = -normal_cdf(z);
  return q;
}

double bachelier_call(const BachelierParams& params, double k) {
  return bachelier_put(params, k).price + params.s - k / params.R;
}

ParityCheck bachelier_call_put_consistency(const BachelierParams& params, double k) {
  params.validate();
  const double f = params.forward();
  const double kink = (k / f - 1.0) / params.sigma;
  ParityCheck out;
  out.parity_call = bachelier_call(params, k);
  out.quadrature_call =
      normal_expectation([&](double z) { return std::max(f * (1.0 + params.sigma * z) - k, 0.0); }, {kink}) /
      params.R;
  out.residual = std::abs(out.parity_call - out.quadrature_call);
  return out;
}

double atm_call_correlation() { return 1.0 / std::sqrt(2.0 - 2.0 / std::numbers::pi); }

HedgeErrorEstimate hedge_error_estimate(const BachelierParams& params, const RealFunction& payoff,
                                        double slope, double curvature,
                                        const std::vector<double>& kinks) {
  params.validate();
  const double f = params.forward(), sigma = params.sigma;
  HedgeErrorEstimate out;
  const double a = f * sigma * slope;
  const double b = f * f * sigma * sigma * curvature;
  out.variance = a * a + 0.5 * b * b;
  out.zero_slope = slope == 0.0;
  out.correlation = out.zero_slope || out.variance == 0.0 ? 0.0 : a / std::sqrt(out.variance);
  out.lse = out.variance * (1.0 - out.correlation * out.correlation) / params.R;

  std::vector<double> zk;
  for (double k : kinks) zk.push_back((k / f - 1.0) / sigma);
  auto p = [&](double z) { return payoff(f * (1.0 + sigma * z)); };
  const double mean = normal_expectation(p, zk);
  const double second = normal_expectation([&](double z) { return p(z) * p(z); }, zk);
  const double cross = normal_expectation([&](double z) { return p(z) * z; }, zk);
  out.cash_position = mean;
  out.exact_variance = std::max(0.0, second - mean * mean);
  out.exact_correlation = out.exact_variance > 0.0 ? cross / std::sqrt(out.exact_variance) : 0.0;
  out.exact_lse = std::max(0.0, out.exact_variance - cross * cross) / params.R;
  return out;
}

CovarianceIdentity normal_cov_identity_check(double rho, const RealFunction& f,
                                             const RealFunction& f_prime, std::size_t nodes) {
  require(rho >= -1.0 && rho <= 1.0, "correlation must lie in [-1, 1]");
  const GaussRule rule = gauss_hermite_normal(nodes);
  const double c = std::sqrt(1.0 - rho * rho);
  double e_nf = 0.0, e_n = 0.0, e_f = 0.0, e_fp = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double zi = rule.nodes[i], wi = rule.weights[i];
    const double fi = f(zi);
    e_f += wi * fi;
    e_fp += wi * f_prime(zi);
    for (std::size_t j = 0; j < nodes; ++j) {
      const double w = wi * rule.weights[j];
      const double n = rho * zi + c * rule.nodes[j];
      e_nf += w * n * fi;
      e_n += w * n;
    }
  }
  CovarianceIdentity out;
  out.covariance = e_nf - e_n * e_f;
  out.scaled_mean = rho * e_fp;
  out.residual = std::abs(out.covariance - out.scaled_mean);
  return out;
}

void GbmParams::validate() const {
  require(s > 0.0 && sigma > 0.0 && t > 0.0, "GBM needs s > 0, sigma > 0, t > 0");
}

GbmPutQuote gbm_put(const GbmParams& params, double k) {
  params.validate();
  require(k > 0.0, "GBM put needs k > 0");
  const double vol = params.sigma * std::sqrt(params.t);
  const double f = params.s * std::exp(params.r * params.t);
  const double z = 0.5 * vol + std::log(k / f) / vol;
  GbmPutQuote q;
  q.forward_value = k * normal_cdf(z) - f * normal_cdf(z - vol);
  q.pv = std::exp(-params.r * params.t) * q.forward_value;
  q.delta = -normal_cdf(z - vol);
  q.gamma = normal_pdf(z - vol) / (params.s * vol);
  return q;
}

void KolmogorovID::validate() const {
  require(std::isfinite(gamma), "Kolmogorov mean must be finite");
  for (const auto& n : nodes) {
    require(std::isfinite(n.x) && std::isfinite(n.mass) && n.mass >= 0.0,
            "Kolmogorov nodes need finite x and mass >= 0");
  }
}

double KolmogorovID::variance() const {
  double v = 0.0;
  for (const auto& n : nodes) v += n.mass;
  return v;
}

std::complex<double> kolmogorov_kernel(double u, double x) {
  const double y = u * x;
  if (std::abs(y) < kSeriesCutoff) {
    return -u * u * shifted_exp_series(std::complex<double>(0.0, y));
  }
  const double h = std::sin(0.5 * y);
  return {-2.0 * h * h / (x * x), (std::sin(y) - y) / (x * x)};
}

std::complex<double> kolmogorov_exponent(const KolmogorovID& id, double u) {
  std::complex<double> acc(0.0, id.gamma * u);
  for (const auto& n : id.nodes) acc += kolmogorov_kernel(u, n.x) * n.mass;
  return acc;
}

std::complex<double> kolmogorov_charfn(const KolmogorovID& id, double u) {
  return std::exp(kolmogorov_exponent(id, u));
}

double cumulant(const KolmogorovID& id, double sigma) {
  double acc = id.gamma * sigma;
  for (const auto& n : id.nodes) {
    const double y = sigma * n.x;
    const double k = std::abs(y) < kSeriesCutoff ? sigma * sigma * shifted_exp_series(y)
                                                  : (std::expm1(y) - y) / (n.x * n.x);
    acc += k * n.mass;
  }
  return acc;
}

KolmogorovID k_transform(const KolmogorovID& id, double sigma) {
  KolmogorovID out{id.gamma, {}};
  for (const auto& n : id.nodes) {
    out.gamma += (n.x == 0.0 ? sigma : std::expm1(sigma * n.x) / n.x) * n.mass;
    out.nodes.push_back({n.x, n.x == 0.0 ? n.mass : std::exp(sigma * n.x) * n.mass});
  }
  return out;
}

KolmogorovID scale_time(const KolmogorovID& id, double t) {
  require(t >= 0.0, "time must be nonnegative");
  KolmogorovID out{t * id.gamma, id.nodes};
  for (auto& n : out.nodes) n.mass *= t;
  return out;
}

std::vector<double> cdf_from_charfn(const CharFn& charfn, const std::vector<double>& grid,
                                    double smoothing) {
  require(smoothing >= 0.0, "smoothing width must be nonnegative");
  require(std::is_sorted(grid.begin(), grid.end()), "inversion grid must be sorted");
  auto phi = [&](double u) {
    const std::complex<double> v = charfn(u);
    return smoothing > 0.0 ? v * std::exp(-0.5 * smoothing * smoothing * u * u) : v;
  };
  double U = 1.0;
  while (std::abs(phi(U)) > kCharfnFloor) {
    U *= 2.0;
    if (U > kMaxTruncation) {
      throw Error(ErrorCode::TruncationFailure,
                  "characteristic function does not decay below 1e-12 by u = 1e6");
    }
  }

  std::vector<double> out;
  out.reserve(grid.size());
  double running = 0.0;
  for (double x : grid) {
    auto integrand = [&](double u) {
      return (std::exp(std::complex<double>(0.0, -u * x)) * phi(u)).imag() / u;
    };
    const double width = 2.0 * std::numbers::pi / (1.0 + std::abs(x));
    const auto pieces = static_cast<int>(std::ceil(U / width));
    double integral = 0.0;
    for (int i = 0; i < pieces; ++i) {
      const double a = U * i / pieces, b = U * (i + 1) / pieces;
      integral += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 6, 1e-12);
    }
    const double F = std::clamp(0.5 - integral / std::numbers::pi, 0.0, 1.0);
    running = std::max(running, F);
    out.push_back(running);
  }
  return out;
}

double levy_put(const LevyModelParams& params, double k) {
  require(params.s > 0.0 && params.sigma > 0.0 && params.t > 0.0 && k > 0.0,
          "Levy put needs s, sigma, t, k > 0");
  params.base.validate();
  const double kappa = cumulant(params.base, params.sigma);
  const double level = (std::log(k / params.s) - (params.r - kappa) * params.t) / params.sigma;
  const KolmogorovID law = scale_time(params.base, params.t);
  const KolmogorovID tilted = k_transform(law, params.sigma);
  const double p = cdf_from_charfn([&](double u) { return kolmogorov_charfn(law, u); }, {level},
                                   params.smoothing)[0];
  const double p_star = cdf_from_charfn([&](double u) { return kolmogorov_charfn(tilted, u); },
                                        {level}, params.smoothing)[0];
  return k * p - params.s * std::exp(params.r * params.t) * p_star;
}

}  // namespace deflator
