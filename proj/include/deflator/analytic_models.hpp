#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "deflator/quadrature.hpp"

namespace deflator {

// One-period normal model S = R s (1 + sigma Z).
struct BachelierParams {
  double R = 1.0;
  double s = 1.0;
  double sigma = 0.0;

  double forward() const noexcept { return R * s; }
  void validate() const;
};

struct PutQuote {
  double price = 0.0;
  double delta = 0.0;
};

// p(k) = (k/R - s) Phi(z) + s sigma phi(z), z = (k/(R s) - 1)/sigma, delta = -Phi(z).
PutQuote bachelier_put(const BachelierParams& params, double k);

// Call from the put by parity, c = p + s - k/R.
double bachelier_call(const BachelierParams& params, double k);

struct ParityCheck {
  double parity_call = 0.0;
  double quadrature_call = 0.0;
  double residual = 0.0;
};

ParityCheck bachelier_call_put_consistency(const BachelierParams& params, double k);

// 1 / sqrt(2 - 2/pi)
double atm_call_correlation();

struct HedgeErrorEstimate {
  double variance = 0.0;     // f^2 sigma^2 p'^2 + f^4 sigma^4 p''^2 / 2
  double correlation = 0.0;  // corr(S, p(S)) to second order
  double lse = 0.0;          // Var p(S) (1 - corr^2) / R
  bool zero_slope = false;   // p'(f) == 0: best hedge is cash E p(S)
  double exact_variance = 0.0;
  double exact_correlation = 0.0;
  double exact_lse = 0.0;
  double cash_position = 0.0;  // E p(S)
};

// Second-order estimates from p'(f) and p''(f), with exact values by
// quadrature over the normal law (split at the given payoff kinks in S).
HedgeErrorEstimate hedge_error_estimate(const BachelierParams& params, const RealFunction& payoff,
                                        double slope, double curvature,
                                        const std::vector<double>& kinks = {});

struct CovarianceIdentity {
  double covariance = 0.0;  // Cov(N, f(M))
  double scaled_mean = 0.0;  // Cov(N, M) E f'(M)
  double residual = 0.0;
};

// M, N standard normals with correlation rho, by two-dimensional Gauss-Hermite.
CovarianceIdentity normal_cov_identity_check(double rho, const RealFunction& f,
                                             const RealFunction& f_prime, std::size_t nodes = 96);

// X_t = (e^{rt}, s e^{mu t + sigma B_t}) with mu = r - sigma^2/2.
struct GbmParams {
  double r = 0.0;
  double s = 1.0;
  double sigma = 0.0;
  double t = 1.0;

  void validate() const;
};

struct GbmPutQuote {
  double forward_value = 0.0;  // E (k - S_t)^+
  double pv = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
};

// Uses total volatility sigma sqrt(t).
GbmPutQuote gbm_put(const GbmParams& params, double k);

struct KolmogorovNode {
  double x = 0.0;
  double mass = 0.0;  // Delta G >= 0
};

// Finite variance infinitely divisible law: log E e^{iuX} = i gamma u + sum K_u(x) dG.
struct KolmogorovID {
  double gamma = 0.0;
  std::vector<KolmogorovNode> nodes;

  void validate() const;
  double variance() const;
};

// (e^{iux} - 1 - iux) / x^2, equal to -u^2/2 at x = 0.
std::complex<double> kolmogorov_kernel(double u, double x);
std::complex<double> kolmogorov_exponent(const KolmogorovID& id, double u);
std::complex<double> kolmogorov_charfn(const KolmogorovID& id, double u);

// kappa(sigma) = log E e^{sigma X} = gamma sigma + sum (e^{sigma x} - 1 - sigma x)/x^2 dG.
double cumulant(const KolmogorovID& id, double sigma);

// Exponential tilt by e^{sigma X}: gamma* = gamma + sum (e^{sigma x} - 1)/x dG,
// dG* = e^{sigma x} dG.
KolmogorovID k_transform(const KolmogorovID& id, double sigma);

// Law of L_t given L_1: (t gamma, t G).
KolmogorovID scale_time(const KolmogorovID& id, double t);

using CharFn = std::function<std::complex<double>(double)>;

// Gil-Pelaez inversion at each point of a sorted grid. With smoothing h > 0
// the law is first convolved with N(0, h^2), which makes point masses
// invertible. Throws TruncationFailure if the (smoothed) charfn does not
// fall below 1e-12 by u = 1e6.
std::vector<double> cdf_from_charfn(const CharFn& charfn, const std::vector<double>& grid,
                                    double smoothing = 0.0);

struct LevyModelParams {
  double r = 0.0;
  double s = 1.0;
  double sigma = 0.0;
  double t = 1.0;
  KolmogorovID base;       // law of L_1
  double smoothing = 0.0;  // inversion smoothing width, see cdf_from_charfn
};

// E (k - S_t)^+ with S_t = s e^{(r - kappa(sigma)) t + sigma L_t}.
double levy_put(const LevyModelParams& params, double k);

}  // namespace deflator
