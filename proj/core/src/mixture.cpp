#include "gmsm/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmsm/detail/hyperbolic.hpp"
#include "gmsm/gaussian.hpp"

namespace gmsm {

MixtureParams::MixtureParams(double theta_, double mu_) : theta(theta_), mu(mu_) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("mixture weight must lie in (0,1), got " + std::to_string(theta));
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("mixture location must be positive, got " + std::to_string(mu));
}

ParamSpace::ParamSpace(double eta_) : eta(eta_) {
  if (!(eta > 0.0 && eta < 0.5))
    throw std::invalid_argument("eta must lie in (0, 1/2), got " + std::to_string(eta));
}

EvolvedParams evolve(const MixtureParams& p, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("diffusion time must be >= 0, got " + std::to_string(t));
  const double mu_t = std::exp(-t) * p.mu;
  return EvolvedParams{p, t, mu_t};
}

double mills_ratio(double x) {
  if (x < 30.0) return normal_sf(x) / normal_pdf(x);
  // Laplace continued fraction Q/phi = 1/(x + 1/(x + 2/(x + 3/(x + ...)))).
  double acc = x;
  for (int k = 60; k >= 1; --k) acc = x + k / acc;
  return 1.0 / acc;
}

double logit(double theta) { return std::log(theta) - std::log1p(-theta); }

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double density(const MixtureParams& p, double x) {
  return p.theta * normal_pdf(x - p.mu) + (1.0 - p.theta) * normal_pdf(x + p.mu);
}

double log_density(const MixtureParams& p, double x) {
  const double a = std::log(p.theta) + normal_logpdf(x - p.mu);
  const double b = std::log1p(-p.theta) + normal_logpdf(x + p.mu);
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

double cdf(const MixtureParams& p, double x) {
  return p.theta * normal_cdf(x - p.mu) + (1.0 - p.theta) * normal_cdf(x + p.mu);
}

double sf(const MixtureParams& p, double x) {
  return p.theta * normal_sf(x - p.mu) + (1.0 - p.theta) * normal_sf(x + p.mu);
}

double weight(const MixtureParams& p, double x) {
  return logistic(2.0 * p.mu * x + logit(p.theta));
}

double score(const MixtureParams& p, double x) {
  // 2w - 1 = tanh(mu x + logit(theta)/2)
  return std::tanh(p.mu * x + 0.5 * logit(p.theta)) * p.mu - x;
}

double score_dx(const MixtureParams& p, double x) {
  // 4 w (1 - w) = sech^2(mu x + logit(theta)/2)
  return p.mu * p.mu * detail::sech2(p.mu * x + 0.5 * logit(p.theta)) - 1.0;
}

double score_diff(const MixtureParams& p1, const MixtureParams& p2, double x) {
  if (p1.mu != p2.mu) throw std::invalid_argument("score_diff needs a common mu");
  const double a = p1.theta, b = p2.theta, mu = p1.mu;
  // f1 f2 / (phi(x-mu) phi(x+mu)) expanded in r = e^{2 mu x}
  const double d = a * b * std::exp(2.0 * mu * x) + a * (1.0 - b) + b * (1.0 - a) +
                   (1.0 - a) * (1.0 - b) * std::exp(-2.0 * mu * x);
  return 2.0 * mu * (a - b) / d;
}

double dtheta_log_density(const MixtureParams& p, double x) {
  const double th = p.theta;
  if (x >= 0.0) {
    const double e = std::exp(-2.0 * p.mu * x);
    return -std::expm1(-2.0 * p.mu * x) / (th + (1.0 - th) * e);
  }
  const double e = std::exp(2.0 * p.mu * x);
  return std::expm1(2.0 * p.mu * x) / (th * e + (1.0 - th));
}

}  // namespace gmsm
