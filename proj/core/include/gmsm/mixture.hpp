#pragma once

#include <stdexcept>

namespace gmsm {

// Member of the family theta*N(mu,1) + (1-theta)*N(-mu,1).
struct MixtureParams {
  double theta;
  double mu;

  MixtureParams(double theta, double mu);
};

// Feasible weights [eta, 1-eta].
struct ParamSpace {
  double eta = 0.01;

  ParamSpace() = default;
  explicit ParamSpace(double eta);

  double lo() const { return eta; }
  double hi() const { return 1.0 - eta; }
  bool contains(double theta) const { return theta >= lo() && theta <= hi(); }
};

// Marginal of the OU forward process at time t started from `base`.
// It is again a mixture with the same weight and location mu_t = e^{-t} mu.
struct EvolvedParams {
  MixtureParams base;
  double t;
  double mu_t;

  MixtureParams marginal() const { return MixtureParams(base.theta, mu_t); }
};

EvolvedParams evolve(const MixtureParams& p, double t);

double density(const MixtureParams& p, double x);
double log_density(const MixtureParams& p, double x);
double cdf(const MixtureParams& p, double x);
// 1 - cdf without cancellation.
double sf(const MixtureParams& p, double x);

// Posterior probability of the +mu component, sigma(2 mu x + logit theta).
// Equals 1/2 at x = log((1-theta)/theta) / (2 mu).
double weight(const MixtureParams& p, double x);
double score(const MixtureParams& p, double x);
double score_dx(const MixtureParams& p, double x);
// Signed s_{p1}(x) - s_{p2}(x) in closed form. Both must share mu.
double score_diff(const MixtureParams& p1, const MixtureParams& p2, double x);
// d/dtheta log f_theta(x) = (phi(x-mu) - phi(x+mu)) / f_theta(x).
double dtheta_log_density(const MixtureParams& p, double x);

inline double density(const EvolvedParams& p, double x) { return density(p.marginal(), x); }
inline double log_density(const EvolvedParams& p, double x) { return log_density(p.marginal(), x); }
inline double cdf(const EvolvedParams& p, double x) { return cdf(p.marginal(), x); }
inline double sf(const EvolvedParams& p, double x) { return sf(p.marginal(), x); }
inline double weight(const EvolvedParams& p, double x) { return weight(p.marginal(), x); }
inline double score(const EvolvedParams& p, double x) { return score(p.marginal(), x); }
inline double score_dx(const EvolvedParams& p, double x) { return score_dx(p.marginal(), x); }

double logit(double theta);
double logistic(double z);

}  // namespace gmsm
