#pragma once

#include <span>
#include <string>
#include <vector>

#include "gmsm/quadrature.hpp"

namespace gmsm {

struct BoundReport {
  std::string name;
  double mu;     // location the row refers to (NaN when not applicable)
  double param;  // T, t or theta depending on the bound (NaN when not applicable)
  double lhs;
  double rhs;
  bool satisfied;
  double margin;  // rhs - lhs

  static BoundReport make(std::string name, double mu, double param, double lhs, double rhs);
};

// || sup_theta |d_theta m_SM(theta, X)| ||_{L2(P_{1/2})}, sup over a uniform
// theta grid on [eta, 1-eta].
double lipschitz_norm_sm(double mu, double eta = 0.01, const QuadratureSpec& q = {},
                         int theta_points = 256);

// min over a theta grid, plus theta = theta0 itself, of
//   4 mu^2 int (phi phi / (f_theta f_theta0))^2 f_theta0,
// which equals FI(P_theta0, P_theta) / (theta - theta0)^2.
double curvature_sm(double mu, double theta0, const QuadratureSpec& q = {}, double eta = 0.01,
                    int theta_points = 256);
// (32 mu / (15 m^2 sqrt(2 pi))) e^{-mu^2/2}, m = eta * min(theta0, 1 - theta0)
double curvature_sm_upper(double mu, double theta0, double eta = 0.01);

// int_0^T g(mu e^{-t}) exp(-mu^2 e^{-2t} / 8) dt,
// g(x) = x^{7/4} + x^{3/4} (3 + 6x^2 + x^4)^{1/4} + x^{3/2}
double psi(double mu, double T);
double psi_integrand(double x);
// int over [e^{-T} mu, mu] of the same integrand in the location variable
// (interval-average form, without the 1/x Jacobian); display only.
double psi_interval_average(double mu, double T);
double xi(double mu, double T);

// Upper constant for psi at T > max(0, ln mu): C(eta) / (8 / (eta^2 (2 pi)^{1/8})) = 24.
inline constexpr double kPsiCeiling = 24.0;

struct RatioComparison {
  double ddsm_ratio;  // psi / xi
  double sm_ratio;    // lipschitz_norm_sm / curvature_sm
  double sm_lipschitz;
  double sm_curvature;
};

RatioComparison ratio_comparison(double mu, double T, double eta = 0.01);
// lhs = DDSM ratio, rhs = SM ratio
BoundReport bound_ratio_report(double mu, double T, double eta = 0.01);

// Mills lower/upper, Chernoff and the combined corollary for X ~ N(mu, sigma^2),
// plus the folded-normal exponential bound when sigma = 1 and t >= 1.1 mu.
std::vector<BoundReport> gaussian_tail_bounds(double mu, double sigma, double t);

// [min(sqrt(pi/2), 1/(t-mu)) + min(sqrt(pi/2), 1/(t+mu))] phi(mu), t > mu.
// Bounds E[e^{-t|X|}] for X ~ N(+-mu, 1) and hence for every mixture member.
double exp_moment_bound(double mu, double t);
// E[e^{-t|X|}], X ~ N(mu, 1), via Mills ratios.
double folded_normal_exp_moment(double mu, double t);

// Every bound over the standard grid for the given locations.
std::vector<BoundReport> standard_bound_reports(std::span<const double> mu_list, double eta = 0.01);

}  // namespace gmsm
