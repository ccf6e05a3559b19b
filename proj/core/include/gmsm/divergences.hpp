#pragma once

#include <span>
#include <vector>

#include "gmsm/mixture.hpp"
#include "gmsm/quadrature.hpp"

namespace gmsm {

struct FisherDivergenceRoutes {
  double closed_form;  // integrand (score_diff)^2 f_true
  double direct;       // integrand (s_model - s_true)^2 f_true
};

// FI(P_true, P_model) = E_true[(s_model - s_true)^2]. Returns the closed-form
// route; fisher_divergence_routes also exposes the direct subtraction.
double fisher_divergence(const MixtureParams& p_true, const MixtureParams& p_model,
                         const QuadratureSpec& q = {});
FisherDivergenceRoutes fisher_divergence_routes(const MixtureParams& p_true,
                                                const MixtureParams& p_model,
                                                const QuadratureSpec& q = {});

double fisher_information(const MixtureParams& p, const QuadratureSpec& q = {});

// f / min(F, 1-F)
double isoperimetric_profile(const MixtureParams& p, double x);

struct ProfileSearch {
  int grid_points = 4096;
  double margin = 8.0;  // grid covers [-mu - margin, mu + margin]
  double refine_tol = 1e-12;
};

double isoperimetric_constant(const MixtureParams& p, const ProfileSearch& s = {});
double isoperimetric_constant_family(double mu, std::span<const double> theta_grid,
                                     const ProfileSearch& s = {});

// Uniform grid of `count` weights on [eta, 1-eta].
std::vector<double> theta_grid(double eta = 0.01, int count = 21);

}  // namespace gmsm
