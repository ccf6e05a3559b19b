#include "gmsm/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gmsm/optimize.hpp"

namespace gmsm {

namespace {

void require_same_mu(const MixtureParams& a, const MixtureParams& b) {
  if (a.mu != b.mu) throw std::invalid_argument("Fisher divergence needs a common mu");
}

}  // namespace

FisherDivergenceRoutes fisher_divergence_routes(const MixtureParams& p_true,
                                                const MixtureParams& p_model,
                                                const QuadratureSpec& q) {
  require_same_mu(p_true, p_model);
  if (p_true.theta == p_model.theta) return {0.0, 0.0};
  const double closed = integrate_line(
      [&](double x) {
        const double d = score_diff(p_model, p_true, x);
        return d * d * density(p_true, x);
      },
      p_true.mu, q);
  const double direct = integrate_line(
      [&](double x) {
        const double d = score(p_model, x) - score(p_true, x);
        return d * d * density(p_true, x);
      },
      p_true.mu, q);
  return {closed, direct};
}

double fisher_divergence(const MixtureParams& p_true, const MixtureParams& p_model,
                         const QuadratureSpec& q) {
  require_same_mu(p_true, p_model);
  if (p_true.theta == p_model.theta) return 0.0;
  return integrate_line(
      [&](double x) {
        const double d = score_diff(p_model, p_true, x);
        return d * d * density(p_true, x);
      },
      p_true.mu, q);
}

double fisher_information(const MixtureParams& p, const QuadratureSpec& q) {
  return integrate_line(
      [&](double x) {
        const double g = dtheta_log_density(p, x);
        return g * g * density(p, x);
      },
      p.mu, q);
}

double isoperimetric_profile(const MixtureParams& p, double x) {
  const double lower = x <= 0.0 ? cdf(p, x) : 1.0 - sf(p, x);
  const double upper = x <= 0.0 ? 1.0 - cdf(p, x) : sf(p, x);
  return density(p, x) / std::min(lower, upper);
}

double isoperimetric_constant(const MixtureParams& p, const ProfileSearch& s) {
  if (s.grid_points < 3) throw std::invalid_argument("profile grid needs >= 3 points");
  const double a = -p.mu - s.margin, b = p.mu + s.margin;
  const double h = (b - a) / (s.grid_points - 1);
  int best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.grid_points; ++i) {
    const double v = isoperimetric_profile(p, a + i * h);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double lo = a + std::max(0, best - 1) * h;
  const double hi = a + std::min(s.grid_points - 1, best + 1) * h;
  const auto m = golden_section([&](double x) { return isoperimetric_profile(p, x); }, lo, hi,
                                s.refine_tol);
  return std::min(best_v, m.fx);
}

double isoperimetric_constant_family(double mu, std::span<const double> thetas,
                                     const ProfileSearch& s) {
  if (thetas.empty()) throw std::invalid_argument("theta grid must be nonempty");
  double best = std::numeric_limits<double>::infinity();
  for (double th : thetas) best = std::min(best, isoperimetric_constant(MixtureParams(th, mu), s));
  return best;
}

std::vector<double> theta_grid(double eta, int count) {
  ParamSpace space(eta);
  if (count < 1) throw std::invalid_argument("theta grid needs >= 1 point");
  if (count == 1) return {0.5};
  std::vector<double> g(count);
  const double h = (space.hi() - space.lo()) / (count - 1);
  for (int i = 0; i < count; ++i) g[i] = space.lo() + i * h;
  g.back() = space.hi();
  if (count % 2 == 1) g[count / 2] = 0.5;
  return g;
}

}  // namespace gmsm
