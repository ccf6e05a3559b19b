#include "gmsm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gmsm/divergences.hpp"
#include "gmsm/optimize.hpp"

namespace gmsm {

Sample::Sample(std::vector<double> data) : data_(std::move(data)) {
  if (data_.empty()) throw std::invalid_argument("data must be nonempty");
  for (double x : data_)
    if (!std::isfinite(x)) throw std::invalid_argument("data contains a non-finite value");
  std::sort(data_.begin(), data_.end());
}

double risk_theta_part(const ContrastEvaluator& ev, double theta, const Sample& data,
                       std::vector<double>& scratch) {
  scratch.resize(data.size());
  ev.theta_parts(theta, data.values(), scratch);
  return pairwise_sum(scratch) / static_cast<double>(data.size());
}

double risk_theta_free_part(const ContrastEvaluator& ev, const Sample& data) {
  std::vector<double> c(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) c[i] = ev.theta_free_part(data.values()[i]);
  return pairwise_sum(c) / static_cast<double>(data.size());
}

double empirical_risk(const ContrastEvaluator& ev, double theta, const Sample& data) {
  std::vector<double> scratch;
  return risk_theta_free_part(ev, data) + risk_theta_part(ev, theta, data, scratch);
}

double empirical_risk(const ContrastEvaluator& ev, double theta, std::span<const double> data) {
  return empirical_risk(ev, theta, Sample(std::vector<double>(data.begin(), data.end())));
}

EstimationResult minimize(const ContrastEvaluator& ev, const Sample& data, const OptimizerSpec& opt,
                          const ParamSpace& space) {
  opt.validate();
  std::vector<double> scratch;
  std::size_t evals = 0;
  auto risk = [&](double th) {
    ++evals;
    return risk_theta_part(ev, th, data, scratch);
  };

  const int g = opt.coarse_grid;
  const double lo = space.lo(), hi = space.hi();
  const double h = (hi - lo) / (g - 1);
  auto grid_point = [&](int i) { return i == g - 1 ? hi : lo + i * h; };

  int best_i = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g; ++i) {
    const double v = risk(grid_point(i));
    if (v < best_v) {  // strict: equal values keep the smaller theta
      best_v = v;
      best_i = i;
    }
  }

  double theta_hat = grid_point(best_i);
  double value = best_v;
  const double a = grid_point(std::max(0, best_i - 1));
  const double b = grid_point(std::min(g - 1, best_i + 1));
  const auto m = golden_section(risk, a, b, opt.refine_tol);
  if (m.fx < value || (m.fx == value && m.x < theta_hat)) {
    theta_hat = m.x;
    value = m.fx;
  }

  EstimationResult r;
  r.theta_hat = std::clamp(theta_hat, lo, hi);
  r.loss_at_opt = risk_theta_free_part(ev, data) + value;
  r.evaluations = evals;
  r.boundary_hit = r.theta_hat - lo <= opt.refine_tol || hi - r.theta_hat <= opt.refine_tol;
  return r;
}

namespace {

double mean_dm(double theta, double mu, const MixtureParams& truth, const QuadratureSpec& q) {
  return integrate_line([&](double x) { return dm_sm_dtheta(theta, mu, x) * density(truth, x); },
                        mu, q);
}

}  // namespace

AvarParts avar_sm_parts(double theta0, double mu, const QuadratureSpec& q) {
  const MixtureParams truth(theta0, mu);
  AvarParts r{};
  r.numerator = integrate_line(
      [&](double x) {
        const double d = dm_sm_dtheta(theta0, mu, x);
        return d * d * density(truth, x);
      },
      mu, q);
  constexpr double h = 1e-5;
  auto central = [&](double step) {
    return (mean_dm(theta0 + step, mu, truth, q) - mean_dm(theta0 - step, mu, truth, q)) /
           (2.0 * step);
  };
  const double d_h = central(h);
  const double d_h2 = central(0.5 * h);
  r.denominator = d_h;
  r.denominator_richardson = (4.0 * d_h2 - d_h) / 3.0;
  if (!(std::fabs(r.denominator) >= 1e-30)) {
    r.value = std::numeric_limits<double>::infinity();
    throw VarianceOverflow("curvature of the SM risk vanishes at theta0", r);
  }
  r.value = r.numerator / (r.denominator * r.denominator);
  return r;
}

double avar_sm(double theta0, double mu, const QuadratureSpec& q) {
  return avar_sm_parts(theta0, mu, q).value;
}

double crlb(double theta0, double mu, const QuadratureSpec& q) {
  return 1.0 / fisher_information(MixtureParams(theta0, mu), q);
}

}  // namespace gmsm
