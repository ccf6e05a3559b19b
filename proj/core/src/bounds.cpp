#include "gmsm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gmsm/contrasts.hpp"
#include "gmsm/divergences.hpp"
#include "gmsm/gaussian.hpp"
#include "gmsm/mixture.hpp"

namespace gmsm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> uniform_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  const double h = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) g[i] = lo + i * h;
  g.back() = hi;
  return g;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

BoundReport BoundReport::make(std::string name, double mu, double param, double lhs, double rhs) {
  BoundReport r{std::move(name), mu, param, lhs, rhs, false, rhs - lhs};
  r.satisfied = lhs <= rhs + 1e-12;
  return r;
}

double lipschitz_norm_sm(double mu, double eta, const QuadratureSpec& q, int theta_points) {
  require_positive(mu, "mu");
  const ParamSpace space(eta);
  if (theta_points < 2) throw std::invalid_argument("theta grid needs >= 2 points");
  const auto grid = uniform_grid(space.lo(), space.hi(), theta_points);
  const MixtureParams truth(0.5, mu);
  const double sq = integrate_line(
      [&](double x) {
        double sup = 0.0;
        for (double th : grid) sup = std::max(sup, std::fabs(dm_sm_dtheta(th, mu, x)));
        return sup * sup * density(truth, x);
      },
      mu, q);
  return std::sqrt(sq);
}

namespace {

// phi(x - mu) phi(x + mu) / (f_a(x) f_b(x)) without forming the densities.
double product_ratio(double a, double b, double mu, double x) {
  const double e = std::exp(-2.0 * mu * std::fabs(x));
  const double pa = x >= 0.0 ? a : 1.0 - a, pb = x >= 0.0 ? b : 1.0 - b;
  return e / ((pa + (1.0 - pa) * e) * (pb + (1.0 - pb) * e));
}

}  // namespace

double curvature_sm(double mu, double theta0, const QuadratureSpec& q, double eta, int theta_points) {
  require_positive(mu, "mu");
  const ParamSpace space(eta);
  const MixtureParams truth(theta0, mu);
  auto at = [&](double th) {
    const double v = integrate_line(
        [&](double x) {
          const double r = product_ratio(th, theta0, mu, x);
          return r * r * density(truth, x);
        },
        mu, q);
    return 4.0 * mu * mu * v;
  };
  // theta -> theta0 is the limit FI / (theta - theta0)^2 and usually the minimum.
  double best = at(theta0);
  for (double th : uniform_grid(space.lo(), space.hi(), theta_points)) best = std::min(best, at(th));
  return best;
}

double curvature_sm_upper(double mu, double theta0, double eta) {
  const double m = eta * std::min(theta0, 1.0 - theta0);
  return 32.0 * mu / (15.0 * m * m * std::sqrt(2.0 * std::numbers::pi)) * std::exp(-0.5 * mu * mu);
}

double psi_integrand(double x) {
  const double x2 = x * x;
  const double g = std::pow(x, 1.75) + std::pow(x, 0.75) * std::pow(3.0 + 6.0 * x2 + x2 * x2, 0.25) +
                   std::pow(x, 1.5);
  return g * std::exp(-x2 / 8.0);
}

double psi(double mu, double T) {
  require_positive(mu, "mu");
  require_positive(T, "T");
  QuadratureSpec q;
  q.panel_width = 0.125;
  return integrate([&](double t) { return psi_integrand(mu * std::exp(-t)); }, 0.0, T, q);
}

double psi_interval_average(double mu, double T) {
  require_positive(mu, "mu");
  require_positive(T, "T");
  QuadratureSpec q;
  q.panel_width = 0.125;
  return integrate(psi_integrand, std::exp(-T) * mu, mu, q);
}

double xi(double mu, double T) {
  require_positive(mu, "mu");
  require_positive(T, "T");
  if (mu <= 1.0) return mu * mu * -std::expm1(-2.0 * T);
  return 1.0 - mu * mu * std::exp(-2.0 * T);
}

RatioComparison ratio_comparison(double mu, double T, double eta) {
  RatioComparison r{};
  r.sm_lipschitz = lipschitz_norm_sm(mu, eta);
  r.sm_curvature = curvature_sm(mu, 0.5, {}, eta);
  r.sm_ratio = r.sm_lipschitz / r.sm_curvature;
  r.ddsm_ratio = psi(mu, T) / xi(mu, T);
  return r;
}

BoundReport bound_ratio_report(double mu, double T, double eta) {
  if (!(mu > 1.0)) throw std::invalid_argument("ratio comparison needs mu > 1");
  if (T < 2.0 * std::log(mu) * (1.0 - 1e-12))
    throw std::invalid_argument("ratio comparison needs T >= 2 ln mu");
  const auto r = ratio_comparison(mu, T, eta);
  return BoundReport::make("ratio_separation", mu, T, r.ddsm_ratio, r.sm_ratio);
}

double folded_normal_exp_moment(double mu, double t) {
  // e^{t^2/2 - mu t} Phi(mu - t) + e^{t^2/2 + mu t} Phi(-mu - t)
  //   = phi(mu) [M(t - mu) + M(t + mu)],  M = Q / phi
  return normal_pdf(mu) * (mills_ratio(t - mu) + mills_ratio(t + mu));
}

double exp_moment_bound(double mu, double t) {
  if (!(t > mu)) throw std::invalid_argument("exponential moment bound needs t > mu");
  // Each Mills ratio is capped separately; one shared cap on the sum fails
  // for small mu (mu = 0.5, t = 0.55 gives 0.649 against 0.441).
  const double c = std::sqrt(0.5 * std::numbers::pi);
  return (std::min(c, 1.0 / (t - mu)) + std::min(c, 1.0 / (t + mu))) * normal_pdf(mu);
}

std::vector<BoundReport> gaussian_tail_bounds(double mu, double sigma, double t) {
  require_positive(sigma, "sigma");
  if (!(t >= 0.0)) throw std::invalid_argument("tail bounds need t >= 0");
  std::vector<BoundReport> out;
  const double u = t / sigma;
  const double tail = normal_sf(u);  // P(X - mu >= t)
  if (t > 0.0) {
    out.push_back(BoundReport::make("mills_lower", mu, t, normal_pdf(u) / (u + 1.0 / u), tail));
    out.push_back(BoundReport::make("mills_upper", mu, t, tail, normal_pdf(u) / u));
  }
  out.push_back(BoundReport::make("chernoff", mu, t, tail, 0.5 * std::exp(-0.5 * u * u)));
  const double cap = t > 0.0 ? std::min(std::sqrt(0.5 * std::numbers::pi), sigma / t)
                             : std::sqrt(0.5 * std::numbers::pi);
  out.push_back(BoundReport::make("tail_combined", mu, t, tail, cap * normal_pdf(u)));
  if (sigma == 1.0 && mu > 0.0 && t >= 1.1 * mu) {
    const double closed = folded_normal_exp_moment(mu, t);
    const double quad = integrate(
        [&](double x) { return std::exp(-t * std::fabs(x)) * normal_pdf(x - mu); }, -mu - 12.0,
        mu + 12.0, QuadratureSpec{});
    out.push_back(BoundReport::make("folded_normal_identity", mu, t,
                                    std::fabs(closed - quad) / quad, 1e-10));
    out.push_back(BoundReport::make("exp_moment", mu, t, closed, exp_moment_bound(mu, t)));
  }
  return out;
}

std::vector<BoundReport> standard_bound_reports(std::span<const double> mu_in, double eta) {
  if (mu_in.empty()) throw std::invalid_argument("mu list must be nonempty");
  std::vector<double> mus(mu_in.begin(), mu_in.end());
  for (double m : mus) require_positive(m, "mu");
  std::sort(mus.begin(), mus.end());
  mus.erase(std::unique(mus.begin(), mus.end()), mus.end());
  const ParamSpace space(eta);
  std::vector<BoundReport> out;
  auto push = [&](BoundReport r) { out.push_back(std::move(r)); };

  // Lipschitz constant of the SM contrast, calibrated once at mu = 1.
  constexpr double kRefMu = 1.0;
  const double l_ref = lipschitz_norm_sm(kRefMu, eta);
  const double c_ref = l_ref * l_ref / (std::pow(kRefMu, 3) * std::exp(-0.5 * kRefMu * kRefMu));
  for (double mu : mus) {
    const double l = lipschitz_norm_sm(mu, eta);
    if (mu > kRefMu)
      push(BoundReport::make("lipschitz_sm_lower", mu, kNaN,
                             c_ref * std::pow(mu, 3) * std::exp(-0.5 * mu * mu), l * l));
    else if (mu < kRefMu)
      push(BoundReport::make("lipschitz_sm_positive", mu, kNaN, std::numeric_limits<double>::min(), l));
    const double l2 = lipschitz_norm_sm(mu, eta, {}, 512);
    push(BoundReport::make("lipschitz_sm_grid_gate", mu, kNaN, std::fabs(l2 - l) / l, 1e-3));
    if (eta < 0.05)
      push(BoundReport::make("lipschitz_sm_eta_monotone", mu, 0.05, lipschitz_norm_sm(mu, 0.05), l));
  }

  // Curvature of the SM risk.
  std::vector<double> curv;
  for (double mu : mus) {
    const double c = curvature_sm(mu, 0.5, {}, eta);
    curv.push_back(c);
    push(BoundReport::make("curvature_sm_upper", mu, 0.5, c, curvature_sm_upper(mu, 0.5, eta)));
    for (double delta : {0.05, 0.2}) {
      const double fi = fisher_divergence(MixtureParams(0.5, mu), MixtureParams(0.5 + delta, mu));
      push(BoundReport::make("curvature_sm_excess_risk", mu, delta, c * delta * delta, fi));
    }
  }
  for (std::size_t i = 0; i + 1 < mus.size(); ++i)
    if (mus[i] >= 2.0)
      push(BoundReport::make("curvature_sm_decreasing", mus[i + 1], mus[i], curv[i + 1], curv[i]));

  // Fisher divergence against the isoperimetric constant of the family.
  std::vector<double> pair_grid = {space.lo(), space.hi()};
  for (double th : {0.1, 0.5, 0.9})
    if (th > space.lo() && th < space.hi()) pair_grid.push_back(th);
  const auto family_grid = theta_grid(eta, 21);
  for (double mu : mus) {
    double worst = 0.0;
    for (double a : pair_grid)
      for (double b : pair_grid)
        worst = std::max(worst, fisher_divergence(MixtureParams(a, mu), MixtureParams(b, mu)));
    const double ceta = 32.0 / 15.0 * std::pow((1.0 - eta) / eta, 2);
    push(BoundReport::make("fisher_divergence_upper", mu, kNaN, worst, ceta * mu * normal_pdf(mu)));
    push(BoundReport::make("fisher_divergence_isoperimetric", mu, kNaN, worst,
                           ceta * mu * isoperimetric_constant_family(mu, family_grid)));
  }

  // E_theta[e^{-t|X|}] for the mixture.
  for (double mu : mus)
    for (double th : {0.1, 0.5, 0.9})
      for (double k : {1.1, 2.0, 4.0}) {
        const double t = k * mu;
        const MixtureParams p(th, mu);
        const double lhs =
            integrate_line([&](double x) { return std::exp(-t * std::fabs(x)) * density(p, x); }, mu);
        push(BoundReport::make("mixture_exp_moment", mu, t, lhs, exp_moment_bound(mu, t)));
      }

  // psi and xi.
  for (double mu : mus) {
    std::vector<double> horizons = {1.0};
    if (mu > 1.0) {
      horizons.push_back(std::log(mu * mu));
      horizons.push_back(2.0 * std::log(mu * mu));
    }
    for (double T : horizons) {
      const double v = psi(mu, T);
      if (T > std::max(0.0, std::log(mu))) push(BoundReport::make("psi_ceiling", mu, T, v, kPsiCeiling));
      push(BoundReport::make("psi_continuity", mu, T, std::fabs(psi(mu + 1e-8, T + 1e-8) - v), 1e-6));
      push(BoundReport::make("xi_continuity", mu, T, std::fabs(xi(mu + 1e-8, T + 1e-8) - xi(mu, T)), 1e-6));
      if (mu > 1.0 && T >= std::log(mu * mu) * (1.0 - 1e-12))
        push(BoundReport::make("xi_lower", mu, T, 1.0 - 1.0 / (mu * mu), xi(mu, T)));
      if (mu <= 1.0) push(BoundReport::make("xi_positive", mu, T, std::numeric_limits<double>::min(), xi(mu, T)));
    }
    if (mu > 1.0)
      for (int m : {2, 3, 4}) {
        const double T = m * std::log(mu);
        push(BoundReport::make("xi_lower_m", mu, T, 1.0 - std::pow(mu, -2.0 * (m - 1)), xi(mu, T)));
      }
  }
  for (double T : {0.5, 1.0, 2.0}) {
    const double below = 1.0 * 1.0 * -std::expm1(-2.0 * T);
    const double above = 1.0 - 1.0 * std::exp(-2.0 * T);
    push(BoundReport::make("xi_branch_agreement", 1.0, T, std::fabs(below - above), 1e-12));
  }
  {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double mu : {2.0, 5.0, 10.0}) {
      const double v = psi(mu, 2.0 * std::log(mu));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    push(BoundReport::make("psi_mu_stability", kNaN, kNaN, hi / lo, 3.0));
  }

  // Gaussian tails (location free) and the folded-normal bound.
  for (double sigma : {0.5, 1.0, 2.0})
    for (double t : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0})
      for (auto& r : gaussian_tail_bounds(0.0, sigma, t)) {
        r.name += sigma == 1.0 ? "" : (sigma < 1.0 ? "_sigma0.5" : "_sigma2");
        push(std::move(r));
      }
  for (double mu : mus)
    for (double k : {1.1, 1.5, 2.0, 4.0})
      for (auto& r : gaussian_tail_bounds(mu, 1.0, k * mu))
        if (r.name == "exp_moment" || r.name == "folded_normal_identity") push(std::move(r));

  // SM versus DDSM Lipschitz-to-curvature ratios.
  for (double mu : mus) {
    if (!(mu > 1.0)) continue;
    const double T = 2.0 * std::log(mu);
    const auto r = ratio_comparison(mu, T, eta);
    push(BoundReport::make("ratio_separation", mu, T, r.ddsm_ratio, r.sm_ratio));
    push(BoundReport::make("ratio_sm_exceeds_mu2", mu, T, mu * mu, r.sm_ratio));
    push(BoundReport::make("ratio_separation_factor5", mu, T, 5.0 * r.ddsm_ratio, r.sm_ratio));
  }
  return out;
}

}  // namespace gmsm
