#include "gmsm/contrasts.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "gmsm/detail/hyperbolic.hpp"
#include "gmsm/gaussian.hpp"
#include "gmsm/smoothing_table.hpp"

namespace gmsm {

NoiseSchedule NoiseSchedule::make(double T, int time_nodes, int space_nodes) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("horizon T must be positive");
  if (time_nodes < 16) throw std::invalid_argument("need >= 16 time nodes");
  if (space_nodes < 32) throw std::invalid_argument("need >= 32 space nodes");
  return NoiseSchedule{T, gauss_legendre(time_nodes, 0.0, T), gauss_hermite_normal(space_nodes)};
}

void NoiseSchedule::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("horizon T must be positive");
  if (time.size() < 16 || time.nodes.size() != time.weights.size())
    throw std::invalid_argument("schedule needs >= 16 time nodes");
  if (space.size() < 32 || space.nodes.size() != space.weights.size())
    throw std::invalid_argument("schedule needs >= 32 space nodes");
}

double default_horizon(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  return std::max(1.0, 2.0 * std::log(mu));
}

double m_sm(double theta, double mu, double x) {
  const MixtureParams p(theta, mu);
  const double s = score(p, x);
  return s * s + 2.0 * score_dx(p, x);
}

double dm_sm_dtheta(double theta, double mu, double x) {
  const MixtureParams p(theta, mu);
  const double w = weight(p, x);
  // w (1 - w) = sech^2(mu x + logit(theta)/2) / 4
  const double ww = 0.25 * detail::sech2(mu * x + 0.5 * logit(theta));
  const double dw = ww / (theta * (1.0 - theta));
  return dw * (4.0 * mu * mu - 4.0 * x * mu - 8.0 * mu * mu * w);
}

double m_ddsm(double theta, double mu, double x0, const NoiseSchedule& sched) {
  sched.validate();
  const MixtureParams p(theta, mu);
  double total = 0.0;
  for (std::size_t k = 0; k < sched.time.size(); ++k) {
    const double t = sched.time.nodes[k];
    const EvolvedParams pt = evolve(p, t);
    const double mean = std::exp(-t) * x0;
    const double sd = std::sqrt(-std::expm1(-2.0 * t));
    double inner = 0.0;
    for (std::size_t j = 0; j < sched.space.size(); ++j) {
      const double y = mean + sd * sched.space.nodes[j];
      const double s = score(pt, y);
      inner += sched.space.weights[j] * (s * s + 2.0 * score_dx(pt, y));
    }
    total += sched.time.weights[k] * inner;
  }
  return total;
}

McEstimate m_ddsm_mc(double theta, double mu, double x0, double T, std::size_t draws,
                     RngStream& rng) {
  if (draws == 0) throw std::invalid_argument("need at least one draw");
  if (!(T > 0.0)) throw std::invalid_argument("horizon T must be positive");
  const MixtureParams p(theta, mu);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    double u = T * rng.uniform();
    while (u < 1e-12) u = T * rng.uniform();
    const double z = rng.normal();
    const double sd = std::sqrt(-std::expm1(-2.0 * u));
    const double x = std::exp(-u) * x0 + sd * z;
    const double s = score(evolve(p, u), x);
    const double v = T * (s * s + 2.0 * s * z / sd);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double var = draws > 1 ? m2 / static_cast<double>(draws - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(draws))};
}

double m_dsm_fixed_t(double theta, double mu, double x0, double t, const QuadratureRule& space) {
  if (!(t > 0.0)) throw std::invalid_argument("fixed noise time must be positive");
  const MixtureParams p(theta, mu);
  const double mean = std::exp(-t) * x0;
  const double sd = std::sqrt(-std::expm1(-2.0 * t));
  double acc = 0.0;
  for (std::size_t j = 0; j < space.size(); ++j) {
    const double y = mean + sd * space.nodes[j];
    const double s = score(p, y);
    acc += space.weights[j] * (s * s + 2.0 * score_dx(p, y));
  }
  return acc;
}

double m_ml(double theta, double mu, double x) { return -log_density(MixtureParams(theta, mu), x); }

std::string_view to_string(ContrastKind k) {
  switch (k) {
    case ContrastKind::ML: return "ML";
    case ContrastKind::SM: return "SM";
    case ContrastKind::DDSM: return "DDSM";
    case ContrastKind::DSMFixedT: return "DSM-fixed-t";
  }
  return "?";
}

ContrastKind parse_contrast_kind(std::string_view name) {
  std::string up;
  for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "ML") return ContrastKind::ML;
  if (up == "SM") return ContrastKind::SM;
  if (up == "DDSM") return ContrastKind::DDSM;
  if (up == "DSM-FIXED-T" || up == "DSM") return ContrastKind::DSMFixedT;
  throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

ContrastEvaluator ContrastEvaluator::ml(double mu) {
  ContrastEvaluator ev;
  ev.kind_ = ContrastKind::ML;
  ev.mu_ = MixtureParams(0.5, mu).mu;
  return ev;
}

ContrastEvaluator ContrastEvaluator::sm(double mu) {
  ContrastEvaluator ev;
  ev.kind_ = ContrastKind::SM;
  ev.mu_ = MixtureParams(0.5, mu).mu;
  return ev;
}

ContrastEvaluator ContrastEvaluator::ddsm(double mu, NoiseSchedule sched, NoisyRoute route) {
  sched.validate();
  ContrastEvaluator ev;
  ev.kind_ = ContrastKind::DDSM;
  ev.mu_ = MixtureParams(0.5, mu).mu;
  ev.schedule_ = std::move(sched);
  ev.route_ = route;
  ev.build_slices();
  return ev;
}

ContrastEvaluator ContrastEvaluator::dsm_fixed_t(double mu, double t, int space_nodes,
                                                 NoisyRoute route) {
  if (!(t > 0.0)) throw std::invalid_argument("fixed noise time must be positive");
  if (space_nodes < 32) throw std::invalid_argument("need >= 32 space nodes");
  ContrastEvaluator ev;
  ev.kind_ = ContrastKind::DSMFixedT;
  ev.mu_ = MixtureParams(0.5, mu).mu;
  ev.fixed_t_ = t;
  ev.fixed_space_ = gauss_hermite_normal(space_nodes);
  ev.route_ = route;
  ev.build_slices();
  return ev;
}

ContrastEvaluator ContrastEvaluator::make(ContrastKind kind, double mu, double T, double fixed_t,
                                          NoisyRoute route) {
  switch (kind) {
    case ContrastKind::ML: return ml(mu);
    case ContrastKind::SM: return sm(mu);
    case ContrastKind::DDSM: return ddsm(mu, NoiseSchedule::make(T), route);
    case ContrastKind::DSMFixedT: return dsm_fixed_t(mu, fixed_t, 64, route);
  }
  throw std::invalid_argument("unknown contrast kind");
}

ContrastEvaluator ContrastEvaluator::with_offset(double c) const {
  ContrastEvaluator ev = *this;
  ev.offset_ += c;
  return ev;
}

void ContrastEvaluator::build_slices() {
  auto slices = std::make_shared<std::vector<Slice>>();
  auto add = [&](double w, double mu_eff, double t) {
    const double e = std::exp(-t);
    const double var = -std::expm1(-2.0 * t);
    const double s = mu_eff * std::sqrt(var);
    Slice sl{w, mu_eff, e, var, mu_eff * e, mu_eff * mu_eff - 2.0 * s * s, nullptr};
    if (route_ == NoisyRoute::Tabulated) sl.table = std::make_shared<SmoothedTanhTable>(s);
    c0_ += w * (mu_eff * mu_eff + var - 2.0);
    c2_ += w * e * e;
    slices->push_back(std::move(sl));
  };
  c0_ = c2_ = 0.0;
  if (kind_ == ContrastKind::DDSM) {
    for (std::size_t k = 0; k < schedule_->time.size(); ++k) {
      const double t = schedule_->time.nodes[k];
      add(schedule_->time.weights[k], std::exp(-t) * mu_, t);
    }
  } else {
    add(1.0, mu_, *fixed_t_);
  }
  slices_ = std::move(slices);
}

double ContrastEvaluator::value(double theta, double x) const {
  switch (kind_) {
    case ContrastKind::ML: return m_ml(theta, mu_, x) + offset_;
    case ContrastKind::SM: return m_sm(theta, mu_, x) + offset_;
    case ContrastKind::DDSM: return m_ddsm(theta, mu_, x, *schedule_) + offset_;
    case ContrastKind::DSMFixedT: return m_dsm_fixed_t(theta, mu_, x, *fixed_t_, *fixed_space_) + offset_;
  }
  return 0.0;
}

double ContrastEvaluator::theta_free_part(double x) const {
  switch (kind_) {
    case ContrastKind::ML:
      return 0.5 * x * x + 0.5 * mu_ * mu_ + kLogSqrt2Pi - mu_ * std::fabs(x) + offset_;
    case ContrastKind::SM: return mu_ * mu_ + x * x - 2.0 + offset_;
    case ContrastKind::DDSM:
    case ContrastKind::DSMFixedT: return c0_ + c2_ * x * x + offset_;
  }
  return 0.0;
}

double ContrastEvaluator::theta_part(double theta, double x) const {
  double out = 0.0;
  theta_parts(theta, std::span<const double>(&x, 1), std::span<double>(&out, 1));
  return out;
}

void ContrastEvaluator::theta_parts(double theta, std::span<const double> xs,
                                    std::span<double> out) const {
  if (out.size() != xs.size()) throw std::invalid_argument("output span size mismatch");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
  const double half_logit = 0.5 * logit(theta);
  const std::size_t n = xs.size();
  switch (kind_) {
    case ContrastKind::SM: {
      const double mu2 = mu_ * mu_;
      for (std::size_t i = 0; i < n; ++i) {
        const double z = mu_ * xs[i] + half_logit;
        out[i] = mu2 * detail::sech2(z) - 2.0 * mu_ * xs[i] * std::tanh(z);
      }
      return;
    }
    case ContrastKind::ML: {
      const double lt = std::log(theta), l1t = std::log1p(-theta);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = xs[i];
        // -log(theta e^{mu x - mu|x|} + (1 - theta) e^{-mu x - mu|x|})
        const double a = x >= 0.0 ? lt : lt + 2.0 * mu_ * x;
        const double b = x >= 0.0 ? l1t - 2.0 * mu_ * x : l1t;
        const double m = std::max(a, b);
        out[i] = -(m + std::log1p(std::exp(-std::fabs(a - b))));
      }
      return;
    }
    case ContrastKind::DDSM:
    case ContrastKind::DSMFixedT: break;
  }
  if (route_ == NoisyRoute::Quadrature) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = value(theta, xs[i]) - offset_ - (c0_ + c2_ * xs[i] * xs[i]);
    return;
  }
  // E over the noisy point of mu^2 sech^2 - 2 z tanh + logit * tanh reduces,
  // by Stein's identity, to (mu^2 - 2 s^2) A(z) - 2 alpha x B(z).
  std::fill(out.begin(), out.end(), 0.0);
  for (const Slice& sl : *slices_) {
    const SmoothedTanhTable& tab = *sl.table;
    for (std::size_t i = 0; i < n; ++i) {
      const double ax = sl.alpha * xs[i];
      const auto v = tab(ax + half_logit);
      out[i] += sl.weight * (sl.a_coef * v.sech2_mean - 2.0 * ax * v.tanh_mean);
    }
  }
}

}  // namespace gmsm
