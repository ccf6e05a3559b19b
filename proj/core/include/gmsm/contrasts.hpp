#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmsm/mixture.hpp"
#include "gmsm/quadrature.hpp"
#include "gmsm/random.hpp"

namespace gmsm {

class SmoothedTanhTable;

struct NoiseSchedule {
  double T;
  QuadratureRule time;   // Gauss-Legendre on [0, T]
  QuadratureRule space;  // Gauss-Hermite for N(0,1)

  static NoiseSchedule make(double T, int time_nodes = 32, int space_nodes = 64);
  void validate() const;
};

// T = max(1, 2 ln mu)
double default_horizon(double mu);

double m_sm(double theta, double mu, double x);
double dm_sm_dtheta(double theta, double mu, double x);
// Stein form: int_0^T E[s_{theta,t}(X_t)^2 + 2 s'_{theta,t}(X_t) | X_0 = x0] dt
double m_ddsm(double theta, double mu, double x0, const NoiseSchedule& sched);

struct McEstimate {
  double estimate;
  double std_error;
};

// Raw denoising form T * E_U[s^2 + 2 s Z / sqrt(1 - e^{-2U})], U ~ Unif(0,T).
McEstimate m_ddsm_mc(double theta, double mu, double x0, double T, std::size_t draws,
                     RngStream& rng);

// Fixed noise level t with the un-evolved model score.
double m_dsm_fixed_t(double theta, double mu, double x0, double t, const QuadratureRule& space);

double m_ml(double theta, double mu, double x);

enum class ContrastKind { ML, SM, DDSM, DSMFixedT };

std::string_view to_string(ContrastKind k);
ContrastKind parse_contrast_kind(std::string_view name);

// How the noisy contrasts are evaluated inside risks: by the tabulated
// smoothed-tanh decomposition, or straight through the quadrature of m_ddsm
// and m_dsm_fixed_t.
enum class NoisyRoute { Tabulated, Quadrature };

// Contrast m(theta, x) for a fixed mu. Every contrast splits as
//   m(theta, x) = c(x) + d(theta, x)
// and minimizers only ever compare sums of d.
class ContrastEvaluator {
 public:
  static ContrastEvaluator ml(double mu);
  static ContrastEvaluator sm(double mu);
  static ContrastEvaluator ddsm(double mu, NoiseSchedule sched,
                                NoisyRoute route = NoisyRoute::Tabulated);
  static ContrastEvaluator dsm_fixed_t(double mu, double t, int space_nodes = 64,
                                       NoisyRoute route = NoisyRoute::Tabulated);
  static ContrastEvaluator make(ContrastKind kind, double mu, double T, double fixed_t,
                                NoisyRoute route = NoisyRoute::Tabulated);

  ContrastEvaluator with_offset(double c) const;

  ContrastKind kind() const { return kind_; }
  double mu() const { return mu_; }
  const std::optional<NoiseSchedule>& schedule() const { return schedule_; }
  std::optional<double> fixed_t() const { return fixed_t_; }
  NoisyRoute route() const { return route_; }
  double offset() const { return offset_; }

  // m(theta, x) through the reference closed form / quadrature.
  double value(double theta, double x) const;
  double theta_free_part(double x) const;
  double theta_part(double theta, double x) const;
  // out[i] = d(theta, xs[i])
  void theta_parts(double theta, std::span<const double> xs, std::span<double> out) const;

  struct Slice {
    double weight;
    double mu_eff;  // location the score is evaluated with
    double e;       // e^{-t}
    double var;     // 1 - e^{-2t}
    double alpha;   // mu_eff * e
    double a_coef;  // mu_eff^2 - 2 s^2 with s = mu_eff * sqrt(var)
    std::shared_ptr<const SmoothedTanhTable> table;
  };

 private:
  ContrastEvaluator() = default;
  void build_slices();

  ContrastKind kind_ = ContrastKind::SM;
  double mu_ = 1.0;
  std::optional<NoiseSchedule> schedule_;
  std::optional<double> fixed_t_;
  std::optional<QuadratureRule> fixed_space_;
  NoisyRoute route_ = NoisyRoute::Tabulated;
  double offset_ = 0.0;
  double c0_ = 0.0, c2_ = 0.0;  // theta-free part of noisy contrasts is c0 + c2 x^2
  std::shared_ptr<const std::vector<Slice>> slices_;
};

}  // namespace gmsm
