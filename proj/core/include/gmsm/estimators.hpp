#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "gmsm/contrasts.hpp"
#include "gmsm/mixture.hpp"
#include "gmsm/quadrature.hpp"

namespace gmsm {

// Data in canonical (sorted) order, so risks do not depend on the order the
// observations arrived in.
class Sample {
 public:
  explicit Sample(std::vector<double> data);

  std::span<const double> values() const { return data_; }
  std::size_t size() const { return data_.size(); }

 private:
  std::vector<double> data_;
};

enum class TieBreak { SmallestTheta };

struct OptimizerSpec {
  int coarse_grid = 512;
  double refine_tol = 1e-9;
  TieBreak tie_break = TieBreak::SmallestTheta;

  void validate() const {
    if (coarse_grid < 64) throw std::invalid_argument("coarse grid needs >= 64 points");
    if (!(refine_tol > 0.0)) throw std::invalid_argument("refine tolerance must be positive");
  }
};

struct EstimationResult {
  double theta_hat;
  double loss_at_opt;
  std::size_t evaluations;
  bool boundary_hit;
};

// (1/n) sum m(theta, x_i), pairwise summed.
double empirical_risk(const ContrastEvaluator& ev, double theta, const Sample& data);
double empirical_risk(const ContrastEvaluator& ev, double theta, std::span<const double> data);

// theta-dependent part of the risk, the quantity minimize compares.
double risk_theta_part(const ContrastEvaluator& ev, double theta, const Sample& data,
                       std::vector<double>& scratch);
double risk_theta_free_part(const ContrastEvaluator& ev, const Sample& data);

EstimationResult minimize(const ContrastEvaluator& ev, const Sample& data,
                          const OptimizerSpec& opt = {}, const ParamSpace& space = {});

struct AvarParts {
  double numerator;               // E[(d_theta m_SM)^2]
  double denominator;             // E[d^2_theta m_SM], central difference
  double denominator_richardson;  // Richardson-extrapolated central difference
  double value;
};

class VarianceOverflow : public std::runtime_error {
 public:
  VarianceOverflow(const std::string& what, AvarParts partial)
      : std::runtime_error(what), partial_(partial) {}
  const AvarParts& partial() const { return partial_; }

 private:
  AvarParts partial_;
};

AvarParts avar_sm_parts(double theta0, double mu, const QuadratureSpec& q = {});
double avar_sm(double theta0, double mu, const QuadratureSpec& q = {});
double crlb(double theta0, double mu, const QuadratureSpec& q = {});

}  // namespace gmsm
