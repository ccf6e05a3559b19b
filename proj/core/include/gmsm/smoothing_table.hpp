#pragma once

#include <vector>

#include "gmsm/quadrature.hpp"

namespace gmsm {

// Gaussian-smoothed tanh and sech^2:
//   B(z) = E tanh(z + s Z),  A(z) = E sech^2(z + s Z),  Z ~ N(0,1).
// Tabulated as quintic Hermite pieces (value, first and second derivative at
// the knots) over [-z_cut, z_cut]; outside, B = sign(z) and A = 0 to double
// precision. Node values come from a Gauss-Hermite rule sized to s.
class SmoothedTanhTable {
 public:
  struct Value {
    double tanh_mean;
    double sech2_mean;
  };

  SmoothedTanhTable(double s, double step = 1.0 / 32.0);

  Value operator()(double z) const {
    const double u = (z - z_min_) * inv_step_;
    if (u >= 0.0 && u < cells_) {
      const int i = static_cast<int>(u);
      const double f = u - i;
      const double* c = &coef_[12 * static_cast<std::size_t>(i)];
      const double b = c[0] + f * (c[1] + f * (c[2] + f * (c[3] + f * (c[4] + f * c[5]))));
      const double a = c[6] + f * (c[7] + f * (c[8] + f * (c[9] + f * (c[10] + f * c[11]))));
      return {b, a};
    }
    return {z > 0.0 ? 1.0 : -1.0, 0.0};
  }

  double smoothing() const { return s_; }
  double cutoff() const { return -z_min_; }
  std::size_t cells() const { return static_cast<std::size_t>(cells_); }

  // Direct quadrature evaluation with the given rule.
  static Value direct(double z, double s, const QuadratureRule& gh);
  // Rule size used for the knot values at smoothing s.
  static int knot_rule_size(double s);

 private:
  double s_;
  double z_min_;
  double inv_step_;
  int cells_;
  std::vector<double> coef_;
};

}  // namespace gmsm
