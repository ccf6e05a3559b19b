#include "gmsm/smoothing_table.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "gmsm/detail/hyperbolic.hpp"

namespace gmsm {

namespace {

const QuadratureRule& cached_hermite(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(gauss_hermite_normal(n));
  return *slot;
}

struct Knot {
  double b, b1, b2;  // B and its derivatives
  double a, a1, a2;  // A and its derivatives
};

// B' = A, B'' = A' = E[-2 sech^2 tanh], A'' = E[4 sech^2 tanh^2 - 2 sech^4]
Knot knot(double z, double s, const QuadratureRule& gh) {
  Knot k{0, 0, 0, 0, 0, 0};
  for (std::size_t j = 0; j < gh.size(); ++j) {
    const double w = gh.weights[j];
    if (w == 0.0) continue;
    const double v = z + s * gh.nodes[j];
    const double th = std::tanh(v);
    const double se = detail::sech2(v);
    k.b += w * th;
    k.a += w * se;
    k.a1 += w * (-2.0 * se * th);
    k.a2 += w * (4.0 * se * th * th - 2.0 * se * se);
  }
  k.b1 = k.a;
  k.b2 = k.a1;
  return k;
}

// Monomial coefficients in the local coordinate f in [0,1] of the quintic
// matching value, slope and curvature at both ends of a cell of width h.
void quintic(double f0, double d0, double c0, double f1, double d1, double c1, double h,
             double* out) {
  const double df = f1 - f0;
  const double hd0 = h * d0, hd1 = h * d1;
  const double hc0 = h * h * c0, hc1 = h * h * c1;
  out[0] = f0;
  out[1] = hd0;
  out[2] = 0.5 * hc0;
  out[3] = 10.0 * df - 6.0 * hd0 - 4.0 * hd1 - 1.5 * hc0 + 0.5 * hc1;
  out[4] = -15.0 * df + 8.0 * hd0 + 7.0 * hd1 + 1.5 * hc0 - hc1;
  out[5] = 6.0 * df - 3.0 * hd0 - 3.0 * hd1 - 0.5 * hc0 + 0.5 * hc1;
}

}  // namespace

int SmoothedTanhTable::knot_rule_size(double s) {
  const double n = 64.0 + 48.0 * s * s;
  return static_cast<int>(std::min(1024.0, std::ceil(n)));
}

SmoothedTanhTable::Value SmoothedTanhTable::direct(double z, double s, const QuadratureRule& gh) {
  double b = 0.0, a = 0.0;
  for (std::size_t j = 0; j < gh.size(); ++j) {
    const double v = z + s * gh.nodes[j];
    b += gh.weights[j] * std::tanh(v);
    a += gh.weights[j] * detail::sech2(v);
  }
  return {b, a};
}

SmoothedTanhTable::SmoothedTanhTable(double s, double step) : s_(s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("smoothing must be >= 0");
  if (!(step > 0.0)) throw std::invalid_argument("table step must be positive");
  // 1 - B <= 2 exp(-2 z + 2 s^2) and A is below exp(-44) once z/s >= 10.
  const double cut = 22.0 + s * s + 10.0 * s;
  cells_ = static_cast<int>(std::ceil(2.0 * cut / step));
  z_min_ = -0.5 * cells_ * step;
  inv_step_ = 1.0 / step;
  const QuadratureRule& gh = cached_hermite(s == 0.0 ? 1 : knot_rule_size(s));
  const double s_eff = s == 0.0 ? 0.0 : s;

  std::vector<Knot> knots(static_cast<std::size_t>(cells_) + 1);
  for (int i = 0; i <= cells_; ++i) knots[i] = knot(z_min_ + i * step, s_eff, gh);

  coef_.resize(12 * static_cast<std::size_t>(cells_));
  for (int i = 0; i < cells_; ++i) {
    const Knot& l = knots[i];
    const Knot& r = knots[i + 1];
    double* c = &coef_[12 * static_cast<std::size_t>(i)];
    quintic(l.b, l.b1, l.b2, r.b, r.b1, r.b2, step, c);
    quintic(l.a, l.a1, l.a2, r.a, r.a1, r.a2, step, c + 6);
  }
}

}  // namespace gmsm
