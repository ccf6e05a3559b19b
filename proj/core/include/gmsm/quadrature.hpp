#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmsm {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre rule on [-1, 1], and mapped onto [a, b].
QuadratureRule gauss_legendre(int n);
QuadratureRule gauss_legendre(int n, double a, double b);
// Gauss-Hermite rule for expectations under N(0,1): sum w_i g(x_i) ~ E g(Z).
// Weights sum to one.
QuadratureRule gauss_hermite_normal(int n);

// Shared read-only copies of the rules; safe to call from several threads.
const QuadratureRule& cached_gauss_legendre(int n);

enum class QuadratureMethod { GaussLegendre, Adaptive };

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::GaussLegendre;
  int nodes = 32;             // per panel for Gauss-Legendre
  double truncation = 12.0;   // half-width beyond +-mu, in sigma units
  double panel_width = 0.25;  // composite panel length
  double tolerance = 1e-13;   // relative target of the adaptive method
  int max_depth = 18;

  void validate() const {
    if (nodes < 16) throw std::invalid_argument("quadrature needs >= 16 nodes");
    if (truncation < 10.0) throw std::invalid_argument("truncation must be >= 10");
    if (!(panel_width > 0.0)) throw std::invalid_argument("panel width must be positive");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  }
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const { return achieved_; }

 private:
  double achieved_;
};

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& q);

template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& q = {}) {
  q.validate();
  if (q.method == QuadratureMethod::Adaptive)
    return integrate_adaptive(std::function<double(double)>(f), a, b, q);
  const QuadratureRule& rule = cached_gauss_legendre(q.nodes);
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / q.panel_width)));
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double half = 0.5 * h, mid = lo + half;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += half * acc;
  }
  return total;
}

// Integral over the real line of a mixture-weighted integrand, truncated to
// [-mu - truncation, mu + truncation].
template <class F>
double integrate_line(F&& f, double mu, const QuadratureSpec& q = {}) {
  return integrate(std::forward<F>(f), -mu - q.truncation, mu + q.truncation, q);
}

// Pairwise summation; the tree shape depends only on the index positions.
double pairwise_sum(std::span<const double> v);

}  // namespace gmsm
