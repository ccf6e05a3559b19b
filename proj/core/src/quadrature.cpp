#include "gmsm/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <limits>
#include <numbers>

namespace gmsm {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre needs n >= 1");
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    {
      // recompute the derivative at the converged root
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule r = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] *= half;
  }
  return r;
}

QuadratureRule gauss_hermite_normal(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Hermite needs n >= 1");
  // Golub-Welsch for the probabilists' Hermite weight: the Jacobi matrix has
  // zero diagonal and off-diagonal sqrt(k). Nodes are then polished by Newton
  // on the orthonormal recurrence, which also gives the weights.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("Gauss-Hermite eigensolver failed");

  // p_k orthonormal w.r.t. N(0,1): p_{k+1} = (x p_k - sqrt(k) p_{k-1}) / sqrt(k+1)
  auto eval = [n](double x, double& pn, double& pn1) {
    double pm = 0.0, p = 1.0;
    for (int k = 0; k < n; ++k) {
      const double next = (x * p - std::sqrt(static_cast<double>(k)) * pm) / std::sqrt(k + 1.0);
      pm = p;
      p = next;
    }
    pn = p;     // p_n
    pn1 = pm;   // p_{n-1}
  };
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = eig.eigenvalues()(i);
    double pn = 0.0, pn1 = 0.0;
    for (int it = 0; it < 3; ++it) {
      eval(x, pn, pn1);
      const double d = std::sqrt(static_cast<double>(n)) * pn1;  // p_n' = sqrt(n) p_{n-1}
      if (d == 0.0 || !std::isfinite(d)) break;
      const double dx = pn / d;
      if (!std::isfinite(dx) || std::fabs(dx) > 1e-6 * std::max(1.0, std::fabs(x))) break;
      x -= dx;
    }
    eval(x, pn, pn1);
    r.nodes[i] = x;
    // Christoffel weight 1 / sum_k p_k(x)^2, equivalently 1 / (n p_{n-1}(x)^2) at a root
    double s = 0.0, pm = 0.0, p = 1.0;
    for (int k = 0; k < n; ++k) {
      s += p * p;
      const double next = (x * p - std::sqrt(static_cast<double>(k)) * pm) / std::sqrt(k + 1.0);
      pm = p;
      p = next;
    }
    r.weights[i] = std::isfinite(s) && s > 0.0 ? 1.0 / s : 0.0;
  }
  // exact symmetry
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
    const double w = 0.5 * (r.weights[i] + r.weights[n - 1 - i]);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  double total = 0.0;
  for (double w : r.weights) total += w;
  for (double& w : r.weights) w /= total;
  return r;
}

const QuadratureRule& cached_gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(gauss_legendre(n));
  return *slot;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& q) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0, l1 = 0.0;
  const double value = Rule::integrate(f, a, b, q.max_depth, q.tolerance, &err, &l1);
  const double scale = std::max(l1, std::numeric_limits<double>::min());
  if (!(err <= 10.0 * q.tolerance * scale) || !std::isfinite(value))
    throw QuadratureError("adaptive quadrature did not converge, achieved relative error " +
                              std::to_string(err / scale),
                          err / scale);
  return value;
}

double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kBlock = 16;
  if (v.size() <= kBlock) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace gmsm
