#pragma once

#include <cmath>
#include <cstddef>

namespace gmsm {

struct ScalarMinimum {
  double x;
  double fx;
  std::size_t evaluations;
};

// Golden-section search on [a, b]. Equal values move toward the left end, and
// the reported point is the best evaluated one (smaller x on ties).
template <class F>
ScalarMinimum golden_section(F&& f, double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  std::size_t evals = 2;
  ScalarMinimum best = fc <= fd ? ScalarMinimum{c, fc, 0} : ScalarMinimum{d, fd, 0};
  auto offer = [&](double x, double fx) {
    if (fx < best.fx || (fx == best.fx && x < best.x)) best = {x, fx, 0};
  };
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      offer(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      offer(d, fd);
    }
    ++evals;
  }
  best.evaluations = evals;
  return best;
}

}  // namespace gmsm
