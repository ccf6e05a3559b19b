#include "gmsm/random.hpp"

#include <cmath>
#include <stdexcept>

namespace gmsm {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

RngStream::RngStream(std::uint64_t seed, std::uint64_t key)
    : seed_(seed), engine_(splitmix64(splitmix64(seed) ^ splitmix64(~key))) {}

double RngStream::uniform() { return uniform_(engine_); }

double RngStream::normal() { return normal_(engine_); }

LabeledSample sample_labeled(const MixtureParams& p, std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("sample size must be >= 1");
  LabeledSample out;
  out.x.resize(n);
  out.right.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool right = rng.uniform() < p.theta;
    out.right[i] = right ? 1 : 0;
    out.x[i] = (right ? p.mu : -p.mu) + rng.normal();
  }
  return out;
}

std::vector<double> sample(const MixtureParams& p, std::size_t n, RngStream& rng) {
  return sample_labeled(p, n, rng).x;
}

double sample_forward(double x0, double t, RngStream& rng) {
  if (!(t >= 0.0)) throw std::invalid_argument("diffusion time must be >= 0");
  if (t == 0.0) return x0;
  const double sd = std::sqrt(-std::expm1(-2.0 * t));
  return std::exp(-t) * x0 + sd * rng.normal();
}

}  // namespace gmsm
