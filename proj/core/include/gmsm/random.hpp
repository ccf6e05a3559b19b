#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gmsm/mixture.hpp"

namespace gmsm {

// Seedable 64-bit stream. Child streams are derived from (seed, key) by a
// SplitMix64 mix, so replication r of a sweep always sees the same numbers
// no matter which worker runs it or in what order.
class RngStream {
 public:
  using engine_type = std::mt19937_64;

  explicit RngStream(std::uint64_t seed);
  RngStream(std::uint64_t seed, std::uint64_t key);

  static RngStream for_replication(std::uint64_t seed, std::uint64_t replication) {
    return RngStream(seed, replication);
  }
  RngStream split(std::uint64_t key) const { return RngStream(seed_, key); }

  std::uint64_t seed() const { return seed_; }

  double uniform();  // [0,1)
  double normal();
  engine_type& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  engine_type engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

struct LabeledSample {
  std::vector<double> x;
  std::vector<unsigned char> right;  // 1 if drawn from N(+mu,1)
};

std::vector<double> sample(const MixtureParams& p, std::size_t n, RngStream& rng);
LabeledSample sample_labeled(const MixtureParams& p, std::size_t n, RngStream& rng);

// One draw of X_t | X_0 = x0 under the OU forward process.
double sample_forward(double x0, double t, RngStream& rng);

}  // namespace gmsm
