#pragma once

#include <array>
#include <cstdint>

namespace sublevy {

/// SplitMix64 step; used for seeding and for deriving per-node seeds.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// Deterministic counter-seeded random stream (xoshiro256++).
///
/// A stream is identified by (seed, stream). Distinct stream ids under the
/// same seed give statistically independent sequences, which is how all
/// parallel Monte Carlo in this library stays reproducible: work is split
/// into fixed chunks, each chunk owns stream id `base + chunk`, and partial
/// results are merged in chunk order regardless of thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform on [0,1) with 53 random bits.
  double uniform01();
  /// Uniform on (0,1), both endpoints excluded.
  double uniform01_open();
  double uniform(double a, double b);

  /// Standard normal via the Marsaglia polar method (second value cached).
  double normal();
  /// Exponential with rate 1.
  double exponential();
  /// Gamma(shape, rate 1) via Marsaglia-Tsang, with the boost for shape < 1.
  double gamma(double shape);
  /// Poisson(mean) by counting unit-exponential arrivals; exact, O(mean).
  std::uint64_t poisson(double mean);
  /// Inverse Gaussian(mu, lambda) via the Michael-Schucany-Haas transform
  /// with a rejection step.
  double inverse_gaussian(double mu, double lambda);
  /// Standard one-sided stable, E exp(-l S) = exp(-l^alpha), alpha in (0,1).
  /// Kanter's representation: S = (B(U)/E)^((1-alpha)/alpha).
  double stable_one_sided(double alpha);

 private:
  std::array<std::uint64_t, 4> state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace sublevy
