#include "sublevy/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sublevy {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  // Golden-ratio spacing keeps distinct streams of one seed well separated
  // before the SplitMix64 chain scrambles them.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  for (auto& s : state_) s = splitmix64_next(z);
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform01_open() {
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform01(); }

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * f;
  has_cached_normal_ = true;
  return u * f;
}

double Rng::exponential() { return -std::log1p(-uniform01()); }

double Rng::gamma(double shape) {
  if (shape < 0.0) throw std::invalid_argument("gamma: shape must be >= 0");
  if (shape == 0.0) return 0.0;
  if (shape < 1.0) {
    const double u = uniform01_open();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t Rng::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  std::uint64_t k = 0;
  double t = exponential();
  while (t <= mean) {
    ++k;
    t += exponential();
  }
  return k;
}

double Rng::inverse_gaussian(double mu, double lambda) {
  if (!(mu > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("inverse_gaussian: mu, lambda must be > 0");
  const double y = [&] {
    const double n = normal();
    return n * n;
  }();
  const double x = mu + mu * mu * y / (2.0 * lambda) -
                   mu / (2.0 * lambda) *
                       std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
  const double u = uniform01();
  return (u <= mu / (mu + x)) ? x : mu * mu / x;
}

double Rng::stable_one_sided(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("stable_one_sided: alpha must be in (0,1)");
  const double u = std::numbers::pi * uniform01_open();
  const double e = exponential();
  const double su = std::sin(u);
  const double b = std::pow(std::sin(alpha * u) / su, alpha / (1.0 - alpha)) *
                   (std::sin((1.0 - alpha) * u) / su);
  return std::pow(b / e, (1.0 - alpha) / alpha);
}

}  // namespace sublevy
