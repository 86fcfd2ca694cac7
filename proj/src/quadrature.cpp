#include "sublevy/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sublevy {

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> x(static_cast<std::size_t>(n)),
      w(static_cast<std::size_t>(n));
  // Newton iteration on P_n with the Chebyshev-angle initial guess.
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    const double weight = 2.0 / ((1.0 - z * z) * pp * pp);
    w[static_cast<std::size_t>(i)] = weight;
    w[static_cast<std::size_t>(n - 1 - i)] = weight;
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_laguerre(int n) {
  static std::mutex mutex;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> x(static_cast<std::size_t>(n)),
      w(static_cast<std::size_t>(n));
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0)
      z = 3.0 / (1.0 + 2.4 * n);
    else if (i == 1)
      z += 15.0 / (1.0 + 2.5 * n);
    else
      z += ((1.0 + 2.6 * (i - 1)) / (1.9 * (i - 1))) *
           (z - x[static_cast<std::size_t>(i - 2)]);
    double p1 = 1.0, p2 = 0.0, pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      p1 = 1.0;
      p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (p1 - p2) / z;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-14 * std::max(1.0, z)) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = -1.0 / (pp * n * p2);
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

namespace {

struct Accumulated {
  Eigen::VectorXd value;
  Eigen::VectorXd se2;  // sum of squared node SEs, weighted
};

// integral over [lo, hi] of g(z * direction) * f_part(z) dz at a fixed order.
Accumulated ray_interval(const UniJump& part,
                         const std::vector<double>& direction, int dim,
                         const NodeIntegrand& g, double lo, double hi,
                         int order) {
  const auto& [nodes, weights] = gauss_legendre(order);
  Accumulated acc{Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim)};
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::vector<double> theta(direction.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double z = mid + half * nodes[k];
    const double wf = half * weights[k] * uni_levy_density(part, z);
    for (std::size_t j = 0; j < direction.size(); ++j)
      theta[j] = z * direction[j];
    const Evaluation eval = g(theta);
    acc.value += wf * eval.value;
    acc.se2 += (wf * eval.se).cwiseAbs2();
  }
  return acc;
}

void accumulate(QuadResult& out, const Accumulated& low, const Accumulated& high) {
  out.value += high.value;
  // Refinement disagreement beyond what the inner Monte Carlo noise of the
  // two node sets explains; pure-noise wobble must not flag divergence.
  const Eigen::VectorXd noise = (high.se2 + low.se2).cwiseSqrt();
  out.quad_error +=
      ((high.value - low.value).cwiseAbs() - 4.0 * noise).cwiseMax(0.0);
  out.mc_se += high.se2;  // variances; converted to SE at the end
}

}  // namespace

void QuadResult::classify(double rel_tol) {
  const double scale = std::max(1.0, value.cwiseAbs().maxCoeff());
  for (int i = 0; i < value.size(); ++i) {
    if (quad_error(i) > rel_tol * scale) {
      converged = false;
      return;
    }
  }
}

QuadResult integrate_against_F(const SubordinatorSpec& spec, int output_dim,
                               const NodeIntegrand& g,
                               const LevyQuadConfig& cfg) {
  spec.validate();
  QuadResult out;
  out.value = Eigen::VectorXd::Zero(output_dim);
  out.quad_error = Eigen::VectorXd::Zero(output_dim);
  out.mc_se = Eigen::VectorXd::Zero(output_dim);

  const FDecomposition decomp = decompose_levy_measure(spec);

  for (const auto& ray : decomp.rays) {
    // Truncate where the remaining F-mass, times sup|g|, is below budget.
    double t_max = cfg.anchor;
    while (uni_tail_mass_upper(ray.part, t_max) * cfg.sup_bound > cfg.tail_tol &&
           t_max < 1e60)
      t_max *= 2.0;
    out.theta_max = std::max(out.theta_max, t_max);

    double hi = t_max;
    int small_streak = 0;
    int k = 0;
    double prev_magnitude = std::numeric_limits<double>::infinity();
    for (; k < cfg.max_intervals && small_streak < 3; ++k) {
      const double lo = 0.5 * hi;
      const Accumulated low =
          ray_interval(ray.part, ray.direction, output_dim, g, lo, hi,
                       cfg.low_order);
      const Accumulated high =
          ray_interval(ray.part, ray.direction, output_dim, g, lo, hi,
                       cfg.high_order);
      accumulate(out, low, high);
      const double scale =
          std::max(cfg.tail_tol, cfg.rel_tol * out.value.cwiseAbs().maxCoeff());
      const double magnitude = high.value.cwiseAbs().maxCoeff();
      // Contributions near a heavy upper tail start small and *grow* on the
      // way down, so termination additionally needs the sweep to have passed
      // the anchor with non-increasing contributions.
      if (lo <= cfg.anchor && magnitude < scale &&
          (magnitude <= prev_magnitude || magnitude < 0.125 * scale))
        ++small_streak;
      else
        small_streak = 0;
      prev_magnitude = magnitude;
      hi = lo;
    }
    out.intervals_used += k;
    if (small_streak < 3) out.converged = false;
  }

  if (decomp.compound_poisson != nullptr) {
    const auto& cp = *decomp.compound_poisson;
    if (const auto* atoms = std::get_if<AtomJumpDist>(&cp.dist)) {
      for (std::size_t a = 0; a < atoms->probs.size(); ++a) {
        const Evaluation eval = g(atoms->points[a]);
        const double w = cp.rate * atoms->probs[a];
        out.value += w * eval.value;
        out.mc_se += (w * eval.se).cwiseAbs2();
      }
    } else {
      const auto& means = std::get<ExponentialJumpDist>(cp.dist).means;
      const int d = static_cast<int>(means.size());
      // The exponential jump density is exactly the Gauss-Laguerre weight:
      // rate E[g(J)] = rate * tensor Laguerre sum of g(m o y).
      auto tensor = [&](int order) {
        const auto& [nodes, weights] = gauss_laguerre(order);
        Accumulated acc{Eigen::VectorXd::Zero(output_dim),
                        Eigen::VectorXd::Zero(output_dim)};
        std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
        std::vector<double> x(static_cast<std::size_t>(d));
        for (;;) {
          double w = cp.rate;
          for (int j = 0; j < d; ++j) {
            x[static_cast<std::size_t>(j)] =
                means[static_cast<std::size_t>(j)] *
                nodes[idx[static_cast<std::size_t>(j)]];
            w *= weights[idx[static_cast<std::size_t>(j)]];
          }
          const Evaluation eval = g(x);
          acc.value += w * eval.value;
          acc.se2 += (w * eval.se).cwiseAbs2();
          int j = 0;
          while (j < d && ++idx[static_cast<std::size_t>(j)] == nodes.size()) {
            idx[static_cast<std::size_t>(j)] = 0;
            ++j;
          }
          if (j == d) break;
        }
        return acc;
      };
      const Accumulated low = tensor(16);
      const Accumulated high = tensor(32);
      accumulate(out, low, high);
    }
  }

  out.mc_se = out.mc_se.cwiseSqrt();
  out.classify(cfg.rel_tol);
  return out;
}

}  // namespace sublevy
