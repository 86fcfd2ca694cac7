#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "sublevy/subordinator.hpp"

namespace sublevy {

/// Gauss-Legendre nodes and weights on [-1, 1], computed once per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

/// Gauss-Laguerre nodes and weights (weight e^{-x} on [0, inf)).
const std::pair<std::vector<double>, std::vector<double>>& gauss_laguerre(int n);

/// Pointwise evaluation of a (possibly Monte Carlo) integrand at a node of
/// the theta-domain: value and per-entry standard error (zero if exact).
struct Evaluation {
  Eigen::VectorXd value;
  Eigen::VectorXd se;
};

using NodeIntegrand = std::function<Evaluation(const std::vector<double>&)>;

struct LevyQuadConfig {
  double rel_tol = 1e-8;    // relative target for the deterministic part
  double tail_tol = 1e-8;   // absolute truncation budget for the F-tail
  double sup_bound = 1.0;   // bound on |g| used to truncate the tail
  int low_order = 8;        // per-interval orders for the refinement pair
  int high_order = 16;
  int max_intervals = 240;  // dyadic intervals per ray
  double anchor = 1.0;      // upper truncation search starts here
};

struct QuadResult {
  Eigen::VectorXd value;
  /// Disagreement between the two quadrature orders beyond the 4-sigma
  /// allowance for the integrand's own Monte Carlo noise.
  Eigen::VectorXd quad_error;
  /// Standard error propagated from the integrand's node-level SEs.
  Eigen::VectorXd mc_se;
  bool converged = true;
  double theta_max = 0.0;
  int intervals_used = 0;

  /// Non-convergence means the noise-adjusted refinement disagreement
  /// exceeds the relative tolerance.
  void classify(double rel_tol);
};

/// integral of g against the subordinator's Levy measure F. The measure is
/// decomposed into rays (axes / common-factor direction), each integrated on
/// dyadic intervals with a Gauss-Legendre pair, densest near zero where the
/// densities blow up, truncated where the F-tail mass times sup|g| drops
/// below tail_tol. Finite compound-Poisson parts use exact sums (atoms) or a
/// tensorized CDF-transform quadrature (exponential jumps).
QuadResult integrate_against_F(const SubordinatorSpec& spec, int output_dim,
                               const NodeIntegrand& g,
                               const LevyQuadConfig& cfg);

}  // namespace sublevy
