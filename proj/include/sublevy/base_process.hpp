#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "sublevy/hilbert.hpp"
#include "sublevy/rng.hpp"
#include "sublevy/subordinator.hpp"

namespace sublevy {

/// Compound Poisson jump part on one component space H_j: a finite mixture
/// of fixed jump vectors. Finite atoms keep exponents, moments and triplets
/// exactly computable.
struct ComponentJumpSpec {
  double rate = 1.0;
  std::vector<double> probs;
  std::vector<Eigen::VectorXd> atoms;

  Eigen::VectorXd mean() const;
  /// E[chi(J)] with chi(x) = x 1_{|x| <= 1}.
  Eigen::VectorXd truncated_mean() const;
  double second_moment() const;             // E |J|^2
  double large_jump_abs_moment() const;     // E [|J| 1_{|J| > 1}]
  double small_jump_second_moment() const;  // E [|J|^2 1_{|J| <= 1}]
};

/// The independent base processes L_1, ..., L_d on the truncated spaces.
///
/// `drift` is the pathwise linear drift: the sampler realises
///   L_j(theta) = theta b_j + sqrt(theta) N(0, Q_j) + CompoundPoisson_j(theta)
/// with uncompensated jumps. The Levy-Khintchine drift with respect to the
/// truncation chi(x) = x 1_{|x|<=1} is triplet_drift() = b + rate E chi(J);
/// the two coincide whenever the truncated jump mean vanishes.
struct BaseProcessSpec {
  SpaceLayout layout;
  Vector drift;
  CovOperator gaussian;
  std::vector<std::optional<ComponentJumpSpec>> jumps;  // empty means none

  int d() const { return layout.d(); }
  void validate() const;
  bool has_jumps() const;
  bool component_has_jumps(int j) const;

  Vector triplet_drift() const;
  /// E L(1) = drift + sum_j rate_j E J_j.
  Vector mean() const;
  bool mean_zero() const;
  bool component_mean_zero(int j) const;
  bool trivial() const;
  bool component_trivial(int j) const;
  bool is_gaussian() const;  // no jump part anywhere
  bool component_gaussian(int j) const;

  /// E |L_j(1) - E L_j(1)|^2 = tr Q_j + int |x|^2 nu_j(dx).
  double component_second_moment(int j) const;
  double second_moment() const;
  /// Dense Cov(L(1)) = Q + int x (x) x nu(dx) on the flattened space.
  Eigen::MatrixXd cov_dense() const;

  static BaseProcessSpec gaussian_process(SpaceLayout layout, Vector drift,
                                          CovOperator q);
};

struct BaseExponent {
  std::vector<Complex> per_component;  // phi_j(u_j)
  Complex total;                       // sum, the exponent of L on H
};

/// phi_j(u) = i<u|b_j> - 1/2 <Q_j u|u> + rate_j E[exp(i<u|J>) - 1]; exact for
/// the finite-atom jump parts.
BaseExponent levy_exponent_base(const BaseProcessSpec& spec, const Vector& u);

/// Exact draw of L(theta) for theta in R_+^d; components independent.
Vector sample_base_at(const BaseProcessSpec& spec,
                      const std::vector<double>& theta, Rng& rng);

/// Constants of the bound E|L(theta)| <= |theta| C1 + |theta|^(1/2) C2 with
///   C1 = |triplet drift| + int_{|x|>1} |x| nu(dx),
///   C2 = (tr Q + int_{|x|<=1} |x|^2 nu(dx))^(1/2).
/// For mean-zero specs also the martingale constant
///   C = (tr Q + int |x|^2 nu(dx))^(1/2) with E|L(theta)| <= |theta|^(1/2) C.
struct GrowthBoundConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<double> martingale_c;
};

GrowthBoundConstants growth_function_bound(const BaseProcessSpec& spec);

/// Metadata the integrability classifier needs about a base process. Derived
/// automatically for constructible specs; the strictly-stable constructor
/// covers the martingale-base criterion for alpha-stable bases, which are
/// classifiable but not samplable here.
struct BaseTraits {
  int d = 1;
  std::vector<bool> component_trivial;
  std::vector<bool> component_mean_zero;
  std::vector<bool> component_gaussian;
  bool square_integrable = true;
  std::optional<double> stable_index;  // alpha in (1,2), mean-zero base

  static BaseTraits from(const BaseProcessSpec& spec);
  static BaseTraits strictly_stable(int d, double alpha);
};

}  // namespace sublevy
