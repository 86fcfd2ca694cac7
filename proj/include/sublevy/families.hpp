#pragma once

#include "sublevy/subordination.hpp"

namespace sublevy {

/// Normal inverse Gaussian process on the truncated H (single subordinator,
/// layout d = 1). c = 0 is the degenerate case: the subordinator becomes the
/// one-sided 1/2-stable law that the c -> 0 limit of the IG exponent gives,
/// so the closed-form exponent below stays valid for all c >= 0.
struct HNIGParams {
  double s = 1.0;
  double c = 1.0;
  Vector b;
  CovOperator q;

  bool degenerate() const { return c == 0.0; }
};

/// Symmetric strictly alpha-stable process, alpha in (0,2]; alpha = 2 is the
/// Gaussian base itself (unit-drift time change).
struct StableParams {
  double alpha = 1.0;
  CovOperator q;  // must be nonzero
};

/// Variance Gamma process on the truncated H.
struct HVGParams {
  double a = 1.0;
  Vector b;
  CovOperator q;
};

SubordinatedProcessSpec make_hnig(const HNIGParams& p);
SubordinatedProcessSpec make_stable(const StableParams& p);
SubordinatedProcessSpec make_hvg(const HVGParams& p);

/// rho(u) = s (c - sqrt(c^2 + <Qu|u> - 2i<u|b>)), principal root.
Complex hnig_exponent(const HNIGParams& p, const Vector& u);
/// rho(u) = -<Qu|u>^(alpha/2).
Complex stable_exponent(const StableParams& p, const Vector& u);
/// rho(u) = -a Log(1 + 1/2 <Qu|u> - i<b|u>), principal logarithm.
Complex hvg_exponent(const HVGParams& p, const Vector& u);

/// Projection T : H -> R^n given by rows t_1, ..., t_n: the n-dimensional
/// subordinated process with drift T b, covariance T Q T* and the same
/// subordinator. Requires a d = 1 spec: with more than one clock, T L is not
/// subordinated by a single time change. Its exponent satisfies
/// rho_T(z) = rho(T* z).
SubordinatedProcessSpec project_process(const SubordinatedProcessSpec& spec,
                                        const std::vector<Vector>& rows);

}  // namespace sublevy
