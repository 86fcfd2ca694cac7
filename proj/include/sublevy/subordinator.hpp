#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "sublevy/rng.hpp"

namespace sublevy {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Univariate jump building blocks (each one a pure-jump subordinator law).
// ---------------------------------------------------------------------------

/// Inverse Gaussian: psi(v) = s (c - sqrt(c^2 - 2v)), Levy density
/// s / sqrt(2 pi theta^3) exp(-c^2 theta / 2). c = 0 degenerates to the
/// one-sided 1/2-stable law with scale s sqrt(2), which is exactly the c -> 0
/// limit of the closed form; the sampler routes there.
struct IgJump {
  double s = 1.0;
  double c = 1.0;
};

/// One-sided strictly alpha-stable, alpha in (0,1):
/// psi(v) = -scale (-v)^alpha, Levy density
/// scale * alpha / Gamma(1-alpha) * theta^(-1-alpha).
struct StableJump {
  double alpha = 0.5;
  double scale = 1.0;
};

/// Gamma subordinator with shape rate a and unit scale:
/// psi(v) = -a Log(1 - v), Levy density a theta^(-1) exp(-theta).
struct GammaJump {
  double a = 1.0;
};

using UniJump = std::variant<IgJump, StableJump, GammaJump>;

void validate_uni_jump(const UniJump& jump);
Complex uni_laplace_exponent(const UniJump& jump, Complex v);
double uni_levy_density(const UniJump& jump, double theta);
double uni_sample_increment(const UniJump& jump, double dt, Rng& rng);
/// Upper bound on the Levy tail mass F((T, infinity)); exact for IG and
/// stable, e^-T / T envelope for Gamma.
double uni_tail_mass_upper(const UniJump& jump, double t);

struct UniMoments {
  double mean = 0.0;                    // +inf when not integrable
  double variance = 0.0;                // +inf when not square integrable
  std::optional<double> tail_index;     // polynomial tail order of F, if any
};
UniMoments uni_moments(const UniJump& jump);

// ---------------------------------------------------------------------------
// Compound Poisson jump distributions on R_+^d.
// ---------------------------------------------------------------------------

/// Finite mixture of fixed points (the "user-supplied joint jump" case; the
/// only route to fully general d-variate dependence). No Lebesgue density.
struct AtomJumpDist {
  std::vector<double> probs;
  std::vector<std::vector<double>> points;
};

/// Independent exponential coordinates with the given means; product-form
/// Lebesgue density on the open orthant.
struct ExponentialJumpDist {
  std::vector<double> means;
};

using JumpDist = std::variant<AtomJumpDist, ExponentialJumpDist>;

struct CompoundPoissonJumps {
  double rate = 1.0;
  JumpDist dist;
};

/// Theta_j = loading_j * Z + idiosyncratic_j with one shared factor Z; the
/// only dependent construction besides compound Poisson.
struct CommonFactorJumps {
  UniJump factor;  // IG or Gamma
  std::vector<double> loadings;
  std::vector<std::optional<UniJump>> idiosyncratic;  // may be empty
};

struct PerComponentJumps {
  std::vector<std::optional<UniJump>> parts;
};

using SubordinatorJumps = std::variant<std::monostate, PerComponentJumps,
                                       CompoundPoissonJumps, CommonFactorJumps>;

// ---------------------------------------------------------------------------
// The d-variate subordinator.
// ---------------------------------------------------------------------------

struct SubordinatorSpec {
  std::vector<double> drift;  // a0, componentwise >= 0
  SubordinatorJumps jumps;

  int d() const { return static_cast<int>(drift.size()); }
  bool has_jumps() const {
    return !std::holds_alternative<std::monostate>(jumps);
  }
  /// Componentwise: does component j carry any jump mass?
  bool component_has_jumps(int j) const;
  /// Theta_j = 0 almost surely.
  bool component_trivial(int j) const;
  void validate() const;

  static SubordinatorSpec pure_drift(std::vector<double> a0);
};

/// psi(s) = a0 s + integral (e^{s theta} - 1) F(d theta) on Re(s_j) <= 0.
/// Re(s_j) > 0 beyond rounding noise is a domain error.
Complex laplace_exponent(const SubordinatorSpec& spec,
                         const std::vector<Complex>& s);

/// Density of F at theta with respect to its natural reference measure:
/// Lebesgue on the orthant for product-form compound Poisson, arclength
/// parameter densities on the axes for per-component parts (evaluating a
/// per-component measure at an interior point returns 0), and the factor-ray
/// parameter density for common-factor specs. All-zero theta is invalid;
/// zero components inside a product-form density are a support error.
double levy_density_F(const SubordinatorSpec& spec,
                      const std::vector<double>& theta);

/// Exact draw of Theta(t + dt) - Theta(t); componentwise >= a0 dt.
std::vector<double> sample_increment(const SubordinatorSpec& spec, double dt,
                                     Rng& rng);

struct SubordinatorMoments {
  std::vector<double> mean;           // per component, +inf allowed
  Eigen::MatrixXd covariance;         // entries +inf where undefined
  std::vector<std::optional<double>> tail_index;  // per component

  bool component_mean_finite(int j) const;
  bool component_square_integrable(int j) const;
  /// E sqrt(Theta_j(1)) < infinity  (finite iff tail index > 1/2 when heavy).
  bool component_sqrt_moment_finite(int j) const;
  bool mean_finite() const;
  bool square_integrable() const;
  bool sqrt_moment_finite() const;
  /// E |Theta(1)|^p < infinity.
  bool moment_finite(double p) const;
};

SubordinatorMoments subordinator_moments(const SubordinatorSpec& spec);

// ---------------------------------------------------------------------------
// Structure of F used by the quadrature driver: a list of rays
// {z * direction : z > 0} each carrying a univariate density, plus an
// optional finite compound Poisson part.
// ---------------------------------------------------------------------------

struct LevyRay {
  std::vector<double> direction;  // nonzero, componentwise >= 0
  UniJump part;
};

struct FDecomposition {
  std::vector<LevyRay> rays;
  const CompoundPoissonJumps* compound_poisson = nullptr;
};

FDecomposition decompose_levy_measure(const SubordinatorSpec& spec);

// JumpDist helpers.
std::vector<double> jump_dist_mean(const JumpDist& dist);
Eigen::MatrixXd jump_dist_second_moment(const JumpDist& dist);
Complex jump_dist_mgf(const JumpDist& dist, const std::vector<Complex>& s);
std::vector<double> jump_dist_sample(const JumpDist& dist, Rng& rng);
int jump_dist_dim(const JumpDist& dist);

}  // namespace sublevy
