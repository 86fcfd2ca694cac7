#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sublevy/subordination.hpp"

namespace sublevy {

/// Probe layout for characteristic-function checks. The probe grid always
/// contains u = 0 as a degenerate anchor; the rest are seed-derived random
/// directions on a linear radius schedule.
struct CFCheckConfig {
  int probes = 20;
  double min_radius = 0.2;
  double max_radius = 2.0;
  long samples = 100000;  // floor 1e4 for the default tolerances
  double t = 1.0;
  double k_sigma = 4.0;

  void validate() const;
};

struct JumpMeasureCheckConfig {
  std::vector<double> radii = {0.5, 1.0, 2.0};  // every radius >= 0.25
  long paths = 2000;
  double horizon = 1.0;
  int steps_per_unit_time = 2048;
  TripletConfig triplet;
  double k_sigma = 4.0;

  void validate() const;
};

struct VerificationReport {
  std::string check_id;
  std::vector<double> analytic;
  std::vector<double> empirical;
  std::vector<double> se;
  bool pass = false;
  bool skipped = false;  // inapplicable check; never counted as a failure
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
  std::vector<std::string> notes;
  nlohmann::json details;

  nlohmann::json to_json() const;
  /// to_json with the runtime zeroed; two runs with the same seed must agree
  /// on this form bit for bit.
  nlohmann::json canonical_json() const;
};

/// Empirical CF of X(t) against exp(t rho(u)) at every probe; SE bounded by
/// 1/sqrt(N) per real and imaginary part.
VerificationReport check_cf(const SubordinatedProcessSpec& spec,
                            const CFCheckConfig& cfg, std::uint64_t seed,
                            int threads = 1);

/// Empirical mean and covariance matrix against mean_of_X and
/// cov_operator_of_X, componentwise k-SE criterion. Skips (with the
/// classification labels) when the spec is not square integrable.
VerificationReport check_moments(const SubordinatedProcessSpec& spec,
                                 long samples, std::uint64_t seed,
                                 double k_sigma = 4.0, int threads = 1);

/// Two-sample KS between X(t^alpha) and t X(1) on three random projections;
/// Bonferroni-corrected significance 0.01.
VerificationReport check_scaling(const SubordinatedProcessSpec& spec,
                                 double alpha, double t, long samples,
                                 std::uint64_t seed, int threads = 1);

/// Monte Carlo growth function on a theta grid: the C1/C2 bound with k-SE
/// slack, plus subadditivity and monotonicity over grid pairs.
VerificationReport check_growth_bounds(
    const BaseProcessSpec& base, const std::vector<std::vector<double>>& grid,
    long samples, std::uint64_t seed, double k_sigma = 4.0, int threads = 1);

/// Hill tail-index estimate on |<u|X(1)>|. With an expected range the check
/// passes when the estimate lands inside it; without one the spec is
/// expected to be light-tailed and the check passes when the estimate sits
/// above the no-power-law threshold.
VerificationReport check_tail_index(
    const SubordinatedProcessSpec& spec, long samples, double top_fraction,
    std::optional<std::pair<double, double>> expected_range,
    std::uint64_t seed, int threads = 1);

/// Hill estimates above this are reported as "no power-law tail".
inline constexpr double kNoPowerLawIndex = 2.5;

/// Path-jump counting against the quadrature jump measure: empirical
/// intensity of |increment| > r per unit time vs mu({|x| > r}), combined-SE
/// criterion, with a grid-refinement warning when halving the step moves the
/// counts by more than one SE.
VerificationReport check_jump_measure(const SubordinatedProcessSpec& spec,
                                      const JumpMeasureCheckConfig& cfg,
                                      std::uint64_t seed, int threads = 1);

// ---------------------------------------------------------------------------
// Sampling helpers shared by the checks, the CLI and the tests.
// ---------------------------------------------------------------------------

/// n rows of X(t) coefficients, chunk-parallel and deterministic for every
/// thread count: chunk c always draws from stream (stream_base + c).
Eigen::MatrixXd sample_X_matrix(const SubordinatedProcessSpec& spec, double t,
                                long n, std::uint64_t seed,
                                std::uint64_t stream_base, int threads = 1);

/// Same contract for the base process at fixed theta.
Eigen::MatrixXd sample_base_matrix(const BaseProcessSpec& base,
                                   const std::vector<double>& theta, long n,
                                   std::uint64_t seed,
                                   std::uint64_t stream_base, int threads = 1);

/// count probes with u = 0 first, then random directions with radii on a
/// linear schedule in [min_radius, max_radius].
std::vector<Vector> make_probe_grid(const SpaceLayout& layout, int count,
                                    double min_radius, double max_radius,
                                    std::uint64_t seed);

}  // namespace sublevy
