#include "sublevy/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "sublevy/stats.hpp"

namespace sublevy {

namespace {

constexpr std::uint64_t kProbeStream = 1ull << 31;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string classification_summary(const IntegrabilityReport& report) {
  std::ostringstream os;
  for (std::size_t j = 0; j < report.components.size(); ++j)
    os << (j ? ", " : "") << "component " << j << ": "
       << to_string(report.components[j].label);
  return os.str();
}

template <typename RowFn>
Eigen::MatrixXd rows_chunked(long n, int dim, std::uint64_t seed,
                             std::uint64_t stream_base, int threads,
                             RowFn&& fn) {
  Eigen::MatrixXd out(n, dim);
  parallel_chunks(kMcChunks, threads, [&](int c) {
    auto [lo, hi] = chunk_range(n, kMcChunks, c);
    Rng rng(seed, stream_base + static_cast<std::uint64_t>(c));
    for (long r = lo; r < hi; ++r) out.row(r) = fn(rng);
  });
  return out;
}

Eigen::VectorXd column_means(const Eigen::MatrixXd& m) {
  Eigen::VectorXd out(m.cols());
  for (int j = 0; j < m.cols(); ++j) {
    NeumaierSum s;
    for (long r = 0; r < m.rows(); ++r) s.add(m(r, j));
    out(j) = s.value() / static_cast<double>(m.rows());
  }
  return out;
}

}  // namespace

void CFCheckConfig::validate() const {
  if (probes < 1) throw std::invalid_argument("CFCheckConfig: probes >= 1");
  if (samples < 10000)
    throw std::invalid_argument(
        "CFCheckConfig: samples must be >= 1e4 for the default tolerances");
  if (!(min_radius > 0.0) || !(max_radius >= min_radius))
    throw std::invalid_argument("CFCheckConfig: bad radius schedule");
  if (!(t > 0.0)) throw std::invalid_argument("CFCheckConfig: t must be > 0");
  if (!(k_sigma > 0.0))
    throw std::invalid_argument("CFCheckConfig: k_sigma must be > 0");
}

void JumpMeasureCheckConfig::validate() const {
  if (radii.empty())
    throw std::invalid_argument("JumpMeasureCheckConfig: no radii");
  for (double r : radii)
    if (r < 0.25)
      throw std::invalid_argument(
          "JumpMeasureCheckConfig: radii must be >= 0.25 (finite-intensity "
          "region)");
  if (paths < 1 || steps_per_unit_time < 1 || !(horizon > 0.0))
    throw std::invalid_argument("JumpMeasureCheckConfig: bad path config");
}

nlohmann::json VerificationReport::to_json() const {
  return nlohmann::json{{"check", check_id},   {"analytic", analytic},
                        {"empirical", empirical}, {"se", se},
                        {"pass", pass},        {"skipped", skipped},
                        {"seed", seed},        {"runtime_seconds", runtime_seconds},
                        {"notes", notes},      {"details", details}};
}

nlohmann::json VerificationReport::canonical_json() const {
  nlohmann::json j = to_json();
  j["runtime_seconds"] = 0.0;
  return j;
}

Eigen::MatrixXd sample_X_matrix(const SubordinatedProcessSpec& spec, double t,
                                long n, std::uint64_t seed,
                                std::uint64_t stream_base, int threads) {
  spec.validate();
  return rows_chunked(n, spec.base.layout.total_dim(), seed, stream_base,
                      threads,
                      [&](Rng& rng) { return sample_X(spec, t, rng).flat(); });
}

Eigen::MatrixXd sample_base_matrix(const BaseProcessSpec& base,
                                   const std::vector<double>& theta, long n,
                                   std::uint64_t seed,
                                   std::uint64_t stream_base, int threads) {
  base.validate();
  return rows_chunked(
      n, base.layout.total_dim(), seed, stream_base, threads,
      [&](Rng& rng) { return sample_base_at(base, theta, rng).flat(); });
}

std::vector<Vector> make_probe_grid(const SpaceLayout& layout, int count,
                                    double min_radius, double max_radius,
                                    std::uint64_t seed) {
  std::vector<Vector> probes;
  probes.reserve(static_cast<std::size_t>(count));
  probes.push_back(Vector::zero(layout));
  Rng rng(seed, kProbeStream);
  const int dim = layout.total_dim();
  for (int i = 1; i < count; ++i) {
    Eigen::VectorXd dir(dim);
    for (int k = 0; k < dim; ++k) dir(k) = rng.normal();
    if (dir.norm() == 0.0) dir(0) = 1.0;
    dir.normalize();
    const double radius =
        count > 2 ? min_radius +
                        (max_radius - min_radius) * (i - 1.0) / (count - 2.0)
                  : max_radius;
    probes.push_back(Vector::from_flat(layout, radius * dir));
  }
  return probes;
}

VerificationReport check_cf(const SubordinatedProcessSpec& spec,
                            const CFCheckConfig& cfg, std::uint64_t seed,
                            int threads) {
  cfg.validate();
  spec.validate();
  Timer timer;
  VerificationReport rep;
  rep.check_id = "cf";
  rep.seed = seed;
  rep.pass = true;

  const std::vector<Vector> probes = make_probe_grid(
      spec.base.layout, cfg.probes, cfg.min_radius, cfg.max_radius, seed);
  const Eigen::MatrixXd samples =
      sample_X_matrix(spec, cfg.t, cfg.samples, seed, 0, threads);
  const double n = static_cast<double>(cfg.samples);
  const double se = 1.0 / std::sqrt(n);

  nlohmann::json probe_list = nlohmann::json::array();
  for (const auto& u : probes) {
    const Complex analytic =
        std::exp(cfg.t * subordinated_exponent(spec, u));
    const Eigen::VectorXd uf = u.flat();
    NeumaierSum sum_re, sum_im;
    for (long r = 0; r < samples.rows(); ++r) {
      const double phase = uf.dot(samples.row(r));
      sum_re.add(std::cos(phase));
      sum_im.add(std::sin(phase));
    }
    const Complex empirical(sum_re.value() / n, sum_im.value() / n);
    const bool ok =
        std::abs(empirical.real() - analytic.real()) <= cfg.k_sigma * se &&
        std::abs(empirical.imag() - analytic.imag()) <= cfg.k_sigma * se;
    rep.pass = rep.pass && ok;
    rep.analytic.insert(rep.analytic.end(), {analytic.real(), analytic.imag()});
    rep.empirical.insert(rep.empirical.end(),
                         {empirical.real(), empirical.imag()});
    rep.se.insert(rep.se.end(), {se, se});
    std::vector<double> flat(uf.data(), uf.data() + uf.size());
    probe_list.push_back({{"u", flat}, {"pass", ok}});
  }
  rep.details = {{"t", cfg.t},
                 {"samples", cfg.samples},
                 {"k_sigma", cfg.k_sigma},
                 {"probes", probe_list}};
  rep.runtime_seconds = timer.seconds();
  return rep;
}

VerificationReport check_moments(const SubordinatedProcessSpec& spec,
                                 long samples, std::uint64_t seed,
                                 double k_sigma, int threads) {
  spec.validate();
  Timer timer;
  VerificationReport rep;
  rep.check_id = "moments";
  rep.seed = seed;

  const IntegrabilityReport classification = classify_integrability(spec);
  if (!classification.square_integrable()) {
    rep.skipped = true;
    rep.pass = true;
    rep.notes.push_back("skipped: not square integrable per classification (" +
                        classification_summary(classification) + ")");
    rep.runtime_seconds = timer.seconds();
    return rep;
  }

  const Eigen::VectorXd analytic_mean = mean_of_X(spec).flat();
  const Eigen::MatrixXd analytic_cov = cov_operator_of_X(spec).to_dense();

  const Eigen::MatrixXd draws =
      sample_X_matrix(spec, 1.0, samples, seed, 0, threads);
  const long n = draws.rows();
  const int dim = static_cast<int>(draws.cols());
  const Eigen::VectorXd mean = column_means(draws);

  rep.pass = true;
  // Mean entries.
  for (int j = 0; j < dim; ++j) {
    NeumaierSum sq;
    for (long r = 0; r < n; ++r) {
      const double c = draws(r, j) - mean(j);
      sq.add(c * c);
    }
    const double sd = std::sqrt(sq.value() / (n - 1.0));
    const double se = sd / std::sqrt(static_cast<double>(n));
    const double tol =
        k_sigma * se + 1e-12 * (1.0 + std::abs(analytic_mean(j)));
    const bool ok = std::abs(mean(j) - analytic_mean(j)) <= tol;
    rep.pass = rep.pass && ok;
    rep.analytic.push_back(analytic_mean(j));
    rep.empirical.push_back(mean(j));
    rep.se.push_back(se);
    if (!ok) {
      std::ostringstream os;
      os << "mean[" << j << "] off by " << mean(j) - analytic_mean(j)
         << " (tolerance " << tol << ")";
      rep.notes.push_back(os.str());
    }
  }
  // Covariance entries (upper triangle).
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      NeumaierSum sum_p, sum_p2;
      for (long r = 0; r < n; ++r) {
        const double p = (draws(r, i) - mean(i)) * (draws(r, j) - mean(j));
        sum_p.add(p);
        sum_p2.add(p * p);
      }
      const double cov = sum_p.value() / (n - 1.0);
      const double var_p =
          std::max(0.0, (sum_p2.value() - sum_p.value() * sum_p.value() / n) /
                            (n - 1.0));
      const double se = std::sqrt(var_p / n);
      const double tol =
          k_sigma * se + 1e-12 * (1.0 + std::abs(analytic_cov(i, j)));
      const bool ok = std::abs(cov - analytic_cov(i, j)) <= tol;
      rep.pass = rep.pass && ok;
      rep.analytic.push_back(analytic_cov(i, j));
      rep.empirical.push_back(cov);
      rep.se.push_back(se);
      if (!ok) {
        std::ostringstream os;
        os << "cov[" << i << "," << j << "] off by "
           << cov - analytic_cov(i, j) << " (tolerance " << tol << ")";
        rep.notes.push_back(os.str());
      }
    }
  }
  rep.details = {{"samples", samples},
                 {"k_sigma", k_sigma},
                 {"layout", "mean entries, then covariance upper triangle"}};
  rep.runtime_seconds = timer.seconds();
  return rep;
}

VerificationReport check_scaling(const SubordinatedProcessSpec& spec,
                                 double alpha, double t, long samples,
                                 std::uint64_t seed, int threads) {
  spec.validate();
  if (samples < 10000)
    throw std::invalid_argument("check_scaling: samples must be >= 1e4");
  Timer timer;
  VerificationReport rep;
  rep.check_id = "scaling";
  rep.seed = seed;
  rep.pass = true;

  constexpr int kProjections = 3;
  const double significance = 0.01 / kProjections;
  const double t_alpha = std::pow(t, alpha);

  const Eigen::MatrixXd a =
      sample_X_matrix(spec, t_alpha, samples, seed, 0, threads);
  const Eigen::MatrixXd b =
      sample_X_matrix(spec, 1.0, samples, seed, kMcChunks, threads);

  Rng dir_rng(seed, kProbeStream + 1);
  nlohmann::json projections = nlohmann::json::array();
  for (int p = 0; p < kProjections; ++p) {
    Eigen::VectorXd u(a.cols());
    for (int k = 0; k < u.size(); ++k) u(k) = dir_rng.normal();
    if (u.norm() == 0.0) u(0) = 1.0;
    u.normalize();
    std::vector<double> xa(static_cast<std::size_t>(samples));
    std::vector<double> xb(static_cast<std::size_t>(samples));
    for (long r = 0; r < samples; ++r) {
      xa[static_cast<std::size_t>(r)] = a.row(r).dot(u);
      xb[static_cast<std::size_t>(r)] = t * b.row(r).dot(u);
    }
    const KsResult ks = ks_two_sample(std::move(xa), std::move(xb));
    const bool ok = ks.p_value > significance;
    rep.pass = rep.pass && ok;
    rep.analytic.push_back(significance);
    rep.empirical.push_back(ks.p_value);
    rep.se.push_back(0.0);
    projections.push_back(
        {{"statistic", ks.statistic}, {"p_value", ks.p_value}, {"pass", ok}});
  }
  rep.details = {{"alpha", alpha},
                 {"t", t},
                 {"samples", samples},
                 {"projections", projections}};
  rep.runtime_seconds = timer.seconds();
  return rep;
}

VerificationReport check_growth_bounds(
    const BaseProcessSpec& base, const std::vector<std::vector<double>>& grid,
    long samples, std::uint64_t seed, double k_sigma, int threads) {
  base.validate();
  if (grid.empty())
    throw std::invalid_argument("check_growth_bounds: empty grid");
  Timer timer;
  VerificationReport rep;
  rep.check_id = "growth";
  rep.seed = seed;
  rep.pass = true;

  const GrowthBoundConstants constants = growth_function_bound(base);

  auto norm_of = [](const std::vector<double>& theta) {
    double s = 0.0;
    for (double t : theta) s += t * t;
    return std::sqrt(s);
  };
  auto estimate = [&](const std::vector<double>& theta,
                      std::uint64_t stream_base) {
    bool zero = true;
    for (double t : theta) zero = zero && t == 0.0;
    if (zero) return MeanSe{0.0, 0.0, 0.0};  // L(0) = 0
    const Eigen::MatrixXd draws =
        sample_base_matrix(base, theta, samples, seed, stream_base, threads);
    std::vector<double> norms(static_cast<std::size_t>(draws.rows()));
    for (long r = 0; r < draws.rows(); ++r)
      norms[static_cast<std::size_t>(r)] = draws.row(r).norm();
    return mean_and_se(norms);
  };

  std::uint64_t stream = 0;
  std::vector<MeanSe> f_grid;
  f_grid.reserve(grid.size());
  for (const auto& theta : grid) {
    if (static_cast<int>(theta.size()) != base.d())
      throw std::invalid_argument("check_growth_bounds: grid dimension");
    f_grid.push_back(estimate(theta, stream));
    stream += kMcChunks;
  }

  // C1/C2 bound on the grid.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double norm = norm_of(grid[i]);
    const double bound = norm * constants.c1 + std::sqrt(norm) * constants.c2;
    const bool ok = f_grid[i].mean <= bound + k_sigma * f_grid[i].se;
    rep.pass = rep.pass && ok;
    rep.analytic.push_back(bound);
    rep.empirical.push_back(f_grid[i].mean);
    rep.se.push_back(f_grid[i].se);
    if (!ok) {
      std::ostringstream os;
      os << "growth bound violated at grid point " << i;
      rep.notes.push_back(os.str());
    }
  }

  // Subadditivity and monotonicity over grid pairs.
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      std::vector<double> sum(grid[i]);
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += grid[j][k];
      const MeanSe f_sum = estimate(sum, stream);
      stream += kMcChunks;
      const bool subadditive =
          f_sum.mean <= f_grid[i].mean + f_grid[j].mean +
                            k_sigma * (f_sum.se + f_grid[i].se + f_grid[j].se);
      const bool monotone =
          f_grid[i].mean <= f_sum.mean + k_sigma * (f_sum.se + f_grid[i].se);
      rep.pass = rep.pass && subadditive && monotone;
      pairs.push_back({{"i", i},
                       {"j", j},
                       {"f_sum", f_sum.mean},
                       {"subadditive", subadditive},
                       {"monotone", monotone}});
      if (!subadditive || !monotone) {
        std::ostringstream os;
        os << "pair (" << i << "," << j << ") "
           << (!subadditive ? "subadditivity" : "monotonicity") << " violated";
        rep.notes.push_back(os.str());
      }
    }
  }
  rep.details = {{"c1", constants.c1},
                 {"c2", constants.c2},
                 {"samples", samples},
                 {"pairs", pairs}};
  if (constants.martingale_c)
    rep.details["martingale_c"] = *constants.martingale_c;
  rep.runtime_seconds = timer.seconds();
  return rep;
}

VerificationReport check_tail_index(
    const SubordinatedProcessSpec& spec, long samples, double top_fraction,
    std::optional<std::pair<double, double>> expected_range,
    std::uint64_t seed, int threads) {
  spec.validate();
  Timer timer;
  VerificationReport rep;
  rep.check_id = "tail_index";
  rep.seed = seed;

  const Eigen::MatrixXd draws =
      sample_X_matrix(spec, 1.0, samples, seed, 0, threads);
  Rng dir_rng(seed, kProbeStream + 2);
  Eigen::VectorXd u(draws.cols());
  for (int k = 0; k < u.size(); ++k) u(k) = dir_rng.normal();
  if (u.norm() == 0.0) u(0) = 1.0;
  u.normalize();
  std::vector<double> projected(static_cast<std::size_t>(draws.rows()));
  for (long r = 0; r < draws.rows(); ++r)
    projected[static_cast<std::size_t>(r)] = draws.row(r).dot(u);

  const HillEstimate hill = hill_tail_index(std::move(projected), top_fraction);
  rep.empirical = {hill.index};
  rep.se = {hill.se};
  rep.details = {{"samples", samples},
                 {"top_fraction", top_fraction},
                 {"tail_count", hill.tail_count},
                 {"threshold", hill.threshold},
                 {"conclusive", hill.conclusive}};

  if (!hill.conclusive) {
    rep.pass = true;
    rep.notes.push_back("inconclusive: fewer than 100 tail points");
    rep.runtime_seconds = timer.seconds();
    return rep;
  }
  if (expected_range) {
    rep.analytic = {expected_range->first, expected_range->second};
    rep.pass = expected_range->first <= hill.index &&
               hill.index <= expected_range->second;
  } else {
    rep.analytic = {kNoPowerLawIndex};
    rep.pass = hill.index > kNoPowerLawIndex;
    rep.notes.push_back(rep.pass
                            ? "no power-law tail detected (index above threshold)"
                            : "unexpected heavy tail");
  }
  rep.runtime_seconds = timer.seconds();
  return rep;
}

VerificationReport check_jump_measure(const SubordinatedProcessSpec& spec,
                                      const JumpMeasureCheckConfig& cfg,
                                      std::uint64_t seed, int threads) {
  spec.validate();
  cfg.validate();
  Timer timer;
  VerificationReport rep;
  rep.check_id = "jump_measure";
  rep.seed = seed;
  rep.pass = true;

  TripletConfig triplet_cfg = cfg.triplet;
  triplet_cfg.seed = seed;
  const JumpMeasure mu(spec, triplet_cfg);

  const std::size_t n_radii = cfg.radii.size();
  auto count_jumps = [&](int steps_per_unit, std::uint64_t stream_base) {
    const long steps_total = static_cast<long>(
        std::ceil(cfg.horizon * static_cast<double>(steps_per_unit)));
    const double dt = cfg.horizon / static_cast<double>(steps_total);
    std::vector<std::vector<double>> chunk_counts(
        kMcChunks, std::vector<double>(n_radii, 0.0));
    parallel_chunks(kMcChunks, threads, [&](int c) {
      auto [lo, hi] = chunk_range(cfg.paths, kMcChunks, c);
      Rng rng(seed, stream_base + static_cast<std::uint64_t>(c));
      for (long p = lo; p < hi; ++p) {
        for (long s = 0; s < steps_total; ++s) {
          const double norm = sample_X(spec, dt, rng).norm();
          for (std::size_t r = 0; r < n_radii; ++r)
            if (norm > cfg.radii[r]) chunk_counts[static_cast<std::size_t>(c)][r] += 1.0;
        }
      }
    });
    std::vector<double> counts(n_radii, 0.0);
    for (const auto& chunk : chunk_counts)
      for (std::size_t r = 0; r < n_radii; ++r) counts[r] += chunk[r];
    return counts;
  };

  const double total_time = static_cast<double>(cfg.paths) * cfg.horizon;
  const std::vector<double> counts =
      count_jumps(cfg.steps_per_unit_time, 0);
  const std::vector<double> counts_fine =
      count_jumps(2 * cfg.steps_per_unit_time, kMcChunks);

  nlohmann::json radii_json = nlohmann::json::array();
  for (std::size_t r = 0; r < n_radii; ++r) {
    const QuadResult analytic = mu.tail_mass(cfg.radii[r]);
    if (!analytic.converged) {
      rep.pass = false;
      std::ostringstream os;
      os << "quadrature non-convergence at r = " << cfg.radii[r];
      rep.notes.push_back(os.str());
    }
    const double intensity = counts[r] / total_time;
    const double intensity_fine = counts_fine[r] / total_time;
    const double se_path = std::sqrt(std::max(counts[r], 1.0)) / total_time;
    const double se_fine = std::sqrt(std::max(counts_fine[r], 1.0)) / total_time;
    const double se = std::sqrt(se_path * se_path + analytic.mc_se(0) * analytic.mc_se(0));
    const double tol = cfg.k_sigma * se + analytic.quad_error(0);
    const bool ok = std::abs(intensity - analytic.value(0)) <= tol;
    rep.pass = rep.pass && ok;
    rep.analytic.push_back(analytic.value(0));
    rep.empirical.push_back(intensity);
    rep.se.push_back(se);
    if (std::abs(intensity - intensity_fine) >
        std::sqrt(se_path * se_path + se_fine * se_fine)) {
      std::ostringstream os;
      os << "grid-resolution warning at r = " << cfg.radii[r]
         << ": halving the step moved the count by more than one SE";
      rep.notes.push_back(os.str());
    }
    radii_json.push_back({{"r", cfg.radii[r]},
                          {"quadrature", analytic.value(0)},
                          {"quad_error", analytic.quad_error(0)},
                          {"mc_se", analytic.mc_se(0)},
                          {"path_intensity", intensity},
                          {"path_intensity_refined", intensity_fine},
                          {"pass", ok}});
    if (!ok) {
      std::ostringstream os;
      os << "jump intensity mismatch at r = " << cfg.radii[r];
      rep.notes.push_back(os.str());
    }
  }
  // Double-jump budget: probability of two threshold jumps in one cell must
  // stay below 1e-3 of the count.
  const double max_intensity =
      *std::max_element(rep.empirical.begin(), rep.empirical.end());
  if (max_intensity / static_cast<double>(cfg.steps_per_unit_time) > 2e-3)
    rep.notes.push_back(
        "warning: step too coarse for the double-jump budget (1e-3)");
  rep.details = {{"radii", radii_json},
                 {"paths", cfg.paths},
                 {"horizon", cfg.horizon},
                 {"steps_per_unit_time", cfg.steps_per_unit_time}};
  rep.runtime_seconds = timer.seconds();
  return rep;
}

}  // namespace sublevy
