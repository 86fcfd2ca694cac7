#include "sublevy/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sublevy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct UniValidator {
  void operator()(const IgJump& j) const {
    if (!(j.s > 0.0)) throw std::invalid_argument("IgJump: s must be > 0");
    if (j.c < 0.0) throw std::invalid_argument("IgJump: c must be >= 0");
  }
  void operator()(const StableJump& j) const {
    if (!(j.alpha > 0.0) || !(j.alpha < 1.0))
      throw std::invalid_argument("StableJump: alpha must be in (0,1)");
    if (!(j.scale > 0.0))
      throw std::invalid_argument("StableJump: scale must be > 0");
  }
  void operator()(const GammaJump& j) const {
    if (!(j.a > 0.0)) throw std::invalid_argument("GammaJump: a must be > 0");
  }
};

// Re(s) must stay in the closed left half-plane; tiny positive real parts
// from rounding (|exp(i<u|x>)| = 1 +/- ulp upstream) are clamped.
Complex clamp_left_halfplane(Complex s, const char* where) {
  const double tol = 1e-12 * std::max(1.0, std::abs(s));
  if (s.real() > tol)
    throw std::domain_error(std::string(where) +
                            ": Re(s) > 0 is outside the Laplace domain");
  if (s.real() > 0.0) s.real(0.0);
  return s;
}

}  // namespace

void validate_uni_jump(const UniJump& jump) { std::visit(UniValidator{}, jump); }

Complex uni_laplace_exponent(const UniJump& jump, Complex v) {
  v = clamp_left_halfplane(v, "uni_laplace_exponent");
  if (v == Complex(0.0, 0.0)) return {0.0, 0.0};
  if (const auto* ig = std::get_if<IgJump>(&jump)) {
    return ig->s * (ig->c - std::sqrt(Complex(ig->c * ig->c, 0.0) - 2.0 * v));
  }
  if (const auto* st = std::get_if<StableJump>(&jump)) {
    return -st->scale * std::exp(st->alpha * std::log(-v));
  }
  const auto& g = std::get<GammaJump>(jump);
  return -g.a * std::log(Complex(1.0, 0.0) - v);
}

double uni_levy_density(const UniJump& jump, double theta) {
  if (!(theta > 0.0))
    throw std::domain_error("uni_levy_density: theta must be > 0");
  if (const auto* ig = std::get_if<IgJump>(&jump)) {
    return ig->s / std::sqrt(2.0 * std::numbers::pi * theta * theta * theta) *
           std::exp(-0.5 * ig->c * ig->c * theta);
  }
  if (const auto* st = std::get_if<StableJump>(&jump)) {
    return st->scale * st->alpha / std::tgamma(1.0 - st->alpha) *
           std::pow(theta, -1.0 - st->alpha);
  }
  const auto& g = std::get<GammaJump>(jump);
  return g.a * std::exp(-theta) / theta;
}

double uni_sample_increment(const UniJump& jump, double dt, Rng& rng) {
  if (!(dt > 0.0))
    throw std::invalid_argument("uni_sample_increment: dt must be > 0");
  if (const auto* ig = std::get_if<IgJump>(&jump)) {
    if (ig->c == 0.0) {
      // Degenerate IG == one-sided 1/2-stable with scale s sqrt(2).
      const double scale = ig->s * std::numbers::sqrt2;
      return (dt * scale) * (dt * scale) * rng.stable_one_sided(0.5);
    }
    return rng.inverse_gaussian(dt * ig->s / ig->c, (dt * ig->s) * (dt * ig->s));
  }
  if (const auto* st = std::get_if<StableJump>(&jump)) {
    return std::pow(dt * st->scale, 1.0 / st->alpha) *
           rng.stable_one_sided(st->alpha);
  }
  const auto& g = std::get<GammaJump>(jump);
  return rng.gamma(g.a * dt);
}

double uni_tail_mass_upper(const UniJump& jump, double t) {
  if (!(t > 0.0)) return kInf;
  if (const auto* ig = std::get_if<IgJump>(&jump)) {
    const double head =
        std::sqrt(2.0 / (std::numbers::pi * t)) * std::exp(-0.5 * ig->c * ig->c * t);
    const double tail = ig->c * std::erfc(ig->c * std::sqrt(0.5 * t));
    return std::max(0.0, ig->s * (head - tail));
  }
  if (const auto* st = std::get_if<StableJump>(&jump)) {
    return st->scale * std::pow(t, -st->alpha) / std::tgamma(1.0 - st->alpha);
  }
  const auto& g = std::get<GammaJump>(jump);
  return g.a * std::exp(-t) / t;
}

UniMoments uni_moments(const UniJump& jump) {
  if (const auto* ig = std::get_if<IgJump>(&jump)) {
    if (ig->c == 0.0) return {kInf, kInf, 0.5};
    return {ig->s / ig->c, ig->s / (ig->c * ig->c * ig->c), std::nullopt};
  }
  if (const auto* st = std::get_if<StableJump>(&jump)) {
    return {kInf, kInf, st->alpha};
  }
  const auto& g = std::get<GammaJump>(jump);
  return {g.a, g.a, std::nullopt};
}

// ---------------------------------------------------------------------------
// JumpDist helpers.
// ---------------------------------------------------------------------------

namespace {
void validate_jump_dist(const JumpDist& dist, int d) {
  if (const auto* atoms = std::get_if<AtomJumpDist>(&dist)) {
    if (atoms->probs.empty() || atoms->probs.size() != atoms->points.size())
      throw std::invalid_argument("AtomJumpDist: probs/points size mismatch");
    double total = 0.0;
    for (double p : atoms->probs) {
      if (p < 0.0) throw std::invalid_argument("AtomJumpDist: negative prob");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("AtomJumpDist: probs must sum to 1");
    for (const auto& x : atoms->points) {
      if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("AtomJumpDist: point dimension mismatch");
      for (double xi : x)
        if (xi < 0.0)
          throw std::invalid_argument("AtomJumpDist: points must be >= 0");
    }
  } else {
    const auto& e = std::get<ExponentialJumpDist>(dist);
    if (static_cast<int>(e.means.size()) != d)
      throw std::invalid_argument("ExponentialJumpDist: dimension mismatch");
    for (double m : e.means)
      if (!(m > 0.0))
        throw std::invalid_argument("ExponentialJumpDist: means must be > 0");
  }
}
}  // namespace

int jump_dist_dim(const JumpDist& dist) {
  if (const auto* atoms = std::get_if<AtomJumpDist>(&dist))
    return atoms->points.empty() ? 0 : static_cast<int>(atoms->points[0].size());
  return static_cast<int>(std::get<ExponentialJumpDist>(dist).means.size());
}

std::vector<double> jump_dist_mean(const JumpDist& dist) {
  const int d = jump_dist_dim(dist);
  std::vector<double> out(static_cast<std::size_t>(d), 0.0);
  if (const auto* atoms = std::get_if<AtomJumpDist>(&dist)) {
    for (std::size_t k = 0; k < atoms->probs.size(); ++k)
      for (int j = 0; j < d; ++j)
        out[static_cast<std::size_t>(j)] +=
            atoms->probs[k] * atoms->points[k][static_cast<std::size_t>(j)];
    return out;
  }
  return std::get<ExponentialJumpDist>(dist).means;
}

Eigen::MatrixXd jump_dist_second_moment(const JumpDist& dist) {
  const int d = jump_dist_dim(dist);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  if (const auto* atoms = std::get_if<AtomJumpDist>(&dist)) {
    for (std::size_t k = 0; k < atoms->probs.size(); ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          out(i, j) += atoms->probs[k] *
                       atoms->points[k][static_cast<std::size_t>(i)] *
                       atoms->points[k][static_cast<std::size_t>(j)];
    return out;
  }
  const auto& m = std::get<ExponentialJumpDist>(dist).means;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out(i, j) = (i == j) ? 2.0 * m[static_cast<std::size_t>(i)] *
                                 m[static_cast<std::size_t>(i)]
                           : m[static_cast<std::size_t>(i)] *
                                 m[static_cast<std::size_t>(j)];
  return out;
}

Complex jump_dist_mgf(const JumpDist& dist, const std::vector<Complex>& s) {
  if (const auto* atoms = std::get_if<AtomJumpDist>(&dist)) {
    Complex out(0.0, 0.0);
    for (std::size_t k = 0; k < atoms->probs.size(); ++k) {
      Complex dot(0.0, 0.0);
      for (std::size_t j = 0; j < s.size(); ++j)
        dot += s[j] * atoms->points[k][j];
      out += atoms->probs[k] * std::exp(dot);
    }
    return out;
  }
  const auto& m = std::get<ExponentialJumpDist>(dist).means;
  Complex out(1.0, 0.0);
  for (std::size_t j = 0; j < s.size(); ++j)
    out /= (Complex(1.0, 0.0) - m[j] * s[j]);
  return out;
}

std::vector<double> jump_dist_sample(const JumpDist& dist, Rng& rng) {
  if (const auto* atoms = std::get_if<AtomJumpDist>(&dist)) {
    const double u = rng.uniform01();
    double acc = 0.0;
    std::size_t pick = atoms->probs.size() - 1;
    for (std::size_t k = 0; k < atoms->probs.size(); ++k) {
      acc += atoms->probs[k];
      if (u < acc) {
        pick = k;
        break;
      }
    }
    return atoms->points[pick];
  }
  const auto& m = std::get<ExponentialJumpDist>(dist).means;
  std::vector<double> out(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) out[j] = m[j] * rng.exponential();
  return out;
}

// ---------------------------------------------------------------------------
// SubordinatorSpec.
// ---------------------------------------------------------------------------

void SubordinatorSpec::validate() const {
  if (drift.empty())
    throw std::invalid_argument("SubordinatorSpec: d must be >= 1");
  for (double a : drift)
    if (a < 0.0)
      throw std::invalid_argument("SubordinatorSpec: drift must be >= 0");
  const int dim = d();
  if (const auto* pc = std::get_if<PerComponentJumps>(&jumps)) {
    if (static_cast<int>(pc->parts.size()) != dim)
      throw std::invalid_argument("PerComponentJumps: size mismatch");
    for (const auto& p : pc->parts)
      if (p) validate_uni_jump(*p);
  } else if (const auto* cp = std::get_if<CompoundPoissonJumps>(&jumps)) {
    if (!(cp->rate > 0.0))
      throw std::invalid_argument("CompoundPoissonJumps: rate must be > 0");
    validate_jump_dist(cp->dist, dim);
  } else if (const auto* cf = std::get_if<CommonFactorJumps>(&jumps)) {
    validate_uni_jump(cf->factor);
    if (std::holds_alternative<StableJump>(cf->factor))
      throw std::invalid_argument(
          "CommonFactorJumps: factor must be IG or Gamma");
    if (static_cast<int>(cf->loadings.size()) != dim)
      throw std::invalid_argument("CommonFactorJumps: loadings size mismatch");
    for (double b : cf->loadings)
      if (b < 0.0)
        throw std::invalid_argument("CommonFactorJumps: loadings must be >= 0");
    if (!cf->idiosyncratic.empty()) {
      if (static_cast<int>(cf->idiosyncratic.size()) != dim)
        throw std::invalid_argument(
            "CommonFactorJumps: idiosyncratic size mismatch");
      for (const auto& p : cf->idiosyncratic)
        if (p) validate_uni_jump(*p);
    }
  }
}

bool SubordinatorSpec::component_has_jumps(int j) const {
  if (const auto* pc = std::get_if<PerComponentJumps>(&jumps))
    return pc->parts[static_cast<std::size_t>(j)].has_value();
  if (const auto* cp = std::get_if<CompoundPoissonJumps>(&jumps)) {
    if (const auto* atoms = std::get_if<AtomJumpDist>(&cp->dist)) {
      for (std::size_t k = 0; k < atoms->points.size(); ++k)
        if (atoms->points[k][static_cast<std::size_t>(j)] > 0.0 &&
            atoms->probs[k] > 0.0)
          return true;
      return false;
    }
    return true;
  }
  if (const auto* cf = std::get_if<CommonFactorJumps>(&jumps)) {
    if (cf->loadings[static_cast<std::size_t>(j)] > 0.0) return true;
    return !cf->idiosyncratic.empty() &&
           cf->idiosyncratic[static_cast<std::size_t>(j)].has_value();
  }
  return false;
}

bool SubordinatorSpec::component_trivial(int j) const {
  return drift[static_cast<std::size_t>(j)] == 0.0 && !component_has_jumps(j);
}

SubordinatorSpec SubordinatorSpec::pure_drift(std::vector<double> a0) {
  SubordinatorSpec spec;
  spec.drift = std::move(a0);
  spec.validate();
  return spec;
}

Complex laplace_exponent(const SubordinatorSpec& spec,
                         const std::vector<Complex>& s) {
  spec.validate();
  if (static_cast<int>(s.size()) != spec.d())
    throw std::invalid_argument("laplace_exponent: argument dimension mismatch");
  std::vector<Complex> v(s.size());
  for (std::size_t j = 0; j < s.size(); ++j)
    v[j] = clamp_left_halfplane(s[j], "laplace_exponent");

  Complex out(0.0, 0.0);
  for (std::size_t j = 0; j < v.size(); ++j) out += spec.drift[j] * v[j];

  if (const auto* pc = std::get_if<PerComponentJumps>(&spec.jumps)) {
    for (std::size_t j = 0; j < v.size(); ++j)
      if (pc->parts[j]) out += uni_laplace_exponent(*pc->parts[j], v[j]);
  } else if (const auto* cp = std::get_if<CompoundPoissonJumps>(&spec.jumps)) {
    out += cp->rate * (jump_dist_mgf(cp->dist, v) - Complex(1.0, 0.0));
  } else if (const auto* cf = std::get_if<CommonFactorJumps>(&spec.jumps)) {
    Complex dot(0.0, 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) dot += cf->loadings[j] * v[j];
    out += uni_laplace_exponent(cf->factor, dot);
    if (!cf->idiosyncratic.empty())
      for (std::size_t j = 0; j < v.size(); ++j)
        if (cf->idiosyncratic[j])
          out += uni_laplace_exponent(*cf->idiosyncratic[j], v[j]);
  }
  return out;
}

double levy_density_F(const SubordinatorSpec& spec,
                      const std::vector<double>& theta) {
  spec.validate();
  if (static_cast<int>(theta.size()) != spec.d())
    throw std::invalid_argument("levy_density_F: dimension mismatch");
  bool all_zero = true;
  for (double t : theta) {
    if (t < 0.0)
      throw std::domain_error("levy_density_F: theta must be >= 0");
    if (t > 0.0) all_zero = false;
  }
  if (all_zero)
    throw std::domain_error("levy_density_F: theta = 0 is not in the support");

  if (std::holds_alternative<std::monostate>(spec.jumps)) return 0.0;

  if (const auto* pc = std::get_if<PerComponentJumps>(&spec.jumps)) {
    int positive = -1;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      if (theta[j] > 0.0) {
        if (positive >= 0) return 0.0;  // no mass off the axes
        positive = static_cast<int>(j);
      }
    }
    const auto& part = pc->parts[static_cast<std::size_t>(positive)];
    return part ? uni_levy_density(*part, theta[static_cast<std::size_t>(positive)])
                : 0.0;
  }

  if (const auto* cp = std::get_if<CompoundPoissonJumps>(&spec.jumps)) {
    if (std::holds_alternative<AtomJumpDist>(cp->dist))
      throw std::invalid_argument(
          "levy_density_F: atom jump distribution has no density");
    const auto& m = std::get<ExponentialJumpDist>(cp->dist).means;
    double density = cp->rate;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      if (!(theta[j] > 0.0))
        throw std::domain_error(
            "levy_density_F: zero component outside the product support");
      density *= std::exp(-theta[j] / m[j]) / m[j];
    }
    return density;
  }

  const auto& cf = std::get<CommonFactorJumps>(spec.jumps);
  // Ray of the shared factor: theta = z * loadings. Density w.r.t. arclength.
  double beta_norm2 = 0.0, dot = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    beta_norm2 += cf.loadings[j] * cf.loadings[j];
    dot += cf.loadings[j] * theta[j];
  }
  double out = 0.0;
  bool on_ray = beta_norm2 > 0.0;
  const double z = on_ray ? dot / beta_norm2 : 0.0;
  if (on_ray && z > 0.0) {
    for (std::size_t j = 0; j < theta.size(); ++j)
      if (std::abs(theta[j] - z * cf.loadings[j]) >
          1e-12 * std::max(1.0, std::abs(theta[j])))
        on_ray = false;
  } else {
    on_ray = false;
  }
  if (on_ray) out += uni_levy_density(cf.factor, z) / std::sqrt(beta_norm2);

  if (!cf.idiosyncratic.empty()) {
    int positive = -1;
    bool single_axis = true;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      if (theta[j] > 0.0) {
        if (positive >= 0) single_axis = false;
        positive = static_cast<int>(j);
      }
    }
    if (single_axis && positive >= 0 &&
        cf.idiosyncratic[static_cast<std::size_t>(positive)])
      out += uni_levy_density(
          *cf.idiosyncratic[static_cast<std::size_t>(positive)],
          theta[static_cast<std::size_t>(positive)]);
  }
  return out;
}

std::vector<double> sample_increment(const SubordinatorSpec& spec, double dt,
                                     Rng& rng) {
  spec.validate();
  if (!(dt > 0.0))
    throw std::invalid_argument("sample_increment: dt must be > 0");
  std::vector<double> out(spec.drift.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = spec.drift[j] * dt;

  if (const auto* pc = std::get_if<PerComponentJumps>(&spec.jumps)) {
    for (std::size_t j = 0; j < out.size(); ++j)
      if (pc->parts[j]) out[j] += uni_sample_increment(*pc->parts[j], dt, rng);
  } else if (const auto* cp = std::get_if<CompoundPoissonJumps>(&spec.jumps)) {
    const std::uint64_t n = rng.poisson(cp->rate * dt);
    for (std::uint64_t k = 0; k < n; ++k) {
      const std::vector<double> jump = jump_dist_sample(cp->dist, rng);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += jump[j];
    }
  } else if (const auto* cf = std::get_if<CommonFactorJumps>(&spec.jumps)) {
    const double z = uni_sample_increment(cf->factor, dt, rng);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += cf->loadings[j] * z;
    if (!cf->idiosyncratic.empty())
      for (std::size_t j = 0; j < out.size(); ++j)
        if (cf->idiosyncratic[j])
          out[j] += uni_sample_increment(*cf->idiosyncratic[j], dt, rng);
  }
  return out;
}

namespace {
// dst += w * value with 0 * inf treated as 0 and inf absorbing.
void add_scaled(double& dst, double w, double value) {
  if (w == 0.0) return;
  if (std::isinf(value) || std::isinf(dst)) {
    dst = kInf;
    return;
  }
  dst += w * value;
}

void merge_tail(std::optional<double>& dst, std::optional<double> tail) {
  if (!tail) return;
  dst = dst ? std::min(*dst, *tail) : *tail;
}
}  // namespace

SubordinatorMoments subordinator_moments(const SubordinatorSpec& spec) {
  spec.validate();
  const int d = spec.d();
  SubordinatorMoments out;
  out.mean = spec.drift;
  out.covariance = Eigen::MatrixXd::Zero(d, d);
  out.tail_index.assign(static_cast<std::size_t>(d), std::nullopt);

  if (const auto* pc = std::get_if<PerComponentJumps>(&spec.jumps)) {
    for (int j = 0; j < d; ++j) {
      const auto& part = pc->parts[static_cast<std::size_t>(j)];
      if (!part) continue;
      const UniMoments m = uni_moments(*part);
      add_scaled(out.mean[static_cast<std::size_t>(j)], 1.0, m.mean);
      add_scaled(out.covariance(j, j), 1.0, m.variance);
      merge_tail(out.tail_index[static_cast<std::size_t>(j)], m.tail_index);
    }
  } else if (const auto* cp = std::get_if<CompoundPoissonJumps>(&spec.jumps)) {
    const std::vector<double> mean = jump_dist_mean(cp->dist);
    const Eigen::MatrixXd second = jump_dist_second_moment(cp->dist);
    for (int j = 0; j < d; ++j)
      out.mean[static_cast<std::size_t>(j)] +=
          cp->rate * mean[static_cast<std::size_t>(j)];
    out.covariance += cp->rate * second;
  } else if (const auto* cf = std::get_if<CommonFactorJumps>(&spec.jumps)) {
    const UniMoments fz = uni_moments(cf->factor);
    for (int i = 0; i < d; ++i) {
      add_scaled(out.mean[static_cast<std::size_t>(i)],
                 cf->loadings[static_cast<std::size_t>(i)], fz.mean);
      for (int j = 0; j < d; ++j)
        add_scaled(out.covariance(i, j),
                   cf->loadings[static_cast<std::size_t>(i)] *
                       cf->loadings[static_cast<std::size_t>(j)],
                   fz.variance);
      if (cf->loadings[static_cast<std::size_t>(i)] > 0.0)
        merge_tail(out.tail_index[static_cast<std::size_t>(i)], fz.tail_index);
    }
    if (!cf->idiosyncratic.empty()) {
      for (int j = 0; j < d; ++j) {
        const auto& part = cf->idiosyncratic[static_cast<std::size_t>(j)];
        if (!part) continue;
        const UniMoments m = uni_moments(*part);
        add_scaled(out.mean[static_cast<std::size_t>(j)], 1.0, m.mean);
        add_scaled(out.covariance(j, j), 1.0, m.variance);
        merge_tail(out.tail_index[static_cast<std::size_t>(j)], m.tail_index);
      }
    }
  }
  return out;
}

bool SubordinatorMoments::component_mean_finite(int j) const {
  return std::isfinite(mean[static_cast<std::size_t>(j)]);
}

bool SubordinatorMoments::component_square_integrable(int j) const {
  return component_mean_finite(j) && std::isfinite(covariance(j, j));
}

bool SubordinatorMoments::component_sqrt_moment_finite(int j) const {
  const auto& tail = tail_index[static_cast<std::size_t>(j)];
  return !tail || *tail > 0.5;
}

bool SubordinatorMoments::mean_finite() const {
  for (int j = 0; j < static_cast<int>(mean.size()); ++j)
    if (!component_mean_finite(j)) return false;
  return true;
}

bool SubordinatorMoments::square_integrable() const {
  for (int j = 0; j < static_cast<int>(mean.size()); ++j)
    if (!component_square_integrable(j)) return false;
  return true;
}

bool SubordinatorMoments::sqrt_moment_finite() const {
  for (int j = 0; j < static_cast<int>(mean.size()); ++j)
    if (!component_sqrt_moment_finite(j)) return false;
  return true;
}

bool SubordinatorMoments::moment_finite(double p) const {
  if (p < 0.0) throw std::invalid_argument("moment_finite: p must be >= 0");
  for (const auto& tail : tail_index)
    if (tail && p >= *tail) return false;
  return true;
}

FDecomposition decompose_levy_measure(const SubordinatorSpec& spec) {
  spec.validate();
  FDecomposition out;
  const int d = spec.d();
  if (const auto* pc = std::get_if<PerComponentJumps>(&spec.jumps)) {
    for (int j = 0; j < d; ++j) {
      if (!pc->parts[static_cast<std::size_t>(j)]) continue;
      std::vector<double> dir(static_cast<std::size_t>(d), 0.0);
      dir[static_cast<std::size_t>(j)] = 1.0;
      out.rays.push_back({std::move(dir), *pc->parts[static_cast<std::size_t>(j)]});
    }
  } else if (const auto* cp = std::get_if<CompoundPoissonJumps>(&spec.jumps)) {
    out.compound_poisson = cp;
  } else if (const auto* cf = std::get_if<CommonFactorJumps>(&spec.jumps)) {
    bool any = false;
    for (double b : cf->loadings) any = any || b > 0.0;
    if (any) out.rays.push_back({cf->loadings, cf->factor});
    if (!cf->idiosyncratic.empty()) {
      for (int j = 0; j < d; ++j) {
        if (!cf->idiosyncratic[static_cast<std::size_t>(j)]) continue;
        std::vector<double> dir(static_cast<std::size_t>(d), 0.0);
        dir[static_cast<std::size_t>(j)] = 1.0;
        out.rays.push_back(
            {std::move(dir), *cf->idiosyncratic[static_cast<std::size_t>(j)]});
      }
    }
  }
  return out;
}

}  // namespace sublevy
