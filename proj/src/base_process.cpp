#include "sublevy/base_process.hpp"

#include <cmath>
#include <stdexcept>

namespace sublevy {

namespace {
constexpr double kZeroTol = 1e-13;
}

Eigen::VectorXd ComponentJumpSpec::mean() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(atoms[0].size());
  for (std::size_t k = 0; k < probs.size(); ++k) out += probs[k] * atoms[k];
  return out;
}

Eigen::VectorXd ComponentJumpSpec::truncated_mean() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(atoms[0].size());
  for (std::size_t k = 0; k < probs.size(); ++k)
    if (atoms[k].norm() <= 1.0) out += probs[k] * atoms[k];
  return out;
}

double ComponentJumpSpec::second_moment() const {
  double s = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k)
    s += probs[k] * atoms[k].squaredNorm();
  return s;
}

double ComponentJumpSpec::large_jump_abs_moment() const {
  double s = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double norm = atoms[k].norm();
    if (norm > 1.0) s += probs[k] * norm;
  }
  return s;
}

double ComponentJumpSpec::small_jump_second_moment() const {
  double s = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double sq = atoms[k].squaredNorm();
    if (sq <= 1.0) s += probs[k] * sq;
  }
  return s;
}

void BaseProcessSpec::validate() const {
  require_same_layout(layout, drift.layout(), "BaseProcessSpec: drift");
  require_same_layout(layout, gaussian.layout(), "BaseProcessSpec: gaussian");
  if (!jumps.empty() && static_cast<int>(jumps.size()) != layout.d())
    throw std::invalid_argument("BaseProcessSpec: jump part size mismatch");
  for (int j = 0; j < static_cast<int>(jumps.size()); ++j) {
    const auto& part = jumps[static_cast<std::size_t>(j)];
    if (!part) continue;
    if (!(part->rate > 0.0))
      throw std::invalid_argument("ComponentJumpSpec: rate must be > 0");
    if (part->probs.empty() || part->probs.size() != part->atoms.size())
      throw std::invalid_argument("ComponentJumpSpec: probs/atoms mismatch");
    double total = 0.0;
    for (double p : part->probs) {
      if (p < 0.0) throw std::invalid_argument("ComponentJumpSpec: negative prob");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("ComponentJumpSpec: probs must sum to 1");
    for (const auto& atom : part->atoms)
      if (atom.size() != layout.dims[static_cast<std::size_t>(j)])
        throw std::invalid_argument("ComponentJumpSpec: atom dimension mismatch");
  }
}

bool BaseProcessSpec::has_jumps() const {
  for (const auto& part : jumps)
    if (part) return true;
  return false;
}

bool BaseProcessSpec::component_has_jumps(int j) const {
  return !jumps.empty() && jumps[static_cast<std::size_t>(j)].has_value();
}

Vector BaseProcessSpec::triplet_drift() const {
  Vector out = drift;
  for (int j = 0; j < static_cast<int>(jumps.size()); ++j)
    if (jumps[static_cast<std::size_t>(j)])
      out.comp(j) += jumps[static_cast<std::size_t>(j)]->rate *
                     jumps[static_cast<std::size_t>(j)]->truncated_mean();
  return out;
}

Vector BaseProcessSpec::mean() const {
  Vector out = drift;
  for (int j = 0; j < static_cast<int>(jumps.size()); ++j)
    if (jumps[static_cast<std::size_t>(j)])
      out.comp(j) += jumps[static_cast<std::size_t>(j)]->rate *
                     jumps[static_cast<std::size_t>(j)]->mean();
  return out;
}

bool BaseProcessSpec::component_mean_zero(int j) const {
  Vector m = mean();
  return m.comp(j).norm() <= kZeroTol * (1.0 + drift.comp(j).norm());
}

bool BaseProcessSpec::mean_zero() const {
  for (int j = 0; j < d(); ++j)
    if (!component_mean_zero(j)) return false;
  return true;
}

bool BaseProcessSpec::component_trivial(int j) const {
  return drift.comp(j).norm() == 0.0 && gaussian.component_trace(j) == 0.0 &&
         !component_has_jumps(j);
}

bool BaseProcessSpec::trivial() const {
  for (int j = 0; j < d(); ++j)
    if (!component_trivial(j)) return false;
  return true;
}

bool BaseProcessSpec::is_gaussian() const { return !has_jumps(); }

bool BaseProcessSpec::component_gaussian(int j) const {
  return !component_has_jumps(j);
}

double BaseProcessSpec::component_second_moment(int j) const {
  double s = gaussian.component_trace(j);
  if (component_has_jumps(j)) {
    const auto& part = *jumps[static_cast<std::size_t>(j)];
    s += part.rate * part.second_moment();
  }
  return s;
}

double BaseProcessSpec::second_moment() const {
  double s = 0.0;
  for (int j = 0; j < d(); ++j) s += component_second_moment(j);
  return s;
}

Eigen::MatrixXd BaseProcessSpec::cov_dense() const {
  Eigen::MatrixXd out = gaussian.to_dense();
  int offset = 0;
  for (int j = 0; j < d(); ++j) {
    const int nj = layout.dims[static_cast<std::size_t>(j)];
    if (component_has_jumps(j)) {
      const auto& part = *jumps[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < part.probs.size(); ++k)
        out.block(offset, offset, nj, nj) +=
            part.rate * part.probs[k] * part.atoms[k] * part.atoms[k].transpose();
    }
    offset += nj;
  }
  return out;
}

BaseProcessSpec BaseProcessSpec::gaussian_process(SpaceLayout layout,
                                                  Vector drift, CovOperator q) {
  BaseProcessSpec spec{std::move(layout), std::move(drift), std::move(q), {}};
  spec.validate();
  return spec;
}

BaseExponent levy_exponent_base(const BaseProcessSpec& spec, const Vector& u) {
  spec.validate();
  require_same_layout(spec.layout, u.layout(), "levy_exponent_base");
  BaseExponent out;
  out.per_component.resize(static_cast<std::size_t>(spec.d()));
  out.total = Complex(0.0, 0.0);
  for (int j = 0; j < spec.d(); ++j) {
    const Eigen::VectorXd& uj = u.comp(j);
    Complex phi(0.0, uj.dot(spec.drift.comp(j)));
    // <Q_j u | u> through the spectral form.
    Vector probe = Vector::zero(spec.layout);
    probe.comp(j) = uj;
    phi -= 0.5 * spec.gaussian.quad_form(probe);
    if (spec.component_has_jumps(j)) {
      const auto& part = *spec.jumps[static_cast<std::size_t>(j)];
      Complex jump_sum(0.0, 0.0);
      for (std::size_t k = 0; k < part.probs.size(); ++k)
        jump_sum += part.probs[k] *
                    (std::exp(Complex(0.0, uj.dot(part.atoms[k]))) - 1.0);
      phi += part.rate * jump_sum;
    }
    out.per_component[static_cast<std::size_t>(j)] = phi;
    out.total += phi;
  }
  return out;
}

Vector sample_base_at(const BaseProcessSpec& spec,
                      const std::vector<double>& theta, Rng& rng) {
  spec.validate();
  if (static_cast<int>(theta.size()) != spec.d())
    throw std::invalid_argument("sample_base_at: theta dimension mismatch");
  for (double t : theta)
    if (t < 0.0)
      throw std::invalid_argument("sample_base_at: theta must be >= 0");

  Vector out = Vector::zero(spec.layout);
  for (int j = 0; j < spec.d(); ++j) {
    const double t = theta[static_cast<std::size_t>(j)];
    if (t == 0.0) continue;
    out.comp(j) = t * spec.drift.comp(j) +
                  std::sqrt(t) * spec.gaussian.sample_gaussian_component(j, rng);
    if (spec.component_has_jumps(j)) {
      const auto& part = *spec.jumps[static_cast<std::size_t>(j)];
      const std::uint64_t n = rng.poisson(part.rate * t);
      for (std::uint64_t k = 0; k < n; ++k) {
        const double u = rng.uniform01();
        double acc = 0.0;
        std::size_t pick = part.probs.size() - 1;
        for (std::size_t a = 0; a < part.probs.size(); ++a) {
          acc += part.probs[a];
          if (u < acc) {
            pick = a;
            break;
          }
        }
        out.comp(j) += part.atoms[pick];
      }
    }
  }
  return out;
}

GrowthBoundConstants growth_function_bound(const BaseProcessSpec& spec) {
  spec.validate();
  GrowthBoundConstants out;
  double large_abs = 0.0;
  double small_second = 0.0;
  double full_second = spec.gaussian.trace();
  for (int j = 0; j < static_cast<int>(spec.jumps.size()); ++j) {
    const auto& part = spec.jumps[static_cast<std::size_t>(j)];
    if (!part) continue;
    large_abs += part->rate * part->large_jump_abs_moment();
    small_second += part->rate * part->small_jump_second_moment();
    full_second += part->rate * part->second_moment();
  }
  out.c1 = spec.triplet_drift().norm() + large_abs;
  out.c2 = std::sqrt(spec.gaussian.trace() + small_second);
  if (spec.mean_zero()) out.martingale_c = std::sqrt(full_second);
  return out;
}

BaseTraits BaseTraits::from(const BaseProcessSpec& spec) {
  spec.validate();
  BaseTraits t;
  t.d = spec.d();
  t.component_trivial.resize(static_cast<std::size_t>(t.d));
  t.component_mean_zero.resize(static_cast<std::size_t>(t.d));
  t.component_gaussian.resize(static_cast<std::size_t>(t.d));
  for (int j = 0; j < t.d; ++j) {
    t.component_trivial[static_cast<std::size_t>(j)] = spec.component_trivial(j);
    t.component_mean_zero[static_cast<std::size_t>(j)] =
        spec.component_mean_zero(j);
    t.component_gaussian[static_cast<std::size_t>(j)] =
        spec.component_gaussian(j);
  }
  return t;
}

BaseTraits BaseTraits::strictly_stable(int d, double alpha) {
  if (!(alpha > 1.0) || !(alpha < 2.0))
    throw std::invalid_argument(
        "BaseTraits::strictly_stable: alpha must be in (1,2)");
  BaseTraits t;
  t.d = d;
  t.component_trivial.assign(static_cast<std::size_t>(d), false);
  t.component_mean_zero.assign(static_cast<std::size_t>(d), true);
  t.component_gaussian.assign(static_cast<std::size_t>(d), false);
  t.square_integrable = false;
  t.stable_index = alpha;
  return t;
}

}  // namespace sublevy
