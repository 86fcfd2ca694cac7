#include "sublevy/subordination.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "sublevy/stats.hpp"

namespace sublevy {

void SubordinatedProcessSpec::validate() const {
  base.validate();
  subordinator.validate();
  if (base.d() != subordinator.d())
    throw std::invalid_argument(
        "SubordinatedProcessSpec: base and subordinator dimension mismatch");
}

Complex subordinated_exponent(const SubordinatedProcessSpec& spec,
                              const Vector& u) {
  spec.validate();
  BaseExponent phi = levy_exponent_base(spec.base, u);
  for (auto& p : phi.per_component) {
    if (p.real() > 1e-12 * std::max(1.0, std::abs(p)))
      throw std::logic_error(
          "subordinated_exponent: base exponent with positive real part");
    if (p.real() > 0.0) p.real(0.0);
  }
  return laplace_exponent(spec.subordinator, phi.per_component);
}

Vector sample_X(const SubordinatedProcessSpec& spec, double t, Rng& rng) {
  spec.validate();
  if (!(t > 0.0)) throw std::invalid_argument("sample_X: t must be > 0");
  const std::vector<double> theta = sample_increment(spec.subordinator, t, rng);
  return sample_base_at(spec.base, theta, rng);
}

std::vector<Vector> simulate_path(const SubordinatedProcessSpec& spec,
                                  const std::vector<double>& grid, Rng& rng) {
  spec.validate();
  if (grid.empty()) throw std::invalid_argument("simulate_path: empty grid");
  std::vector<Vector> out;
  out.reserve(grid.size());
  Vector acc = Vector::zero(spec.base.layout);
  double prev = 0.0;
  for (double t : grid) {
    if (!(t > prev))
      throw std::invalid_argument(
          "simulate_path: grid must be positive and strictly increasing");
    acc += sample_X(spec, t - prev, rng);
    out.push_back(acc);
    prev = t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inner Monte Carlo for the triplet quadratures.
// ---------------------------------------------------------------------------

namespace {

// Stream ids below this are reserved for sampling-level Monte Carlo.
constexpr std::uint64_t kInnerStreamBase = 1ull << 32;

// Draws L(theta) twice with the Gaussian part negated and the jump part
// shared. For symmetric jump-free bases the pair average of any odd
// functional vanishes exactly.
void antithetic_base_pair(const BaseProcessSpec& base,
                          const std::vector<double>& theta, Rng& rng,
                          Vector& plus, Vector& minus) {
  plus = Vector::zero(base.layout);
  minus = Vector::zero(base.layout);
  for (int j = 0; j < base.d(); ++j) {
    const double t = theta[static_cast<std::size_t>(j)];
    if (t == 0.0) continue;
    const Eigen::VectorXd det = t * base.drift.comp(j);
    const Eigen::VectorXd g =
        std::sqrt(t) * base.gaussian.sample_gaussian_component(j, rng);
    Eigen::VectorXd jump = Eigen::VectorXd::Zero(det.size());
    if (base.component_has_jumps(j)) {
      const auto& part = *base.jumps[static_cast<std::size_t>(j)];
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
        jump += part.atoms[pick];
      }
    }
    plus.comp(j) = det + g + jump;
    minus.comp(j) = det - g + jump;
  }
}

// Node-level expectation E[h(L(theta))] with a fresh seed-derived stream per
// node; the node counter makes triplet results deterministic given the seed.
class InnerExpectation {
 public:
  InnerExpectation(const SubordinatedProcessSpec& spec, const TripletConfig& cfg)
      : spec_(spec), cfg_(cfg), counter_(std::make_shared<std::uint64_t>(0)) {}

  template <typename H>
  Evaluation operator()(const std::vector<double>& theta, int dim, H&& h) const {
    Rng rng(cfg_.seed, kInnerStreamBase + (*counter_)++);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sum2 = Eigen::VectorXd::Zero(dim);
    Vector plus, minus;
    const long n = std::max<long>(2, cfg_.inner_pairs);
    for (long i = 0; i < n; ++i) {
      antithetic_base_pair(spec_.base, theta, rng, plus, minus);
      const Eigen::VectorXd pair = 0.5 * (h(plus) + h(minus));
      sum += pair;
      sum2 += pair.cwiseAbs2();
    }
    Evaluation out;
    const double dn = static_cast<double>(n);
    out.value = sum / dn;
    out.se = ((sum2 - sum.cwiseAbs2() / dn) / (dn * (dn - 1.0)))
                 .cwiseMax(0.0)
                 .cwiseSqrt();
    return out;
  }

 private:
  const SubordinatedProcessSpec& spec_;
  const TripletConfig& cfg_;
  std::shared_ptr<std::uint64_t> counter_;
};

Eigen::VectorXd chi_flat(const Vector& x) {
  if (x.squared_norm() <= 1.0) return x.flat();
  return Eigen::VectorXd::Zero(x.layout().total_dim());
}

Vector embed(const SpaceLayout& layout, int component, const Eigen::VectorXd& v) {
  Vector out = Vector::zero(layout);
  out.comp(component) = v;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// JumpMeasure.
// ---------------------------------------------------------------------------

JumpMeasure::JumpMeasure(SubordinatedProcessSpec spec, TripletConfig cfg)
    : spec_(std::move(spec)), cfg_(std::move(cfg)) {
  spec_.validate();
}

QuadResult JumpMeasure::tail_mass(double r) const {
  if (!(r > 0.0))
    throw std::invalid_argument("JumpMeasure::tail_mass: r must be > 0");
  InnerExpectation mc(spec_, cfg_);
  LevyQuadConfig qc = cfg_.quad;
  qc.sup_bound = 1.0;
  const double r2 = r * r;
  QuadResult out = integrate_against_F(
      spec_.subordinator, 1,
      [&](const std::vector<double>& theta) {
        return mc(theta, 1, [&](const Vector& x) {
          Eigen::VectorXd v(1);
          v(0) = x.squared_norm() > r2 ? 1.0 : 0.0;
          return v;
        });
      },
      qc);
  // a0-scaled base jump part, exact.
  for (int j = 0; j < spec_.d(); ++j) {
    const double a0 = spec_.subordinator.drift[static_cast<std::size_t>(j)];
    if (a0 == 0.0 || !spec_.base.component_has_jumps(j)) continue;
    const auto& part = *spec_.base.jumps[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < part.probs.size(); ++k)
      if (part.atoms[k].norm() > r)
        out.value(0) += a0 * part.rate * part.probs[k];
  }
  return out;
}

QuadResult JumpMeasure::halfspace_mass(const Vector& v, double q) const {
  require_same_layout(spec_.base.layout, v.layout(), "JumpMeasure::halfspace_mass");
  if (!(q > 0.0))
    throw std::invalid_argument("JumpMeasure::halfspace_mass: q must be > 0");
  LevyQuadConfig qc = cfg_.quad;
  qc.sup_bound = 1.0;

  QuadResult out;
  if (spec_.base.is_gaussian()) {
    // <v|L(theta)> is N(sum_j theta_j <v_j|b_j>, sum_j theta_j <Q_j v|v>).
    std::vector<double> mean_rate(static_cast<std::size_t>(spec_.d()));
    std::vector<double> var_rate(static_cast<std::size_t>(spec_.d()));
    for (int j = 0; j < spec_.d(); ++j) {
      mean_rate[static_cast<std::size_t>(j)] =
          v.comp(j).dot(spec_.base.drift.comp(j));
      var_rate[static_cast<std::size_t>(j)] =
          spec_.base.gaussian.quad_form(embed(spec_.base.layout, j, v.comp(j)));
    }
    out = integrate_against_F(
        spec_.subordinator, 1,
        [&](const std::vector<double>& theta) {
          double m = 0.0, s2 = 0.0;
          for (std::size_t j = 0; j < theta.size(); ++j) {
            m += theta[j] * mean_rate[j];
            s2 += theta[j] * var_rate[j];
          }
          Evaluation ev;
          ev.value = Eigen::VectorXd::Zero(1);
          ev.se = Eigen::VectorXd::Zero(1);
          ev.value(0) =
              s2 > 0.0 ? normal_sf((q - m) / std::sqrt(s2)) : (m > q ? 1.0 : 0.0);
          return ev;
        },
        qc);
  } else {
    InnerExpectation mc(spec_, cfg_);
    out = integrate_against_F(
        spec_.subordinator, 1,
        [&](const std::vector<double>& theta) {
          return mc(theta, 1, [&](const Vector& x) {
            Eigen::VectorXd val(1);
            val(0) = sublevy::inner(v, x) > q ? 1.0 : 0.0;
            return val;
          });
        },
        qc);
  }
  // a0-scaled base jump part.
  for (int j = 0; j < spec_.d(); ++j) {
    const double a0 = spec_.subordinator.drift[static_cast<std::size_t>(j)];
    if (a0 == 0.0 || !spec_.base.component_has_jumps(j)) continue;
    const auto& part = *spec_.base.jumps[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < part.probs.size(); ++k)
      if (v.comp(j).dot(part.atoms[k]) > q)
        out.value(0) += a0 * part.rate * part.probs[k];
  }
  return out;
}

QuadResult JumpMeasure::large_jump_mean() const {
  const SubordinatorMoments moments = subordinator_moments(spec_.subordinator);
  if (!moments.mean_finite())
    throw std::domain_error(
        "JumpMeasure::large_jump_mean: infinite for subordinators without a "
        "first moment");
  InnerExpectation mc(spec_, cfg_);
  const int dim = spec_.base.layout.total_dim();
  LevyQuadConfig qc = cfg_.quad;
  const GrowthBoundConstants growth = growth_function_bound(spec_.base);
  // Only used to pick the truncation point; generous linear envelope.
  qc.sup_bound = std::max(1.0, 1e4 * growth.c1 + 1e2 * growth.c2);
  QuadResult out = integrate_against_F(
      spec_.subordinator, dim,
      [&](const std::vector<double>& theta) {
        return mc(theta, dim, [&](const Vector& x) -> Eigen::VectorXd {
          if (x.squared_norm() > 1.0) return x.flat();
          return Eigen::VectorXd::Zero(dim);
        });
      },
      qc);
  for (int j = 0; j < spec_.d(); ++j) {
    const double a0 = spec_.subordinator.drift[static_cast<std::size_t>(j)];
    if (a0 == 0.0 || !spec_.base.component_has_jumps(j)) continue;
    const auto& part = *spec_.base.jumps[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < part.probs.size(); ++k)
      if (part.atoms[k].norm() > 1.0)
        out.value += a0 * part.rate * part.probs[k] *
                     embed(spec_.base.layout, j, part.atoms[k]).flat();
  }
  return out;
}

SubordinatedTriplet subordinated_triplet(const SubordinatedProcessSpec& spec,
                                         const TripletConfig& cfg) {
  spec.validate();
  CovOperator gamma =
      spec.base.gaussian.scale_by_multiindex(spec.subordinator.drift);

  InnerExpectation mc(spec, cfg);
  const int dim = spec.base.layout.total_dim();
  LevyQuadConfig qc = cfg.quad;
  qc.sup_bound = 1.0;  // |chi| <= 1
  QuadResult integral = integrate_against_F(
      spec.subordinator, dim,
      [&](const std::vector<double>& theta) {
        return mc(theta, dim, [&](const Vector& x) { return chi_flat(x); });
      },
      qc);

  Vector beta =
      sublevy::scale_by_multiindex(spec.subordinator.drift, spec.base.triplet_drift());
  beta += Vector::from_flat(spec.base.layout, integral.value);

  return SubordinatedTriplet{std::move(beta), std::move(gamma),
                             JumpMeasure(spec, cfg), std::move(integral)};
}

// ---------------------------------------------------------------------------
// Moments.
// ---------------------------------------------------------------------------

Vector mean_of_X(const SubordinatedProcessSpec& spec) {
  const IntegrabilityReport report = classify_integrability(spec);
  if (report.x_integrable != TriState::yes) {
    std::ostringstream msg;
    msg << "mean_of_X: spec not integrable (";
    for (std::size_t j = 0; j < report.components.size(); ++j)
      msg << (j ? ", " : "") << "component " << j << ": "
          << to_string(report.components[j].label);
    msg << ")";
    throw std::domain_error(msg.str());
  }
  const SubordinatorMoments moments = subordinator_moments(spec.subordinator);
  const Vector base_mean = spec.base.mean();
  Vector out = Vector::zero(spec.base.layout);
  for (int j = 0; j < spec.d(); ++j) {
    switch (report.components[static_cast<std::size_t>(j)].label) {
      case ComponentCase::theta_trivial_case3:
      case ComponentCase::l_trivial_case4:
      case ComponentCase::mean_zero_square_integrable_case2:
      case ComponentCase::mean_zero_integrable:
        break;  // zero contribution
      default:
        out.comp(j) = moments.mean[static_cast<std::size_t>(j)] * base_mean.comp(j);
        break;
    }
  }
  return out;
}

Vector CovStructure::apply(const Vector& u) const {
  Vector out = diagonal_part.apply(u);
  for (const auto& [w, tensor] : rank_one) {
    Vector term = tensor.apply(u);
    term *= w;
    out += term;
  }
  return out;
}

double CovStructure::quad_form(const Vector& u) const {
  double s = diagonal_part.quad_form(u);
  for (const auto& [w, tensor] : rank_one) s += w * tensor.bilinear(u, u);
  return s;
}

double CovStructure::trace() const {
  double s = diagonal_part.trace();
  for (const auto& [w, tensor] : rank_one) s += w * inner(tensor.x, tensor.y);
  return s;
}

Eigen::MatrixXd CovStructure::to_dense() const {
  Eigen::MatrixXd out = diagonal_part.to_dense();
  for (const auto& [w, tensor] : rank_one)
    out += w * tensor.y.flat() * tensor.x.flat().transpose();
  return out;
}

CovStructure cov_operator_of_X(const SubordinatedProcessSpec& spec) {
  const IntegrabilityReport report = classify_integrability(spec);
  if (!report.square_integrable()) {
    std::ostringstream msg;
    msg << "cov_operator_of_X: spec not square integrable (";
    for (std::size_t j = 0; j < report.components.size(); ++j)
      msg << (j ? ", " : "") << "component " << j << ": "
          << to_string(report.components[j].label);
    msg << ")";
    throw std::domain_error(msg.str());
  }
  const SubordinatorMoments moments = subordinator_moments(spec.subordinator);

  // E Theta_j is finite for every non-degenerate case here; trivial base
  // components contribute nothing even when E Theta_j is infinite.
  std::vector<double> etheta(static_cast<std::size_t>(spec.d()), 0.0);
  for (int j = 0; j < spec.d(); ++j) {
    const bool l_trivial = spec.base.component_trivial(j);
    etheta[static_cast<std::size_t>(j)] =
        l_trivial && !moments.component_mean_finite(j)
            ? 0.0
            : moments.mean[static_cast<std::size_t>(j)];
  }

  CovStructure out;
  out.diagonal_part = spec.base.gaussian.scale_by_multiindex(etheta);

  // Jump part of E Theta Cov(L): rank-one atoms of int x (x) x nu_j.
  for (int j = 0; j < spec.d(); ++j) {
    if (!spec.base.component_has_jumps(j)) continue;
    const auto& part = *spec.base.jumps[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < part.probs.size(); ++k) {
      const double w =
          etheta[static_cast<std::size_t>(j)] * part.rate * part.probs[k];
      if (w == 0.0) continue;
      const Vector atom = embed(spec.base.layout, j, part.atoms[k]);
      out.rank_one.push_back({w, RankOneTensor{atom, atom}});
    }
  }

  // Cov(Theta) corrections; vanish whenever a base mean factor is zero.
  const Vector base_mean = spec.base.mean();
  for (int i = 0; i < spec.d(); ++i) {
    if (base_mean.comp(i).norm() == 0.0) continue;
    for (int j = 0; j < spec.d(); ++j) {
      if (base_mean.comp(j).norm() == 0.0) continue;
      const double w = moments.covariance(i, j);
      if (w == 0.0) continue;
      out.rank_one.push_back(
          {w, RankOneTensor{embed(spec.base.layout, i, base_mean.comp(i)),
                            embed(spec.base.layout, j, base_mean.comp(j))}});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Integrability classification.
// ---------------------------------------------------------------------------

const char* to_string(ComponentCase c) {
  switch (c) {
    case ComponentCase::square_integrable_case1:
      return "square_integrable_case1";
    case ComponentCase::mean_zero_square_integrable_case2:
      return "mean_zero_square_integrable_case2";
    case ComponentCase::theta_trivial_case3:
      return "theta_trivial_case3";
    case ComponentCase::l_trivial_case4:
      return "l_trivial_case4";
    case ComponentCase::integrable_only:
      return "integrable_only";
    case ComponentCase::mean_zero_integrable:
      return "mean_zero_integrable";
    case ComponentCase::not_integrable:
      return "not_integrable";
    case ComponentCase::undetermined:
      return "undetermined";
  }
  return "?";
}

const char* to_string(TriState t) {
  switch (t) {
    case TriState::yes:
      return "yes";
    case TriState::no:
      return "no";
    case TriState::unknown:
      return "unknown";
  }
  return "?";
}

bool ComponentClassification::square_integrable() const {
  switch (label) {
    case ComponentCase::square_integrable_case1:
    case ComponentCase::mean_zero_square_integrable_case2:
    case ComponentCase::theta_trivial_case3:
    case ComponentCase::l_trivial_case4:
      return true;
    default:
      return false;
  }
}

bool ComponentClassification::integrable_known() const {
  switch (label) {
    case ComponentCase::not_integrable:
    case ComponentCase::undetermined:
      return false;
    default:
      return true;
  }
}

namespace {

ComponentClassification classify_component(const BaseTraits& base,
                                           const SubordinatorSpec& sub,
                                           const SubordinatorMoments& moments,
                                           int j) {
  ComponentClassification out;
  if (sub.component_trivial(j)) {
    out.label = ComponentCase::theta_trivial_case3;
    out.governing_rule = "trivial time change: Theta_j = 0 a.s.";
    return out;
  }
  if (base.component_trivial[static_cast<std::size_t>(j)]) {
    out.label = ComponentCase::l_trivial_case4;
    out.governing_rule = "trivial base: L_j = 0 a.s.";
    return out;
  }

  if (base.stable_index) {
    // Strictly alpha-stable mean-zero base, alpha in (1,2): integrable iff
    // E Theta_j(1)^(1/alpha) is finite.
    const double p = 1.0 / *base.stable_index;
    const auto& tail = moments.tail_index[static_cast<std::size_t>(j)];
    const bool finite = !tail || p < *tail;
    out.label = finite ? ComponentCase::mean_zero_integrable
                       : ComponentCase::not_integrable;
    out.governing_rule =
        finite ? "stable-base criterion: E Theta_j(1)^(1/alpha) finite (iff)"
               : "stable-base criterion: E Theta_j(1)^(1/alpha) infinite (iff)";
    return out;
  }

  const bool mean_zero = base.component_mean_zero[static_cast<std::size_t>(j)];
  if (mean_zero && moments.component_mean_finite(j)) {
    out.label = ComponentCase::mean_zero_square_integrable_case2;
    out.governing_rule =
        "square-integrability characterisation, case (2): mean-zero "
        "square-integrable base, integrable subordinator";
    return out;
  }
  if (moments.component_square_integrable(j)) {
    out.label = ComponentCase::square_integrable_case1;
    out.governing_rule =
        "square-integrability characterisation, case (1): base and "
        "subordinator square integrable";
    return out;
  }

  if (mean_zero) {
    const bool sqrt_ok = moments.component_sqrt_moment_finite(j);
    if (base.component_gaussian[static_cast<std::size_t>(j)]) {
      out.label = sqrt_ok ? ComponentCase::mean_zero_integrable
                          : ComponentCase::not_integrable;
      out.governing_rule =
          sqrt_ok ? "Gaussian mean-zero criterion: E sqrt(Theta_j(1)) finite (iff)"
                  : "Gaussian mean-zero criterion: E sqrt(Theta_j(1)) infinite (iff)";
      return out;
    }
    if (sqrt_ok) {
      out.label = ComponentCase::mean_zero_integrable;
      out.governing_rule =
          "martingale sqrt-moment bound: E sqrt(Theta_j(1)) finite (sufficient)";
      return out;
    }
    out.label = ComponentCase::undetermined;
    out.governing_rule =
        "mean-zero non-Gaussian base with E sqrt(Theta_j(1)) infinite: "
        "sufficiency fails and no converse criterion applies";
    return out;
  }

  const bool mean_ok = moments.component_mean_finite(j);
  out.label =
      mean_ok ? ComponentCase::integrable_only : ComponentCase::not_integrable;
  out.governing_rule =
      mean_ok ? "first-moment criterion: E Theta_j(1) finite, base mean nonzero"
              : "first-moment criterion: E Theta_j(1) infinite, base mean nonzero";
  return out;
}

}  // namespace

IntegrabilityReport classify_integrability(const BaseTraits& base,
                                           const SubordinatorSpec& subordinator) {
  subordinator.validate();
  if (base.d != subordinator.d())
    throw std::invalid_argument("classify_integrability: dimension mismatch");
  const SubordinatorMoments moments = subordinator_moments(subordinator);

  IntegrabilityReport report;
  report.components.reserve(static_cast<std::size_t>(base.d));
  for (int j = 0; j < base.d; ++j)
    report.components.push_back(
        classify_component(base, subordinator, moments, j));

  bool any_not_integrable = false, any_undetermined = false;
  bool all_square = true, all_mean_zero = true;
  for (const auto& c : report.components) {
    any_not_integrable |= c.label == ComponentCase::not_integrable;
    any_undetermined |= c.label == ComponentCase::undetermined;
    all_square &= c.square_integrable();
    switch (c.label) {
      case ComponentCase::mean_zero_square_integrable_case2:
      case ComponentCase::theta_trivial_case3:
      case ComponentCase::l_trivial_case4:
      case ComponentCase::mean_zero_integrable:
        break;
      default:
        all_mean_zero = false;
    }
  }
  report.x_square_integrable = all_square ? TriState::yes : TriState::no;
  report.x_integrable = any_not_integrable ? TriState::no
                        : any_undetermined ? TriState::unknown
                                           : TriState::yes;
  report.x_mean_zero = any_not_integrable || !all_mean_zero ? TriState::no
                       : any_undetermined                   ? TriState::unknown
                                                            : TriState::yes;
  return report;
}

IntegrabilityReport classify_integrability(const SubordinatedProcessSpec& spec) {
  spec.validate();
  return classify_integrability(BaseTraits::from(spec.base), spec.subordinator);
}

}  // namespace sublevy
