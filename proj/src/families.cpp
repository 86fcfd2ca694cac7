#include "sublevy/families.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sublevy {

namespace {

void require_d1(const SpaceLayout& layout, const char* where) {
  if (layout.d() != 1)
    throw std::invalid_argument(std::string(where) +
                                ": single-subordinator construction, d must be 1");
}

SubordinatorSpec uni_subordinator(std::optional<UniJump> jump) {
  SubordinatorSpec sub;
  sub.drift = {0.0};
  if (jump) sub.jumps = PerComponentJumps{{std::move(jump)}};
  return sub;
}

}  // namespace

SubordinatedProcessSpec make_hnig(const HNIGParams& p) {
  require_d1(p.b.layout(), "make_hnig");
  require_same_layout(p.b.layout(), p.q.layout(), "make_hnig");
  if (p.s < 0.0 || p.c < 0.0)
    throw std::invalid_argument("make_hnig: s and c must be >= 0");

  std::optional<UniJump> jump;
  if (p.s > 0.0) {
    if (p.degenerate()) {
      // c -> 0 limit of the IG exponent: psi(v) = -s sqrt(-2v), i.e. the
      // one-sided 1/2-stable subordinator with scale s sqrt(2).
      jump = StableJump{0.5, p.s * std::numbers::sqrt2};
    } else {
      jump = IgJump{p.s, p.c};
    }
  }
  SubordinatedProcessSpec spec{
      BaseProcessSpec::gaussian_process(p.b.layout(), p.b, p.q),
      uni_subordinator(std::move(jump))};
  spec.validate();
  return spec;
}

SubordinatedProcessSpec make_stable(const StableParams& p) {
  require_d1(p.q.layout(), "make_stable");
  if (!(p.alpha > 0.0) || p.alpha > 2.0)
    throw std::invalid_argument("make_stable: alpha must be in (0,2]");
  if (p.q.is_zero()) throw std::invalid_argument("make_stable: Q must be nonzero");

  // Mean-zero Gaussian base with covariance 2Q; the alpha/2-stable time
  // change then gives rho(u) = -<Qu|u>^(alpha/2). alpha = 2 degenerates to
  // the deterministic unit clock, X = L.
  BaseProcessSpec base = BaseProcessSpec::gaussian_process(
      p.q.layout(), Vector::zero(p.q.layout()),
      p.q.scale_by_multiindex({2.0}));
  SubordinatorSpec sub = p.alpha == 2.0
                             ? SubordinatorSpec::pure_drift({1.0})
                             : uni_subordinator(StableJump{0.5 * p.alpha, 1.0});
  SubordinatedProcessSpec spec{std::move(base), std::move(sub)};
  spec.validate();
  return spec;
}

SubordinatedProcessSpec make_hvg(const HVGParams& p) {
  require_d1(p.b.layout(), "make_hvg");
  require_same_layout(p.b.layout(), p.q.layout(), "make_hvg");
  if (p.a < 0.0) throw std::invalid_argument("make_hvg: a must be >= 0");

  std::optional<UniJump> jump;
  if (p.a > 0.0) jump = GammaJump{p.a};
  SubordinatedProcessSpec spec{
      BaseProcessSpec::gaussian_process(p.b.layout(), p.b, p.q),
      uni_subordinator(std::move(jump))};
  spec.validate();
  return spec;
}

Complex hnig_exponent(const HNIGParams& p, const Vector& u) {
  const double quad = p.q.quad_form(u);
  const double drift = inner(u, p.b);
  return p.s * (p.c - std::sqrt(Complex(p.c * p.c + quad, -2.0 * drift)));
}

Complex stable_exponent(const StableParams& p, const Vector& u) {
  return {-std::pow(p.q.quad_form(u), 0.5 * p.alpha), 0.0};
}

Complex hvg_exponent(const HVGParams& p, const Vector& u) {
  const double quad = p.q.quad_form(u);
  const double drift = inner(u, p.b);
  return -p.a * std::log(Complex(1.0 + 0.5 * quad, -drift));
}

SubordinatedProcessSpec project_process(const SubordinatedProcessSpec& spec,
                                        const std::vector<Vector>& rows) {
  spec.validate();
  require_d1(spec.base.layout, "project_process");
  if (rows.empty()) throw std::invalid_argument("project_process: empty T");
  for (const auto& row : rows)
    require_same_layout(spec.base.layout, row.layout(), "project_process");

  const int n = static_cast<int>(rows.size());
  const SpaceLayout out_layout{n};

  Eigen::VectorXd drift(n);
  for (int i = 0; i < n; ++i) drift(i) = inner(rows[static_cast<std::size_t>(i)],
                                               spec.base.drift);

  // T Q T* entrywise: <Q t_i | t_k>.
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i) {
    const Vector qt = spec.base.gaussian.apply(rows[static_cast<std::size_t>(i)]);
    for (int k = 0; k < n; ++k)
      q(i, k) = inner(qt, rows[static_cast<std::size_t>(k)]);
  }
  q = 0.5 * (q + q.transpose().eval());  // symmetrize rounding noise

  BaseProcessSpec base;
  base.layout = out_layout;
  base.drift = Vector(out_layout, {drift});
  base.gaussian = CovOperator::from_matrix(out_layout, {q});
  if (spec.base.component_has_jumps(0)) {
    const auto& part = *spec.base.jumps[0];
    ComponentJumpSpec projected;
    projected.rate = part.rate;
    projected.probs = part.probs;
    projected.atoms.reserve(part.atoms.size());
    for (const auto& atom : part.atoms) {
      Eigen::VectorXd image(n);
      for (int i = 0; i < n; ++i)
        image(i) = rows[static_cast<std::size_t>(i)].comp(0).dot(atom);
      projected.atoms.push_back(std::move(image));
    }
    base.jumps = {projected};
  }

  SubordinatedProcessSpec out{std::move(base), spec.subordinator};
  out.validate();
  return out;
}

}  // namespace sublevy
