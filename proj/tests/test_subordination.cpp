#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sublevy/families.hpp"
#include "sublevy/stats.hpp"
#include "sublevy/subordination.hpp"
#include "sublevy/verify.hpp"

using namespace sublevy;

namespace {

Eigen::VectorXd evec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<long>(v.size()));
  long i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

HNIGParams hnig_params(double s, double c, std::initializer_list<double> b,
                       std::initializer_list<double> q) {
  const SpaceLayout layout{static_cast<int>(b.size())};
  return HNIGParams{s, c, Vector::from_flat(layout, evec(b)),
                    CovOperator::diagonal(layout, {evec(q)})};
}

SubordinatedProcessSpec cp_base_instance() {
  // Compound-Poisson base under an IG clock: d = 1, n = 2.
  const SpaceLayout layout{2};
  BaseProcessSpec base;
  base.layout = layout;
  base.drift = Vector::from_flat(layout, evec({0.2, -0.1}));
  base.gaussian = CovOperator::diagonal(layout, {evec({0.5, 0.3})});
  ComponentJumpSpec jumps;
  jumps.rate = 1.0;
  jumps.probs = {0.5, 0.5};
  jumps.atoms = {evec({0.4, 0.3}), evec({-0.5, 0.2})};
  base.jumps = {jumps};
  SubordinatorSpec sub;
  sub.drift = {0.0};
  sub.jumps = PerComponentJumps{{IgJump{1.0, 2.0}}};
  return SubordinatedProcessSpec{std::move(base), std::move(sub)};
}

}  // namespace

TEST_CASE("exponent composition point values") {
  const SubordinatedProcessSpec hnig = make_hnig(hnig_params(1, 1, {0}, {1}));
  CHECK(std::abs(subordinated_exponent(hnig, Vector::zero(hnig.base.layout))) ==
        0.0);
  const Vector e1 = Vector::basis(hnig.base.layout, 0, 0);
  const Complex rho = subordinated_exponent(hnig, e1);
  CHECK(rho.real() == doctest::Approx(1.0 - std::numbers::sqrt2).epsilon(1e-14));
  CHECK(std::abs(rho.imag()) < 1e-14);

  // Gamma clock over a mean-zero Gaussian with <Qu|u> = 2.
  const SpaceLayout l{1};
  const SubordinatedProcessSpec hvg = make_hvg(
      HVGParams{1.0, Vector::zero(l), CovOperator::diagonal(l, {evec({2.0})})});
  const Complex rho_vg = subordinated_exponent(hvg, Vector::basis(l, 0, 0));
  CHECK(rho_vg.real() == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("trivial subordinator gives the zero process") {
  const SpaceLayout l{1};
  SubordinatedProcessSpec spec{
      BaseProcessSpec::gaussian_process(l, Vector::basis(l, 0, 0),
                                        CovOperator::identity(l)),
      SubordinatorSpec::pure_drift({0.0})};
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(sample_X(spec, 1.0, rng).norm() == 0.0);
  const IntegrabilityReport report = classify_integrability(spec);
  CHECK(report.components[0].label == ComponentCase::theta_trivial_case3);
}

TEST_CASE("unit-drift subordination reproduces the base law") {
  const SpaceLayout l{1};
  SubordinatedProcessSpec spec{
      BaseProcessSpec::gaussian_process(l,
                                        Vector::from_flat(l, evec({0.4})),
                                        CovOperator::diagonal(l, {evec({0.9})})),
      SubordinatorSpec::pure_drift({1.0})};
  // rho(u) = phi(u) exactly.
  for (double u : {0.3, 1.0, -2.0}) {
    const Vector probe = Vector::from_flat(l, evec({u}));
    const Complex rho = subordinated_exponent(spec, probe);
    const Complex phi = levy_exponent_base(spec.base, probe).total;
    CHECK(std::abs(rho - phi) < 1e-14);
  }
  // And the CF check passes against the base exponent.
  CFCheckConfig cfg;
  cfg.probes = 8;
  cfg.samples = 20000;
  const VerificationReport rep = check_cf(spec, cfg, 99);
  CHECK(rep.pass);
}

TEST_CASE("sampled CF matches the analytic exponent for the CP-base instance") {
  const SubordinatedProcessSpec spec = cp_base_instance();
  CFCheckConfig cfg;
  cfg.probes = 10;
  cfg.samples = 50000;
  const VerificationReport rep = check_cf(spec, cfg, 123);
  CHECK(rep.pass);
}

TEST_CASE("paths: additivity, stationarity, single-point law") {
  const SubordinatedProcessSpec spec = make_hnig(hnig_params(1, 1, {0.3}, {1}));
  Rng rng(7);

  // additivity by construction: X(t2) equals the sum of the two increments
  // (cumulative path), so a path re-walk must reproduce it exactly
  {
    Rng a(12345), b(12345);
    const auto path = simulate_path(spec, {0.5, 1.0, 2.0}, a);
    const Vector x1 = sample_X(spec, 0.5, b);
    Vector x2 = x1 + sample_X(spec, 0.5, b);
    Vector x3 = x2 + sample_X(spec, 1.0, b);
    CHECK((path[0].flat() - x1.flat()).norm() == 0.0);
    CHECK((path[1].flat() - x2.flat()).norm() == 0.0);
    CHECK((path[2].flat() - x3.flat()).norm() == 0.0);
  }

  // stationarity: increments over two disjoint windows of equal length
  const long n = 20000;
  std::vector<double> w1(n), w2(n), single(n);
  for (long i = 0; i < n; ++i) {
    const auto path = simulate_path(spec, {0.7, 1.4, 2.0, 2.7}, rng);
    w1[static_cast<std::size_t>(i)] = path[1].flat()(0) - path[0].flat()(0);
    w2[static_cast<std::size_t>(i)] = path[3].flat()(0) - path[2].flat()(0);
    single[static_cast<std::size_t>(i)] = sample_X(spec, 0.7, rng).flat()(0);
  }
  CHECK(ks_two_sample(w1, w2).p_value > 0.01);
  // single-point grid law equals sample_X law
  CHECK(ks_two_sample(w1, single).p_value > 0.01);

  CHECK_THROWS_AS(simulate_path(spec, {1.0, 0.5}, rng), std::invalid_argument);
  CHECK_THROWS_AS(simulate_path(spec, {}, rng), std::invalid_argument);
}

TEST_CASE("triplet of a pure-drift subordinator") {
  const SpaceLayout l{2};
  BaseProcessSpec base = BaseProcessSpec::gaussian_process(
      l, Vector::from_flat(l, evec({0.5, -1.0})),
      CovOperator::diagonal(l, {evec({1.0, 0.25})}));
  SubordinatedProcessSpec spec{base, SubordinatorSpec::pure_drift({2.0})};
  TripletConfig cfg;
  cfg.seed = 11;
  const SubordinatedTriplet t = subordinated_triplet(spec, cfg);
  CHECK(t.beta_quadrature.converged);
  CHECK((t.beta.flat() - 2.0 * base.drift.flat()).norm() == 0.0);
  CHECK(t.gamma.eigenvalues(0)(0) == 2.0);
  CHECK(t.gamma.eigenvalues(0)(1) == 0.5);
  CHECK(t.mu.tail_mass(0.5).value(0) == 0.0);
}

TEST_CASE("gamma part of the triplet is the multiindex-scaled Q") {
  const SubordinatedProcessSpec spec = cp_base_instance();
  SubordinatedProcessSpec with_drift = spec;
  with_drift.subordinator.drift = {0.7};
  TripletConfig cfg;
  cfg.inner_pairs = 200;
  const SubordinatedTriplet t = subordinated_triplet(with_drift, cfg);
  const CovOperator expected =
      with_drift.base.gaussian.scale_by_multiindex(with_drift.subordinator.drift);
  CHECK((t.gamma.to_dense() - expected.to_dense()).norm() == 0.0);
}

TEST_CASE("symmetric HNIG drift vanishes exactly under antithetic pairing") {
  const SubordinatedProcessSpec spec = make_hnig(hnig_params(1, 1, {0}, {1}));
  TripletConfig cfg;
  cfg.seed = 3;
  cfg.inner_pairs = 500;  // exactness does not depend on the sample size
  const SubordinatedTriplet t = subordinated_triplet(spec, cfg);
  CHECK(t.beta_quadrature.converged);
  CHECK(std::abs(t.beta.flat()(0)) <= 1e-6);
}

TEST_CASE("HNIG jump measure tails match an independent oracle") {
  // mu({|x| > r}) for s = c = 1, b = 0, Q = 1; reference values from
  // scipy.integrate.quad of 2 Phi-bar(r/sqrt(t)) against the IG density.
  const SubordinatedProcessSpec spec = make_hnig(hnig_params(1, 1, {0}, {1}));
  TripletConfig cfg;
  cfg.seed = 5;
  cfg.inner_pairs = 20000;
  const JumpMeasure mu(spec, cfg);
  const double oracle[3] = {0.6447349645933956, 0.174192380869908,
                            0.027212496368423635};
  const double radii[3] = {0.5, 1.0, 2.0};
  for (int i = 0; i < 3; ++i) {
    const QuadResult q = mu.tail_mass(radii[i]);
    CHECK(q.converged);
    CHECK(std::abs(q.value(0) - oracle[i]) <=
          4.0 * q.mc_se(0) + q.quad_error(0) + 1e-6);
  }
}

TEST_CASE("half-space masses: gaussian-analytic route and symmetry") {
  const SubordinatedProcessSpec spec = make_hnig(hnig_params(1, 1, {0}, {1}));
  TripletConfig cfg;
  cfg.seed = 6;
  cfg.inner_pairs = 20000;
  const JumpMeasure mu(spec, cfg);
  const Vector e1 = Vector::basis(spec.base.layout, 0, 0);
  // b = 0, n = 1: {<e1|x> > q} is half of {|x| > q} by symmetry.
  for (double q : {0.5, 1.0}) {
    const QuadResult half = mu.halfspace_mass(e1, q);
    const QuadResult ball = mu.tail_mass(q);
    CHECK(half.converged);
    CHECK(half.mc_se(0) == 0.0);  // gaussian-analytic inner probability
    CHECK(std::abs(2.0 * half.value(0) - ball.value(0)) <=
          4.0 * ball.mc_se(0) + ball.quad_error(0) + half.quad_error(0) + 1e-6);
  }
  CHECK_THROWS_AS(mu.halfspace_mass(e1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mu.tail_mass(0.0), std::invalid_argument);
}

TEST_CASE("beta plus the large-jump mean recovers the HNIG drift identity") {
  // beta + integral_{|x|>1} x mu(dx) = (s/c) b; scipy reference values
  // beta = 0.2562896085258199, large-jump mean = 0.2437103914740055.
  const SubordinatedProcessSpec spec =
      make_hnig(hnig_params(1, 1, {0.5}, {1}));
  TripletConfig cfg;
  cfg.seed = 8;
  cfg.inner_pairs = 40000;
  const SubordinatedTriplet t = subordinated_triplet(spec, cfg);
  CHECK(t.beta_quadrature.converged);
  CHECK(std::abs(t.beta.flat()(0) - 0.2562896085258199) <=
        4.0 * t.beta_quadrature.mc_se(0) + t.beta_quadrature.quad_error(0) +
            1e-6);
  const QuadResult ljm = t.mu.large_jump_mean();
  CHECK(ljm.converged);
  CHECK(std::abs(ljm.value(0) - 0.2437103914740055) <=
        4.0 * ljm.mc_se(0) + ljm.quad_error(0) + 1e-6);
  const double lhs = t.beta.flat()(0) + ljm.value(0);
  CHECK(std::abs(lhs - 0.5) <= 4.0 * (t.beta_quadrature.mc_se(0) + ljm.mc_se(0)) +
                                   t.beta_quadrature.quad_error(0) +
                                   ljm.quad_error(0) + 1e-6);
}

TEST_CASE("large-jump mean refuses subordinators without a first moment") {
  const SubordinatedProcessSpec spec = make_hnig(hnig_params(1, 0, {0.5}, {1}));
  TripletConfig cfg;
  const JumpMeasure mu(spec, cfg);
  CHECK_THROWS_AS(mu.large_jump_mean(), std::domain_error);
}

TEST_CASE("mean of X") {
  // HNIG: (s/c) b.
  const Eigen::VectorXd m =
      mean_of_X(make_hnig(hnig_params(2.0, 0.5, {0.3, -0.2}, {1, 1}))).flat();
  CHECK(m(0) == doctest::Approx(4.0 * 0.3));
  CHECK(m(1) == doctest::Approx(4.0 * -0.2));

  // mean-zero base.
  CHECK(mean_of_X(make_hnig(hnig_params(1, 1, {0, 0}, {1, 2}))).flat().norm() ==
        0.0);

  // HVG: a b.
  const SpaceLayout l{2};
  const Eigen::VectorXd mv =
      mean_of_X(make_hvg(HVGParams{1.5, Vector::from_flat(l, evec({0.4, 0.1})),
                                   CovOperator::identity(l)}))
          .flat();
  CHECK(mv(0) == doctest::Approx(1.5 * 0.4));
  CHECK(mv(1) == doctest::Approx(1.5 * 0.1));

  // degenerate HNIG is not integrable: the error carries the label.
  CHECK_THROWS_WITH_AS(
      mean_of_X(make_hnig(hnig_params(1, 0, {0.5}, {1}))),
      doctest::Contains("not_integrable"), std::domain_error);
}

TEST_CASE("covariance of X: HNIG closed form") {
  // s = 1, c = 1, b = (0.5, 0), Q = diag(1, 0.5):
  // Cov = s b (x) b / c^3 + (s/c) Q = diag(1.25, 0.5).
  const SubordinatedProcessSpec spec =
      make_hnig(hnig_params(1, 1, {0.5, 0.0}, {1.0, 0.5}));
  const Eigen::MatrixXd cov = cov_operator_of_X(spec).to_dense();
  CHECK(cov(0, 0) == doctest::Approx(1.25));
  CHECK(cov(1, 1) == doctest::Approx(0.5));
  CHECK(cov(0, 1) == doctest::Approx(0.0));
  CHECK(cov(1, 0) == doctest::Approx(0.0));

  // trace/apply/quad_form agree with the dense form.
  const CovStructure structure = cov_operator_of_X(spec);
  CHECK(structure.trace() == doctest::Approx(cov.trace()));
  const Vector u = Vector::from_flat(spec.base.layout, evec({0.7, -0.4}));
  CHECK(structure.quad_form(u) ==
        doctest::Approx(u.flat().dot(cov * u.flat())));
  CHECK((structure.apply(u).flat() - cov * u.flat()).norm() < 1e-14);
}

TEST_CASE("covariance of X: HVG closed form and martingale case") {
  const SpaceLayout l{2};
  const CovOperator q = CovOperator::diagonal(l, {evec({1.0, 0.5})});
  // a = 2, b = 0: Cov = 2Q, no rank-one part.
  const CovStructure mz =
      cov_operator_of_X(make_hvg(HVGParams{2.0, Vector::zero(l), q}));
  CHECK(mz.rank_one.empty());
  CHECK((mz.to_dense() - 2.0 * q.to_dense()).norm() < 1e-14);

  // b != 0: Cov = a b (x) b + a Q.
  const Vector b = Vector::from_flat(l, evec({0.4, -0.3}));
  const Eigen::MatrixXd cov =
      cov_operator_of_X(make_hvg(HVGParams{2.0, b, q})).to_dense();
  const Eigen::MatrixXd expected =
      2.0 * b.flat() * b.flat().transpose() + 2.0 * q.to_dense();
  CHECK((cov - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("covariance of X with a jumpy mean-zero base") {
  // Mean-zero CP base (case 2): Cov(X) = E Theta * Cov(L).
  const SpaceLayout l{1};
  BaseProcessSpec base;
  base.layout = l;
  base.drift = Vector::from_flat(l, evec({-0.5}));  // cancels the jump mean
  base.gaussian = CovOperator::diagonal(l, {evec({0.3})});
  ComponentJumpSpec jumps;
  jumps.rate = 1.0;
  jumps.probs = {0.5, 0.5};
  jumps.atoms = {evec({1.2}), evec({-0.2})};
  base.jumps = {jumps};
  REQUIRE(base.mean_zero());

  SubordinatedProcessSpec spec{base, SubordinatorSpec{}};
  spec.subordinator.drift = {0.0};
  spec.subordinator.jumps = PerComponentJumps{{GammaJump{1.5}}};

  const IntegrabilityReport report = classify_integrability(spec);
  CHECK(report.components[0].label ==
        ComponentCase::mean_zero_square_integrable_case2);

  const CovStructure cov = cov_operator_of_X(spec);
  const double expected = 1.5 * (0.3 + 1.0 * (0.5 * 1.44 + 0.5 * 0.04));
  CHECK(cov.to_dense()(0, 0) == doctest::Approx(expected));

  // cross-check against simulation
  const VerificationReport rep = check_moments(spec, 100000, 15);
  CHECK(rep.pass);
  CHECK_FALSE(rep.skipped);
}

TEST_CASE("cov_operator_of_X rejects non-square-integrable specs") {
  CHECK_THROWS_WITH_AS(
      cov_operator_of_X(make_stable(
          StableParams{1.5, CovOperator::identity(SpaceLayout{1})})),
      doctest::Contains("not square integrable"), std::domain_error);
}

TEST_CASE("classification verdicts across the families") {
  // HNIG with drift: case (1).
  CHECK(classify_integrability(make_hnig(hnig_params(1, 1, {0.5}, {1})))
            .components[0]
            .label == ComponentCase::square_integrable_case1);
  // degenerate HNIG: not integrable.
  const IntegrabilityReport deg =
      classify_integrability(make_hnig(hnig_params(1, 0, {0}, {1})));
  CHECK(deg.components[0].label == ComponentCase::not_integrable);
  CHECK(deg.x_integrable == TriState::no);
  // alpha-stable: integrable iff alpha > 1, square integrable iff alpha = 2.
  const CovOperator q = CovOperator::identity(SpaceLayout{1});
  CHECK(classify_integrability(make_stable(StableParams{0.5, q}))
            .x_integrable == TriState::no);
  CHECK(classify_integrability(make_stable(StableParams{1.0, q}))
            .x_integrable == TriState::no);
  const IntegrabilityReport s15 =
      classify_integrability(make_stable(StableParams{1.5, q}));
  CHECK(s15.x_integrable == TriState::yes);
  CHECK(s15.x_mean_zero == TriState::yes);
  CHECK(s15.x_square_integrable == TriState::no);
  CHECK(s15.components[0].label == ComponentCase::mean_zero_integrable);
  const IntegrabilityReport s2 =
      classify_integrability(make_stable(StableParams{2.0, q}));
  CHECK(s2.x_square_integrable == TriState::yes);

  // trivial base component
  const SpaceLayout l{1};
  SubordinatedProcessSpec ltriv{
      BaseProcessSpec::gaussian_process(l, Vector::zero(l),
                                        CovOperator::zero(l)),
      SubordinatorSpec{}};
  ltriv.subordinator.drift = {0.0};
  ltriv.subordinator.jumps = PerComponentJumps{{IgJump{1.0, 0.0}}};
  CHECK(classify_integrability(ltriv).components[0].label ==
        ComponentCase::l_trivial_case4);
}

TEST_CASE("classification: undetermined route for non-gaussian martingale bases") {
  // Mean-zero CP base under a clock with infinite sqrt-moment: sufficiency
  // fails, no converse applies.
  const SpaceLayout l{1};
  BaseProcessSpec base;
  base.layout = l;
  base.drift = Vector::from_flat(l, evec({-0.5}));
  base.gaussian = CovOperator::zero(l);
  ComponentJumpSpec jumps;
  jumps.rate = 1.0;
  jumps.probs = {1.0};
  jumps.atoms = {evec({0.5})};
  base.jumps = {jumps};
  REQUIRE(base.mean_zero());

  SubordinatedProcessSpec spec{base, SubordinatorSpec{}};
  spec.subordinator.drift = {0.0};
  spec.subordinator.jumps = PerComponentJumps{{StableJump{0.4, 1.0}}};
  const IntegrabilityReport report = classify_integrability(spec);
  CHECK(report.components[0].label == ComponentCase::undetermined);
  CHECK(report.x_integrable == TriState::unknown);

  // The same clock with a Gaussian base is decidable: not integrable.
  SubordinatedProcessSpec gauss{
      BaseProcessSpec::gaussian_process(l, Vector::zero(l),
                                        CovOperator::identity(l)),
      spec.subordinator};
  CHECK(classify_integrability(gauss).components[0].label ==
        ComponentCase::not_integrable);
}

TEST_CASE("classification: strictly stable base via the trait route") {
  SubordinatorSpec ig;
  ig.drift = {0.0};
  ig.jumps = PerComponentJumps{{IgJump{1.0, 1.0}}};
  const IntegrabilityReport ok =
      classify_integrability(BaseTraits::strictly_stable(1, 1.5), ig);
  CHECK(ok.components[0].label == ComponentCase::mean_zero_integrable);

  // E Theta^(1/alpha) with 1/alpha = 2/3 against a 0.6-stable clock: infinite.
  SubordinatorSpec heavy;
  heavy.drift = {0.0};
  heavy.jumps = PerComponentJumps{{StableJump{0.6, 1.0}}};
  const IntegrabilityReport bad =
      classify_integrability(BaseTraits::strictly_stable(1, 1.5), heavy);
  CHECK(bad.components[0].label == ComponentCase::not_integrable);
  // ... while a 0.7-stable clock has E Theta^(2/3) finite.
  SubordinatorSpec lighter;
  lighter.drift = {0.0};
  lighter.jumps = PerComponentJumps{{StableJump{0.7, 1.0}}};
  CHECK(classify_integrability(BaseTraits::strictly_stable(1, 1.5), lighter)
            .components[0]
            .label == ComponentCase::mean_zero_integrable);
}

TEST_CASE("mean-zero criterion holds empirically") {
  const SubordinatedProcessSpec spec = make_hnig(hnig_params(1, 1, {0, 0}, {1, 0.5}));
  const IntegrabilityReport report = classify_integrability(spec);
  REQUIRE(report.x_mean_zero == TriState::yes);
  const Eigen::MatrixXd draws = sample_X_matrix(spec, 1.0, 100000, 77, 0);
  const Eigen::VectorXd mean = draws.colwise().mean();
  const double tr = cov_operator_of_X(spec).trace();
  CHECK(mean.norm() <= 4.0 * std::sqrt(tr / static_cast<double>(draws.rows())));
}

TEST_CASE("non-integrability shows up as unstabilised running means") {
  const SubordinatedProcessSpec spec = make_hnig(hnig_params(1, 0, {0}, {1}));
  Rng rng(31);
  NeumaierSum acc;
  long drawn = 0;
  std::vector<double> running;
  for (long target : {1000L, 10000L, 100000L}) {
    while (drawn < target) {
      acc.add(sample_X(spec, 1.0, rng).norm());
      ++drawn;
    }
    running.push_back(acc.value() / static_cast<double>(drawn));
  }
  CHECK(running[1] > running[0]);
  CHECK(running[2] > running[1]);
}

TEST_CASE("exponent rejects mismatched clocks") {
  const SpaceLayout l{1};
  SubordinatedProcessSpec spec{
      BaseProcessSpec::gaussian_process(l, Vector::zero(l),
                                        CovOperator::identity(l)),
      SubordinatorSpec::pure_drift({1.0, 1.0})};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
