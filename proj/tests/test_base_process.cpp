#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sublevy/base_process.hpp"
#include "sublevy/stats.hpp"

using namespace sublevy;

namespace {

BaseProcessSpec gaussian_d1(double b, double q) {
  const SpaceLayout layout{1};
  return BaseProcessSpec::gaussian_process(
      layout, Vector::from_flat(layout, Eigen::VectorXd::Constant(1, b)),
      CovOperator::diagonal(layout, {Eigen::VectorXd::Constant(1, q)}));
}

Eigen::VectorXd evec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<long>(v.size()));
  long i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// d=1, n=2 base with drift, anisotropic Q and a two-atom jump part.
BaseProcessSpec jumpy_base() {
  const SpaceLayout layout{2};
  BaseProcessSpec base;
  base.layout = layout;
  base.drift = Vector::from_flat(layout, evec({0.1, -0.2}));
  base.gaussian = CovOperator::diagonal(layout, {evec({1.0, 0.25})});
  ComponentJumpSpec jumps;
  jumps.rate = 1.2;
  jumps.probs = {0.5, 0.5};
  jumps.atoms = {evec({0.8, 0.0}), evec({-0.5, 1.5})};
  base.jumps = {jumps};
  return base;
}

}  // namespace

TEST_CASE("levy exponent point values") {
  const SpaceLayout l2{2};
  const BaseProcessSpec gauss = BaseProcessSpec::gaussian_process(
      l2, Vector::zero(l2), CovOperator::identity(l2));
  CHECK(std::abs(levy_exponent_base(gauss, Vector::zero(l2)).total) == 0.0);
  const Complex phi = levy_exponent_base(gauss, Vector::basis(l2, 0, 0)).total;
  CHECK(phi.real() == -0.5);
  CHECK(phi.imag() == 0.0);

  const BaseProcessSpec drift = BaseProcessSpec::gaussian_process(
      l2, Vector::basis(l2, 0, 0), CovOperator::zero(l2));
  const Complex phi_drift =
      levy_exponent_base(drift, Vector::basis(l2, 0, 0)).total;
  CHECK(phi_drift.real() == 0.0);
  CHECK(phi_drift.imag() == 1.0);
}

TEST_CASE("compound poisson part of the exponent is an exact atom sum") {
  const BaseProcessSpec base = jumpy_base();
  const Vector u = Vector::from_flat(base.layout, evec({0.7, -0.3}));
  const BaseExponent phi = levy_exponent_base(base, u);
  Complex expected(0.0, u.flat().dot(base.drift.flat()));
  expected -= 0.5 * base.gaussian.quad_form(u);
  expected += 1.2 * (0.5 * (std::exp(Complex(0.0, 0.7 * 0.8)) - 1.0) +
                     0.5 * (std::exp(Complex(0.0, 0.7 * -0.5 + -0.3 * 1.5)) - 1.0));
  CHECK(std::abs(phi.total - expected) < 1e-14);
  CHECK(phi.per_component.size() == 1);
  CHECK(std::abs(phi.per_component[0] - expected) < 1e-14);
  CHECK(phi.total.real() <= 0.0);
}

TEST_CASE("sample at theta = 0 is the zero vector") {
  const BaseProcessSpec base = jumpy_base();
  Rng rng(5);
  CHECK(sample_base_at(base, {0.0}, rng).norm() == 0.0);
  CHECK_THROWS_AS(sample_base_at(base, {-1.0}, rng), std::invalid_argument);
}

TEST_CASE("empirical mean and second moment at fixed theta") {
  const BaseProcessSpec base = jumpy_base();
  const Eigen::VectorXd mean_rate = base.mean().flat();
  const double second_rate = base.second_moment();

  Rng rng(6);
  const long n = 100000;
  const double theta = 1.0;
  std::vector<double> m0(n), m1(n), dev2(n);
  for (long i = 0; i < n; ++i) {
    const Eigen::VectorXd x = sample_base_at(base, {theta}, rng).flat();
    m0[static_cast<std::size_t>(i)] = x(0);
    m1[static_cast<std::size_t>(i)] = x(1);
    dev2[static_cast<std::size_t>(i)] = (x - theta * mean_rate).squaredNorm();
  }
  const MeanSe s0 = mean_and_se(m0), s1 = mean_and_se(m1);
  CHECK(std::abs(s0.mean - mean_rate(0)) <= 4.0 * s0.se);
  CHECK(std::abs(s1.mean - mean_rate(1)) <= 4.0 * s1.se);
  const MeanSe sd = mean_and_se(dev2);
  CHECK(std::abs(sd.mean - theta * second_rate) <= 4.0 * sd.se);
}

TEST_CASE("gaussian second moment scales with tr Q") {
  const BaseProcessSpec base = gaussian_d1(0.0, 1.7);
  Rng rng(7);
  const long n = 100000;
  const double theta = 2.5;
  std::vector<double> sq(n);
  for (long i = 0; i < n; ++i) {
    const double x = sample_base_at(base, {theta}, rng).flat()(0);
    sq[static_cast<std::size_t>(i)] = x * x;
  }
  const MeanSe s = mean_and_se(sq);
  CHECK(std::abs(s.mean - theta * 1.7) <= 4.0 * s.se);
}

TEST_CASE("empirical cf factorises over components and theta") {
  const SpaceLayout l{1, 1};
  BaseProcessSpec base;
  base.layout = l;
  base.drift = Vector::from_flat(l, evec({0.3, 0.0}));
  base.gaussian = CovOperator::diagonal(l, {evec({0.8}), evec({0.5})});
  ComponentJumpSpec j1;
  j1.rate = 0.9;
  j1.probs = {1.0};
  j1.atoms = {evec({0.6})};
  base.jumps = {std::nullopt, j1};

  const std::vector<double> theta = {0.7, 1.4};
  Rng rng(8);
  const long n = 100000;
  std::vector<Eigen::VectorXd> draws;
  draws.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    draws.push_back(sample_base_at(base, theta, rng).flat());

  for (const auto& coeffs :
       {evec({0.5, -0.4}), evec({1.0, 0.0}), evec({-0.3, 1.2})}) {
    const Vector u = Vector::from_flat(l, coeffs);
    const BaseExponent phi = levy_exponent_base(base, u);
    Complex exponent(0.0, 0.0);
    for (int j = 0; j < 2; ++j)
      exponent += theta[static_cast<std::size_t>(j)] *
                  phi.per_component[static_cast<std::size_t>(j)];
    const Complex expected = std::exp(exponent);
    NeumaierSum re, im;
    for (const auto& x : draws) {
      const double phase = coeffs.dot(x);
      re.add(std::cos(phase));
      im.add(std::sin(phase));
    }
    const double tol = 4.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(re.value() / n - expected.real()) <= tol);
    CHECK(std::abs(im.value() / n - expected.imag()) <= tol);
  }
}

TEST_CASE("independence of components under block-diagonal gaussian") {
  const SpaceLayout l{1, 1};
  const BaseProcessSpec base = BaseProcessSpec::gaussian_process(
      l, Vector::zero(l), CovOperator::diagonal(l, {evec({1.0}), evec({2.0})}));
  Rng rng(9);
  const long n = 100000;
  std::vector<double> prod(n);
  for (long i = 0; i < n; ++i) {
    const Eigen::VectorXd x = sample_base_at(base, {1.0, 1.0}, rng).flat();
    prod[static_cast<std::size_t>(i)] = x(0) * x(1);
  }
  const MeanSe s = mean_and_se(prod);
  CHECK(std::abs(s.mean) <= 4.0 * s.se);
}

TEST_CASE("growth constants: pure drift is tight") {
  const BaseProcessSpec base = gaussian_d1(1.5, 0.0);
  const GrowthBoundConstants c = growth_function_bound(base);
  CHECK(c.c1 == doctest::Approx(1.5));
  CHECK(c.c2 == 0.0);
  CHECK_FALSE(c.martingale_c.has_value());
  // E|L(theta)| = |theta b| exactly for d = 1.
  Rng rng(10);
  const double theta = 3.0;
  CHECK(sample_base_at(base, {theta}, rng).norm() ==
        doctest::Approx(theta * 1.5));
}

TEST_CASE("growth constants: half-normal mean sits under the martingale bound") {
  const BaseProcessSpec base = gaussian_d1(0.0, 1.0);
  const GrowthBoundConstants c = growth_function_bound(base);
  CHECK(c.c1 == 0.0);
  CHECK(c.c2 == doctest::Approx(1.0));
  REQUIRE(c.martingale_c.has_value());
  CHECK(*c.martingale_c == doctest::Approx(1.0));

  Rng rng(11);
  const long n = 100000;
  for (double theta : {0.5, 2.0}) {
    std::vector<double> norms(n);
    for (long i = 0; i < n; ++i)
      norms[static_cast<std::size_t>(i)] =
          std::abs(sample_base_at(base, {theta}, rng).flat()(0));
    const MeanSe s = mean_and_se(norms);
    const double half_normal = std::sqrt(2.0 * theta / std::numbers::pi);
    CHECK(std::abs(s.mean - half_normal) <= 4.0 * s.se);
    CHECK(s.mean <= std::sqrt(theta) * *c.martingale_c + 4.0 * s.se);
  }
}

TEST_CASE("growth constants: unit-jump compound poisson") {
  const SpaceLayout l{1};
  BaseProcessSpec base;
  base.layout = l;
  base.drift = Vector::zero(l);
  base.gaussian = CovOperator::zero(l);
  ComponentJumpSpec j;
  j.rate = 1.0;
  j.probs = {1.0};
  j.atoms = {evec({1.0})};
  base.jumps = {j};

  const GrowthBoundConstants c = growth_function_bound(base);
  // |J| = 1: no large jumps, so C1 = |triplet drift| = rate |E chi(J)| = 1.
  CHECK(c.c1 == doctest::Approx(1.0));
  CHECK(c.c2 == doctest::Approx(1.0));

  // E|L(theta)| = E N(theta) = theta exactly for unit positive jumps.
  Rng rng(12);
  const long n = 100000;
  for (double theta : {0.5, 2.0}) {
    std::vector<double> norms(n);
    for (long i = 0; i < n; ++i)
      norms[static_cast<std::size_t>(i)] =
          sample_base_at(base, {theta}, rng).norm();
    const MeanSe s = mean_and_se(norms);
    CHECK(std::abs(s.mean - theta) <= 4.0 * s.se);
    CHECK(s.mean <= theta * c.c1 + std::sqrt(theta) * c.c2 + 4.0 * s.se);
  }
}

TEST_CASE("truncated mean enters the triplet drift") {
  const BaseProcessSpec base = jumpy_base();
  // atoms: (0.8, 0) with |.| = 0.8 <= 1 kept; (-0.5, 1.5) with |.| > 1 cut.
  const Eigen::VectorXd td = base.triplet_drift().flat();
  CHECK(td(0) == doctest::Approx(0.1 + 1.2 * 0.5 * 0.8));
  CHECK(td(1) == doctest::Approx(-0.2));
  const Eigen::VectorXd mean = base.mean().flat();
  CHECK(mean(0) == doctest::Approx(0.1 + 1.2 * (0.5 * 0.8 + 0.5 * -0.5)));
  CHECK(mean(1) == doctest::Approx(-0.2 + 1.2 * 0.5 * 1.5));
}

TEST_CASE("expected truncation of L(theta) grows at most linearly") {
  // |E chi(L(theta))| <= |theta| C_chi with C_chi estimated at |theta| = 1
  // and the linear bound probed at larger theta (below 1 the growth-function
  // bound already controls the behaviour).
  const BaseProcessSpec base = jumpy_base();
  Rng rng(13);
  const long n = 200000;
  auto echi_norm = [&](double theta) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(2);
    for (long i = 0; i < n; ++i) {
      const Vector x = sample_base_at(base, {theta}, rng);
      if (x.squared_norm() <= 1.0) acc += x.flat();
    }
    return (acc / static_cast<double>(n)).norm();
  };
  const double c_chi = echi_norm(1.0) + 4.0 / std::sqrt(double(n));
  CHECK(c_chi > 0.0);
  for (double theta : {2.0, 4.0, 8.0}) {
    CHECK(echi_norm(theta) <=
          theta * c_chi + 4.0 * (1.0 + theta) / std::sqrt(double(n)));
  }
}

TEST_CASE("base traits") {
  const BaseProcessSpec gauss = gaussian_d1(0.0, 1.0);
  const BaseTraits t = BaseTraits::from(gauss);
  CHECK(t.component_gaussian[0]);
  CHECK(t.component_mean_zero[0]);
  CHECK_FALSE(t.component_trivial[0]);
  CHECK(t.square_integrable);
  CHECK_FALSE(t.stable_index.has_value());

  const BaseTraits stable = BaseTraits::strictly_stable(1, 1.5);
  CHECK(stable.stable_index == 1.5);
  CHECK_FALSE(stable.square_integrable);
  CHECK_THROWS_AS(BaseTraits::strictly_stable(1, 2.5), std::invalid_argument);

  const SpaceLayout l{1};
  const BaseProcessSpec trivial = BaseProcessSpec::gaussian_process(
      l, Vector::zero(l), CovOperator::zero(l));
  CHECK(BaseTraits::from(trivial).component_trivial[0]);
}

TEST_CASE("spec validation") {
  const SpaceLayout l{2};
  BaseProcessSpec base;
  base.layout = l;
  base.drift = Vector::zero(l);
  base.gaussian = CovOperator::identity(l);
  ComponentJumpSpec bad;
  bad.rate = -1.0;
  bad.probs = {1.0};
  bad.atoms = {evec({1.0, 0.0})};
  base.jumps = {bad};
  CHECK_THROWS_AS(base.validate(), std::invalid_argument);

  base.jumps.clear();
  base.gaussian = CovOperator::identity(SpaceLayout{3});
  CHECK_THROWS_AS(base.validate(), std::invalid_argument);
}
