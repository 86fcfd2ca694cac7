#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "sublevy/hilbert.hpp"

using namespace sublevy;

namespace {
Vector vec(const SpaceLayout& layout, std::vector<std::vector<double>> comps) {
  std::vector<Eigen::VectorXd> out;
  for (auto& c : comps)
    out.push_back(Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<long>(c.size())));
  return Vector(layout, std::move(out));
}
}  // namespace

TEST_CASE("layout validation") {
  CHECK_THROWS_AS(SpaceLayout(std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(SpaceLayout({2, 0}), std::invalid_argument);
  const SpaceLayout l{2, 1};
  CHECK(l.d() == 2);
  CHECK(l.total_dim() == 3);
}

TEST_CASE("inner product") {
  const SpaceLayout l{2, 1};
  const Vector zero = Vector::zero(l);
  CHECK(inner(zero, zero) == 0.0);

  const Vector e1 = Vector::basis(l, 0, 0);
  CHECK(inner(e1, e1) == 1.0);

  const Vector u = vec(l, {{1, 2}, {3}});
  const Vector v = vec(l, {{1, 0}, {2}});
  CHECK(inner(u, v) == 7.0);  // 1 + 0 + 6
  CHECK(inner(v, u) == 7.0);

  const SpaceLayout other{3};
  CHECK_THROWS_AS(inner(u, Vector::zero(other)), std::invalid_argument);
}

TEST_CASE("norm is pythagorean across the direct sum") {
  const SpaceLayout l{2, 3};
  const Vector u = vec(l, {{3, 0}, {0, 4, 0}});
  CHECK(u.squared_norm() == 25.0);
  CHECK(u.norm() == 5.0);
  double coeff_sq = 0.0;
  for (int j = 0; j < u.d(); ++j) coeff_sq += u.comp(j).squaredNorm();
  CHECK(u.squared_norm() == coeff_sq);
}

TEST_CASE("apply_cov diagonal") {
  const SpaceLayout l{2};
  const Vector u = vec(l, {{1, 1}});

  CHECK((CovOperator::identity(l).apply(u).flat() - u.flat()).norm() == 0.0);
  CHECK(CovOperator::zero(l).apply(u).flat().norm() == 0.0);

  Eigen::VectorXd ev(2);
  ev << 2.0, 3.0;
  const CovOperator q = CovOperator::diagonal(l, {ev});
  const Eigen::VectorXd got = q.apply(u).flat();
  CHECK(got(0) == 2.0);
  CHECK(got(1) == 3.0);
  CHECK(q.trace() == 5.0);
  CHECK(q.quad_form(u) == 5.0);

  CHECK_THROWS_AS(q.apply(Vector::zero(SpaceLayout{3})), std::invalid_argument);
  Eigen::VectorXd negative(2);
  negative << 1.0, -0.5;
  CHECK_THROWS_AS(CovOperator::diagonal(l, {negative}), std::invalid_argument);
}

TEST_CASE("scale_by_multiindex") {
  const SpaceLayout l{1, 1};
  const Vector u = vec(l, {{1}, {5}});
  const Vector same = scale_by_multiindex({1.0, 1.0}, u);
  CHECK((same.flat() - u.flat()).norm() == 0.0);
  CHECK(scale_by_multiindex({0.0, 0.0}, u).flat().norm() == 0.0);

  const Vector scaled = scale_by_multiindex({2.0, 0.0}, u);
  CHECK(scaled.comp(0)(0) == 2.0);
  CHECK(scaled.comp(1)(0) == 0.0);
  CHECK_THROWS_AS(scale_by_multiindex({1.0}, u), std::invalid_argument);
}

TEST_CASE("scale_cov_by_multiindex") {
  const SpaceLayout l{2, 1};
  Eigen::VectorXd ev0(2), ev1(1);
  ev0 << 1.0, 0.5;
  ev1 << 2.0;
  const CovOperator q = CovOperator::diagonal(l, {ev0, ev1});
  const CovOperator scaled = q.scale_by_multiindex({2.0, 3.0});
  CHECK(scaled.eigenvalues(0)(0) == 2.0);
  CHECK(scaled.eigenvalues(0)(1) == 1.0);
  CHECK(scaled.eigenvalues(1)(0) == 6.0);
  CHECK_THROWS_AS(q.scale_by_multiindex({-1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("from_matrix eigendecomposition") {
  const SpaceLayout l{2};
  Eigen::MatrixXd m(2, 2);
  m << 2.0, 1.0, 1.0, 2.0;  // eigenvalues 1 and 3
  const CovOperator q = CovOperator::from_matrix(l, {m});
  CHECK(q.trace() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(q.eigenvalues(0)(0) == doctest::Approx(1.0));
  CHECK(q.eigenvalues(0)(1) == doctest::Approx(3.0));
  CHECK((q.to_dense() - m).cwiseAbs().maxCoeff() < 1e-12);

  const Vector u = vec(l, {{1, -1}});
  CHECK(q.quad_form(u) == doctest::Approx(2.0));  // (1,-1) is the ev-1 direction

  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.4, 0.0, 1.0;
  CHECK_THROWS_AS(CovOperator::from_matrix(l, {asym}), std::invalid_argument);
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;  // eigenvalue -1
  CHECK_THROWS_AS(CovOperator::from_matrix(l, {indefinite}),
                  std::invalid_argument);
}

TEST_CASE("cauchy-schwarz and self-adjointness on random vectors") {
  const SpaceLayout l{3, 2};
  Rng rng(2024);
  Eigen::MatrixXd m(2, 2);
  m << 1.5, -0.4, -0.4, 0.8;
  const CovOperator q = CovOperator::from_matrix(
      l, {Eigen::MatrixXd(Eigen::Vector3d(0.9, 0.4, 0.1).asDiagonal()), m});

  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd a(5), b(5);
    for (int k = 0; k < 5; ++k) {
      a(k) = rng.normal();
      b(k) = rng.normal();
    }
    const Vector u = Vector::from_flat(l, a);
    const Vector v = Vector::from_flat(l, b);
    CHECK(std::abs(inner(u, v)) <= u.norm() * v.norm() * (1.0 + 1e-12));
    CHECK(inner(q.apply(u), v) ==
          doctest::Approx(inner(u, q.apply(v))).epsilon(1e-12));
    CHECK(q.quad_form(u) >= 0.0);
  }
}

TEST_CASE("trace equals sum of basis quad forms") {
  const SpaceLayout l{2, 2};
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.3, 0.3, 2.0;
  const CovOperator q = CovOperator::from_matrix(
      l, {m, Eigen::MatrixXd(Eigen::Vector2d(0.7, 0.2).asDiagonal())});
  double total = 0.0;
  for (int j = 0; j < l.d(); ++j)
    for (int k = 0; k < l.dims[static_cast<std::size_t>(j)]; ++k)
      total += q.quad_form(Vector::basis(l, j, k));
  CHECK(total == doctest::Approx(q.trace()).epsilon(1e-12));
}

TEST_CASE("rank-one tensor") {
  const SpaceLayout l{2};
  const Vector x = vec(l, {{1, 2}});
  const Vector y = vec(l, {{3, -1}});
  const Vector z = vec(l, {{0.5, 0.25}});
  const RankOneTensor t{x, y};
  const Vector applied = t.apply(z);
  const double ip = inner(x, z);  // 0.5 + 0.5 = 1
  CHECK(ip == 1.0);
  CHECK(applied.comp(0)(0) == 3.0);
  CHECK(applied.comp(0)(1) == -1.0);
  CHECK(t.bilinear(z, y) == doctest::Approx(ip * inner(y, y)));
}

TEST_CASE("gaussian sampling respects the covariance") {
  const SpaceLayout l{2};
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.6, 0.6, 1.0;
  const CovOperator q = CovOperator::from_matrix(l, {m});
  Rng rng(7);
  const long n = 200000;
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  for (long i = 0; i < n; ++i) {
    const Eigen::VectorXd x = q.sample_gaussian(rng).flat();
    acc += x * x.transpose();
  }
  acc /= static_cast<double>(n);
  // 4-SE tolerance, SE of a covariance entry ~ sqrt(2)/sqrt(n)
  CHECK((acc - m).cwiseAbs().maxCoeff() < 4.0 * 1.5 / std::sqrt(double(n)));
}
