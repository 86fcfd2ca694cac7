#include "sublevy/hilbert.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sublevy {

void SpaceLayout::validate() const {
  if (dims.empty()) throw std::invalid_argument("SpaceLayout: d must be >= 1");
  for (int n : dims)
    if (n < 1) throw std::invalid_argument("SpaceLayout: every n_j must be >= 1");
}

int SpaceLayout::total_dim() const {
  return std::accumulate(dims.begin(), dims.end(), 0);
}

void require_same_layout(const SpaceLayout& a, const SpaceLayout& b,
                         const char* where) {
  if (!(a == b))
    throw std::invalid_argument(std::string(where) + ": layout mismatch");
}

Vector::Vector(SpaceLayout layout, std::vector<Eigen::VectorXd> comps)
    : layout_(std::move(layout)), comps_(std::move(comps)) {
  if (static_cast<int>(comps_.size()) != layout_.d())
    throw std::invalid_argument("Vector: component count mismatch");
  for (int j = 0; j < layout_.d(); ++j)
    if (comps_[j].size() != layout_.dims[j])
      throw std::invalid_argument("Vector: component dimension mismatch");
}

Vector Vector::zero(const SpaceLayout& layout) {
  std::vector<Eigen::VectorXd> comps;
  comps.reserve(layout.d());
  for (int n : layout.dims) comps.push_back(Eigen::VectorXd::Zero(n));
  return Vector(layout, std::move(comps));
}

Vector Vector::basis(const SpaceLayout& layout, int component, int index) {
  Vector v = zero(layout);
  v.comp(component)(index) = 1.0;
  return v;
}

Vector Vector::from_flat(const SpaceLayout& layout, const Eigen::VectorXd& flat) {
  if (flat.size() != layout.total_dim())
    throw std::invalid_argument("Vector::from_flat: size mismatch");
  std::vector<Eigen::VectorXd> comps;
  comps.reserve(layout.d());
  int offset = 0;
  for (int n : layout.dims) {
    comps.push_back(flat.segment(offset, n));
    offset += n;
  }
  return Vector(layout, std::move(comps));
}

Eigen::VectorXd Vector::flat() const {
  Eigen::VectorXd out(layout_.total_dim());
  int offset = 0;
  for (const auto& c : comps_) {
    out.segment(offset, c.size()) = c;
    offset += static_cast<int>(c.size());
  }
  return out;
}

double Vector::squared_norm() const {
  double s = 0.0;
  for (const auto& c : comps_) s += c.squaredNorm();
  return s;
}

double Vector::norm() const { return std::sqrt(squared_norm()); }

Vector& Vector::operator+=(const Vector& other) {
  require_same_layout(layout_, other.layout_, "Vector::operator+=");
  for (int j = 0; j < d(); ++j) comps_[j] += other.comps_[j];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_layout(layout_, other.layout_, "Vector::operator-=");
  for (int j = 0; j < d(); ++j) comps_[j] -= other.comps_[j];
  return *this;
}

Vector& Vector::operator*=(double c) {
  for (auto& comp : comps_) comp *= c;
  return *this;
}

double inner(const Vector& u, const Vector& v) {
  require_same_layout(u.layout(), v.layout(), "inner");
  double s = 0.0;
  for (int j = 0; j < u.d(); ++j) s += u.comp(j).dot(v.comp(j));
  return s;
}

Vector scale_by_multiindex(const std::vector<double>& a, const Vector& u) {
  if (static_cast<int>(a.size()) != u.d())
    throw std::invalid_argument("scale_by_multiindex: length of a must be d");
  Vector out = u;
  for (int j = 0; j < u.d(); ++j) out.comp(j) *= a[j];
  return out;
}

CovOperator CovOperator::diagonal(SpaceLayout layout,
                                  std::vector<Eigen::VectorXd> eigenvalues) {
  CovOperator q;
  q.layout_ = std::move(layout);
  q.eigenvalues_ = std::move(eigenvalues);
  if (static_cast<int>(q.eigenvalues_.size()) != q.layout_.d())
    throw std::invalid_argument("CovOperator: component count mismatch");
  for (int j = 0; j < q.layout_.d(); ++j) {
    if (q.eigenvalues_[j].size() != q.layout_.dims[j])
      throw std::invalid_argument("CovOperator: eigenvalue array size mismatch");
    if ((q.eigenvalues_[j].array() < 0.0).any())
      throw std::invalid_argument("CovOperator: eigenvalues must be >= 0");
  }
  q.basis_.assign(q.layout_.d(), std::nullopt);
  return q;
}

CovOperator CovOperator::identity(const SpaceLayout& layout) {
  std::vector<Eigen::VectorXd> ev;
  for (int n : layout.dims) ev.push_back(Eigen::VectorXd::Ones(n));
  return diagonal(layout, std::move(ev));
}

CovOperator CovOperator::zero(const SpaceLayout& layout) {
  std::vector<Eigen::VectorXd> ev;
  for (int n : layout.dims) ev.push_back(Eigen::VectorXd::Zero(n));
  return diagonal(layout, std::move(ev));
}

CovOperator CovOperator::from_matrix(SpaceLayout layout,
                                     std::vector<Eigen::MatrixXd> matrices) {
  if (static_cast<int>(matrices.size()) != layout.d())
    throw std::invalid_argument("CovOperator::from_matrix: component count mismatch");
  CovOperator q;
  q.layout_ = std::move(layout);
  q.eigenvalues_.resize(q.layout_.d());
  q.basis_.resize(q.layout_.d());
  for (int j = 0; j < q.layout_.d(); ++j) {
    const auto& m = matrices[j];
    const int n = q.layout_.dims[j];
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("CovOperator::from_matrix: matrix size mismatch");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw std::invalid_argument("CovOperator::from_matrix: matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    Eigen::VectorXd ev = solver.eigenvalues();
    if ((ev.array() < -1e-10 * scale).any())
      throw std::invalid_argument("CovOperator::from_matrix: matrix not PSD");
    ev = ev.cwiseMax(0.0);
    q.eigenvalues_[j] = ev;
    q.basis_[j] = solver.eigenvectors();
  }
  return q;
}

Vector CovOperator::apply(const Vector& u) const {
  require_same_layout(layout_, u.layout(), "CovOperator::apply");
  Vector out = u;
  for (int j = 0; j < layout_.d(); ++j) {
    if (basis_[j]) {
      const Eigen::MatrixXd& v = *basis_[j];
      out.comp(j) = v * (eigenvalues_[j].asDiagonal() * (v.transpose() * u.comp(j)));
    } else {
      out.comp(j) = eigenvalues_[j].cwiseProduct(u.comp(j));
    }
  }
  return out;
}

double CovOperator::quad_form(const Vector& u) const {
  require_same_layout(layout_, u.layout(), "CovOperator::quad_form");
  double s = 0.0;
  for (int j = 0; j < layout_.d(); ++j) {
    if (basis_[j]) {
      const Eigen::VectorXd w = basis_[j]->transpose() * u.comp(j);
      s += (eigenvalues_[j].array() * w.array().square()).sum();
    } else {
      s += (eigenvalues_[j].array() * u.comp(j).array().square()).sum();
    }
  }
  return s;
}

double CovOperator::trace() const {
  double s = 0.0;
  for (const auto& ev : eigenvalues_) s += ev.sum();
  return s;
}

double CovOperator::component_trace(int j) const { return eigenvalues_[j].sum(); }

bool CovOperator::is_zero() const {
  for (const auto& ev : eigenvalues_)
    if ((ev.array() != 0.0).any()) return false;
  return true;
}

CovOperator CovOperator::scale_by_multiindex(const std::vector<double>& a) const {
  if (static_cast<int>(a.size()) != layout_.d())
    throw std::invalid_argument("CovOperator::scale_by_multiindex: length of a must be d");
  CovOperator out = *this;
  for (int j = 0; j < layout_.d(); ++j) {
    if (a[j] < 0.0)
      throw std::invalid_argument("CovOperator::scale_by_multiindex: a must be >= 0");
    out.eigenvalues_[j] *= a[j];
  }
  return out;
}

Vector CovOperator::sample_gaussian(Rng& rng) const {
  Vector out = Vector::zero(layout_);
  for (int j = 0; j < layout_.d(); ++j)
    out.comp(j) = sample_gaussian_component(j, rng);
  return out;
}

Eigen::VectorXd CovOperator::sample_gaussian_component(int j, Rng& rng) const {
  Eigen::VectorXd z(layout_.dims[j]);
  for (int k = 0; k < z.size(); ++k)
    z(k) = eigenvalues_[j](k) > 0.0
               ? std::sqrt(eigenvalues_[j](k)) * rng.normal()
               : 0.0;
  return basis_[j] ? Eigen::VectorXd(*basis_[j] * z) : z;
}

Eigen::MatrixXd CovOperator::to_dense() const {
  const int n = layout_.total_dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  int offset = 0;
  for (int j = 0; j < layout_.d(); ++j) {
    const int nj = layout_.dims[j];
    if (basis_[j]) {
      out.block(offset, offset, nj, nj) =
          *basis_[j] * eigenvalues_[j].asDiagonal() * basis_[j]->transpose();
    } else {
      out.block(offset, offset, nj, nj) = eigenvalues_[j].asDiagonal();
    }
    offset += nj;
  }
  return out;
}

Vector RankOneTensor::apply(const Vector& z) const {
  Vector out = y;
  out *= inner(x, z);
  return out;
}

double RankOneTensor::bilinear(const Vector& u, const Vector& v) const {
  return inner(x, u) * inner(y, v);
}

}  // namespace sublevy
