#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <optional>
#include <vector>

#include "sublevy/rng.hpp"

namespace sublevy {

/// Truncation of H = H_1 x ... x H_d: component count d and the truncation
/// dimension n_j of each component space (fixed orthonormal basis each).
struct SpaceLayout {
  std::vector<int> dims;

  SpaceLayout() = default;
  SpaceLayout(std::initializer_list<int> n) : dims(n) { validate(); }
  explicit SpaceLayout(std::vector<int> n) : dims(std::move(n)) { validate(); }

  int d() const { return static_cast<int>(dims.size()); }
  int total_dim() const;
  bool operator==(const SpaceLayout&) const = default;

 private:
  void validate() const;
};

/// Element of the truncated H, stored as one coefficient vector per component.
class Vector {
 public:
  Vector() = default;
  Vector(SpaceLayout layout, std::vector<Eigen::VectorXd> comps);

  static Vector zero(const SpaceLayout& layout);
  /// Basis vector e_{component,index}.
  static Vector basis(const SpaceLayout& layout, int component, int index);
  static Vector from_flat(const SpaceLayout& layout,
                          const Eigen::VectorXd& flat);

  const SpaceLayout& layout() const { return layout_; }
  int d() const { return layout_.d(); }
  const Eigen::VectorXd& comp(int j) const { return comps_[j]; }
  Eigen::VectorXd& comp(int j) { return comps_[j]; }

  /// Concatenation of the component coefficients (component order).
  Eigen::VectorXd flat() const;

  double squared_norm() const;
  double norm() const;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double c);
  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(double c, Vector v) { return v *= c; }

 private:
  SpaceLayout layout_;
  std::vector<Eigen::VectorXd> comps_;
};

/// <u|v> = sum_j <u_j|v_j>_j.
double inner(const Vector& u, const Vector& v);

/// Componentwise scaling au = (a_1 u_1, ..., a_d u_d), a in R^d.
Vector scale_by_multiindex(const std::vector<double>& a, const Vector& u);

/// Positive semi-definite trace-class operator, stored spectrally: one
/// eigenvalue array per component plus an optional orthonormal eigenbasis
/// (absent means the operator is diagonal in the working basis). Dense
/// symmetric PSD input is accepted and eigendecomposed once at construction;
/// everything downstream only touches the spectral form.
class CovOperator {
 public:
  CovOperator() = default;

  static CovOperator diagonal(SpaceLayout layout,
                              std::vector<Eigen::VectorXd> eigenvalues);
  static CovOperator identity(const SpaceLayout& layout);
  static CovOperator zero(const SpaceLayout& layout);
  /// Eigendecomposes each component matrix. Rejects non-symmetric input and
  /// eigenvalues below -1e-10 * max; small negatives are clamped to zero.
  static CovOperator from_matrix(SpaceLayout layout,
                                 std::vector<Eigen::MatrixXd> matrices);

  const SpaceLayout& layout() const { return layout_; }
  const Eigen::VectorXd& eigenvalues(int j) const { return eigenvalues_[j]; }
  /// Orthonormal eigenbasis of component j (nullopt = working basis).
  const std::optional<Eigen::MatrixXd>& basis(int j) const { return basis_[j]; }

  Vector apply(const Vector& u) const;
  /// <Qu|u> >= 0.
  double quad_form(const Vector& u) const;
  double trace() const;
  double component_trace(int j) const;
  bool is_zero() const;

  /// aQ = a_1 Q_1 x ... x a_d Q_d for a in R_+^d.
  CovOperator scale_by_multiindex(const std::vector<double>& a) const;

  /// Draw N(0, Q) using the spectral square root.
  Vector sample_gaussian(Rng& rng) const;
  /// Draw the component-j marginal N(0, Q_j).
  Eigen::VectorXd sample_gaussian_component(int j, Rng& rng) const;

  /// Dense block-diagonal matrix on the flattened space (test/report use).
  Eigen::MatrixXd to_dense() const;

 private:
  SpaceLayout layout_;
  std::vector<Eigen::VectorXd> eigenvalues_;
  std::vector<std::optional<Eigen::MatrixXd>> basis_;
};

/// x (x) y : z -> <x|z> y.
struct RankOneTensor {
  Vector x;
  Vector y;

  Vector apply(const Vector& z) const;
  /// <(x(x)y) u | v> = <x|u><y|v>.
  double bilinear(const Vector& u, const Vector& v) const;
};

void require_same_layout(const SpaceLayout& a, const SpaceLayout& b,
                         const char* where);

}  // namespace sublevy
