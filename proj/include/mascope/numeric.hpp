#pragma once

// Dense vector/matrix arithmetic shared by every module. Storage is Eigen;
// the free functions add the dimension and finiteness checks the rest of
// the library relies on.

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <string>

#include "mascope/errors.hpp"

namespace mascope {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

template <typename Scalar>
Vector<Scalar> make_vector(std::initializer_list<Scalar> entries) {
  Vector<Scalar> v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index j = 0;
  for (Scalar e : entries) {
    if (!std::isfinite(e)) throw NonFiniteError("make_vector: non-finite entry");
    v[j++] = e;
  }
  return v;
}

inline VectorXd vec(std::initializer_list<double> entries) { return make_vector<double>(entries); }

/// Row-major construction from nested initializer lists.
template <typename Scalar>
Matrix<Scalar> make_matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.begin()->size());
  Matrix<Scalar> m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != c) throw DimensionError("make_matrix: ragged rows");
    Eigen::Index j = 0;
    for (Scalar e : row) {
      if (!std::isfinite(e)) throw NonFiniteError("make_matrix: non-finite entry");
      m(i, j++) = e;
    }
    ++i;
  }
  return m;
}

inline MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  return make_matrix<double>(rows);
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& a) {
  return a.allFinite();
}

/// Throws NonFiniteError when any entry is NaN or infinite.
template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& a, const std::string& what) {
  if (!a.allFinite()) throw NonFiniteError(what + ": non-finite entry");
}

template <typename DerivedA, typename DerivedB>
void require_same_size(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                       const char* where) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(where) + ": length " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dot(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  require_same_size(a, b, "dot");
  return a.dot(b);
}

template <typename Derived>
typename Derived::Scalar norm2(const Eigen::MatrixBase<Derived>& a) {
  return a.norm();
}

template <typename Derived>
typename Derived::Scalar norm1(const Eigen::MatrixBase<Derived>& a) {
  return a.template lpNorm<1>();
}

template <typename DerivedM, typename DerivedX>
Vector<typename DerivedM::Scalar> matvec(const Eigen::MatrixBase<DerivedM>& m,
                                         const Eigen::MatrixBase<DerivedX>& x) {
  if (m.cols() != x.size()) {
    throw DimensionError("matvec: " + std::to_string(m.cols()) + " columns vs length " +
                         std::to_string(x.size()));
  }
  return m * x;
}

/// Solves m·x = b by LU with partial pivoting. A pivot below
/// 1e-12·max|m_ij| is treated as singular.
template <typename DerivedM, typename DerivedB>
Vector<typename DerivedM::Scalar> solve_linear(const Eigen::MatrixBase<DerivedM>& m,
                                               const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedM::Scalar;
  if (m.rows() != m.cols()) throw DimensionError("solve_linear: matrix is not square");
  if (m.rows() != b.size()) throw DimensionError("solve_linear: right-hand side length mismatch");
  if (m.rows() == 0) return Vector<Scalar>(0);
  const Scalar scale = m.cwiseAbs().maxCoeff();
  if (!(scale > Scalar(0))) throw SingularityError("solve_linear: zero matrix");
  const Eigen::PartialPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(m);
  const Scalar min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < Scalar(1e-12) * scale) throw SingularityError("solve_linear: matrix is singular");
  return lu.solve(b);
}

}  // namespace mascope
