#pragma once

// Objective oracles: function value and one subgradient at a query point.
// At kinks the zero element is selected (sign(0) = 0) so that every engine
// sees the same subgradient for the same point.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "mascope/errors.hpp"
#include "mascope/numeric.hpp"
#include "mascope/rng.hpp"
#include "mascope/sets.hpp"

namespace mascope {

template <typename Scalar>
Scalar sign0(Scalar v) {
  return v > Scalar(0) ? Scalar(1) : (v < Scalar(0) ? Scalar(-1) : Scalar(0));
}

/// x^T Q x + q^T x + r with symmetric Q.
template <typename Scalar>
class QuadraticFn {
 public:
  QuadraticFn(Matrix<Scalar> Q, Vector<Scalar> q, Scalar r) : Q_(std::move(Q)), q_(std::move(q)), r_(r) {
    if (Q_.rows() != Q_.cols() || Q_.rows() != q_.size()) throw DimensionError("QuadraticFn: shape mismatch");
    require_finite(Q_, "QuadraticFn Q");
    require_finite(q_, "QuadraticFn q");
    if (!std::isfinite(r_)) throw NonFiniteError("QuadraticFn r");
    if (Q_.rows() > 0 && (Q_ - Q_.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12)) {
      throw ParameterError("QuadraticFn: Q is not symmetric");
    }
  }

  const Matrix<Scalar>& Q() const { return Q_; }
  const Vector<Scalar>& q() const { return q_; }
  Scalar r() const { return r_; }
  Eigen::Index dim() const { return q_.size(); }

 private:
  Matrix<Scalar> Q_;
  Vector<Scalar> q_;
  Scalar r_;
};

/// |y - b^T x|
template <typename Scalar>
class AbsResidualFn {
 public:
  AbsResidualFn(Vector<Scalar> b, Scalar y) : b_(std::move(b)), y_(y) {
    require_finite(b_, "AbsResidualFn b");
    if (!std::isfinite(y_)) throw NonFiniteError("AbsResidualFn y");
  }
  const Vector<Scalar>& b() const { return b_; }
  Scalar y() const { return y_; }
  Eigen::Index dim() const { return b_.size(); }

 private:
  Vector<Scalar> b_;
  Scalar y_;
};

/// (y - b^T x)^2
template <typename Scalar>
class SquaredResidualFn {
 public:
  SquaredResidualFn(Vector<Scalar> b, Scalar y) : b_(std::move(b)), y_(y) {
    require_finite(b_, "SquaredResidualFn b");
    if (!std::isfinite(y_)) throw NonFiniteError("SquaredResidualFn y");
  }
  const Vector<Scalar>& b() const { return b_; }
  Scalar y() const { return y_; }
  Eigen::Index dim() const { return b_.size(); }

 private:
  Vector<Scalar> b_;
  Scalar y_;
};

/// weight * ||x||_1. Accepts points of any length.
template <typename Scalar>
class L1RegFn {
 public:
  explicit L1RegFn(Scalar weight) : weight_(weight) {
    if (!(weight_ >= Scalar(0)) || !std::isfinite(weight_)) throw ParameterError("L1RegFn: weight must be >= 0");
  }
  Scalar weight() const { return weight_; }

 private:
  Scalar weight_;
};

template <typename Scalar>
class Objective;

template <typename Scalar>
class SumFn {
 public:
  explicit SumFn(std::vector<Objective<Scalar>> terms);
  const std::vector<Objective<Scalar>>& terms() const { return terms_; }
  /// Common dimension, or nullopt when every term is dimension-free.
  std::optional<Eigen::Index> dim() const { return dim_; }

 private:
  std::vector<Objective<Scalar>> terms_;
  std::optional<Eigen::Index> dim_;
};

template <typename Scalar>
class Objective {
 public:
  using Variant = std::variant<QuadraticFn<Scalar>, AbsResidualFn<Scalar>, SquaredResidualFn<Scalar>,
                               L1RegFn<Scalar>, SumFn<Scalar>>;

  template <typename Fn>
    requires(!std::is_same_v<std::decay_t<Fn>, Objective> && std::is_constructible_v<Variant, Fn &&>)
  Objective(Fn&& fn) : fn_(std::forward<Fn>(fn)) {}  // NOLINT: implicit by intent

  const Variant& variant() const { return fn_; }

  std::optional<Eigen::Index> dim() const {
    return std::visit(
        [](const auto& f) -> std::optional<Eigen::Index> {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, L1RegFn<Scalar>>) {
            return std::nullopt;
          } else {
            return f.dim();
          }
        },
        fn_);
  }

 private:
  Variant fn_;
};

template <typename Scalar>
SumFn<Scalar>::SumFn(std::vector<Objective<Scalar>> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ParameterError("SumFn: no terms");
  for (const auto& t : terms_) {
    const auto d = t.dim();
    if (!d) continue;
    if (dim_ && *dim_ != *d) throw DimensionError("SumFn: terms disagree on dimension");
    dim_ = d;
  }
}

namespace detail {

template <typename Scalar, typename Derived>
void require_objective_dim(const Objective<Scalar>& f, const Eigen::MatrixBase<Derived>& x) {
  const auto d = f.dim();
  if (d && *d != x.size()) {
    throw DimensionError("objective: dimension " + std::to_string(*d) + " vs point length " +
                         std::to_string(x.size()));
  }
}

}  // namespace detail

template <typename Scalar, typename Derived>
Scalar value(const Objective<Scalar>& f, const Eigen::MatrixBase<Derived>& x) {
  detail::require_objective_dim(f, x);
  return std::visit(
      [&](const auto& fn) -> Scalar {
        using F = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<F, QuadraticFn<Scalar>>) {
          return x.dot(fn.Q() * x) + fn.q().dot(x) + fn.r();
        } else if constexpr (std::is_same_v<F, AbsResidualFn<Scalar>>) {
          return std::abs(fn.y() - fn.b().dot(x));
        } else if constexpr (std::is_same_v<F, SquaredResidualFn<Scalar>>) {
          const Scalar res = fn.y() - fn.b().dot(x);
          return res * res;
        } else if constexpr (std::is_same_v<F, L1RegFn<Scalar>>) {
          return fn.weight() * x.template lpNorm<1>();
        } else {
          Scalar total = 0;
          for (const auto& t : fn.terms()) total += value(t, x);
          return total;
        }
      },
      f.variant());
}

template <typename Scalar, typename Derived>
Vector<Scalar> subgrad(const Objective<Scalar>& f, const Eigen::MatrixBase<Derived>& x) {
  detail::require_objective_dim(f, x);
  return std::visit(
      [&](const auto& fn) -> Vector<Scalar> {
        using F = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<F, QuadraticFn<Scalar>>) {
          return Scalar(2) * (fn.Q() * x) + fn.q();
        } else if constexpr (std::is_same_v<F, AbsResidualFn<Scalar>>) {
          return -sign0(fn.y() - fn.b().dot(x)) * fn.b();
        } else if constexpr (std::is_same_v<F, SquaredResidualFn<Scalar>>) {
          return Scalar(-2) * (fn.y() - fn.b().dot(x)) * fn.b();
        } else if constexpr (std::is_same_v<F, L1RegFn<Scalar>>) {
          return fn.weight() * x.unaryExpr([](Scalar v) { return sign0(v); });
        } else {
          Vector<Scalar> total = Vector<Scalar>::Zero(x.size());
          for (const auto& t : fn.terms()) total += subgrad(t, x);
          return total;
        }
      },
      f.variant());
}

/// Lipschitz constant of the gradient when f is smooth and quadratic
/// (2||Q||_F, summed over terms), nullopt when f has a kink.
template <typename Scalar>
std::optional<Scalar> smooth_curvature(const Objective<Scalar>& f) {
  return std::visit(
      [](const auto& fn) -> std::optional<Scalar> {
        using F = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<F, QuadraticFn<Scalar>>) {
          return Scalar(2) * fn.Q().norm();
        } else if constexpr (std::is_same_v<F, SquaredResidualFn<Scalar>>) {
          return Scalar(2) * fn.b().squaredNorm();
        } else if constexpr (std::is_same_v<F, L1RegFn<Scalar>>) {
          if (fn.weight() == Scalar(0)) return Scalar(0);
          return std::nullopt;
        } else if constexpr (std::is_same_v<F, AbsResidualFn<Scalar>>) {
          return std::nullopt;
        } else {
          Scalar total = 0;
          for (const auto& t : fn.terms()) {
            const auto c = smooth_curvature(t);
            if (!c) return std::nullopt;
            total += *c;
          }
          return total;
        }
      },
      f.variant());
}

/// Sampling lower estimate of max ||subgrad f|| over the set: uniform draws
/// in the set's bounding box, projected onto the set.
template <typename Scalar>
Scalar lipschitz_estimate(const Objective<Scalar>& f, const ConstraintSet<Scalar>& s, std::size_t samples,
                          std::uint64_t seed) {
  if (samples == 0) throw ParameterError("lipschitz_estimate: samples must be >= 1");
  const BoxSet<Scalar> bounds = bounding_box(s);
  SplitMix64 rng(seed);
  Vector<Scalar> point(bounds.dim());
  Scalar best = 0;
  for (std::size_t n = 0; n < samples; ++n) {
    for (Eigen::Index j = 0; j < point.size(); ++j) {
      point[j] = static_cast<Scalar>(rng.uniform(static_cast<double>(bounds.lower()[j]),
                                                 static_cast<double>(bounds.upper()[j])));
    }
    best = std::max(best, subgrad(f, project(s, point)).norm());
  }
  return best;
}

/// Positive semidefiniteness test through a pivoted LDL^T factorisation.
template <typename Scalar>
bool is_positive_semidefinite(const Matrix<Scalar>& Q, Scalar tol = Scalar(1e-12)) {
  if (Q.rows() == 0) return true;
  const Eigen::LDLT<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> ldlt(Q);
  if (ldlt.info() != Eigen::Success) return false;
  return ldlt.vectorD().minCoeff() >= -tol * std::max(Scalar(1), Q.cwiseAbs().maxCoeff());
}

}  // namespace mascope
