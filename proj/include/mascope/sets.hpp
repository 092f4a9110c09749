#pragma once

// Per-agent constraint sets: axis-aligned boxes and Euclidean balls, with
// exact projection, distance, membership and the box variational-inequality
// test used by the fixed-point diagnostics.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mascope/errors.hpp"
#include "mascope/numeric.hpp"

namespace mascope {

template <typename Scalar>
class BoxSet {
 public:
  BoxSet(Vector<Scalar> lower, Vector<Scalar> upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    require_same_size(lower_, upper_, "BoxSet");
    require_finite(lower_, "BoxSet lower");
    require_finite(upper_, "BoxSet upper");
    if ((lower_.array() > upper_.array()).any()) throw InfeasibilityError("BoxSet: lower > upper");
  }

  /// The cube [lo, hi]^n.
  static BoxSet cube(Eigen::Index n, Scalar lo, Scalar hi) {
    return BoxSet(Vector<Scalar>::Constant(n, lo), Vector<Scalar>::Constant(n, hi));
  }

  const Vector<Scalar>& lower() const { return lower_; }
  const Vector<Scalar>& upper() const { return upper_; }
  Eigen::Index dim() const { return lower_.size(); }

  friend bool operator==(const BoxSet& a, const BoxSet& b) {
    return a.lower_ == b.lower_ && a.upper_ == b.upper_;
  }

 private:
  Vector<Scalar> lower_;
  Vector<Scalar> upper_;
};

template <typename Scalar>
class BallSet {
 public:
  BallSet(Vector<Scalar> center, Scalar radius) : center_(std::move(center)), radius_(radius) {
    require_finite(center_, "BallSet center");
    if (!(radius_ > Scalar(0)) || !std::isfinite(radius_)) throw ParameterError("BallSet: radius must be > 0");
  }

  const Vector<Scalar>& center() const { return center_; }
  Scalar radius() const { return radius_; }
  Eigen::Index dim() const { return center_.size(); }

 private:
  Vector<Scalar> center_;
  Scalar radius_;
};

template <typename Scalar>
using ConstraintSet = std::variant<BoxSet<Scalar>, BallSet<Scalar>>;

using Box = BoxSet<double>;
using Ball = BallSet<double>;
using Set = ConstraintSet<double>;

template <typename Scalar>
Eigen::Index dim(const ConstraintSet<Scalar>& s) {
  return std::visit([](const auto& set) { return set.dim(); }, s);
}

namespace detail {

template <typename Set, typename Derived>
void require_dim(const Set& s, const Eigen::MatrixBase<Derived>& x, const char* where) {
  if (s.dim() != x.size()) {
    throw DimensionError(std::string(where) + ": set dimension " + std::to_string(s.dim()) +
                         " vs point length " + std::to_string(x.size()));
  }
}

}  // namespace detail

template <typename Scalar, typename Derived>
Vector<Scalar> project(const BoxSet<Scalar>& box, const Eigen::MatrixBase<Derived>& x) {
  detail::require_dim(box, x, "project");
  return x.cwiseMax(box.lower()).cwiseMin(box.upper());
}

template <typename Scalar, typename Derived>
Vector<Scalar> project(const BallSet<Scalar>& ball, const Eigen::MatrixBase<Derived>& x) {
  detail::require_dim(ball, x, "project");
  const Vector<Scalar> offset = x - ball.center();
  const Scalar length = offset.norm();
  if (length <= ball.radius()) return x;
  return ball.center() + (ball.radius() / length) * offset;
}

template <typename Scalar, typename Derived>
Vector<Scalar> project(const ConstraintSet<Scalar>& s, const Eigen::MatrixBase<Derived>& x) {
  return std::visit([&](const auto& set) { return project(set, x); }, s);
}

template <typename SetT, typename Derived>
typename Derived::Scalar distance(const SetT& s, const Eigen::MatrixBase<Derived>& x) {
  return (x - project(s, x)).norm();
}

template <typename SetT, typename Derived>
bool contains(const SetT& s, const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar tol) {
  if (tol < 0) throw ParameterError("contains: tolerance must be >= 0");
  return distance(s, x) <= tol;
}

/// True iff g^T (xi - x) >= -tol for every xi in the box. Decided per
/// coordinate: at the lower bound g_j must be >= -tol, at the upper bound
/// g_j <= tol, strictly inside |g_j| <= tol. A coordinate counts as "at a
/// bound" when |x_j - bound| <= tol.
template <typename Scalar, typename DerivedG, typename DerivedX>
bool box_vi_holds(const Eigen::MatrixBase<DerivedG>& g, const Eigen::MatrixBase<DerivedX>& x,
                  const BoxSet<Scalar>& box, Scalar tol = Scalar(1e-9)) {
  detail::require_dim(box, x, "box_vi_holds");
  require_same_size(g, x, "box_vi_holds");
  if (!contains(box, x, tol)) throw PreconditionError("box_vi_holds: point lies outside the box");
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const bool at_lower = std::abs(x[j] - box.lower()[j]) <= tol;
    const bool at_upper = std::abs(x[j] - box.upper()[j]) <= tol;
    if (at_lower && at_upper) continue;  // zero-width coordinate
    if (at_lower) {
      if (g[j] < -tol) return false;
    } else if (at_upper) {
      if (g[j] > tol) return false;
    } else if (std::abs(g[j]) > tol) {
      return false;
    }
  }
  return true;
}

template <typename Scalar>
BoxSet<Scalar> intersect_boxes(std::span<const BoxSet<Scalar>> boxes) {
  if (boxes.empty()) throw ParameterError("intersect_boxes: empty list");
  Vector<Scalar> lower = boxes.front().lower();
  Vector<Scalar> upper = boxes.front().upper();
  for (const auto& b : boxes.subspan(1)) {
    if (b.dim() != lower.size()) throw DimensionError("intersect_boxes: dimension mismatch");
    lower = lower.cwiseMax(b.lower());
    upper = upper.cwiseMin(b.upper());
  }
  if ((lower.array() > upper.array()).any()) throw InfeasibilityError("intersect_boxes: empty intersection");
  return BoxSet<Scalar>(std::move(lower), std::move(upper));
}

template <typename Scalar>
BoxSet<Scalar> intersect_boxes(std::initializer_list<BoxSet<Scalar>> boxes) {
  const std::vector<BoxSet<Scalar>> list(boxes);
  return intersect_boxes(std::span<const BoxSet<Scalar>>(list));
}

template <typename Scalar>
struct InteriorBall {
  Vector<Scalar> center;
  Scalar radius;
};

/// Largest ball centred at the midpoint of the box.
template <typename Scalar>
InteriorBall<Scalar> chebyshev_interior(const BoxSet<Scalar>& box) {
  const Vector<Scalar> width = box.upper() - box.lower();
  if (width.size() == 0 || !(width.minCoeff() > Scalar(0))) {
    throw DegeneracyError("chebyshev_interior: box has zero width in some coordinate");
  }
  return {(box.lower() + box.upper()) / Scalar(2), width.minCoeff() / Scalar(2)};
}

template <typename Scalar>
BoxSet<Scalar> bounding_box(const ConstraintSet<Scalar>& s) {
  if (const auto* box = std::get_if<BoxSet<Scalar>>(&s)) return *box;
  const auto& ball = std::get<BallSet<Scalar>>(s);
  const Vector<Scalar> r = Vector<Scalar>::Constant(ball.dim(), ball.radius());
  return BoxSet<Scalar>(ball.center() - r, ball.center() + r);
}

}  // namespace mascope
