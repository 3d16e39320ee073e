#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "twistlab/errors.hpp"
#include "twistlab/rng.hpp"

namespace twistlab {

/// Quaternion with no norm constraint, coordinates (w, x, y, z) in the
/// basis {1, i, j, k}. Used for differences, gradients and other
/// intermediate arithmetic; points of SU(2) are wrapped in
/// UnitQuaternion below.
struct Quat {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  constexpr Quat() = default;
  constexpr Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  constexpr Quat operator+(const Quat& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
  constexpr Quat operator-(const Quat& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
  constexpr Quat operator-() const { return {-w, -x, -y, -z}; }
  constexpr Quat operator*(double s) const { return {w * s, x * s, y * s, z * s}; }

  /// Hamilton product.
  constexpr Quat operator*(const Quat& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }

  constexpr Quat conj() const { return {w, -x, -y, -z}; }
  double norm() const;
  constexpr double norm_sq() const { return w * w + x * x + y * y + z * z; }

  Eigen::Vector4d vec() const { return {w, x, y, z}; }
  static Quat from_vec(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
};

/// Euclidean scalar product of R^4; bi-invariant for the two-sided
/// multiplication action of unit quaternions.
constexpr double inner(const Quat& a, const Quat& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Vector in the imaginary subspace span{i, j, k}.
struct ImaginaryVector {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr ImaginaryVector() = default;
  constexpr ImaginaryVector(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  double norm() const;
  constexpr double dot(const ImaginaryVector& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr ImaginaryVector cross(const ImaginaryVector& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  constexpr ImaginaryVector operator-(const ImaginaryVector& o) const {
    return {x - o.x, y - o.y, z - o.z};
  }
  constexpr ImaginaryVector operator*(double s) const { return {x * s, y * s, z * s}; }
  Quat quat() const { return {0.0, x, y, z}; }
};

inline ImaginaryVector imaginary_part(const Quat& q) { return {q.x, q.y, q.z}; }

/// Point of SU(2) as a unit quaternion. The norm is restored after every
/// product so chained arithmetic cannot drift off the sphere.
class UnitQuaternion {
 public:
  /// Identity element.
  constexpr UnitQuaternion() : q_(1.0, 0.0, 0.0, 0.0) {}

  /// Normalizes the argument. Throws InvalidArgument below norm 1e-9.
  explicit UnitQuaternion(const Quat& q);

  UnitQuaternion(double w, double x, double y, double z) : UnitQuaternion(Quat{w, x, y, z}) {}

  /// Adopts components verbatim after checking they are unit within tol;
  /// used where bit-exact round-trips matter. Throws InvalidArgument.
  static UnitQuaternion from_unit(const Quat& q, double tol = 1e-12);

  static UnitQuaternion identity() { return UnitQuaternion(); }
  static constexpr UnitQuaternion i() { return from_unit_unchecked({0, 1, 0, 0}); }
  static constexpr UnitQuaternion j() { return from_unit_unchecked({0, 0, 1, 0}); }
  static constexpr UnitQuaternion k() { return from_unit_unchecked({0, 0, 0, 1}); }
  static UnitQuaternion minus_one() { return from_unit_unchecked({-1, 0, 0, 0}); }

  const Quat& value() const { return q_; }
  double w() const { return q_.w; }
  double x() const { return q_.x; }
  double y() const { return q_.y; }
  double z() const { return q_.z; }

  UnitQuaternion inverse() const { return from_unit_unchecked(q_.conj()); }
  UnitQuaternion operator-() const { return from_unit_unchecked(-q_); }

  friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
    return UnitQuaternion(a.q_ * b.q_);
  }

  /// Integer power, negative exponents via the inverse.
  UnitQuaternion pow(long n) const;

  bool near(const UnitQuaternion& o, double tol) const { return (q_ - o.q_).norm() <= tol; }

  /// Distance to the closer of +1 and -1.
  double distance_to_center() const;

  operator const Quat&() const { return q_; }

 private:
  static constexpr UnitQuaternion from_unit_unchecked(const Quat& q) {
    UnitQuaternion u;
    u.q_ = q;
    return u;
  }

  Quat q_;
};

/// tr(q) under the SU(2) identification, i.e. twice the real part.
inline double trace(const UnitQuaternion& q) { return 2.0 * q.w(); }
inline double trace(const Quat& q) { return 2.0 * q.w; }

/// Rotation angle theta(q) = arccos(tr(q)/2), in [0, pi].
double theta(const UnitQuaternion& q);

/// Unit imaginary axis of q. Throws AxisUndefined when q = +-1 within 1e-12.
ImaginaryVector axis(const UnitQuaternion& q);

/// One-parameter subgroup through q at unit angular speed:
/// t -> cos(t) + sin(t) axis(q). Satisfies one_param(q, theta(q)) = q and
/// is 2*pi periodic. Throws AxisUndefined for central q.
UnitQuaternion one_param(const UnitQuaternion& q, double t);

/// A point of the solution circle {X : X p X^-1 = q}, parameterized as
/// X0 * one_param(p, angle) where X0 is a fixed base solution (X0 = 1
/// when p = q). Requires equal traces within 1e-9 (TraceMismatch) and
/// non-central p (DegenerateCenter: the solution set is all of SU(2)
/// there and the caller should draw a Haar sample instead).
UnitQuaternion conj_solve(const UnitQuaternion& p, const UnitQuaternion& q, double angle);

/// 4x4 matrix of X -> q * X in the basis {1, i, j, k}.
Eigen::Matrix4d left_mult_matrix(const Quat& q);
/// 4x4 matrix of X -> X * q.
Eigen::Matrix4d right_mult_matrix(const Quat& q);

/// Orthogonal map of the quaternions in the basis {1, i, j, k}.
struct Isometry4 {
  Eigen::Matrix4d m;
  int det = +1;  // +1 or -1

  /// Validates orthogonality ((M^T)M = Id within 1e-10) and reads off the
  /// determinant sign. Throws InvalidArgument otherwise.
  static Isometry4 from_matrix(const Eigen::Matrix4d& m);

  Quat apply(const Quat& q) const { return Quat::from_vec(m * q.vec()); }
};

/// The linear map X -> aI * X * aJ^-1 - X together with its numerical
/// rank and kernel/image bases (singular value tolerance 1e-9).
struct PhiMap {
  Eigen::Matrix4d matrix;
  int rank = 0;
  std::vector<Eigen::Vector4d> kernel;
  std::vector<Eigen::Vector4d> image;
  Eigen::Vector4d singular_values;
};

PhiMap phi_map(const UnitQuaternion& aI, const UnitQuaternion& aJ);

/// Isoclinic factorization of an orientation-preserving isometry:
/// returns unit (p, q) with phi(X) = p * X * q for all X, unique up to a
/// global sign. Throws NotSpecialOrthogonal when det(phi) != +1 or the
/// induced coefficient matrix is not a rank-one tensor.
std::pair<UnitQuaternion, UnitQuaternion> so4_factor(const Isometry4& phi);

/// Haar-uniform sample of SU(2): normalized 4D gaussian vector.
UnitQuaternion haar(RandomStream& rng);

/// Haar sample of the great sphere {X unit : inner(X, n) = 0}; n need not
/// be normalized. Throws Degenerate when n is numerically zero.
UnitQuaternion haar_orthogonal(RandomStream& rng, const Quat& n);

/// Line through a nonzero imaginary vector. Construction rejects
/// representatives below norm 1e-9 (Degenerate); comparison is the
/// sign-free angular distance arccos(|<u,v>| / (|u||v|)).
class ProjectiveDirection {
 public:
  explicit ProjectiveDirection(const ImaginaryVector& rep);

  const ImaginaryVector& representative() const { return rep_; }

  /// Angular distance in [0, pi/2].
  double angular_distance(const ProjectiveDirection& o) const;

 private:
  ImaginaryVector rep_;
};

}  // namespace twistlab
