#include "twistlab/quat.hpp"

#include <algorithm>
#include <cmath>

namespace twistlab {

namespace {
constexpr double kAxisTol = 1e-12;
constexpr double kTraceTol = 1e-9;
constexpr double kRankTol = 1e-9;
}  // namespace

double Quat::norm() const { return std::sqrt(norm_sq()); }

double ImaginaryVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

UnitQuaternion::UnitQuaternion(const Quat& q) {
  double n2 = q.norm_sq();
  // products of unit factors drift from the sphere by a few ulp at most;
  // rescaling there would only shuffle the last bit
  if (std::abs(n2 - 1.0) <= 4e-15) {
    q_ = q;
    return;
  }
  if (n2 < 1e-18) {
    raise(ErrorCode::InvalidArgument,
          "cannot normalize quaternion of norm " + std::to_string(std::sqrt(n2)));
  }
  q_ = q * (1.0 / std::sqrt(n2));
}

UnitQuaternion UnitQuaternion::from_unit(const Quat& q, double tol) {
  if (std::abs(q.norm() - 1.0) > tol) {
    raise(ErrorCode::InvalidArgument,
          "components are not unit within " + std::to_string(tol));
  }
  return from_unit_unchecked(q);
}

UnitQuaternion UnitQuaternion::pow(long n) const {
  UnitQuaternion base = n < 0 ? inverse() : *this;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  UnitQuaternion acc;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

double UnitQuaternion::distance_to_center() const {
  double dp = (q_ - Quat{1, 0, 0, 0}).norm();
  double dm = (q_ + Quat{1, 0, 0, 0}).norm();
  return std::min(dp, dm);
}

double theta(const UnitQuaternion& q) {
  return std::acos(std::clamp(q.w(), -1.0, 1.0));
}

ImaginaryVector axis(const UnitQuaternion& q) {
  ImaginaryVector im = imaginary_part(q.value());
  double n = im.norm();
  if (n < kAxisTol) {
    raise(ErrorCode::AxisUndefined, "axis of a central element (trace " + std::to_string(trace(q)) + ")");
  }
  return im * (1.0 / n);
}

UnitQuaternion one_param(const UnitQuaternion& q, double t) {
  ImaginaryVector ax = axis(q);
  double c = std::cos(t), s = std::sin(t);
  return UnitQuaternion(Quat{c, s * ax.x, s * ax.y, s * ax.z});
}

UnitQuaternion conj_solve(const UnitQuaternion& p, const UnitQuaternion& q, double angle) {
  if (std::abs(trace(p) - trace(q)) >= kTraceTol) {
    raise(ErrorCode::TraceMismatch,
          "tr(p) = " + std::to_string(trace(p)) + ", tr(q) = " + std::to_string(trace(q)));
  }
  if (p.distance_to_center() < kAxisTol) {
    raise(ErrorCode::DegenerateCenter, "p central, every X conjugates p to q");
  }
  ImaginaryVector u = axis(p);
  ImaginaryVector v = axis(q);

  // Base solution: the rotation carrying axis(p) to axis(q). The circle
  // is swept by the centralizer of p on the right.
  UnitQuaternion base;
  double d = u.dot(v);
  ImaginaryVector c = u.cross(v);
  double cn = c.norm();
  if (1.0 + d > 1e-12 || cn > 1e-12) {
    base = UnitQuaternion(Quat{1.0 + d, c.x, c.y, c.z});
  } else {
    // v = -u: any direction orthogonal to u gives a half-turn solution
    ImaginaryVector seed = std::abs(u.x) < 0.9 ? ImaginaryVector{1, 0, 0} : ImaginaryVector{0, 1, 0};
    ImaginaryVector n = u.cross(seed);
    n = n * (1.0 / n.norm());
    base = UnitQuaternion(Quat{0.0, n.x, n.y, n.z});
  }
  return base * one_param(p, angle);
}

Eigen::Matrix4d left_mult_matrix(const Quat& q) {
  Eigen::Matrix4d m;
  // columns are q * e_k
  m << q.w, -q.x, -q.y, -q.z,
       q.x,  q.w, -q.z,  q.y,
       q.y,  q.z,  q.w, -q.x,
       q.z, -q.y,  q.x,  q.w;
  return m;
}

Eigen::Matrix4d right_mult_matrix(const Quat& q) {
  Eigen::Matrix4d m;
  // columns are e_k * q
  m << q.w, -q.x, -q.y, -q.z,
       q.x,  q.w,  q.z, -q.y,
       q.y, -q.z,  q.w,  q.x,
       q.z,  q.y, -q.x,  q.w;
  return m;
}

Isometry4 Isometry4::from_matrix(const Eigen::Matrix4d& m) {
  double defect = (m.transpose() * m - Eigen::Matrix4d::Identity()).norm();
  if (defect > 1e-10) {
    raise(ErrorCode::InvalidArgument, "matrix is not orthogonal, defect " + std::to_string(defect));
  }
  Isometry4 iso;
  iso.m = m;
  iso.det = m.determinant() > 0.0 ? +1 : -1;
  return iso;
}

PhiMap phi_map(const UnitQuaternion& aI, const UnitQuaternion& aJ) {
  PhiMap out;
  out.matrix = left_mult_matrix(aI.value()) * right_mult_matrix(aJ.inverse().value()) -
               Eigen::Matrix4d::Identity();
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(out.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  double scale = std::max(1.0, out.singular_values[0]);
  for (int k = 0; k < 4; ++k) {
    if (out.singular_values[k] > kRankTol * scale) ++out.rank;
  }
  for (int k = 0; k < 4; ++k) {
    if (k < out.rank) {
      out.image.push_back(svd.matrixU().col(k));
    } else {
      out.kernel.push_back(svd.matrixV().col(k));
    }
  }
  return out;
}

std::pair<UnitQuaternion, UnitQuaternion> so4_factor(const Isometry4& phi) {
  if (phi.det != +1) {
    raise(ErrorCode::NotSpecialOrthogonal, "determinant is -1");
  }
  // Coefficient matrix C with C(a,b) = <L_{e_a} R_{e_b}, phi> / 4. When
  // phi(X) = p X q this equals the rank-one tensor p q^T, so the leading
  // singular pair recovers (p, q) up to a global sign.
  Quat basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  Eigen::Matrix4d coeff;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      Eigen::Matrix4d lr = left_mult_matrix(basis[a]) * right_mult_matrix(basis[b]);
      coeff(a, b) = (lr.transpose() * phi.m).trace() / 4.0;
    }
  }
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(coeff, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()[1] > kRankTol) {
    raise(ErrorCode::NotSpecialOrthogonal,
          "two-sided coefficient matrix has rank > 1 (sigma_2 = " +
              std::to_string(svd.singularValues()[1]) + ")");
  }
  // coeff = p q^T, so the singular pair is (p, q) up to one global sign,
  // and both sign choices realize the same two-sided map.
  UnitQuaternion p(Quat::from_vec(svd.matrixU().col(0)));
  UnitQuaternion q(Quat::from_vec(svd.matrixV().col(0)));
  return {p, q};
}

UnitQuaternion haar(RandomStream& rng) {
  while (true) {
    Quat g{rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()};
    if (g.norm() >= 1e-6) return UnitQuaternion(g);
  }
}

UnitQuaternion haar_orthogonal(RandomStream& rng, const Quat& n) {
  double nn = n.norm();
  if (nn < 1e-12) {
    raise(ErrorCode::Degenerate, "normal direction is numerically zero");
  }
  Quat unit = n * (1.0 / nn);
  while (true) {
    Quat g = haar(rng).value();
    Quat proj = g - unit * inner(g, unit);
    if (proj.norm() >= 1e-6) return UnitQuaternion(proj);
  }
}

ProjectiveDirection::ProjectiveDirection(const ImaginaryVector& rep) : rep_(rep) {
  if (rep.norm() < 1e-9) {
    raise(ErrorCode::Degenerate, "projective direction from vector of norm " + std::to_string(rep.norm()));
  }
}

double ProjectiveDirection::angular_distance(const ProjectiveDirection& o) const {
  double c = std::abs(rep_.dot(o.rep_)) / (rep_.norm() * o.rep_.norm());
  return std::acos(std::clamp(c, 0.0, 1.0));
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::AxisUndefined: return "AxisUndefined";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::DegenerateCenter: return "DegenerateCenter";
    case ErrorCode::NotSpecialOrthogonal: return "NotSpecialOrthogonal";
    case ErrorCode::NotTransitive: return "NotTransitive";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::BasepointOutsideCylinder: return "BasepointOutsideCylinder";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnassignedGenerator: return "UnassignedGenerator";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateCycle: return "DegenerateCycle";
    case ErrorCode::DegenerateSphere: return "DegenerateSphere";
    case ErrorCode::CentralHolonomy: return "CentralHolonomy";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::UndefinedRatio: return "UndefinedRatio";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace twistlab
