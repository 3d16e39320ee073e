#include "twistlab/foliation.hpp"

#include <cmath>
#include <functional>

namespace twistlab {

namespace {

// Pairwise rotation generator (x1, x2, x3, x4, ...) ->
// (x2, -x1, x4, -x3, ...); a trailing unpaired coordinate is fixed.
Eigen::VectorXd rotate_pairs(const Eigen::VectorXd& x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  for (int k = 0; k + 1 < x.size(); k += 2) {
    out[k] = x[k + 1];
    out[k + 1] = -x[k];
  }
  return out;
}

Eigen::Matrix3d cross_matrix(const Eigen::Vector3d& x) {
  Eigen::Matrix3d m;
  m << 0, -x[2], x[1], x[2], 0, -x[0], -x[1], x[0], 0;
  return m;
}

// Constraint matrix on the moving factor with the other factor frozen:
// row k is frozen^T M_k (freeze_a) or (M_k moving)^T ... transposed
// appropriately so that rows * moving = level.
Eigen::MatrixXd moving_constraints(const BilinearSystem& sys, LeafSide side,
                                   const Eigen::VectorXd& frozen) {
  Eigen::MatrixXd g(sys.forms.size(), sys.n);
  for (size_t k = 0; k < sys.forms.size(); ++k) {
    if (side == LeafSide::freeze_a) {
      g.row(static_cast<long>(k)) = frozen.transpose() * sys.forms[k];
    } else {
      g.row(static_cast<long>(k)) = (sys.forms[k] * frozen).transpose();
    }
  }
  return g;
}

Eigen::VectorXd project_tangent(const Eigen::MatrixXd& g, const Eigen::VectorXd& v) {
  return v - g.transpose() * ((g * g.transpose()).ldlt().solve(g * v));
}

}  // namespace

Eigen::VectorXd BilinearSystem::values(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  Eigen::VectorXd out(forms.size());
  for (size_t k = 0; k < forms.size(); ++k) {
    out[static_cast<long>(k)] = a.dot(forms[k] * b);
  }
  return out;
}

double BilinearSystem::constraint_deviation(const Eigen::VectorXd& a,
                                            const Eigen::VectorXd& b) const {
  double dev = (values(a, b) - level).cwiseAbs().maxCoeff();
  if (spherical) {
    dev = std::max(dev, std::abs(a.norm() - 1.0));
    dev = std::max(dev, std::abs(b.norm() - 1.0));
  }
  return dev;
}

int BilinearSystem::tangent_dimension() const {
  return 2 * n - static_cast<int>(forms.size()) - (spherical ? 2 : 0);
}

BilinearSystem example1_system() {
  BilinearSystem s;
  s.n = 2;
  s.forms = {Eigen::MatrixXd::Identity(2, 2)};
  s.level = Eigen::VectorXd::Zero(1);
  s.spherical = false;
  return s;
}

BilinearSystem example2_system() {
  BilinearSystem s;
  s.n = 3;
  s.forms = {Eigen::MatrixXd::Identity(3, 3)};
  s.level = Eigen::VectorXd::Zero(1);
  s.spherical = true;
  return s;
}

BilinearSystem example2_chart_system() {
  BilinearSystem s;
  s.n = 2;
  s.forms = {Eigen::MatrixXd::Identity(2, 2)};
  s.level = Eigen::VectorXd::Constant(1, -1.0);
  s.spherical = false;
  return s;
}

Eigen::VectorXd leaf_field(const BilinearSystem& sys, LeafSide side, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b) {
  const Eigen::VectorXd& frozen = side == LeafSide::freeze_a ? a : b;
  const Eigen::VectorXd& moving = side == LeafSide::freeze_a ? b : a;
  if (sys.spherical) {
    if (sys.n != 3) {
      raise(ErrorCode::InvalidArgument, "spherical systems are implemented for n = 3");
    }
    Eigen::Vector3d f = frozen.head<3>().normalized();
    Eigen::Vector3d m = moving.head<3>();
    Eigen::Vector3d v = f.cross(m);
    return v;
  }
  Eigen::VectorXd v = rotate_pairs(frozen);
  return project_tangent(moving_constraints(sys, side, frozen), v);
}

LeafState leaf_flow(const BilinearSystem& sys, const LeafState& state, LeafSide side, double t) {
  LeafState out = state;
  Eigen::VectorXd& moving = side == LeafSide::freeze_a ? out.b : out.a;
  const Eigen::VectorXd& frozen = side == LeafSide::freeze_a ? out.a : out.b;
  const Eigen::VectorXd moving_level =
      sys.level;  // constraints on the moving factor with the frozen one fixed
  Eigen::MatrixXd g = moving_constraints(sys, side, frozen);
  Eigen::LDLT<Eigen::MatrixXd> gram(g * g.transpose());

  auto field = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    if (side == LeafSide::freeze_a) {
      return leaf_field(sys, side, frozen, x);
    }
    return leaf_field(sys, side, x, frozen);
  };
  auto project = [&](Eigen::VectorXd x) -> Eigen::VectorXd {
    for (int pass = 0; pass < 8; ++pass) {
      if (sys.spherical) x.normalize();
      x -= g.transpose() * gram.solve(g * x - moving_level);
      double dev = (g * x - moving_level).cwiseAbs().maxCoeff();
      if (sys.spherical) dev = std::max(dev, std::abs(x.norm() - 1.0));
      if (dev < 1e-13) break;
    }
    return x;
  };
  auto rk4 = [&](const Eigen::VectorXd& x, double h) -> Eigen::VectorXd {
    Eigen::VectorXd k1 = field(x);
    Eigen::VectorXd k2 = field(x + 0.5 * h * k1);
    Eigen::VectorXd k3 = field(x + 0.5 * h * k2);
    Eigen::VectorXd k4 = field(x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  const double tol_per_unit = 1e-10;
  double remaining = std::abs(t);
  double dir = t >= 0 ? 1.0 : -1.0;
  double h = std::min(remaining, 0.1);
  while (remaining > 0.0) {
    h = std::min(h, remaining);
    Eigen::VectorXd full = rk4(moving, dir * h);
    Eigen::VectorXd half = rk4(rk4(moving, dir * h / 2), dir * h / 2);
    double err = (full - half).norm();
    if (err > tol_per_unit * h) {
      h *= 0.5;
      if (h < 1e-14) {
        raise(ErrorCode::StepFailure, "step size collapsed during leaf flow");
      }
      continue;
    }
    moving = project(half);
    remaining -= h;
    if (err < 0.01 * tol_per_unit * h) h *= 2.0;
  }
  return out;
}

double projective_angle_distance(double u, double v) {
  return std::abs(std::remainder(u - v, 3.14159265358979323846));
}

Example1Invariant example1_invariant(const LeafState& state) {
  if (state.a.size() != 2 || state.b.size() != 2) {
    raise(ErrorCode::InvalidArgument, "example 1 lives on R^2 x R^2");
  }
  if (state.a.norm() < 1e-9) {
    raise(ErrorCode::Degenerate, "a vanishes, the ratio [a1 : a2] is undefined");
  }
  if (state.b.norm() < 1e-9) {
    raise(ErrorCode::Degenerate, "b vanishes, the ratio [-b2 : b1] is undefined");
  }
  double angle_a = std::atan2(state.a[1], state.a[0]);
  double angle_b = std::atan2(state.b[0], -state.b[1]);
  double pi = 3.14159265358979323846;
  angle_a = std::fmod(angle_a + 2 * pi, pi);
  angle_b = std::fmod(angle_b + 2 * pi, pi);
  return Example1Invariant{angle_a, projective_angle_distance(angle_a, angle_b)};
}

// ---------------------------------------------------------------------------
// Lie bracket span

namespace {

struct Field {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jac;
};

Field affine_field(const BilinearSystem& sys, LeafSide side) {
  int n = sys.n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  // moving-factor velocity is the rotated frozen factor
  for (int k = 0; k + 1 < n; k += 2) {
    if (side == LeafSide::freeze_a) {
      m(n + k, k + 1) = 1.0;
      m(n + k + 1, k) = -1.0;
    } else {
      m(k, n + k + 1) = 1.0;
      m(k + 1, n + k) = -1.0;
    }
  }
  return Field{[m](const Eigen::VectorXd& x) { return Eigen::VectorXd(m * x); },
               [m](const Eigen::VectorXd&) { return m; }};
}

Field spherical_field(LeafSide side) {
  // velocity of the moving factor: normalized frozen factor cross moving
  return Field{
      [side](const Eigen::VectorXd& x) {
        Eigen::Vector3d a = x.head<3>();
        Eigen::Vector3d b = x.tail<3>();
        Eigen::VectorXd out = Eigen::VectorXd::Zero(6);
        if (side == LeafSide::freeze_a) {
          out.tail<3>() = a.normalized().cross(b);
        } else {
          out.head<3>() = b.normalized().cross(a);
        }
        return out;
      },
      [side](const Eigen::VectorXd& x) {
        Eigen::Vector3d a = x.head<3>();
        Eigen::Vector3d b = x.tail<3>();
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(6, 6);
        if (side == LeafSide::freeze_a) {
          double na = a.norm();
          Eigen::Vector3d ah = a / na;
          // d/da of (a/|a|) x b, then d/db
          jac.block<3, 3>(3, 0) =
              (-cross_matrix(b) * (Eigen::Matrix3d::Identity() - ah * ah.transpose())) / na;
          jac.block<3, 3>(3, 3) = cross_matrix(ah);
        } else {
          double nb = b.norm();
          Eigen::Vector3d bh = b / nb;
          jac.block<3, 3>(0, 3) =
              (-cross_matrix(a) * (Eigen::Matrix3d::Identity() - bh * bh.transpose())) / nb;
          jac.block<3, 3>(0, 0) = cross_matrix(bh);
        }
        return jac;
      }};
}

Field bracket(const Field& f, const Field& g) {
  auto eval = [f, g](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return g.jac(x) * f.eval(x) - f.jac(x) * g.eval(x);
  };
  auto jac = [eval](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    // the nested level only ever differentiates an exact bracket, so a
    // central difference at 1e-6 keeps the noise near 1e-10
    const double h = 1e-6;
    Eigen::MatrixXd out(x.size(), x.size());
    for (int c = 0; c < x.size(); ++c) {
      Eigen::VectorXd xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      out.col(c) = (eval(xp) - eval(xm)) / (2 * h);
    }
    return out;
  };
  return Field{eval, jac};
}

}  // namespace

std::vector<Eigen::VectorXd> bracket_span(const BilinearSystem& sys, const LeafState& point) {
  Field va = sys.spherical ? spherical_field(LeafSide::freeze_a)
                           : affine_field(sys, LeafSide::freeze_a);
  Field vb = sys.spherical ? spherical_field(LeafSide::freeze_b)
                           : affine_field(sys, LeafSide::freeze_b);
  Field vab = bracket(va, vb);
  Field vaab = bracket(va, vab);
  Field vbab = bracket(vb, vab);

  Eigen::VectorXd x(2 * sys.n);
  x << point.a, point.b;
  return {va.eval(x), vb.eval(x), vab.eval(x), vaab.eval(x), vbab.eval(x)};
}

int bracket_rank(const BilinearSystem& sys, const LeafState& point) {
  std::vector<Eigen::VectorXd> span = bracket_span(sys, point);
  Eigen::MatrixXd m(2 * sys.n, static_cast<long>(span.size()));
  for (size_t k = 0; k < span.size(); ++k) m.col(static_cast<long>(k)) = span[k];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  double tol = 1e-9 * std::max(1.0, svd.singularValues()[0]);
  int rank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()[k] > tol) ++rank;
  }
  return rank;
}

}  // namespace twistlab
