#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "twistlab/errors.hpp"
#include "twistlab/rng.hpp"

namespace twistlab {

/// Zero locus (or affine level set) of bilinear forms
/// f_k(a, b) = a^T M_k b on R^n x R^n. With spherical = true both factors
/// are additionally constrained to unit spheres, which realizes
/// projectivized components; leaves are then closed curves.
struct BilinearSystem {
  int n = 0;
  std::vector<Eigen::MatrixXd> forms;
  Eigen::VectorXd level;  // one entry per form
  bool spherical = false;

  Eigen::VectorXd values(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double constraint_deviation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  /// Dimension of the tangent space of the full constraint set at a
  /// generic point: 2n - m, minus 2 more when spherical.
  int tangent_dimension() const;
};

/// The planar quadric a1 b1 + a2 b2 = 0.
BilinearSystem example1_system();
/// The projectivized three-dimensional quadric <a, b> = 0, realized on
/// unit spheres; its leaves are great circles.
BilinearSystem example2_system();
/// The chart form of the same reduction: a1 b1 + a2 b2 = -1 on R^2 x R^2.
BilinearSystem example2_chart_system();

enum class LeafSide { freeze_a, freeze_b };

struct LeafState {
  Eigen::VectorXd a, b;
};

/// Rotation fields generating the two foliations: with a frozen the
/// moving factor rotates with velocity J a (affine systems; J is the
/// pairwise rotation generator) or a x b (spherical systems), projected
/// on the leaf tangent. Both specialize to closed-form tangent fields on
/// the shipped examples.
Eigen::VectorXd leaf_field(const BilinearSystem& sys, LeafSide side, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b);

/// Flows the state along the leaf through it for time t: the frozen
/// factor is returned bit-identical, the moving factor is integrated
/// with adaptive fourth-order Runge-Kutta (local tolerance 1e-10 per
/// unit time) and projected back to the constraint set after every step.
/// Throws StepFailure when the step size collapses.
LeafState leaf_flow(const BilinearSystem& sys, const LeafState& state, LeafSide side, double t);

/// Projective ratio [a1 : a2] of an example-1 point, as an angle in
/// [0, pi); on the variety it agrees with [-b2 : b1]. Throws Degenerate
/// when a or b is numerically zero.
struct Example1Invariant {
  double angle;       // representative of [a1 : a2]
  double agreement;   // angular gap between the a-form and the b-form
};
Example1Invariant example1_invariant(const LeafState& state);

double projective_angle_distance(double u, double v);

/// Dimension of the span of the two leaf fields and their iterated Lie
/// brackets to depth 3 at the point (singular value tolerance 1e-9).
int bracket_rank(const BilinearSystem& sys, const LeafState& point);

/// The bracket vectors themselves, for inspection and oracles: ordered
/// v_A, v_B, [v_A,v_B], [v_A,[v_A,v_B]], [v_B,[v_A,v_B]].
std::vector<Eigen::VectorXd> bracket_span(const BilinearSystem& sys, const LeafState& point);

}  // namespace twistlab
