#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twistlab/origami.hpp"
#include "twistlab/quat.hpp"
#include "twistlab/repvar.hpp"
#include "twistlab/rng.hpp"
#include "twistlab/twist.hpp"

namespace twistlab {

/// Value of an invariant function at one representation plus the guard
/// diagnostics that decided whether it is defined.
struct InvariantReport {
  bool defined = false;
  std::variant<std::monostate, double, ProjectiveDirection> value;
  std::map<std::string, double> diagnostics;

  double real() const { return std::get<double>(value); }
  const ProjectiveDirection& direction() const { return std::get<ProjectiveDirection>(value); }
};

/// The one-square direction identity: for a rectangle relation
/// aI bJ = bI aJ with aI conjugate to aJ and bI conjugate to bJ, the
/// lines [aI - aJ] and [bI - bJ] in the imaginary quaternions coincide.
/// Returns their angular distance (contract: below 1e-8 on inputs that
/// satisfy the hypotheses to rounding). Throws HypothesisViolation naming
/// the failed guard, or Degenerate when aI = aJ or bI = bJ within 1e-6.
double lemma_one_square_check(const UnitQuaternion& aI, const UnitQuaternion& aJ,
                              const UnitQuaternion& bI, const UnitQuaternion& bJ);

struct RectangleTuple {
  UnitQuaternion aI, aJ, bI, bJ;
};

/// Constructive sampler of tuples satisfying the one-square hypotheses
/// exactly: aJ = g aI g^-1, bJ on the sphere tr(aI X aJ^-1) = tr(X),
/// bI = aI bJ aJ^-1.
RectangleTuple sample_rectangle(RandomStream& rng);

/// Pair of projective directions that an invariant asserts equal, one
/// computed from left-edge data only and one from bottom-edge data only.
struct DirectionPair {
  ProjectiveDirection a_side;
  ProjectiveDirection b_side;
  double angular_distance;
};

/// Direction invariant of the three-square surface sprime:
/// [A2 A3 - A3 A2] = [B1 - B2]. The a-side vector is orthogonal to
/// 1, A2 and A3 by construction. Requires residual below 1e-9; throws
/// Degenerate when A2 and A3 commute (or B1 = B2) within 1e-6.
DirectionPair sprime_invariant(const Representation& rep);

/// Square whose rectangle relation admits the one-square identity, with
/// the conjugacy of both side pairs certified by other squares of the
/// same origami (a one-square vertical cylinder certifies its a-pair, a
/// one-square horizontal cylinder its b-pair).
struct LemmaSquare {
  int square;
  int a_partner;  // sigma(square)
  int b_partner;  // sigma'(square)
};

/// Locates a lemma square programmatically; throws Degenerate when the
/// origami has none.
LemmaSquare locate_lemma_square(const Origami& origami);

/// Direction invariant of the l22 surface via the located lemma square:
/// [A_i - A_sigma(i)] = [B_i - B_sigma'(i)].
DirectionPair l22_invariant(const Representation& rep);
DirectionPair located_direction_invariant(const Representation& rep, const Origami& origami);

/// Trace invariant of the n4 surface. Reports the product identity
/// residual tr(A1) tr(B1) - tr(A2) tr(B2) (contract: below 1e-10 on
/// valid points), the intermediate identities tr(A1 B1) = tr(A2 B2) and
/// tr(A1 B1^-1) = tr(A2 B2^-1), and the ratio tr(A1)/tr(A2) when both
/// denominators clear the 1e-6 guard; otherwise defined = false with the
/// diagnostics still filled in.
InvariantReport n4_invariant(const Representation& rep);

using InvariantFunction = std::function<InvariantReport(const Representation&)>;

/// Wraps the direction invariants as InvariantFunctions.
InvariantFunction sprime_invariant_fn();
InvariantFunction l22_invariant_fn();
InvariantFunction n4_invariant_fn();
/// Trace of a fixed word as a (generally non-invariant) probe.
InvariantFunction word_trace_fn(const GeneratorWord& word);

struct WordDistribution {
  int max_exponent = 2;
};

/// Drift of a candidate function along a random twist-word orbit. The
/// series holds one entry per step: distance of the current value to the
/// value at step 0 (angular distance for directions, absolute difference
/// for reals). Steps where the candidate is undefined are counted and
/// skipped.
struct OrbitStats {
  int steps = 0;
  std::vector<double> series;
  double max_drift = 0.0;
  double variance = 0.0;
  int undefined_count = 0;
  double final_residual = 0.0;
};

OrbitStats orbit_invariance_test(const Representation& rep, const Origami& origami,
                                 const InvariantFunction& candidate,
                                 const WordDistribution& dist, int steps, RandomStream& rng);

}  // namespace twistlab
