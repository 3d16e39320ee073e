#pragma once

#include <string>
#include <vector>

#include "twistlab/origami.hpp"
#include "twistlab/repvar.hpp"
#include "twistlab/rng.hpp"

namespace twistlab {

/// One twist along the core of a cylinder. The cylinder is addressed by
/// its one-based position in the canonical cylinder list of the
/// direction. Text form "V1^2" / "H2^-1" (exponent omitted means 1).
struct TwistGenerator {
  Direction direction;
  int cylinder;  // one-based, canonical order
  int exponent;

  std::string str() const;
};

/// Formal product of twist generators; the leftmost generator acts first.
struct TwistWord {
  std::vector<TwistGenerator> gens;

  static TwistWord parse(const std::string& text);
  std::string str() const;
  TwistWord inverse() const;
};

/// Dehn twist in origami coordinates. Twisting a vertical cylinder with
/// column cycle through i left-multiplies every crossing image by the
/// based core holonomy: B_i -> V_i^n B_i with
/// V_i = A_i A_{sigma'(i)} ... ; a horizontal twist acts on the A's with
/// the row holonomy of B's. The cyclic shift identity
/// V_{sigma'(i)} = A_i^-1 V_i A_i makes each square relation hold
/// verbatim, so the residual only moves at rounding level. The
/// non-twisted family is untouched.
Representation twist(const Representation& rep, const Origami& origami, const TwistGenerator& g);

/// Circle flow along a cylinder core: crossing images are
/// left-multiplied by one_param(core holonomy, t). Identity at t = 0,
/// additive in t, 2*pi periodic, and equal to the integer twist at
/// t = theta(core holonomy). Throws CentralHolonomy when the core
/// holonomy is +-1.
Representation goldman_flow(const Representation& rep, const Origami& origami, Direction dir,
                            int cylinder, double t);

/// Same flow exposed as the motion inside one fiber of the restriction
/// to the complement of the cylinder core: coordinates that do not cross
/// the cylinder are returned bit-identical.
Representation fiber_move(const Representation& rep, const Origami& origami, Direction dir,
                          int cylinder, double t);

Representation apply_word(const Representation& rep, const Origami& origami, const TwistWord& w);

/// Uniform random word: each step picks direction, cylinder and a
/// nonzero exponent in [-max_exponent, max_exponent].
TwistWord random_word(const Origami& origami, int steps, int max_exponent, RandomStream& rng);

}  // namespace twistlab
