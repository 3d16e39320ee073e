#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "twistlab/twist.hpp"

using namespace twistlab;
using testutil::quat_distance;

namespace {

const double kPi = 3.14159265358979323846;

double representation_distance(const Representation& u, const Representation& v) {
  double d = 0.0;
  const SurfacePresentation& p = u.presentation();
  for (Gen kind : {Gen::a, Gen::b, Gen::c}) {
    for (int i = 1; i <= p.count(kind); ++i) {
      d = std::max(d, quat_distance(u.image(kind, i).value(), v.image(kind, i).value()));
    }
  }
  return d;
}

std::vector<GeneratorWord> core_words(const Origami& o, Direction dir) {
  std::vector<GeneratorWord> out;
  for (const Cylinder& c : o.cylinders(dir)) out.push_back(o.core_word(c, c.cycle[0]));
  return out;
}

}  // namespace

TEST_CASE("twist word text form") {
  TwistWord w = TwistWord::parse("V1^2 H1^-1 V2");
  REQUIRE(w.gens.size() == 3);
  CHECK(w.gens[0].direction == Direction::vertical);
  CHECK(w.gens[0].cylinder == 1);
  CHECK(w.gens[0].exponent == 2);
  CHECK(w.gens[1].direction == Direction::horizontal);
  CHECK(w.gens[1].exponent == -1);
  CHECK(w.gens[2].exponent == 1);
  CHECK(w.str() == "V1^2 H1^-1 V2");
  CHECK(TwistWord::parse(w.str()).str() == w.str());

  TwistWord inv = w.inverse();
  CHECK(inv.str() == "V2^-1 H1 V1^-2");

  CHECK_THROWS_AS(TwistWord::parse("X1"), Error);
  CHECK_THROWS_AS(TwistWord::parse("V"), Error);
  CHECK_THROWS_AS(TwistWord::parse("V1^"), Error);
}

TEST_CASE("twist basics") {
  Origami o = *registry("fig1").origami;
  RandomStream rng(41);
  Representation rep = sample_propagate(o, rng);

  // exponent zero is the identity
  Representation same = twist(rep, o, TwistGenerator{Direction::vertical, 1, 0});
  CHECK(representation_distance(rep, same) == 0.0);

  // the trivial representation is fixed (all core holonomies are 1)
  Representation trivial(rep.presentation_ptr());
  for (Gen kind : {Gen::a, Gen::b}) {
    for (int i = 1; i <= 4; ++i) trivial.set(kind, i, UnitQuaternion());
  }
  Representation still = twist(trivial, o, TwistGenerator{Direction::vertical, 1, 3});
  CHECK(representation_distance(trivial, still) == 0.0);

  // a vertical twist keeps the residual and the vertical core traces
  auto verticals = core_words(o, Direction::vertical);
  auto before = probe(rep, verticals);
  Representation moved = twist(rep, o, TwistGenerator{Direction::vertical, 1, 1});
  auto after = probe(moved, verticals);
  CHECK(residual(moved).max < 1e-10);
  for (size_t k = 0; k < before.size(); ++k) {
    CHECK(std::abs(before[k] - after[k]) < 1e-12);
  }
  // and does not touch the left-edge images at all
  for (int i = 1; i <= 4; ++i) {
    CHECK(quat_distance(rep.image(Gen::a, i).value(), moved.image(Gen::a, i).value()) == 0.0);
  }
  CHECK(representation_distance(rep, moved) > 1e-3);  // it does act
}

TEST_CASE("flow limits and compatibility with the integer twist") {
  RandomStream rng(42);
  for (const char* name : {"fig1", "sprime", "l22"}) {
    Origami o = *registry(name).origami;
    Representation rep = sample_propagate(o, rng);

    for (Direction dir : {Direction::vertical, Direction::horizontal}) {
      int cylinders = static_cast<int>(o.cylinders(dir).size());
      for (int c = 1; c <= cylinders; ++c) {
        Representation at_zero = goldman_flow(rep, o, dir, c, 0.0);
        CHECK(representation_distance(rep, at_zero) == 0.0);

        Representation full_turn = goldman_flow(rep, o, dir, c, 2 * kPi);
        CHECK(representation_distance(rep, full_turn) < 1e-11);

        // additivity
        double s = rng.uniform(0, 3), t = rng.uniform(0, 3);
        Representation two_steps = goldman_flow(goldman_flow(rep, o, dir, c, s), o, dir, c, t);
        Representation one_step = goldman_flow(rep, o, dir, c, s + t);
        CHECK(representation_distance(two_steps, one_step) < 1e-11);

        // the flow at the core angle is the twist
        Cylinder cyl = o.cylinders(dir)[static_cast<size_t>(c) - 1];
        UnitQuaternion holonomy = evaluate_word(rep, o.core_word(cyl, cyl.cycle[0]));
        Representation flowed = goldman_flow(rep, o, dir, c, theta(holonomy));
        Representation twisted = twist(rep, o, TwistGenerator{dir, c, 1});
        CHECK(representation_distance(flowed, twisted) < 1e-10);

        Representation back = goldman_flow(rep, o, dir, c, -theta(holonomy));
        Representation untwisted = twist(rep, o, TwistGenerator{dir, c, -1});
        CHECK(representation_distance(back, untwisted) < 1e-10);
      }
    }
  }
}

TEST_CASE("flow rejects central holonomy") {
  Origami o = *registry("fig1").origami;
  Representation trivial(std::make_shared<SurfacePresentation>(o.square_relators()));
  for (Gen kind : {Gen::a, Gen::b}) {
    for (int i = 1; i <= 4; ++i) trivial.set(kind, i, UnitQuaternion());
  }
  try {
    goldman_flow(trivial, o, Direction::vertical, 1, 0.5);
    FAIL("central holonomy must be rejected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CentralHolonomy);
  }
}

TEST_CASE("fiber move freezes the complement coordinates") {
  Origami o = *registry("sprime").origami;
  RandomStream rng(43);
  Representation rep = sample_propagate(o, rng);

  // vertical cylinder: all left-edge images and the off-cycle bottom
  // images are returned bit-identical
  Representation moved = fiber_move(rep, o, Direction::horizontal, 2, 1.1);
  Cylinder cyl = o.cylinders(Direction::horizontal)[1];
  for (int i = 1; i <= 3; ++i) {
    CHECK(quat_distance(rep.image(Gen::b, i).value(), moved.image(Gen::b, i).value()) == 0.0);
    if (!cyl.contains(i)) {
      CHECK(quat_distance(rep.image(Gen::a, i).value(), moved.image(Gen::a, i).value()) == 0.0);
    }
  }
  // non-crossing probe traces are exactly preserved
  GeneratorWord off_word = GeneratorWord::letter(Gen::b, 1) * GeneratorWord::letter(Gen::b, 2);
  CHECK(probe(rep, {off_word})[0] == probe(moved, {off_word})[0]);
  // crossing probes generically move
  GeneratorWord crossing = GeneratorWord::letter(Gen::a, 2);
  CHECK(std::abs(probe(rep, {crossing})[0] - probe(moved, {crossing})[0]) > 1e-6);
}

TEST_CASE("twist words compose and invert") {
  Origami o = *registry("l22").origami;
  RandomStream rng(44);
  Representation rep = sample_propagate(o, rng);

  CHECK(representation_distance(rep, apply_word(rep, o, TwistWord{})) == 0.0);

  TwistWord w = random_word(o, 12, 2, rng);
  Representation there = apply_word(rep, o, w);
  Representation back = apply_word(there, o, w.inverse());
  CHECK(representation_distance(rep, back) < 1e-9);
}

TEST_CASE("disjoint cylinders commute and twists respect conjugation") {
  RandomStream rng(45);

  Origami sprime = *registry("sprime").origami;
  Representation rep = sample_propagate(sprime, rng);
  TwistGenerator g1{Direction::horizontal, 1, 1};
  TwistGenerator g2{Direction::horizontal, 2, 1};
  Representation ab = twist(twist(rep, sprime, g1), sprime, g2);
  Representation ba = twist(twist(rep, sprime, g2), sprime, g1);
  CHECK(representation_distance(ab, ba) < 1e-11);

  UnitQuaternion g = haar(rng);
  Representation conj_then_twist = twist(rep.conjugated(g), sprime, g1);
  Representation twist_then_conj = twist(rep, sprime, g1).conjugated(g);
  CHECK(representation_distance(conj_then_twist, twist_then_conj) < 1e-12);
}

TEST_CASE("long random orbits stay on the variety") {
  Origami o = *registry("fig1").origami;
  RandomStream rng(46);
  Representation rep = sample_propagate(o, rng);
  double worst = 0.0;
  for (int step = 0; step < 1000; ++step) {
    rep = apply_word(rep, o, random_word(o, 1, 2, rng));
    worst = std::max(worst, residual(rep).max);
  }
  CHECK(worst < 1e-9);
}
