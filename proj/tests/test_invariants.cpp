#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "twistlab/invariants.hpp"

using namespace twistlab;
using testutil::quat_distance;

namespace {

Representation trivial_representation(const SurfacePresentation& p) {
  Representation rep(p);
  for (Gen kind : {Gen::a, Gen::b, Gen::c}) {
    for (int i = 1; i <= p.count(kind); ++i) rep.set(kind, i, UnitQuaternion());
  }
  return rep;
}

}  // namespace

TEST_CASE("one-square identity on constructive rectangles") {
  RandomStream rng(51);
  for (int n = 0; n < 500; ++n) {
    RectangleTuple t = sample_rectangle(rng);
    double angle = lemma_one_square_check(t.aI, t.aJ, t.bI, t.bJ);
    CHECK(angle < 1e-8);
  }
}

TEST_CASE("one-square guards name the failing hypothesis") {
  RandomStream rng(52);

  UnitQuaternion a = haar(rng);
  UnitQuaternion b = haar(rng);
  // aI = aJ with an exact rectangle relation: bI = a bJ a^-1
  try {
    lemma_one_square_check(a, a, a * b * a.inverse(), b);
    FAIL("equal a-sides must be degenerate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Degenerate);
  }

  // exact rectangle, conjugate a-sides, but bJ off the trace sphere
  RectangleTuple t = sample_rectangle(rng);
  UnitQuaternion bad_bJ = haar(rng);
  UnitQuaternion bad_bI = t.aI * bad_bJ * t.aJ.inverse();
  if (std::abs(trace(bad_bI) - trace(bad_bJ)) > 1e-6) {
    try {
      lemma_one_square_check(t.aI, t.aJ, bad_bI, bad_bJ);
      FAIL("unequal b traces must be rejected");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::HypothesisViolation);
      CHECK(std::string(e.what()).find("trace(bI)") != std::string::npos);
    }
  }

  // a random quadruple violates the rectangle relation itself
  try {
    lemma_one_square_check(haar(rng), haar(rng), haar(rng), haar(rng));
    FAIL("random tuples are not rectangles");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisViolation);
    CHECK(std::string(e.what()).find("rectangle") != std::string::npos);
  }
}

TEST_CASE("sprime direction invariant") {
  Origami o = *registry("sprime").origami;
  RandomStream rng(53);

  for (int n = 0; n < 50; ++n) {
    Representation rep = sample_propagate(o, rng);
    DirectionPair pair = sprime_invariant(rep);
    CHECK(pair.angular_distance < 1e-8);

    // the a-side vector is orthogonal to 1, A2 and A3
    Quat v = pair.a_side.representative().quat();
    double vn = v.norm();
    CHECK(std::abs(v.w) / vn < 1e-10);
    CHECK(std::abs(inner(v, rep.image(Gen::a, 2).value())) / vn < 1e-10);
    CHECK(std::abs(inner(v, rep.image(Gen::a, 3).value())) / vn < 1e-10);
  }

  // descent samples certify the same identity (sampler independence)
  RandomStream rng2(54);
  Representation rep = sample_descent(registry("sprime").presentation, rng2, 1e-11);
  CHECK(sprime_invariant(rep).angular_distance < 1e-8);

  // commuting images are rejected
  try {
    sprime_invariant(trivial_representation(registry("sprime").presentation));
    FAIL("trivial representation must be degenerate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Degenerate);
  }
}

TEST_CASE("lemma square locator") {
  LemmaSquare sq = locate_lemma_square(*registry("l22").origami);
  CHECK(sq.square == 1);
  CHECK(sq.a_partner == 2);
  CHECK(sq.b_partner == 3);

  // sprime has no certified square (its identity needs composite sides)
  CHECK_THROWS_AS(locate_lemma_square(*registry("sprime").origami), Error);
}

TEST_CASE("l22 direction invariant") {
  Origami o = *registry("l22").origami;
  RandomStream rng(55);
  for (int n = 0; n < 50; ++n) {
    Representation rep = sample_propagate(o, rng);
    DirectionPair pair = l22_invariant(rep);
    CHECK(pair.angular_distance < 1e-8);
  }

  try {
    l22_invariant(trivial_representation(registry("l22").presentation));
    FAIL("central representation must be degenerate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Degenerate);
  }

  // non-constancy: the direction spreads across independent samples
  double spread = 0.0;
  std::vector<ProjectiveDirection> dirs;
  for (int n = 0; n < 40; ++n) {
    try {
      dirs.push_back(l22_invariant(sample_propagate(o, rng)).a_side);
    } catch (const Error&) {
    }
  }
  for (size_t u = 0; u < dirs.size(); ++u) {
    for (size_t v = u + 1; v < dirs.size(); ++v) {
      spread = std::max(spread, dirs[u].angular_distance(dirs[v]));
    }
  }
  CHECK(spread > 0.1);
}

TEST_CASE("n4 trace invariant") {
  SUBCASE("trivial representation") {
    InvariantReport r = n4_invariant(trivial_representation(registry("n4").presentation));
    CHECK(r.defined);
    CHECK(r.real() == doctest::Approx(1.0));
    CHECK(std::abs(r.diagnostics.at("product_identity")) < 1e-12);
  }

  SUBCASE("traceless marginal trips the ratio guard but keeps the residual") {
    RandomStream rng(56);
    Representation rep = sample_n4(UnitQuaternion::i(), UnitQuaternion::j(), rng);
    InvariantReport r = n4_invariant(rep);
    CHECK(!r.defined);
    CHECK(std::abs(r.diagnostics.at("product_identity")) < 1e-10);
    CHECK(r.diagnostics.at("denominator_tr_a2") < 1e-6);
  }

  SUBCASE("identities hold on constructive and descent samples") {
    RandomStream rng(57);
    for (int n = 0; n < 200; ++n) {
      Representation rep = sample_n4(haar(rng), haar(rng), rng);
      if (residual(rep).max >= 1e-10) continue;
      InvariantReport r = n4_invariant(rep);
      CHECK(std::abs(r.diagnostics.at("product_identity")) < 1e-10);
      CHECK(std::abs(r.diagnostics.at("trace_ab")) < 1e-10);
      CHECK(std::abs(r.diagnostics.at("trace_ab_inverse")) < 1e-10);
      if (r.defined) {
        CHECK(std::abs(r.diagnostics.at("ratio_forms_gap")) < 1e-8);
      }
    }
    for (int n = 0; n < 20; ++n) {
      Representation rep = sample_descent(registry("n4").presentation, rng, 1e-12);
      InvariantReport r = n4_invariant(rep);
      CHECK(std::abs(r.diagnostics.at("product_identity")) < 1e-10);
    }
  }

  SUBCASE("ratio spreads over conditioned samples") {
    RandomStream rng(58);
    double lo = 1e9, hi = -1e9;
    int kept = 0;
    while (kept < 100) {
      UnitQuaternion a1 = haar(rng), a2 = haar(rng);
      if (std::abs(trace(a1)) < 0.5 || std::abs(trace(a2)) < 0.5) continue;
      InvariantReport r = n4_invariant(sample_n4(a1, a2, rng));
      if (!r.defined) continue;
      lo = std::min(lo, r.real());
      hi = std::max(hi, r.real());
      ++kept;
    }
    CHECK(hi - lo > 0.5);
  }
}

TEST_CASE("orbit drift of certified invariants") {
  RandomStream rng(59);
  WordDistribution dist;

  Origami sprime = *registry("sprime").origami;
  Representation rep = sample_propagate(sprime, rng);
  OrbitStats stats = orbit_invariance_test(rep, sprime, sprime_invariant_fn(), dist, 300, rng);
  CHECK(stats.max_drift < 1e-8);
  CHECK(stats.undefined_count == 0);
  CHECK(stats.final_residual < 1e-9);

  Origami l22 = *registry("l22").origami;
  Representation rep2 = sample_propagate(l22, rng);
  OrbitStats stats2 = orbit_invariance_test(rep2, l22, l22_invariant_fn(), dist, 300, rng);
  CHECK(stats2.max_drift < 1e-8);

  // a constant candidate never drifts
  InvariantFunction constant = [](const Representation&) {
    InvariantReport r;
    r.defined = true;
    r.value = 1.5;
    return r;
  };
  OrbitStats flat = orbit_invariance_test(rep, sprime, constant, dist, 100, rng);
  CHECK(flat.max_drift == 0.0);

  // a plain trace probe is not invariant: macroscopic spread on fig1
  Origami fig1 = *registry("fig1").origami;
  Representation rep3 = sample_propagate(fig1, rng);
  OrbitStats probe_stats = orbit_invariance_test(
      rep3, fig1, word_trace_fn(GeneratorWord::letter(Gen::a, 1)), dist, 300, rng);
  CHECK(probe_stats.max_drift > 0.1);
}

TEST_CASE("direction invariants are stable under global conjugation") {
  Origami o = *registry("sprime").origami;
  RandomStream rng(60);
  Representation rep = sample_propagate(o, rng);
  UnitQuaternion g = haar(rng);
  DirectionPair before = sprime_invariant(rep);
  DirectionPair after = sprime_invariant(rep.conjugated(g));
  // the directions rotate together: the pairing distance stays tiny
  CHECK(std::abs(before.angular_distance - after.angular_distance) < 1e-10);
}
