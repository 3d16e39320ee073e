#include "twistlab/invariants.hpp"

#include <cmath>
#include <limits>

namespace twistlab {

namespace {
constexpr double kPairGuard = 1e-6;
constexpr double kRelationGuard = 1e-9;

ImaginaryVector difference_direction(const Quat& u, const Quat& v) {
  return imaginary_part(u - v);
}
}  // namespace

double lemma_one_square_check(const UnitQuaternion& aI, const UnitQuaternion& aJ,
                              const UnitQuaternion& bI, const UnitQuaternion& bJ) {
  Quat rect = (aI * bJ).value() - (bI * aJ).value();
  if (rect.norm() >= kRelationGuard) {
    raise(ErrorCode::HypothesisViolation,
          "rectangle relation aI bJ = bI aJ fails by " + std::to_string(rect.norm()));
  }
  if (std::abs(trace(aI) - trace(aJ)) >= kRelationGuard) {
    raise(ErrorCode::HypothesisViolation, "trace(aI) != trace(aJ), sides not conjugate");
  }
  if (std::abs(trace(bI) - trace(bJ)) >= kRelationGuard) {
    raise(ErrorCode::HypothesisViolation, "trace(bI) != trace(bJ), sides not conjugate");
  }
  ImaginaryVector da = difference_direction(aI.value(), aJ.value());
  ImaginaryVector db = difference_direction(bI.value(), bJ.value());
  if (da.norm() < kPairGuard) {
    raise(ErrorCode::Degenerate, "aI = aJ, the a-side direction is undefined");
  }
  if (db.norm() < kPairGuard) {
    raise(ErrorCode::Degenerate, "bI = bJ, the b-side direction is undefined");
  }
  return ProjectiveDirection(da).angular_distance(ProjectiveDirection(db));
}

RectangleTuple sample_rectangle(RandomStream& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    UnitQuaternion aI = haar(rng);
    UnitQuaternion g = haar(rng);
    UnitQuaternion aJ = g * aI * g.inverse();
    // bJ on the sphere tr(aI X aJ^-1) = tr(X): normal conj(aJ^-1 aI) - 1.
    Quat normal = (aJ.inverse() * aI).value().conj() - Quat{1, 0, 0, 0};
    if (normal.norm() < 1e-6) continue;  // aI = aJ, resample
    UnitQuaternion bJ = haar_orthogonal(rng, normal);
    UnitQuaternion bI = aI * bJ * aJ.inverse();
    RectangleTuple t{aI, aJ, bI, bJ};
    ImaginaryVector da = difference_direction(t.aI.value(), t.aJ.value());
    ImaginaryVector db = difference_direction(t.bI.value(), t.bJ.value());
    if (da.norm() >= 10 * kPairGuard && db.norm() >= 10 * kPairGuard) return t;
  }
  raise(ErrorCode::Degenerate, "rectangle sampler kept hitting degenerate tuples");
}

namespace {

void require_residual(const Representation& rep, const char* what) {
  double r = residual(rep).max;
  if (r >= kRelationGuard) {
    raise(ErrorCode::HypothesisViolation,
          std::string(what) + " needs residual < 1e-9, got " + std::to_string(r));
  }
}

// Structural check: same relator list as the named registry surface, so
// samples are accepted regardless of how their presentation was labeled.
void require_surface(const Representation& rep, const char* name) {
  if (rep.presentation().relators != registry(name).presentation.relators) {
    raise(ErrorCode::HypothesisViolation,
          std::string("expected a representation of ") + name);
  }
}

DirectionPair make_pair(const ImaginaryVector& a_side, const ImaginaryVector& b_side,
                        const char* a_what, const char* b_what) {
  if (a_side.norm() < kPairGuard) {
    raise(ErrorCode::Degenerate, std::string(a_what) + " is numerically zero");
  }
  if (b_side.norm() < kPairGuard) {
    raise(ErrorCode::Degenerate, std::string(b_what) + " is numerically zero");
  }
  ProjectiveDirection da(a_side), db(b_side);
  double dist = da.angular_distance(db);
  return DirectionPair{da, db, dist};
}

}  // namespace

DirectionPair sprime_invariant(const Representation& rep) {
  require_surface(rep, "sprime");
  require_residual(rep, "sprime invariant");
  const Quat& a2 = rep.image(Gen::a, 2).value();
  const Quat& a3 = rep.image(Gen::a, 3).value();
  ImaginaryVector commutator = imaginary_part(a2 * a3 - a3 * a2);
  ImaginaryVector db = difference_direction(rep.image(Gen::b, 1).value(),
                                            rep.image(Gen::b, 2).value());
  return make_pair(commutator, db, "A2 A3 - A3 A2 (commuting images)", "B1 - B2");
}

LemmaSquare locate_lemma_square(const Origami& origami) {
  const Permutation& sigma = origami.sigma();
  const Permutation& sigma_prime = origami.sigma_prime();
  int d = origami.square_count();

  // Conjugacy certificates supplied by one-square cylinders:
  // sigma'(j) = j gives a_j ~ a_{sigma(j)}, sigma(j) = j gives
  // b_j ~ b_{sigma'(j)}. Close under transitivity with union-find.
  std::vector<int> a_class(static_cast<size_t>(d) + 1), b_class(static_cast<size_t>(d) + 1);
  for (int i = 0; i <= d; ++i) a_class[static_cast<size_t>(i)] = b_class[static_cast<size_t>(i)] = i;
  std::function<int(std::vector<int>&, int)> find = [&](std::vector<int>& cls, int x) {
    while (cls[static_cast<size_t>(x)] != x) {
      cls[static_cast<size_t>(x)] = cls[static_cast<size_t>(cls[static_cast<size_t>(x)])];
      x = cls[static_cast<size_t>(x)];
    }
    return x;
  };
  for (int j = 1; j <= d; ++j) {
    if (sigma_prime.apply(j) == j) {
      a_class[static_cast<size_t>(find(a_class, j))] = find(a_class, sigma.apply(j));
    }
    if (sigma.apply(j) == j) {
      b_class[static_cast<size_t>(find(b_class, j))] = find(b_class, sigma_prime.apply(j));
    }
  }
  for (int i = 1; i <= d; ++i) {
    int ai = sigma.apply(i);
    int bi = sigma_prime.apply(i);
    if (ai == i || bi == i) continue;  // a degenerate side gives no direction
    if (find(a_class, i) == find(a_class, ai) && find(b_class, i) == find(b_class, bi)) {
      return LemmaSquare{i, ai, bi};
    }
  }
  raise(ErrorCode::Degenerate, "no square with certified conjugate side pairs");
}

DirectionPair located_direction_invariant(const Representation& rep, const Origami& origami) {
  require_residual(rep, "direction invariant");
  LemmaSquare sq = locate_lemma_square(origami);
  const UnitQuaternion& aI = rep.image(Gen::a, sq.square);
  const UnitQuaternion& aJ = rep.image(Gen::a, sq.a_partner);
  const UnitQuaternion& bI = rep.image(Gen::b, sq.square);
  const UnitQuaternion& bJ = rep.image(Gen::b, sq.b_partner);
  if (std::abs(trace(aI) - trace(aJ)) >= kRelationGuard ||
      std::abs(trace(bI) - trace(bJ)) >= kRelationGuard) {
    raise(ErrorCode::HypothesisViolation, "certified side pair has mismatched traces");
  }
  return make_pair(difference_direction(aI.value(), aJ.value()),
                   difference_direction(bI.value(), bJ.value()),
                   "A side difference", "B side difference");
}

DirectionPair l22_invariant(const Representation& rep) {
  require_surface(rep, "l22");
  return located_direction_invariant(rep, *registry("l22").origami);
}

InvariantReport n4_invariant(const Representation& rep) {
  require_surface(rep, "n4");
  require_residual(rep, "n4 invariant");
  const UnitQuaternion& A1 = rep.image(Gen::a, 1);
  const UnitQuaternion& A2 = rep.image(Gen::a, 2);
  const UnitQuaternion& B1 = rep.image(Gen::b, 1);
  const UnitQuaternion& B2 = rep.image(Gen::b, 2);

  InvariantReport report;
  report.diagnostics["product_identity"] =
      trace(A1) * trace(B1) - trace(A2) * trace(B2);
  report.diagnostics["trace_ab"] = trace(A1 * B1) - trace(A2 * B2);
  report.diagnostics["trace_ab_inverse"] =
      trace(A1 * B1.inverse()) - trace(A2 * B2.inverse());
  report.diagnostics["denominator_tr_a2"] = std::abs(trace(A2));
  report.diagnostics["denominator_tr_b1"] = std::abs(trace(B1));

  if (std::abs(trace(A2)) < kPairGuard || std::abs(trace(B1)) < kPairGuard) {
    report.defined = false;  // ratio undefined near the trace zeros
    return report;
  }
  report.defined = true;
  report.value = trace(A1) / trace(A2);
  report.diagnostics["ratio_forms_gap"] =
      trace(A1) / trace(A2) - trace(B2) / trace(B1);
  return report;
}

InvariantFunction sprime_invariant_fn() {
  return [](const Representation& rep) {
    DirectionPair p = sprime_invariant(rep);
    InvariantReport r;
    r.defined = true;
    r.value = p.a_side;
    r.diagnostics["pair_distance"] = p.angular_distance;
    return r;
  };
}

InvariantFunction l22_invariant_fn() {
  return [](const Representation& rep) {
    DirectionPair p = l22_invariant(rep);
    InvariantReport r;
    r.defined = true;
    r.value = p.a_side;
    r.diagnostics["pair_distance"] = p.angular_distance;
    return r;
  };
}

InvariantFunction n4_invariant_fn() {
  return [](const Representation& rep) { return n4_invariant(rep); };
}

InvariantFunction word_trace_fn(const GeneratorWord& word) {
  return [word](const Representation& rep) {
    InvariantReport r;
    r.defined = true;
    r.value = trace(evaluate_word(rep, word));
    return r;
  };
}

OrbitStats orbit_invariance_test(const Representation& rep, const Origami& origami,
                                 const InvariantFunction& candidate,
                                 const WordDistribution& dist, int steps, RandomStream& rng) {
  OrbitStats stats;
  stats.steps = steps;

  auto evaluate = [&](const Representation& r) -> std::optional<InvariantReport> {
    try {
      InvariantReport rep_value = candidate(r);
      if (!rep_value.defined) return std::nullopt;
      return rep_value;
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  std::optional<InvariantReport> base = evaluate(rep);
  Representation current = rep;
  double sum = 0.0, sum2 = 0.0;
  int defined_steps = 0;
  for (int s = 0; s < steps; ++s) {
    TwistWord w = random_word(origami, 1, dist.max_exponent, rng);
    current = apply_word(current, origami, w);
    std::optional<InvariantReport> now = evaluate(current);
    if (!base || !now) {
      ++stats.undefined_count;
      stats.series.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double drift = 0.0;
    if (std::holds_alternative<ProjectiveDirection>(base->value)) {
      drift = std::get<ProjectiveDirection>(now->value)
                  .angular_distance(std::get<ProjectiveDirection>(base->value));
    } else {
      drift = std::abs(std::get<double>(now->value) - std::get<double>(base->value));
    }
    stats.series.push_back(drift);
    stats.max_drift = std::max(stats.max_drift, drift);
    sum += drift;
    sum2 += drift * drift;
    ++defined_steps;
  }
  if (defined_steps > 0) {
    double mean = sum / defined_steps;
    stats.variance = sum2 / defined_steps - mean * mean;
  }
  stats.final_residual = residual(current).max;
  return stats;
}

}  // namespace twistlab
