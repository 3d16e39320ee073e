#pragma once

#include <memory>
#include <string>
#include <vector>

#include "twistlab/origami.hpp"
#include "twistlab/quat.hpp"
#include "twistlab/rng.hpp"

namespace twistlab {

/// Per-relator deviations |rho(relator) - 1| and their maximum.
struct Residual {
  std::vector<double> per_relator;
  double max = 0.0;
};

/// Point of the representation variety: an assignment of unit quaternions
/// to the edge generators of a presentation.
class Representation {
 public:
  explicit Representation(std::shared_ptr<const SurfacePresentation> presentation);
  explicit Representation(const SurfacePresentation& presentation);

  const SurfacePresentation& presentation() const { return *presentation_; }
  std::shared_ptr<const SurfacePresentation> presentation_ptr() const { return presentation_; }

  void set(Gen kind, int index, const UnitQuaternion& value);
  bool assigned(Gen kind, int index) const;
  /// Throws UnassignedGenerator.
  const UnitQuaternion& image(Gen kind, int index) const;

  /// Conjugates every generator image by g.
  Representation conjugated(const UnitQuaternion& g) const;

 private:
  std::shared_ptr<const SurfacePresentation> presentation_;
  std::array<std::vector<UnitQuaternion>, 3> images_;
  std::array<std::vector<char>, 3> assigned_;
};

UnitQuaternion evaluate_word(const Representation& rep, const GeneratorWord& word);

Residual residual(const Representation& rep);

/// Trace observables tr(rho(w)) for a list of words.
std::vector<double> probe(const Representation& rep, const std::vector<GeneratorWord>& words);

/// Projected gradient descent for F = sum_r |rho(r) - 1|^2 over the
/// product of unit spheres, with backtracking line search. Initial point
/// is Haar per stream; success means final max relator deviation below
/// 10 * tol (the reported residual is usually below tol). Throws
/// NoConvergence after max_iter without reaching tol; reseeding is the
/// caller's retry path.
Representation sample_descent(const SurfacePresentation& presentation, RandomStream& rng,
                              double tol = 1e-12, int max_iter = 40000);

/// Constructive sampler for origami presentations: Haar left-edge images,
/// one trace repair per vertical cylinder so the two boundary holonomies
/// of the cut become conjugate, then a random point of the conjugating
/// circle per cylinder, propagated around the cycle. Residual is at
/// rounding level. Throws DegenerateCycle when a repair equation
/// degenerates (caller may resample).
Representation sample_propagate(const Origami& origami, RandomStream& rng);

/// Constructive sampler for the n4 presentation with prescribed
/// (A1, A2) marginal: B1 on the sphere tr(X A1^-1) = tr(A1 X A2^-2),
/// B2 = A1 B1 A2^-1, and (C1, C2) from the isoclinic factorization of the
/// orientation-preserving isometry sending (A1, B1) to (A2, B2).
/// Throws DegenerateSphere when no admissible B1 is found.
Representation sample_n4(const UnitQuaternion& a1, const UnitQuaternion& a2, RandomStream& rng);

/// Text serialization, one generator per line with 17 significant digits;
/// round-trips exactly.
std::string serialize(const Representation& rep);
Representation deserialize(const std::string& text);

}  // namespace twistlab
