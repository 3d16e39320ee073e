#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "twistlab/errors.hpp"
#include "twistlab/permutation.hpp"

namespace twistlab {

enum class Direction { horizontal, vertical };

inline const char* direction_name(Direction d) {
  return d == Direction::horizontal ? "horizontal" : "vertical";
}

/// Edge generator families: a_i is the left edge of square i, b_i the
/// bottom edge. The c family only occurs in hand-coded presentations.
enum class Gen : int { a = 0, b = 1, c = 2 };

inline char gen_letter(Gen g) { return g == Gen::a ? 'a' : (g == Gen::b ? 'b' : 'c'); }

struct Letter {
  Gen kind;
  int index;     // one-based
  int exponent;  // +1 or -1

  bool operator==(const Letter&) const = default;
};

/// Freely reduced word in the edge generators.
class GeneratorWord {
 public:
  GeneratorWord() = default;
  explicit GeneratorWord(std::vector<Letter> letters);

  static GeneratorWord letter(Gen kind, int index, int exponent = 1) {
    return GeneratorWord({Letter{kind, index, exponent}});
  }

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  size_t size() const { return letters_.size(); }

  GeneratorWord inverse() const;
  friend GeneratorWord operator*(const GeneratorWord& u, const GeneratorWord& v);

  std::string str() const;

  bool operator==(const GeneratorWord&) const = default;

 private:
  std::vector<Letter> letters_;
};

/// Generators and relators of a surface group, either derived from an
/// origami (one relator per square) or hand-coded.
struct SurfacePresentation {
  enum class Source { origami, hand_coded };

  std::string name;
  Source source = Source::hand_coded;
  std::array<int, 3> generator_counts{0, 0, 0};  // a, b, c families
  std::vector<GeneratorWord> relators;
  // cycle notation of the defining permutations, set for origami-derived
  // presentations so serialized representations can rebuild their relators
  std::string sigma_text, sigma_prime_text;

  int count(Gen g) const { return generator_counts[static_cast<size_t>(g)]; }
  /// Throws InvalidArgument when a relator mentions an out-of-range index.
  void validate() const;
};

/// Maximal horizontal or vertical cylinder: a cycle of sigma
/// (horizontal) or sigma' (vertical); the circumference is the cycle
/// length.
struct Cylinder {
  Direction direction;
  std::vector<int> cycle;

  int circumference() const { return static_cast<int>(cycle.size()); }
  bool contains(int square) const;
};

/// Parabolic multitwist data for one direction: all cylinders twisted
/// simultaneously, cylinder j raised to lcm/circumference(j), which is
/// affine with shear lcm(circumferences).
struct Multitwist {
  long shear = 0;
  std::array<std::array<long, 2>, 2> matrix{{{1, 0}, {0, 1}}};
  std::vector<long> exponents;  // per cylinder, canonical order
};

/// Square-tiled surface given by the right-neighbor permutation sigma and
/// the top-neighbor permutation sigma' on squares {1, ..., d}.
class Origami {
 public:
  Origami(const Permutation& sigma, const Permutation& sigma_prime);

  static Origami parse(const std::string& sigma, const std::string& sigma_prime);

  int square_count() const { return d_; }
  const Permutation& sigma() const { return sigma_; }
  const Permutation& sigma_prime() const { return sigma_prime_; }

  /// Throws NotTransitive (with the orbit partition) when the pair does
  /// not generate a transitive action, i.e. the surface is disconnected.
  void validate() const;

  struct Topology {
    int vertex_count;
    int euler_characteristic;
    int genus;
  };

  /// Vertices are cycles of the corner permutation
  /// sigma'^-1 sigma^-1 sigma' sigma; with E = 2d and F = d this gives
  /// chi = V - d and genus (2 - chi)/2.
  Topology topology() const;

  std::vector<Cylinder> cylinders(Direction dir) const;

  /// Core curve of the cylinder based at the given square: product of
  /// bottom edges along a horizontal cylinder, of left edges along a
  /// vertical one. Throws BasepointOutsideCylinder.
  GeneratorWord core_word(const Cylinder& cyl, int basepoint) const;

  /// The word of the right-hand neighbor column (vertical) or the top
  /// neighbor row (horizontal): the opposite boundary of the cut along
  /// the core. Shares the trace of the core word on the representation
  /// variety.
  GeneratorWord opposite_boundary_word(const Cylinder& cyl, int basepoint) const;

  /// One relator per square: a_i b_{sigma'(i)} a_{sigma(i)}^-1 b_i^-1.
  SurfacePresentation square_relators() const;

  Multitwist multitwist_matrix(Direction dir) const;

 private:
  int d_;
  Permutation sigma_, sigma_prime_;
};

/// Named example surface. The origami member is empty for hand-coded
/// presentations (n4).
struct RegistryEntry {
  std::string name;
  std::string description;
  std::optional<Origami> origami;
  SurfacePresentation presentation;
  std::optional<int> genus;  // orientable examples only
};

/// Known names: fig1, sprime, l22, n4 (case-insensitive).
/// Throws UnknownName otherwise.
RegistryEntry registry(const std::string& name);

std::vector<std::string> registry_names();

}  // namespace twistlab
