#include "twistlab/origami.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace twistlab {

GeneratorWord::GeneratorWord(std::vector<Letter> letters) {
  for (const Letter& l : letters) {
    if (l.exponent != 1 && l.exponent != -1) {
      raise(ErrorCode::InvalidArgument, "letter exponent must be +-1");
    }
    if (!letters_.empty() && letters_.back().kind == l.kind &&
        letters_.back().index == l.index && letters_.back().exponent == -l.exponent) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

GeneratorWord GeneratorWord::inverse() const {
  std::vector<Letter> rev;
  rev.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    rev.push_back(Letter{it->kind, it->index, -it->exponent});
  }
  return GeneratorWord(std::move(rev));
}

GeneratorWord operator*(const GeneratorWord& u, const GeneratorWord& v) {
  std::vector<Letter> all = u.letters();
  all.insert(all.end(), v.letters().begin(), v.letters().end());
  return GeneratorWord(std::move(all));
}

std::string GeneratorWord::str() const {
  if (letters_.empty()) return "1";
  std::ostringstream os;
  for (size_t k = 0; k < letters_.size(); ++k) {
    if (k) os << ' ';
    os << gen_letter(letters_[k].kind) << letters_[k].index;
    if (letters_[k].exponent != 1) os << "^-1";
  }
  return os.str();
}

void SurfacePresentation::validate() const {
  for (const GeneratorWord& relator : relators) {
    for (const Letter& l : relator.letters()) {
      int n = count(l.kind);
      if (l.index < 1 || l.index > n) {
        raise(ErrorCode::InvalidArgument,
              "relator letter " + std::string(1, gen_letter(l.kind)) + std::to_string(l.index) +
                  " out of range in presentation " + name);
      }
    }
  }
}

bool Cylinder::contains(int square) const {
  return std::find(cycle.begin(), cycle.end(), square) != cycle.end();
}

Origami::Origami(const Permutation& sigma, const Permutation& sigma_prime)
    : d_(std::max(sigma.degree(), sigma_prime.degree())),
      sigma_(sigma.extended(d_)),
      sigma_prime_(sigma_prime.extended(d_)) {
  if (d_ < 1) {
    raise(ErrorCode::InvalidArgument, "origami needs at least one square");
  }
}

Origami Origami::parse(const std::string& sigma, const std::string& sigma_prime) {
  return Origami(Permutation::parse(sigma), Permutation::parse(sigma_prime));
}

void Origami::validate() const {
  std::vector<int> component(static_cast<size_t>(d_) + 1, 0);
  std::vector<int> stack;
  int components = 0;
  for (int start = 1; start <= d_; ++start) {
    if (component[static_cast<size_t>(start)]) continue;
    ++components;
    stack.push_back(start);
    component[static_cast<size_t>(start)] = components;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int next : {sigma_.apply(i), sigma_.inverse().apply(i), sigma_prime_.apply(i),
                       sigma_prime_.inverse().apply(i)}) {
        if (!component[static_cast<size_t>(next)]) {
          component[static_cast<size_t>(next)] = components;
          stack.push_back(next);
        }
      }
    }
  }
  if (components > 1) {
    std::ostringstream os;
    os << "squares split into " << components << " orbits:";
    for (int c = 1; c <= components; ++c) {
      os << " {";
      bool first = true;
      for (int i = 1; i <= d_; ++i) {
        if (component[static_cast<size_t>(i)] == c) {
          if (!first) os << ' ';
          os << i;
          first = false;
        }
      }
      os << '}';
    }
    raise(ErrorCode::NotTransitive, os.str());
  }
}

Origami::Topology Origami::topology() const {
  Permutation corner =
      sigma_prime_.inverse() * sigma_.inverse() * sigma_prime_ * sigma_;
  int vertices = corner.cycle_count();
  int chi = vertices - d_;  // V - E + F with E = 2d, F = d
  return Topology{vertices, chi, (2 - chi) / 2};
}

std::vector<Cylinder> Origami::cylinders(Direction dir) const {
  const Permutation& p = dir == Direction::horizontal ? sigma_ : sigma_prime_;
  std::vector<Cylinder> out;
  for (auto& cycle : p.cycles(true)) {
    out.push_back(Cylinder{dir, std::move(cycle)});
  }
  return out;
}

GeneratorWord Origami::core_word(const Cylinder& cyl, int basepoint) const {
  if (!cyl.contains(basepoint)) {
    raise(ErrorCode::BasepointOutsideCylinder,
          "square " + std::to_string(basepoint) + " not in cylinder");
  }
  const Permutation& p = cyl.direction == Direction::horizontal ? sigma_ : sigma_prime_;
  Gen kind = cyl.direction == Direction::horizontal ? Gen::b : Gen::a;
  std::vector<Letter> letters;
  int cur = basepoint;
  for (int k = 0; k < cyl.circumference(); ++k) {
    letters.push_back(Letter{kind, cur, +1});
    cur = p.apply(cur);
  }
  return GeneratorWord(std::move(letters));
}

GeneratorWord Origami::opposite_boundary_word(const Cylinder& cyl, int basepoint) const {
  if (!cyl.contains(basepoint)) {
    raise(ErrorCode::BasepointOutsideCylinder,
          "square " + std::to_string(basepoint) + " not in cylinder");
  }
  const Permutation& along = cyl.direction == Direction::horizontal ? sigma_ : sigma_prime_;
  const Permutation& across = cyl.direction == Direction::horizontal ? sigma_prime_ : sigma_;
  Gen kind = cyl.direction == Direction::horizontal ? Gen::b : Gen::a;
  std::vector<Letter> letters;
  int cur = basepoint;
  for (int k = 0; k < cyl.circumference(); ++k) {
    letters.push_back(Letter{kind, across.apply(cur), +1});
    cur = along.apply(cur);
  }
  return GeneratorWord(std::move(letters));
}

SurfacePresentation Origami::square_relators() const {
  SurfacePresentation p;
  p.name = "origami";
  p.source = SurfacePresentation::Source::origami;
  p.generator_counts = {d_, d_, 0};
  p.sigma_text = sigma_.cycle_string();
  p.sigma_prime_text = sigma_prime_.cycle_string();
  for (int i = 1; i <= d_; ++i) {
    p.relators.push_back(GeneratorWord({Letter{Gen::a, i, +1},
                                        Letter{Gen::b, sigma_prime_.apply(i), +1},
                                        Letter{Gen::a, sigma_.apply(i), -1},
                                        Letter{Gen::b, i, -1}}));
  }
  return p;
}

Multitwist Origami::multitwist_matrix(Direction dir) const {
  Multitwist out;
  long lcm = 1;
  std::vector<Cylinder> cyls = cylinders(dir);
  for (const Cylinder& c : cyls) {
    lcm = std::lcm(lcm, static_cast<long>(c.circumference()));
  }
  out.shear = lcm;
  for (const Cylinder& c : cyls) {
    out.exponents.push_back(lcm / c.circumference());
  }
  if (dir == Direction::horizontal) {
    out.matrix = {{{1, lcm}, {0, 1}}};
  } else {
    out.matrix = {{{1, 0}, {lcm, 1}}};
  }
  return out;
}

namespace {

SurfacePresentation n4_presentation() {
  // Genus-4 non-orientable example: three filling curves meeting
  // pairwise once, edge generators a1, a2, b1, b2, c1, c2 with relations
  //   a1 b1 = b2 a2,  c2^-1 a1 c1 = a2,  c2^-1 b1 c1 = b2.
  SurfacePresentation p;
  p.name = "n4";
  p.source = SurfacePresentation::Source::hand_coded;
  p.generator_counts = {2, 2, 2};
  p.relators.push_back(GeneratorWord({Letter{Gen::a, 1, +1}, Letter{Gen::b, 1, +1},
                                      Letter{Gen::a, 2, -1}, Letter{Gen::b, 2, -1}}));
  p.relators.push_back(GeneratorWord({Letter{Gen::c, 2, -1}, Letter{Gen::a, 1, +1},
                                      Letter{Gen::c, 1, +1}, Letter{Gen::a, 2, -1}}));
  p.relators.push_back(GeneratorWord({Letter{Gen::c, 2, -1}, Letter{Gen::b, 1, +1},
                                      Letter{Gen::c, 1, +1}, Letter{Gen::b, 2, -1}}));
  return p;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

RegistryEntry registry(const std::string& name) {
  std::string key = lower(name);
  if (key == "fig1") {
    Origami o = Origami::parse("(1 2 3 4)", "(1 3 2 4)");
    SurfacePresentation p = o.square_relators();
    p.name = key;
    return RegistryEntry{key, "four squares, one cylinder in each direction, genus 2",
                         o, p, 2};
  }
  if (key == "sprime") {
    Origami o = Origami::parse("(1)(2 3)", "(1 2 3)");
    SurfacePresentation p = o.square_relators();
    p.name = key;
    return RegistryEntry{key, "three squares with a single vertex, genus 2", o, p, 2};
  }
  if (key == "l22") {
    Origami o = Origami::parse("(1 2)(3)", "(1 3)(2)");
    SurfacePresentation p = o.square_relators();
    p.name = key;
    return RegistryEntry{key, "L-shaped three-square surface, two cylinders per direction, genus 2",
                         o, p, 2};
  }
  if (key == "n4") {
    return RegistryEntry{key, "genus-4 non-orientable surface, hand-coded presentation",
                         std::nullopt, n4_presentation(), std::nullopt};
  }
  raise(ErrorCode::UnknownName, "no surface named \"" + name + "\"");
}

std::vector<std::string> registry_names() { return {"fig1", "sprime", "l22", "n4"}; }

}  // namespace twistlab
