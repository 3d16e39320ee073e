#include "twistlab/twist.hpp"

#include <cctype>
#include <sstream>

namespace twistlab {

namespace {

const Cylinder& select_cylinder(const std::vector<Cylinder>& cyls, Direction dir, int index) {
  if (index < 1 || index > static_cast<int>(cyls.size())) {
    raise(ErrorCode::InvalidArgument,
          "no " + std::string(direction_name(dir)) + " cylinder " + std::to_string(index));
  }
  return cyls[static_cast<size_t>(index) - 1];
}

// Core holonomy of the cylinder based at square i: product of crossing
// direction images along the cycle starting from i.
UnitQuaternion based_holonomy(const Representation& rep, const Origami& origami,
                              const Cylinder& cyl, int basepoint) {
  const Permutation& along =
      cyl.direction == Direction::horizontal ? origami.sigma() : origami.sigma_prime();
  Gen kind = cyl.direction == Direction::horizontal ? Gen::b : Gen::a;
  UnitQuaternion h;
  int cur = basepoint;
  for (int k = 0; k < cyl.circumference(); ++k) {
    h = h * rep.image(kind, cur);
    cur = along.apply(cur);
  }
  return h;
}

}  // namespace

std::string TwistGenerator::str() const {
  std::ostringstream os;
  os << (direction == Direction::vertical ? 'V' : 'H') << cylinder;
  if (exponent != 1) os << '^' << exponent;
  return os.str();
}

std::string TwistWord::str() const {
  std::ostringstream os;
  for (size_t k = 0; k < gens.size(); ++k) {
    if (k) os << ' ';
    os << gens[k].str();
  }
  return os.str();
}

TwistWord TwistWord::inverse() const {
  TwistWord out;
  for (auto it = gens.rbegin(); it != gens.rend(); ++it) {
    out.gens.push_back(TwistGenerator{it->direction, it->cylinder, -it->exponent});
  }
  return out;
}

TwistWord TwistWord::parse(const std::string& text) {
  TwistWord out;
  size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    raise(ErrorCode::ParseError, msg + " at position " + std::to_string(pos) + " in \"" + text + "\"");
  };
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == text.size()) break;
    char c = text[pos];
    Direction dir;
    if (c == 'V' || c == 'v') {
      dir = Direction::vertical;
    } else if (c == 'H' || c == 'h') {
      dir = Direction::horizontal;
    } else {
      fail("expected V or H");
      return out;
    }
    ++pos;
    if (pos == text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
      fail("expected cylinder index");
    }
    int cyl = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      cyl = cyl * 10 + (text[pos] - '0');
      ++pos;
    }
    int exp = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      int sign = 1;
      if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        sign = text[pos] == '-' ? -1 : 1;
        ++pos;
      }
      if (pos == text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
        fail("expected exponent");
      }
      int mag = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        mag = mag * 10 + (text[pos] - '0');
        ++pos;
      }
      exp = sign * mag;
    }
    out.gens.push_back(TwistGenerator{dir, cyl, exp});
  }
  return out;
}

Representation twist(const Representation& rep, const Origami& origami, const TwistGenerator& g) {
  if (g.exponent == 0) return rep;
  std::vector<Cylinder> cyls = origami.cylinders(g.direction);
  const Cylinder& cyl = select_cylinder(cyls, g.direction, g.cylinder);
  Gen moving = g.direction == Direction::vertical ? Gen::b : Gen::a;

  Representation out = rep;
  for (int i : cyl.cycle) {
    UnitQuaternion h = based_holonomy(rep, origami, cyl, i);
    out.set(moving, i, h.pow(g.exponent) * rep.image(moving, i));
  }
  return out;
}

Representation goldman_flow(const Representation& rep, const Origami& origami, Direction dir,
                            int cylinder, double t) {
  std::vector<Cylinder> cyls = origami.cylinders(dir);
  const Cylinder& cyl = select_cylinder(cyls, dir, cylinder);
  Gen moving = dir == Direction::vertical ? Gen::b : Gen::a;

  UnitQuaternion base = based_holonomy(rep, origami, cyl, cyl.cycle[0]);
  if (base.distance_to_center() < 1e-12) {
    raise(ErrorCode::CentralHolonomy,
          "core holonomy is central (trace " + std::to_string(trace(base)) + ")");
  }

  Representation out = rep;
  for (int i : cyl.cycle) {
    UnitQuaternion h = based_holonomy(rep, origami, cyl, i);
    out.set(moving, i, one_param(h, t) * rep.image(moving, i));
  }
  return out;
}

Representation fiber_move(const Representation& rep, const Origami& origami, Direction dir,
                          int cylinder, double t) {
  return goldman_flow(rep, origami, dir, cylinder, t);
}

Representation apply_word(const Representation& rep, const Origami& origami, const TwistWord& w) {
  Representation out = rep;
  for (const TwistGenerator& g : w.gens) {
    out = twist(out, origami, g);
  }
  return out;
}

TwistWord random_word(const Origami& origami, int steps, int max_exponent, RandomStream& rng) {
  int h = static_cast<int>(origami.cylinders(Direction::horizontal).size());
  int v = static_cast<int>(origami.cylinders(Direction::vertical).size());
  TwistWord out;
  for (int s = 0; s < steps; ++s) {
    bool vertical = rng.uniform_int(0, 1) == 1;
    int count = vertical ? v : h;
    int cyl = rng.uniform_int(1, count);
    int exp = 0;
    while (exp == 0) exp = rng.uniform_int(-max_exponent, max_exponent);
    out.gens.push_back(
        TwistGenerator{vertical ? Direction::vertical : Direction::horizontal, cyl, exp});
  }
  return out;
}

}  // namespace twistlab
