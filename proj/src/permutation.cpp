#include "twistlab/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace twistlab {

Permutation Permutation::identity(int degree) {
  Permutation p;
  p.img_.resize(static_cast<size_t>(degree));
  std::iota(p.img_.begin(), p.img_.end(), 1);
  return p;
}

Permutation Permutation::parse(const std::string& text, int min_degree) {
  std::vector<std::vector<int>> cycles;
  size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    raise(ErrorCode::ParseError, msg + " at position " + std::to_string(pos) + " in \"" + text + "\"");
  };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };

  skip_ws();
  if (pos == text.size()) fail("empty permutation");
  int max_index = min_degree;
  while (pos < text.size()) {
    if (text[pos] != '(') fail("expected '('");
    ++pos;
    std::vector<int> cycle;
    while (true) {
      skip_ws();
      if (pos < text.size() && (text[pos] == ',')) {
        ++pos;
        skip_ws();
      }
      if (pos >= text.size()) fail("unterminated cycle");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[pos]))) fail("expected index");
      int value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + (text[pos] - '0');
        ++pos;
      }
      if (value < 1) fail("indices are one-based");
      cycle.push_back(value);
      max_index = std::max(max_index, value);
    }
    if (cycle.empty()) fail("empty cycle");
    cycles.push_back(std::move(cycle));
    skip_ws();
  }

  Permutation p = identity(max_index);
  std::vector<bool> seen(static_cast<size_t>(max_index) + 1, false);
  for (const auto& cycle : cycles) {
    for (int v : cycle) {
      if (seen[static_cast<size_t>(v)]) {
        raise(ErrorCode::ParseError, "index " + std::to_string(v) + " repeated in \"" + text + "\"");
      }
      seen[static_cast<size_t>(v)] = true;
    }
    for (size_t k = 0; k < cycle.size(); ++k) {
      p.img_[static_cast<size_t>(cycle[k]) - 1] = cycle[(k + 1) % cycle.size()];
    }
  }
  return p;
}

Permutation Permutation::inverse() const {
  Permutation p = identity(degree());
  for (int i = 1; i <= degree(); ++i) {
    p.img_[static_cast<size_t>(apply(i)) - 1] = i;
  }
  return p;
}

Permutation operator*(const Permutation& p, const Permutation& q) {
  int d = std::max(p.degree(), q.degree());
  Permutation pe = p.extended(d);
  Permutation qe = q.extended(d);
  Permutation r = Permutation::identity(d);
  for (int i = 1; i <= d; ++i) {
    r.img_[static_cast<size_t>(i) - 1] = pe.apply(qe.apply(i));
  }
  return r;
}

Permutation Permutation::extended(int degree) const {
  if (degree <= this->degree()) return *this;
  Permutation p = identity(degree);
  std::copy(img_.begin(), img_.end(), p.img_.begin());
  return p;
}

std::vector<std::vector<int>> Permutation::cycles(bool include_fixed) const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(img_.size() + 1, false);
  for (int start = 1; start <= degree(); ++start) {
    if (seen[static_cast<size_t>(start)]) continue;
    std::vector<int> cycle;
    int cur = start;
    do {
      seen[static_cast<size_t>(cur)] = true;
      cycle.push_back(cur);
      cur = apply(cur);
    } while (cur != start);
    if (include_fixed || cycle.size() > 1) out.push_back(std::move(cycle));
  }
  return out;
}

std::string Permutation::cycle_string() const {
  std::ostringstream os;
  for (const auto& cycle : cycles(true)) {
    os << '(';
    for (size_t k = 0; k < cycle.size(); ++k) {
      if (k) os << ' ';
      os << cycle[k];
    }
    os << ')';
  }
  return os.str();
}

}  // namespace twistlab
