#pragma once

#include <cmath>
#include <cstdint>

namespace twistlab {

/// Deterministic random stream (splitmix64 core, Box-Muller gaussians).
///
/// The generator is fully specified here rather than delegated to
/// std::normal_distribution so that identical seeds give identical byte
/// streams regardless of the standard library. Streams are value types;
/// derive() spawns statistically independent child streams from
/// (state, task index), which is how per-task reproducibility works in
/// the batch drivers.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  RandomStream derive(std::uint64_t task) const {
    // mix the task index into a copy of the current state
    std::uint64_t s = state_ + 0x9e3779b97f4a7c15ULL * (task + 1);
    RandomStream child(s);
    child.next_u64();
    return child;
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  /// Standard normal deviate.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace twistlab
