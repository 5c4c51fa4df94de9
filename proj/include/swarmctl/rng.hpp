#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "swarmctl/vec2.hpp"

namespace swarmctl {

// splitmix64 stream with hand-rolled uniform/normal conversion. Standard
// library distributions are implementation-defined, so every draw goes
// through this class to keep runs byte-stable across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive range.
  int uniform_int(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  // Box-Muller; the spare draw is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Pure function of (base, stream): independent of draw history, so
  // parallel workers can derive their seeds in any order.
  static std::uint64_t derive(std::uint64_t base, std::uint64_t stream) {
    Rng mixer(base ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
    mixer.next_u64();
    return mixer.next_u64();
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
    int j = rng.uniform_int(0, i);
    std::swap(v[i], v[static_cast<std::size_t>(j)]);
  }
}

}  // namespace swarmctl
