#ifndef ROOTGEO_RNG_HPP
#define ROOTGEO_RNG_HPP

#include <cstdint>

namespace rootgeo {

// SplitMix64. Fixed across platforms so that seeded reports reproduce
// byte-for-byte; bounded draws use plain modulo, which is part of the
// documented sampling protocol.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform-ish draw in [0, n)
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  // draw in [-bound, bound]
  std::int64_t small_int(std::uint64_t bound) {
    return static_cast<std::int64_t>(below(2 * bound + 1)) - static_cast<std::int64_t>(bound);
  }

 private:
  std::uint64_t state_;
};

}  // namespace rootgeo

#endif
