#pragma once

#include <cstdint>
#include <random>

namespace galedim {

// Deterministic across platforms: mt19937_64 is fully specified by the
// standard and `below` uses plain modulo, trading a negligible bias for
// reproducible streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }  // n > 0
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace galedim
