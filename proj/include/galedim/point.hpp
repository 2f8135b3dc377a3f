// Points of the covered space, in the three reproducible flavours the tests
// and the CLI need: eventually periodic symbol words u·v^ω, rational
// coordinates in [0,1)^n, and seeded pseudorandom symbol streams. All are
// immutable; the canonical representation address at any level is computed
// on demand.

#pragma once

#include <cstdint>
#include <gmpxx.h>

#include <string>
#include <vector>

namespace galedim {

class Cover;

std::uint64_t mix64(std::uint64_t x);  // splitmix64 finalizer

class PointRep {
 public:
  enum class Kind { word, coords, stream };

  // u·v^ω over the digit alphabet; cycle must be nonempty.
  static PointRep periodic_word(const std::string& prefix, const std::string& cycle);
  static PointRep coordinates(const std::vector<mpq_class>& xs);  // each in [0,1)
  static PointRep seeded_stream(std::uint64_t seed);

  Kind kind() const { return kind_; }
  const std::string& prefix() const { return prefix_; }
  const std::string& cycle() const { return cycle_; }
  const std::vector<mpq_class>& coords() const { return coords_; }
  std::uint64_t seed() const { return seed_; }

  // Value of the index-th symbol (0-based) of the canonical representation.
  unsigned symbol_at(const Cover& cover, std::size_t index) const;

  std::string id() const;  // "word:prefix:cycle", "coords:a,b", "stream:seed"

 private:
  PointRep() = default;
  Kind kind_ = Kind::word;
  std::string prefix_, cycle_;
  std::vector<mpq_class> coords_;
  std::uint64_t seed_ = 0;
};

}  // namespace galedim
