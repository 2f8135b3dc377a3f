#include "galedim/point.hpp"

#include <sstream>

#include "galedim/cover.hpp"
#include "galedim/error.hpp"
#include "galedim/numeric.hpp"

namespace galedim {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

PointRep PointRep::periodic_word(const std::string& prefix, const std::string& cycle) {
  if (cycle.empty()) throw Error::bad_input("periodic word: cycle must be nonempty");
  for (char c : prefix + cycle)
    if (symbol_value(c) < 0) throw Error::bad_input("periodic word: invalid symbol");
  PointRep p;
  p.kind_ = Kind::word;
  p.prefix_ = prefix;
  p.cycle_ = cycle;
  return p;
}

PointRep PointRep::coordinates(const std::vector<mpq_class>& xs) {
  if (xs.empty()) throw Error::bad_input("coordinates: need at least one axis");
  for (const auto& x : xs)
    if (x < 0 || x >= 1) throw Error::bad_input("coordinate outside [0,1): " + rational_str(x));
  PointRep p;
  p.kind_ = Kind::coords;
  p.coords_ = xs;
  return p;
}

PointRep PointRep::seeded_stream(std::uint64_t seed) {
  PointRep p;
  p.kind_ = Kind::stream;
  p.seed_ = seed;
  return p;
}

namespace {

// Digit of x at position m+1 in base b: floor(x * b^{m+1}) mod b.
unsigned coordinate_digit(const mpq_class& x, const mpz_class& base, std::size_t m) {
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(m + 1));
  mpz_class scaled_num = x.get_num() * pw;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), x.get_den().get_mpz_t());
  mpz_class digit;
  mpz_fdiv_r(digit.get_mpz_t(), q.get_mpz_t(), base.get_mpz_t());
  return static_cast<unsigned>(digit.get_ui());
}

}  // namespace

unsigned PointRep::symbol_at(const Cover& cover, std::size_t index) const {
  switch (kind_) {
    case Kind::word: {
      char c;
      if (index < prefix_.size()) c = prefix_[index];
      else c = cycle_[(index - prefix_.size()) % cycle_.size()];
      int v = symbol_value(c);
      if (v < 0 || static_cast<unsigned>(v) >= cover.alphabet_size())
        throw Error::bad_input("word symbol outside the cover alphabet");
      return static_cast<unsigned>(v);
    }
    case Kind::coords: {
      unsigned dim = cover.kind() == CoverKind::cube ? cover.cube_dim() : 1;
      if (coords_.size() != dim)
        throw Error::bad_input("coordinate arity does not match the cover dimension");
      const mpz_class& b = cover.scale_base();
      unsigned value = 0, place = 1;
      for (unsigned j = 0; j < dim; ++j) {
        value += coordinate_digit(coords_[j], b, index) * place;
        place *= static_cast<unsigned>(b.get_ui());
      }
      return value;
    }
    case Kind::stream:
      return static_cast<unsigned>(mix64(seed_ ^ (0xA0761D6478BD642FULL * (index + 1))) %
                                   cover.alphabet_size());
  }
  throw Error::internal("unreachable point kind");
}

std::string PointRep::id() const {
  switch (kind_) {
    case Kind::word:
      return "word:" + prefix_ + ":" + cycle_;
    case Kind::coords: {
      std::ostringstream os;
      os << "coords:";
      for (size_t i = 0; i < coords_.size(); ++i) {
        if (i) os << ",";
        os << rational_str(coords_[i]);
      }
      return os.str();
    }
    case Kind::stream:
      return "stream:" + std::to_string(seed_);
  }
  return "?";
}

}  // namespace galedim
