#include "galedim/cover.hpp"

#include <cmath>

#include "galedim/error.hpp"
#include "galedim/point.hpp"

namespace galedim {

char symbol_char(unsigned value) {
  if (value < 10) return static_cast<char>('0' + value);
  if (value < 36) return static_cast<char>('a' + (value - 10));
  throw Error::bad_input("symbol value out of range (alphabet capped at 36)");
}

int symbol_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  return -1;
}

Cover Cover::symbolic(unsigned k) {
  if (k < 2 || k > 36) throw Error::bad_input("symbolic cover: alphabet size must be in [2, 36]");
  Cover c;
  c.kind_ = CoverKind::symbolic;
  c.branching_ = k;
  c.scale_base_ = static_cast<long>(k);
  c.zeta_ = mpq_class(1, k);
  return c;
}

Cover Cover::cube(unsigned dim, unsigned base) {
  if (dim < 1) throw Error::bad_input("cube cover: dimension must be >= 1");
  if (base < 2) throw Error::bad_input("cube cover: base must be >= 2");
  double sym = std::pow(static_cast<double>(base), static_cast<double>(dim));
  if (sym > 36.0) throw Error::bad_input("cube cover: base^dim exceeds the 36-symbol alphabet");
  Cover c;
  c.kind_ = CoverKind::cube;
  c.branching_ = 1;
  for (unsigned i = 0; i < dim; ++i) c.branching_ *= base;
  c.dim_ = dim;
  c.scale_base_ = static_cast<long>(base);
  c.zeta_ = mpq_class(1, base);
  return c;
}

Cover Cover::with_zeta(const mpq_class& zeta) const {
  if (zeta <= 0 || zeta >= 1) throw Error::bad_input("zeta must lie in (0, 1)");
  Cover c(*this);
  c.zeta_ = zeta;
  return c;
}

ExactScale Cover::c_constant() const {
  // symbolic: a single cylinder covers any small set, but the smallest one
  // containing it can have diameter equal to the set's, so the strict
  // factor bound needs c = 2. cube: a small box straddles at most one grid
  // boundary per axis, 2 cubes each, c = 2^dim.
  if (kind_ == CoverKind::symbolic) return ExactScale::power(2, 1);
  return ExactScale::power(2, static_cast<long>(dim_));
}

bool Cover::valid_address(const Address& a) const {
  for (char ch : a) {
    int v = symbol_value(ch);
    if (v < 0 || static_cast<unsigned>(v) >= branching_) return false;
  }
  return true;
}

std::vector<Address> Cover::children(const Address& a) const {
  if (!valid_address(a)) throw Error::bad_input("malformed address: " + a);
  std::vector<Address> out;
  out.reserve(branching_);
  for (unsigned v = 0; v < branching_; ++v) out.push_back(a + symbol_char(v));
  return out;
}

std::optional<Address> Cover::parent(const Address& a) const {
  if (!valid_address(a)) throw Error::bad_input("malformed address: " + a);
  if (a.empty()) return std::nullopt;
  return a.substr(0, a.size() - 1);
}

ExactScale Cover::diam_at_level(size_t level) const {
  if (level == 0) return ExactScale::one();
  return ExactScale::power(scale_base_, -static_cast<long>(level));
}

ExactScale Cover::diam(const Address& a) const {
  if (!valid_address(a)) throw Error::bad_input("malformed address: " + a);
  return diam_at_level(a.size());
}

RootContextPtr Cover::field(unsigned long order) const {
  return std::make_shared<const RootContext>(scale_base_, order < 1 ? 1 : order);
}

std::string Cover::describe() const {
  if (kind_ == CoverKind::symbolic) return "symbolic:" + std::to_string(branching_);
  return "cube:" + std::to_string(dim_) + ":" + scale_base_.get_str();
}

namespace {

// branching^depth with an enumeration guard.
std::uint64_t tree_width(unsigned branching, unsigned depth, std::uint64_t cap) {
  std::uint64_t w = 1;
  for (unsigned i = 0; i < depth; ++i) {
    if (w > cap / branching) throw Error::bad_input("enumeration too large at this depth");
    w *= branching;
  }
  return w;
}

}  // namespace

NiceAxiomReport validate_nice_axioms(const Cover& cover, unsigned depth) {
  if (depth < 1) throw Error::bad_input("validate_nice_axioms: depth must be >= 1");
  tree_width(cover.branching(), depth, 4u << 20);
  NiceAxiomReport rep;
  rep.c_cover_note =
      "c-cover property certified analytically for built-in covers (c = " +
      cover.c_constant().str() + "), not exhaustively checked";

  // Small size is a per-level fact here: all elements of a level share one
  // diameter.
  for (unsigned n = 0; n <= depth; ++n) {
    mpq_class bound = mpq_pow_si(cover.zeta(), static_cast<long>(n));
    if (rep.small_size.pass && cmp(cover.diam_at_level(n), bound) > 0) {
      rep.small_size.pass = false;
      rep.small_size.witness = Address(n, '0');
      rep.small_size.detail = "diam " + cover.diam_at_level(n).str() + " > zeta^" +
                              std::to_string(n) + " = " + rational_str(bound);
    }
  }

  std::vector<Address> frontier{Address{}};
  rep.elements_checked = 1;
  for (unsigned n = 0; n < depth; ++n) {
    std::vector<Address> next;
    next.reserve(frontier.size() * cover.branching());
    for (const Address& a : frontier) {
      auto kids = cover.children(a);
      if (rep.branching.pass && kids.size() != cover.branching()) {
        rep.branching.pass = false;
        rep.branching.witness = a;
        rep.branching.detail = "expected " + std::to_string(cover.branching()) +
                               " children, got " + std::to_string(kids.size());
      }
      for (const Address& k : kids) {
        if (rep.branching.pass && (!cover.valid_address(k) || k.size() != a.size() + 1)) {
          rep.branching.pass = false;
          rep.branching.witness = k;
          rep.branching.detail = "child is not a valid next-level address";
        }
        auto p = cover.parent(k);
        if (rep.ancestry.pass && (!p || *p != a)) {
          rep.ancestry.pass = false;
          rep.ancestry.witness = k;
          rep.ancestry.detail = "parent does not round-trip to the generating element";
        }
        next.push_back(k);
      }
    }
    rep.elements_checked += next.size();
    frontier = std::move(next);
  }
  return rep;
}

std::vector<Address> representation(const Cover& cover, const PointRep& point, size_t depth) {
  std::vector<Address> out;
  out.reserve(depth + 1);
  Address a;
  out.push_back(a);
  for (size_t i = 0; i < depth; ++i) {
    unsigned v = point.symbol_at(cover, i);
    a.push_back(symbol_char(v));
    out.push_back(a);
  }
  return out;
}

std::vector<PointRep> dense_sample(const Cover& cover, unsigned depth) {
  std::uint64_t width = tree_width(cover.branching(), depth, 1u << 20);
  std::vector<PointRep> out;
  out.reserve(width);
  std::vector<Address> frontier{Address{}};
  for (unsigned n = 0; n < depth; ++n) {
    std::vector<Address> next;
    next.reserve(frontier.size() * cover.branching());
    for (const Address& a : frontier)
      for (const Address& k : cover.children(a)) next.push_back(k);
    frontier = std::move(next);
  }
  for (const Address& a : frontier) out.push_back(PointRep::periodic_word(a, "0"));
  return out;
}

std::vector<mpq_class> cube_corner(const Cover& cover, const Address& a) {
  if (cover.kind() != CoverKind::cube) throw Error::bad_input("cube_corner: not a cube cover");
  if (!cover.valid_address(a)) throw Error::bad_input("malformed address: " + a);
  unsigned dim = cover.cube_dim();
  unsigned base = static_cast<unsigned>(cover.scale_base().get_ui());
  std::vector<mpq_class> corner(dim, mpq_class(0));
  mpq_class side(1);
  for (char ch : a) {
    side /= static_cast<long>(base);
    unsigned v = static_cast<unsigned>(symbol_value(ch));
    for (unsigned j = 0; j < dim; ++j) {
      corner[j] += side * static_cast<long>(v % base);
      v /= base;
    }
  }
  return corner;
}

}  // namespace galedim
