// ============================================================================
// cover.hpp — the two built-in nice-cover families and their tree geometry
// ============================================================================
//
// A cover element is named by an Address: a string over the digit alphabet
// 0..9a..z, one symbol per level. Level 0 is the root "" (the whole space).
//
//   symbolic(k)   cylinders of the full k-shift; metric 2^{-|lcp|}-style
//                 ultrametric scaled so a level-m cylinder has diameter
//                 k^{-m}; branching k; c = 2 (one cylinder always covers,
//                 but its diameter can equal the covered set's, so the
//                 strict diameter factor needs 2).
//   cube(n, b)    half-open grid cubes of [0,1)^n under the sup norm; a
//                 level-m cube has side (and diameter) b^{-m}; branching
//                 b^n (one symbol encodes all n axis digits); c = 2^n.
//
// Both families are partitions at every level, so each point has a unique
// address per level and representations need no search. zeta is stored as a
// descriptor field (default 1/k resp. 1/b); with_zeta() deliberately breaks
// it so the axiom checker's small-size test can be exercised.
// ============================================================================

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "galedim/exact.hpp"

namespace galedim {

using Address = std::string;

inline size_t level_of(const Address& a) { return a.size(); }

// Digit alphabet: values 0..35 as 0-9 then a-z.
char symbol_char(unsigned value);
int symbol_value(char c);  // -1 for characters outside the alphabet

enum class CoverKind { symbolic, cube };

class Cover {
 public:
  static Cover symbolic(unsigned k);
  static Cover cube(unsigned dim, unsigned base);
  Cover with_zeta(const mpq_class& zeta) const;

  CoverKind kind() const { return kind_; }
  unsigned alphabet_size() const { return branching_; }
  unsigned branching() const { return branching_; }
  unsigned cube_dim() const { return dim_; }
  // Geometric base B: diameters are B^{-level}. k for symbolic, b for cube.
  const mpz_class& scale_base() const { return scale_base_; }
  const mpq_class& zeta() const { return zeta_; }
  ExactScale c_constant() const;

  bool valid_address(const Address& a) const;
  std::vector<Address> children(const Address& a) const;
  // Root has no parent.
  std::optional<Address> parent(const Address& a) const;
  ExactScale diam_at_level(size_t level) const;
  ExactScale diam(const Address& a) const;

  // The coefficient field Q[base^(-1/order)] shared by all exact values on
  // this cover with exponent denominators dividing `order`.
  RootContextPtr field(unsigned long order) const;

  std::string describe() const;  // "symbolic:2", "cube:2:3"

  friend bool operator==(const Cover& a, const Cover& b) {
    return a.kind_ == b.kind_ && a.branching_ == b.branching_ && a.dim_ == b.dim_ &&
           a.scale_base_ == b.scale_base_ && a.zeta_ == b.zeta_;
  }

 private:
  Cover() = default;
  CoverKind kind_ = CoverKind::symbolic;
  unsigned branching_ = 2;
  unsigned dim_ = 0;        // cube only
  mpz_class scale_base_;    // k resp. b
  mpq_class zeta_;
};

struct AxiomCheck {
  bool pass = true;
  Address witness;      // first offending address when !pass
  std::string detail;
};

struct NiceAxiomReport {
  AxiomCheck branching;   // finite, exactly `branching` children, prefix-consistent
  AxiomCheck ancestry;    // unique level-(n-1) parent below every non-root node
  AxiomCheck small_size;  // diam(U) <= zeta^level(U)
  std::string c_cover_note;
  std::uint64_t elements_checked = 0;
  bool all_pass() const { return branching.pass && ancestry.pass && small_size.pass; }
};

// Exhaustive walk of all elements with level <= depth.
NiceAxiomReport validate_nice_axioms(const Cover& cover, unsigned depth);

class PointRep;  // point.hpp

// Addresses w_0..w_depth of the elements containing the point, each the
// parent of the next.
std::vector<Address> representation(const Cover& cover, const PointRep& point, size_t depth);

// One canonical point per level-`depth` element (the all-zeros extension).
std::vector<PointRep> dense_sample(const Cover& cover, unsigned depth);

// Left corner of a cube-cover element, one rational per axis.
std::vector<mpq_class> cube_corner(const Cover& cover, const Address& a);

}  // namespace galedim
