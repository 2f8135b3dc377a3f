// ============================================================================
// compiler.hpp — antichains, Kraft sums, and both directions of the
// cover <-> supergale translation
// ============================================================================
//
// cover_to_supergale builds the betting strategy whose capital at U is the
// share of the target antichain's diam^s mass sitting below U, normalized
// by diam(U)^s. It equals 1 on every target element and its root capital
// equals the target's Kraft sum. Stored entries are the targets, their
// ancestors, and (in uniform-split mode) explicit zeros on the off-target
// children of ancestors so extension lookups stay faithful.
//
// supergale_to_cover inverts: take the nodes where the gale has multiplied
// its starting capital by more than 2^k, prune to the shallowest ones, and
// the resulting antichain has Kraft sum below 2^{-k}.
// ============================================================================

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "galedim/gale.hpp"

namespace galedim {

class PointRep;

class Antichain {
 public:
  Antichain() = default;
  // Validates pairwise incomparability (throws Error::bad_input naming the
  // offending pair and suggesting maximal_antichain).
  static Antichain from_elements(std::vector<Address> elements);

  const std::vector<Address>& elements() const { return elements_; }
  size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }

 private:
  std::vector<Address> elements_;  // sorted
};

// Keeps exactly the input elements with no proper prefix also present;
// every dropped element has an ancestor in the result.
Antichain maximal_antichain(const std::vector<Address>& addresses);

struct KraftSum {
  std::optional<RootValue> exact;  // present when s admits exact evaluation
  BigFloat value;
  std::optional<mpq_class> rational() const {
    return exact ? exact->to_rational() : std::nullopt;
  }
};

KraftSum kraft_sum(const Cover& cover, const Antichain& antichain, const Exponent& s,
                   Exec exec = Exec::serial);

struct WeightedCover {
  std::vector<Address> elements;
  unsigned target_level = 0;  // every element has level > target_level
};

// Replaces each ball (center, radius) by at most c cover elements of level
// > r that jointly cover it. Requires 2*radius < zeta^{r+1}.
WeightedCover refine_to_nice(const Cover& cover,
                             const std::vector<std::pair<PointRep, mpq_class>>& balls, unsigned r);

// The compiled table d_k for a target antichain; s rational and positive.
// k only labels the construction: the capital assertion uses the computed
// Kraft sum, checked against c^{1+s}·2^{-k}.
SupergaleTable cover_to_supergale(const Cover& cover, const Antichain& target, const mpq_class& s,
                                  long k, Extension mode = Extension::zero);

struct ExtractionResult {
  Antichain antichain;
  size_t depth_scanned = 0;
  // True when the scan covered the entire support plus one extension level,
  // so no qualifying node was missed.
  bool saturated = false;
};

// Maximal antichain of {U : d(U) > 2^k · root capital} within levels
// <= depth (depth at most support_depth + 1). Validates the gale first.
ExtractionResult supergale_to_cover(const Cover& cover, const SupergaleTable& gale, long k,
                                    size_t depth);

}  // namespace galedim
