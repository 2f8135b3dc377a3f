// ============================================================================
// complexity.hpp — description-complexity profiles and the two translations
// between complexity budgets and betting strategies
// ============================================================================
//
// True Kolmogorov complexity is uncomputable, so everything here is relative
// to a pluggable ComplexityEstimator: a real compressor for realistic
// behavior, exact table/linear oracles for sharp synthetic tests. Every
// output labels itself estimator-relative.
//
// kr_profile(x): for each precision r, the estimator's bits for the unique
// address containing x whose diameter lies in (2^{-r}, 2^{-r+1}]. The level
// search is exact integer arithmetic (B^m in [2^{r-1}, 2^r)); precisions
// whose window contains no level are recorded as skipped, never faked.
// cdim_point_estimate takes min(bits/r) over a tail of the profile as the
// finite surrogate for liminf_r K_r(x)/r.
//
// enumeration_to_supergale: from a finite stage of the enumerated set
// {w : bits(w) <= s' * precision(w)}, the strategy
//   d(U) = sum over enumerated V below U of diam(V)^{s'} / diam(U)^{s}
// which is an s-supergale for s > s' and has d(U) >= diam(U)^{s'-s} on
// every enumerated U. supergale_to_counting_bound inverts: addresses in the
// precision-r window where a validated gale has multiplied its capital by
// 2^k number at most 2^{rs-k}.
//
// cdim_via_gales runs the first translation over an exponent grid,
// enumerating only the point's own representation prefixes (a legitimate
// finite stage, and the only part of the set that can influence values
// along the point when extensions are conservative), and reports the least
// exponent whose strategy empirically succeeds.
// ============================================================================

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "galedim/gale.hpp"
#include "galedim/parallel.hpp"

namespace galedim {

class PointRep;

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

class ComplexityEstimator {
 public:
  virtual ~ComplexityEstimator() = default;
  // Nonnegative bit estimate for the description complexity of `data`;
  // +infinity means "no estimate" (table misses).
  virtual double estimate_bits(std::string_view data) const = 0;
  virtual std::string id() const = 0;
  // Callers fall back to serial evaluation when this is false.
  virtual bool thread_safe() const { return true; }
};

// Raw-deflate length at maximum effort, no container framing, as the bit
// estimate. An additive correction can absorb header overhead when a use
// case calls for it; the default leaves measurements untouched.
class DeflateEstimator : public ComplexityEstimator {
 public:
  explicit DeflateEstimator(double correction_bits = 0.0);
  double estimate_bits(std::string_view data) const override;
  std::string id() const override;

 private:
  double correction_;
};

// Exact assignments for tests; anything absent costs +infinity.
class TableOracle : public ComplexityEstimator {
 public:
  explicit TableOracle(std::map<std::string, double> table, std::string name = "oracle");
  double estimate_bits(std::string_view data) const override;
  std::string id() const override;
  const std::map<std::string, double>& table() const { return table_; }

 private:
  std::map<std::string, double> table_;
  std::string name_;
};

// bits(w) = alpha * |w|, exact for dyadic alpha.
class LinearOracle : public ComplexityEstimator {
 public:
  explicit LinearOracle(const mpq_class& alpha);
  double estimate_bits(std::string_view data) const override;
  std::string id() const override;
  const mpq_class& alpha() const { return alpha_; }

 private:
  mpq_class alpha_;
};

// ---------------------------------------------------------------------------
// Precision profiles
// ---------------------------------------------------------------------------

// The unique level m with B^m in [2^{r-1}, 2^r), i.e. diam(level m) in
// (2^{-r}, 2^{-r+1}]; absent when no integer level lands in the window
// (happens whenever B is a power of two larger than 2, and for almost all r
// of other bases).
std::optional<unsigned> precision_window_level(const mpz_class& base, unsigned r);

struct PrecisionProfile {
  struct Entry {
    unsigned r = 0;
    double bits = 0;
    Address witness;
    bool skipped = false;  // empty window at this precision
  };
  std::vector<Entry> entries;
  std::string estimator_id;
  std::string point_id;
};

// pre: 1 <= r_min <= r_max. Entries for every r in [r_min, r_max].
PrecisionProfile kr_profile(const Cover& cover, const PointRep& point, unsigned r_min,
                            unsigned r_max, const ComplexityEstimator& est,
                            Exec exec = Exec::serial);

struct CdimPointEstimate {
  double value = 0;
  std::vector<std::pair<unsigned, double>> ratios;  // (r, bits/r), skipped entries omitted
};

// min(bits/r) over the final tail_fraction of usable entries; errors when
// every entry is skipped. tail_fraction in (0, 1].
CdimPointEstimate cdim_point_estimate(const PrecisionProfile& profile,
                                      const mpq_class& tail_fraction);

// ---------------------------------------------------------------------------
// Enumeration <-> supergale
// ---------------------------------------------------------------------------

struct Enumeration {
  // (address, budget in bits) — the budget records the membership criterion
  // bits(w) <= budget that admitted the address; only addresses feed the
  // supergale construction.
  std::vector<std::pair<Address, double>> pairs;
};

struct SummabilityCheck {
  BigFloat weight;  // sum of diam^{s'} over the enumeration
  double slack = 0;
  bool within = false;  // weight <= 1 + slack
};

// Kraft-style summability is expected of honest enumerations but depends on
// the estimator, so it is reported, never asserted.
SummabilityCheck check_enumeration_summability(const Cover& cover, const Enumeration& e,
                                               const mpq_class& s_prime, double slack = 1.0);

// pre: s > s_prime >= 0, both rational. The result passes validate_supergale
// exactly and has d(U) >= diam(U)^{s_prime - s} on enumerated U.
SupergaleTable enumeration_to_supergale(const Cover& cover, const Enumeration& e,
                                        const mpq_class& s, const mpq_class& s_prime);

struct CountingBound {
  mpz_class count = 0;
  BigFloat bound;  // 2^{rs - k}
  std::optional<ExactScale> bound_exact;
  std::optional<unsigned> window_level;
  bool holds = true;
};

// Counts level-window addresses where the validated gale reaches 2^k times
// its starting capital, against the bound 2^{rs-k}. Exact comparison for
// rational s. Uniform-split extensions with irrational s are unsupported.
CountingBound supergale_to_counting_bound(const Cover& cover, const SupergaleTable& gale, long k,
                                          unsigned r);

// Additive slack absorbing self-delimiting overhead in coherence checks
// between the two translation directions.
double coherence_slack_bits(double k, double r);

// ---------------------------------------------------------------------------
// Grid orchestration
// ---------------------------------------------------------------------------

struct CdimGaleRow {
  mpq_class s;
  mpq_class s_prime;
  size_t enumerated = 0;   // representation prefixes within budget
  double max_log2 = 0;     // log2 of the largest strategy value along the point
  bool succeeded = false;  // max value reached the success threshold
};

struct CdimGaleReport {
  std::vector<CdimGaleRow> rows;
  std::optional<mpq_class> least_succeeding_s;
  double lower_estimate = 0;  // cdim_point_estimate from the same estimator
  std::vector<std::pair<unsigned, double>> lower_ratios;
  long success_threshold_log2 = 0;
  std::string note;
};

// For each grid exponent s (ascending), enumerates the point's
// representation prefixes within the s' budget (s' = s minus the local grid
// step), evaluates the induced strategy along the point to `depth`, and
// marks success when some value reaches 2^20. pre: nonempty grid of positive
// rationals, depth >= 1.
CdimGaleReport cdim_via_gales(const Cover& cover, const PointRep& point,
                              const std::vector<mpq_class>& s_grid, size_t depth,
                              const ComplexityEstimator& est,
                              const mpq_class& tail_fraction = mpq_class(1, 4));

}  // namespace galedim
