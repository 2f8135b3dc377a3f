// ============================================================================
// gale.hpp — s-supergales as finitely supported tables
// ============================================================================
//
// A table stores values on finitely many addresses; the extension policy
// defines values everywhere else:
//
//   zero           unstored addresses get 0; conservative default, the
//                  supergale inequality can only loosen.
//   uniform_split  an unstored address inherits its nearest stored
//                  ancestor's value diluted by (zeta^{-s}/branching) per
//                  level, so d(child)·diam(child)^s == d(parent)·diam^s /
//                  branching and gale equality is preserved below the
//                  support.
//
// With rational s on a built-in cover, every quantity in the supergale
// inequality lives in the field Q[base^(-1/den(s))], and validation is an
// exact comparison with no tolerance. Irrational s (log-ratio) falls back
// to extended-precision arithmetic with a relative tolerance.
// ============================================================================

#pragma once

#include <map>
#include <vector>

#include "galedim/cover.hpp"
#include "galedim/exact.hpp"
#include "galedim/parallel.hpp"

namespace galedim {

class PointRep;

enum class Extension { zero, uniform_split };

// Anything success evaluation can walk: explicit tables and the implicit
// (automaton- or path-backed) gales the deeper constructions need.
class GaleEvaluator {
 public:
  virtual ~GaleEvaluator() = default;
  virtual BigFloat value_approx(const Cover& cover, const Address& addr) const = 0;
  virtual const Exponent& s() const = 0;
};

class SupergaleTable : public GaleEvaluator {
 public:
  using Entries = std::map<Address, RootValue>;

  SupergaleTable(Exponent s, Extension ext, Entries entries);
  static SupergaleTable from_rationals(const Exponent& s, Extension ext,
                                       const std::map<Address, mpq_class>& entries);

  const Exponent& s() const override { return s_; }
  Extension extension() const { return ext_; }
  size_t support_depth() const { return support_depth_; }
  const Entries& entries() const { return entries_; }
  bool stored(const Address& a) const { return entries_.count(a) != 0; }

  // Value under the extension policy. Exact; requires rational s when a
  // uniform-split extension step is involved.
  RootValue value(const Cover& cover, const Address& addr) const;
  BigFloat value_approx(const Cover& cover, const Address& addr) const override;

 private:
  Exponent s_;
  Extension ext_;
  Entries entries_;
  size_t support_depth_ = 0;
};

struct GaleViolation {
  Address node;
  std::string lhs, rhs;  // rendered d(U)·diam^s and the children sum
};

struct ValidationReport {
  bool valid = true;
  bool exact = false;          // true when the check ran in exact rational mode
  bool equality_mode = false;  // true for is_gale
  std::vector<GaleViolation> violations;  // first few witnesses
  size_t violation_count = 0;
  size_t nodes_checked = 0;
  std::string root_capital;
  bool capital_finite = true;
  static constexpr size_t kMaxWitnesses = 32;
};

// Checks d(U)·diam(U)^s >= sum over children at every node of the support's
// prefix closure with level <= depth. tol is the relative tolerance for the
// inexact path; tol <= 0 selects the default 2^{-64}. Negative stored values
// raise Error::bad_input.
ValidationReport validate_supergale(const Cover& cover, const SupergaleTable& gale, size_t depth,
                                    double tol = 0.0, Exec exec = Exec::serial);

// Same traversal, requiring equality at every checked node.
bool is_gale(const Cover& cover, const SupergaleTable& gale, size_t depth, double tol = 0.0,
             Exec exec = Exec::serial);
ValidationReport check_gale_equality(const Cover& cover, const SupergaleTable& gale, size_t depth,
                                     double tol = 0.0, Exec exec = Exec::serial);

struct SuccessTrace {
  std::vector<BigFloat> values;       // d(w_n), n = 0..depth
  std::vector<BigFloat> running_max;  // prefix maxima of values
  // threshold exponent j -> first level where running_max > 2^j; only
  // exceeded thresholds appear.
  std::map<long, size_t> first_level_above;

  const BigFloat& max_value() const { return running_max.back(); }
  BigFloat tail_max(size_t window) const;
};

SuccessTrace evaluate_success(const Cover& cover, const GaleEvaluator& gale, const PointRep& point,
                              size_t depth);

// Pointwise weighted sum over the union of supports. All parts must share s
// and extension policy; weights must be positive.
SupergaleTable combine(const Cover& cover,
                       const std::vector<std::pair<mpq_class, const SupergaleTable*>>& parts);

}  // namespace galedim
