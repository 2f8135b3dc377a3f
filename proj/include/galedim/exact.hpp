// ============================================================================
// exact.hpp — exact arithmetic for supergale quantities
// ============================================================================
//
// Three layers, from simple to rich:
//
//   Exponent    a dimension parameter s: either a rational p/q, or
//               m * log(A)/log(B) with A, B >= 2 multiplicatively
//               independent integers (canonicalised so equality is
//               structural).
//
//   ExactScale  a pure power C^(p/q) of a primitive integer base C >= 2
//               (or the constant 1). Diameters, thresholds and the cover
//               constant c live here. Cross-base comparisons are exact:
//               raise both sides to integer powers and compare integers.
//
//   RootValue   an element of Q[eta] where eta = C^(-1/Q). Every quantity
//               the supergale inequality touches on a base-C cover with
//               s = p/Q is such an element, so validation in rational mode
//               is an exact coefficient computation, not a float compare.
//               x^Q - 1/C is irreducible for primitive C, so the zero test
//               is "all coefficients zero" and sign evaluation by interval
//               arithmetic at growing precision always terminates.
// ============================================================================

#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "galedim/numeric.hpp"

namespace galedim {

// Largest C with B = C^k; returns {C, k}, k = 1 when B is not a perfect
// power. Requires B >= 2.
std::pair<mpz_class, unsigned> primitive_root(const mpz_class& base);

mpq_class mpq_pow_si(const mpq_class& base, long e);

// ---------------------------------------------------------------------------
// Exponent
// ---------------------------------------------------------------------------

class Exponent {
 public:
  Exponent() : rat_(0), is_rational_(true) {}

  static Exponent rational(const mpq_class& q);
  // log(a)/log(b) for integers a >= 1, b >= 2. Collapses to a rational when
  // a and b are powers of a common integer.
  static Exponent log_ratio(const mpz_class& a, const mpz_class& b);

  bool is_rational() const { return is_rational_; }
  const mpq_class& rat() const;

  // Accessors for the irrational case: value = scale() * log(A)/log(B).
  const mpq_class& scale() const { return rat_; }
  const mpz_class& log_num_base() const { return a_; }
  const mpz_class& log_den_base() const { return b_; }

  int sign() const;
  Exponent operator+(const mpq_class& q) const;
  Exponent operator*(const mpq_class& q) const;

  BigFloat approx(mpfr_prec_t prec = 0) const;
  std::string str() const;

  friend bool operator==(const Exponent& x, const Exponent& y);
  friend bool operator!=(const Exponent& x, const Exponent& y) { return !(x == y); }

 private:
  mpq_class rat_;      // the value itself, or the scale m of the log ratio
  mpz_class a_, b_;    // primitive, distinct when !is_rational_
  bool is_rational_;
};

// ---------------------------------------------------------------------------
// ExactScale
// ---------------------------------------------------------------------------

class ExactScale {
 public:
  ExactScale() : base_(1), exp_(0) {}  // the constant 1

  static ExactScale one() { return ExactScale(); }
  // base^e, base >= 2; the stored base is made primitive.
  static ExactScale power(const mpz_class& base, const mpq_class& e);

  bool is_one() const { return exp_ == 0; }
  const mpz_class& base() const { return base_; }
  const mpq_class& exponent() const { return exp_; }

  ExactScale operator*(const ExactScale& o) const;
  ExactScale operator/(const ExactScale& o) const;
  // Raise to a rational power; always exact.
  ExactScale pow(const mpq_class& t) const;
  // Raise to an arbitrary exponent. Exact when s is rational or when the
  // log-ratio denominator base matches this scale's base; nullopt otherwise.
  std::optional<ExactScale> pow(const Exponent& s) const;

  std::optional<mpq_class> to_rational() const;  // integer exponent only
  BigFloat approx(mpfr_prec_t prec = 0) const;
  BigFloat log2(mpfr_prec_t prec = 0) const;
  std::string str() const;

  // Exact trichotomy; works across different bases.
  friend int cmp(const ExactScale& x, const ExactScale& y);
  // Exact comparison against a rational (raise both sides to the exponent
  // denominator and compare integers).
  friend int cmp(const ExactScale& x, const mpq_class& q);
  friend bool operator==(const ExactScale& x, const ExactScale& y) { return cmp(x, y) == 0; }
  friend bool operator!=(const ExactScale& x, const ExactScale& y) { return cmp(x, y) != 0; }
  friend bool operator<(const ExactScale& x, const ExactScale& y) { return cmp(x, y) < 0; }
  friend bool operator<=(const ExactScale& x, const ExactScale& y) { return cmp(x, y) <= 0; }
  friend bool operator>(const ExactScale& x, const ExactScale& y) { return cmp(x, y) > 0; }
  friend bool operator>=(const ExactScale& x, const ExactScale& y) { return cmp(x, y) >= 0; }

 private:
  ExactScale(const mpz_class& b, const mpq_class& e) : base_(b), exp_(e) {}
  mpz_class base_;  // primitive, or 1 when exp_ == 0
  mpq_class exp_;
};

inline int cmp(const mpq_class& q, const ExactScale& x) { return -cmp(x, q); }

// ---------------------------------------------------------------------------
// RootValue
// ---------------------------------------------------------------------------

// Fixes the field Q[eta], eta = base^(-1/order).
class RootContext {
 public:
  RootContext(const mpz_class& base, unsigned long order);

  const mpz_class& base() const { return base_; }
  unsigned long order() const { return order_; }

  friend bool operator==(const RootContext& x, const RootContext& y) {
    return x.base_ == y.base_ && x.order_ == y.order_;
  }

 private:
  mpz_class base_;       // primitive, >= 2
  unsigned long order_;  // >= 1
};

using RootContextPtr = std::shared_ptr<const RootContext>;

class RootValue {
 public:
  RootValue() = default;  // zero in a null context; usable with any context
  explicit RootValue(RootContextPtr ctx);
  RootValue(RootContextPtr ctx, const mpq_class& rational);

  // scale must be 1 or a power of ctx->base() whose exponent denominator
  // divides ctx->order(); throws Error::bad_input otherwise.
  static RootValue from_scale(RootContextPtr ctx, const ExactScale& scale);

  const RootContextPtr& context() const { return ctx_; }

  bool is_zero() const;
  int sign() const;  // exact; interval evaluation at doubling precision
  std::optional<mpq_class> to_rational() const;

  RootValue operator-() const;
  RootValue& operator+=(const RootValue& o);
  RootValue& operator-=(const RootValue& o);
  friend RootValue operator+(RootValue a, const RootValue& b) { a += b; return a; }
  friend RootValue operator-(RootValue a, const RootValue& b) { a -= b; return a; }
  friend RootValue operator*(const RootValue& a, const RootValue& b);
  RootValue operator*(const mpq_class& q) const;

  friend int cmp(const RootValue& a, const RootValue& b);
  friend bool operator==(const RootValue& a, const RootValue& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const RootValue& a, const RootValue& b) { return cmp(a, b) != 0; }
  friend bool operator<(const RootValue& a, const RootValue& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const RootValue& a, const RootValue& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const RootValue& a, const RootValue& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const RootValue& a, const RootValue& b) { return cmp(a, b) >= 0; }

  BigFloat approx(mpfr_prec_t prec = 0) const;
  std::string str() const;

  const std::vector<mpq_class>& coefficients() const { return coeff_; }

 private:
  // Adopt the other value's field when compatible: null contexts adopt
  // anything, and orders lift along divisibility over a shared base.
  void align(const RootValue& o);
  void lift_to(const RootContextPtr& target);  // pre: compatible with ctx_
  std::pair<BigFloat, BigFloat> interval(mpfr_prec_t prec) const;

  RootContextPtr ctx_;            // null means "pure rational, order 1"
  std::vector<mpq_class> coeff_;  // coeff_[j] multiplies eta^j; empty == 0
};

}  // namespace galedim
