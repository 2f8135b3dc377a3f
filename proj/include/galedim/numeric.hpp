// ============================================================================
// numeric.hpp — extended-precision floating point on top of MPFR
// ============================================================================
//
// All inexact arithmetic in the library goes through BigFloat, a value-type
// wrapper around mpfr_t.  Exact quantities (rationals, power-of-base scales)
// live in exact.hpp and only drop down to BigFloat when a sum or logarithm
// has no closed form.
//
// The working mantissa precision P (in bits) defaults to 128 and can be
// overridden by the GALEDIM_PRECISION environment variable or by
// set_default_precision().  A BigFloat carries its own precision; binary
// operations allocate the result at the wider of the two operands.
// ============================================================================

#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>

namespace galedim {

// Working precision in bits. Reads GALEDIM_PRECISION once on first use.
mpfr_prec_t default_precision();
void set_default_precision(mpfr_prec_t bits);

class BigFloat {
 public:
  BigFloat();  // zero at default precision
  explicit BigFloat(double v, mpfr_prec_t prec = 0);
  explicit BigFloat(long v, mpfr_prec_t prec = 0);
  explicit BigFloat(const mpz_class& v, mpfr_prec_t prec = 0);
  explicit BigFloat(const mpq_class& v, mpfr_prec_t prec = 0);

  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  static BigFloat nan();
  static BigFloat inf(int sign = 1);
  static BigFloat pow2(long e, mpfr_prec_t prec = 0);  // exact 2^e

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Deterministic scientific-notation rendering; digits <= 0 picks enough
  // decimal digits to be faithful at this precision.
  std::string str(int digits = 0) const;

  BigFloat operator-() const;
  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);

  friend int cmp(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return b <= a; }

  friend BigFloat abs(const BigFloat& a);
  friend BigFloat pow(const BigFloat& base, const BigFloat& e);
  friend BigFloat exp2(const BigFloat& x);
  friend BigFloat log2(const BigFloat& x);
  friend BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }
  friend BigFloat min(const BigFloat& a, const BigFloat& b) { return a < b ? a : b; }

  // log2 of a positive big integer, exact to the target precision.
  static BigFloat log2_of(const mpz_class& n, mpfr_prec_t prec = 0);

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  explicit BigFloat(mpfr_prec_t prec, int /*tag*/);
  mpfr_t v_;
};

// Parses "p/q", decimal ("0.25", "1e-3" is rejected: plain decimals only) or
// integer strings into an exact rational. Throws galedim::Error on garbage.
mpq_class parse_rational(const std::string& text);
std::string rational_str(const mpq_class& q);

}  // namespace galedim
