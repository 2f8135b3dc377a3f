#include "doctest.h"

#include <string>

#include "galedim/error.hpp"
#include "galedim/numeric.hpp"

using namespace galedim;

TEST_CASE("default precision starts at 128 bits") {
  CHECK(default_precision() >= 128);
}

TEST_CASE("pow2 and log2 are exact inverses on integers") {
  for (long e : {-40L, -3L, 0L, 1L, 17L, 100L}) {
    BigFloat p = BigFloat::pow2(e);
    CHECK(log2(p).to_double() == doctest::Approx(static_cast<double>(e)).epsilon(1e-15));
  }
  CHECK(exp2(BigFloat(3L)).to_double() == 8.0);
  CHECK(BigFloat::pow2(-1).to_double() == 0.5);
}

TEST_CASE("log2_of big integers") {
  CHECK(BigFloat::log2_of(mpz_class(8)).to_double() == 3.0);
  CHECK(BigFloat::log2_of(mpz_class(1)).to_double() == 0.0);
  CHECK(BigFloat::log2_of(mpz_class(3)).to_double() ==
        doctest::Approx(1.5849625007211562).epsilon(1e-15));
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 2, 400);
  CHECK(BigFloat::log2_of(big).to_double() == 400.0);
}

TEST_CASE("arithmetic and comparisons") {
  BigFloat a(mpq_class(1, 3));
  BigFloat b(mpq_class(2, 3));
  CHECK(a + b == BigFloat(1L));
  CHECK(a < b);
  CHECK((a * BigFloat(3L)).to_double() == doctest::Approx(1.0).epsilon(1e-30));
  CHECK((-a).sign() == -1);
  CHECK(BigFloat().is_zero());
  CHECK(abs(-b) == b);
  CHECK(max(a, b) == b);
  CHECK(min(a, b) == a);
}

TEST_CASE("string rendering is deterministic") {
  BigFloat x(mpq_class(1, 3));
  CHECK(x.str(10) == x.str(10));
  CHECK(x.str(10).substr(0, 6) == std::string("3.3333"));
  CHECK(BigFloat().str(5) == BigFloat().str(5));
}

TEST_CASE("parse_rational handles the documented formats") {
  CHECK(parse_rational("3/4") == mpq_class(3, 4));
  CHECK(parse_rational("-3/4") == mpq_class(-3, 4));
  CHECK(parse_rational("0.25") == mpq_class(1, 4));
  CHECK(parse_rational("-1.5") == mpq_class(-3, 2));
  CHECK(parse_rational("2") == mpq_class(2));
  CHECK(parse_rational("6/8") == mpq_class(3, 4));  // canonicalized
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK_THROWS_AS(parse_rational(""), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("1e-3"), Error);  // plain decimals only
}

TEST_CASE("rational_str round-trips through parse_rational") {
  for (const mpq_class& q :
       {mpq_class(3, 4), mpq_class(-7, 2), mpq_class(5), mpq_class(0), mpq_class(1, 1000000)}) {
    CHECK(parse_rational(rational_str(q)) == q);
  }
  CHECK(rational_str(mpq_class(5)) == "5");
  CHECK(rational_str(mpq_class(3, 4)) == "3/4");
}

TEST_CASE("precision override changes new values only") {
  mpfr_prec_t saved = default_precision();
  set_default_precision(256);
  CHECK(BigFloat(1.0).precision() == 256);
  CHECK(BigFloat(1.0, mpfr_prec_t(64)).precision() == 64);
  set_default_precision(saved);
  CHECK(BigFloat(1.0).precision() == saved);
}
