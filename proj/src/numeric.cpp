#include "galedim/numeric.hpp"

#include <cctype>
#include <cstdlib>
#include <mutex>

#include "galedim/error.hpp"

namespace galedim {

namespace {

mpfr_prec_t g_default_prec = 0;
std::once_flag g_prec_once;

void init_precision_from_env() {
  g_default_prec = 128;
  if (const char* env = std::getenv("GALEDIM_PRECISION")) {
    char* end = nullptr;
    long bits = std::strtol(env, &end, 10);
    if (end && *end == '\0' && bits >= MPFR_PREC_MIN && bits <= 1 << 20) {
      g_default_prec = static_cast<mpfr_prec_t>(bits);
    }
  }
}

mpfr_prec_t resolve(mpfr_prec_t prec) { return prec > 0 ? prec : default_precision(); }

}  // namespace

mpfr_prec_t default_precision() {
  std::call_once(g_prec_once, init_precision_from_env);
  return g_default_prec;
}

void set_default_precision(mpfr_prec_t bits) {
  std::call_once(g_prec_once, init_precision_from_env);
  if (bits < MPFR_PREC_MIN) throw Error::bad_input("precision below MPFR minimum");
  g_default_prec = bits;
}

BigFloat::BigFloat(mpfr_prec_t prec, int) { mpfr_init2(v_, resolve(prec)); }

BigFloat::BigFloat() : BigFloat(0, 0) { mpfr_set_zero(v_, 1); }

BigFloat::BigFloat(double v, mpfr_prec_t prec) : BigFloat(prec, 0) { mpfr_set_d(v_, v, MPFR_RNDN); }

BigFloat::BigFloat(long v, mpfr_prec_t prec) : BigFloat(prec, 0) { mpfr_set_si(v_, v, MPFR_RNDN); }

BigFloat::BigFloat(const mpz_class& v, mpfr_prec_t prec) : BigFloat(prec, 0) {
  mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const mpq_class& v, mpfr_prec_t prec) : BigFloat(prec, 0) {
  mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_swap(v_, o.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  if (this != &o) mpfr_swap(v_, o.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::nan() {
  BigFloat r;
  mpfr_set_nan(r.v_);
  return r;
}

BigFloat BigFloat::inf(int sign) {
  BigFloat r;
  mpfr_set_inf(r.v_, sign);
  return r;
}

BigFloat BigFloat::pow2(long e, mpfr_prec_t prec) {
  BigFloat r(resolve(prec), 0);
  mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
  return r;
}

std::string BigFloat::str(int digits) const {
  if (is_nan()) return "nan";
  if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
  size_t nd = digits > 0 ? static_cast<size_t>(digits)
                         : mpfr_get_str_ndigits(10, precision());
  mpfr_exp_t e = 0;
  char* s = mpfr_get_str(nullptr, &e, 10, nd, v_, MPFR_RNDN);
  std::string mant(s);
  mpfr_free_str(s);
  bool neg = !mant.empty() && mant[0] == '-';
  std::string body = neg ? mant.substr(1) : mant;
  // mpfr returns digits with an implied decimal point before the first one.
  std::string out = neg ? "-" : "";
  out += body.substr(0, 1);
  if (body.size() > 1) {
    std::string frac = body.substr(1);
    while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
    if (!(frac.size() == 1 && frac[0] == '0')) out += "." + frac;
  }
  out += "e" + std::to_string(static_cast<long>(e) - 1);
  return out;
}

BigFloat BigFloat::operator-() const {
  BigFloat r(precision(), 0);
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

#define GALEDIM_BF_COMPOUND(op, fn)                              \
  BigFloat& BigFloat::operator op(const BigFloat& o) {           \
    if (o.precision() > precision()) {                           \
      BigFloat w(o.precision(), 0);                              \
      fn(w.v_, v_, o.v_, MPFR_RNDN);                             \
      *this = std::move(w);                                      \
    } else {                                                     \
      fn(v_, v_, o.v_, MPFR_RNDN);                               \
    }                                                            \
    return *this;                                                \
  }

GALEDIM_BF_COMPOUND(+=, mpfr_add)
GALEDIM_BF_COMPOUND(-=, mpfr_sub)
GALEDIM_BF_COMPOUND(*=, mpfr_mul)
GALEDIM_BF_COMPOUND(/=, mpfr_div)

#undef GALEDIM_BF_COMPOUND

BigFloat operator+(const BigFloat& a, const BigFloat& b) { BigFloat r(a); r += b; return r; }
BigFloat operator-(const BigFloat& a, const BigFloat& b) { BigFloat r(a); r -= b; return r; }
BigFloat operator*(const BigFloat& a, const BigFloat& b) { BigFloat r(a); r *= b; return r; }
BigFloat operator/(const BigFloat& a, const BigFloat& b) { BigFloat r(a); r /= b; return r; }

BigFloat abs(const BigFloat& a) {
  BigFloat r(a.precision(), 0);
  mpfr_abs(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& base, const BigFloat& e) {
  BigFloat r(std::max(base.precision(), e.precision()), 0);
  mpfr_pow(r.v_, base.v_, e.v_, MPFR_RNDN);
  return r;
}

BigFloat exp2(const BigFloat& x) {
  BigFloat r(x.precision(), 0);
  mpfr_exp2(r.v_, x.v_, MPFR_RNDN);
  return r;
}

BigFloat log2(const BigFloat& x) {
  BigFloat r(x.precision(), 0);
  mpfr_log2(r.v_, x.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::log2_of(const mpz_class& n, mpfr_prec_t prec) {
  BigFloat x(n, resolve(prec));
  return log2(x);
}

mpq_class parse_rational(const std::string& text) {
  if (text.empty()) throw Error::bad_input("empty rational literal");
  std::string s = text;
  bool neg = false;
  size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    neg = s[pos] == '-';
    ++pos;
  }
  auto digits_only = [](const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string rest = s.substr(pos);
  mpq_class q;
  if (auto slash = rest.find('/'); slash != std::string::npos) {
    std::string num = rest.substr(0, slash), den = rest.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den))
      throw Error::bad_input("bad rational literal: " + text);
    mpz_class d(den);
    if (d == 0) throw Error::bad_input("zero denominator: " + text);
    q = mpq_class(mpz_class(num), d);
  } else if (auto dot = rest.find('.'); dot != std::string::npos) {
    std::string ip = rest.substr(0, dot), fp = rest.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!digits_only(ip) || (!fp.empty() && !digits_only(fp)))
      throw Error::bad_input("bad decimal literal: " + text);
    mpz_class scale = 1;
    for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
    q = mpq_class(mpz_class(ip) * scale + (fp.empty() ? mpz_class(0) : mpz_class(fp)), scale);
  } else {
    if (!digits_only(rest)) throw Error::bad_input("bad integer literal: " + text);
    q = mpq_class(mpz_class(rest));
  }
  q.canonicalize();
  if (neg) q = -q;
  return q;
}

std::string rational_str(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace galedim
