#include "galedim/exact.hpp"

#include <sstream>

#include "galedim/error.hpp"

namespace galedim {

namespace {

// BigFloat's pow/log2 are hidden friends; member functions named pow/log2
// shadow them, so route through free-function context where ADL applies.
BigFloat bf_pow(const BigFloat& b, const BigFloat& e) { return pow(b, e); }
BigFloat bf_log2(const BigFloat& x) { return log2(x); }

}  // namespace

std::pair<mpz_class, unsigned> primitive_root(const mpz_class& base) {
  if (base < 2) throw Error::bad_input("primitive_root: base must be >= 2");
  mpz_class b = base;
  unsigned mult = 1;
  bool reduced = true;
  while (reduced) {
    reduced = false;
    size_t bits = mpz_sizeinbase(b.get_mpz_t(), 2);
    for (unsigned long k = 2; k <= bits; ++k) {
      mpz_class root;
      if (mpz_root(root.get_mpz_t(), b.get_mpz_t(), k) != 0) {
        b = root;
        mult *= static_cast<unsigned>(k);
        reduced = true;
        break;
      }
    }
  }
  return {b, mult};
}

mpq_class mpq_pow_si(const mpq_class& base, long e) {
  if (e == 0) return mpq_class(1);
  unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
  mpq_class r;
  mpz_pow_ui(r.get_num().get_mpz_t(), base.get_num().get_mpz_t(), mag);
  mpz_pow_ui(r.get_den().get_mpz_t(), base.get_den().get_mpz_t(), mag);
  r.canonicalize();
  if (e < 0) {
    if (r == 0) throw Error::bad_input("zero base with negative exponent");
    r = 1 / r;
  }
  return r;
}

namespace {

mpz_class mpz_pow(const mpz_class& base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

long to_long_checked(const mpz_class& z, const char* what) {
  if (!z.fits_slong_p()) throw Error::bad_input(std::string(what) + ": exponent too large");
  return z.get_si();
}

}  // namespace

// ---------------------------------------------------------------------------
// Exponent
// ---------------------------------------------------------------------------

Exponent Exponent::rational(const mpq_class& q) {
  Exponent e;
  e.rat_ = q;
  e.is_rational_ = true;
  return e;
}

Exponent Exponent::log_ratio(const mpz_class& a, const mpz_class& b) {
  if (a < 1 || b < 2) throw Error::bad_input("log_ratio: need a >= 1, b >= 2");
  if (a == 1) return rational(0);
  auto [pa, ka] = primitive_root(a);
  auto [pb, kb] = primitive_root(b);
  if (pa == pb) return rational(mpq_class(static_cast<long>(ka), static_cast<long>(kb)));
  Exponent e;
  e.is_rational_ = false;
  e.rat_ = mpq_class(static_cast<long>(ka), static_cast<long>(kb));
  e.a_ = pa;
  e.b_ = pb;
  return e;
}

const mpq_class& Exponent::rat() const {
  if (!is_rational_) throw Error::bad_input("exponent is not rational");
  return rat_;
}

int Exponent::sign() const { return sgn(rat_); }

Exponent Exponent::operator*(const mpq_class& q) const {
  if (is_rational_) return rational(rat_ * q);
  if (q == 0) return rational(0);
  Exponent e(*this);
  e.rat_ *= q;
  return e;
}

Exponent Exponent::operator+(const mpq_class& q) const {
  if (is_rational_) return rational(rat_ + q);
  // m*log(A)/log(B) + p/r  ==  log(A^(m*r') * B^(p*...)) / log(B^...)
  // with everything cleared to integer powers first.
  mpq_class m = rat_;
  if (m <= 0 || q < 0)
    throw Error::unsupported("exponent sum leaves the log-ratio class");
  mpz_class u = m.get_num(), v = m.get_den();
  mpz_class p = q.get_num(), r = q.get_den();
  // value = (u*r*log A + p*v*log B) / (v*r*log B)
  mpz_class num = mpz_pow(a_, mpz_get_ui(mpz_class(u * r).get_mpz_t())) *
                  mpz_pow(b_, mpz_get_ui(mpz_class(p * v).get_mpz_t()));
  mpz_class den = mpz_pow(b_, mpz_get_ui(mpz_class(v * r).get_mpz_t()));
  return log_ratio(num, den);
}

BigFloat Exponent::approx(mpfr_prec_t prec) const {
  if (is_rational_) return BigFloat(rat_, prec);
  BigFloat la = log2(BigFloat(a_, prec));
  BigFloat lb = log2(BigFloat(b_, prec));
  return BigFloat(rat_, prec) * la / lb;
}

std::string Exponent::str() const {
  if (is_rational_) return rational_str(rat_);
  std::string core = "log(" + a_.get_str() + ")/log(" + b_.get_str() + ")";
  if (rat_ == 1) return core;
  return "(" + rational_str(rat_) + ")*" + core;
}

bool operator==(const Exponent& x, const Exponent& y) {
  if (x.is_rational_ != y.is_rational_) return false;
  if (x.is_rational_) return x.rat_ == y.rat_;
  return x.rat_ == y.rat_ && x.a_ == y.a_ && x.b_ == y.b_;
}

// ---------------------------------------------------------------------------
// ExactScale
// ---------------------------------------------------------------------------

ExactScale ExactScale::power(const mpz_class& base, const mpq_class& e) {
  if (base == 1 || e == 0) return one();
  auto [c, k] = primitive_root(base);
  mpq_class exp = e * static_cast<long>(k);
  if (exp == 0) return one();
  return ExactScale(c, exp);
}

ExactScale ExactScale::operator*(const ExactScale& o) const {
  if (is_one()) return o;
  if (o.is_one()) return *this;
  if (base_ == o.base_) {
    mpq_class e = exp_ + o.exp_;
    if (e == 0) return one();
    return ExactScale(base_, e);
  }
  if (exp_.get_den() == 1 && o.exp_.get_den() == 1) {
    mpq_class r = mpq_pow_si(mpq_class(base_), to_long_checked(exp_.get_num(), "scale mul")) *
                  mpq_pow_si(mpq_class(o.base_), to_long_checked(o.exp_.get_num(), "scale mul"));
    if (r.get_den() == 1) return power(r.get_num(), 1);
    if (r.get_num() == 1) return power(r.get_den(), -1);
  }
  throw Error::unsupported("product of powers of independent bases has no pure-power form");
}

ExactScale ExactScale::operator/(const ExactScale& o) const {
  ExactScale inv = o;
  inv.exp_ = -inv.exp_;
  if (inv.exp_ == 0) inv.base_ = 1;
  return *this * inv;
}

ExactScale ExactScale::pow(const mpq_class& t) const {
  if (is_one() || t == 0) return one();
  return ExactScale(base_, exp_ * t);
}

std::optional<ExactScale> ExactScale::pow(const Exponent& s) const {
  if (s.is_rational()) return pow(s.rat());
  if (is_one()) return one();
  // (B^e)^(m*log(A)/log(B)) == A^(e*m)
  if (base_ == s.log_den_base()) {
    mpq_class e = exp_ * s.scale();
    if (e == 0) return one();
    return ExactScale(s.log_num_base(), e);
  }
  return std::nullopt;
}

std::optional<mpq_class> ExactScale::to_rational() const {
  if (is_one()) return mpq_class(1);
  if (exp_.get_den() != 1) return std::nullopt;
  return mpq_pow_si(mpq_class(base_), to_long_checked(exp_.get_num(), "scale value"));
}

BigFloat ExactScale::approx(mpfr_prec_t prec) const {
  if (auto r = to_rational()) return BigFloat(*r, prec);
  return bf_pow(BigFloat(mpz_class(base_), prec), BigFloat(exp_, prec));
}

BigFloat ExactScale::log2(mpfr_prec_t prec) const {
  if (is_one()) return BigFloat(0L, prec);
  return BigFloat(exp_, prec) * bf_log2(BigFloat(base_, prec));
}

std::string ExactScale::str() const {
  if (is_one()) return "1";
  return base_.get_str() + "^(" + rational_str(exp_) + ")";
}

int cmp(const ExactScale& x, const ExactScale& y) {
  if (x.base_ == y.base_) {
    if (x.is_one() && y.is_one()) return 0;
    // same primitive base >= 2: monotone in the exponent
    return ::cmp(x.exp_, y.exp_);
  }
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), x.exp_.get_den().get_mpz_t(), y.exp_.get_den().get_mpz_t());
  mpq_class ex = x.exp_ * mpq_class(l), ey = y.exp_ * mpq_class(l);
  mpq_class vx = mpq_pow_si(mpq_class(x.base_), to_long_checked(ex.get_num(), "scale cmp"));
  mpq_class vy = mpq_pow_si(mpq_class(y.base_), to_long_checked(ey.get_num(), "scale cmp"));
  return ::cmp(vx, vy);
}

int cmp(const ExactScale& x, const mpq_class& q) {
  if (sgn(q) <= 0) return 1;  // scales are positive reals
  if (auto r = x.to_rational()) return ::cmp(*r, q);
  long d = to_long_checked(x.exp_.get_den(), "scale cmp");
  mpq_class lhs = mpq_pow_si(mpq_class(x.base_), to_long_checked(x.exp_.get_num(), "scale cmp"));
  mpq_class rhs = mpq_pow_si(q, d);
  return ::cmp(lhs, rhs);
}

// ---------------------------------------------------------------------------
// RootValue
// ---------------------------------------------------------------------------

RootContext::RootContext(const mpz_class& base, unsigned long order) : order_(order) {
  if (order < 1) throw Error::bad_input("root context: order must be >= 1");
  base_ = primitive_root(base).first;
}

RootValue::RootValue(RootContextPtr ctx) : ctx_(std::move(ctx)) {
  if (ctx_) coeff_.assign(ctx_->order(), mpq_class(0));
}

RootValue::RootValue(RootContextPtr ctx, const mpq_class& rational) : RootValue(std::move(ctx)) {
  if (coeff_.empty()) coeff_.resize(1, mpq_class(0));
  coeff_[0] = rational;
}

RootValue RootValue::from_scale(RootContextPtr ctx, const ExactScale& scale) {
  if (!ctx) throw Error::bad_input("from_scale: null context");
  RootValue v(ctx);
  if (scale.is_one()) {
    v.coeff_[0] = 1;
    return v;
  }
  if (scale.base() != ctx->base())
    throw Error::bad_input("from_scale: scale base " + scale.base().get_str() +
                           " does not match field base " + ctx->base().get_str());
  unsigned long q = ctx->order();
  const mpq_class& e = scale.exponent();
  if (!mpz_divisible_p(mpz_class(q).get_mpz_t(), e.get_den().get_mpz_t()))
    throw Error::bad_input("from_scale: exponent denominator does not divide field order");
  // C^(P/Q) with P = m*Q + rho, 0 <= rho < Q:
  //   rho == 0 -> C^m, else C^(m+1) * eta^(Q - rho), eta = C^(-1/Q)
  mpz_class P = e.get_num() * (mpz_class(q) / e.get_den());
  mpz_class m, rho;
  mpz_fdiv_qr(m.get_mpz_t(), rho.get_mpz_t(), P.get_mpz_t(), mpz_class(q).get_mpz_t());
  if (rho == 0) {
    v.coeff_[0] = mpq_pow_si(mpq_class(ctx->base()), to_long_checked(m, "from_scale"));
  } else {
    unsigned long j = q - rho.get_ui();
    v.coeff_[j] = mpq_pow_si(mpq_class(ctx->base()), to_long_checked(mpz_class(m + 1), "from_scale"));
  }
  return v;
}

bool RootValue::is_zero() const {
  for (const auto& c : coeff_)
    if (c != 0) return false;
  return true;
}

std::optional<mpq_class> RootValue::to_rational() const {
  for (size_t j = 1; j < coeff_.size(); ++j)
    if (coeff_[j] != 0) return std::nullopt;
  return coeff_.empty() ? mpq_class(0) : coeff_[0];
}

void RootValue::lift_to(const RootContextPtr& target) {
  if (!ctx_) {
    mpq_class c0 = coeff_.empty() ? mpq_class(0) : coeff_[0];
    ctx_ = target;
    coeff_.assign(ctx_->order(), mpq_class(0));
    coeff_[0] = c0;
    return;
  }
  if (*ctx_ == *target) return;
  // Same base, divisible orders: eta_q = eta_Q^(Q/q), so coefficient j of
  // the small field lands at index j*(Q/q) of the large one.
  unsigned long stride = target->order() / ctx_->order();
  std::vector<mpq_class> lifted(target->order(), mpq_class(0));
  for (size_t j = 0; j < coeff_.size(); ++j) lifted[j * stride] = coeff_[j];
  coeff_ = std::move(lifted);
  ctx_ = target;
}

void RootValue::align(const RootValue& o) {
  if (!o.ctx_) return;
  if (!ctx_) {
    lift_to(o.ctx_);
    return;
  }
  if (*ctx_ == *o.ctx_) return;
  if (ctx_->base() == o.ctx_->base()) {
    if (o.ctx_->order() % ctx_->order() == 0) {
      lift_to(o.ctx_);
      return;
    }
    if (ctx_->order() % o.ctx_->order() == 0) return;  // we already dominate
  }
  throw Error::bad_input("root values from different fields");
}

RootValue RootValue::operator-() const {
  RootValue r(*this);
  for (auto& c : r.coeff_) c = -c;
  return r;
}

RootValue& RootValue::operator+=(const RootValue& o) {
  align(o);
  if (ctx_ && o.ctx_ && !(*ctx_ == *o.ctx_)) {
    RootValue lifted(o);
    lifted.lift_to(ctx_);
    return *this += lifted;
  }
  if (coeff_.size() < o.coeff_.size()) coeff_.resize(o.coeff_.size(), mpq_class(0));
  for (size_t j = 0; j < o.coeff_.size(); ++j) coeff_[j] += o.coeff_[j];
  return *this;
}

RootValue& RootValue::operator-=(const RootValue& o) {
  align(o);
  if (ctx_ && o.ctx_ && !(*ctx_ == *o.ctx_)) {
    RootValue lifted(o);
    lifted.lift_to(ctx_);
    return *this -= lifted;
  }
  if (coeff_.size() < o.coeff_.size()) coeff_.resize(o.coeff_.size(), mpq_class(0));
  for (size_t j = 0; j < o.coeff_.size(); ++j) coeff_[j] -= o.coeff_[j];
  return *this;
}

RootValue operator*(const RootValue& a, const RootValue& b) {
  RootValue x(a), y(b);
  x.align(y);
  y.align(x);
  if (!x.ctx_) {  // both pure rationals
    RootValue r;
    r.coeff_.resize(1, mpq_class(0));
    r.coeff_[0] = (x.coeff_.empty() ? mpq_class(0) : x.coeff_[0]) *
                  (y.coeff_.empty() ? mpq_class(0) : y.coeff_[0]);
    return r;
  }
  unsigned long q = x.ctx_->order();
  mpq_class wrap(1);
  wrap /= mpq_class(x.ctx_->base());  // eta^q == 1/base
  RootValue r(x.ctx_);
  for (size_t i = 0; i < q; ++i) {
    if (x.coeff_[i] == 0) continue;
    for (size_t j = 0; j < q; ++j) {
      if (y.coeff_[j] == 0) continue;
      mpq_class t = x.coeff_[i] * y.coeff_[j];
      size_t k = i + j;
      if (k >= q) {
        k -= q;
        t *= wrap;
      }
      r.coeff_[k] += t;
    }
  }
  return r;
}

RootValue RootValue::operator*(const mpq_class& q) const {
  RootValue r(*this);
  for (auto& c : r.coeff_) c *= q;
  return r;
}

std::pair<BigFloat, BigFloat> RootValue::interval(mpfr_prec_t prec) const {
  BigFloat lo(0.0, prec), hi(0.0, prec);
  BigFloat eta_lo(0.0, prec), eta_hi(0.0, prec);
  BigFloat pw_lo(1.0, prec), pw_hi(1.0, prec);
  unsigned long q = ctx_ ? ctx_->order() : 1;
  if (ctx_) {
    BigFloat inv_lo(0.0, prec), inv_hi(0.0, prec);
    mpfr_set_z(inv_lo.raw(), ctx_->base().get_mpz_t(), MPFR_RNDU);
    mpfr_ui_div(inv_lo.raw(), 1, inv_lo.raw(), MPFR_RNDD);
    mpfr_set_z(inv_hi.raw(), ctx_->base().get_mpz_t(), MPFR_RNDD);
    mpfr_ui_div(inv_hi.raw(), 1, inv_hi.raw(), MPFR_RNDU);
    mpfr_rootn_ui(eta_lo.raw(), inv_lo.raw(), q, MPFR_RNDD);
    mpfr_rootn_ui(eta_hi.raw(), inv_hi.raw(), q, MPFR_RNDU);
  }
  BigFloat term(0.0, prec);
  for (size_t j = 0; j < coeff_.size(); ++j) {
    if (coeff_[j] != 0) {
      bool pos = coeff_[j] > 0;
      mpfr_mul_q(term.raw(), (pos ? pw_lo : pw_hi).raw(), coeff_[j].get_mpq_t(), MPFR_RNDD);
      mpfr_add(lo.raw(), lo.raw(), term.raw(), MPFR_RNDD);
      mpfr_mul_q(term.raw(), (pos ? pw_hi : pw_lo).raw(), coeff_[j].get_mpq_t(), MPFR_RNDU);
      mpfr_add(hi.raw(), hi.raw(), term.raw(), MPFR_RNDU);
    }
    if (j + 1 < coeff_.size()) {
      mpfr_mul(pw_lo.raw(), pw_lo.raw(), eta_lo.raw(), MPFR_RNDD);
      mpfr_mul(pw_hi.raw(), pw_hi.raw(), eta_hi.raw(), MPFR_RNDU);
    }
  }
  return {lo, hi};
}

int RootValue::sign() const {
  if (auto r = to_rational()) return sgn(*r);
  for (mpfr_prec_t prec = 128; prec <= (mpfr_prec_t(1) << 20); prec *= 2) {
    auto [lo, hi] = interval(prec);
    if (lo.sign() > 0) return 1;
    if (hi.sign() < 0) return -1;
  }
  throw Error::internal("root value sign: interval never separated from zero");
}

int cmp(const RootValue& a, const RootValue& b) {
  RootValue d(a);
  d -= b;
  return d.sign();
}

BigFloat RootValue::approx(mpfr_prec_t prec) const {
  BigFloat acc(0.0, prec);
  BigFloat eta(0.0, prec);
  if (ctx_) {
    mpfr_set_z(eta.raw(), ctx_->base().get_mpz_t(), MPFR_RNDN);
    mpfr_ui_div(eta.raw(), 1, eta.raw(), MPFR_RNDN);
    mpfr_rootn_ui(eta.raw(), eta.raw(), ctx_->order(), MPFR_RNDN);
  }
  BigFloat pw(1.0, prec), term(0.0, prec);
  for (size_t j = 0; j < coeff_.size(); ++j) {
    if (coeff_[j] != 0) {
      mpfr_mul_q(term.raw(), pw.raw(), coeff_[j].get_mpq_t(), MPFR_RNDN);
      acc += term;
    }
    if (j + 1 < coeff_.size()) pw *= eta;
  }
  return acc;
}

std::string RootValue::str() const {
  if (auto r = to_rational()) return rational_str(*r);
  std::ostringstream os;
  bool first = true;
  for (size_t j = 0; j < coeff_.size(); ++j) {
    if (coeff_[j] == 0) continue;
    if (!first) os << " + ";
    os << "(" << rational_str(coeff_[j]) << ")";
    if (j > 0) os << "*t^" << j;
    first = false;
  }
  os << "  [t = " << ctx_->base().get_str() << "^(-1/" << ctx_->order() << ")]";
  return os.str();
}

}  // namespace galedim
