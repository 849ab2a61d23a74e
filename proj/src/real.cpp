#include "heightlab/real.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "heightlab/error.hpp"

namespace heightlab {

namespace {

constexpr Precision kRadiusBits = 64;

// rad += ulp(mid) whenever the operation producing mid was inexact.
void add_rounding(Real& rad, const Real& mid, int ternary) {
  if (ternary == 0 || mid.is_zero()) return;
  Real ulp(kRadiusBits);
  mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid.get()) - mid.precision(), MPFR_RNDU);
  mpfr_add(rad.get(), rad.get(), ulp.get(), MPFR_RNDU);
}

Real abs_of(const Real& x) {
  Real out(x.precision());
  mpfr_abs(out.get(), x.get(), MPFR_RNDN);  // exact
  return out;
}

Real upper_bound_radius(const Real& r) {
  Real out(kRadiusBits);
  mpfr_set(out.get(), r.get(), MPFR_RNDU);
  return out;
}

}  // namespace

Precision bits_for_digits(unsigned digits) {
  return static_cast<Precision>(std::ceil(digits * 3.321928094887362)) + 24;
}

// ---------------------------------------------------------------- Real

Real::Real(Precision bits) {
  mpfr_init2(value_, std::max<Precision>(bits, MPFR_PREC_MIN));
  mpfr_set_zero(value_, 1);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::from_rational(const Rational& q, Precision bits, mpfr_rnd_t rnd) {
  Real out(bits);
  mpfr_set_q(out.value_, q.get_mpq_t(), rnd);
  return out;
}

Real Real::from_double(double d, Precision bits) {
  Real out(std::max<Precision>(bits, 53));
  mpfr_set_d(out.value_, d, MPFR_RNDN);
  return out;
}

std::string Real::to_string(int digits) const {
  std::unique_ptr<char, void (*)(char*)> buf(nullptr, mpfr_free_str);
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Rg", digits, value_);
  buf.reset(raw);
  return raw ? std::string(raw) : std::string();
}

// ---------------------------------------------------------------- Ball

Ball::Ball(Precision bits) : mid_(bits), rad_(kRadiusBits) {}

Ball::Ball(Real mid, Real rad) : mid_(std::move(mid)), rad_(upper_bound_radius(rad)) {}

Ball Ball::exact(const Rational& q, Precision bits) {
  Ball out(bits);
  int t = mpfr_set_q(out.mid_.get(), q.get_mpq_t(), MPFR_RNDN);
  add_rounding(out.rad_, out.mid_, t);
  return out;
}

Ball Ball::exact(long v, Precision bits) {
  Ball out(bits);
  int t = mpfr_set_si(out.mid_.get(), v, MPFR_RNDN);
  add_rounding(out.rad_, out.mid_, t);
  return out;
}

Ball Ball::from_interval(const Real& lo, const Real& hi) {
  Precision p = std::max(lo.precision(), hi.precision());
  Real mid(p);
  mpfr_add(mid.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  Real up(kRadiusBits), down(kRadiusBits);
  mpfr_sub(up.get(), hi.get(), mid.get(), MPFR_RNDU);
  mpfr_sub(down.get(), mid.get(), lo.get(), MPFR_RNDU);
  Real rad(kRadiusBits);
  mpfr_max(rad.get(), up.get(), down.get(), MPFR_RNDU);
  if (rad.sign() < 0) mpfr_set_zero(rad.get(), 1);
  return Ball(std::move(mid), std::move(rad));
}

Real Ball::lower() const {
  Real out(precision());
  mpfr_sub(out.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return out;
}

Real Ball::upper() const {
  Real out(precision());
  mpfr_add(out.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return out;
}

double Ball::lower_double() const { return lower().to_double(MPFR_RNDD); }
double Ball::upper_double() const { return upper().to_double(MPFR_RNDU); }

bool Ball::certainly_positive() const { return lower().sign() > 0; }
bool Ball::certainly_negative() const { return upper().sign() < 0; }
bool Ball::certainly_nonnegative() const { return lower().sign() >= 0; }

bool Ball::contains(const Ball& inner) const {
  return mpfr_lessequal_p(lower().get(), inner.lower().get()) &&
         mpfr_greaterequal_p(upper().get(), inner.upper().get());
}

bool Ball::contains(double v) const {
  Real x = Real::from_double(v, 64);
  return mpfr_lessequal_p(lower().get(), x.get()) && mpfr_greaterequal_p(upper().get(), x.get());
}

Ball Ball::operator-() const {
  Real m(precision());
  mpfr_neg(m.get(), mid_.get(), MPFR_RNDN);
  return Ball(std::move(m), rad_);
}

Ball operator+(const Ball& a, const Ball& b) {
  Real mid(std::max(a.precision(), b.precision()));
  int t = mpfr_add(mid.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  Real rad(kRadiusBits);
  mpfr_add(rad.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  add_rounding(rad, mid, t);
  return Ball(std::move(mid), std::move(rad));
}

Ball operator-(const Ball& a, const Ball& b) { return a + (-b); }

Ball operator*(const Ball& a, const Ball& b) {
  Real mid(std::max(a.precision(), b.precision()));
  int t = mpfr_mul(mid.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  Real rad(kRadiusBits), term(kRadiusBits);
  mpfr_mul(rad.get(), abs_of(a.mid_).get(), b.rad_.get(), MPFR_RNDU);
  mpfr_mul(term.get(), abs_of(b.mid_).get(), a.rad_.get(), MPFR_RNDU);
  mpfr_add(rad.get(), rad.get(), term.get(), MPFR_RNDU);
  mpfr_mul(term.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  mpfr_add(rad.get(), rad.get(), term.get(), MPFR_RNDU);
  add_rounding(rad, mid, t);
  return Ball(std::move(mid), std::move(rad));
}

Ball operator/(const Ball& a, const Ball& b) {
  Real bm = abs_of(b.mid_);
  Real gap(kRadiusBits);
  mpfr_sub(gap.get(), bm.get(), b.rad_.get(), MPFR_RNDD);
  if (gap.sign() <= 0) throw Error(ErrorCode::DivisionByZero, "divisor ball contains zero");
  Real mid(std::max(a.precision(), b.precision()));
  int t = mpfr_div(mid.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  Real num(kRadiusBits), bmd(kRadiusBits);
  mpfr_set(bmd.get(), bm.get(), MPFR_RNDD);
  mpfr_mul(num.get(), abs_of(a.mid_).get(), b.rad_.get(), MPFR_RNDU);
  mpfr_div(num.get(), num.get(), bmd.get(), MPFR_RNDU);
  mpfr_add(num.get(), num.get(), a.rad_.get(), MPFR_RNDU);
  Real rad(kRadiusBits);
  mpfr_div(rad.get(), num.get(), gap.get(), MPFR_RNDU);
  add_rounding(rad, mid, t);
  return Ball(std::move(mid), std::move(rad));
}

Ball abs(const Ball& a) { return Ball(abs_of(a.mid_), a.rad_); }

Ball log(const Ball& a) {
  Real lo = a.lower();
  if (lo.sign() <= 0) throw Error(ErrorCode::BadParameter, "logarithm of a ball that is not certainly positive");
  Real mid(a.precision());
  int t = mpfr_log(mid.get(), a.mid_.get(), MPFR_RNDN);
  Real rad(kRadiusBits);
  if (!a.rad_.is_zero()) {
    Real lo_down(kRadiusBits);
    mpfr_set(lo_down.get(), lo.get(), MPFR_RNDD);
    mpfr_div(rad.get(), a.rad_.get(), lo_down.get(), MPFR_RNDU);
  }
  add_rounding(rad, mid, t);
  return Ball(std::move(mid), std::move(rad));
}

Ball exp(const Ball& a) {
  Real mid(a.precision());
  int t = mpfr_exp(mid.get(), a.mid_.get(), MPFR_RNDN);
  Real rad(kRadiusBits);
  if (!a.rad_.is_zero()) {
    Real up(kRadiusBits), grow(kRadiusBits);
    mpfr_exp(up.get(), a.mid_.get(), MPFR_RNDU);
    mpfr_expm1(grow.get(), a.rad_.get(), MPFR_RNDU);
    mpfr_mul(rad.get(), up.get(), grow.get(), MPFR_RNDU);
  }
  add_rounding(rad, mid, t);
  return Ball(std::move(mid), std::move(rad));
}

Ball max(const Ball& a, const Ball& b) {
  Real alo = a.lower(), ahi = a.upper(), blo = b.lower(), bhi = b.upper();
  if (mpfr_greaterequal_p(alo.get(), bhi.get())) return a;
  if (mpfr_greaterequal_p(blo.get(), ahi.get())) return b;
  const Real& lo = mpfr_greaterequal_p(alo.get(), blo.get()) ? alo : blo;
  const Real& hi = mpfr_greaterequal_p(ahi.get(), bhi.get()) ? ahi : bhi;
  return Ball::from_interval(lo, hi);
}

Ball min(const Ball& a, const Ball& b) { return -max(-a, -b); }

std::string Ball::to_string(int digits) const {
  return mid_.to_string(digits) + " +/- " + rad_.to_string(3);
}

Ball scale(const Ball& a, const Rational& q) { return a * Ball::exact(q, a.precision()); }

Ball log_of(const Rational& q, Precision bits) { return log(Ball::exact(q, bits)); }

Ball rational_power(const Rational& base, const Rational& exponent, Precision bits) {
  if (base <= 0) throw Error(ErrorCode::BadParameter, "rational_power needs a positive base");
  if (exponent == 0 || base == 1) return Ball::exact(1L, bits);
  Integer num = exponent.get_num();
  unsigned long den = exponent.get_den().get_ui();
  Rational b = num < 0 ? Rational(1 / base) : base;
  Rational power;
  mpz_class e = abs(num);
  mpz_pow_ui(power.get_num_mpz_t(), b.get_num_mpz_t(), e.get_ui());
  mpz_pow_ui(power.get_den_mpz_t(), b.get_den_mpz_t(), e.get_ui());
  power.canonicalize();
  if (den == 1) return Ball::exact(power, bits);
  Real lo = Real::from_rational(power, bits, MPFR_RNDD);
  Real hi = Real::from_rational(power, bits, MPFR_RNDU);
  mpfr_rootn_ui(lo.get(), lo.get(), den, MPFR_RNDD);
  mpfr_rootn_ui(hi.get(), hi.get(), den, MPFR_RNDU);
  return Ball::from_interval(lo, hi);
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

Verdict sign_ge_zero(const Ball& value) {
  if (value.lower().sign() >= 0) return Verdict::Holds;
  if (value.upper().sign() < 0) return Verdict::Fails;
  return Verdict::Indeterminate;
}

Verdict compare_ge(const Ball& lhs, const Ball& rhs) { return sign_ge_zero(lhs - rhs); }

// ---------------------------------------------------------------- ComplexBall

ComplexBall::ComplexBall(Precision bits) : re(bits), im(bits), rad(kRadiusBits) {}

ComplexBall::ComplexBall(Real re_, Real im_, Real rad_)
    : re(std::move(re_)), im(std::move(im_)), rad(upper_bound_radius(rad_)) {}

ComplexBall ComplexBall::from_real(const Ball& b) {
  return ComplexBall(b.mid(), Real(b.precision()), b.rad());
}

ComplexBall ComplexBall::exact(const Rational& q, Precision bits) { return from_real(Ball::exact(q, bits)); }

namespace {

Real modulus_upper(const ComplexBall& z) {
  Real out(kRadiusBits);
  mpfr_hypot(out.get(), z.re.get(), z.im.get(), MPFR_RNDU);
  return out;
}

}  // namespace

ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) {
  Precision p = std::max(a.precision(), b.precision());
  Real re(p), im(p), rad(kRadiusBits);
  int t1 = mpfr_add(re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  int t2 = mpfr_add(im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_add(rad.get(), a.rad.get(), b.rad.get(), MPFR_RNDU);
  add_rounding(rad, re, t1);
  add_rounding(rad, im, t2);
  return ComplexBall(std::move(re), std::move(im), std::move(rad));
}

ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) {
  Real re(b.re.precision()), im(b.im.precision());
  mpfr_neg(re.get(), b.re.get(), MPFR_RNDN);
  mpfr_neg(im.get(), b.im.get(), MPFR_RNDN);
  return a + ComplexBall(std::move(re), std::move(im), b.rad);
}

ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
  Precision p = std::max(a.precision(), b.precision());
  Real re(p), im(p);
  int t1 = mpfr_fmms(re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  int t2 = mpfr_fmma(im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  Real rad(kRadiusBits), term(kRadiusBits);
  mpfr_mul(rad.get(), modulus_upper(a).get(), b.rad.get(), MPFR_RNDU);
  mpfr_mul(term.get(), modulus_upper(b).get(), a.rad.get(), MPFR_RNDU);
  mpfr_add(rad.get(), rad.get(), term.get(), MPFR_RNDU);
  mpfr_mul(term.get(), a.rad.get(), b.rad.get(), MPFR_RNDU);
  mpfr_add(rad.get(), rad.get(), term.get(), MPFR_RNDU);
  add_rounding(rad, re, t1);
  add_rounding(rad, im, t2);
  return ComplexBall(std::move(re), std::move(im), std::move(rad));
}

Ball abs(const ComplexBall& z) {
  Real mid(z.precision());
  int t = mpfr_hypot(mid.get(), z.re.get(), z.im.get(), MPFR_RNDN);
  Real rad(kRadiusBits);
  mpfr_set(rad.get(), z.rad.get(), MPFR_RNDU);
  add_rounding(rad, mid, t);
  return Ball(std::move(mid), std::move(rad));
}

}  // namespace heightlab
