#pragma once

#include <mpfr.h>

#include <string>

#include "heightlab/numeric.hpp"

namespace heightlab {

using Precision = mpfr_prec_t;

/// Working precision in bits for a request of `digits` decimal digits,
/// including guard bits.
Precision bits_for_digits(unsigned digits);

/// Owning wrapper around an mpfr_t.
class Real {
 public:
  explicit Real(Precision bits = 64);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  static Real from_rational(const Rational& q, Precision bits, mpfr_rnd_t rnd = MPFR_RNDN);
  static Real from_double(double d, Precision bits);

  Precision precision() const { return mpfr_get_prec(value_); }
  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  std::string to_string(int digits = 20) const;

  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }

 private:
  mpfr_t value_;
};

/// Midpoint-radius enclosure [mid - rad, mid + rad]. Radii are rounded
/// upward; an exactly representable result keeps radius zero.
class Ball {
 public:
  explicit Ball(Precision bits = 64);
  Ball(Real mid, Real rad);

  static Ball exact(const Rational& q, Precision bits);
  static Ball exact(long v, Precision bits);
  static Ball from_interval(const Real& lo, const Real& hi);

  const Real& mid() const { return mid_; }
  const Real& rad() const { return rad_; }
  Precision precision() const { return mid_.precision(); }

  Real lower() const;
  Real upper() const;
  double lower_double() const;
  double upper_double() const;
  double mid_double() const { return mid_.to_double(); }
  double rad_double() const { return rad_.to_double(MPFR_RNDU); }

  bool certainly_positive() const;
  bool certainly_negative() const;
  bool certainly_nonnegative() const;
  bool contains(const Ball& inner) const;
  bool contains(double v) const;

  Ball operator-() const;
  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator*(const Ball& a, const Ball& b);
  friend Ball operator/(const Ball& a, const Ball& b);
  Ball& operator+=(const Ball& b) { return *this = *this + b; }

  friend Ball abs(const Ball& a);
  friend Ball log(const Ball& a);
  friend Ball exp(const Ball& a);
  friend Ball max(const Ball& a, const Ball& b);
  friend Ball min(const Ball& a, const Ball& b);

  std::string to_string(int digits = 20) const;

 private:
  Real mid_;
  Real rad_;
};

Ball scale(const Ball& a, const Rational& q);
Ball log_of(const Rational& q, Precision bits);
/// Enclosure of base^exponent for base > 0, both exact.
Ball rational_power(const Rational& base, const Rational& exponent, Precision bits);

enum class Verdict { Holds, Fails, Indeterminate };

const char* to_string(Verdict v) noexcept;

/// Three-valued lhs >= rhs.
Verdict compare_ge(const Ball& lhs, const Ball& rhs);
/// Three-valued value >= 0.
Verdict sign_ge_zero(const Ball& value);

/// Complex disk: center (re, im), radius rad.
struct ComplexBall {
  Real re;
  Real im;
  Real rad;

  explicit ComplexBall(Precision bits = 64);
  ComplexBall(Real re_, Real im_, Real rad_);
  static ComplexBall from_real(const Ball& b);
  static ComplexBall exact(const Rational& q, Precision bits);

  Precision precision() const { return re.precision(); }
  bool is_real_line() const { return im.is_zero(); }

  friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b);
};

/// Enclosure of |z|.
Ball abs(const ComplexBall& z);

}  // namespace heightlab
