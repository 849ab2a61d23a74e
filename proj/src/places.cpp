#include "heightlab/places.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <set>

#include "heightlab/error.hpp"

namespace heightlab {

namespace {

Integer modp(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// ---------------------------------------------------------------- p-adic square roots

Integer sqrt_mod_prime(const Integer& a, const Integer& p) {
  Integer n = modp(a, p);
  if (n == 0) return 0;
  // Tonelli-Shanks.
  Integer q = p - 1;
  unsigned long s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q /= 2;
    ++s;
  }
  Integer z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
  auto powm = [&](const Integer& b, const Integer& e) {
    Integer r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
  };
  Integer c = powm(z, q), x = powm(n, (q + 1) / 2), t = powm(n, q);
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    Integer tt = t;
    while (tt != 1) {
      tt = modp(tt * tt, p);
      ++i;
    }
    Integer b = c;
    for (unsigned long j = 0; j + i + 1 < m; ++j) b = modp(b * b, p);
    x = modp(x * b, p);
    c = modp(b * b, p);
    t = modp(t * c, p);
    m = i;
  }
  return x;
}

// Square root of a unit d modulo p^k (odd p) by Newton iteration.
Integer sqrt_mod_prime_power(const Integer& d, const Integer& p, unsigned k) {
  Integer pk = ipow(p, k);
  Integer r = sqrt_mod_prime(d, p);
  for (int guard = 0; guard < 64; ++guard) {
    Integer err = modp(r * r - d, pk);
    if (err == 0) break;
    Integer inv;
    Integer two_r = modp(2 * r, pk);
    mpz_invert(inv.get_mpz_t(), two_r.get_mpz_t(), pk.get_mpz_t());
    r = modp(r - err * inv, pk);
  }
  return r;
}

// Square root of d = 1 mod 8 modulo 2^(m-1).
Integer sqrt_mod_two_power(const Integer& d, unsigned m) {
  Integer r = 1;
  for (unsigned j = 3; j < m; ++j) {
    Integer mod = ipow(2, j + 1);
    if (modp(r * r - d, mod) != 0) r += ipow(2, j - 1);
  }
  return r;
}

// Order by p-adic digits, least significant first.
bool padic_less(Integer a, Integer b, const Integer& p, unsigned k) {
  for (unsigned i = 0; i < k; ++i) {
    Integer da = modp(a, p), db = modp(b, p);
    if (da != db) return da < db;
    a = (a - da) / p;
    b = (b - db) / p;
  }
  return false;
}

Place make_nonarch(const FieldPtr& field, const Integer& p, unsigned digits, Precision bits) {
  Place w;
  w.field = field;
  w.kind = PlaceKind::NonArchimedean;
  w.prime = p;
  w.precision = digits;
  w.bits = bits;
  w.log_prime = log_of(Rational(p), bits);
  return w;
}

std::vector<Place> quadratic_places(const FieldPtr& field, const Integer& p, unsigned digits, Precision bits) {
  const auto& f = field->min_poly();
  const Integer& c = f[0];
  const Integer& b = f[1];
  Integer disc = b * b - 4 * c;
  Integer d0 = disc < 0 ? Integer(-1) : Integer(1);
  Integer s = 1;
  for (const auto& [q, e] : factorize(disc)) {
    if (e % 2 == 1) d0 *= q;
    s *= ipow(q, e / 2);
  }
  Integer d0_mod4 = modp(d0, 4);
  Integer dk = d0_mod4 == 1 ? d0 : Integer(4 * d0);

  auto single = [&](int e, int fdeg) {
    Place w = make_nonarch(field, p, digits, bits);
    w.e = e;
    w.f = fdeg;
    w.local_degree = 2;
    w.local_factor = f;
    w.exact_factor = true;
    return std::vector<Place>{w};
  };

  if (mpz_divisible_p(dk.get_mpz_t(), p.get_mpz_t())) return single(2, 1);

  bool split;
  if (p == 2) {
    split = modp(d0, 8) == 1;
  } else {
    split = mpz_legendre(modp(d0, p).get_mpz_t(), p.get_mpz_t()) == 1;
  }
  if (!split) return single(1, 2);

  const unsigned k = digits;
  Integer pk = ipow(p, k);
  std::vector<Integer> roots;
  if (p == 2) {
    Integer r = sqrt_mod_two_power(d0, k + 3);
    Integer mod = ipow(2, k + 2);
    for (int sign : {1, -1}) {
      Integer num = modp(-b + sign * s * r, mod);
      roots.push_back(modp(num / 2, pk));
    }
  } else {
    Integer r = sqrt_mod_prime_power(modp(d0, pk), p, k);
    Integer inv2;
    Integer two = 2;
    mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), pk.get_mpz_t());
    for (int sign : {1, -1}) roots.push_back(modp((-b + sign * s * r) * inv2, pk));
  }
  for (const auto& root : roots) {
    if (modp(poly::eval(f, root), pk) != 0) {
      throw Error(ErrorCode::PrecisionExhausted, "p-adic root failed verification at p=" + p.get_str());
    }
  }
  std::sort(roots.begin(), roots.end(), [&](const Integer& x, const Integer& y) { return padic_less(x, y, p, k); });
  std::vector<Place> out;
  for (size_t i = 0; i < roots.size(); ++i) {
    Place w = make_nonarch(field, p, digits, bits);
    w.index = static_cast<int>(i);
    w.local_degree = 1;
    w.local_factor = poly::ZPoly{modp(-roots[i], pk), Integer(1)};
    w.exact_factor = false;
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<Place> general_places(const FieldPtr& field, const Integer& p, unsigned digits, Precision bits) {
  if (field->is_rational()) {
    Place w = make_nonarch(field, p, digits, bits);
    w.local_factor = field->min_poly();
    return {w};
  }
  if (mpz_divisible_p(field->poly_disc().get_mpz_t(), p.get_mpz_t())) {
    throw Error(ErrorCode::UnsupportedRamification,
                "prime " + p.get_str() + " divides the polynomial discriminant of a field of degree " +
                    std::to_string(field->degree()));
  }
  auto mod_factors = poly::factor_mod_p(field->min_poly(), p);
  if (mod_factors.size() == 1) {
    Place w = make_nonarch(field, p, digits, bits);
    w.local_degree = w.f = field->degree();
    w.local_factor = field->min_poly();
    return {w};
  }
  auto lifted = poly::hensel_lift(field->min_poly(), mod_factors, p, digits);
  std::vector<Place> out;
  for (size_t i = 0; i < lifted.size(); ++i) {
    Place w = make_nonarch(field, p, digits, bits);
    w.index = static_cast<int>(i);
    w.local_degree = w.f = poly::degree(lifted[i]);
    w.local_factor = lifted[i];
    w.exact_factor = false;
    out.push_back(std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------- embeddings

struct Cx {
  Real re, im;
  explicit Cx(Precision bits) : re(bits), im(bits) {}
};

Cx cx_add(const Cx& a, const Cx& b) {
  Cx out(a.re.precision());
  mpfr_add(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(out.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return out;
}

Cx cx_sub(const Cx& a, const Cx& b) {
  Cx out(a.re.precision());
  mpfr_sub(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(out.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return out;
}

Cx cx_mul(const Cx& a, const Cx& b) {
  Cx out(a.re.precision());
  mpfr_fmms(out.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmma(out.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  return out;
}

Cx cx_div(const Cx& a, const Cx& b) {
  Precision p = a.re.precision();
  Real den(p);
  mpfr_fmma(den.get(), b.re.get(), b.re.get(), b.im.get(), b.im.get(), MPFR_RNDN);
  Cx out(p);
  mpfr_fmma(out.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmms(out.im.get(), a.im.get(), b.re.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_div(out.re.get(), out.re.get(), den.get(), MPFR_RNDN);
  mpfr_div(out.im.get(), out.im.get(), den.get(), MPFR_RNDN);
  return out;
}

double cx_abs_d(const Cx& a) { return std::hypot(a.re.to_double(), a.im.to_double()); }

Cx cx_from(const Integer& v, Precision bits) {
  Cx out(bits);
  mpfr_set_z(out.re.get(), v.get_mpz_t(), MPFR_RNDN);
  return out;
}

ComplexBall as_ball(const Cx& z) { return ComplexBall(z.re, z.im, Real(64)); }

std::vector<Place> archimedean_places(const FieldPtr& field, Precision bits) {
  const auto& f = field->min_poly();
  const int d = field->degree();
  std::vector<Place> out;
  auto base = [&]() {
    Place w;
    w.field = field;
    w.kind = PlaceKind::Archimedean;
    w.bits = bits;
    return w;
  };

  // Real embeddings: Sturm isolation and exact bisection.
  auto intervals = poly::isolate_real_roots(f);
  Rational width(1);
  mpq_div_2exp(width.get_mpq_t(), width.get_mpq_t(), bits + 8);
  for (size_t i = 0; i < intervals.size(); ++i) {
    poly::refine_root(f, intervals[i], width);
    Place w = base();
    w.index = static_cast<int>(i);
    w.real = true;
    w.local_degree = 1;
    Real lo = Real::from_rational(intervals[i].lo, bits, MPFR_RNDD);
    Real hi = Real::from_rational(intervals[i].hi, bits, MPFR_RNDU);
    w.root = ComplexBall::from_real(Ball::from_interval(lo, hi));
    out.push_back(std::move(w));
  }
  const int r1 = static_cast<int>(intervals.size());
  const int r2 = (d - r1) / 2;
  if (r2 == 0) return out;

  // Complex embeddings: companion eigenvalues, Aberth refinement, then
  // Weierstrass inclusion disks.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -f[i].get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const Precision wp = bits + 32;
  std::vector<Cx> z;
  for (int i = 0; i < d; ++i) {
    Cx c(wp);
    std::complex<double> ev = solver.eigenvalues()[i];
    // Nudge exact-real starts so Aberth can move pairs off the axis.
    mpfr_set_d(c.re.get(), ev.real() + 1e-3 * (i + 1), MPFR_RNDN);
    mpfr_set_d(c.im.get(), ev.imag() + 1e-3 * (i + 2), MPFR_RNDN);
    z.push_back(std::move(c));
  }
  poly::ZPoly df = poly::derivative(f);
  auto horner = [&](const poly::ZPoly& g, const Cx& x) {
    Cx acc(wp);
    for (auto it = g.rbegin(); it != g.rend(); ++it) acc = cx_add(cx_mul(acc, x), cx_from(*it, wp));
    return acc;
  };
  const double tol = std::ldexp(1.0, -static_cast<int>(bits) - 8);
  for (int iter = 0; iter < 500; ++iter) {
    double worst = 0;
    for (int i = 0; i < d; ++i) {
      Cx fz = horner(f, z[i]);
      if (mpfr_zero_p(fz.re.get()) && mpfr_zero_p(fz.im.get())) continue;
      Cx ratio = cx_div(fz, horner(df, z[i]));
      Cx sum(wp);
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        Cx one(wp);
        mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
        sum = cx_add(sum, cx_div(one, cx_sub(z[i], z[j])));
      }
      Cx one(wp);
      mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
      Cx step = cx_div(ratio, cx_sub(one, cx_mul(ratio, sum)));
      z[i] = cx_sub(z[i], step);
      worst = std::max(worst, cx_abs_d(step) / std::max(1.0, cx_abs_d(z[i])));
    }
    if (worst < tol) break;
  }

  // Certification.
  std::vector<ComplexBall> centers;
  for (const auto& zi : z) centers.push_back(as_ball(zi));
  std::vector<Real> radii;
  for (int i = 0; i < d; ++i) {
    ComplexBall acc(wp);
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * centers[i] + ComplexBall::exact(Rational(*it), wp);
    Ball num = abs(acc);
    Ball den = Ball::exact(1L, wp);
    for (int j = 0; j < d; ++j) {
      if (j != i) den = den * abs(centers[i] - centers[j]);
    }
    if (!den.certainly_positive()) throw Error(ErrorCode::PrecisionExhausted, "root approximations collided");
    Ball w = num / den;
    Real r(64);
    mpfr_mul_ui(r.get(), w.upper().get(), static_cast<unsigned long>(d), MPFR_RNDU);
    radii.push_back(r);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Real gap = abs(centers[i] - centers[j]).lower();
      Real need(64);
      mpfr_add(need.get(), radii[i].get(), radii[j].get(), MPFR_RNDU);
      if (!mpfr_greater_p(gap.get(), need.get())) {
        throw Error(ErrorCode::PrecisionExhausted, "complex root disks are not separated");
      }
    }
  }
  std::vector<int> upper;
  for (int i = 0; i < d; ++i) {
    Real lo(wp);
    mpfr_sub(lo.get(), z[i].im.get(), radii[i].get(), MPFR_RNDD);
    if (lo.sign() > 0) upper.push_back(i);
  }
  if (static_cast<int>(upper.size()) != r2) {
    throw Error(ErrorCode::PrecisionExhausted, "could not certify the complex embeddings");
  }
  std::sort(upper.begin(), upper.end(), [&](int a, int b) {
    int c = mpfr_cmp(z[a].re.get(), z[b].re.get());
    if (c != 0) return c < 0;
    return mpfr_cmp(z[a].im.get(), z[b].im.get()) < 0;
  });
  for (size_t k = 0; k < upper.size(); ++k) {
    int i = upper[k];
    Place w = base();
    w.index = r1 + static_cast<int>(k);
    w.real = false;
    w.local_degree = 2;
    Real re(bits), im(bits);
    mpfr_set(re.get(), z[i].re.get(), MPFR_RNDN);
    mpfr_set(im.get(), z[i].im.get(), MPFR_RNDN);
    // Account for the rounding of the center down to `bits`.
    Real rad(64), shift(64);
    mpfr_sub(shift.get(), re.get(), z[i].re.get(), MPFR_RNDU);
    mpfr_abs(shift.get(), shift.get(), MPFR_RNDU);
    mpfr_add(rad.get(), radii[i].get(), shift.get(), MPFR_RNDU);
    mpfr_sub(shift.get(), im.get(), z[i].im.get(), MPFR_RNDU);
    mpfr_abs(shift.get(), shift.get(), MPFR_RNDU);
    mpfr_add(rad.get(), rad.get(), shift.get(), MPFR_RNDU);
    w.root = ComplexBall(std::move(re), std::move(im), std::move(rad));
    out.push_back(std::move(w));
  }
  return out;
}

void require_field(const Place& place, const FieldElement& a) {
  if (!place.field || !a.field() || !place.field->same_as(*a.field())) {
    throw Error(ErrorCode::FieldMismatch, "element and place belong to different fields");
  }
}

}  // namespace

std::string Place::v_label() const { return archimedean() ? std::string("inf") : prime.get_str(); }

std::string Place::describe() const {
  std::string out = "w" + std::to_string(index) + "|" + v_label();
  if (archimedean()) {
    out += real ? " (real)" : " (complex)";
  } else {
    out += " (e=" + std::to_string(e) + ", f=" + std::to_string(f) + ")";
  }
  return out;
}

std::vector<Place> places_above(const FieldPtr& field, const Integer& v, unsigned digits) {
  if (!field) throw Error(ErrorCode::BadParameter, "missing field");
  if (digits == 0) throw Error(ErrorCode::BadParameter, "precision must be positive");
  const Precision bits = bits_for_digits(digits);
  if (v == 0) {
    if (field->is_rational()) {
      Place w;
      w.field = field;
      w.kind = PlaceKind::Archimedean;
      w.bits = bits;
      w.root = ComplexBall::exact(0, bits);
      return {w};
    }
    return archimedean_places(field, bits);
  }
  if (!is_prime(v)) throw Error(ErrorCode::BadParameter, v.get_str() + " is not a prime");
  if (field->degree() == 2) return quadratic_places(field, v, digits, bits);
  return general_places(field, v, digits, bits);
}

ComplexBall embed(const Place& place, const FieldElement& a) {
  require_field(place, a);
  if (!place.archimedean()) throw Error(ErrorCode::BadParameter, "embedding requested at a finite place");
  const auto& c = a.coeffs();
  ComplexBall acc(place.bits);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * place.root + ComplexBall::exact(*it, place.bits);
  }
  return acc;
}

Ball embed_real(const Place& place, const FieldElement& a) {
  require_field(place, a);
  if (!place.archimedean() || !place.real) throw Error(ErrorCode::BadParameter, "not a real place");
  Ball root(place.root.re, place.root.rad);
  const auto& c = a.coeffs();
  Ball acc = Ball::exact(0L, place.bits);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * root + Ball::exact(*it, place.bits);
  return acc;
}

long local_norm_order(const Place& place, const FieldElement& a) {
  require_field(place, a);
  if (place.archimedean()) throw Error(ErrorCode::BadParameter, "order requested at an archimedean place");
  if (a.is_zero()) throw Error(ErrorCode::DivisionByZero, "order of zero");
  const Integer& p = place.prime;
  if (a.is_rational()) return place.local_degree * valuation(a.constant(), p);
  Rational scale;
  poly::ZPoly g = poly::primitive_part(a.as_poly(), &scale);
  long ord = place.local_degree * valuation(scale, p);
  Integer res;
  if (poly::degree(place.local_factor) == 1) {
    // Res(x - r, g) = g(r).
    res = poly::eval(g, Integer(-place.local_factor[0]));
  } else {
    res = poly::resultant(place.local_factor, g);
  }
  if (place.exact_factor) return ord + static_cast<long>(valuation(res, p));
  Integer pk = ipow(p, place.precision);
  res = modp(res, pk);
  if (res == 0) {
    throw Error(ErrorCode::PrecisionExhausted, "local norm order exceeds " + std::to_string(place.precision) +
                                                   " p-adic digits at " + place.describe());
  }
  return ord + static_cast<long>(valuation(res, p));
}

LocalValue abs_value(const Place& place, const FieldElement& a, Normalization norm) {
  require_field(place, a);
  LocalValue out;
  out.prime = place.prime;
  if (a.is_zero()) {
    out.is_zero = true;
    return out;
  }
  const int d = place.field->degree();
  if (!place.archimedean()) {
    long ord = local_norm_order(place, a);
    int denom = norm == Normalization::Extension ? place.local_degree : d;
    out.exact_power = true;
    out.exponent = Rational(-ord, denom);
    out.exponent.canonicalize();
    out.log_value = scale(place.log_prime, out.exponent);
    return out;
  }
  Ball log_mod(place.bits);
  if (a.is_rational()) {
    log_mod = log_of(abs(a.constant()), place.bits);
  } else {
    Ball modulus = place.real ? abs(embed_real(place, a)) : abs(embed(place, a));
    if (!modulus.certainly_positive()) {
      throw Error(ErrorCode::PrecisionExhausted, "embedding of a nonzero element not separated from 0 at " +
                                                     place.describe());
    }
    log_mod = log(modulus);
  }
  if (norm == Normalization::FieldNormalized) {
    Rational share(place.local_degree, d);
    share.canonicalize();
    log_mod = scale(log_mod, share);
  }
  out.log_value = log_mod;
  return out;
}

Ball log_abs(const Place& place, const FieldElement& a, Normalization norm) {
  LocalValue v = abs_value(place, a, norm);
  if (v.is_zero) throw Error(ErrorCode::DivisionByZero, "log of |0|");
  return v.log_value;
}

DefectReport product_formula_defect(const FieldPtr& field, const FieldElement& a, unsigned digits) {
  if (a.is_zero()) throw Error(ErrorCode::BadParameter, "product formula needs a nonzero element");
  const Precision bits = bits_for_digits(digits);
  DefectReport out;
  std::set<Integer> primes;
  auto add_primes = [&](const Integer& n) {
    if (n == 0) return;
    for (const auto& [p, e] : factorize(n)) primes.insert(p);
  };

  if (a.is_rational()) {
    const Rational& q = a.constant();
    add_primes(Integer(q.get_num()));
    add_primes(Integer(q.get_den()));
    Rational product = abs(q);
    for (const auto& p : primes) {
      long ord = valuation(q, p);
      Integer pw = ipow(p, static_cast<unsigned long>(std::labs(ord)));
      product = ord >= 0 ? Rational(product / pw) : Rational(product * pw);
    }
    out.exact = true;
    out.primes.assign(primes.begin(), primes.end());
    out.defect = product == 1 ? Ball::exact(0L, bits) : abs(log_of(product, bits));
    return out;
  }

  Rational scale_q;
  poly::ZPoly g = poly::primitive_part(a.as_poly(), &scale_q);
  add_primes(Integer(scale_q.get_num()));
  add_primes(Integer(scale_q.get_den()));
  Rational norm_g = charpoly_norm(FieldElement(field, poly::to_q(g))).norm;
  add_primes(Integer(norm_g.get_num()));

  Ball sum = Ball::exact(0L, bits);
  for (const auto& w : places_above(field, 0, digits)) sum += log_abs(w, a, Normalization::FieldNormalized);
  for (const auto& p : primes) {
    for (const auto& w : places_above(field, p, digits)) sum += log_abs(w, a, Normalization::FieldNormalized);
  }
  out.primes.assign(primes.begin(), primes.end());
  out.defect = abs(sum);
  return out;
}

}  // namespace heightlab
