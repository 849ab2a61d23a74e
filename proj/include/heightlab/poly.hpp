#pragma once

#include <vector>

#include "heightlab/numeric.hpp"

namespace heightlab::poly {

// Dense univariate polynomials, constant term first. The zero polynomial is
// the empty vector; otherwise the last entry is nonzero.
using ZPoly = std::vector<Integer>;
using QPoly = std::vector<Rational>;

void trim(ZPoly& f);
void trim(QPoly& f);
int degree(const ZPoly& f);
int degree(const QPoly& f);

ZPoly from_ints(const std::vector<long>& coeffs);
QPoly to_q(const ZPoly& f);

ZPoly add(const ZPoly& a, const ZPoly& b);
ZPoly sub(const ZPoly& a, const ZPoly& b);
ZPoly mul(const ZPoly& a, const ZPoly& b);
ZPoly derivative(const ZPoly& f);
Integer content(const ZPoly& f);

QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly scale(const QPoly& a, const Rational& c);
QPoly derivative(const QPoly& f);
/// Quotient and remainder over Q; b must be nonzero.
void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);
QPoly rem(const QPoly& a, const QPoly& b);
/// Monic gcd over Q (zero if both inputs are zero).
QPoly gcd(const QPoly& a, const QPoly& b);
/// Exact division over Z when a = q*b with integral q; returns false otherwise.
bool exact_divide(const ZPoly& a, const ZPoly& b, ZPoly& q);

Rational eval(const QPoly& f, const Rational& x);
Integer eval(const ZPoly& f, const Integer& x);

/// Clears denominators: f = primitive(f) * c with primitive integral, c rational.
ZPoly primitive_part(const QPoly& f, Rational* scale_out = nullptr);

Integer resultant(const ZPoly& a, const ZPoly& b);
Integer discriminant(const ZPoly& f);
bool is_squarefree(const ZPoly& f);

// ---- arithmetic modulo m (m = p or p^k) ----

ZPoly reduce(const ZPoly& f, const Integer& m);
ZPoly mod_mul(const ZPoly& a, const ZPoly& b, const Integer& m);
ZPoly mod_sub(const ZPoly& a, const ZPoly& b, const Integer& m);
ZPoly mod_add(const ZPoly& a, const ZPoly& b, const Integer& m);
/// Division with remainder by b whose leading coefficient is a unit mod m.
void mod_divmod(const ZPoly& a, const ZPoly& b, const Integer& m, ZPoly& q, ZPoly& r);
ZPoly mod_rem(const ZPoly& a, const ZPoly& b, const Integer& m);
ZPoly mod_monic(const ZPoly& f, const Integer& m);
/// Monic gcd modulo a prime p.
ZPoly mod_gcd(const ZPoly& a, const ZPoly& b, const Integer& p);
ZPoly mod_powmod(const ZPoly& base, const Integer& e, const ZPoly& modulus, const Integer& m);

/// Monic irreducible factors of f modulo the prime p. f must be squarefree
/// mod p with unit leading coefficient. Deterministic.
std::vector<ZPoly> factor_mod_p(const ZPoly& f, const Integer& p);

/// Lifts a factorization f = prod(factors) mod p (pairwise coprime, monic)
/// to monic factors modulo p^k.
std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<ZPoly>& factors, const Integer& p, unsigned k);

/// Irreducible factors over Z of a monic squarefree-or-not integer polynomial
/// of degree at most 8, each monic, with multiplicity.
std::vector<ZPoly> factor_over_integers(const ZPoly& f);
bool is_irreducible(const ZPoly& f);

// ---- real roots ----

struct RootInterval {
  Rational lo;
  Rational hi;  // exactly one root in (lo, hi], or lo == hi for an exact rational root
};

/// Isolating intervals of the real roots of a squarefree integer polynomial,
/// ascending.
std::vector<RootInterval> isolate_real_roots(const ZPoly& f);
/// Shrinks an isolating interval until hi - lo <= width.
void refine_root(const ZPoly& f, RootInterval& iv, const Rational& width);

}  // namespace heightlab::poly
