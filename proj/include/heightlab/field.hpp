#pragma once

#include <memory>
#include <string>
#include <vector>

#include "heightlab/numeric.hpp"
#include "heightlab/poly.hpp"

namespace heightlab {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

/// F = Q[x]/(f) for a monic irreducible integer polynomial f. Q itself is the
/// degree-one field with f = x.
class NumberField {
 public:
  /// Throws NonMonic or Reducible.
  static FieldPtr create(const poly::ZPoly& min_poly);
  static FieldPtr from_ints(const std::vector<long>& min_poly);
  static FieldPtr rationals();

  const poly::ZPoly& min_poly() const { return min_poly_; }
  int degree() const { return degree_; }
  const Integer& poly_disc() const { return poly_disc_; }
  bool is_rational() const { return degree_ == 1; }

  bool same_as(const NumberField& other) const { return min_poly_ == other.min_poly_; }
  std::string describe() const;

 private:
  NumberField(poly::ZPoly f, Integer disc);

  poly::ZPoly min_poly_;
  int degree_;
  Integer poly_disc_;
};

/// Element of F in the power basis 1, θ, ..., θ^(d-1).
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldPtr field, std::vector<Rational> coeffs);

  static FieldElement zero(FieldPtr field);
  static FieldElement one(FieldPtr field);
  static FieldElement from_rational(FieldPtr field, const Rational& q);
  static FieldElement theta(FieldPtr field);

  const FieldPtr& field() const { return field_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  /// True when the element lies in Q (all non-constant coefficients vanish).
  bool is_rational() const;
  const Rational& constant() const { return coeffs_[0]; }

  FieldElement operator-() const;
  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement scaled(const Rational& q) const;
  FieldElement inverse() const;
  friend bool operator==(const FieldElement& a, const FieldElement& b);

  /// Power-basis polynomial representing the element.
  poly::QPoly as_poly() const;

  std::string to_string() const;

 private:
  FieldPtr field_;
  std::vector<Rational> coeffs_;
};

struct NormData {
  poly::QPoly charpoly;  // monic, constant term first
  Rational norm;
  Rational trace;
};

/// Characteristic polynomial of multiplication by a on F as a Q-vector space.
NormData charpoly_norm(const FieldElement& a);

/// Exact determinant of a square matrix over F.
FieldElement field_determinant(std::vector<std::vector<FieldElement>> m);

}  // namespace heightlab
