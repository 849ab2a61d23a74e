#pragma once

#include <string>
#include <vector>

#include "heightlab/field.hpp"
#include "heightlab/real.hpp"

namespace heightlab {

enum class PlaceKind { Archimedean, NonArchimedean };

/// Which absolute value a call asks for.
///   Extension:       |a|_{v,K} = |N_{F_w/Q_v}(a)|_v^(1/[F_w:Q_v])
///   FieldNormalized: |a|_w     = |N_{F_w/Q_v}(a)|_v^(1/[F:Q])
enum class Normalization { Extension, FieldNormalized };

struct Place {
  FieldPtr field;
  PlaceKind kind = PlaceKind::Archimedean;
  Integer prime = 0;  // 0 for the archimedean place of Q
  int index = 0;      // w_index among the places above the same v
  int local_degree = 1;
  int e = 1;
  int f = 1;

  // Non-archimedean data: monic factor of min_poly over Z_p, known modulo
  // p^precision unless exact (then it is the global minimal polynomial or x).
  poly::ZPoly local_factor;
  unsigned precision = 0;
  bool exact_factor = true;
  Ball log_prime;

  // Archimedean data: enclosure of the image of θ; complex places use the
  // root with positive imaginary part.
  bool real = true;
  ComplexBall root;
  Precision bits = 64;

  bool archimedean() const { return kind == PlaceKind::Archimedean; }
  /// "inf" or the prime as decimal text.
  std::string v_label() const;
  std::string describe() const;
};

/// v = 0 denotes the archimedean place of Q; otherwise v must be prime.
/// `digits` is the decimal working precision (archimedean) or the number of
/// p-adic digits carried by local factors.
std::vector<Place> places_above(const FieldPtr& field, const Integer& v, unsigned digits);

/// Exponent r with |a| = p^r (non-archimedean), or the log of the value.
struct LocalValue {
  bool is_zero = false;
  bool exact_power = false;
  Integer prime = 0;
  Rational exponent = 0;
  Ball log_value;
};

LocalValue abs_value(const Place& place, const FieldElement& a, Normalization norm);
/// log of the absolute value; a must be nonzero.
Ball log_abs(const Place& place, const FieldElement& a, Normalization norm);

/// p-adic order of N_{F_w/Q_p}(a) for a != 0. Throws PrecisionExhausted when
/// the approximate local factor does not determine it.
long local_norm_order(const Place& place, const FieldElement& a);

/// Enclosure of the embedding image of a at an archimedean place.
ComplexBall embed(const Place& place, const FieldElement& a);
Ball embed_real(const Place& place, const FieldElement& a);

struct DefectReport {
  Ball defect;       // |sum of log|a|_w over all places|, F-normalized
  bool exact = false;  // decided in exact rational arithmetic (a in Q)
  std::vector<Integer> primes;  // finite support that was summed
};

DefectReport product_formula_defect(const FieldPtr& field, const FieldElement& a, unsigned digits);

}  // namespace heightlab
