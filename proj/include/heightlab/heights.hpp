#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heightlab/field.hpp"
#include "heightlab/places.hpp"
#include "heightlab/real.hpp"

namespace heightlab {

/// Point of P^n(Q) with primitive integer coordinates whose first nonzero
/// entry is positive.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  /// Canonicalizes arbitrary nonzero integer input (divides by the gcd, fixes sign).
  explicit ProjectivePoint(std::vector<std::int64_t> coords);

  const std::vector<std::int64_t>& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size() - 1; }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  /// max_i |x_i|, which is the multiplicative height for primitive coordinates.
  std::int64_t max_abs() const;

  std::string to_string() const;
  friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) { return a.coords_ == b.coords_; }

 private:
  std::vector<std::int64_t> coords_;
};

/// Canonical order: by height, then coordinatewise by (|c|, c < 0).
bool canonical_less(const ProjectivePoint& a, const ProjectivePoint& b);
void sort_canonical(std::vector<ProjectivePoint>& points);

Rational mult_height(const ProjectivePoint& x);
Ball log_height(const ProjectivePoint& x, Precision bits);

struct LinearForm {
  FieldPtr field;
  std::vector<FieldElement> coeffs;

  LinearForm() = default;
  LinearForm(FieldPtr f, std::vector<FieldElement> c);
  /// The coordinate form x_i on P^n.
  static LinearForm coordinate(const FieldPtr& f, std::size_t n, std::size_t i);
  static LinearForm from_rationals(const FieldPtr& f, const std::vector<Rational>& c);

  std::size_t dim() const { return coeffs.size() - 1; }
  FieldElement evaluate(const ProjectivePoint& x) const;
  bool is_rational() const;
  std::string to_string() const;
};

/// The presentation (ℓ; O(1), (x_0..x_n); O, (1)) of the hyperplane ℓ = 0.
struct HyperplanePresentation {
  LinearForm form;

  explicit HyperplanePresentation(LinearForm f) : form(std::move(f)) {}
};

/// λ(x, v) = max_j log |x_j / ℓ(x)|_{v,K} at the chosen place w | v.
/// Throws OnSupport when ℓ(x) = 0.
Ball weil_hyperplane(const HyperplanePresentation& pres, const ProjectivePoint& x, const Place& w);

/// m_S(x, D) = sum over the given places of the Weil function.
Ball proximity(const HyperplanePresentation& pres, const ProjectivePoint& x, const std::vector<Place>& places);

/// Smallest constant making the Weil function nonnegative on the sample
/// (0 when it already is); an upper bound, rounded outward.
double nonnegativity_shift(const HyperplanePresentation& pres, const std::vector<ProjectivePoint>& sample,
                           const Place& w);

struct PresentationDifference {
  std::size_t samples = 0;
  double min_difference = 0;
  double max_difference = 0;
  double max_abs_difference = 0;
};

/// Empirical spread of λ_a - λ_b over sample points off both supports.
PresentationDifference presentation_difference(const HyperplanePresentation& a, const HyperplanePresentation& b,
                                               const std::vector<ProjectivePoint>& sample, const Place& w);

}  // namespace heightlab
