#include "heightlab/heights.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "heightlab/error.hpp"

namespace heightlab {

ProjectivePoint::ProjectivePoint(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw Error(ErrorCode::BadParameter, "a projective point needs at least two coordinates");
  std::int64_t g = 0;
  for (auto c : coords_) g = std::gcd(g, c);
  if (g == 0) throw Error(ErrorCode::BadParameter, "all coordinates are zero");
  auto first = std::find_if(coords_.begin(), coords_.end(), [](std::int64_t c) { return c != 0; });
  if (*first < 0) g = -g;
  for (auto& c : coords_) c /= g;
}

std::int64_t ProjectivePoint::max_abs() const {
  std::int64_t m = 0;
  for (auto c : coords_) m = std::max(m, c < 0 ? -c : c);
  return m;
}

std::string ProjectivePoint::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ":";
    out += std::to_string(coords_[i]);
  }
  return out + "]";
}

bool canonical_less(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.coords().size() != b.coords().size()) return a.coords().size() < b.coords().size();
  std::int64_t ha = a.max_abs(), hb = b.max_abs();
  if (ha != hb) return ha < hb;
  for (std::size_t i = 0; i < a.coords().size(); ++i) {
    std::int64_t x = a[i], y = b[i];
    std::int64_t ax = std::llabs(x), ay = std::llabs(y);
    if (ax != ay) return ax < ay;
    if (x != y) return x > y;  // positive before negative
  }
  return false;
}

void sort_canonical(std::vector<ProjectivePoint>& points) {
  std::sort(points.begin(), points.end(), canonical_less);
}

Rational mult_height(const ProjectivePoint& x) { return Rational(static_cast<long>(x.max_abs())); }

Ball log_height(const ProjectivePoint& x, Precision bits) { return log_of(mult_height(x), bits); }

LinearForm::LinearForm(FieldPtr f, std::vector<FieldElement> c) : field(std::move(f)), coeffs(std::move(c)) {
  if (coeffs.size() < 2) throw Error(ErrorCode::BadParameter, "a linear form needs at least two coefficients");
  bool nonzero = false;
  for (const auto& a : coeffs) {
    if (!a.field()->same_as(*field)) throw Error(ErrorCode::FieldMismatch, "form coefficient from another field");
    nonzero = nonzero || !a.is_zero();
  }
  if (!nonzero) throw Error(ErrorCode::BadParameter, "linear form with all coefficients zero");
}

LinearForm LinearForm::coordinate(const FieldPtr& f, std::size_t n, std::size_t i) {
  std::vector<FieldElement> c(n + 1, FieldElement::zero(f));
  c.at(i) = FieldElement::one(f);
  return LinearForm(f, std::move(c));
}

LinearForm LinearForm::from_rationals(const FieldPtr& f, const std::vector<Rational>& c) {
  std::vector<FieldElement> out;
  for (const auto& q : c) out.push_back(FieldElement::from_rational(f, q));
  return LinearForm(f, std::move(out));
}

FieldElement LinearForm::evaluate(const ProjectivePoint& x) const {
  if (x.coords().size() != coeffs.size()) {
    throw Error(ErrorCode::BadParameter, "point " + x.to_string() + " has the wrong dimension for the form");
  }
  std::vector<Rational> acc(field->degree(), Rational(0));
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (x[j] == 0) continue;
    const auto& c = coeffs[j].coeffs();
    Rational xj(static_cast<long>(x[j]));
    for (std::size_t k = 0; k < acc.size(); ++k)
      if (c[k] != 0) acc[k] += c[k] * xj;
  }
  return FieldElement(field, std::move(acc));
}

bool LinearForm::is_rational() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const FieldElement& a) { return a.is_rational(); });
}

std::string LinearForm::to_string() const {
  std::string out;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + coeffs[j].to_string() + ")x" + std::to_string(j);
  }
  return out;
}

Ball weil_hyperplane(const HyperplanePresentation& pres, const ProjectivePoint& x, const Place& w) {
  FieldElement value = pres.form.evaluate(x);
  if (value.is_zero()) {
    throw Error(ErrorCode::OnSupport, "point " + x.to_string() + " lies on the hyperplane " + pres.form.to_string());
  }
  if (!w.archimedean()) {
    // |x_j|_{v,K} = p^(-ord_p x_j) for rational coordinates.
    long min_ord = -1;
    for (auto c : x.coords()) {
      if (c == 0) continue;
      long o = static_cast<long>(valuation(Integer(static_cast<long>(c)), w.prime));
      if (min_ord < 0 || o < min_ord) min_ord = o;
    }
    Rational exponent(local_norm_order(w, value), w.local_degree);
    exponent.canonicalize();
    exponent -= min_ord;
    if (exponent == 0) return Ball::exact(0L, w.bits);
    return scale(w.log_prime, exponent);
  }
  Rational top(static_cast<long>(x.max_abs()));
  if (value.is_rational()) return log_of(top / abs(value.constant()), w.bits);
  Ball modulus = w.real ? abs(embed_real(w, value)) : abs(embed(w, value));
  if (!modulus.certainly_positive()) {
    throw Error(ErrorCode::PrecisionExhausted, "|l(x)| not separated from 0 at " + x.to_string());
  }
  return log(Ball::exact(top, w.bits) / modulus);
}

Ball proximity(const HyperplanePresentation& pres, const ProjectivePoint& x, const std::vector<Place>& places) {
  Precision bits = places.empty() ? 64 : places.front().bits;
  Ball sum = Ball::exact(0L, bits);
  for (const auto& w : places) sum += weil_hyperplane(pres, x, w);
  return sum;
}

double nonnegativity_shift(const HyperplanePresentation& pres, const std::vector<ProjectivePoint>& sample,
                           const Place& w) {
  double shift = 0;
  for (const auto& x : sample) {
    if (pres.form.evaluate(x).is_zero()) continue;
    double lo = weil_hyperplane(pres, x, w).lower_double();
    if (lo < 0) shift = std::max(shift, -lo);
  }
  return shift;
}

PresentationDifference presentation_difference(const HyperplanePresentation& a, const HyperplanePresentation& b,
                                               const std::vector<ProjectivePoint>& sample, const Place& w) {
  PresentationDifference out;
  bool first = true;
  for (const auto& x : sample) {
    if (a.form.evaluate(x).is_zero() || b.form.evaluate(x).is_zero()) continue;
    double diff = (weil_hyperplane(a, x, w) - weil_hyperplane(b, x, w)).mid_double();
    if (first) {
      out.min_difference = out.max_difference = diff;
      first = false;
    }
    out.min_difference = std::min(out.min_difference, diff);
    out.max_difference = std::max(out.max_difference, diff);
    out.max_abs_difference = std::max(out.max_abs_difference, std::abs(diff));
    ++out.samples;
  }
  return out;
}

}  // namespace heightlab
