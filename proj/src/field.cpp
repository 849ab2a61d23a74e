#include "heightlab/field.hpp"

#include <sstream>

#include "heightlab/error.hpp"
#include "heightlab/linalg.hpp"

namespace heightlab {

namespace {

void require_same(const FieldElement& a, const FieldElement& b) {
  if (!a.field() || !b.field() || (a.field() != b.field() && !a.field()->same_as(*b.field()))) {
    throw Error(ErrorCode::FieldMismatch, "elements belong to different fields");
  }
}

// Reduce a polynomial in θ modulo the monic minimal polynomial.
std::vector<Rational> reduce_mod(poly::QPoly p, const NumberField& f) {
  const auto& m = f.min_poly();
  const int d = f.degree();
  for (int k = poly::degree(p); k >= d; --k) {
    Rational c = p[k];
    if (c == 0) continue;
    for (int i = 0; i <= d; ++i) p[k - d + i] -= c * m[i];
  }
  p.resize(d, Rational(0));
  return p;
}

// Column j holds the coordinates of a * θ^j.
RationalMatrix multiplication_matrix(const FieldElement& a) {
  const NumberField& f = *a.field();
  const int d = f.degree();
  RationalMatrix m(d, RationalVector(d));
  std::vector<Rational> v = a.coeffs();
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) m[i][j] = v[i];
    poly::QPoly shifted(d + 1, Rational(0));
    for (int i = 0; i < d; ++i) shifted[i + 1] = v[i];
    v = reduce_mod(shifted, f);
  }
  return m;
}

}  // namespace

NumberField::NumberField(poly::ZPoly f, Integer disc)
    : min_poly_(std::move(f)), degree_(poly::degree(min_poly_)), poly_disc_(std::move(disc)) {}

FieldPtr NumberField::create(const poly::ZPoly& min_poly) {
  poly::ZPoly f = min_poly;
  poly::trim(f);
  if (poly::degree(f) < 1) throw Error(ErrorCode::BadParameter, "minimal polynomial must have degree >= 1");
  if (f.back() != 1) throw Error(ErrorCode::NonMonic, "minimal polynomial must be monic");
  if (!poly::is_irreducible(f)) throw Error(ErrorCode::Reducible, "minimal polynomial factors over Q");
  Integer disc = poly::degree(f) == 1 ? Integer(1) : poly::discriminant(f);
  return FieldPtr(new NumberField(std::move(f), std::move(disc)));
}

FieldPtr NumberField::from_ints(const std::vector<long>& min_poly) { return create(poly::from_ints(min_poly)); }

FieldPtr NumberField::rationals() {
  static const FieldPtr q = create(poly::ZPoly{Integer(0), Integer(1)});
  return q;
}

std::string NumberField::describe() const {
  if (is_rational()) return "Q";
  std::ostringstream out;
  out << "Q[x]/(";
  bool first = true;
  for (int i = degree_; i >= 0; --i) {
    const Integer& c = min_poly_[i];
    if (c == 0) continue;
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << "-";
    Integer a = abs(c);
    if (i == 0 || a != 1) out << a.get_str();
    if (i >= 1) out << "x";
    if (i >= 2) out << "^" << i;
    first = false;
  }
  out << ")";
  return out.str();
}

FieldElement::FieldElement(FieldPtr field, std::vector<Rational> coeffs) : field_(std::move(field)) {
  if (!field_) throw Error(ErrorCode::BadParameter, "element without a field");
  const int d = field_->degree();
  if (static_cast<int>(coeffs.size()) > d) {
    coeffs_ = reduce_mod(poly::QPoly(coeffs.begin(), coeffs.end()), *field_);
  } else {
    coeffs.resize(d, Rational(0));
    coeffs_ = std::move(coeffs);
  }
}

FieldElement FieldElement::zero(FieldPtr field) { return FieldElement(field, {}); }

FieldElement FieldElement::one(FieldPtr field) { return from_rational(std::move(field), 1); }

FieldElement FieldElement::from_rational(FieldPtr field, const Rational& q) {
  return FieldElement(std::move(field), std::vector<Rational>{q});
}

FieldElement FieldElement::theta(FieldPtr field) {
  return FieldElement(std::move(field), std::vector<Rational>{Rational(0), Rational(1)});
}

bool FieldElement::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool FieldElement::is_rational() const {
  for (size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

FieldElement FieldElement::operator-() const {
  FieldElement out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  FieldElement out = a;
  for (size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] += b.coeffs_[i];
  return out;
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  FieldElement out = a;
  for (size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] -= b.coeffs_[i];
  return out;
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  const size_t d = a.coeffs_.size();
  poly::QPoly prod(2 * d - 1, Rational(0));
  for (size_t i = 0; i < d; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (size_t j = 0; j < d; ++j) prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  FieldElement out;
  out.field_ = a.field_;
  out.coeffs_ = reduce_mod(std::move(prod), *a.field_);
  return out;
}

FieldElement FieldElement::scaled(const Rational& q) const {
  FieldElement out = *this;
  for (auto& c : out.coeffs_) c *= q;
  return out;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  // Extended Euclid: s*a + t*f = 1 over Q.
  poly::QPoly r0 = poly::to_q(field_->min_poly()), r1 = as_poly();
  poly::QPoly s0, s1{Rational(1)};
  while (!r1.empty()) {
    poly::QPoly q, r;
    poly::divmod(r0, r1, q, r);
    poly::QPoly s2 = poly::sub(s0, poly::mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 is a nonzero constant since the minimal polynomial is irreducible.
  poly::QPoly inv = poly::scale(s0, 1 / Rational(r0[0]));
  return FieldElement(field_, std::vector<Rational>(inv.begin(), inv.end()));
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero in " + a.field()->describe());
  return a * b.inverse();
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return a.coeffs_ == b.coeffs_;
}

poly::QPoly FieldElement::as_poly() const {
  poly::QPoly p(coeffs_.begin(), coeffs_.end());
  poly::trim(p);
  return p;
}

std::string FieldElement::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) out << " + ";
    out << heightlab::to_string(coeffs_[i]);
    if (i >= 1) out << "*t";
    if (i >= 2) out << "^" << i;
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

NormData charpoly_norm(const FieldElement& a) {
  RationalMatrix m = multiplication_matrix(a);
  const size_t d = m.size();
  // Faddeev-LeVerrier.
  poly::QPoly c(d + 1, Rational(0));
  c[d] = 1;
  RationalMatrix mk(d, RationalVector(d, Rational(0)));
  for (size_t k = 1; k <= d; ++k) {
    RationalMatrix next(d, RationalVector(d, Rational(0)));
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = 0; j < d; ++j) {
        Rational acc = 0;
        for (size_t l = 0; l < d; ++l) acc += m[i][l] * mk[l][j];
        next[i][j] = acc;
      }
      next[i][i] += c[d - k + 1];
    }
    mk = std::move(next);
    Rational tr = 0;
    for (size_t i = 0; i < d; ++i)
      for (size_t l = 0; l < d; ++l) tr += m[i][l] * mk[l][i];
    c[d - k] = -tr / static_cast<long>(k);
  }
  NormData out;
  out.norm = (d % 2 == 0) ? c[0] : Rational(-c[0]);
  out.trace = -c[d - 1];
  out.charpoly = std::move(c);
  return out;
}

FieldElement field_determinant(std::vector<std::vector<FieldElement>> m) {
  const size_t n = m.size();
  if (n == 0) throw Error(ErrorCode::BadParameter, "determinant of an empty matrix");
  FieldPtr f = m[0][0].field();
  FieldElement det = FieldElement::one(f);
  for (size_t c = 0; c < n; ++c) {
    size_t pivot = c;
    while (pivot < n && m[pivot][c].is_zero()) ++pivot;
    if (pivot == n) return FieldElement::zero(f);
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      det = -det;
    }
    det = det * m[c][c];
    FieldElement inv = m[c][c].inverse();
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c].is_zero()) continue;
      FieldElement factor = m[i][c] * inv;
      for (size_t j = c; j < n; ++j) m[i][j] = m[i][j] - factor * m[c][j];
    }
  }
  return det;
}

}  // namespace heightlab
