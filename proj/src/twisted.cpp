#include "heightlab/twisted.hpp"

#include <set>

#include "heightlab/error.hpp"

namespace heightlab {

namespace {

std::string place_label(const Place& w) { return "w" + std::to_string(w.index) + "|" + w.v_label(); }

Ball abs_extension(const Place& w, const FieldElement& a) {
  if (a.is_rational()) {
    const Rational& q = a.constant();
    if (w.archimedean()) return Ball::exact(Rational(abs(q)), w.bits);
    return rational_power(Rational(w.prime), Rational(-valuation(q, w.prime)), w.bits);
  }
  if (w.archimedean()) return w.real ? abs(embed_real(w, a)) : abs(embed(w, a));
  Rational exponent(-local_norm_order(w, a), w.local_degree);
  exponent.canonicalize();
  return rational_power(Rational(w.prime), exponent, w.bits);
}

}  // namespace

Precision FormSystem::bits() const { return places.empty() ? bits_for_digits(40) : places.front().place.bits; }

void FormSystem::validate() const {
  if (!field) throw Error(ErrorCode::ConfigInvalid, "form system without a field");
  if (n < 1) throw Error(ErrorCode::ConfigInvalid, "dimension n must be at least 1");
  if (places.empty()) throw Error(ErrorCode::ConfigInvalid, "the place set S is empty");
  std::set<std::string> seen;
  for (const auto& pf : places) {
    const std::string label = place_label(pf.place);
    if (!seen.insert(pf.place.v_label()).second) {
      throw Error(ErrorCode::ConfigInvalid, "place v=" + pf.place.v_label() + " appears twice in S");
    }
    if (!pf.place.field || !pf.place.field->same_as(*field)) {
      throw Error(ErrorCode::ConfigInvalid, "place " + label + " belongs to another field");
    }
    if (pf.forms.size() != n + 1) {
      throw Error(ErrorCode::ConfigInvalid, "place " + label + " has " + std::to_string(pf.forms.size()) +
                                                " forms, expected n+1 = " + std::to_string(n + 1));
    }
    std::vector<std::vector<FieldElement>> m;
    for (const auto& form : pf.forms) {
      if (form.coeffs.size() != n + 1) {
        throw Error(ErrorCode::ConfigInvalid, "form at place " + label + " has the wrong number of coefficients");
      }
      if (!form.field->same_as(*field)) {
        throw Error(ErrorCode::ConfigInvalid, "form at place " + label + " is defined over another field");
      }
      m.push_back(form.coeffs);
    }
    if (field_determinant(m).is_zero()) {
      throw Error(ErrorCode::ConfigInvalid, "forms at place " + label + " are linearly dependent");
    }
  }
}

bool FormSystem::on_support(const ProjectivePoint& x, std::string* which) const {
  for (const auto& pf : places) {
    for (std::size_t i = 0; i < pf.forms.size(); ++i) {
      if (pf.forms[i].evaluate(x).is_zero()) {
        if (which) *which = pf.place.v_label() + ":" + std::to_string(i);
        return true;
      }
    }
  }
  return false;
}

void TwistedHeightSpec::validate() const {
  system.validate();
  if (weights.size() != system.places.size()) {
    throw Error(ErrorCode::ConfigInvalid, "weight matrix has " + std::to_string(weights.size()) +
                                              " rows but S has " + std::to_string(system.places.size()) +
                                              " places");
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k].size() != system.n + 1) {
      throw Error(ErrorCode::ConfigInvalid, "weights row " + std::to_string(k) + " (v=" +
                                                system.places[k].place.v_label() + ") has the wrong length");
    }
    Rational sum = 0;
    for (const auto& c : weights[k]) sum += c;
    if (sum != 0) {
      throw Error(ErrorCode::ConfigInvalid, "weights row " + std::to_string(k) + " (v=" +
                                                system.places[k].place.v_label() + ") sums to " + to_string(sum) +
                                                ", expected 0");
    }
  }
  if (Q < 1) throw Error(ErrorCode::ConfigInvalid, "Q must be at least 1");
}

Ball twisted_height(const TwistedHeightSpec& spec, const ProjectivePoint& x) {
  const Precision bits = spec.system.bits();
  Ball product = Ball::exact(1L, bits);
  bool infinity_in_S = false;
  for (std::size_t k = 0; k < spec.system.places.size(); ++k) {
    const auto& pf = spec.system.places[k];
    infinity_in_S = infinity_in_S || pf.place.archimedean();
    bool any = false;
    Ball best(bits);
    for (std::size_t i = 0; i < pf.forms.size(); ++i) {
      FieldElement value = pf.forms[i].evaluate(x);
      if (value.is_zero()) continue;
      Ball term = abs_extension(pf.place, value) * rational_power(spec.Q, -spec.weights[k][i], bits);
      best = any ? max(best, term) : term;
      any = true;
    }
    if (!any) {
      throw Error(ErrorCode::AllFormsVanish,
                  "every form at " + place_label(pf.place) + " vanishes at " + x.to_string());
    }
    product = product * best;
  }
  // Outside S: finite places contribute 1 by primitivity.
  if (!infinity_in_S) product = product * Ball::exact(Rational(static_cast<long>(x.max_abs())), bits);
  return product;
}

TwistedReport log_twisted_report(const TwistedHeightSpec& spec, const ProjectivePoint& x, const Rational& slack) {
  const Precision bits = spec.system.bits();
  TwistedReport out;
  Ball log_q = log_of(spec.Q, bits);
  out.lhs = Ball::exact(0L, bits);
  for (std::size_t k = 0; k < spec.system.places.size(); ++k) {
    const auto& pf = spec.system.places[k];
    std::vector<Ball> row;
    Ball best(bits);
    for (std::size_t i = 0; i < pf.forms.size(); ++i) {
      Ball lambda = weil_hyperplane(HyperplanePresentation(pf.forms[i]), x, pf.place);
      Ball term = lambda + scale(log_q, spec.weights[k][i]);
      best = i == 0 ? term : min(best, term);
      row.push_back(std::move(lambda));
    }
    out.lambda.push_back(std::move(row));
    out.lhs += best;
    out.place_min.push_back(std::move(best));
  }
  out.h = log_height(x, bits);
  out.rhs = out.h + scale(log_q, spec.epsilon) + Ball::exact(slack, bits);
  out.verdict = compare_ge(out.lhs, out.rhs);
  out.minus_log_twisted = -log(twisted_height(spec, x));
  out.identity_residual = abs(out.minus_log_twisted - (out.lhs - out.h)).upper_double();
  return out;
}

SweepResult q_sweep(const TwistedHeightSpec& spec_template, const std::vector<Rational>& Q_grid,
                    const std::vector<ProjectivePoint>& points) {
  if (Q_grid.empty()) throw Error(ErrorCode::BadParameter, "empty Q grid");
  for (std::size_t i = 0; i < Q_grid.size(); ++i) {
    if (Q_grid[i] < 1) throw Error(ErrorCode::BadParameter, "Q values must be at least 1");
    if (i > 0 && Q_grid[i] <= Q_grid[i - 1]) throw Error(ErrorCode::BadParameter, "Q grid must be ascending");
  }
  const Precision bits = spec_template.system.bits();
  SweepResult out;
  std::vector<std::vector<Verdict>> states(points.size());
  for (const auto& Q : Q_grid) {
    TwistedHeightSpec spec = spec_template;
    spec.Q = Q;
    Ball threshold = rational_power(Q, -spec.epsilon, bits);
    SweepEntry entry;
    entry.Q = Q;
    for (std::size_t j = 0; j < points.size(); ++j) {
      Verdict v = compare_ge(threshold, twisted_height(spec, points[j]));
      states[j].push_back(v);
      if (v == Verdict::Holds) entry.solutions.push_back(points[j]);
      if (v == Verdict::Indeterminate) entry.indeterminate.push_back(points[j]);
    }
    sort_canonical(entry.solutions);
    sort_canonical(entry.indeterminate);
    out.entries.push_back(std::move(entry));
  }
  for (const auto& s : states) {
    std::size_t flips = 0;
    for (std::size_t i = 1; i < s.size(); ++i) flips += s[i] != s[i - 1];
    out.verdict_changes.push_back(flips);
  }
  std::size_t stable = 0;
  for (std::size_t i = 1; i < out.entries.size(); ++i) {
    if (!(out.entries[i].solutions == out.entries[i - 1].solutions)) stable = i;
  }
  out.stabilization_Q = Q_grid[stable];
  return out;
}

}  // namespace heightlab
