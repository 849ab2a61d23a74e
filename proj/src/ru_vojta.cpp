#include "heightlab/ru_vojta.hpp"

#include <algorithm>
#include <map>

#include "heightlab/error.hpp"

namespace heightlab {

Integer h0_twist(unsigned n, unsigned m, unsigned ell) {
  if (ell > m) return 0;
  return binomial(n + m - ell, n);
}

GammaBeta gamma_beta(unsigned n, unsigned m_max) {
  if (n < 1 || m_max < 1) throw Error(ErrorCode::BadParameter, "gamma_beta needs n >= 1 and m_max >= 1");
  GammaBeta out;
  out.gamma = Rational(n + 1);
  out.feasible_beta_sup = Rational(1, n + 1);
  for (unsigned m = 1; m <= m_max; ++m) {
    RatioRow row;
    row.m = m;
    row.numerator = h0_twist(n, m, 0) * m;
    row.denominator = 0;
    for (unsigned ell = 1; ell <= m; ++ell) row.denominator += h0_twist(n, m, ell);
    row.ratio = Rational(row.numerator, row.denominator);
    row.ratio.canonicalize();
    if (row.ratio != out.gamma) {
      throw Error(ErrorCode::BadParameter, "ratio at m=" + std::to_string(m) + " is " + to_string(row.ratio) +
                                               ", not " + to_string(out.gamma));
    }
    out.table.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<Integer>> delta_sigma(const std::vector<Rational>& betas, const Integer& b) {
  if (betas.empty()) throw Error(ErrorCode::EmptyDelta, "no divisors in σ");
  if (b <= 0) throw Error(ErrorCode::BadParameter, "b must be a positive integer");
  for (const auto& beta : betas)
    if (beta <= 0) throw Error(ErrorCode::BadParameter, "β_i must be positive");
  // a_i = k_i / β_i with k_i in N and Σ k_i = b; a_i is integral iff num(β_i) | k_i.
  const std::size_t q = betas.size();
  std::vector<Integer> step(q);
  for (std::size_t i = 0; i < q; ++i) step[i] = betas[i].get_num();
  std::vector<std::vector<Integer>> out;
  std::vector<Integer> k(q, 0);
  // Enumerate k in lexicographic order; a_i is increasing in k_i so the order carries over.
  auto recurse = [&](auto&& self, std::size_t i, const Integer& left) -> void {
    if (i + 1 == q) {
      if (left % step[i] != 0) return;
      k[i] = left;
      std::vector<Integer> a(q);
      for (std::size_t j = 0; j < q; ++j) a[j] = Integer(Rational(k[j]) / betas[j]);
      out.push_back(std::move(a));
      return;
    }
    for (Integer v = 0; v <= left; v += step[i]) {
      k[i] = v;
      self(self, i + 1, left - v);
    }
  };
  recurse(recurse, 0, b);
  if (out.empty()) throw Error(ErrorCode::EmptyDelta, "no tuple a with integral entries satisfies Σ β_i a_i = b");
  return out;
}

Integer FiltrationProfile::dim_at(const Rational& t) const {
  for (std::size_t k = 0; k < jump_values.size(); ++k)
    if (t <= Rational(jump_values[k])) return dims[k];
  return 0;
}

bool FiltrationProfile::double_counting_holds() const {
  Integer total = 0;
  for (std::size_t k = 0; k < jump_values.size(); ++k) {
    Integer next = k + 1 < dims.size() ? dims[k + 1] : Integer(0);
    total += jump_values[k] * (dims[k] - next);
  }
  return total == weight_sum;
}

FiltrationProfile filtration_dims(unsigned n, unsigned m, const std::vector<unsigned>& sigma,
                                  const std::vector<Integer>& a, bool allow_full) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "n must be at least 1");
  if (sigma.size() != a.size()) throw Error(ErrorCode::BadParameter, "σ and a differ in length");
  if (sigma.size() > n + (allow_full ? 1u : 0u)) {
    throw Error(ErrorCode::BadParameter, "σ has " + std::to_string(sigma.size()) +
                                             " coordinate hyperplanes, their intersection is empty");
  }
  std::vector<Integer> weight_of(n + 1, 0);
  std::vector<bool> used(n + 1, false);
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (sigma[k] > n || used[sigma[k]]) throw Error(ErrorCode::BadParameter, "σ entries must be distinct and <= n");
    if (a[k] < 0) throw Error(ErrorCode::BadParameter, "a must be nonnegative");
    used[sigma[k]] = true;
    weight_of[sigma[k]] = a[k];
  }
  // Exponent vectors of degree m in the n+1 variables, counted by weight.
  std::map<Integer, Integer> by_weight;
  FiltrationProfile out;
  out.weight_sum = 0;
  std::vector<unsigned> e(n + 1, 0);
  auto recurse = [&](auto&& self, unsigned i, unsigned left, const Integer& w) -> void {
    if (i == n) {
      Integer total = w + weight_of[n] * left;
      by_weight[total] += 1;
      out.weight_sum += total;
      return;
    }
    for (unsigned v = 0; v <= left; ++v) self(self, i + 1, left - v, w + weight_of[i] * v);
  };
  recurse(recurse, 0, m, Integer(0));
  out.h0 = h0_twist(n, m, 0);
  Integer above = 0;
  std::vector<std::pair<Integer, Integer>> rev(by_weight.rbegin(), by_weight.rend());
  for (const auto& [w, count] : rev) {
    above += count;
    out.jump_values.push_back(w);
    out.dims.push_back(above);
  }
  std::reverse(out.jump_values.begin(), out.jump_values.end());
  std::reverse(out.dims.begin(), out.dims.end());
  if (out.dims.front() != out.h0) throw Error(ErrorCode::BadParameter, "internal: monomial count differs from h0");
  return out;
}

FeasibilityCheck ru_vojta_feasible(unsigned n, unsigned m, const std::vector<Rational>& betas, const Integer& b,
                                   const Rational& epsilon1, const Rational& epsilon) {
  if (n < 1 || m < 1) throw Error(ErrorCode::BadParameter, "need n >= 1 and m >= 1");
  if (b <= 0) throw Error(ErrorCode::BadParameter, "b must be a positive integer");
  if (epsilon1 <= 0 || epsilon <= 0) throw Error(ErrorCode::BadParameter, "ε and ε_1 must be positive");
  if (betas.empty()) throw Error(ErrorCode::BadParameter, "no β given");
  FeasibilityCheck out;
  const Integer h0 = h0_twist(n, m, 0);
  Integer denom = 0;
  for (unsigned ell = 1; ell <= m; ++ell) denom += h0_twist(n, m, ell);
  Rational best = 0;
  out.betas_below_sup = true;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    Rational term = (betas[i] * m * h0 + epsilon1 * m) / denom;
    if (i == 0 || term > best) best = term;
    if (betas[i] >= Rational(1, n + 1)) out.betas_below_sup = false;
  }
  out.lhs = (1 + Rational(n) / Rational(b)) * best;
  out.rhs = 1 + epsilon;
  out.holds = out.lhs < out.rhs;
  return out;
}

}  // namespace heightlab
