#pragma once

#include <cstdint>
#include <vector>

#include "heightlab/numeric.hpp"

namespace heightlab {

/// h^0(P^n, O(m - ell)) = C(n + m - ell, n), zero when ell > m.
Integer h0_twist(unsigned n, unsigned m, unsigned ell);

struct RatioRow {
  unsigned m = 0;
  Integer numerator;    // m * h^0(O(m))
  Integer denominator;  // sum over ell >= 1 of h^0(O(m - ell)) = C(n+m, n+1)
  Rational ratio;
};

struct GammaBeta {
  std::vector<RatioRow> table;
  Rational gamma;              // n + 1
  Rational feasible_beta_sup;  // 1 / (n + 1)
};

/// Ratio table for m = 1..m_max. The denominator is summed term by term and
/// every ratio is checked to equal n+1.
GammaBeta gamma_beta(unsigned n, unsigned m_max);

/// All a with a_i in β_i^{-1} N (integral entries) and Σ β_i a_i = b, in
/// lexicographic order. Throws EmptyDelta when there is none.
std::vector<std::vector<Integer>> delta_sigma(const std::vector<Rational>& betas, const Integer& b);

struct FiltrationProfile {
  std::vector<Integer> jump_values;  // distinct monomial weights, ascending
  std::vector<Integer> dims;         // #{monomials of weight >= t} at each jump
  Integer h0;                        // C(n+m, n), the dimension at t = 0
  Integer weight_sum;                // Σ over monomials of their weight

  /// dim F(σ; a)_t for arbitrary t.
  Integer dim_at(const Rational& t) const;
  /// Σ_k t_k (dims_k - dims_{k+1}) == weight_sum.
  bool double_counting_holds() const;
};

/// Dimensions of F(σ; a)_t for the coordinate hyperplanes x_i = 0, i in σ
/// (0-based). A monomial x^e of degree m has weight Σ_{i in σ} a_i e_i.
/// σ must have distinct entries <= n; |σ| <= n unless allow_full is set.
FiltrationProfile filtration_dims(unsigned n, unsigned m, const std::vector<unsigned>& sigma,
                                  const std::vector<Integer>& a, bool allow_full = false);

struct FeasibilityCheck {
  Rational lhs;  // (1 + n/b) * max_i (β_i (n+1) + m ε_1 / C(n+m, n+1))
  Rational rhs;  // 1 + ε
  bool betas_below_sup = false;
  bool holds = false;
};

/// Exact check of the constant condition for P^n, L = O(1), coordinate D_i.
FeasibilityCheck ru_vojta_feasible(unsigned n, unsigned m, const std::vector<Rational>& betas, const Integer& b,
                                   const Rational& epsilon1, const Rational& epsilon);

}  // namespace heightlab
