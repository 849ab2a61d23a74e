#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heightlab/heights.hpp"
#include "heightlab/twisted.hpp"

namespace heightlab {

enum class WeightKind { D, C, E };
const char* to_string(WeightKind k) noexcept;

struct WeightSystem {
  WeightKind kind = WeightKind::D;
  std::size_t n = 1;
  WeightMatrix entries;  // rows indexed by places, columns by i = 0..n

  std::size_t places() const { return entries.size(); }
  Rational total() const;
  void check_shape() const;
};

struct FwResult {
  Rational epsilon;
  WeightSystem c;
};

/// ε = -1 + ΣΣ d/(n+1) and c_{vi} = -d_{vi} + Σ_j d_{vj}/(n+1).
/// Throws ThresholdNotMet when ΣΣ d <= n+1.
FwResult fw_weights(const WeightSystem& d);

/// Grid points of {a >= 0 : Σ a = c} with step δ = c/m, m the least integer
/// with δ <= (1-c)/|I| (times the optional refinement factor).
struct SimplexCover {
  Rational c;
  std::size_t index_set_size = 1;
  Rational delta;
  Integer steps;  // m = c/δ
  Integer count;  // number of grid tuples
  std::vector<std::vector<Rational>> points;  // filled only when count <= materialize cap
  bool materialized = false;

  bool contains(const std::vector<Rational>& a) const;
};

SimplexCover simplex_cover(const Rational& c, std::size_t index_set_size, unsigned refinement = 1,
                           std::size_t materialize_cap = 100000);

/// a in the cover with b_j >= a_j Σ b_i for all j.
std::vector<Rational> simplex_select(const std::vector<Rational>& b, const SimplexCover& cover);

enum class ClassKind { TypeI, TypeII, NotASolution };
const char* to_string(ClassKind k) noexcept;

struct Classification {
  ClassKind kind = ClassKind::NotASolution;
  std::size_t anchor = 0;  // TypeI only
};

Classification classify_solution(const WeightMatrix& lambda, const Rational& h, std::size_t n,
                                 const Rational& epsilon, const Rational& slack);

/// c = 1 - ε/(4(n+1)) for Type I, 1 - ε/(4(n+1)^2) for Type II.
Rational scatter_c(ClassKind kind, std::size_t n, const Rational& epsilon);
/// Largest ε for which the e-weight sum check can pass: ΣΣ e > n+1 iff ε < this.
Rational sum_check_threshold(std::size_t n);

/// e-weights for a class. Type I: `tuple` has one entry a_v per place and the
/// anchor column receives a_v (n+1+ε). Type II: `tuple` lists b_{vi} row-major
/// and `d_v` distributes the place weights. Throws SumCheckFailed when
/// ΣΣ e <= n+1.
WeightSystem scatter_weights(ClassKind kind, std::size_t n, const Rational& epsilon,
                             const std::vector<Rational>& tuple, const std::vector<Rational>& d_v,
                             std::size_t anchor = 0);

struct ScatterAssignment {
  Classification cls;
  std::vector<Rational> tuple;
  WeightSystem e;
};

/// Classifies one λ-profile (entries must be nonnegative) and builds its
/// e-weights by selecting from the simplex cover.
std::optional<ScatterAssignment> scatter_profile(const WeightMatrix& lambda, const Rational& h, std::size_t n,
                                                 const Rational& epsilon, const Rational& slack,
                                                 const std::vector<Rational>& d_v);

/// λ_{vi} >= e_{vi} h - slack for all entries (Type I: the anchor column).
bool verify_scatter(const ScatterAssignment& a, const WeightMatrix& lambda, const Rational& h,
                    const Rational& slack);

struct ScatterClass {
  ClassKind kind = ClassKind::TypeI;
  std::size_t anchor = 0;
  std::vector<Rational> tuple;
  WeightSystem e;
  std::vector<ProjectivePoint> members;
};

/// Groups assigned points into classes keyed by (kind, anchor, tuple), in
/// that order; members stay in canonical order.
std::vector<ScatterClass> assemble_classes(const std::vector<ProjectivePoint>& points,
                                           const std::vector<ScatterAssignment>& assignments);

struct GenPosReduction {
  std::vector<std::vector<std::size_t>> kept;  // per place, ascending indices
  std::vector<std::vector<Rational>> lambda;   // kept λ values, same order
  Rational residual;                           // Σ of discarded λ = log C
};

/// Keeps the n+1 forms with the largest λ at each place (ties: smaller
/// index). Throws GeneralPositionViolated unless every (n+1)-subset of each
/// place's forms is independent.
GenPosReduction gen_pos_reduce(const std::vector<std::vector<LinearForm>>& forms_per_place,
                               const WeightMatrix& lambda, std::size_t n);

}  // namespace heightlab
