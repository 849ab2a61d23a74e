#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "heightlab/linalg.hpp"
#include "heightlab/twisted.hpp"

namespace heightlab {

/// Visits every point of P^n(Q) of height <= bound exactly once (primitive,
/// canonical sign). Work is sharded by the first coordinate over `jobs`
/// threads; the visitor must be thread-safe when jobs > 1.
void for_each_point(std::size_t n, std::int64_t bound, unsigned jobs,
                    const std::function<void(const std::int64_t* coords)>& visit);

/// Number of points of height <= bound, by the same enumeration.
std::uint64_t count_points(std::size_t n, std::int64_t bound);

/// All points of height <= bound in canonical order. Throws BudgetExceeded
/// when more than `cap` points would be produced, BadParameter when bound < 1.
std::vector<ProjectivePoint> enumerate_points(std::size_t n, std::int64_t bound, std::size_t cap = 5'000'000);

enum class FilterKind { Schmidt, FW, Parametric };
const char* to_string(FilterKind k) noexcept;

/// Inequality system selecting solutions.
///   Schmidt:    Σ_v Σ_i λ_{vi}(x) >= (n+1+ε) h(x) - slack
///   FW:         λ_{vi}(x) - d_{vi} h(x) + slack >= 0 for every (v, i)
///   Parametric: Σ_v min_i (λ_{vi} + c_{vi} log Q) >= h(x) + ε log Q + slack
struct FilterParams {
  FilterKind kind = FilterKind::Schmidt;
  TwistedHeightSpec spec;  // forms always; weights = d (FW) or c (Parametric); ε; Q
  Rational slack = 0;

  const FormSystem& system() const { return spec.system; }
  void validate() const;
  /// Stable text serialization, the input of the parameter digest.
  std::string canonical_text() const;
  std::string digest() const;
};

enum class Outcome { Solution, NotSolution, Indeterminate, Support };
const char* to_string(Outcome o) noexcept;

/// Precomputed evaluator. Archimedean places are first evaluated in double
/// precision with a rigorous error bound; undecided points are re-evaluated
/// in ball arithmetic at the system's working precision.
class SolutionFilter {
 public:
  explicit SolutionFilter(FilterParams params);
  ~SolutionFilter();
  SolutionFilter(const SolutionFilter&) = delete;
  SolutionFilter& operator=(const SolutionFilter&) = delete;

  Outcome classify(const std::int64_t* coords) const;
  Outcome classify(const ProjectivePoint& x) const { return classify(x.coords().data()); }
  /// Ball-arithmetic route only.
  Outcome classify_precise(const ProjectivePoint& x) const;

  const FilterParams& params() const { return params_; }
  std::uint64_t escalations() const;

 private:
  struct Impl;
  FilterParams params_;
  std::unique_ptr<Impl> impl_;
};

struct SolutionSet {
  std::string spec_digest;
  std::vector<ProjectivePoint> points;
  std::vector<ProjectivePoint> indeterminate;
  std::vector<ProjectivePoint> support;
  Rational slack_used = 0;
  std::uint64_t examined = 0;
  std::uint64_t escalations = 0;
};

SolutionSet filter_solutions(const FilterParams& params, const std::vector<ProjectivePoint>& points);
/// Streams all points of height <= bound through the filter.
SolutionSet solve_bounded(const FilterParams& params, std::int64_t bound, unsigned jobs = 1);

enum class CoverMode { Exact, Greedy };
const char* to_string(CoverMode m) noexcept;

struct Subspace {
  RationalMatrix basis;      // RREF rows spanning the linear subspace of Q^{n+1}
  RationalMatrix equations;  // primitive integer rows cutting it out
  std::size_t projective_dim() const { return basis.size() - 1; }
  bool contains(const ProjectivePoint& x) const;
};

struct SubspaceCover {
  std::vector<Subspace> subspaces;
  std::vector<std::size_t> assignment;  // point index -> subspace index
  CoverMode mode = CoverMode::Greedy;
  bool fell_back = false;  // exact mode requested but the point count exceeded the cap
};

inline constexpr std::size_t kExactCoverCap = 25;

/// Cover of the points by proper linear subspaces spanned by subsets of the
/// points. max_subspaces = 0 means unlimited; otherwise Infeasible is thrown
/// when the cover found needs more.
SubspaceCover subspace_cover(const std::vector<ProjectivePoint>& points, CoverMode mode,
                             std::size_t max_subspaces = 0);

struct DensityReport {
  std::size_t point_count = 0;
  std::size_t cover_size = 0;
  std::size_t max_points_per_subspace = 0;
  double economy_ratio = 0;
  std::string verdict_text;
};

DensityReport density_report(const std::vector<ProjectivePoint>& points, const SubspaceCover& cover);

}  // namespace heightlab
