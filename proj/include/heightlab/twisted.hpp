#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heightlab/heights.hpp"

namespace heightlab {

/// Forms ℓ_{v0}, ..., ℓ_{vn} attached to one place w | v of S.
struct PlaceForms {
  Place place;
  std::vector<LinearForm> forms;
};

struct FormSystem {
  FieldPtr field;
  std::size_t n = 1;
  std::vector<PlaceForms> places;

  Precision bits() const;
  /// Every place carries n+1 forms, linearly independent over F (exact
  /// determinant). Throws ConfigInvalid.
  void validate() const;
  /// True if x lies on the support of some form; `which` receives "v:i".
  bool on_support(const ProjectivePoint& x, std::string* which = nullptr) const;
};

using WeightMatrix = std::vector<std::vector<Rational>>;

struct TwistedHeightSpec {
  FormSystem system;
  WeightMatrix weights;  // c_{vi}, one row per place, rows summing to 0
  Rational epsilon;
  Rational Q = 1;

  /// Checks the form system, weight shape and zero row sums; throws
  /// ConfigInvalid naming the offending row.
  void validate() const;
};

/// H_Q(x) = prod_{v in S} max_i |ℓ_{vi}(x)|_{v,K} Q^{-c_{vi}} * prod_{v not in S} |x|_v,
/// evaluated multiplicatively (no logarithms).
Ball twisted_height(const TwistedHeightSpec& spec, const ProjectivePoint& x);

struct TwistedReport {
  std::vector<std::vector<Ball>> lambda;  // λ_{ℓ_{vi}}(x, v)
  std::vector<Ball> place_min;            // min_i (λ + c_{vi} log Q)
  Ball lhs;
  Ball h;
  Ball rhs;  // h + δ log Q + slack
  Verdict verdict = Verdict::Indeterminate;
  Ball minus_log_twisted;   // -log H_Q from the multiplicative route
  double identity_residual = 0;  // upper bound of |-log H_Q - (lhs - h)|
};

/// Logarithmic form of the twisted inequality with δ = spec.epsilon.
/// Throws OnSupport when some ℓ_{vi}(x) = 0.
TwistedReport log_twisted_report(const TwistedHeightSpec& spec, const ProjectivePoint& x,
                                 const Rational& slack = 0);

struct SweepEntry {
  Rational Q;
  std::vector<ProjectivePoint> solutions;
  std::vector<ProjectivePoint> indeterminate;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  /// Per point (input order): how often the verdict flips along the grid.
  std::vector<std::size_t> verdict_changes;
  /// Smallest grid Q from which the solution set no longer changes on the
  /// grid. Empirical only.
  std::optional<Rational> stabilization_Q;
};

/// For each Q of the ascending grid, the points with H_Q(x) <= Q^{-ε}.
SweepResult q_sweep(const TwistedHeightSpec& spec_template, const std::vector<Rational>& Q_grid,
                    const std::vector<ProjectivePoint>& points);

}  // namespace heightlab
