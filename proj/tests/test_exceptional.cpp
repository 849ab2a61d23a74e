#include <doctest.h>

#include <cmath>
#include <random>

#include "heightlab/error.hpp"
#include "heightlab/exceptional.hpp"
#include "oracles.hpp"

using namespace heightlab;

namespace doctest {
template <>
struct StringMaker<std::vector<ProjectivePoint>> {
  static String convert(const std::vector<ProjectivePoint>& pts) {
    std::string out = "{";
    for (const auto& x : pts) out += x.to_string() + " ";
    return (out + "}").c_str();
  }
};
}  // namespace doctest

namespace {

ProjectivePoint pt(std::vector<std::int64_t> c) { return ProjectivePoint(std::move(c)); }

FilterParams roth(const Rational& eps) {
  auto f = NumberField::from_ints({-2, 0, 1});
  FilterParams p;
  p.kind = FilterKind::Schmidt;
  p.spec.system.field = f;
  p.spec.system.n = 1;
  p.spec.system.places.push_back({places_above(f, 0, 30)[1],
                                  {LinearForm(f, {-FieldElement::theta(f), FieldElement::one(f)}),
                                   LinearForm::coordinate(f, 1, 0)}});
  p.spec.epsilon = eps;
  return p;
}

// Roth inequality recomputed from raw real numbers: at [q:p] the two Weil
// values are log(max/|p - sqrt2 q|) and log(max/|q|).
bool roth_oracle(std::int64_t q, std::int64_t p, long double eps) {
  const long double top = std::max(std::fabs(static_cast<long double>(q)), std::fabs(static_cast<long double>(p)));
  const long double dist = std::fabs(static_cast<long double>(p * p - 2 * q * q)) /
                           std::fabs(static_cast<long double>(p) + std::sqrt(2.0L) * static_cast<long double>(q));
  const long double lhs = std::log(top / dist) + std::log(top / std::fabs(static_cast<long double>(q)));
  return lhs >= (2 + eps) * std::log(top);
}

}  // namespace

TEST_CASE("enumeration counts") {
  CHECK(count_points(1, 1) == 4);
  CHECK(count_points(1, 2) == 8);
  auto pts = enumerate_points(1, 1);
  CHECK(pts == std::vector<ProjectivePoint>{pt({0, 1}), pt({1, 0}), pt({1, 1}), pt({1, -1})});
  for (std::size_t n : {1u, 2u})
    for (long b : {1L, 2L, 3L, 7L, 13L, 20L}) CHECK(count_points(n, b) == oracle::naive_count(n, b));
  CHECK_THROWS_AS(enumerate_points(1, 0), Error);
  try {
    enumerate_points(2, 30, 100);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
}

TEST_CASE("parallel enumeration visits the same points") {
  std::mutex m;
  std::vector<ProjectivePoint> seen;
  for_each_point(2, 6, 3, [&](const std::int64_t* c) {
    std::lock_guard<std::mutex> lock(m);
    seen.push_back(pt({c[0], c[1], c[2]}));
  });
  sort_canonical(seen);
  CHECK(seen == enumerate_points(2, 6));
}

TEST_CASE("Roth filter on single points") {
  SolutionFilter f(roth(Rational(1, 10)));
  CHECK(f.classify(pt({5, 7})) == Outcome::Solution);
  CHECK(f.classify(pt({5, 3})) == Outcome::NotSolution);
  CHECK(f.classify(pt({0, 1})) == Outcome::Support);
  CHECK(f.classify_precise(pt({5, 7})) == Outcome::Solution);
  SolutionFilter huge(roth(100));
  auto s = solve_bounded(huge.params(), 100);
  CHECK(s.points.size() <= 1);
}

TEST_CASE("filter agrees with a brute-force oracle up to height 200") {
  for (Rational eps : {Rational(1, 10), Rational(3, 10), Rational(1)}) {
    auto params = roth(eps);
    auto set = solve_bounded(params, 200, 2);
    std::vector<ProjectivePoint> expect;
    for (const auto& x : enumerate_points(1, 200)) {
      if (x[0] == 0) continue;  // support of x_0
      if (roth_oracle(x[0], x[1], eps.get_d())) expect.push_back(x);
    }
    CHECK(set.points == expect);
    CHECK(set.indeterminate.empty());
    CHECK(set.support == std::vector<ProjectivePoint>{pt({0, 1})});
    // the fast path and the ball route agree point by point
    SolutionFilter filter(params);
    for (const auto& x : enumerate_points(1, 40)) CHECK(filter.classify(x) == filter.classify_precise(x));
  }
}

TEST_CASE("solution sets are deterministic and carry the parameter digest") {
  auto a = solve_bounded(roth(Rational(3, 10)), 300, 1);
  auto b = solve_bounded(roth(Rational(3, 10)), 300, 3);
  CHECK(a.points == b.points);
  CHECK(a.spec_digest == b.spec_digest);
  CHECK(a.spec_digest.size() == 64);
  CHECK(a.spec_digest != solve_bounded(roth(Rational(1, 3)), 10).spec_digest);
}

TEST_CASE("FW and parametric filters") {
  auto params = roth(Rational(1, 10));
  params.kind = FilterKind::FW;
  params.spec.weights = {{2, Rational(1, 10)}};
  params.slack = 1;
  SolutionFilter fw(params);
  CHECK(fw.classify(pt({5, 7})) == Outcome::Solution);
  CHECK(fw.classify(pt({5, 3})) == Outcome::NotSolution);
  for (const auto& x : enumerate_points(1, 60)) CHECK(fw.classify(x) == fw.classify_precise(x));

  auto par = roth(Rational(1, 10));
  par.kind = FilterKind::Parametric;
  par.spec.weights = {{Rational(-1, 2), Rational(1, 2)}};
  par.spec.Q = 50;
  SolutionFilter pf(par);
  for (const auto& x : enumerate_points(1, 60)) CHECK(pf.classify(x) == pf.classify_precise(x));
}

TEST_CASE("p-adic systems take the ball route") {
  auto f = NumberField::from_ints({-2, 0, 1});
  FilterParams p;
  p.spec.system.field = f;
  p.spec.system.n = 1;
  p.spec.system.places.push_back({places_above(f, 7, 20)[0],
                                  {LinearForm(f, {-FieldElement::theta(f), FieldElement::one(f)}),
                                   LinearForm::coordinate(f, 1, 0)}});
  p.spec.epsilon = Rational(1, 10);
  p.slack = 0;
  auto s = solve_bounded(p, 30);
  CHECK(s.indeterminate.empty());
  SolutionFilter filter(p);
  for (const auto& x : s.points) CHECK(filter.classify_precise(x) == Outcome::Solution);
}

TEST_CASE("subspace covers") {
  auto c1 = subspace_cover({pt({5, 7}), pt({12, 17}), pt({29, 41})}, CoverMode::Exact);
  CHECK(c1.subspaces.size() == 3);
  std::vector<ProjectivePoint> line;
  for (int t = -3; t <= 3; ++t) line.push_back(pt({1, t, 1}));
  auto c2 = subspace_cover(line, CoverMode::Exact);
  REQUIRE(c2.subspaces.size() == 1);
  CHECK(c2.subspaces[0].projective_dim() == 1);
  for (const auto& x : line) CHECK(c2.subspaces[0].contains(x));
  std::vector<ProjectivePoint> spanning{pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1}), pt({1, 1, 1})};
  try {
    subspace_cover(spanning, CoverMode::Exact, 1);
    FAIL("expected Infeasible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Infeasible);
  }
  auto d = density_report(line, c2);
  CHECK(d.cover_size == 1);
  CHECK(d.economy_ratio == 7.0);
  CHECK(d.verdict_text.find("never dense") != std::string::npos);
  CHECK(d.verdict_text.find("economy") != std::string::npos);
  auto singles = density_report(c1.subspaces.empty() ? line : std::vector<ProjectivePoint>{pt({5, 7}), pt({12, 17}), pt({29, 41})}, c1);
  CHECK(singles.economy_ratio == 1.0);
  auto empty = density_report({}, c1);
  CHECK(empty.point_count == 0);
}

TEST_CASE("exact covers are never larger than greedy ones") {
  std::mt19937_64 rng(12);
  int fewer = 0;
  for (int k = 0; k < 60; ++k) {
    std::vector<ProjectivePoint> pts;
    const int count = 4 + static_cast<int>(rng() % 14);
    while (static_cast<int>(pts.size()) < count) {
      std::vector<std::int64_t> c(3);
      for (auto& v : c) v = static_cast<std::int64_t>(rng() % 9) - 4;
      if (rng() % 3 == 0) c[2] = c[0];  // bias toward a plane
      if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
      auto x = pt(c);
      if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(x);
    }
    sort_canonical(pts);
    auto exact = subspace_cover(pts, CoverMode::Exact);
    auto greedy = subspace_cover(pts, CoverMode::Greedy);
    CHECK(exact.subspaces.size() <= greedy.subspaces.size());
    fewer += exact.subspaces.size() < greedy.subspaces.size();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      CHECK(exact.subspaces[exact.assignment[j]].contains(pts[j]));
      CHECK(greedy.subspaces[greedy.assignment[j]].contains(pts[j]));
    }
    for (const auto& s : exact.subspaces) CHECK(s.basis.size() <= 2);
  }
  MESSAGE("instances where exact beat greedy: " << fewer);
}

TEST_CASE("exact mode falls back to greedy above the cap") {
  std::vector<ProjectivePoint> pts;
  for (int t = 1; t <= 30; ++t) pts.push_back(pt({1, t, t * t}));
  auto c = subspace_cover(pts, CoverMode::Exact);
  CHECK(c.fell_back);
  CHECK(c.mode == CoverMode::Greedy);
  CHECK(c.subspaces.size() == 15);  // a conic meets each line in at most 2 points
}
