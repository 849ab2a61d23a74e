#include <doctest.h>

#include <random>

#include "heightlab/error.hpp"
#include "heightlab/scattering.hpp"
#include "oracles.hpp"

using namespace heightlab;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::BadParameter;
}

Rational sum(const std::vector<Rational>& v) {
  Rational s = 0;
  for (const auto& x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("Faltings-Wustholz weights") {
  auto a = fw_weights({WeightKind::D, 1, {{2, 1}}});
  CHECK(a.epsilon == Rational(1, 2));
  CHECK(a.c.entries == WeightMatrix{{Rational(-1, 2), Rational(1, 2)}});
  auto b = fw_weights({WeightKind::D, 2, {{2, 1, 1}}});
  CHECK(b.epsilon == Rational(1, 3));
  CHECK(b.c.entries == WeightMatrix{{Rational(-2, 3), Rational(1, 3), Rational(1, 3)}});
  CHECK(code_of([] { fw_weights({WeightKind::D, 1, {{1, 1}}}); }) == ErrorCode::ThresholdNotMet);
  // just above and at the boundary ΣΣd = n+1, two places
  CHECK(fw_weights({WeightKind::D, 1, {{1, Rational(1, 2)}, {Rational(1, 2), Rational(1, 1000)}}}).epsilon > 0);
  CHECK(code_of([] { fw_weights({WeightKind::D, 1, {{1, Rational(1, 2)}, {Rational(1, 2), 0}}}); }) ==
        ErrorCode::ThresholdNotMet);
}

TEST_CASE("simplex cover examples") {
  auto c = simplex_cover(Rational(3, 4), 2);
  CHECK(c.delta == Rational(1, 8));
  CHECK(c.count == 7);
  CHECK(c.points.size() == 7);
  auto one = simplex_cover(Rational(1, 2), 1);
  CHECK(one.points == std::vector<std::vector<Rational>>{{Rational(1, 2)}});
  CHECK(simplex_select({1, 0}, c) == std::vector<Rational>{Rational(3, 4), 0});
  CHECK(simplex_select({1, 1}, c) == std::vector<Rational>{Rational(1, 2), Rational(1, 4)});
  CHECK(simplex_select({5, 5}, c) == simplex_select({Rational(1, 3), Rational(1, 3)}, c));
  CHECK(code_of([] { simplex_cover(1, 2); }) == ErrorCode::BadParameter);
  CHECK(code_of([] { simplex_cover(0, 2); }) == ErrorCode::BadParameter);
}

TEST_CASE("simplex selection postcondition holds exactly") {
  std::mt19937_64 rng(101);
  for (Rational c : {Rational(1, 2), Rational(3, 4), Rational(15, 16)}) {
    for (std::size_t I = 1; I <= 6; ++I) {
      auto cover = simplex_cover(c, I);
      for (int k = 0; k < 40; ++k) {
        std::vector<Rational> b(I);
        for (auto& x : b) {
          x = oracle::random_rational(rng, 50, 9);
          if (x < 0) x = -x;
        }
        if (sum(b) == 0) b[0] = 1;
        auto a = simplex_select(b, cover);
        CHECK(sum(a) == c);
        for (std::size_t j = 0; j < I; ++j) {
          CHECK(a[j] >= 0);
          CHECK(b[j] >= a[j] * sum(b));
        }
        CHECK(cover.contains(a));
      }
    }
  }
}

TEST_CASE("classification") {
  const Rational h = 10, eps(1, 2);
  CHECK(classify_solution({{26, 4}}, h, 1, eps, 0).kind == ClassKind::TypeI);
  CHECK(classify_solution({{26, 4}}, h, 1, eps, 0).anchor == 0);
  CHECK(classify_solution({{4, 26}}, h, 1, eps, 0).anchor == 1);
  CHECK(classify_solution({{14, 14}}, h, 1, eps, 0).kind == ClassKind::TypeII);
  CHECK(classify_solution({{10, 10}}, h, 1, eps, 0).kind == ClassKind::NotASolution);
  CHECK(classify_solution({{10, 10}}, h, 1, eps, 5).kind == ClassKind::TypeII);
}

TEST_CASE("e-weights") {
  auto e1 = scatter_weights(ClassKind::TypeI, 1, Rational(1, 2), {Rational(15, 16)}, {1});
  CHECK(e1.entries == WeightMatrix{{Rational(75, 32), 0}});
  CHECK(e1.total() == Rational(75, 32));
  auto e2 = scatter_weights(ClassKind::TypeII, 1, Rational(1, 2), {Rational(31, 64), Rational(31, 64)}, {1});
  CHECK(e2.entries == WeightMatrix{{Rational(75, 64), Rational(75, 64)}});
  CHECK(sum_check_threshold(1) == 6);
  // Type I: (n+1+ε)(1 - ε/(4(n+1))) > n+1 iff ε < 3(n+1); the largest root of the
  // quadratic is solved numerically here and compared with the exact threshold.
  for (std::size_t n : {1u, 2u, 3u}) {
    const double N = static_cast<double>(n + 1);
    // (N+e)(1 - e/(4N)) - N = e(1 - (N+e)/(4N)) -> root e = 3N
    double lo = 0.1, hi = 10 * N;
    for (int it = 0; it < 200; ++it) {
      double mid = (lo + hi) / 2;
      ((N + mid) * (1 - mid / (4 * N)) > N ? lo : hi) = mid;
    }
    CHECK(lo == doctest::Approx(sum_check_threshold(n).get_d()).epsilon(1e-9));
    Rational big = sum_check_threshold(n);
    Rational cI = scatter_c(ClassKind::TypeI, n, big);
    CHECK(code_of([&] { scatter_weights(ClassKind::TypeI, n, big, {cI}, {1}); }) == ErrorCode::SumCheckFailed);
    Rational ok = big - Rational(1, 100);
    Rational cI2 = scatter_c(ClassKind::TypeI, n, ok);
    CHECK(scatter_weights(ClassKind::TypeI, n, ok, {cI2}, {1}).total() > Rational(static_cast<long>(n + 1)));
  }
}

TEST_CASE("e-weight sums match the closed forms") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + rng() % 3;
    const std::size_t S = 1 + rng() % 3;
    Rational eps = oracle::frac(1 + static_cast<long>(rng() % 20), 10);
    const Rational N(static_cast<long>(n + 1));
    // Type I: random split of c over the places
    Rational cI = scatter_c(ClassKind::TypeI, n, eps);
    std::vector<Rational> a(S, 0);
    Rational left = cI;
    for (std::size_t v = 0; v + 1 < S; ++v) {
      a[v] = left * oracle::frac(static_cast<long>(rng() % 5), 5);
      left -= a[v];
    }
    a[S - 1] = left;
    std::vector<Rational> dv(S, Rational(1, static_cast<long>(S)));
    auto eI = scatter_weights(ClassKind::TypeI, n, eps, a, dv, rng() % (n + 1));
    CHECK(eI.total() == (N + eps) * sum(a));
    // Type II over S x {0..n}
    Rational cII = scatter_c(ClassKind::TypeII, n, eps);
    std::vector<Rational> b(S * (n + 1), cII / Rational(static_cast<long>(S * (n + 1))));
    auto eII = scatter_weights(ClassKind::TypeII, n, eps, b, dv);
    CHECK(eII.total() == N * (N + eps) * sum(b) - Rational(static_cast<long>(n)) * (N + eps));
  }
}

TEST_CASE("scatter profiles satisfy their class inequalities") {
  std::mt19937_64 rng(55);
  int assigned = 0;
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 1 + rng() % 2, S = 1 + rng() % 2;
    Rational eps = oracle::frac(1 + static_cast<long>(rng() % 9), 10);
    Rational h(1 + static_cast<long>(rng() % 50));
    Rational need = (Rational(static_cast<long>(n + 1)) + eps) * h;
    WeightMatrix lambda(S, std::vector<Rational>(n + 1));
    Rational total = 0;
    for (auto& row : lambda)
      for (auto& x : row) {
        x = oracle::frac(static_cast<long>(rng() % 100), 7);
        total += x;
      }
    if (total < need) lambda[0][0] += need - total;
    std::vector<Rational> dv(S, Rational(1, static_cast<long>(S)));
    auto a = scatter_profile(lambda, h, n, eps, 0, dv);
    REQUIRE(a.has_value());
    ++assigned;
    CHECK(a->e.total() > Rational(static_cast<long>(n + 1)));
    CHECK(verify_scatter(*a, lambda, h, 0));
    for (std::size_t v = 0; v < S; ++v)
      for (std::size_t i = 0; i <= n; ++i) {
        if (a->cls.kind == ClassKind::TypeI && i != a->cls.anchor) continue;
        CHECK(lambda[v][i] >= a->e.entries[v][i] * h);
      }
  }
  CHECK(assigned == 300);
}

TEST_CASE("general-position reduction") {
  auto q = NumberField::rationals();
  std::vector<LinearForm> three{LinearForm::from_rationals(q, {1, 0}), LinearForm::from_rationals(q, {0, 1}),
                                LinearForm::from_rationals(q, {1, 1})};
  auto r = gen_pos_reduce({three}, {{5, 1, 3}}, 1);
  CHECK(r.kept[0] == std::vector<std::size_t>{0, 2});
  CHECK(r.residual == 1);
  auto id = gen_pos_reduce({{three[0], three[1]}}, {{2, 7}}, 1);
  CHECK(id.kept[0] == std::vector<std::size_t>{0, 1});
  CHECK(id.residual == 0);
  std::vector<LinearForm> repeated{three[0], three[0], three[1]};
  CHECK(code_of([&] { gen_pos_reduce({repeated}, {{1, 2, 3}}, 1); }) == ErrorCode::GeneralPositionViolated);
}
