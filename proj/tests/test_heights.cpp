#include <doctest.h>

#include <map>

#include "heightlab/error.hpp"
#include "heightlab/exceptional.hpp"
#include "heightlab/heights.hpp"
#include "oracles.hpp"

using namespace heightlab;

namespace {

ProjectivePoint pt(std::vector<std::int64_t> c) { return ProjectivePoint(std::move(c)); }

}  // namespace

TEST_CASE("projective points are canonical") {
  CHECK(pt({2, 4}) == pt({1, 2}));
  CHECK(pt({-3, 6}) == pt({1, -2}));
  CHECK(pt({0, -5, 10}) == pt({0, 1, -2}));
  CHECK_THROWS_AS(pt({0, 0}), Error);
  CHECK(mult_height(pt({3, 4})) == 4);
  CHECK(mult_height(pt({1, 0, 0})) == 1);
  CHECK(mult_height(pt({2, 4})) == 2);
}

TEST_CASE("logarithmic height") {
  CHECK(oracle::near(log_height(pt({3, 4}), 128), std::log(4.0)));
  CHECK(log_height(pt({1, 1}), 128).upper_double() == 0.0);
  CHECK(log_height(pt({0, 1}), 128).upper_double() == 0.0);
}

TEST_CASE("Weil functions of hyperplanes") {
  auto q = NumberField::rationals();
  auto inf = places_above(q, 0, 30)[0];
  auto two = places_above(q, 2, 30)[0];
  HyperplanePresentation x0(LinearForm::coordinate(q, 1, 0));
  CHECK(oracle::near(weil_hyperplane(x0, pt({3, 4}), inf), std::log(4.0 / 3.0)));
  CHECK(weil_hyperplane(x0, pt({3, 4}), two).upper_double() == 0.0);
  CHECK(weil_hyperplane(x0, pt({1, 1}), inf).upper_double() == 0.0);
  CHECK(oracle::near(proximity(x0, pt({3, 4}), {inf, two}), std::log(4.0 / 3.0)));
  CHECK_THROWS_AS(weil_hyperplane(x0, pt({0, 1}), inf), Error);

  auto f = NumberField::from_ints({-2, 0, 1});
  auto w = places_above(f, 0, 30)[1];
  HyperplanePresentation roth(LinearForm(f, {-FieldElement::theta(f), FieldElement::one(f)}));
  const long double expect = std::log(7.0L / std::fabs(7.0L - 5.0L * std::sqrt(2.0L)));
  CHECK(oracle::near(weil_hyperplane(roth, pt({5, 7}), w), static_cast<double>(expect)));
  CHECK(weil_hyperplane(roth, pt({5, 7}), w).mid_double() == doctest::Approx(4.59003091011394).epsilon(1e-13));
}

TEST_CASE("height equals the sum of x0-presentation Weil values") {
  auto q = NumberField::rationals();
  std::map<long, Place> finite;
  auto inf = places_above(q, 0, 30)[0];
  for (std::size_t n : {1u, 2u}) {
    HyperplanePresentation x0(LinearForm::coordinate(q, n, 0));
    for (const auto& x : enumerate_points(n, n == 1 ? 40 : 9)) {
      if (x[0] == 0) continue;
      Ball sum = weil_hyperplane(x0, x, inf);
      for (long p : oracle::primes_dividing(Integer(static_cast<long>(x[0])))) {
        if (!finite.count(p)) finite.emplace(p, places_above(q, p, 30)[0]);
        sum += weil_hyperplane(x0, x, finite.at(p));
      }
      CHECK(abs(sum - log_height(x, 128)).upper_double() <= 1e-10);
      // primes not dividing x_0 contribute exactly nothing
      for (long p : {2L, 3L, 5L, 7L}) {
        if (x[0] % p == 0) continue;
        if (!finite.count(p)) finite.emplace(p, places_above(q, p, 30)[0]);
        CHECK(weil_hyperplane(x0, x, finite.at(p)).upper_double() == 0.0);
      }
    }
  }
}

TEST_CASE("Weil values at a p-adic place of Q(sqrt 2)") {
  auto f = NumberField::from_ints({-2, 0, 1});
  auto w = places_above(f, 2, 30)[0];
  // ℓ = x_1 - θ x_0 at [1:0]: ℓ = -θ, max |x_j| = 1
  HyperplanePresentation l(LinearForm(f, {-FieldElement::theta(f), FieldElement::one(f)}));
  CHECK(oracle::near(weil_hyperplane(l, pt({1, 0}), w), 0.5 * std::log(2.0)));
  // at [1:2]: ℓ = 2 - θ = θ(θ - 1); |θ|_{2,Q} = 2^{-1/2}, θ - 1 is a unit
  CHECK(oracle::near(weil_hyperplane(l, pt({1, 2}), w), 0.5 * std::log(2.0)));
}

TEST_CASE("nonnegativity shift and presentation differences") {
  auto q = NumberField::rationals();
  auto inf = places_above(q, 0, 30)[0];
  HyperplanePresentation wide(LinearForm::from_rationals(q, {3, 3}));
  HyperplanePresentation x0(LinearForm::coordinate(q, 1, 0));
  auto sample = enumerate_points(1, 10);
  std::vector<ProjectivePoint> off;
  for (const auto& x : sample)
    if (x[0] + x[1] != 0 && x[0] != 0) off.push_back(x);
  double shift = nonnegativity_shift(wide, off, inf);
  // λ = log(max/|3(x0+x1)|) >= -log 6 with equality at [1:1]
  CHECK(shift == doctest::Approx(std::log(6.0)).epsilon(1e-9));
  for (const auto& x : off) CHECK(weil_hyperplane(wide, x, inf).mid_double() + shift >= -1e-12);
  auto diff = presentation_difference(wide, HyperplanePresentation(LinearForm::from_rationals(q, {1, 1})), off, inf);
  CHECK(diff.max_abs_difference == doctest::Approx(std::log(3.0)).epsilon(1e-9));
  CHECK(diff.min_difference == doctest::Approx(-std::log(3.0)).epsilon(1e-9));
}
