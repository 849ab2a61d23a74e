#include <doctest.h>

#include <cmath>
#include <random>

#include "heightlab/error.hpp"
#include "heightlab/twisted.hpp"
#include "oracles.hpp"

using namespace heightlab;

namespace {

ProjectivePoint pt(std::vector<std::int64_t> c) { return ProjectivePoint(std::move(c)); }

TwistedHeightSpec coordinate_spec(const WeightMatrix& c, const Rational& Q) {
  auto q = NumberField::rationals();
  TwistedHeightSpec spec;
  spec.system.field = q;
  spec.system.n = 1;
  spec.system.places.push_back({places_above(q, 0, 30)[0], {LinearForm::coordinate(q, 1, 0), LinearForm::coordinate(q, 1, 1)}});
  spec.weights = c;
  spec.epsilon = Rational(1, 10);
  spec.Q = Q;
  return spec;
}

}  // namespace

TEST_CASE("twisted height examples") {
  auto spec = coordinate_spec({{1, -1}}, 2);
  CHECK(oracle::near(twisted_height(spec, pt({3, 4})), 8.0));
  spec.Q = 1;
  CHECK(oracle::near(twisted_height(spec, pt({3, 4})), 4.0));
  auto flat = coordinate_spec({{0, 0}}, 1000);
  for (auto x : {pt({3, 4}), pt({1, 7}), pt({5, -2})}) {
    CHECK(oracle::near(twisted_height(flat, x), mult_height(x).get_d()));
  }
}

TEST_CASE("logarithmic report and the identity") {
  auto spec = coordinate_spec({{1, -1}}, 2);
  auto r = log_twisted_report(spec, pt({3, 4}));
  CHECK(oracle::near(r.lhs, -std::log(2.0)));
  CHECK(oracle::near(r.minus_log_twisted, -std::log(8.0)));
  CHECK(r.identity_residual < 1e-30);
  CHECK(r.verdict == Verdict::Fails);

  auto flat = coordinate_spec({{0, 0}}, 5);
  auto one = log_twisted_report(flat, pt({1, 1}));
  CHECK(one.lhs.upper_double() == 0.0);
  CHECK(oracle::near(one.rhs, 0.1 * std::log(5.0)));
  CHECK(one.verdict == Verdict::Fails);

  auto q1 = coordinate_spec({{1, -1}}, 1);
  auto u = log_twisted_report(q1, pt({1, 1}));
  CHECK(u.verdict == Verdict::Holds);  // lhs = 0 = rhs exactly when Q = 1 and h = 0
}

TEST_CASE("identity holds on random specs over Q and Q(sqrt 2)") {
  std::mt19937_64 rng(77);
  for (auto poly : std::vector<std::vector<long>>{{0, 1}, {-2, 0, 1}}) {
    auto f = NumberField::create(poly::from_ints(poly));
    for (int s = 0; s < 15; ++s) {
      TwistedHeightSpec spec;
      spec.system.field = f;
      spec.system.n = 2;
      std::vector<Integer> vs{0, 7};
      for (std::size_t k = 0; k < vs.size(); ++k) {
        auto ws = places_above(f, vs[k], 30);
        PlaceForms pf{ws[rng() % ws.size()], {}};
        while (true) {
          pf.forms.clear();
          for (int i = 0; i < 3; ++i) {
            std::vector<FieldElement> c;
            for (int j = 0; j < 3; ++j) {
              std::vector<Rational> e;
              for (int t = 0; t < f->degree(); ++t) e.push_back(oracle::random_rational(rng, 4, 3));
              c.emplace_back(f, e);
            }
            pf.forms.emplace_back(f, c);
          }
          std::vector<std::vector<FieldElement>> m;
          for (const auto& l : pf.forms) m.push_back(l.coeffs);
          if (!field_determinant(m).is_zero()) break;
        }
        spec.system.places.push_back(pf);
        Rational a = oracle::random_rational(rng, 6, 4), b = oracle::random_rational(rng, 6, 4);
        spec.weights.push_back({a, b, -a - b});
      }
      spec.epsilon = Rational(1, 5);
      spec.validate();
      for (int k = 0; k < 15; ++k) {
        std::vector<std::int64_t> c(3);
        for (auto& v : c) v = static_cast<std::int64_t>(rng() % 1001) - 500;
        if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
        auto x = pt(c);
        if (spec.system.on_support(x)) continue;
        for (Rational Q : {Rational(1), Rational(2), Rational(10), Rational(1000)}) {
          spec.Q = Q;
          auto r = log_twisted_report(spec, x);
          CHECK(r.identity_residual <= 1e-9);
          // independent route: -log of the multiplicative height against lhs - h
          Ball H = twisted_height(spec, x);
          CHECK(std::fabs(-std::log(H.mid_double()) - (r.lhs.mid_double() - r.h.mid_double())) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("spec validation names the offending row") {
  auto spec = coordinate_spec({{1, 0}}, 2);
  try {
    spec.validate();
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
    CHECK(std::string(e.what()).find("row 0") != std::string::npos);
  }
  auto dep = coordinate_spec({{1, -1}}, 2);
  dep.system.places[0].forms[1] = dep.system.places[0].forms[0];
  CHECK_THROWS_AS(dep.validate(), Error);
}

TEST_CASE("Q sweeps") {
  auto flat = coordinate_spec({{0, 0}}, 1);
  std::vector<ProjectivePoint> pts{pt({1, 0}), pt({1, 1}), pt({1, 2}), pt({3, 4})};
  auto sw = q_sweep(flat, {Rational(1)}, pts);
  REQUIRE(sw.entries.size() == 1);
  // H_Q <= Q^{-ε} = 1 only at height 1
  CHECK(sw.entries[0].solutions == std::vector<ProjectivePoint>{pt({1, 0}), pt({1, 1})});
  auto empty = q_sweep(flat, {Rational(1), Rational(2)}, {});
  CHECK(empty.entries[0].solutions.empty());
  CHECK(empty.entries[1].solutions.empty());
  CHECK_THROWS_AS(q_sweep(flat, {Rational(2), Rational(1)}, pts), Error);

  auto spec = coordinate_spec({{Rational(-1, 2), Rational(1, 2)}}, 1);
  auto grid = q_sweep(spec, {Rational(1), Rational(2), Rational(4), Rational(100)}, pts);
  CHECK(grid.verdict_changes.size() == pts.size());
  CHECK(grid.stabilization_Q.has_value());
}
