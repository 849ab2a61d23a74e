#include <doctest.h>

#include "heightlab/error.hpp"
#include "heightlab/harness.hpp"

using namespace heightlab;
using namespace heightlab::harness;

namespace {

std::string config_path(const std::string& name) { return std::string(HEIGHTLAB_CONFIG_DIR) + "/" + name; }

json twisted_config() {
  return json::parse(R"({
    "name": "t", "n": 1,
    "places": [{"v": "inf", "forms": ["x0", "x1"]}],
    "weights": {"kind": "c", "matrix": [["1", "-1"]]},
    "delta": "1/10", "Q": "2",
    "points": [[3, 4], [1, 1], [0, 1]]
  })");
}

}  // namespace

TEST_CASE("rational and form parsing") {
  CHECK(parse_rational_value(json("3/4"), "x") == Rational(3, 4));
  CHECK(parse_rational_value(json(-5), "x") == -5);
  CHECK_THROWS_AS(parse_rational_value(json(0.5), "x"), Error);
  CHECK_THROWS_AS(parse_rational_value(json("1/0"), "x"), Error);

  auto f = parse_field(json::parse(R"({"field": {"min_poly": [-2, 0, 1]}})"));
  CHECK(f->degree() == 2);
  CHECK_THROWS_AS(parse_field(json::parse(R"({"field": {"min_poly": [-1, 0, 1]}})")), Error);
  auto e = parse_element(f, json::parse(R"(["1/2", "3"])"));
  CHECK(e * e - FieldElement::from_rational(f, Rational(73, 4)) ==
        FieldElement::theta(f) * FieldElement::from_rational(f, Rational(3)));
  CHECK_THROWS_AS(parse_form(f, 1, json("x2")), Error);
  CHECK_THROWS_AS(parse_form(f, 1, json::parse("[1, 2, 3]")), Error);
  CHECK(parse_form(f, 1, json("x1")).coeffs == LinearForm::coordinate(f, 1, 1).coeffs);
}

TEST_CASE("points are canonicalized, sorted and deduplicated") {
  auto pts = parse_points(json::parse("[[2, 4], [-1, -2], [1, 0]]"), 1);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0] == ProjectivePoint({1, 0}));
  CHECK(pts[1] == ProjectivePoint({1, 2}));
  CHECK_THROWS_AS(parse_points(json::parse("[[0, 0]]"), 1), Error);
  CHECK_THROWS_AS(parse_points(json::parse("[[1, 2, 3]]"), 1), Error);
}

TEST_CASE("malformed weights name the offending row") {
  auto cfg = load_config(config_path("malformed_weights.json"));
  try {
    run_experiment("twisted", cfg, {});
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
    CHECK(std::string(e.what()).find("row 0") != std::string::npos);
  }
  CHECK_THROWS_AS(run_experiment("nonsense", cfg, {}), Error);
  CHECK_THROWS_AS(load_config(config_path("does_not_exist.json")), Error);
}

TEST_CASE("report header and determinism") {
  auto cfg = twisted_config();
  auto a = run_experiment("twisted", cfg, {});
  auto b = run_experiment("twisted", cfg, {});
  CHECK(render(a.report) == render(b.report));
  CHECK(a.csv == b.csv);
  CHECK(a.report["schema"] == kSchemaVersion);
  CHECK(a.report["command"] == "twisted");
  CHECK(a.report["name"] == "t");
  CHECK(a.report["config_digest"].get<std::string>().size() == 64);
  CHECK(a.report["precision_digits"] == kDefaultDigits);
  CHECK(a.report["slack"] == "0");
  CHECK(a.report["rows"].size() == 3);
  CHECK(a.report["rows"][0].contains("support"));
  CHECK(a.report["max_identity_residual"].get<double>() < 1e-9);

  auto hi = run_experiment("twisted", cfg, RunOptions{60, 1});
  CHECK(hi.report["precision_digits"] == 60);
  CHECK(hi.report["config_digest"] == a.report["config_digest"]);
  cfg["name"] = "u";
  CHECK(run_experiment("twisted", cfg, {}).report["config_digest"] != a.report["config_digest"]);
}

TEST_CASE("shipped configs run") {
  const std::pair<const char*, const char*> runs[] = {
      {"twisted_example.json", "twisted"}, {"sweep_example.json", "sweep"},   {"fw_sqrt2.json", "solve"},
      {"scatter_profiles.json", "scatter"}, {"ruvojta_p2.json", "ruvojta"}, {"planted_p2.json", "solve"},
      {"places_audit.json", "places"}};
  for (const auto& [name, cmd] : runs) {
    CAPTURE(name);
    auto r = run_experiment(cmd, load_config(config_path(name)), {});
    CHECK(r.exit_code == 0);
  }
}

TEST_CASE("solve reports a cover for the planted configuration") {
  auto r = run_experiment("solve", load_config(config_path("planted_p2.json")), {});
  CHECK(r.report["cover"]["subspaces"].size() == 3);
  CHECK_FALSE(r.csv.empty());
  auto again = run_experiment("solve", load_config(config_path("planted_p2.json")), RunOptions{0, 2});
  CHECK(render(again.report) == render(r.report));
}
