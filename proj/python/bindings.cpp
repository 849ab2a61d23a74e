#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heightlab/error.hpp"
#include "heightlab/exceptional.hpp"
#include "heightlab/harness.hpp"
#include "heightlab/ru_vojta.hpp"
#include "heightlab/scattering.hpp"

namespace py = pybind11;
using namespace heightlab;

namespace {

using Coords = std::vector<std::int64_t>;
using Text = std::vector<std::string>;

std::vector<Rational> rationals(const Text& in) {
  std::vector<Rational> out;
  for (const auto& s : in) out.push_back(parse_rational(s));
  return out;
}

Text texts(const std::vector<Rational>& in) {
  Text out;
  for (const auto& q : in) out.push_back(to_string(q));
  return out;
}

std::vector<Coords> coords(const std::vector<ProjectivePoint>& pts) {
  std::vector<Coords> out;
  for (const auto& x : pts) out.push_back(x.coords());
  return out;
}

std::vector<ProjectivePoint> points(const std::vector<Coords>& in) {
  std::vector<ProjectivePoint> out;
  for (const auto& c : in) out.emplace_back(c);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Heights, Weil functions and exceptional-set experiments over number fields";

  static py::exception<Error> error(m, "HeightlabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });

  m.def("commands", &harness::commands);

  m.def(
      "run_experiment",
      [](const std::string& command, const std::string& config, unsigned precision, unsigned jobs) {
        harness::json cfg;
        try {
          cfg = harness::json::parse(config);
        } catch (const harness::json::parse_error& e) {
          throw Error(ErrorCode::ConfigInvalid, std::string("malformed JSON: ") + e.what());
        }
        harness::RunResult r;
        {
          py::gil_scoped_release release;
          r = harness::run_experiment(command, cfg, {precision, jobs});
        }
        return py::make_tuple(harness::render(r.report), r.csv, r.exit_code);
      },
      py::arg("command"), py::arg("config"), py::arg("precision") = 0, py::arg("jobs") = 1);

  m.def("count_points", &count_points, py::arg("n"), py::arg("bound"));
  m.def(
      "enumerate_points", [](std::size_t n, std::int64_t bound) { return coords(enumerate_points(n, bound)); },
      py::arg("n"), py::arg("bound"));
  m.def(
      "log_height",
      [](const Coords& x, unsigned digits) {
        Ball b = log_height(ProjectivePoint(x), bits_for_digits(digits));
        return py::make_tuple(b.mid_double(), b.rad_double());
      },
      py::arg("point"), py::arg("digits") = 40);

  m.def(
      "subspace_cover",
      [](const std::vector<Coords>& pts, bool exact, std::size_t max_subspaces) {
        auto pp = points(pts);
        sort_canonical(pp);
        auto cover = subspace_cover(pp, exact ? CoverMode::Exact : CoverMode::Greedy, max_subspaces);
        std::vector<std::vector<Text>> eqs;
        for (const auto& s : cover.subspaces) {
          std::vector<Text> rows;
          for (const auto& r : s.equations) rows.push_back(texts(r));
          eqs.push_back(rows);
        }
        return py::make_tuple(eqs, cover.assignment, cover.fell_back, coords(pp));
      },
      py::arg("points"), py::arg("exact") = true, py::arg("max_subspaces") = 0);

  m.def(
      "fw_weights",
      [](std::size_t n, const std::vector<Text>& d) {
        WeightSystem sys{WeightKind::D, n, {}};
        for (const auto& row : d) sys.entries.push_back(rationals(row));
        FwResult r = fw_weights(sys);
        std::vector<Text> c;
        for (const auto& row : r.c.entries) c.push_back(texts(row));
        return py::make_tuple(to_string(r.epsilon), c);
      },
      py::arg("n"), py::arg("d"));

  m.def(
      "simplex_select",
      [](const Text& b, const std::string& c) {
        auto cover = simplex_cover(parse_rational(c), b.size());
        return texts(simplex_select(rationals(b), cover));
      },
      py::arg("b"), py::arg("c"));

  m.def(
      "h0_twist", [](unsigned n, unsigned mm, unsigned ell) { return h0_twist(n, mm, ell).get_str(); }, py::arg("n"),
      py::arg("m"), py::arg("ell"));
  m.def(
      "gamma_beta",
      [](unsigned n, unsigned m_max) {
        auto g = gamma_beta(n, m_max);
        Text ratios;
        for (const auto& row : g.table) ratios.push_back(to_string(row.ratio));
        return py::make_tuple(to_string(g.gamma), to_string(g.feasible_beta_sup), ratios);
      },
      py::arg("n"), py::arg("m_max"));
  m.def(
      "delta_sigma",
      [](const Text& betas, long b) {
        std::vector<Text> out;
        for (const auto& t : delta_sigma(rationals(betas), Integer(b))) {
          Text row;
          for (const auto& z : t) row.push_back(z.get_str());
          out.push_back(row);
        }
        return out;
      },
      py::arg("betas"), py::arg("b"));
}
