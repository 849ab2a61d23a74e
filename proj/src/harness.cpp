#include "heightlab/harness.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "heightlab/digest.hpp"
#include "heightlab/error.hpp"
#include "heightlab/ru_vojta.hpp"
#include "heightlab/scattering.hpp"

namespace heightlab::harness {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); }

const json* find(const json& obj, const char* key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

long get_int(const json& obj, const char* key, long fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) invalid(std::string("\"") + key + "\" must be an integer");
  return v->get<long>();
}

Rational get_rational(const json& obj, const char* key, const Rational& fallback) {
  const json* v = find(obj, key);
  return v ? parse_rational_value(*v, key) : fallback;
}

std::string text(const Rational& q) { return to_string(q); }

json rationals_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(text(q));
  return out;
}

json matrix_json(const WeightMatrix& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(rationals_json(row));
  return out;
}

json integers_json(const std::vector<Integer>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(z.get_str());
  return out;
}

json points_json(const std::vector<ProjectivePoint>& pts) {
  json out = json::array();
  for (const auto& x : pts) out.push_back(point_json(x));
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string place_key(const Place& w) { return w.v_label() + "/w" + std::to_string(w.index); }

Integer parse_v(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return 0;
    try {
      Integer p(s);
      return p;
    } catch (...) {
      invalid("bad place label \"" + s + "\"");
    }
  }
  if (v.is_number_integer()) return Integer(v.get<long>());
  invalid("place label must be \"inf\" or a prime");
}

Place pick_place(const FieldPtr& field, const Integer& v, long w_index, unsigned digits) {
  if (v != 0 && !is_prime(v)) invalid("place label " + v.get_str() + " is not a prime");
  auto above = places_above(field, v, digits);
  if (w_index < 0 || static_cast<std::size_t>(w_index) >= above.size()) {
    invalid("w_index " + std::to_string(w_index) + " out of range: " + std::to_string(above.size()) +
            " place(s) above v=" + (v == 0 ? std::string("inf") : v.get_str()));
  }
  return above[w_index];
}

unsigned digits_for(const json& config, const RunOptions& opt) {
  if (opt.precision) return opt.precision;
  long d = get_int(config, "precision", kDefaultDigits);
  if (d < 5 || d > 2000) invalid("precision must lie in [5, 2000] decimal digits");
  return static_cast<unsigned>(d);
}

std::size_t dimension(const json& config) {
  long n = get_int(config, "n", -1);
  if (n < 1) invalid("\"n\" must be given and at least 1");
  return static_cast<std::size_t>(n);
}

WeightMatrix parse_matrix(const json& m, const char* what) {
  if (!m.is_array()) invalid(std::string(what) + " must be an array of rows");
  WeightMatrix out;
  for (const auto& row : m) {
    if (!row.is_array()) invalid(std::string(what) + " rows must be arrays");
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(parse_rational_value(x, what));
    out.push_back(std::move(r));
  }
  return out;
}

// Weights block: {"kind": "c" | "d", "matrix": [[...]]}.
std::pair<std::string, WeightMatrix> parse_weights(const json& config) {
  const json* w = find(config, "weights");
  if (!w) invalid("\"weights\" is required");
  std::string kind = w->value("kind", "c");
  if (kind != "c" && kind != "d") invalid("weights kind must be \"c\" or \"d\"");
  const json* m = find(*w, "matrix");
  if (!m) invalid("weights need a \"matrix\"");
  return {kind, parse_matrix(*m, "weights")};
}

std::vector<ProjectivePoint> points_or_enumerate(const json& config, std::size_t n) {
  if (const json* p = find(config, "points")) return parse_points(*p, n);
  long bound = get_int(config, "height_bound", -1);
  if (bound < 1) invalid("give \"points\" or a positive \"height_bound\"");
  return enumerate_points(n, bound);
}

TwistedHeightSpec parse_twisted(const json& config, unsigned digits) {
  TwistedHeightSpec spec;
  spec.system = parse_system(config, digits);
  auto [kind, m] = parse_weights(config);
  if (kind != "c") invalid("twisted heights take c-weights");
  spec.weights = m;
  spec.epsilon = find(config, "delta") ? get_rational(config, "delta", 0) : get_rational(config, "epsilon", 0);
  spec.Q = get_rational(config, "Q", 1);
  spec.validate();
  return spec;
}

std::uint64_t seeded(std::mt19937_64& rng, std::uint64_t range) { return rng() % range; }
long rand_in(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(seeded(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

FieldElement random_element(const FieldPtr& field, std::mt19937_64& rng, long bound) {
  std::vector<Rational> c;
  for (std::size_t t = 0; t < static_cast<std::size_t>(field->degree()); ++t) {
    Rational q(rand_in(rng, -bound, bound), rand_in(rng, 1, bound));
    q.canonicalize();
    c.push_back(q);
  }
  return FieldElement(field, c);
}

// ---------------------------------------------------------------- commands

RunResult cmd_places(const json& config, unsigned digits) {
  FieldPtr field = parse_field(config);
  const json* audit = find(config, "places_audit");
  std::vector<Integer> vs;
  if (audit && find(*audit, "primes")) {
    for (const auto& v : (*audit)["primes"]) vs.push_back(parse_v(v));
  } else if (const json* pl = find(config, "places")) {
    for (const auto& p : *pl) vs.push_back(parse_v(p.at("v")));
  } else {
    vs.push_back(0);
  }
  RunResult res;
  json places = json::array();
  bool degrees_ok = true;
  for (const auto& v : vs) {
    if (v != 0 && !is_prime(v)) invalid("place label " + v.get_str() + " is not a prime");
    auto above = places_above(field, v, digits);
    json entry;
    entry["v"] = v == 0 ? json("inf") : json(v.get_str());
    json list = json::array();
    long total = 0;
    for (const auto& w : above) {
      list.push_back(place_json(w));
      total += w.local_degree;
    }
    entry["places"] = list;
    entry["local_degree_sum"] = total;
    entry["degree_matches"] = total == static_cast<long>(field->degree());
    degrees_ok = degrees_ok && total == static_cast<long>(field->degree());
    places.push_back(entry);
  }
  res.report["places"] = places;
  res.report["degrees_ok"] = degrees_ok;

  std::vector<FieldElement> elements;
  if (audit && find(*audit, "elements")) {
    for (const auto& e : (*audit)["elements"]) elements.push_back(parse_element(field, e));
  }
  long samples = audit ? get_int(*audit, "random_samples", 0) : 0;
  std::mt19937_64 rng(static_cast<std::uint64_t>(audit ? get_int(*audit, "seed", 1) : 1));
  for (long k = 0; k < samples; ++k) {
    FieldElement a = random_element(field, rng, 50);
    if (!a.is_zero()) elements.push_back(a);
  }
  json defects = json::array();
  double worst = 0;
  for (const auto& a : elements) {
    if (a.is_zero()) invalid("product formula samples must be nonzero");
    try {
      auto d = product_formula_defect(field, a, digits);
      worst = std::max(worst, d.defect.upper_double());
      defects.push_back({{"element", a.to_string()}, {"defect_bound", d.defect.upper_double()}, {"exact", d.exact}});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnsupportedRamification) throw;
      defects.push_back({{"element", a.to_string()}, {"unsupported", e.what()}});
    }
  }
  res.report["product_formula"] = {{"samples", defects}, {"max_defect", worst}, {"pass", worst < 1e-12}};
  if (!degrees_ok || worst >= 1e-12) res.exit_code = 1;
  return res;
}

RunResult cmd_height(const json& config, unsigned digits) {
  const std::size_t n = dimension(config);
  auto pts = points_or_enumerate(config, n);
  RunResult res;
  json rows = json::array();
  std::ostringstream csv;
  csv << "point,H,h\n";
  for (const auto& x : pts) {
    Ball h = log_height(x, bits_for_digits(digits));
    rows.push_back({{"point", point_json(x)}, {"H", text(mult_height(x))}, {"h", h.mid_double()}});
    csv << '"' << x.to_string() << "\"," << text(mult_height(x)) << "," << fmt(h.mid_double()) << "\n";
  }
  res.report["rows"] = rows;
  res.csv = csv.str();
  return res;
}

RunResult cmd_weil(const json& config, unsigned digits) {
  FormSystem sys = parse_system(config, digits);
  auto pts = points_or_enumerate(config, sys.n);
  RunResult res;
  json rows = json::array();
  std::ostringstream csv;
  csv << "point,h,place,form,lambda\n";
  for (const auto& x : pts) {
    Ball h = log_height(x, sys.bits());
    json row{{"point", point_json(x)}, {"h", h.mid_double()}};
    json lambda = json::object();
    std::string which;
    if (sys.on_support(x, &which)) {
      row["support"] = which;
      rows.push_back(row);
      continue;
    }
    for (const auto& pf : sys.places) {
      json vals = json::array();
      for (std::size_t i = 0; i < pf.forms.size(); ++i) {
        Ball l = weil_hyperplane(HyperplanePresentation(pf.forms[i]), x, pf.place);
        vals.push_back(l.mid_double());
        csv << '"' << x.to_string() << "\"," << fmt(h.mid_double()) << "," << place_key(pf.place) << "," << i << ","
            << fmt(l.mid_double()) << "\n";
      }
      lambda[place_key(pf.place)] = vals;
    }
    row["lambda"] = lambda;
    rows.push_back(row);
  }
  res.report["rows"] = rows;
  res.csv = csv.str();
  return res;
}

RunResult cmd_twisted(const json& config, unsigned digits) {
  TwistedHeightSpec spec = parse_twisted(config, digits);
  Rational slack = get_rational(config, "slack", 0);
  auto pts = points_or_enumerate(config, spec.system.n);
  RunResult res;
  json rows = json::array();
  std::ostringstream csv;
  csv << "point,h,H_Q,lhs,rhs,verdict,identity_residual\n";
  double worst = 0;
  bool indeterminate = false;
  for (const auto& x : pts) {
    json row{{"point", point_json(x)}};
    std::string which;
    if (spec.system.on_support(x, &which)) {
      row["support"] = which;
      rows.push_back(row);
      continue;
    }
    Ball H = twisted_height(spec, x);
    TwistedReport r = log_twisted_report(spec, x, slack);
    worst = std::max(worst, r.identity_residual);
    indeterminate = indeterminate || r.verdict == Verdict::Indeterminate;
    row["H_Q"] = H.mid_double();
    row["h"] = r.h.mid_double();
    row["lhs"] = r.lhs.mid_double();
    row["rhs"] = r.rhs.mid_double();
    row["minus_log_H_Q"] = r.minus_log_twisted.mid_double();
    row["verdict"] = to_string(r.verdict);
    row["identity_residual"] = r.identity_residual;
    rows.push_back(row);
    csv << '"' << x.to_string() << "\"," << fmt(r.h.mid_double()) << "," << fmt(H.mid_double()) << ","
        << fmt(r.lhs.mid_double()) << "," << fmt(r.rhs.mid_double()) << "," << to_string(r.verdict) << ","
        << fmt(r.identity_residual) << "\n";
  }
  res.report["Q"] = text(spec.Q);
  res.report["delta"] = text(spec.epsilon);
  res.report["rows"] = rows;
  res.report["max_identity_residual"] = worst;
  res.csv = csv.str();
  res.exit_code = indeterminate ? 2 : 0;
  return res;
}

RunResult cmd_sweep(const json& config, unsigned digits) {
  TwistedHeightSpec spec = parse_twisted(config, digits);
  const json* grid = find(config, "Q_grid");
  if (!grid || !grid->is_array()) invalid("sweep needs a \"Q_grid\" array");
  std::vector<Rational> Qs;
  for (const auto& q : *grid) Qs.push_back(parse_rational_value(q, "Q_grid"));
  auto pts = points_or_enumerate(config, spec.system.n);
  std::vector<ProjectivePoint> usable;
  json support = json::array();
  for (const auto& x : pts) {
    if (spec.system.on_support(x)) support.push_back(point_json(x));
    else usable.push_back(x);
  }
  SweepResult sw = q_sweep(spec, Qs, usable);
  RunResult res;
  json entries = json::array();
  bool indeterminate = false;
  for (const auto& e : sw.entries) {
    entries.push_back({{"Q", text(e.Q)}, {"solutions", points_json(e.solutions)},
                       {"indeterminate", points_json(e.indeterminate)}});
    indeterminate = indeterminate || !e.indeterminate.empty();
  }
  res.report["entries"] = entries;
  json flips = json::array();
  for (std::size_t j = 0; j < usable.size(); ++j) {
    if (sw.verdict_changes[j]) flips.push_back({{"point", point_json(usable[j])}, {"changes", sw.verdict_changes[j]}});
  }
  res.report["verdict_changes"] = flips;
  res.report["stabilization_Q"] = sw.stabilization_Q ? json(text(*sw.stabilization_Q)) : json(nullptr);
  res.report["stabilization_note"] = "empirical: the solution set is constant on the grid from this Q on";
  res.report["support"] = support;
  res.exit_code = indeterminate ? 2 : 0;
  return res;
}

std::string lambda_csv(const FormSystem& sys, const std::vector<ProjectivePoint>& pts) {
  std::ostringstream csv;
  csv << "point,h,place,form,lambda\n";
  for (const auto& x : pts) {
    Ball h = log_height(x, sys.bits());
    for (const auto& pf : sys.places) {
      for (std::size_t i = 0; i < pf.forms.size(); ++i) {
        Ball l = weil_hyperplane(HyperplanePresentation(pf.forms[i]), x, pf.place);
        csv << '"' << x.to_string() << "\"," << fmt(h.mid_double()) << "," << place_key(pf.place) << "," << i << ","
            << fmt(l.mid_double()) << "\n";
      }
    }
  }
  return csv.str();
}

RunResult cmd_solve(const json& config, unsigned digits, unsigned jobs) {
  std::string mode = config.value("mode", "schmidt");
  FilterParams params = parse_filter(config, mode, digits);
  SolutionSet set;
  if (find(config, "points")) {
    set = filter_solutions(params, parse_points(config["points"], params.system().n));
  } else {
    long bound = get_int(config, "height_bound", -1);
    if (bound < 1) invalid("give \"points\" or a positive \"height_bound\"");
    set = solve_bounded(params, bound, jobs);
  }
  RunResult res;
  json& r = res.report;
  r["mode"] = mode;
  r["spec_digest"] = set.spec_digest;
  r["epsilon"] = text(params.spec.epsilon);
  r["examined"] = set.examined;
  r["escalations"] = set.escalations;
  r["solutions"] = points_json(set.points);
  r["indeterminate"] = points_json(set.indeterminate);
  r["support"] = points_json(set.support);
  if (find(config, "height_bound")) r["height_bound"] = get_int(config, "height_bound", 0);
  if (mode == "fw") {
    WeightSystem d{WeightKind::D, params.system().n, params.spec.weights};
    try {
      FwResult fw = fw_weights(d);
      r["fw_reduction"] = {{"epsilon", text(fw.epsilon)}, {"c", matrix_json(fw.c.entries)}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ThresholdNotMet) throw;
      r["fw_reduction"] = {{"threshold_met", false}, {"message", e.what()}};
    }
  }
  const json* cover_cfg = find(config, "cover");
  std::string cover_mode = cover_cfg ? cover_cfg->value("mode", "exact") : "exact";
  if (cover_mode != "exact" && cover_mode != "greedy" && cover_mode != "none") {
    invalid("cover mode must be exact, greedy or none");
  }
  if (!set.points.empty() && cover_mode != "none") {
    long max_sub = cover_cfg ? get_int(*cover_cfg, "max_subspaces", 0) : 0;
    if (max_sub < 0) invalid("max_subspaces must be nonnegative");
    SubspaceCover cover = subspace_cover(set.points, cover_mode == "exact" ? CoverMode::Exact : CoverMode::Greedy,
                                         static_cast<std::size_t>(max_sub));
    r["cover"] = cover_json(cover);
    DensityReport d = density_report(set.points, cover);
    r["density"] = {{"points", d.point_count},
                    {"cover_size", d.cover_size},
                    {"max_points_per_subspace", d.max_points_per_subspace},
                    {"economy_ratio", d.economy_ratio},
                    {"verdict", d.verdict_text}};
  }
  res.csv = lambda_csv(params.system(), set.points);
  res.exit_code = set.indeterminate.empty() ? 0 : 2;
  return res;
}

// Rational enclosure endpoints on a 2^-40 grid.
Rational rational_floor(const Real& r) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), r.get());
  Integer scale = Integer(1) << 40;
  return Rational(floor(q * scale), scale);
}

Rational rational_ceil(const Real& r) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), r.get());
  Integer scale = Integer(1) << 40;
  Rational out(ceil(q * scale), scale);
  out.canonicalize();
  return out;
}

RunResult cmd_scatter(const json& config, unsigned digits) {
  const std::size_t n = dimension(config);
  Rational eps = get_rational(config, "epsilon", 0);
  if (eps <= 0) invalid("scatter needs a positive \"epsilon\"");
  Rational slack = get_rational(config, "slack", 0);
  const json* sc = find(config, "scatter");
  json empty = json::object();
  const json& scfg = sc ? *sc : empty;

  struct Profile {
    json label;
    WeightMatrix lambda;
    Rational h;
  };
  std::vector<Profile> profiles;
  json skipped = json::array();
  std::size_t place_count = 0;
  if (const json* given = find(scfg, "profiles")) {
    for (std::size_t k = 0; k < given->size(); ++k) {
      const json& p = (*given)[k];
      Profile prof;
      prof.label = p.contains("point") ? p["point"] : json(k);
      prof.lambda = parse_matrix(p.at("lambda"), "profile lambda");
      prof.h = parse_rational_value(p.at("h"), "profile h");
      if (place_count == 0) place_count = prof.lambda.size();
      if (prof.lambda.size() != place_count) invalid("profiles disagree on the number of places");
      profiles.push_back(std::move(prof));
    }
  } else {
    FilterParams params = parse_filter(config, "schmidt", digits);
    SolutionSet set = find(config, "points") ? filter_solutions(params, parse_points(config["points"], n))
                                             : solve_bounded(params, get_int(config, "height_bound", 0), 1);
    place_count = params.system().places.size();
    for (const auto& x : set.points) {
      Profile prof;
      prof.label = point_json(x);
      prof.h = rational_ceil(log_height(x, params.system().bits()).upper());
      bool negative = false;
      for (const auto& pf : params.system().places) {
        std::vector<Rational> row;
        for (const auto& f : pf.forms) {
          Ball l = weil_hyperplane(HyperplanePresentation(f), x, pf.place);
          Rational lo = rational_floor(l.lower());
          negative = negative || lo < 0;
          row.push_back(lo);
        }
        prof.lambda.push_back(std::move(row));
      }
      if (negative) {
        skipped.push_back({{"member", prof.label}, {"reason", "negative Weil value"}});
        continue;
      }
      profiles.push_back(std::move(prof));
    }
  }
  std::vector<Rational> d_v;
  if (const json* dv = find(scfg, "d_v")) {
    for (const auto& x : *dv) d_v.push_back(parse_rational_value(x, "d_v"));
  } else {
    d_v.assign(std::max<std::size_t>(place_count, 1), Rational(1, static_cast<long>(std::max<std::size_t>(place_count, 1))));
  }

  struct Group {
    ScatterAssignment a;
    json members = json::array();
    bool verified = true;
  };
  std::map<std::string, Group> groups;
  json unassigned = json::array();
  for (const auto& p : profiles) {
    for (const auto& row : p.lambda)
      if (row.size() != n + 1) invalid("profile rows need n+1 entries");
    auto a = scatter_profile(p.lambda, p.h, n, eps, slack, d_v);
    if (!a) {
      unassigned.push_back(p.label);
      continue;
    }
    std::ostringstream key;
    key << (a->cls.kind == ClassKind::TypeI ? 0 : 1) << "|" << std::setw(6) << a->cls.anchor << "|";
    for (const auto& t : a->tuple) key << text(t) << ",";
    auto& g = groups[key.str()];
    if (g.members.empty()) g.a = *a;
    g.members.push_back(p.label);
    g.verified = g.verified && verify_scatter(*a, p.lambda, p.h, slack);
  }
  RunResult res;
  json classes = json::array();
  bool all_ok = true;
  for (const auto& [key, g] : groups) {
    json c{{"kind", to_string(g.a.cls.kind)},
           {"tuple", rationals_json(g.a.tuple)},
           {"e", matrix_json(g.a.e.entries)},
           {"sum_e", text(g.a.e.total())},
           {"members", g.members},
           {"inequalities_verified", g.verified}};
    c["anchor"] = g.a.cls.kind == ClassKind::TypeI ? json(g.a.cls.anchor) : json(nullptr);
    all_ok = all_ok && g.verified;
    classes.push_back(c);
  }
  res.report["classes"] = classes;
  res.report["not_a_solution"] = unassigned;
  res.report["skipped"] = skipped;
  res.report["d_v"] = rationals_json(d_v);
  res.report["sum_check_threshold"] = text(sum_check_threshold(n));
  res.report["c_type_I"] = text(scatter_c(ClassKind::TypeI, n, eps));
  res.report["c_type_II"] = text(scatter_c(ClassKind::TypeII, n, eps));
  if (!all_ok) res.exit_code = 1;
  return res;
}

RunResult cmd_ruvojta(const json& config) {
  const json* rv = find(config, "ruvojta");
  if (!rv) invalid("ruvojta needs a \"ruvojta\" block");
  const long n = get_int(*rv, "n", get_int(config, "n", -1));
  if (n < 1) invalid("ruvojta needs n >= 1");
  const long m_max = get_int(*rv, "m_max", 50);
  if (m_max < 1) invalid("m_max must be at least 1");
  RunResult res;
  json& r = res.report;
  GammaBeta gb = gamma_beta(n, m_max);
  json table = json::array();
  for (const auto& row : gb.table) {
    table.push_back({{"m", row.m}, {"m_h0", row.numerator.get_str()}, {"sum_h0", row.denominator.get_str()},
                     {"ratio", text(row.ratio)}});
  }
  r["gamma_beta"] = {{"table", table}, {"gamma", text(gb.gamma)}, {"beta_sup", text(gb.feasible_beta_sup)}};

  const long m = get_int(*rv, "m", -1);
  std::vector<unsigned> sigma;
  if (const json* s = find(*rv, "sigma")) {
    for (const auto& i : *s) {
      if (!i.is_number_integer() || i.get<long>() < 0) invalid("sigma entries must be coordinate indices");
      sigma.push_back(i.get<unsigned>());
    }
  }
  std::vector<Rational> betas;
  if (const json* b = find(*rv, "betas")) {
    for (const auto& x : *b) betas.push_back(parse_rational_value(x, "betas"));
  }
  const long b = get_int(*rv, "b", 0);
  std::vector<std::vector<Integer>> tuples;
  if (const json* a = find(*rv, "a")) {
    for (const auto& t : *a) {
      std::vector<Integer> tup;
      for (const auto& x : t) {
        Rational q = parse_rational_value(x, "a");
        if (q.get_den() != 1) invalid("a entries must be integers");
        tup.push_back(q.get_num());
      }
      tuples.push_back(tup);
    }
  } else if (!betas.empty() && b > 0) {
    if (betas.size() != sigma.size()) invalid("betas must list one value per entry of sigma");
    tuples = delta_sigma(betas, b);
    r["delta_sigma"] = json::array();
    for (const auto& t : tuples) r["delta_sigma"].push_back(integers_json(t));
  }
  if (m >= 0 && !sigma.empty()) {
    json profiles = json::array();
    bool allow_full = rv->value("allow_full_sigma", false);
    for (const auto& t : tuples) {
      FiltrationProfile p = filtration_dims(n, m, sigma, t, allow_full);
      profiles.push_back({{"a", integers_json(t)},
                          {"jumps", integers_json(p.jump_values)},
                          {"dims", integers_json(p.dims)},
                          {"h0", p.h0.get_str()},
                          {"double_counting", p.double_counting_holds()}});
    }
    r["profiles"] = profiles;
  }
  if (find(*rv, "epsilon1") && find(*rv, "epsilon") && !betas.empty() && b > 0 && m >= 1) {
    FeasibilityCheck f = ru_vojta_feasible(n, m, betas, b, get_rational(*rv, "epsilon1", 0), get_rational(*rv, "epsilon", 0));
    r["feasibility"] = {{"lhs", text(f.lhs)}, {"rhs", text(f.rhs)}, {"betas_below_sup", f.betas_below_sup},
                        {"holds", f.holds}};
  }
  return res;
}

RunResult cmd_audit(const json& config, unsigned digits) {
  const json* au = find(config, "audit");
  json empty = json::object();
  const json& cfg = au ? *au : empty;
  RunResult res;
  json& r = res.report;
  bool pass = true;
  const Precision bits = bits_for_digits(digits);

  // Twisted-height identity over random weights and points.
  if (const json* id = find(cfg, "identity")) {
    FieldPtr field = parse_field(config);
    const std::size_t n = dimension(config);
    std::mt19937_64 rng(static_cast<std::uint64_t>(get_int(*id, "seed", 1)));
    const long specs = get_int(*id, "specs", 10);
    const long per_spec = get_int(*id, "points", 10);
    const long hb = get_int(*id, "height_bound", 50);
    std::vector<Rational> Qs;
    if (const json* q = find(*id, "Q_values")) {
      for (const auto& x : *q) Qs.push_back(parse_rational_value(x, "Q_values"));
    } else {
      Qs = {1, 2, 10, 1000};
    }
    double worst = 0;
    long checked = 0;
    FormSystem base = parse_system(config, digits);
    for (long s = 0; s < specs; ++s) {
      TwistedHeightSpec spec;
      spec.system = base;
      spec.epsilon = Rational(rand_in(rng, 1, 20), 10);
      for (auto& pf : spec.system.places) {
        if (s > 0) {
          // Fresh random independent forms; the configured system is used as is once.
          while (true) {
            std::vector<LinearForm> forms;
            for (std::size_t i = 0; i <= n; ++i) {
              std::vector<FieldElement> c;
              for (std::size_t j = 0; j <= n; ++j) c.push_back(random_element(field, rng, 3));
              forms.emplace_back(field, c);
            }
            pf.forms = forms;
            try {
              spec.system.validate();
              break;
            } catch (const Error&) {
            }
          }
        }
        std::vector<Rational> row(n + 1);
        Rational sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
          row[i] = Rational(rand_in(rng, -8, 8), rand_in(rng, 1, 4));
          row[i].canonicalize();
          sum += row[i];
        }
        row[n] = -sum;
        spec.weights.push_back(row);
      }
      long got = 0, attempts = 0;
      while (got < per_spec && attempts < per_spec * 50) {
        ++attempts;
        std::vector<std::int64_t> c(n + 1);
        for (auto& v : c) v = rand_in(rng, -hb, hb);
        if (std::all_of(c.begin(), c.end(), [](std::int64_t v) { return v == 0; })) continue;
        ProjectivePoint x(c);
        if (spec.system.on_support(x)) continue;
        ++got;
        for (const auto& Q : Qs) {
          spec.Q = Q;
          TwistedReport rep = log_twisted_report(spec, x);
          worst = std::max(worst, rep.identity_residual);
          ++checked;
        }
      }
    }
    const bool ok = worst <= 1e-9;
    r["identity"] = {{"checks", checked}, {"max_residual", worst}, {"tolerance", 1e-9}, {"pass", ok}};
    pass = pass && ok;
  }

  // h(x) against the sum over all places of Q of the x_0-presentation Weil function.
  if (const json* hw = find(cfg, "height_weil")) {
    const long bound = get_int(*hw, "height_bound", 20);
    const long n = get_int(*hw, "n", 1);
    FieldPtr Q = NumberField::rationals();
    Place inf = places_above(Q, 0, digits)[0];
    std::map<Integer, Place> finite;
    double worst = 0;
    long checked = 0;
    HyperplanePresentation x0(LinearForm::coordinate(Q, n, 0));
    for (const auto& x : enumerate_points(n, bound)) {
      if (x[0] == 0) continue;
      Ball sum = weil_hyperplane(x0, x, inf);
      for (const auto& [p, e] : factorize(Integer(static_cast<long>(std::abs(x[0]))))) {
        (void)e;
        auto it = finite.find(p);
        if (it == finite.end()) it = finite.emplace(p, places_above(Q, p, digits)[0]).first;
        sum += weil_hyperplane(x0, x, it->second);
      }
      Ball diff = abs(sum - log_height(x, bits));
      worst = std::max(worst, diff.upper_double());
      ++checked;
    }
    const bool ok = worst <= 1e-10;
    r["height_weil"] = {{"points", checked}, {"max_difference", worst}, {"tolerance", 1e-10}, {"pass", ok}};
    pass = pass && ok;
  }

  if (const json* pf = find(cfg, "product_formula")) {
    FieldPtr field = parse_field(config);
    std::mt19937_64 rng(static_cast<std::uint64_t>(get_int(*pf, "seed", 1)));
    const long samples = get_int(*pf, "samples", 20);
    double worst = 0;
    long checked = 0;
    for (long k = 0; k < samples; ++k) {
      FieldElement a = random_element(field, rng, 100);
      if (a.is_zero()) continue;
      worst = std::max(worst, product_formula_defect(field, a, digits).defect.upper_double());
      ++checked;
    }
    const bool ok = worst < 1e-12;
    r["product_formula"] = {{"samples", checked}, {"max_defect", worst}, {"tolerance", 1e-12}, {"pass", ok}};
    pass = pass && ok;
  }
  r["pass"] = pass;
  if (!pass) res.exit_code = 1;
  return res;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"places", "height", "weil",    "twisted", "sweep",
                                              "solve",  "scatter", "ruvojta", "audit"};
  return names;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    invalid(std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

Rational parse_rational_value(const json& value, const std::string& what) {
  try {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long>());
  } catch (const Error&) {
  }
  invalid(what + ": expected an exact rational such as \"3/4\", got " + value.dump());
}

FieldPtr parse_field(const json& config) {
  const json* f = find(config, "field");
  if (!f) return NumberField::rationals();
  const json* mp = find(*f, "min_poly");
  if (!mp || !mp->is_array()) invalid("field needs a \"min_poly\" integer array, constant term first");
  poly::ZPoly p;
  for (const auto& c : *mp) {
    if (c.is_number_integer()) p.push_back(Integer(c.get<long>()));
    else if (c.is_string()) p.push_back(Integer(c.get<std::string>()));
    else invalid("min_poly coefficients must be integers");
  }
  try {
    return NumberField::create(p);
  } catch (const Error& e) {
    invalid(std::string("field: ") + e.what());
  }
}

FieldElement parse_element(const FieldPtr& field, const json& value) {
  if (value.is_array()) {
    if (value.size() > static_cast<std::size_t>(field->degree())) invalid("field element has more coordinates than the field degree");
    std::vector<Rational> c(field->degree(), 0);
    for (std::size_t t = 0; t < value.size(); ++t) c[t] = parse_rational_value(value[t], "field element");
    return FieldElement(field, c);
  }
  return FieldElement::from_rational(field, parse_rational_value(value, "field element"));
}

LinearForm parse_form(const FieldPtr& field, std::size_t n, const json& value) {
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s.size() >= 2 && s[0] == 'x') {
      std::size_t i = std::stoul(s.substr(1));
      if (i > n) invalid("coordinate form " + s + " exceeds n");
      return LinearForm::coordinate(field, n, i);
    }
    invalid("form must be an array of n+1 coefficients or \"x<i>\"");
  }
  if (!value.is_array() || value.size() != n + 1) invalid("form must have n+1 = " + std::to_string(n + 1) + " coefficients");
  std::vector<FieldElement> c;
  for (const auto& a : value) c.push_back(parse_element(field, a));
  return LinearForm(field, c);
}

FormSystem parse_system(const json& config, unsigned digits) {
  FormSystem sys;
  sys.field = parse_field(config);
  sys.n = dimension(config);
  const json* places = find(config, "places");
  if (!places || !places->is_array() || places->empty()) invalid("\"places\" must list at least one place");
  for (const auto& p : *places) {
    if (!p.contains("v")) invalid("each place needs \"v\"");
    PlaceForms pf;
    pf.place = pick_place(sys.field, parse_v(p["v"]), get_int(p, "w_index", 0), digits);
    const json* forms = find(p, "forms");
    if (!forms || !forms->is_array()) invalid("place " + pf.place.v_label() + " needs a \"forms\" array");
    for (const auto& f : *forms) pf.forms.push_back(parse_form(sys.field, sys.n, f));
    sys.places.push_back(std::move(pf));
  }
  sys.validate();
  return sys;
}

std::vector<ProjectivePoint> parse_points(const json& value, std::size_t n) {
  if (!value.is_array()) invalid("\"points\" must be an array of integer arrays");
  std::vector<ProjectivePoint> out;
  for (const auto& p : value) {
    if (!p.is_array() || p.size() != n + 1) invalid("each point needs n+1 = " + std::to_string(n + 1) + " coordinates");
    std::vector<std::int64_t> c;
    for (const auto& v : p) {
      if (!v.is_number_integer()) invalid("point coordinates must be integers");
      c.push_back(v.get<std::int64_t>());
    }
    try {
      out.emplace_back(c);
    } catch (const Error& e) {
      invalid(std::string("point: ") + e.what());
    }
  }
  sort_canonical(out);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FilterParams parse_filter(const json& config, const std::string& mode, unsigned digits) {
  FilterParams p;
  p.slack = get_rational(config, "slack", 0);
  p.spec.system = parse_system(config, digits);
  p.spec.epsilon = get_rational(config, "epsilon", 0);
  p.spec.Q = get_rational(config, "Q", 1);
  if (mode == "schmidt") {
    p.kind = FilterKind::Schmidt;
  } else if (mode == "fw") {
    p.kind = FilterKind::FW;
    auto [kind, m] = parse_weights(config);
    if (kind != "d") invalid("fw mode takes d-weights");
    p.spec.weights = m;
  } else if (mode == "parametric") {
    p.kind = FilterKind::Parametric;
    auto [kind, m] = parse_weights(config);
    if (kind == "d") {
      FwResult fw = fw_weights(WeightSystem{WeightKind::D, p.spec.system.n, m});
      p.spec.weights = fw.c.entries;
      if (!find(config, "epsilon") && !find(config, "delta")) p.spec.epsilon = fw.epsilon;
    } else {
      p.spec.weights = m;
    }
    if (find(config, "delta")) p.spec.epsilon = get_rational(config, "delta", 0);
  } else {
    invalid("mode must be schmidt, fw or parametric");
  }
  p.validate();
  return p;
}

json point_json(const ProjectivePoint& x) { return json(x.coords()); }

json place_json(const Place& w) {
  json j{{"v", w.archimedean() ? json("inf") : json(w.prime.get_str())},
         {"w_index", w.index},
         {"e", w.e},
         {"f", w.f},
         {"local_degree", w.local_degree},
         {"describe", w.describe()}};
  if (w.archimedean()) j["real"] = w.real;
  return j;
}

json cover_json(const SubspaceCover& cover) {
  json subs = json::array();
  for (const auto& s : cover.subspaces) {
    subs.push_back({{"equations", matrix_json(s.equations)}, {"projective_dim", s.projective_dim()}});
  }
  return {{"mode", to_string(cover.mode)},
          {"fell_back_to_greedy", cover.fell_back},
          {"subspaces", subs},
          {"assignment", cover.assignment}};
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

RunResult run_experiment(const std::string& command, const json& config, const RunOptions& options) {
  if (!config.is_object()) invalid("config must be a JSON object");
  const unsigned digits = digits_for(config, options);
  const unsigned jobs = std::max(1u, options.jobs);
  RunResult res;
  if (command == "places") res = cmd_places(config, digits);
  else if (command == "height") res = cmd_height(config, digits);
  else if (command == "weil") res = cmd_weil(config, digits);
  else if (command == "twisted") res = cmd_twisted(config, digits);
  else if (command == "sweep") res = cmd_sweep(config, digits);
  else if (command == "solve") res = cmd_solve(config, digits, jobs);
  else if (command == "scatter") res = cmd_scatter(config, digits);
  else if (command == "ruvojta") res = cmd_ruvojta(config);
  else if (command == "audit") res = cmd_audit(config, digits);
  else throw Error(ErrorCode::BadParameter, "unknown command \"" + command + "\"");
  res.report["schema"] = kSchemaVersion;
  res.report["command"] = command;
  res.report["name"] = config.value("name", "");
  res.report["config_digest"] = sha256_hex(config.dump());
  res.report["precision_digits"] = digits;
  res.report["slack"] = text(get_rational(config, "slack", 0));
  return res;
}

}  // namespace heightlab::harness
