#include "heightlab/scattering.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <map>
#include <numeric>

#include "heightlab/error.hpp"

namespace heightlab {

const char* to_string(WeightKind k) noexcept {
  switch (k) {
    case WeightKind::D: return "d-weights";
    case WeightKind::C: return "c-weights";
    case WeightKind::E: return "e-weights";
  }
  return "?";
}

const char* to_string(ClassKind k) noexcept {
  switch (k) {
    case ClassKind::TypeI: return "TypeI";
    case ClassKind::TypeII: return "TypeII";
    case ClassKind::NotASolution: return "NotASolution";
  }
  return "?";
}

Rational WeightSystem::total() const {
  Rational sum = 0;
  for (const auto& row : entries)
    for (const auto& x : row) sum += x;
  return sum;
}

void WeightSystem::check_shape() const {
  if (entries.empty()) throw Error(ErrorCode::BadParameter, "weight system without places");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].size() != n + 1) {
      throw Error(ErrorCode::BadParameter, "weights row " + std::to_string(k) + " has " +
                                               std::to_string(entries[k].size()) + " entries, expected " +
                                               std::to_string(n + 1));
    }
  }
}

FwResult fw_weights(const WeightSystem& d) {
  d.check_shape();
  const Rational np1(static_cast<long>(d.n + 1));
  Rational total = d.total();
  if (total <= np1) {
    throw Error(ErrorCode::ThresholdNotMet, "sum of d-weights " + to_string(total) + " does not exceed n+1 = " +
                                                to_string(np1));
  }
  FwResult out;
  out.epsilon = total / np1 - 1;
  out.c.kind = WeightKind::C;
  out.c.n = d.n;
  for (const auto& row : d.entries) {
    Rational row_sum = std::accumulate(row.begin(), row.end(), Rational(0));
    std::vector<Rational> c;
    for (const auto& x : row) c.push_back(row_sum / np1 - x);
    out.c.entries.push_back(std::move(c));
  }
  return out;
}

bool SimplexCover::contains(const std::vector<Rational>& a) const {
  if (a.size() != index_set_size) return false;
  Rational sum = 0;
  for (const auto& x : a) {
    if (x < 0) return false;
    Rational k = x / delta;
    if (k.get_den() != 1) return false;
    sum += x;
  }
  return sum == c;
}

SimplexCover simplex_cover(const Rational& c, std::size_t index_set_size, unsigned refinement,
                           std::size_t materialize_cap) {
  if (c <= 0 || c >= 1) throw Error(ErrorCode::BadParameter, "simplex level c must lie in (0,1)");
  if (index_set_size == 0) throw Error(ErrorCode::BadParameter, "empty index set");
  if (refinement == 0) throw Error(ErrorCode::BadParameter, "refinement must be positive");
  SimplexCover out;
  out.c = c;
  out.index_set_size = index_set_size;
  Rational ratio = c * static_cast<long>(index_set_size) / (1 - c);
  out.steps = ceil(ratio) * refinement;
  if (out.steps == 0) out.steps = 1;
  out.delta = c / Rational(out.steps);
  out.count = binomial(out.steps.get_ui() + index_set_size - 1, index_set_size - 1);
  if (out.count <= materialize_cap) {
    out.materialized = true;
    const unsigned long m = out.steps.get_ui();
    std::vector<unsigned long> k(index_set_size, 0);
    // Compositions of m into |I| parts, lexicographically descending in the first part.
    std::function<void(std::size_t, unsigned long)> rec = [&](std::size_t pos, unsigned long left) {
      if (pos + 1 == index_set_size) {
        k[pos] = left;
        std::vector<Rational> a;
        for (auto v : k) a.push_back(out.delta * static_cast<long>(v));
        out.points.push_back(std::move(a));
        return;
      }
      for (unsigned long v = left + 1; v-- > 0;) {
        k[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, m);
  }
  return out;
}

std::vector<Rational> simplex_select(const std::vector<Rational>& b, const SimplexCover& cover) {
  if (b.size() != cover.index_set_size) throw Error(ErrorCode::BadParameter, "tuple size does not match the cover");
  Rational total = 0;
  for (const auto& x : b) {
    if (x < 0) throw Error(ErrorCode::BadParameter, "simplex_select needs a nonnegative tuple");
    total += x;
  }
  if (total == 0) throw Error(ErrorCode::BadParameter, "simplex_select needs a nonzero tuple");
  std::vector<Rational> a(b.size());
  Rational sum = 0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    a[j] = cover.delta * Rational(floor(b[j] / (total * cover.delta)));
    sum += a[j];
  }
  for (std::size_t j = a.size(); j-- > 0 && sum > cover.c;) {
    while (a[j] > 0 && sum > cover.c) {
      a[j] -= cover.delta;
      sum -= cover.delta;
    }
  }
  return a;
}

Classification classify_solution(const WeightMatrix& lambda, const Rational& h, std::size_t n,
                                 const Rational& epsilon, const Rational& slack) {
  Rational target = (Rational(static_cast<long>(n + 1)) + epsilon) * h - slack;
  Classification out;
  for (std::size_t i = 0; i <= n; ++i) {
    Rational column = 0;
    for (const auto& row : lambda) column += row.at(i);
    if (column >= target) {
      out.kind = ClassKind::TypeI;
      out.anchor = i;
      return out;
    }
  }
  Rational total = 0;
  for (const auto& row : lambda)
    for (const auto& x : row) total += x;
  out.kind = total >= target ? ClassKind::TypeII : ClassKind::NotASolution;
  return out;
}

Rational scatter_c(ClassKind kind, std::size_t n, const Rational& epsilon) {
  const Rational np1(static_cast<long>(n + 1));
  if (kind == ClassKind::TypeI) return 1 - epsilon / (4 * np1);
  if (kind == ClassKind::TypeII) return 1 - epsilon / (4 * np1 * np1);
  throw Error(ErrorCode::BadParameter, "no simplex level for a non-solution");
}

Rational sum_check_threshold(std::size_t n) { return Rational(3 * static_cast<long>(n + 1)); }

WeightSystem scatter_weights(ClassKind kind, std::size_t n, const Rational& epsilon,
                             const std::vector<Rational>& tuple, const std::vector<Rational>& d_v,
                             std::size_t anchor) {
  if (epsilon <= 0) throw Error(ErrorCode::BadParameter, "epsilon must be positive");
  const Rational np1(static_cast<long>(n + 1));
  const Rational level = np1 + epsilon;
  const Rational c = scatter_c(kind, n, epsilon);
  if (c <= 0) {
    throw Error(ErrorCode::SumCheckFailed, "epsilon " + to_string(epsilon) + " leaves no simplex level c > 0");
  }
  Rational tuple_sum = std::accumulate(tuple.begin(), tuple.end(), Rational(0));
  if (tuple_sum != c) {
    throw Error(ErrorCode::BadParameter, "simplex tuple sums to " + to_string(tuple_sum) + ", expected c = " +
                                             to_string(c));
  }
  WeightSystem e;
  e.kind = WeightKind::E;
  e.n = n;
  if (kind == ClassKind::TypeI) {
    if (anchor > n) throw Error(ErrorCode::BadParameter, "anchor index out of range");
    for (const auto& a_v : tuple) {
      std::vector<Rational> row(n + 1, Rational(0));
      row[anchor] = a_v * level;
      e.entries.push_back(std::move(row));
    }
  } else {
    if (tuple.size() % (n + 1) != 0 || tuple.size() / (n + 1) != d_v.size()) {
      throw Error(ErrorCode::BadParameter, "Type II tuple must have |S|(n+1) entries matching d_v");
    }
    Rational d_sum = 0;
    for (const auto& d : d_v) {
      if (d < 0) throw Error(ErrorCode::BadParameter, "d_v entries must be nonnegative");
      d_sum += d;
    }
    if (d_sum != 1) throw Error(ErrorCode::BadParameter, "d_v must sum to 1");
    for (std::size_t v = 0; v < d_v.size(); ++v) {
      Rational b_v = d_v[v] * Rational(static_cast<long>(n)) * level / np1;
      std::vector<Rational> row;
      for (std::size_t i = 0; i <= n; ++i) row.push_back(tuple[v * (n + 1) + i] * np1 * level - b_v);
      e.entries.push_back(std::move(row));
    }
  }
  Rational total = e.total();
  if (total <= np1) {
    throw Error(ErrorCode::SumCheckFailed, "sum of e-weights " + to_string(total) + " does not exceed n+1 for epsilon " +
                                               to_string(epsilon));
  }
  return e;
}

std::optional<ScatterAssignment> scatter_profile(const WeightMatrix& lambda, const Rational& h, std::size_t n,
                                                 const Rational& epsilon, const Rational& slack,
                                                 const std::vector<Rational>& d_v) {
  for (const auto& row : lambda)
    for (const auto& x : row)
      if (x < 0) throw Error(ErrorCode::BadParameter, "λ-profile has a negative entry; shift it first");
  Classification cls = classify_solution(lambda, h, n, epsilon, slack);
  if (cls.kind == ClassKind::NotASolution) return std::nullopt;
  ScatterAssignment out;
  out.cls = cls;
  const Rational c = scatter_c(cls.kind, n, epsilon);
  std::vector<Rational> b;
  if (cls.kind == ClassKind::TypeI) {
    for (const auto& row : lambda) b.push_back(row[cls.anchor]);
  } else {
    const Rational level = Rational(static_cast<long>(n + 1)) + epsilon;
    for (std::size_t v = 0; v < lambda.size(); ++v) {
      Rational b_v = d_v.at(v) * Rational(static_cast<long>(n)) * level / Rational(static_cast<long>(n + 1));
      for (const auto& x : lambda[v]) b.push_back(x + b_v * h);
    }
  }
  SimplexCover cover = simplex_cover(c, b.size(), 1, 0);
  bool all_zero = std::all_of(b.begin(), b.end(), [](const Rational& x) { return x == 0; });
  if (all_zero) {
    // Only reachable with h = 0 and slack absorbing the inequality.
    b.assign(b.size(), Rational(1));
  }
  out.tuple = simplex_select(b, cover);
  out.e = scatter_weights(cls.kind, n, epsilon, out.tuple, d_v, cls.anchor);
  return out;
}

bool verify_scatter(const ScatterAssignment& a, const WeightMatrix& lambda, const Rational& h,
                    const Rational& slack) {
  for (std::size_t v = 0; v < lambda.size(); ++v) {
    for (std::size_t i = 0; i < lambda[v].size(); ++i) {
      if (a.cls.kind == ClassKind::TypeI && i != a.cls.anchor) continue;
      if (lambda[v][i] < a.e.entries[v][i] * h - slack) return false;
    }
  }
  return true;
}

std::vector<ScatterClass> assemble_classes(const std::vector<ProjectivePoint>& points,
                                           const std::vector<ScatterAssignment>& assignments) {
  if (points.size() != assignments.size()) throw Error(ErrorCode::BadParameter, "points and assignments differ in size");
  using Key = std::tuple<int, std::size_t, std::vector<Rational>>;
  std::map<Key, ScatterClass> classes;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto& a = assignments[j];
    Key key{static_cast<int>(a.cls.kind), a.cls.kind == ClassKind::TypeI ? a.cls.anchor : 0, a.tuple};
    auto it = classes.find(key);
    if (it == classes.end()) {
      ScatterClass c;
      c.kind = a.cls.kind;
      c.anchor = std::get<1>(key);
      c.tuple = a.tuple;
      c.e = a.e;
      it = classes.emplace(key, std::move(c)).first;
    }
    it->second.members.push_back(points[j]);
  }
  std::vector<ScatterClass> out;
  for (auto& [key, c] : classes) {
    sort_canonical(c.members);
    out.push_back(std::move(c));
  }
  return out;
}

GenPosReduction gen_pos_reduce(const std::vector<std::vector<LinearForm>>& forms_per_place,
                               const WeightMatrix& lambda, std::size_t n) {
  if (forms_per_place.size() != lambda.size()) {
    throw Error(ErrorCode::BadParameter, "λ rows do not match the places");
  }
  GenPosReduction out;
  out.residual = 0;
  for (std::size_t v = 0; v < forms_per_place.size(); ++v) {
    const auto& forms = forms_per_place[v];
    const std::size_t count = forms.size();
    if (count < n + 1 || lambda[v].size() != count) {
      throw Error(ErrorCode::BadParameter, "place " + std::to_string(v) + " needs at least n+1 forms and one λ per form");
    }
    // Every (n+1)-subset must be independent.
    std::vector<std::size_t> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<std::vector<FieldElement>> m;
      for (auto i : idx) m.push_back(forms[i].coeffs);
      if (field_determinant(m).is_zero()) {
        std::string list;
        for (auto i : idx) list += (list.empty() ? "" : ",") + std::to_string(i);
        throw Error(ErrorCode::GeneralPositionViolated,
                    "forms {" + list + "} at place " + std::to_string(v) + " are dependent");
      }
      long i = static_cast<long>(n);
      while (i >= 0 && idx[i] == count - (n + 1) + static_cast<std::size_t>(i)) --i;
      if (i < 0) break;
      ++idx[i];
      for (std::size_t j = i + 1; j <= n; ++j) idx[j] = idx[j - 1] + 1;
    }
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lambda[v][a] > lambda[v][b]; });
    std::vector<std::size_t> kept(order.begin(), order.begin() + static_cast<long>(n + 1));
    std::sort(kept.begin(), kept.end());
    for (std::size_t k = n + 1; k < count; ++k) out.residual += lambda[v][order[k]];
    std::vector<Rational> values;
    for (auto i : kept) values.push_back(lambda[v][i]);
    out.kept.push_back(std::move(kept));
    out.lambda.push_back(std::move(values));
  }
  return out;
}

}  // namespace heightlab
