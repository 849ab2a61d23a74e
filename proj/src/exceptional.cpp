#include "heightlab/exceptional.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "heightlab/digest.hpp"
#include "heightlab/error.hpp"

namespace heightlab {

// ---------------------------------------------------------------- enumeration

namespace {

struct Shard {
  std::size_t lead;   // index of the first nonzero coordinate
  std::int64_t value; // its value
};

void enumerate_shard(std::size_t n, std::int64_t bound, const Shard& shard,
                     const std::function<void(const std::int64_t*)>& visit) {
  std::vector<std::int64_t> c(n + 1, 0);
  c[shard.lead] = shard.value;
  if (shard.lead == n) {
    if (shard.value == 1) visit(c.data());
    return;
  }
  // Depth-first over the remaining coordinates with running gcds.
  std::vector<std::int64_t> g(n + 2, 0);
  g[shard.lead + 1] = shard.value;
  std::size_t pos = shard.lead + 1;
  c[pos] = -bound - 1;
  while (true) {
    if (c[pos] < bound) {
      ++c[pos];
      std::int64_t gp = std::gcd(g[pos], c[pos]);
      if (pos == n) {
        if (gp == 1) visit(c.data());
      } else {
        g[pos + 1] = gp;
        ++pos;
        c[pos] = -bound - 1;
      }
    } else {
      if (pos == shard.lead + 1) break;
      --pos;
    }
  }
}

std::vector<Shard> make_shards(std::size_t n, std::int64_t bound) {
  std::vector<Shard> shards;
  for (std::size_t k = 0; k <= n; ++k) {
    for (std::int64_t a = 1; a <= (k == n ? 1 : bound); ++a) shards.push_back({k, a});
  }
  return shards;
}

}  // namespace

void for_each_point(std::size_t n, std::int64_t bound, unsigned jobs,
                    const std::function<void(const std::int64_t* coords)>& visit) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "dimension n must be at least 1");
  if (bound < 1) throw Error(ErrorCode::BadParameter, "height bound must be at least 1");
  if (bound > (std::int64_t(1) << 30)) throw Error(ErrorCode::BadParameter, "height bound too large");
  auto shards = make_shards(n, bound);
  if (jobs <= 1) {
    for (const auto& s : shards) enumerate_shard(n, bound, s, visit);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < shards.size(); i = next++) enumerate_shard(n, bound, shards[i], visit);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = shards.size();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t count_points(std::size_t n, std::int64_t bound) {
  std::uint64_t count = 0;
  for_each_point(n, bound, 1, [&](const std::int64_t*) { ++count; });
  return count;
}

std::vector<ProjectivePoint> enumerate_points(std::size_t n, std::int64_t bound, std::size_t cap) {
  std::vector<ProjectivePoint> out;
  for_each_point(n, bound, 1, [&](const std::int64_t* c) {
    if (out.size() >= cap) {
      throw Error(ErrorCode::BudgetExceeded, "more than " + std::to_string(cap) + " points of height <= " +
                                                 std::to_string(bound));
    }
    out.emplace_back(std::vector<std::int64_t>(c, c + n + 1));
  });
  sort_canonical(out);
  return out;
}

// ---------------------------------------------------------------- filters

const char* to_string(FilterKind k) noexcept {
  switch (k) {
    case FilterKind::Schmidt: return "schmidt";
    case FilterKind::FW: return "fw";
    case FilterKind::Parametric: return "parametric";
  }
  return "?";
}

const char* to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Solution: return "solution";
    case Outcome::NotSolution: return "not-solution";
    case Outcome::Indeterminate: return "indeterminate";
    case Outcome::Support: return "support";
  }
  return "?";
}

void FilterParams::validate() const {
  const auto& sys = spec.system;
  sys.validate();
  if (slack < 0) throw Error(ErrorCode::ConfigInvalid, "slack must be nonnegative");
  switch (kind) {
    case FilterKind::Schmidt:
      if (spec.epsilon <= 0) throw Error(ErrorCode::ConfigInvalid, "epsilon must be positive");
      break;
    case FilterKind::FW:
      if (spec.weights.size() != sys.places.size()) {
        throw Error(ErrorCode::ConfigInvalid, "d-weight matrix needs one row per place");
      }
      for (std::size_t k = 0; k < spec.weights.size(); ++k) {
        if (spec.weights[k].size() != sys.n + 1) {
          throw Error(ErrorCode::ConfigInvalid, "d-weights row " + std::to_string(k) + " has the wrong length");
        }
      }
      break;
    case FilterKind::Parametric:
      spec.validate();
      break;
  }
}

std::string FilterParams::canonical_text() const {
  std::ostringstream out;
  const auto& sys = spec.system;
  out << "kind=" << to_string(kind) << ";field=";
  for (const auto& c : sys.field->min_poly()) out << c.get_str() << ",";
  out << ";n=" << sys.n << ";places=";
  for (const auto& pf : sys.places) {
    out << "{v=" << pf.place.v_label() << ",w=" << pf.place.index << ",forms=";
    for (const auto& f : pf.forms) {
      out << "(";
      for (const auto& a : f.coeffs) {
        out << "[";
        for (const auto& q : a.coeffs()) out << to_string(q) << " ";
        out << "]";
      }
      out << ")";
    }
    out << "}";
  }
  out << ";weights=";
  for (const auto& row : spec.weights) {
    out << "(";
    for (const auto& x : row) out << to_string(x) << " ";
    out << ")";
  }
  out << ";epsilon=" << to_string(spec.epsilon) << ";Q=" << to_string(spec.Q) << ";slack=" << to_string(slack);
  return out.str();
}

std::string FilterParams::digest() const { return sha256_hex(canonical_text()); }

namespace {

constexpr double kUnit = 0x1p-53;

// ℓ(x) = 0 test in integer arithmetic: ℓ vanishes iff every power-basis row does.
struct SupportRows {
  bool fits = false;
  std::vector<std::vector<std::int64_t>> rows;
};

SupportRows support_rows(const LinearForm& form) {
  SupportRows out;
  const std::size_t d = form.field->degree();
  Integer limit = Integer(1) << 40;
  for (std::size_t t = 0; t < d; ++t) {
    Integer den = 1;
    for (const auto& a : form.coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), a.coeffs()[t].get_den_mpz_t());
    std::vector<std::int64_t> row;
    bool zero = true;
    for (const auto& a : form.coeffs) {
      Integer v(a.coeffs()[t] * den);
      if (abs(v) >= limit) return out;
      row.push_back(v.get_si());
      zero = zero && v == 0;
    }
    if (!zero) out.rows.push_back(std::move(row));
  }
  out.fits = true;
  return out;
}

struct FastForm {
  std::vector<double> re, im, err;  // embedding images of the coefficients and their error bounds
  double scale = 0;                 // Σ (|re| + |im|)
};

struct Lambda {
  double value;
  double err;
};

}  // namespace

struct SolutionFilter::Impl {
  std::size_t n = 1;
  std::vector<std::vector<SupportRows>> support;
  bool fast = true;
  std::vector<std::vector<FastForm>> fast_forms;
  std::vector<std::vector<double>> weights;  // doubles for the fast path
  std::vector<std::vector<double>> weight_err;
  double eps = 0, eps_err = 0, slack = 0, slack_err = 0, log_q = 0, log_q_err = 0;
  std::int64_t coordinate_limit = std::int64_t(1) << 40;
  mutable std::atomic<std::uint64_t> escalations{0};
};

namespace {

double to_double_err(const Rational& q, double& err) {
  double d = q.get_d();
  err = std::abs(d) * kUnit * 2 + (q == 0 ? 0.0 : std::numeric_limits<double>::denorm_min());
  if (Rational(d) == q) err = 0;
  return d;
}

}  // namespace

SolutionFilter::SolutionFilter(FilterParams params) : params_(std::move(params)), impl_(std::make_unique<Impl>()) {
  params_.validate();
  const auto& sys = params_.system();
  impl_->n = sys.n;
  for (const auto& pf : sys.places) {
    std::vector<SupportRows> rows;
    std::vector<FastForm> fforms;
    if (!pf.place.archimedean()) impl_->fast = false;
    for (const auto& form : pf.forms) {
      rows.push_back(support_rows(form));
      if (!rows.back().fits) impl_->fast = false;
      FastForm ff;
      if (pf.place.archimedean()) {
        for (const auto& a : form.coeffs) {
          ComplexBall z = embed(pf.place, a);
          double re = z.re.to_double(), im = z.im.to_double();
          double err = z.rad.to_double(MPFR_RNDU) + (std::abs(re) + std::abs(im)) * kUnit;
          ff.re.push_back(re);
          ff.im.push_back(im);
          ff.err.push_back(err);
          ff.scale += std::abs(re) + std::abs(im);
        }
      }
      fforms.push_back(std::move(ff));
    }
    impl_->support.push_back(std::move(rows));
    impl_->fast_forms.push_back(std::move(fforms));
  }
  for (const auto& row : params_.spec.weights) {
    std::vector<double> w, we;
    for (const auto& x : row) {
      double e = 0;
      w.push_back(to_double_err(x, e));
      we.push_back(e);
    }
    impl_->weights.push_back(std::move(w));
    impl_->weight_err.push_back(std::move(we));
  }
  impl_->eps = to_double_err(params_.spec.epsilon, impl_->eps_err);
  impl_->slack = to_double_err(params_.slack, impl_->slack_err);
  Ball lq = log_of(params_.spec.Q, 64);
  impl_->log_q = lq.mid_double();
  impl_->log_q_err = lq.rad_double() + std::abs(impl_->log_q) * kUnit * 2;
}

SolutionFilter::~SolutionFilter() = default;

std::uint64_t SolutionFilter::escalations() const { return impl_->escalations.load(); }

Outcome SolutionFilter::classify(const std::int64_t* c) const {
  const Impl& im = *impl_;
  const std::size_t n = im.n;
  const auto& sys = params_.system();
  std::int64_t maxabs = 0;
  for (std::size_t j = 0; j <= n; ++j) maxabs = std::max<std::int64_t>(maxabs, c[j] < 0 ? -c[j] : c[j]);

  // Exact support test.
  bool exact_support = maxabs < im.coordinate_limit;
  for (std::size_t k = 0; k < im.support.size() && exact_support; ++k) {
    for (const auto& rows : im.support[k]) {
      if (!rows.fits) {
        exact_support = false;
        break;
      }
      bool vanishes = true;
      for (const auto& row : rows.rows) {
        __int128 acc = 0;
        for (std::size_t j = 0; j <= n; ++j) acc += static_cast<__int128>(row[j]) * c[j];
        if (acc != 0) {
          vanishes = false;
          break;
        }
      }
      if (vanishes) return Outcome::Support;
    }
  }
  if (!exact_support || !im.fast || maxabs >= (std::int64_t(1) << 50)) {
    return classify_precise(ProjectivePoint(std::vector<std::int64_t>(c, c + n + 1)));
  }

  // Double-precision route with explicit error bounds.
  const double top = static_cast<double>(maxabs);
  const double h = std::log(top);
  const double h_err = (std::abs(h) + 1) * 2 * kUnit;
  auto escalate = [&]() {
    ++impl_->escalations;
    return classify_precise(ProjectivePoint(std::vector<std::int64_t>(c, c + n + 1)));
  };
  std::vector<std::vector<Lambda>> lambda(sys.places.size());
  for (std::size_t k = 0; k < sys.places.size(); ++k) {
    for (const auto& ff : im.fast_forms[k]) {
      double re = 0, imv = 0, err = 0, mag = 0;
      for (std::size_t j = 0; j <= n; ++j) {
        const double x = static_cast<double>(c[j]);
        re += ff.re[j] * x;
        imv += ff.im[j] * x;
        err += std::abs(x) * ff.err[j];
        mag += std::abs(x) * (std::abs(ff.re[j]) + std::abs(ff.im[j]));
      }
      err += mag * static_cast<double>(n + 3) * kUnit * 1.01;
      const double mod = std::hypot(re, imv);
      const double mod_err = 2 * err + mod * 2 * kUnit;
      if (!(mod - mod_err > 0) || mod_err > 0.25 * mod) return escalate();
      const double value = h - std::log(mod);
      const double value_err = mod_err / (mod - mod_err) + (std::abs(h) + std::abs(std::log(mod)) + 1) * 4 * kUnit;
      lambda[k].push_back({value, value_err});
    }
  }

  switch (params_.kind) {
    case FilterKind::Schmidt: {
      double sum = 0, err = 0, mag = 0;
      for (const auto& row : lambda)
        for (const auto& l : row) {
          sum += l.value;
          err += l.err;
          mag += std::abs(l.value);
        }
      const double coef = static_cast<double>(n + 1) + im.eps;
      const double rhs = coef * h - im.slack;
      const double diff = sum - rhs;
      err += coef * h_err + im.eps_err * h + im.slack_err + (mag + std::abs(rhs) + std::abs(sum)) * 8 * kUnit;
      if (diff > err) return Outcome::Solution;
      if (diff < -err) return Outcome::NotSolution;
      return escalate();
    }
    case FilterKind::FW: {
      bool all_hold = true;
      for (std::size_t k = 0; k < lambda.size(); ++k) {
        for (std::size_t i = 0; i <= n; ++i) {
          const auto& l = lambda[k][i];
          const double t = l.value - im.weights[k][i] * h + im.slack;
          const double err = l.err + std::abs(im.weights[k][i]) * h_err + im.weight_err[k][i] * h + im.slack_err +
                             (std::abs(l.value) + std::abs(im.weights[k][i] * h) + im.slack) * 4 * kUnit;
          if (t < -err) return Outcome::NotSolution;
          if (!(t > err)) all_hold = false;
        }
      }
      return all_hold ? Outcome::Solution : escalate();
    }
    case FilterKind::Parametric: {
      double lhs = 0, err = 0, mag = 0;
      for (std::size_t k = 0; k < lambda.size(); ++k) {
        double best = 0, best_err = 0;
        for (std::size_t i = 0; i <= n; ++i) {
          const auto& l = lambda[k][i];
          const double t = l.value + im.weights[k][i] * im.log_q;
          const double te = l.err + std::abs(im.weights[k][i]) * im.log_q_err + im.weight_err[k][i] * im.log_q +
                            (std::abs(l.value) + std::abs(im.weights[k][i] * im.log_q)) * 4 * kUnit;
          if (i == 0 || t < best) best = t;
          best_err = std::max(best_err, te);
        }
        lhs += best;
        err += best_err;
        mag += std::abs(best);
      }
      const double rhs = h + im.eps * im.log_q + im.slack;
      err += h_err + im.eps * im.log_q_err + im.eps_err * im.log_q + im.slack_err +
             (mag + std::abs(rhs) + std::abs(lhs)) * 8 * kUnit;
      const double diff = lhs - rhs;
      if (diff > err) return Outcome::Solution;
      if (diff < -err) return Outcome::NotSolution;
      return escalate();
    }
  }
  return Outcome::Indeterminate;
}

Outcome SolutionFilter::classify_precise(const ProjectivePoint& x) const {
  const auto& sys = params_.system();
  const auto& spec = params_.spec;
  if (sys.on_support(x)) return Outcome::Support;
  const Precision bits = sys.bits();
  try {
    std::vector<std::vector<Ball>> lambda;
    for (const auto& pf : sys.places) {
      std::vector<Ball> row;
      for (const auto& form : pf.forms) row.push_back(weil_hyperplane(HyperplanePresentation(form), x, pf.place));
      lambda.push_back(std::move(row));
    }
    Ball h = log_height(x, bits);
    Ball slack = Ball::exact(params_.slack, bits);
    Verdict v = Verdict::Indeterminate;
    switch (params_.kind) {
      case FilterKind::Schmidt: {
        Ball sum = Ball::exact(0L, bits);
        for (const auto& row : lambda)
          for (const auto& l : row) sum += l;
        Ball coef = Ball::exact(Rational(static_cast<long>(sys.n + 1)) + spec.epsilon, bits);
        v = sign_ge_zero(sum + slack - coef * h);
        break;
      }
      case FilterKind::FW: {
        v = Verdict::Holds;
        for (std::size_t k = 0; k < lambda.size(); ++k) {
          for (std::size_t i = 0; i <= sys.n; ++i) {
            Verdict t = sign_ge_zero(lambda[k][i] - scale(h, spec.weights[k][i]) + slack);
            if (t == Verdict::Fails) {
              v = Verdict::Fails;
              break;
            }
            if (t == Verdict::Indeterminate) v = Verdict::Indeterminate;
          }
          if (v == Verdict::Fails) break;
        }
        break;
      }
      case FilterKind::Parametric: {
        Ball log_q = log_of(spec.Q, bits);
        Ball lhs = Ball::exact(0L, bits);
        for (std::size_t k = 0; k < lambda.size(); ++k) {
          Ball best(bits);
          for (std::size_t i = 0; i <= sys.n; ++i) {
            Ball t = lambda[k][i] + scale(log_q, spec.weights[k][i]);
            best = i == 0 ? t : min(best, t);
          }
          lhs += best;
        }
        v = compare_ge(lhs, h + scale(log_q, spec.epsilon) + slack);
        break;
      }
    }
    if (v == Verdict::Holds) return Outcome::Solution;
    if (v == Verdict::Fails) return Outcome::NotSolution;
    return Outcome::Indeterminate;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PrecisionExhausted) return Outcome::Indeterminate;
    throw;
  }
}

namespace {

void finish(SolutionSet& out, const SolutionFilter& filter) {
  sort_canonical(out.points);
  sort_canonical(out.indeterminate);
  sort_canonical(out.support);
  out.spec_digest = filter.params().digest();
  out.slack_used = filter.params().slack;
  out.escalations = filter.escalations();
}

void record(SolutionSet& out, Outcome o, ProjectivePoint x) {
  switch (o) {
    case Outcome::Solution: out.points.push_back(std::move(x)); break;
    case Outcome::Indeterminate: out.indeterminate.push_back(std::move(x)); break;
    case Outcome::Support: out.support.push_back(std::move(x)); break;
    case Outcome::NotSolution: break;
  }
}

}  // namespace

SolutionSet filter_solutions(const FilterParams& params, const std::vector<ProjectivePoint>& points) {
  SolutionFilter filter(params);
  SolutionSet out;
  for (const auto& x : points) {
    if (x.dim() != params.system().n) throw Error(ErrorCode::BadParameter, "point " + x.to_string() + " has the wrong dimension");
    record(out, filter.classify(x), x);
    ++out.examined;
  }
  finish(out, filter);
  return out;
}

SolutionSet solve_bounded(const FilterParams& params, std::int64_t bound, unsigned jobs) {
  SolutionFilter filter(params);
  SolutionSet out;
  std::mutex mutex;
  std::atomic<std::uint64_t> examined{0};
  const std::size_t n = params.system().n;
  for_each_point(n, bound, jobs, [&](const std::int64_t* c) {
    ++examined;
    Outcome o = filter.classify(c);
    if (o == Outcome::NotSolution) return;
    ProjectivePoint x(std::vector<std::int64_t>(c, c + n + 1));
    std::lock_guard<std::mutex> lock(mutex);
    record(out, o, std::move(x));
  });
  out.examined = examined.load();
  finish(out, filter);
  return out;
}

// ---------------------------------------------------------------- covers

const char* to_string(CoverMode m) noexcept { return m == CoverMode::Exact ? "exact" : "greedy"; }

namespace {

RationalVector as_vector(const ProjectivePoint& x) {
  RationalVector v;
  for (auto c : x.coords()) v.emplace_back(static_cast<long>(c));
  return v;
}

std::vector<Integer> primitive_row(const RationalVector& v) {
  Integer den = 1;
  for (const auto& q : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  std::vector<Integer> out;
  for (const auto& q : v) out.push_back(Integer(q * den));
  Integer g = 0;
  for (const auto& z : out) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
  if (g == 0) return out;
  auto first = std::find_if(out.begin(), out.end(), [](const Integer& z) { return z != 0; });
  if (*first < 0) g = -g;
  for (auto& z : out) z /= g;
  return out;
}

Subspace span_of(const std::vector<ProjectivePoint>& points, const std::vector<std::size_t>& members) {
  RationalMatrix rows;
  for (auto i : members) rows.push_back(as_vector(points[i]));
  Subspace s;
  s.basis = row_space_key(rows);
  const std::size_t cols = points[members.front()].coords().size();
  for (const auto& v : nullspace(s.basis, cols)) {
    auto prim = primitive_row(v);
    RationalVector eq;
    for (const auto& z : prim) eq.emplace_back(z);
    s.equations.push_back(std::move(eq));
  }
  return s;
}

// Hyperplanes spanned by n-subsets of the points, as normal vectors and the
// set of points they contain.
struct Candidate {
  std::vector<Integer> normal;
  std::vector<std::size_t> members;
};

std::vector<Candidate> hyperplane_candidates(const std::vector<ProjectivePoint>& points, std::size_t n) {
  const std::size_t m = points.size();
  Integer combos = binomial(m, n);
  if (combos > 5'000'000) {
    throw Error(ErrorCode::BudgetExceeded, "too many point subsets (" + combos.get_str() + ") for the cover search");
  }
  std::map<std::vector<Integer>, std::size_t> seen;
  std::vector<Candidate> out;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (n > m) return out;
  while (true) {
    RationalMatrix rows;
    for (auto i : idx) rows.push_back(as_vector(points[i]));
    auto ns = nullspace(rows, n + 1);
    if (ns.size() == 1) {
      auto normal = primitive_row(ns[0]);
      if (!seen.count(normal)) {
        seen.emplace(normal, out.size());
        Candidate cand;
        cand.normal = normal;
        for (std::size_t j = 0; j < m; ++j) {
          Integer dot = 0;
          for (std::size_t t = 0; t <= n; ++t) dot += normal[t] * static_cast<long>(points[j][t]);
          if (dot == 0) cand.members.push_back(j);
        }
        out.push_back(std::move(cand));
      }
    }
    long i = static_cast<long>(n) - 1;
    while (i >= 0 && idx[i] == m - n + static_cast<std::size_t>(i)) --i;
    if (i < 0) break;
    ++idx[i];
    for (std::size_t j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::size_t rank_of(const std::vector<ProjectivePoint>& points, const std::vector<std::size_t>& members) {
  RationalMatrix rows;
  for (auto i : members) rows.push_back(as_vector(points[i]));
  return rank(rows);
}

std::vector<std::vector<std::size_t>> greedy_groups(const std::vector<ProjectivePoint>& points, std::size_t n,
                                                    const std::vector<Candidate>& candidates) {
  std::vector<bool> covered(points.size(), false);
  std::vector<std::size_t> uncovered(points.size());
  std::iota(uncovered.begin(), uncovered.end(), 0);
  std::vector<std::vector<std::size_t>> groups;
  while (!uncovered.empty()) {
    if (rank_of(points, uncovered) <= n) {
      groups.push_back(uncovered);
      break;
    }
    std::vector<std::size_t> best;
    std::size_t best_rank = 0;
    for (const auto& cand : candidates) {
      std::vector<std::size_t> hit;
      for (auto j : cand.members)
        if (!covered[j]) hit.push_back(j);
      if (hit.empty() || hit.size() < best.size()) continue;
      std::size_t r = rank_of(points, hit);
      if (hit.size() > best.size() || r < best_rank || (r == best_rank && hit < best)) {
        best = std::move(hit);
        best_rank = r;
      }
    }
    for (auto j : best) covered[j] = true;
    groups.push_back(best);
    std::vector<std::size_t> rest;
    for (auto j : uncovered)
      if (!covered[j]) rest.push_back(j);
    uncovered = std::move(rest);
  }
  return groups;
}

struct ExactSearch {
  std::vector<std::uint32_t> masks;
  std::uint32_t full = 0;
  std::size_t max_cover = 1;
  std::vector<std::uint32_t> best;
  std::vector<std::uint32_t> current;

  void run(std::uint32_t covered) {
    if (covered == full) {
      if (best.empty() || current.size() < best.size()) best = current;
      return;
    }
    const std::size_t remaining = static_cast<std::size_t>(std::popcount(full & ~covered));
    const std::size_t lower = current.size() + (remaining + max_cover - 1) / max_cover;
    if (!best.empty() && lower >= best.size()) return;
    const int p = std::countr_zero(full & ~covered);
    std::vector<std::uint32_t> options;
    for (auto m : masks)
      if (m & (1u << p)) options.push_back(m);
    std::sort(options.begin(), options.end(), [&](std::uint32_t a, std::uint32_t b) {
      int ca = std::popcount(a & ~covered), cb = std::popcount(b & ~covered);
      if (ca != cb) return ca > cb;
      return a < b;
    });
    for (auto m : options) {
      current.push_back(m);
      run(covered | m);
      current.pop_back();
    }
  }
};

}  // namespace

bool Subspace::contains(const ProjectivePoint& x) const {
  for (const auto& eq : equations) {
    Rational dot = 0;
    for (std::size_t t = 0; t < eq.size(); ++t) dot += eq[t] * static_cast<long>(x[t]);
    if (dot != 0) return false;
  }
  return true;
}

SubspaceCover subspace_cover(const std::vector<ProjectivePoint>& points, CoverMode mode, std::size_t max_subspaces) {
  if (points.empty()) throw Error(ErrorCode::BadParameter, "cannot cover an empty solution set");
  const std::size_t n = points.front().dim();
  for (const auto& x : points)
    if (x.dim() != n) throw Error(ErrorCode::BadParameter, "points of mixed dimension");
  SubspaceCover out;
  out.mode = mode;
  if (mode == CoverMode::Exact && points.size() > kExactCoverCap) {
    out.mode = CoverMode::Greedy;
    out.fell_back = true;
  }

  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::vector<std::size_t>> groups;
  if (rank_of(points, all) <= n) {
    groups.push_back(all);
  } else {
    auto candidates = hyperplane_candidates(points, n);
    auto greedy = greedy_groups(points, n, candidates);
    if (out.mode == CoverMode::Greedy) {
      groups = greedy;
    } else {
      ExactSearch search;
      search.full = points.size() == 32 ? ~0u : ((1u << points.size()) - 1);
      std::vector<std::uint32_t> masks;
      for (const auto& cand : candidates) {
        std::uint32_t m = 0;
        for (auto j : cand.members) m |= 1u << j;
        masks.push_back(m);
      }
      std::sort(masks.begin(), masks.end());
      masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
      for (auto m : masks) {
        bool dominated = false;
        for (auto other : masks)
          if (other != m && (m & other) == m) {
            dominated = true;
            break;
          }
        if (!dominated) {
          search.masks.push_back(m);
          search.max_cover = std::max<std::size_t>(search.max_cover, std::popcount(m));
        }
      }
      for (const auto& g : greedy) {
        std::uint32_t m = 0;
        for (auto j : g) m |= 1u << j;
        search.best.push_back(m);
      }
      search.run(0);
      std::sort(search.best.begin(), search.best.end(), [](std::uint32_t a, std::uint32_t b) {
        int ca = std::popcount(a), cb = std::popcount(b);
        if (ca != cb) return ca > cb;
        return std::countr_zero(a) < std::countr_zero(b) || (std::countr_zero(a) == std::countr_zero(b) && a < b);
      });
      std::uint32_t assigned = 0;
      for (auto m : search.best) {
        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < points.size(); ++j)
          if (m & (1u << j)) members.push_back(j);
        groups.push_back(members);
        assigned |= m;
      }
    }
  }
  for (const auto& g : groups) out.subspaces.push_back(span_of(points, g));
  out.assignment.assign(points.size(), 0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    bool found = false;
    for (std::size_t s = 0; s < out.subspaces.size(); ++s) {
      if (out.subspaces[s].contains(points[j])) {
        out.assignment[j] = s;
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorCode::BadParameter, "internal: point " + points[j].to_string() + " left uncovered");
  }
  for (const auto& s : out.subspaces) {
    if (s.basis.size() > n) throw Error(ErrorCode::BadParameter, "internal: cover subspace is not proper");
  }
  if (max_subspaces > 0 && out.subspaces.size() > max_subspaces) {
    throw Error(ErrorCode::Infeasible, "the points need " + std::to_string(out.subspaces.size()) +
                                           " proper subspaces, more than the allowed " +
                                           std::to_string(max_subspaces));
  }
  return out;
}

DensityReport density_report(const std::vector<ProjectivePoint>& points, const SubspaceCover& cover) {
  DensityReport out;
  out.point_count = points.size();
  if (points.empty()) {
    out.verdict_text = "no solutions: nothing to cover";
    return out;
  }
  out.cover_size = cover.subspaces.size();
  std::vector<std::size_t> load(cover.subspaces.size(), 0);
  for (auto s : cover.assignment) ++load.at(s);
  out.max_points_per_subspace = load.empty() ? 0 : *std::max_element(load.begin(), load.end());
  out.economy_ratio = out.cover_size ? static_cast<double>(out.point_count) / static_cast<double>(out.cover_size) : 0;
  std::ostringstream text;
  text << "A finite point set is never dense, so no density claim is made. Cover economy: " << out.point_count
       << " point(s) on " << out.cover_size << " proper linear subspace(s), " << out.max_points_per_subspace
       << " on the fullest one (ratio " << out.economy_ratio << "). Few subspaces holding many points is the "
       << "empirical clustering signal.";
  out.verdict_text = text.str();
  return out;
}

}  // namespace heightlab
