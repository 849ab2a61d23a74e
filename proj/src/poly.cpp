#include "heightlab/poly.hpp"

#include <algorithm>
#include <functional>

#include "heightlab/error.hpp"

namespace heightlab::poly {

namespace {

Integer modp(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(ErrorCode::DivisionByZero, "leading coefficient is not a unit modulo " + m.get_str());
  }
  return r;
}

ZPoly symmetric(const ZPoly& f, const Integer& m) {
  ZPoly out(f.size());
  Integer half = m / 2;
  for (size_t i = 0; i < f.size(); ++i) {
    Integer c = modp(f[i], m);
    if (c > half) c -= m;
    out[i] = c;
  }
  trim(out);
  return out;
}

Integer isqrt_ceil(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  if (r * r < n) ++r;
  return r;
}

}  // namespace

void trim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

void trim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }
int degree(const QPoly& f) { return static_cast<int>(f.size()) - 1; }

ZPoly from_ints(const std::vector<long>& coeffs) {
  ZPoly out(coeffs.begin(), coeffs.end());
  trim(out);
  return out;
}

QPoly to_q(const ZPoly& f) {
  QPoly out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = Rational(f[i]);
  return out;
}

ZPoly add(const ZPoly& a, const ZPoly& b) {
  ZPoly out(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  trim(out);
  return out;
}

ZPoly sub(const ZPoly& a, const ZPoly& b) {
  ZPoly out(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly out(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  trim(out);
  return out;
}

ZPoly derivative(const ZPoly& f) {
  if (f.size() <= 1) return {};
  ZPoly out(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) out[i - 1] = f[i] * static_cast<unsigned long>(i);
  trim(out);
  return out;
}

Integer content(const ZPoly& f) {
  Integer g = 0;
  for (const auto& c : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

QPoly add(const QPoly& a, const QPoly& b) {
  QPoly out(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  trim(out);
  return out;
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly out(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

QPoly scale(const QPoly& a, const Rational& c) {
  if (c == 0) return {};
  QPoly out(a);
  for (auto& x : out) x *= c;
  return out;
}

QPoly derivative(const QPoly& f) {
  if (f.size() <= 1) return {};
  QPoly out(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) out[i - 1] = f[i] * static_cast<unsigned long>(i);
  trim(out);
  return out;
}

void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  if (b.empty()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  r = a;
  trim(r);
  int db = degree(b);
  if (degree(r) < db) {
    q.clear();
    return;
  }
  q.assign(r.size() - b.size() + 1, Rational(0));
  const Rational& lead = b.back();
  while (degree(r) >= db) {
    int shift = degree(r) - db;
    Rational c = r.back() / lead;
    q[shift] = c;
    for (int i = 0; i <= db; ++i) r[shift + i] -= c * b[i];
    r.pop_back();
    trim(r);
  }
  trim(q);
}

QPoly rem(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  divmod(a, b, q, r);
  return r;
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x = a, y = b;
  trim(x);
  trim(y);
  while (!y.empty()) {
    QPoly r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  if (!x.empty()) x = scale(x, 1 / Rational(x.back()));
  return x;
}

bool exact_divide(const ZPoly& a, const ZPoly& b, ZPoly& q) {
  if (b.empty()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  ZPoly r = a;
  trim(r);
  int db = degree(b);
  q.clear();
  if (degree(r) < db) return r.empty();
  q.assign(r.size() - b.size() + 1, Integer(0));
  while (degree(r) >= db) {
    int shift = degree(r) - db;
    if (!mpz_divisible_p(r.back().get_mpz_t(), b.back().get_mpz_t())) return false;
    Integer c = r.back() / b.back();
    q[shift] = c;
    for (int i = 0; i <= db; ++i) mpz_submul(r[shift + i].get_mpz_t(), c.get_mpz_t(), b[i].get_mpz_t());
    trim(r);
  }
  trim(q);
  return r.empty();
}

Rational eval(const QPoly& f, const Rational& x) {
  Rational acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Integer eval(const ZPoly& f, const Integer& x) {
  Integer acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

ZPoly primitive_part(const QPoly& f, Rational* scale_out) {
  Integer den = 1;
  for (const auto& c : f) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  ZPoly out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = Integer(f[i] * den);
  Integer g = content(out);
  if (g == 0) {
    if (scale_out) *scale_out = 0;
    return {};
  }
  for (auto& c : out) c /= g;
  if (scale_out) {
    *scale_out = Rational(g, den);
    scale_out->canonicalize();
  }
  trim(out);
  return out;
}

Integer resultant(const ZPoly& a, const ZPoly& b) {
  int m = degree(a), n = degree(b);
  if (m < 0 || n < 0) return 0;
  if (m == 0) return ipow(a[0], n);
  if (n == 0) return ipow(b[0], m);
  const int size = m + n;
  std::vector<std::vector<Integer>> s(size, std::vector<Integer>(size, Integer(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s[i][i + j] = a[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s[n + i][i + j] = b[n - j];

  // Fraction-free Gaussian elimination (Bareiss).
  int sign = 1;
  Integer prev = 1;
  for (int k = 0; k < size - 1; ++k) {
    if (s[k][k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < size; ++i)
        if (s[i][k] != 0) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(s[k], s[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < size; ++i) {
      for (int j = k + 1; j < size; ++j) {
        Integer v = s[i][j] * s[k][k] - s[i][k] * s[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        s[i][j] = v;
      }
      s[i][k] = 0;
    }
    prev = s[k][k];
  }
  Integer det = s[size - 1][size - 1];
  return sign > 0 ? det : Integer(-det);
}

Integer discriminant(const ZPoly& f) {
  int d = degree(f);
  if (d < 1) throw Error(ErrorCode::BadParameter, "discriminant of a constant polynomial");
  Integer r = resultant(f, derivative(f));
  mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), f.back().get_mpz_t());
  if ((static_cast<long>(d) * (d - 1) / 2) % 2 != 0) r = -r;
  return r;
}

bool is_squarefree(const ZPoly& f) {
  if (degree(f) < 1) return true;
  return degree(gcd(to_q(f), to_q(derivative(f)))) == 0;
}

// ---------------------------------------------------------------- mod m

ZPoly reduce(const ZPoly& f, const Integer& m) {
  ZPoly out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = modp(f[i], m);
  trim(out);
  return out;
}

ZPoly mod_mul(const ZPoly& a, const ZPoly& b, const Integer& m) { return reduce(mul(a, b), m); }
ZPoly mod_sub(const ZPoly& a, const ZPoly& b, const Integer& m) { return reduce(sub(a, b), m); }
ZPoly mod_add(const ZPoly& a, const ZPoly& b, const Integer& m) { return reduce(add(a, b), m); }

void mod_divmod(const ZPoly& a, const ZPoly& b, const Integer& m, ZPoly& q, ZPoly& r) {
  ZPoly bb = reduce(b, m);
  if (bb.empty()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero modulo " + m.get_str());
  Integer inv = inverse_mod(bb.back(), m);
  r = reduce(a, m);
  int db = degree(bb);
  q.clear();
  if (degree(r) < db) return;
  q.assign(r.size() - bb.size() + 1, Integer(0));
  while (degree(r) >= db) {
    int shift = degree(r) - db;
    Integer c = modp(r.back() * inv, m);
    q[shift] = c;
    for (int i = 0; i <= db; ++i) r[shift + i] = modp(r[shift + i] - c * bb[i], m);
    trim(r);
  }
  trim(q);
}

ZPoly mod_rem(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly q, r;
  mod_divmod(a, b, m, q, r);
  return r;
}

ZPoly mod_monic(const ZPoly& f, const Integer& m) {
  ZPoly g = reduce(f, m);
  if (g.empty()) return g;
  Integer inv = inverse_mod(g.back(), m);
  for (auto& c : g) c = modp(c * inv, m);
  return g;
}

ZPoly mod_gcd(const ZPoly& a, const ZPoly& b, const Integer& p) {
  ZPoly x = reduce(a, p), y = reduce(b, p);
  while (!y.empty()) {
    ZPoly r = mod_rem(x, y, p);
    x = std::move(y);
    y = std::move(r);
  }
  return mod_monic(x, p);
}

ZPoly mod_powmod(const ZPoly& base, const Integer& e, const ZPoly& modulus, const Integer& m) {
  ZPoly result{Integer(1)};
  result = mod_rem(result, modulus, m);
  ZPoly b = mod_rem(base, modulus, m);
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    result = mod_rem(mod_mul(result, result, m), modulus, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mod_rem(mod_mul(result, b, m), modulus, m);
  }
  return result;
}

namespace {

// s*a + t*b = 1 mod p for coprime a, b.
void mod_bezout(const ZPoly& a, const ZPoly& b, const Integer& p, ZPoly& s, ZPoly& t) {
  ZPoly r0 = reduce(a, p), r1 = reduce(b, p);
  ZPoly s0{Integer(1)}, s1, t0, t1{Integer(1)};
  while (!r1.empty()) {
    ZPoly q, r;
    mod_divmod(r0, r1, p, q, r);
    ZPoly s2 = mod_sub(s0, mod_mul(q, s1, p), p);
    ZPoly t2 = mod_sub(t0, mod_mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (degree(r0) != 0) throw Error(ErrorCode::BadParameter, "Hensel factors are not coprime modulo " + p.get_str());
  Integer inv = inverse_mod(r0[0], p);
  s = reduce(mul(s0, ZPoly{inv}), p);
  t = reduce(mul(t0, ZPoly{inv}), p);
}

void equal_degree_split(const ZPoly& g, int d, const Integer& p, gmp_randclass& rng, std::vector<ZPoly>& out) {
  if (degree(g) == d) {
    out.push_back(g);
    return;
  }
  const int n = degree(g);
  const bool two = (p == 2);
  Integer exponent;
  if (!two) exponent = (ipow(p, d) - 1) / 2;
  for (;;) {
    ZPoly a(n);
    for (int i = 0; i < n; ++i) a[i] = rng.get_z_range(p);
    trim(a);
    if (degree(a) < 1) continue;
    ZPoly b;
    if (two) {
      // Trace map a + a^2 + ... + a^(2^(d-1)).
      ZPoly term = a, acc = a;
      for (int i = 1; i < d; ++i) {
        term = mod_rem(mod_mul(term, term, p), g, p);
        acc = mod_add(acc, term, p);
      }
      b = acc;
    } else {
      b = mod_sub(mod_powmod(a, exponent, g, p), ZPoly{Integer(1)}, p);
    }
    ZPoly u = mod_gcd(b, g, p);
    if (degree(u) > 0 && degree(u) < n) {
      ZPoly q, r;
      mod_divmod(g, u, p, q, r);
      equal_degree_split(u, d, p, rng, out);
      equal_degree_split(mod_monic(q, p), d, p, rng, out);
      return;
    }
  }
}

std::pair<ZPoly, ZPoly> lift_pair(const ZPoly& f, ZPoly g, ZPoly h, const Integer& p, unsigned k) {
  ZPoly s, t;
  mod_bezout(g, h, p, s, t);
  Integer pj = p;
  for (unsigned j = 1; j < k; ++j) {
    ZPoly diff = sub(f, mul(g, h));
    ZPoly e(diff.size());
    for (size_t i = 0; i < diff.size(); ++i) {
      mpz_divexact(e[i].get_mpz_t(), diff[i].get_mpz_t(), pj.get_mpz_t());
    }
    e = reduce(e, p);
    ZPoly q, dg;
    mod_divmod(mod_mul(e, t, p), g, p, q, dg);
    ZPoly dh = mod_add(mod_mul(e, s, p), mod_mul(q, h, p), p);
    g = add(g, mul(dg, ZPoly{pj}));
    h = add(h, mul(dh, ZPoly{pj}));
    pj *= p;
    g = reduce(g, pj);
    h = reduce(h, pj);
  }
  return {g, h};
}

std::vector<Integer> small_odd_primes(size_t count) {
  std::vector<Integer> out;
  for (unsigned long c = 3; out.size() < count; c += 2) {
    if (is_prime(Integer(c))) out.emplace_back(c);
  }
  return out;
}

std::vector<ZPoly> factor_squarefree(const ZPoly& f) {
  const int d = degree(f);
  if (d <= 1) return {f};
  if (f[0] == 0) {
    ZPoly rest(f.begin() + 1, f.end());
    auto out = factor_squarefree(rest);
    out.push_back(ZPoly{Integer(0), Integer(1)});
    return out;
  }
  Integer disc = discriminant(f);

  // Pick the prime giving the fewest modular factors among the first few
  // primes of good reduction.
  Integer best_p;
  std::vector<ZPoly> best;
  int tried = 0;
  for (const Integer& p : small_odd_primes(60)) {
    if (mpz_divisible_p(disc.get_mpz_t(), p.get_mpz_t())) continue;
    auto facs = factor_mod_p(f, p);
    if (best.empty() || facs.size() < best.size()) {
      best = facs;
      best_p = p;
    }
    if (best.size() == 1 || ++tried >= 6) break;
  }
  if (best.empty()) throw Error(ErrorCode::BadParameter, "no prime of good reduction found");
  if (best.size() == 1) return {f};

  Integer norm2 = 0;
  for (const auto& c : f) norm2 += c * c;
  Integer bound = ipow(2, d) * isqrt_ceil(norm2);
  unsigned k = 1;
  Integer modulus = best_p;
  while (modulus <= 2 * bound) {
    modulus *= best_p;
    ++k;
  }
  std::vector<ZPoly> lifted = hensel_lift(f, best, best_p, k);

  std::vector<ZPoly> found;
  ZPoly rest = f;
  size_t s = 1;
  while (2 * s <= lifted.size()) {
    bool hit = false;
    std::vector<size_t> idx(s);
    for (size_t i = 0; i < s; ++i) idx[i] = i;
    while (true) {
      ZPoly cand{Integer(1)};
      for (size_t i : idx) cand = reduce(mul(cand, lifted[i]), modulus);
      cand = symmetric(cand, modulus);
      ZPoly q;
      if (degree(cand) > 0 && exact_divide(rest, cand, q)) {
        found.push_back(cand);
        rest = q;
        for (size_t i = s; i-- > 0;) lifted.erase(lifted.begin() + static_cast<long>(idx[i]));
        hit = true;
        break;
      }
      // Next combination in lexicographic order.
      long i = static_cast<long>(s) - 1;
      while (i >= 0 && idx[i] == lifted.size() - s + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (size_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!hit) ++s;
  }
  if (degree(rest) > 0) found.push_back(rest);
  return found;
}

}  // namespace

std::vector<ZPoly> factor_mod_p(const ZPoly& f_in, const Integer& p) {
  ZPoly f = mod_monic(f_in, p);
  std::vector<ZPoly> out;
  if (degree(f) < 1) return out;
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(20240601);
  const ZPoly x{Integer(0), Integer(1)};
  ZPoly h = mod_rem(x, f, p);
  for (int i = 1; degree(f) >= 2 * i; ++i) {
    h = mod_powmod(h, p, f, p);
    ZPoly g = mod_gcd(mod_sub(h, x, p), f, p);
    if (degree(g) > 0) {
      equal_degree_split(g, i, p, rng, out);
      ZPoly q, r;
      mod_divmod(f, g, p, q, r);
      f = mod_monic(q, p);
      h = mod_rem(h, f, p);
    }
  }
  if (degree(f) > 0) out.push_back(f);
  std::sort(out.begin(), out.end(), [](const ZPoly& a, const ZPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<ZPoly>& factors, const Integer& p, unsigned k) {
  Integer pk = ipow(p, k);
  if (factors.size() == 1) return {mod_monic(f, pk)};
  std::vector<ZPoly> out;
  ZPoly current = mod_monic(f, pk);
  for (size_t i = 0; i + 1 < factors.size(); ++i) {
    ZPoly h{Integer(1)};
    for (size_t j = i + 1; j < factors.size(); ++j) h = mod_mul(h, factors[j], p);
    auto [g_lift, h_lift] = lift_pair(current, mod_monic(factors[i], p), mod_monic(h, p), p, k);
    out.push_back(g_lift);
    current = h_lift;
  }
  out.push_back(current);
  return out;
}

std::vector<ZPoly> factor_over_integers(const ZPoly& f) {
  if (f.empty() || f.back() != 1) throw Error(ErrorCode::NonMonic, "factorization expects a monic polynomial");
  if (degree(f) > 8) throw Error(ErrorCode::BadParameter, "degree above 8 is outside the supported range");
  if (degree(f) <= 1) return {f};

  QPoly g = gcd(to_q(f), to_q(derivative(f)));
  std::vector<ZPoly> distinct;
  if (degree(g) > 0) {
    QPoly q, r;
    divmod(to_q(f), g, q, r);
    distinct = factor_squarefree(primitive_part(q));
  } else {
    distinct = factor_squarefree(f);
  }
  std::vector<ZPoly> out;
  for (const auto& p : distinct) {
    ZPoly rest = f, q;
    while (degree(p) > 0 && exact_divide(rest, p, q)) {
      out.push_back(p);
      rest = q;
    }
  }
  std::sort(out.begin(), out.end(), [](const ZPoly& a, const ZPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return out;
}

bool is_irreducible(const ZPoly& f) {
  if (degree(f) < 1) return false;
  if (degree(f) == 1) return true;
  // Rational roots of a monic integer polynomial are integer divisors of f(0).
  if (f[0] == 0) return false;
  for (long c : {1L, -1L}) {
    if (eval(f, Integer(c)) == 0) return false;
  }
  return factor_over_integers(f).size() == 1;
}

// ---------------------------------------------------------------- real roots

namespace {

struct SturmChain {
  std::vector<QPoly> seq;

  explicit SturmChain(const ZPoly& f) {
    seq.push_back(to_q(f));
    seq.push_back(derivative(seq[0]));
    while (!seq.back().empty() && degree(seq.back()) > 0) {
      QPoly r = rem(seq[seq.size() - 2], seq.back());
      if (r.empty()) break;
      seq.push_back(scale(r, -1));
    }
  }

  int variations(const Rational& x) const {
    int count = 0, last = 0;
    for (const auto& p : seq) {
      int s = sgn(eval(p, x));
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }
};

}  // namespace

std::vector<RootInterval> isolate_real_roots(const ZPoly& f) {
  std::vector<RootInterval> out;
  if (degree(f) < 1) return out;
  if (degree(f) == 1) {
    Rational r(-f[0], f[1]);
    r.canonicalize();
    out.push_back({r, r});
    return out;
  }
  SturmChain chain(f);
  Rational bound = 1;
  for (size_t i = 0; i + 1 < f.size(); ++i) {
    Rational c = abs(Rational(f[i], f.back()));
    if (c + 1 > bound) bound = c + 1;
  }
  QPoly fq = to_q(f);
  std::function<void(const Rational&, const Rational&, int, int)> split = [&](const Rational& lo, const Rational& hi,
                                                                              int vlo, int vhi) {
    int count = vlo - vhi;
    if (count <= 0) return;
    if (count == 1) {
      if (eval(fq, hi) == 0) {
        out.push_back({hi, hi});
      } else {
        out.push_back({lo, hi});
      }
      return;
    }
    Rational mid = (lo + hi) / 2;
    int vmid = chain.variations(mid);
    split(lo, mid, vlo, vmid);
    split(mid, hi, vmid, vhi);
  };
  Rational lo = -bound, hi = bound;
  split(lo, hi, chain.variations(lo), chain.variations(hi));
  return out;
}

void refine_root(const ZPoly& f, RootInterval& iv, const Rational& width) {
  if (iv.lo == iv.hi) return;
  QPoly fq = to_q(f);
  int s_hi = sgn(eval(fq, iv.hi));
  while (iv.hi - iv.lo > width) {
    Rational mid = (iv.lo + iv.hi) / 2;
    int s = sgn(eval(fq, mid));
    if (s == 0) {
      iv.lo = iv.hi = mid;
      return;
    }
    if (s == s_hi) {
      iv.hi = mid;
    } else {
      iv.lo = mid;
    }
  }
}

}  // namespace heightlab::poly
