#include "kummerlab/verify.hpp"

#include <memory>
#include <numeric>
#include <random>
#include <sstream>

namespace kummerlab {

void CheckLog::merge(const CheckLog& o) {
  for (const CheckStat& x : o.v_) {
    CheckStat& s = stat(x.name);
    s.passed += x.passed;
    s.total += x.total;
    s.worst = std::max(s.worst, x.worst);
    for (const auto& f : x.failures)
      if (s.failures.size() < kKeptFailures) s.failures.push_back(f);
  }
}

const CheckStat* CheckLog::find(const std::string& name) const {
  auto it = idx_.find(name);
  return it == idx_.end() ? nullptr : &v_[it->second];
}

bool CheckLog::all_ok() const {
  if (v_.empty()) return false;
  for (const auto& s : v_)
    if (!s.ok()) return false;
  return true;
}

CheckStat& CheckLog::stat(const std::string& name) {
  auto it = idx_.find(name);
  if (it != idx_.end()) return v_[it->second];
  idx_[name] = v_.size();
  v_.emplace_back();
  v_.back().name = name;
  return v_.back();
}

namespace {

// Residues mod c of degree < n, indexed by sum v_i q^i.
std::uint64_t residue_index(const Poly& v, std::uint32_t q) {
  std::uint64_t idx = 0;
  for (int i = v.deg(); i >= 0; --i) idx = idx * q + v.c[i];
  return idx;
}

Poly residue_poly(const PolyRing& R, int n, std::uint64_t idx) {
  Poly a = R.monic_from_index(n, idx);
  a.c.pop_back();
  a.trim();
  return a;
}

struct GaussTable {
  Poly c;
  std::vector<std::vector<Cyclo>> g;  // g[j][V], j = 0..ell-1
};

std::unique_ptr<GaussTable> gauss_table(const GaussEngine& E, const Poly& c) {
  const PolyRing& R = E.ring();
  auto t = std::make_unique<GaussTable>();
  t->c = c;
  CharTable chars(R, c);
  const std::uint64_t size = R.count_monic(c.deg());
  t->g.resize(E.ell());
  for (std::uint64_t v = 0; v < size; ++v) {
    const auto h = chars.histogram(residue_poly(R, c.deg(), v));
    for (int j = 0; j < E.ell(); ++j) t->g[j].push_back(CharTable::from_histogram(h, R.field(), E.cyclo(), j));
  }
  return t;
}

std::string describe(const PolyRing& R, std::initializer_list<std::pair<const char*, Poly>> polys, int j) {
  std::ostringstream o;
  for (const auto& [k, p] : polys) o << k << "=" << R.to_text(p) << " ";
  o << "j=" << j;
  return o.str();
}

// The prime-power case split at c = pi^i for residue r.
Cyclo prime_power_expected(const GaussEngine& E, const Poly& r, const Poly& pi, int i, int j,
                           const Cyclo& g1pi_ij) {
  const PolyRing& R = E.ring();
  const int L = E.ell(), d = pi.deg();
  const int alpha = r.is_zero() ? i : valuation(R, r, pi);  // alpha >= i behaves as infinity
  const bool trivial = (static_cast<std::int64_t>(i) * j) % L == 0;
  if (alpha >= i) {
    if (!trivial) return Cyclo(E.cyclo());
    return E.q_pow(i * d) - E.q_pow((i - 1) * d);
  }
  if (i >= alpha + 2) return Cyclo(E.cyclo());
  if (trivial) return -E.q_pow((i - 1) * d);
  Poly rt = r;
  for (int k = 0; k < alpha; ++k) rt = R.div_exact(rt, pi);
  const int s = symbol(R, rt, pi);
  return (E.q_pow((i - 1) * d) * g1pi_ij).mul_root(-static_cast<std::int64_t>(E.cyclo().p()) * i * j * s);
}

}  // namespace

CheckLog gauss_structure_exhaustive(const GaussEngine& E, int max_deg) {
  const PolyRing& R = E.ring();
  const FieldCtx& F = R.field();
  const std::uint32_t q = F.q();
  const int L = E.ell();
  const std::int64_t P = E.cyclo().p();
  CheckLog log;

  std::vector<std::vector<std::unique_ptr<GaussTable>>> tabs(max_deg + 1);
  for (int d = 0; d <= max_deg; ++d)
    for (std::uint64_t i = 0; i < R.count_monic(d); ++i) tabs[d].push_back(gauss_table(E, R.monic_from_index(d, i)));
  auto table_of = [&](const Poly& c) -> const GaussTable& { return *tabs[c.deg()][R.monic_index(c)]; };

  for (int d = 0; d <= max_deg; ++d) {
    const std::uint64_t size = R.count_monic(d);
    for (const auto& tp : tabs[d]) {
      const GaussTable& T = *tp;
      const Poly& c = T.c;
      const Factorization fac = factor(R, c);
      bool sqfree = true;
      for (const auto& f : fac.factors) sqfree &= f.second == 1;
      const Cyclo norm_expected = sqfree ? E.q_pow(d) : Cyclo(E.cyclo());

      std::vector<Poly> res(size);
      std::vector<char> unit(size);
      for (std::uint64_t v = 0; v < size; ++v) {
        res[v] = residue_poly(R, d, v);
        unit[v] = R.gcd(res[v], c).is_one() || d == 0;
      }

      for (int j = 1; j < L; ++j) {
        for (std::uint64_t v = 0; v < size; ++v) {
          const Cyclo& g = T.g[j][v];
          if (unit[v] && std::gcd(j, L) == 1)
            log.record("|G|^2 = |c| for squarefree c, 0 otherwise", g * g.conj() == norm_expected,
                       [&] { return describe(R, {{"r", res[v]}, {"c", c}}, j); });
          log.record("fast evaluation = definition", E.fast(res[v], c, j) == g,
                     [&] { return describe(R, {{"r", res[v]}, {"c", c}}, j); });
        }
      }

      // Twist rule over all units b and residues r, through the matrix of multiplication by b.
      if (d > 0) {
        std::vector<Fq> col(static_cast<std::size_t>(d) * d);
        std::vector<Fq> prod(d);
        for (std::uint64_t b = 0; b < size; ++b) {
          if (!unit[b]) continue;
          for (int i = 0; i < d; ++i) {
            Poly x = R.mod(R.mul(res[b], R.pow(Poly::t(), i)), c);
            for (int k = 0; k < d; ++k) col[i * d + k] = x[k];
          }
          const int e = symbol(R, res[b], c);  // (b/c)
          for (std::uint64_t v = 0; v < size; ++v) {
            std::fill(prod.begin(), prod.end(), 0);
            std::uint64_t rest = v;
            for (int i = 0; i < d; ++i) {
              const Fq ri = static_cast<Fq>(rest % q);
              rest /= q;
              if (ri == 0) continue;
              for (int k = 0; k < d; ++k) prod[k] = F.add(prod[k], F.mul(ri, col[i * d + k]));
            }
            std::uint64_t bv = 0;
            for (int k = d - 1; k >= 0; --k) bv = bv * q + prod[k];
            for (int j = 1; j < L; ++j) {
              const bool ok = T.g[j][bv] == T.g[j][v].mul_root(-P * j * e);
              log.record("twist rule G(br, c) = conj((b/c)^j) G(r, c)", ok,
                         [&] { return describe(R, {{"b", res[b]}, {"r", res[v]}, {"c", c}}, j); });
            }
          }
        }
      }

      // Coprime splitting, both forms, over every unitary split c = c1 c2.
      const std::size_t np = fac.factors.size();
      if (np >= 2) {
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << np); ++mask) {
          Poly c1 = Poly::one(), c2 = Poly::one();
          for (std::size_t k = 0; k < np; ++k) {
            const Poly pk = R.pow(fac.factors[k].first, fac.factors[k].second);
            if (mask >> k & 1) c1 = R.mul(c1, pk); else c2 = R.mul(c2, pk);
          }
          const GaussTable& T1 = table_of(c1);
          const GaussTable& T2 = table_of(c2);
          const int e21 = symbol(R, c2, c1);
          const Poly c2pow = R.pow(c2, static_cast<std::uint32_t>(L - 2));
          for (std::uint64_t v = 0; v < size; ++v) {
            const std::uint64_t i1 = residue_index(R.mod(res[v], c1), q);
            const std::uint64_t i2 = residue_index(R.mod(res[v], c2), q);
            const std::uint64_t i1t = residue_index(R.mulmod(res[v], c2pow, c1), q);
            for (int j = 1; j < L; ++j) {
              const Cyclo form1 = (T1.g[j][i1] * T2.g[j][i2]).mul_root(P * 2 * j * e21);
              const Cyclo form2 = T1.g[j][i1t] * T2.g[j][i2];
              auto params = [&] { return describe(R, {{"r", res[v]}, {"c1", c1}, {"c2", c2}}, j); };
              log.record("coprime split with (c2/c1)^{2j}", form1 == T.g[j][v], params);
              log.record("coprime split with r c2^{ell-2}", form2 == T.g[j][v], params);
            }
          }
        }
      }

      // Prime powers.
      if (np == 1) {
        const Poly& pi = fac.factors[0].first;
        const int i = fac.factors[0].second;
        const GaussTable& Tp = table_of(pi);
        for (std::uint64_t v = 0; v < size; ++v) {
          for (int j = 1; j < L; ++j) {
            const int ij = static_cast<int>((static_cast<std::int64_t>(i) * j) % L);
            const Cyclo expected = prime_power_expected(E, res[v], pi, i, j, Tp.g[ij][1]);
            log.record("prime-power case split", T.g[j][v] == expected,
                       [&] { return describe(R, {{"r", res[v]}, {"pi", pi}}, j) + " i=" + std::to_string(i); });
          }
        }
      }
    }
  }
  return log;
}

CheckLog gauss_structure_random(const GaussEngine& E, int samples, std::uint64_t seed, int max_deg) {
  const PolyRing& R = E.ring();
  const std::uint32_t q = R.q();
  const int L = E.ell();
  const std::int64_t P = E.cyclo().p();
  std::mt19937_64 rng(seed);
  auto rand_poly = [&](int deg, bool monic) {
    std::vector<Fq> c(deg + 1);
    for (auto& x : c) x = static_cast<Fq>(rng() % q);
    if (monic) c[deg] = 1;
    else if (c[deg] == 0) c[deg] = 1 + static_cast<Fq>(rng() % (q - 1));
    return Poly(c);
  };
  auto rand_deg = [&](int lo, int hi) { return lo + static_cast<int>(rng() % (hi - lo + 1)); };
  const auto linear_primes = enumerate(R, SetKind::P, 1);
  CheckLog log;
  for (int s = 0; s < samples; ++s) {
    const int j = 1 + static_cast<int>(rng() % (L - 1));
    const Poly c = rand_poly(rand_deg(1, max_deg), true);
    const Poly r = rand_poly(rand_deg(0, max_deg), false);
    const Cyclo g = E.direct(r, c, j);
    auto params = [&] { return describe(R, {{"r", r}, {"c", c}}, j); };
    log.record("fast evaluation = definition", E.fast(r, c, j) == g, params);
    if (R.gcd(r, c).is_one() && std::gcd(j, L) == 1) {
      const Cyclo expect = is_squarefree(R, c) ? E.q_pow(c.deg()) : Cyclo(E.cyclo());
      log.record("|G|^2 = |c| for squarefree c, 0 otherwise", g * g.conj() == expect, params);
    }
    Poly b;
    do b = rand_poly(rand_deg(0, max_deg), false);
    while (!R.gcd(b, c).is_one());
    const int e = symbol(R, b, c);
    log.record("twist rule G(br, c) = conj((b/c)^j) G(r, c)",
               E.direct(R.mul(b, r), c, j) == g.mul_root(-P * j * e),
               [&] { return describe(R, {{"b", b}, {"r", r}, {"c", c}}, j); });

    Poly c1, c2;
    do {
      c1 = rand_poly(rand_deg(1, max_deg - 1), true);
      c2 = rand_poly(rand_deg(1, max_deg - c1.deg()), true);
    } while (!R.gcd(c1, c2).is_one());
    const Cyclo g12 = E.direct(r, R.mul(c1, c2), j);
    const Cyclo g1 = E.direct(r, c1, j), g2 = E.direct(r, c2, j);
    auto sp = [&] { return describe(R, {{"r", r}, {"c1", c1}, {"c2", c2}}, j); };
    log.record("coprime split with (c2/c1)^{2j}", (g1 * g2).mul_root(P * 2 * j * symbol(R, c2, c1)) == g12, sp);
    log.record("coprime split with r c2^{ell-2}",
               E.direct(R.mul(r, R.pow(c2, static_cast<std::uint32_t>(L - 2))), c1, j) * g2 == g12, sp);

    const Poly pi = linear_primes[rng() % linear_primes.size()];
    const int i = rand_deg(1, max_deg);
    const int alpha = rand_deg(0, max_deg);
    Poly rt;
    do rt = rand_poly(rand_deg(0, 1), false);
    while (R.divides(pi, rt));
    const Poly rp = R.mul(rt, R.pow(pi, static_cast<std::uint32_t>(alpha)));
    const int ij = static_cast<int>((static_cast<std::int64_t>(i) * j) % L);
    const Cyclo expected = prime_power_expected(E, R.mod(rp, R.pow(pi, i)), pi, i, j, E.direct(Poly::one(), pi, ij));
    log.record("prime-power case split", E.direct(rp, R.pow(pi, i), j) == expected,
               [&] { return describe(R, {{"r", rp}, {"pi", pi}}, j) + " i=" + std::to_string(i); });
  }
  return log;
}

CheckLog poisson_suite(const GaussEngine& E, int max_deg) {
  const PolyRing& R = E.ring();
  const int L = E.ell();
  CheckLog log;
  for (int df = 1; df <= max_deg; ++df) {
    for (std::uint64_t idx = 0; idx < R.count_monic(df); ++idx) {
      const Poly f = R.monic_from_index(df, idx);
      const Factorization fac = factor(R, f);
      const std::size_t np = fac.factors.size();
      std::vector<Poly> parts;
      for (const auto& [pi, e] : fac.factors) parts.push_back(R.pow(pi, static_cast<std::uint32_t>(e)));
      // exponents 1..ell-1 at every prime: the characters of modulus exactly f
      std::vector<int> js(np, 1);
      while (true) {
        std::vector<std::pair<Poly, int>> spec;
        for (std::size_t k = 0; k < np; ++k) spec.emplace_back(parts[k], js[k]);
        const Character chi(R, spec);
        const CharTable table(R, chi);
        for (int m = 1; m <= df + 1; ++m) {
          const PoissonResult pr = poisson_check(E, chi, m, table);
          log.record(pr.odd_branch ? "odd branch" : "even branch", pr.residual_zero(), [&] {
            std::ostringstream o;
            o << "f=" << R.to_text(f) << " m=" << m << " j=";
            for (int x : js) o << x;
            return o.str();
          });
        }
        std::size_t k = 0;
        while (k < np && ++js[k] == L) js[k++] = 1;
        if (k == np) break;
      }
    }
  }
  return log;
}

namespace {

void psi_one(PsiLab& L, CheckLog& log, const Poly& r, int i, int K, const PsiSuiteOptions& opt,
             const std::vector<std::complex<double>>& panel, bool check_b, bool check_fe) {
  const PolyRing& R = L.engine().ring();
  const int ell = L.ell();
  auto params = [&] { return "r=" + R.to_text(r) + " i=" + std::to_string(i); };
  if (check_b) log.record("P independent of the truncation B", L.b_independent(r, i), params);
  log.record("rational form matches the defining series", L.series_oracle(r, i, K), params);
  if (check_fe) {
    const FeResult fe = L.functional_eq_check(r, i, opt.convention, panel);
    log.record("functional equation", fe.residual < opt.tol, params, fe.residual);
    log.record("functional equation involution", fe.involution < opt.tol, params, fe.involution);
  }
  for (int n = 0; n <= r.deg(); ++n) {
    const AfeResult a = L.afe_check(r, i, n, opt.convention, panel);
    log.record("approximate functional equation", a.residual_corrected < opt.tol,
               [&] { return params() + " n=" + std::to_string(n); }, a.residual_corrected);
  }
  if (ell == 3) {
    const ResidueResult rr = L.residue_at_pole(r, i);
    log.record("pole residue cross-check", rr.valid_match && rr.rel_error < opt.tol, params, rr.rel_error);
  }
}

}  // namespace

CheckLog psi_suite(PsiLab& L, int max_deg_r, const PsiSuiteOptions& opt) {
  const PolyRing& R = L.engine().ring();
  const int ell = L.ell();
  const auto panel = PsiLab::default_panel(R.q());
  CheckLog log;
  for (int d = 0; d <= max_deg_r; ++d)
    for (const Poly& r : enumerate(R, SetKind::M, d))
      for (int i = 0; i < ell; ++i) psi_one(L, log, r, i, d + 2 * ell, opt, panel, true, true);
  return log;
}

CheckLog psi_spot(PsiLab& L, int max_deg_r, int per_degree, std::uint64_t seed, const PsiSuiteOptions& opt) {
  const PolyRing& R = L.engine().ring();
  const std::uint32_t q = R.q();
  const int ell = L.ell();
  const int kmax = opt.max_coeff_degree;
  const auto panel = PsiLab::default_panel(q);
  std::mt19937_64 rng(seed);
  CheckLog log;
  auto fits = [&](int d, int i) { return i + ell * PsiLab::min_B(d, i, ell) <= kmax; };
  for (int d = 0; d <= max_deg_r; ++d) {
    for (int t = 0; t < per_degree; ++t) {
      std::vector<Fq> c(d + 1);
      for (auto& x : c) x = static_cast<Fq>(rng() % q);
      c[d] = 1;
      const Poly r(c);
      for (int i = 0; i < ell; ++i) {
        if (!fits(d, i)) continue;
        const int istar = ((d + 1 - i) % ell + ell) % ell;
        const bool b_ok = i + ell * (PsiLab::min_B(d, i, ell) + 1) <= kmax;
        psi_one(L, log, r, i, std::min(kmax, d + 2 * ell), opt, panel, b_ok, fits(d, istar));
      }
    }
  }
  return log;
}

CheckLog series_identity_suite(PsiLab& L, int K) {
  const PolyRing& R = L.engine().ring();
  const int ell = L.ell();
  CheckLog log;
  auto rec = [&](const IdentityCheck& c) { log.record(c.name, c.ok(), [&] { return c.params; }); };
  const auto P1 = enumerate(R, SetKind::P, 1);
  for (int d = 0; d <= 1; ++d)
    for (const Poly& r : enumerate(R, SetKind::M, d))
      for (const Poly& pi : P1) {
        if (R.divides(pi, r)) continue;
        std::vector<Poly> r0s{Poly::one()};
        if (d > 0) r0s.push_back(r);
        for (const Poly& r0 : r0s)
          for (int i = 0; i < ell; ++i)
            for (const auto& c : L.lemma51_check(r, r0, pi, i, K)) rec(c);
      }
  for (int d1 = 0; d1 <= 2; ++d1)
    for (const Poly& r1 : enumerate(R, SetKind::H, d1))
      for (int d2 = 0; d2 <= 1; ++d2)
        for (const Poly& r2 : enumerate(R, SetKind::H, d2)) {
          if (!R.gcd(r1, r2).is_one()) continue;
          std::vector<Poly> rs(ell, Poly::one());
          rs[1] = r1;
          if (ell > 2) rs[2] = r2;
          for (int i = 0; i < ell; ++i)
            for (int j = 1; j <= ell - 1; ++j) rec(L.lemma52_check(rs, j, i, K));
        }
  std::vector<Poly> rs;
  for (int d = 0; d <= 2; ++d)
    for (const Poly& r : enumerate(R, SetKind::M, d)) rs.push_back(r);
  for (const Poly& pi : P1) rs.push_back(R.pow(pi, static_cast<std::uint32_t>(ell)));
  for (const Poly& r : rs) {
    std::vector<Poly> as{Poly::one()};
    as.insert(as.end(), P1.begin(), P1.end());
    for (const Poly& a : as) {
      if (!R.gcd(r, a).is_one()) continue;
      for (int i = 0; i < ell; ++i) rec(L.theorem53_check(r, a, i, K));
    }
  }
  return log;
}

CheckLog series_identity_spot(PsiLab& L, int K, std::uint64_t seed) {
  const PolyRing& R = L.engine().ring();
  const std::uint32_t q = R.q();
  const int ell = L.ell();
  std::mt19937_64 rng(seed);
  auto rand_monic = [&](int d) {
    std::vector<Fq> c(d + 1);
    for (auto& x : c) x = static_cast<Fq>(rng() % q);
    c[d] = 1;
    return Poly(c);
  };
  const auto P1 = enumerate(R, SetKind::P, 1);
  auto pick = [&] { return P1[rng() % P1.size()]; };
  CheckLog log;
  auto rec = [&](const IdentityCheck& c) { log.record(c.name, c.ok(), [&] { return c.params; }); };
  for (int t = 0; t < 6; ++t) {
    const Poly r = rand_monic(t % 2);
    const Poly pi = pick();
    if (R.divides(pi, r)) continue;
    for (const auto& c : L.lemma51_check(r, Poly::one(), pi, t % ell, K)) rec(c);
    for (const auto& c : L.lemma51_check(r, r, pi, (t + 2) % ell, K)) rec(c);
  }
  for (int t = 0; t < 8; ++t) {
    std::vector<Poly> rs(ell, Poly::one());
    const int j = 1 + t % (ell - 1);
    rs[j] = pick();
    const int k2 = 1 + (t + 1) % (ell - 1);
    const Poly o = pick();
    if (k2 != j && o != rs[j]) rs[k2] = o;
    rec(L.lemma52_check(rs, j, t % ell, K));
  }
  for (int t = 0; t < 10; ++t) {
    Poly r = rand_monic(t % 3);
    if (t == 9) r = R.pow(P1[3 % P1.size()], static_cast<std::uint32_t>(ell));
    Poly a = t % 2 ? pick() : Poly::one();
    if (!R.gcd(r, a).is_one()) a = Poly::one();
    rec(L.theorem53_check(r, a, t % ell, K));
  }
  // higher levels r_2, r_3, ...
  for (int t = 0; t + 3 < static_cast<int>(P1.size()) && t < 6; ++t) {
    const Poly r = R.mul(R.pow(P1[t], static_cast<std::uint32_t>(2 + t % (ell - 1))), P1[t + 1]);
    rec(L.theorem53_check(r, P1[t + 3], t % ell, K));
  }
  return log;
}

CheckLog vaughan_suite(const GaussEngine& E, int min_n, int max_n, const std::vector<Poly>& Rs) {
  const PolyRing& R = E.ring();
  CheckLog log;
  for (int n = min_n; n <= max_n; ++n) {
    VaughanLab lab(E, n);
    for (const Poly& Rp : Rs) {
      const Cyclo H = lab.H(Rp);
      for (int U = 0; U <= n; ++U) {
        const VaughanCell cell = lab.sigmas(Rp, U);
        auto params = [&] { return "n=" + std::to_string(n) + " R=" + R.to_text(Rp) + " U=" + std::to_string(U); };
        log.record("Vaughan identity", cell.identity_holds(), params);
        log.record("Sigma_0 = H(n, R)", cell.s0 == H, params);
        if (2 * U < n) {
          log.record("Sigma_4 = 0 for U < n/2", cell.s4.is_zero(), params);
          const Lemma61Result lr = lab.lemma61_check(Rp, U);
          log.record("Sigma_1 as a divisor sum of F", lr.sigma1_ok, params);
          log.record("Sigma_2' as a divisor sum of F with h(b)", lr.sigma2p_ok, params);
        }
      }
    }
  }
  log.record("|h(b)| <= deg b", h_bound_holds(R, max_n), [&] { return "deg b <= " + std::to_string(max_n); });
  return log;
}

}  // namespace kummerlab
