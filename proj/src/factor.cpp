#include "kummerlab/factor.hpp"

#include <algorithm>
#include <cstring>
#include <random>
#include <stdexcept>

#include "kummerlab/cache.hpp"

namespace kummerlab {

namespace {

std::vector<int> prime_divisors(int d) {
  std::vector<int> out;
  for (int s = 2; s * s <= d; ++s) {
    if (d % s) continue;
    out.push_back(s);
    while (d % s == 0) d /= s;
  }
  if (d > 1) out.push_back(d);
  return out;
}

// x^{q^e} mod f
Poly frobenius_power(const PolyRing& R, const Poly& f, int e) {
  Poly h = R.mod(Poly::t(), f);
  for (int i = 0; i < e; ++i) h = R.powmod(h, R.q(), f);
  return h;
}

Poly pth_root(const PolyRing& R, const Poly& f) {
  const FieldCtx& F = R.field();
  const std::uint32_t p = F.p();
  std::vector<Fq> c(f.deg() / p + 1, 0);
  const std::uint64_t e = F.q() / p;  // a^{q/p} inverts Frobenius
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.pow(f[i * p], e);
  return Poly(std::move(c));
}

void squarefree_split(const PolyRing& R, const Poly& f, int scale, std::vector<std::pair<Poly, int>>& out) {
  if (f.deg() <= 0) return;
  Poly c = R.gcd(f, R.derivative(f));
  Poly w = R.div_exact(f, c);
  int i = 1;
  while (w.deg() > 0) {
    Poly y = R.gcd(w, c);
    Poly z = R.div_exact(w, y);
    if (z.deg() > 0) out.emplace_back(z, i * scale);
    ++i;
    w = y;
    c = R.div_exact(c, y);
  }
  if (c.deg() > 0) squarefree_split(R, pth_root(R, c), scale * static_cast<int>(R.field().p()), out);
}

void equal_degree_split(const PolyRing& R, const Poly& g, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
  if (g.deg() == d) {
    out.push_back(g);
    return;
  }
  const std::uint32_t q = R.q();
  while (true) {
    std::vector<Fq> a(g.deg());
    for (auto& x : a) x = static_cast<Fq>(rng() % q);
    Poly A(std::move(a));
    if (A.deg() <= 0) continue;
    // A^{(q^d-1)/2} = (A * A^q * ... * A^{q^{d-1}})^{(q-1)/2}
    Poly norm = A, conj = A;
    for (int s = 1; s < d; ++s) {
      conj = R.powmod(conj, q, g);
      norm = R.mulmod(norm, conj, g);
    }
    Poly b = R.sub(R.powmod(norm, (q - 1) / 2, g), Poly::one());
    Poly h = R.gcd(b, g);
    if (h.deg() > 0 && h.deg() < g.deg()) {
      equal_degree_split(R, h, d, rng, out);
      equal_degree_split(R, R.div_exact(g, h), d, rng, out);
      return;
    }
  }
}

template <class Fn>
void multiples_impl(const PolyRing& R, const Poly& pi, int m, Fn&& fn) {
  const FieldCtx& F = R.field();
  const std::uint32_t q = R.q();
  const int dp = pi.deg();
  const int n = dp + m;
  std::vector<std::uint64_t> qp(n + 1, 1);
  for (int i = 1; i <= n; ++i) qp[i] = qp[i - 1] * q;
  // start with g = t^m, so pi*g = pi shifted
  std::vector<Fq> prod(n + 1, 0);
  for (int i = 0; i <= dp; ++i) prod[m + i] = pi.c[i];
  std::uint64_t idx = 0;
  for (int j = 0; j < n; ++j) idx += prod[j] * qp[j];
  std::vector<Fq> g(m, 0);
  auto bump = [&](int pos, Fq delta) {
    for (int i = 0; i <= dp; ++i) {
      const int j = pos + i;
      if (j >= n) break;
      const Fq old = prod[j];
      const Fq nv = F.add(old, F.mul(delta, pi.c[i]));
      prod[j] = nv;
      idx = idx - old * qp[j] + nv * qp[j];
    }
  };
  while (true) {
    fn(idx);
    int pos = 0;
    while (pos < m) {
      const Fq old = g[pos];
      const Fq nv = old + 1 == q ? 0 : old + 1;
      g[pos] = nv;
      bump(pos, F.sub(nv, old));
      if (nv != 0) break;
      ++pos;
    }
    if (pos == m) return;
  }
}

std::string table_key(const PolyRing& R, int n) {
  const FieldCtx& F = R.field();
  std::string key = "primes;p=" + std::to_string(F.p()) + ";k=" + std::to_string(F.k()) + ";modulus=";
  for (auto d : F.modulus()) key += std::to_string(d) + ",";
  key += ";n=" + std::to_string(n);
  return key;
}

}  // namespace

bool is_irreducible(const PolyRing& R, const Poly& f) {
  const int d = f.deg();
  if (d <= 0) return false;
  if (d == 1) return true;
  const Poly x = Poly::t();
  Poly fm = R.monic(f);
  if (R.sub(frobenius_power(R, fm, d), R.mod(x, fm)).deg() >= 0) return false;
  for (int s : prime_divisors(d)) {
    Poly h = R.sub(frobenius_power(R, fm, d / s), x);
    if (R.gcd(h, fm).deg() != 0) return false;
  }
  return true;
}

Factorization factor(const PolyRing& R, const Poly& f, std::uint64_t seed) {
  if (f.is_zero()) throw std::domain_error("factor of zero polynomial");
  Factorization out;
  out.unit = f.lead();
  Poly g = R.monic(f);
  std::vector<std::pair<Poly, int>> sqf;
  squarefree_split(R, g, 1, sqf);
  std::mt19937_64 rng(seed);
  for (auto& [part, mult] : sqf) {
    Poly rest = part;
    Poly h = R.mod(Poly::t(), rest);
    for (int d = 1; rest.deg() >= 2 * d; ++d) {
      h = R.powmod(h, R.q(), rest);
      Poly gg = R.gcd(R.sub(h, Poly::t()), rest);
      if (gg.deg() > 0) {
        std::vector<Poly> pieces;
        equal_degree_split(R, gg, d, rng, pieces);
        for (auto& pc : pieces) out.factors.emplace_back(pc, mult);
        rest = R.div_exact(rest, gg);
        h = R.mod(h, rest);
      }
    }
    if (rest.deg() > 0) out.factors.emplace_back(rest, mult);
  }
  // merge equal primes (squarefree parts at different multiplicities are coprime, but keep it safe)
  std::sort(out.factors.begin(), out.factors.end(),
            [&](const auto& a, const auto& b) { return poly_less(a.first, b.first, R.q()); });
  std::vector<std::pair<Poly, int>> merged;
  for (auto& fe : out.factors) {
    if (!merged.empty() && merged.back().first == fe.first)
      merged.back().second += fe.second;
    else
      merged.push_back(fe);
  }
  out.factors = std::move(merged);
  return out;
}

Poly expand(const PolyRing& R, const Factorization& fac) {
  Poly r = Poly::constant(fac.unit);
  for (auto& [p, e] : fac.factors) r = R.mul(r, R.pow(p, static_cast<std::uint32_t>(e)));
  return r;
}

bool is_squarefree(const PolyRing& R, const Poly& f) {
  if (f.is_zero()) return false;
  if (f.deg() <= 0) return true;
  return R.gcd(f, R.derivative(f)).deg() == 0;
}

int mobius(const PolyRing& R, const Poly& f) {
  if (!is_squarefree(R, f)) return 0;
  return factor(R, f).factors.size() % 2 ? -1 : 1;
}

int von_mangoldt(const PolyRing& R, const Poly& f) {
  if (f.deg() <= 0) return 0;
  auto fac = factor(R, f);
  return fac.factors.size() == 1 ? fac.factors[0].first.deg() : 0;
}

std::uint64_t euler_phi(const PolyRing& R, const Poly& f) {
  std::uint64_t r = 1;
  for (auto& [p, e] : factor(R, f).factors) {
    const std::uint64_t np = R.count_monic(p.deg());
    r *= np - 1;
    for (int i = 1; i < e; ++i) r *= np;
  }
  return r;
}

Poly radical(const PolyRing& R, const Poly& f) {
  Poly r = Poly::one();
  for (auto& [p, e] : factor(R, f).factors) r = R.mul(r, p);
  return r;
}

EllDecomposition ell_decompose(const PolyRing& R, const Poly& r) {
  const int ell = static_cast<int>(R.field().ell());
  EllDecomposition d;
  d.r.assign(ell + 1, Poly::one());
  for (auto& [p, e] : factor(R, r).factors) {
    if (e % ell) d.r[e % ell] = R.mul(d.r[e % ell], p);
    if (e / ell) d.r[ell] = R.mul(d.r[ell], R.pow(p, static_cast<std::uint32_t>(e / ell)));
  }
  d.r_ell_star = Poly::one();
  for (auto& [p, e] : factor(R, d.r[ell]).factors) {
    bool elsewhere = false;
    for (int j = 1; j < ell; ++j) elsewhere |= R.divides(p, d.r[j]);
    if (!elsewhere) d.r_ell_star = R.mul(d.r_ell_star, p);
  }
  return d;
}

MonicOdometer::MonicOdometer(const PolyRing& R, int n) : q_(R.q()), n_(n), c_(n + 1, 0) { c_[n] = 1; }

int MonicOdometer::next() {
  for (int pos = 0; pos < n_; ++pos) {
    if (++c_[pos] < q_) {
      ++idx_;
      return pos;
    }
    c_[pos] = 0;
  }
  return -1;
}

void for_each_multiple(const PolyRing& R, const Poly& pi, int m, const std::function<void(std::uint64_t)>& fn) {
  multiples_impl(R, pi, m, fn);
}

std::vector<std::uint64_t> sieve_primes(const PolyRing& R, int n, const std::vector<std::vector<std::uint64_t>>& lower) {
  if (n <= 0) return {};
  const std::uint64_t total = R.count_monic(n);
  std::vector<std::uint8_t> composite(total, 0);
  for (int d = 1; 2 * d <= n; ++d)
    for (std::uint64_t pidx : lower.at(d)) {
      Poly pi = R.monic_from_index(d, pidx);
      multiples_impl(R, pi, n - d, [&](std::uint64_t i) { composite[i] = 1; });
    }
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < total; ++i)
    if (!composite[i]) out.push_back(i);
  return out;
}

PrimeTable::PrimeTable(const PolyRing& R, int max_n, bool use_cache) : R_(&R), max_n_(max_n), idx_(max_n + 1) {
  for (int n = 1; n <= max_n; ++n) {
    const std::string key = table_key(R, n);
    if (use_cache) {
      if (auto blob = cache::load("primes", key); blob && blob->size() % 8 == 0) {
        idx_[n].resize(blob->size() / 8);
        std::memcpy(idx_[n].data(), blob->data(), blob->size());
        ++hits_;
        continue;
      }
    }
    idx_[n] = sieve_primes(R, n, idx_);
    if (use_cache) {
      std::vector<std::uint8_t> blob(idx_[n].size() * 8);
      std::memcpy(blob.data(), idx_[n].data(), blob.size());
      cache::store("primes", key, blob);
    }
  }
}

std::vector<Poly> PrimeTable::primes(int n) const {
  std::vector<Poly> out;
  if (n == 0) return out;
  for (auto i : indices(n)) out.push_back(R_->monic_from_index(n, i));
  return out;
}

std::vector<std::uint8_t> PrimeTable::squarefree_flags(int n) const {
  std::vector<std::uint8_t> sf(R_->count_monic(n), 1);
  for (int d = 1; 2 * d <= n; ++d)
    for (auto pidx : indices(d)) {
      Poly pi = R_->monic_from_index(d, pidx);
      multiples_impl(*R_, R_->mul(pi, pi), n - 2 * d, [&](std::uint64_t i) { sf[i] = 0; });
    }
  return sf;
}

std::vector<std::int8_t> PrimeTable::mobius_table(int n) const {
  std::vector<std::int8_t> mu(R_->count_monic(n), 1);
  for (int d = 1; d <= n; ++d)
    for (auto pidx : indices(d)) {
      Poly pi = R_->monic_from_index(d, pidx);
      multiples_impl(*R_, pi, n - d, [&](std::uint64_t i) { mu[i] = static_cast<std::int8_t>(-mu[i]); });
    }
  for (int d = 1; 2 * d <= n; ++d)
    for (auto pidx : indices(d)) {
      Poly pi = R_->monic_from_index(d, pidx);
      multiples_impl(*R_, R_->mul(pi, pi), n - 2 * d, [&](std::uint64_t i) { mu[i] = 0; });
    }
  return mu;
}

std::vector<std::uint8_t> PrimeTable::mangoldt_table(int n) const {
  std::vector<std::uint8_t> lam(R_->count_monic(n), 0);
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    for (auto pidx : indices(d)) {
      Poly pi = R_->monic_from_index(d, pidx);
      lam[R_->monic_index(R_->pow(pi, static_cast<std::uint32_t>(n / d)))] = static_cast<std::uint8_t>(d);
    }
  }
  return lam;
}

std::vector<Poly> enumerate(const PolyRing& R, SetKind kind, int n) {
  std::vector<Poly> out;
  const std::uint64_t total = R.count_monic(n);
  for (std::uint64_t i = 0; i < total; ++i) {
    Poly f = R.monic_from_index(n, i);
    if (kind == SetKind::H && !is_squarefree(R, f)) continue;
    if (kind == SetKind::P && !is_irreducible(R, f)) continue;
    out.push_back(std::move(f));
  }
  return out;
}

std::uint64_t count_set(const PolyRing& R, SetKind kind, int n) {
  if (kind == SetKind::M) return R.count_monic(n);
  return enumerate(R, kind, n).size();
}

}  // namespace kummerlab
