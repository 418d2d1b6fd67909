#pragma once
// Direct-definition oracles. Nothing here calls the fast paths under test: symbols come from
// Euler's criterion at each prime factor, Gauss sums from the sum over all residues.

#include <cstdint>
#include <random>
#include <vector>

#include "kummerlab/characters.hpp"
#include "kummerlab/cyclo.hpp"
#include "kummerlab/factor.hpp"
#include "kummerlab/poly.hpp"

namespace oracle {

using namespace kummerlab;

// (a/pi) by Euler: a^{(|pi|-1)/ell} mod pi is a constant ell-th root of unity.
inline int symbol_at_prime(const PolyRing& R, const Poly& a, const Poly& pi) {
  const Poly r = R.mod(a, pi);
  if (r.is_zero()) return kZeroExp;
  unsigned __int128 e = 1;
  for (int i = 0; i < pi.deg(); ++i) e *= R.q();
  e = (e - 1) / R.field().ell();
  const Poly v = R.powmod(r, e, pi);
  return R.field().omega(v[0]);
}

// Multiplicative over the factorisation of c, found by trial division with monic polynomials.
inline std::vector<std::pair<Poly, int>> trial_factor(const PolyRing& R, Poly c) {
  std::vector<std::pair<Poly, int>> out;
  for (int d = 1; 2 * d <= c.deg(); ++d) {
    const std::uint64_t n = R.count_monic(d);
    for (std::uint64_t i = 0; i < n && 2 * d <= c.deg(); ++i) {
      const Poly g = R.monic_from_index(d, i);
      int e = 0;
      while (R.mod(c, g).is_zero()) {
        c = R.div_exact(c, g);
        ++e;
      }
      if (e) out.push_back({g, e});
    }
  }
  if (c.deg() > 0) out.push_back({R.monic(c), 1});
  return out;
}

inline int residue_symbol(const PolyRing& R, const Poly& a, const Poly& c) {
  const int ell = static_cast<int>(R.field().ell());
  int s = 0;
  for (const auto& [pi, e] : trial_factor(R, c)) {
    const int v = symbol_at_prime(R, a, pi);
    if (v == kZeroExp) return kZeroExp;
    s = (s + v * e) % ell;
  }
  return s;
}

// e_q(b / c) for deg b < deg c is zeta_p^{Tr(b_{deg c - 1})}.
inline std::uint32_t additive_trace(const PolyRing& R, const Poly& b, const Poly& c) {
  return R.field().trace(R.mod(b, c)[c.deg() - 1]);
}

// G_j(r, c) = sum_{a mod c} (a/c)^j e_q(r a / c)
inline Cyclo gauss(const PolyRing& R, const CycloCtx& C, const Poly& r, const Poly& c, int j) {
  Cyclo g(C);
  if (c.deg() == 0) return Cyclo::integer(C, 1);
  const std::uint64_t n = R.count_monic(c.deg());
  std::vector<Fq> digits(c.deg());
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    std::uint64_t x = idx;
    for (auto& d : digits) d = static_cast<Fq>(x % R.q()), x /= R.q();
    const Poly a(digits);
    const int s = residue_symbol(R, a, c);
    if (s == kZeroExp) continue;
    const std::uint32_t tr = additive_trace(R, R.mul(r, a), c);
    g.add_root(C.root_index(static_cast<std::int64_t>(s) * j, tr), 1);
  }
  return g;
}

// sum_{f in M_n} chi_c^j(f) as counts per power of zeta_ell
inline std::vector<std::int64_t> charsum(const PolyRing& R, const Poly& c, int j, int n) {
  const int ell = static_cast<int>(R.field().ell());
  std::vector<std::int64_t> out(ell, 0);
  for (std::uint64_t i = 0; i < R.count_monic(n); ++i) {
    const int s = residue_symbol(R, R.monic_from_index(n, i), c);
    if (s != kZeroExp) ++out[(static_cast<std::int64_t>(s) * j) % ell];
  }
  return out;
}

inline Cyclo from_counts(const CycloCtx& C, const std::vector<std::int64_t>& counts) {
  Cyclo x(C);
  for (std::size_t e = 0; e < counts.size(); ++e) x.add_root(C.root_index(static_cast<std::int64_t>(e), 0), counts[e]);
  return x;
}

// Monic irreducible by trial division.
inline bool irreducible(const PolyRing& R, const Poly& f) {
  const auto fac = trial_factor(R, f);
  return fac.size() == 1 && fac[0].second == 1;
}

// Random polynomial of exact degree d; monic when asked.
inline Poly random_poly(const PolyRing& R, std::mt19937_64& rng, int d, bool monic = true) {
  std::vector<Fq> c(d + 1);
  for (auto& x : c) x = static_cast<Fq>(rng() % R.q());
  if (monic) c[d] = 1;
  else while (c[d] == 0) c[d] = static_cast<Fq>(rng() % R.q());
  return Poly(c);
}

}  // namespace oracle
