#include <random>

#include "doctest.h"
#include "kummerlab/gauss.hpp"
#include "kummerlab/verify.hpp"
#include "oracle.hpp"

using namespace kummerlab;

namespace {

void require_clean(const CheckLog& log) {
  for (const CheckStat& s : log.stats()) {
    CAPTURE(s.name);
    CAPTURE(s.failures.empty() ? std::string() : s.failures[0]);
    CHECK(s.total > 0);
    CHECK(s.passed == s.total);
  }
}

}  // namespace

TEST_SUITE("characters") {

TEST_CASE("residue symbol matches Euler's criterion at each prime") {
  for (auto [p, k, ell] : {std::tuple{7u, 1u, 3u}, {3u, 2u, 4u}, {11u, 1u, 5u}, {5u, 2u, 3u}}) {
    FieldCtx F(p, k, ell);
    PolyRing R(F);
    std::mt19937_64 rng(p + 100 * k);
    for (int it = 0; it < 400; ++it) {
      const Poly c = oracle::random_poly(R, rng, 1 + static_cast<int>(rng() % 5));
      const Poly a = oracle::random_poly(R, rng, static_cast<int>(rng() % 7), false);
      CAPTURE(R.to_text(a));
      CAPTURE(R.to_text(c));
      const int want = oracle::residue_symbol(R, a, c);
      CHECK(symbol(R, a, c) == want);
      CHECK(symbol_slow(R, a, c) == want);
    }
  }
}

TEST_CASE("reciprocity for monic coprime pairs when q = 1 mod 2 ell") {
  FieldCtx F(7, 1, 3);
  PolyRing R(F);
  std::mt19937_64 rng(3);
  int tested = 0;
  for (int it = 0; it < 400; ++it) {
    const Poly a = oracle::random_poly(R, rng, 1 + static_cast<int>(rng() % 4));
    const Poly c = oracle::random_poly(R, rng, 1 + static_cast<int>(rng() % 4));
    if (!R.gcd(a, c).is_one()) continue;
    ++tested;
    CHECK(oracle::residue_symbol(R, a, c) == oracle::residue_symbol(R, c, a));
  }
  CHECK(tested > 200);
}

TEST_CASE("symbol is multiplicative in both arguments") {
  FieldCtx F(13, 1, 3);
  PolyRing R(F);
  std::mt19937_64 rng(4);
  for (int it = 0; it < 200; ++it) {
    const Poly a = oracle::random_poly(R, rng, static_cast<int>(rng() % 4), false);
    const Poly b = oracle::random_poly(R, rng, static_cast<int>(rng() % 4), false);
    const Poly c = oracle::random_poly(R, rng, 1 + static_cast<int>(rng() % 3));
    const Poly d = oracle::random_poly(R, rng, 1 + static_cast<int>(rng() % 3));
    CHECK(symbol(R, R.mul(a, b), c) == add_exp(symbol(R, a, c), symbol(R, b, c), 3));
    CHECK(symbol(R, a, R.mul(c, d)) == add_exp(symbol(R, a, c), symbol(R, a, d), 3));
  }
}

TEST_CASE("character tables and composite characters agree with pointwise evaluation") {
  FieldCtx F(7, 1, 3);
  PolyRing R(F);
  const Poly c1 = R.from_text("1,0,1"), c2 = R.from_text("3,1");
  const Character chi(R, {{c1, 1}, {c2, 2}});
  const CharTable T(R, chi);
  const Poly f = chi.modulus();
  CHECK(f == R.mul(c1, c2));
  for (std::uint64_t i = 0; i < R.count_monic(f.deg()); ++i) {
    std::vector<Fq> d(f.deg());
    std::uint64_t x = i;
    for (auto& v : d) v = static_cast<Fq>(x % 7), x /= 7;
    const Poly a(d);
    const int want = add_exp(oracle::residue_symbol(R, a, c1), mul_exp(oracle::residue_symbol(R, a, c2), 2, 3), 3);
    REQUIRE(chi.eval(a) == want);
    REQUIRE(T.value(i) == (want == kZeroExp ? -1 : want));
  }
  CHECK(chi.restriction_exp() == (2 + 2) % 3);
  CHECK(chi.conj().eval(R.from_text("2,5")) == mul_exp(chi.eval(R.from_text("2,5")), 2, 3));
}

TEST_CASE("Gauss sums agree with the residue-sum definition") {
  for (auto [p, k, ell] : {std::tuple{7u, 1u, 3u}, {3u, 2u, 4u}, {13u, 1u, 3u}}) {
    FieldCtx F(p, k, ell);
    PolyRing R(F);
    CycloCtx C(ell, p);
    GaussEngine E(R, C);
    std::mt19937_64 rng(7 * p + k);
    for (int it = 0; it < 80; ++it) {
      const int dc = 1 + static_cast<int>(rng() % (F.q() > 10 ? 2 : 3));
      Poly c = oracle::random_poly(R, rng, dc);
      if (it % 4 == 0) c = R.mul(c, Poly(std::vector<Fq>{1, 1}));
      if (it % 7 == 0) c = R.mul(c, c);
      if (R.count_monic(c.deg()) > 60000) continue;
      const Poly r = oracle::random_poly(R, rng, static_cast<int>(rng() % 4), false);
      const int j = static_cast<int>(rng() % ell);
      CAPTURE(R.to_text(r));
      CAPTURE(R.to_text(c));
      CAPTURE(j);
      const Cyclo want = oracle::gauss(R, C, r, c, j);
      CHECK(E.direct(r, c, j) == want);
      CHECK(E.fast(r, c, j) == want);
    }
  }
}

TEST_CASE("Hasse-Davenport lift equals the residue sum at large primes") {
  FieldCtx F(7, 1, 3);
  PolyRing R(F);
  CycloCtx C(3, 7);
  GaussEngine lifted(R, C), summed(R, C);
  lifted.prime_direct_limit = 1;
  std::mt19937_64 rng(9);
  int n = 0;
  while (n < 40) {
    const Poly pi = oracle::random_poly(R, rng, 1 + static_cast<int>(rng() % 4));
    if (!oracle::irreducible(R, pi)) continue;
    ++n;
    const Poly r = oracle::random_poly(R, rng, static_cast<int>(rng() % 3), false);
    if (R.mod(r, pi).is_zero()) continue;
    for (int j = 1; j < 3; ++j) CHECK(lifted.prime_level(r, pi, j) == summed.prime_level(r, pi, j));
  }
}

TEST_CASE("squarefree closed form from the discriminant class") {
  FieldCtx F(7, 1, 3);
  PolyRing R(F);
  CycloCtx C(3, 7);
  GaussEngine E(R, C);
  for (int d = 1; d <= 3; ++d)
    for (const Poly& c : enumerate(R, SetKind::H, d))
      for (int j = 1; j < 3; ++j) REQUIRE(E.squarefree_closed(Poly::one(), c, j) == E.direct(Poly::one(), c, j));
}

TEST_CASE("Gauss-sum structure identities on a small exhaustive grid") {
  FieldCtx F(7, 1, 3);
  PolyRing R(F);
  CycloCtx C(3, 7);
  GaussEngine E(R, C);
  require_clean(gauss_structure_exhaustive(E, 2));
  FieldCtx F9(3, 2, 4);
  PolyRing R9(F9);
  CycloCtx C9(4, 3);
  GaussEngine E9(R9, C9);
  require_clean(gauss_structure_random(E9, 150, 5, 3));
}

TEST_CASE("Poisson summation: table-driven side equals the definition, both branches exact") {
  for (auto [p, k, ell] : {std::tuple{7u, 1u, 3u}, {3u, 2u, 4u}, {13u, 1u, 3u}}) {
    FieldCtx F(p, k, ell);
    PolyRing R(F);
    CycloCtx C(ell, p);
    GaussEngine E(R, C);
    std::mt19937_64 rng(p);
    bool seen_odd = false, seen_even = false;
    for (int it = 0; it < 30; ++it) {
      const Poly f = oracle::random_poly(R, rng, 1 + static_cast<int>(rng() % 2));
      const int j = 1 + static_cast<int>(rng() % (ell - 1));
      Character chi = Character::power_residue(R, f, j);
      if (it % 2) {
        // (./f1)(./f2)^{ell-1} with f1, f2 linear is trivial on constants
        const Poly f1 = oracle::random_poly(R, rng, 1), f2 = oracle::random_poly(R, rng, 1);
        if (f1 == f2) continue;
        chi = Character(R, {{f1, 1}, {f2, static_cast<int>(ell) - 1}});
      }
      for (int m = 0; m <= chi.modulus().deg() + 1; ++m) {
        const PoissonResult pr = poisson_check(E, chi, m);
        CHECK(pr.residual_zero());
        CHECK(pr.lhs == poisson_charsum(E, chi, m).scaled(static_cast<std::int64_t>(R.count_monic(chi.modulus().deg()))));
        (pr.odd_branch ? seen_odd : seen_even) = true;
      }
    }
    CHECK(seen_odd);
    CHECK(seen_even);
  }
}

TEST_CASE("Poisson suite on every modulus of degree <= 2") {
  FieldCtx F(7, 1, 3);
  PolyRing R(F);
  CycloCtx C(3, 7);
  GaussEngine E(R, C);
  const CheckLog log = poisson_suite(E, 2);
  require_clean(log);
  CHECK(log.find("odd branch") != nullptr);
  CHECK(log.find("even branch") != nullptr);
}

TEST_CASE("w classes: affine fill agrees with direct classification") {
  for (auto [p, k, ell, nmax] : {std::tuple{7u, 1u, 3u, 5}, {3u, 2u, 4u, 4}, {11u, 1u, 5u, 4}}) {
    FieldCtx F(p, k, ell);
    PolyRing R(F);
    for (int n = 0; n <= nmax; ++n) CHECK(build_wtable(R, n) == build_wtable_direct(R, n));
  }
}

}  // TEST_SUITE
