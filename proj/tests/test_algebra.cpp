#include <random>
#include <set>

#include "doctest.h"
#include "oracle.hpp"

using namespace kummerlab;

namespace {

struct FieldCase {
  std::uint32_t p, k, ell;
};
const FieldCase kFields[] = {{7, 1, 3}, {3, 2, 4}, {13, 1, 3}, {5, 2, 3}, {11, 1, 5}, {7, 2, 4}};

// Necklace count of monic irreducibles of degree n.
std::uint64_t necklace(std::uint64_t q, int n) {
  auto mu = [](int m) {
    int r = 1;
    for (int p = 2; p * p <= m; ++p)
      if (m % p == 0) {
        m /= p;
        if (m % p == 0) return 0;
        r = -r;
      }
    return m > 1 ? -r : r;
  };
  std::int64_t s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) {
      std::int64_t t = 1;
      for (int i = 0; i < n / d; ++i) t *= static_cast<std::int64_t>(q);
      s += mu(d) * t;
    }
  return static_cast<std::uint64_t>(s / n);
}

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("field tables agree with digit arithmetic") {
  for (auto fc : kFields) {
    CAPTURE(fc.p);
    CAPTURE(fc.k);
    FieldCtx F(fc.p, fc.k, fc.ell);
    const Fq q = F.q();
    for (Fq a = 0; a < q; ++a)
      for (Fq b = 0; b < q; ++b) {
        REQUIRE(F.mul(a, b) == F.mul_digits(a, b));
        REQUIRE(F.add(a, b) == F.add_digits(a, b));
      }
    for (Fq a = 1; a < q; ++a) {
      CHECK(F.mul(a, F.inv(a)) == 1);
      CHECK(F.exp(F.log(a)) == a);
      CHECK(F.from_text(F.to_text(a)) == a);
    }
  }
}

TEST_CASE("generator has order q-1 and zeta is a primitive ell-th root") {
  for (auto fc : kFields) {
    FieldCtx F(fc.p, fc.k, fc.ell);
    std::set<Fq> seen;
    Fq x = 1;
    for (std::uint32_t i = 0; i + 1 < F.q(); ++i) {
      seen.insert(x);
      x = F.mul(x, F.gen());
    }
    CHECK(x == 1);
    CHECK(seen.size() == F.q() - 1);
    CHECK(F.pow(F.zeta(), F.ell()) == 1);
    for (std::uint32_t j = 1; j < F.ell(); ++j) CHECK(F.pow(F.zeta(), j) != 1);
    for (std::uint32_t j = 0; j < F.ell(); ++j) CHECK(F.omega(F.pow(F.zeta(), j)) == static_cast<int>(j));
    CHECK(F.omega(0) == kZeroExp);
  }
}

TEST_CASE("trace is additive, Frobenius-invariant and lands in F_p") {
  for (auto fc : kFields) {
    FieldCtx F(fc.p, fc.k, fc.ell);
    for (Fq a = 0; a < F.q(); ++a) {
      Fq s = 0, x = a;
      for (std::uint32_t i = 0; i < F.k(); ++i) s = F.add(s, x), x = F.pow(x, F.p());
      CHECK(F.from_int(F.trace(a)) == s);
      CHECK(F.trace(F.pow(a, F.p())) == F.trace(a));
    }
  }
}

TEST_CASE("field rejects a missing ell-th root of unity") {
  CHECK_THROWS(FieldCtx(5, 1, 3));
}

TEST_CASE("polynomial division, gcd and text round trip") {
  FieldCtx F(7, 1, 3);
  PolyRing R(F);
  std::mt19937_64 rng(1);
  for (int it = 0; it < 300; ++it) {
    const Poly a = oracle::random_poly(R, rng, static_cast<int>(rng() % 7), false);
    const Poly b = oracle::random_poly(R, rng, static_cast<int>(rng() % 5), false);
    const auto [qq, r] = R.divrem(a, b);
    CHECK(R.add(R.mul(qq, b), r) == a);
    CHECK(r.deg() < b.deg());
    const Poly g = R.gcd(a, b);
    CHECK(R.divides(g, a));
    CHECK(R.divides(g, b));
    CHECK(R.gcd(R.div_exact(a, g), R.div_exact(b, g)).is_one());
    CHECK(R.from_text(R.to_text(a)) == a);
    if (a.is_monic()) CHECK(R.monic_from_index(a.deg(), R.monic_index(a)) == a);
  }
  CHECK_THROWS(R.divrem(Poly::t(), Poly()));
}

TEST_CASE("monic irreducible counts match the necklace formula") {
  for (auto fc : {FieldCase{7, 1, 3}, FieldCase{3, 2, 4}, FieldCase{13, 1, 3}}) {
    FieldCtx F(fc.p, fc.k, fc.ell);
    PolyRing R(F);
    PrimeTable T(R, 5, false);
    for (int n = 1; n <= (F.q() > 10 ? 4 : 5); ++n) {
      CAPTURE(n);
      CHECK(T.indices(n).size() == necklace(F.q(), n));
      CHECK(count_set(R, SetKind::P, n) == necklace(F.q(), n));
    }
  }
}

TEST_CASE("irreducibility and factorisation agree with trial division") {
  for (auto fc : {FieldCase{7, 1, 3}, FieldCase{3, 2, 4}, FieldCase{5, 2, 3}}) {
    FieldCtx F(fc.p, fc.k, fc.ell);
    PolyRing R(F);
    std::mt19937_64 rng(fc.p * 31 + fc.k);
    for (int it = 0; it < 200; ++it) {
      const Poly f = oracle::random_poly(R, rng, 1 + static_cast<int>(rng() % 6));
      CAPTURE(R.to_text(f));
      CHECK(is_irreducible(R, f) == oracle::irreducible(R, f));
      const Factorization fac = factor(R, f);
      CHECK(expand(R, fac) == f);
      auto naive = oracle::trial_factor(R, f);
      CHECK(fac.factors.size() == naive.size());
      for (const auto& [pi, e] : fac.factors) CHECK(is_irreducible(R, pi));
      bool sf = true;
      for (const auto& [pi, e] : naive) sf = sf && e == 1;
      CHECK(is_squarefree(R, f) == sf);
    }
  }
}

TEST_CASE("Mobius sums vanish and squarefree counts are q^n - q^(n-1)") {
  FieldCtx F(7, 1, 3);
  PolyRing R(F);
  PrimeTable T(R, 4, false);
  for (int n = 2; n <= 4; ++n) {
    const auto mu = T.mobius_table(n);
    std::int64_t s = 0;
    for (auto x : mu) s += x;
    CHECK(s == 0);  // sum of mu over M_n for n >= 2
    std::uint64_t sf = 0;
    for (auto x : T.squarefree_flags(n)) sf += x;
    CHECK(sf == R.count_monic(n) - R.count_monic(n - 1));
    CHECK(count_set(R, SetKind::H, n) == sf);
    const auto lam = T.mangoldt_table(n);
    std::uint64_t tot = 0;
    for (auto x : lam) tot += x;
    CHECK(tot == R.count_monic(n));  // sum_{f in M_n} Lambda(f) = q^n
  }
}

TEST_CASE("monic odometer walks index order") {
  FieldCtx F(3, 2, 4);
  PolyRing R(F);
  MonicOdometer od(R, 3);
  std::uint64_t n = 0;
  do {
    REQUIRE(od.index() == n);
    REQUIRE(od.poly() == R.monic_from_index(3, n));
    ++n;
  } while (od.next() >= 0);
  CHECK(n == R.count_monic(3));
}

TEST_CASE("cyclotomic ring arithmetic matches the complex embedding") {
  for (auto [ell, p] : {std::pair{3u, 7u}, {4u, 3u}, {5u, 11u}}) {
    CycloCtx C(ell, p);
    std::mt19937_64 rng(ell);
    auto rnd = [&] {
      Cyclo x(C);
      for (int i = 0; i < 6; ++i) x.add_root(static_cast<std::int64_t>(rng() % C.m()), static_cast<std::int64_t>(rng() % 7) - 3);
      return x;
    };
    for (int it = 0; it < 50; ++it) {
      const Cyclo a = rnd(), b = rnd();
      const auto za = a.to_complex(), zb = b.to_complex();
      CHECK(std::abs((a * b).to_complex() - za * zb) < 1e-9);
      CHECK(std::abs((a + b).to_complex() - (za + zb)) < 1e-9);
      CHECK(std::abs(a.conj().to_complex() - std::conj(za)) < 1e-9);
      CHECK((a * b) == (b * a));
      CHECK((a - a).is_zero());
    }
    Cyclo s(C);
    for (std::uint32_t e = 0; e < ell; ++e) s += Cyclo::ell_root(C, e);
    CHECK(s.is_zero());
    CHECK(Cyclo::ell_root(C, 1).pow(ell) == Cyclo::integer(C, 1));
  }
}

TEST_CASE("scalar Gauss sum has norm q") {
  for (auto fc : kFields) {
    FieldCtx F(fc.p, fc.k, fc.ell);
    CycloCtx C(fc.ell, fc.p);
    for (std::uint32_t j = 1; j < fc.ell; ++j) {
      const Cyclo t = tau_scalar(F, C, j);
      CHECK(t * t.conj() == Cyclo::integer(C, F.q()));
    }
  }
}

}  // TEST_SUITE
