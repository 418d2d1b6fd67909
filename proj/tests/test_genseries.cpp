#include <random>

#include "doctest.h"
#include "kummerlab/genseries.hpp"
#include "kummerlab/verify.hpp"
#include "oracle.hpp"

using namespace kummerlab;

namespace {

struct Lab {
  Lab(std::uint32_t p, std::uint32_t k, std::uint32_t ell)
      : F(p, k, ell), R(F), C(ell, p), E(R, C), G(E), L(G) {}
  FieldCtx F;
  PolyRing R;
  CycloCtx C;
  GaussEngine E;
  GaussCounter G;
  PsiLab L;
};

std::vector<Cyclo> coefficients_by_definition(const Lab& L, const Poly& r, int K) {
  std::vector<Cyclo> c;
  for (int k = 0; k <= K; ++k) {
    Cyclo s(L.C);
    for (std::uint64_t i = 0; i < L.R.count_monic(k); ++i) s += oracle::gauss(L.R, L.C, r, L.R.monic_from_index(k, i), 1);
    c.push_back(s);
  }
  return c;
}

void require_clean(const CheckLog& log) {
  for (const CheckStat& s : log.stats()) {
    CAPTURE(s.name);
    CAPTURE(s.failures.empty() ? std::string() : s.failures[0]);
    CHECK(s.total > 0);
    CHECK(s.passed == s.total);
  }
}

}  // namespace

TEST_SUITE("genseries") {

TEST_CASE("truncated series algebra") {
  CycloCtx C(3, 7);
  const int K = 9;
  std::mt19937_64 rng(2);
  TruncSeries a(C, K);
  a[0] = Cyclo::integer(C, 1);
  for (int k = 1; k <= K; ++k) a[k] = Cyclo::ell_root(C, static_cast<std::int64_t>(rng() % 3)).scaled(static_cast<std::int64_t>(rng() % 9) - 4);
  TruncSeries one(C, K);
  one[0] = Cyclo::integer(C, 1);
  CHECK(a * a.inverse() == one);
  const Cyclo c = Cyclo::integer(C, 343);
  const TruncSeries g = TruncSeries::geometric_inverse(C, K, c, 3);
  CHECK(g * (one - TruncSeries::monomial(C, K, c, 3)) == one);
  TruncSeries parts(C, K);
  for (int i = 0; i < 3; ++i) parts += a.class_part(i, 3);
  CHECK(parts == a);
  CHECK(a.shifted(2)[2] == a[0]);
  CHECK(a.first_difference(a.shifted(1)) == 0);
}

TEST_CASE("bracket representatives") {
  CHECK(bracket(-1, 3, false) == 2);
  CHECK(bracket(3, 3, false) == 0);
  CHECK(bracket(3, 3, true) == 3);
  CHECK(bracket(4, 3, true) == 1);
}

TEST_CASE("coefficient sums: counting engine equals the residue-sum definition") {
  Lab L(7, 1, 3);
  for (const char* r : {"1", "0,1", "2,1", "1,0,1", "3,2,1", "0,0,1"}) {
    CAPTURE(r);
    const Poly rp = L.R.from_text(r);
    CHECK(L.G.coefficients(rp, 3) == coefficients_by_definition(L, rp, 3));
  }
}

TEST_CASE("coefficient sums: counting engine equals term-by-term fast Gauss sums") {
  for (auto [p, k, ell] : {std::tuple{7u, 1u, 3u}, {3u, 2u, 4u}}) {
    Lab L(p, k, ell);
    std::mt19937_64 rng(p);
    for (int it = 0; it < 25; ++it) {
      Poly r = oracle::random_poly(L.R, rng, static_cast<int>(rng() % 4));
      if (it % 5 == 0) r = L.R.mul(r, r);
      if (it % 6 == 1) r = L.R.scale(r, 3 % L.F.q());
      Poly a = Poly::one(), v = Poly::one();
      if (it % 3 == 1) a = oracle::random_poly(L.R, rng, 1);
      if (it % 4 == 2) v = oracle::random_poly(L.R, rng, 1);
      const int j = 1 + it % (static_cast<int>(ell) - 1);
      CAPTURE(L.R.to_text(r));
      CHECK(L.G.coefficients(r, 4, j, a, v) == L.G.coefficients_naive(r, 4, j, a, v));
      CHECK(L.G.plain(r, 4, j) == L.G.coefficients(r, 4, j));
    }
  }
}

TEST_CASE("class-restricted generating series from its definition") {
  Lab L(7, 1, 3);
  const int K = 3;
  const Cyclo q3 = Cyclo::integer(L.C, 343);
  for (const char* r : {"1", "1,1", "0,0,1"}) {
    const Poly rp = L.R.from_text(r);
    const auto c = coefficients_by_definition(L, rp, K);
    for (int i = 0; i < 3; ++i) {
      TruncSeries s(L.C, K);
      for (int k = 0; k <= K; ++k)
        if (k % 3 == i) s[k] = c[k];
      s = s * TruncSeries::geometric_inverse(L.C, K, q3, 3);
      CHECK(L.L.psi_series(rp, i, K) == s);
      CHECK(L.L.psi_constrained(rp, Poly::one(), Poly::one(), i, K) == s);
    }
  }
}

TEST_CASE("rational form: B independence, series match, functional equation (small grid)") {
  Lab L(7, 1, 3);
  PsiSuiteOptions opt;
  require_clean(psi_suite(L.L, 1, opt));
}

TEST_CASE("rational form spot checks at ell = 4") {
  Lab L(3, 2, 4);
  PsiSuiteOptions opt;
  opt.max_coeff_degree = 6;
  require_clean(psi_spot(L.L, 1, 2, 11, opt));
}

TEST_CASE("series identities spot checks") {
  Lab L(7, 1, 3);
  require_clean(series_identity_spot(L.L, 6, 21));
}

TEST_CASE("minimal truncation B") {
  CHECK(PsiLab::min_B(0, 0, 3) == 1);
  CHECK(PsiLab::min_B(3, 1, 3) == 2);
  CHECK(PsiLab::min_B(1, 2, 3) == 1);
}

}  // TEST_SUITE
