#include <random>

#include "doctest.h"
#include "kummerlab/sievelab.hpp"
#include "kummerlab/verify.hpp"
#include "oracle.hpp"

using namespace kummerlab;

namespace {

struct Lab {
  Lab() : F(7, 1, 3), R(F), C(3, 7), E(R, C) {}
  FieldCtx F;
  PolyRing R;
  CycloCtx C;
  GaussEngine E;
};

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> x(2 * n);
  for (auto& v : x) v = g(rng);
  return x;
}

std::complex<double> dot(const std::vector<double>& a, const std::vector<double>& b) {
  std::complex<double> s;
  for (std::size_t i = 0; i < a.size(); i += 2) s += std::complex<double>(a[i], a[i + 1]) * std::complex<double>(b[i], -b[i + 1]);
  return s;
}

}  // namespace

TEST_SUITE("sievelab") {

TEST_CASE("symbol matrix entries equal the residue symbol") {
  Lab L;
  for (auto [m, n] : {std::pair{2, 2}, {3, 2}, {1, 3}, {0, 2}, {2, 0}})
    for (bool all : {false, true}) {
      const SymbolMatrix A = symbol_matrix(L.R, m, n, all);
      CHECK(A.rows.size() == count_set(L.R, all ? SetKind::M : SetKind::H, m));
      CHECK(A.cols.size() == count_set(L.R, SetKind::H, n));
      for (std::size_t i = 0; i < A.rows.size(); ++i)
        for (std::size_t j = 0; j < A.cols.size(); ++j) {
          const int s = oracle::residue_symbol(L.R, A.rows[i], A.cols[j]);
          REQUIRE(A.row(i)[j] == (s == kZeroExp ? -1 : s));
        }
    }
}

TEST_CASE("adjoint is the conjugate transpose and norms agree with apply") {
  Lab L;
  const SymbolMatrix A = symbol_matrix(L.R, 3, 2);
  std::mt19937_64 rng(1);
  const auto x = random_vec(A.cols.size(), rng), y = random_vec(A.rows.size(), rng);
  const auto Ax = apply(A, 3, x), Ay = apply_adjoint(A, 3, y);
  CHECK(std::abs(dot(Ax, y) - dot(x, Ay)) < 1e-8 * (1 + std::abs(dot(Ax, y))));
  const auto norms = bilinear_norms(A, 3, x, 2);
  REQUIRE(norms.size() == 1);
  CHECK(norms[0] == doctest::Approx(std::real(dot(Ax, Ax))).epsilon(1e-12));
}

TEST_CASE("single column: the bilinear form is |H_m| |lambda|^2") {
  Lab L;
  SieveOptions o;
  o.trials = 5;
  for (int m = 0; m <= 3; ++m) {
    const SieveCell c = large_sieve_ratio(L.R, m, 0, o);
    const double hm = static_cast<double>(count_set(L.R, SetKind::H, m));
    CHECK(c.best_unimodular == doctest::Approx(hm));
    CHECK(c.ratio <= 1.0);
  }
}

TEST_CASE("orthogonality over a full period") {
  Lab L;
  const auto P1 = enumerate(L.R, SetKind::P, 1);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) {
      CHECK(orthogonality_sum(L.R, L.C, P1[a], P1[b], 2).is_zero());
      CHECK(orthogonality_sum(L.R, L.C, P1[a], L.R.mul(P1[b], P1[b + 1]), 3).is_zero());
    }
  // N1 = N2 gives the count of M coprime to N1
  CHECK(orthogonality_sum(L.R, L.C, P1[0], P1[0], 2) == Cyclo::integer(L.C, 49 - 7));
}

TEST_CASE("sieve grid: duality, refinement and thread independence") {
  Lab L;
  SieveOptions o;
  o.trials = 8;
  const SieveGrid g1 = large_sieve_grid(L.R, 3, o);
  o.threads = 3;
  const SieveGrid g3 = large_sieve_grid(L.R, 3, o);
  REQUIRE(g1.cells.size() == 16);
  CHECK(g1.max_refined_asymmetry() < 1e-6);
  for (std::size_t i = 0; i < g1.cells.size(); ++i) {
    const SieveCell &a = g1.cells[i], &b = g3.cells[i];
    CHECK(a.ratio == b.ratio);
    CHECK(a.krylov_sup == b.krylov_sup);
    CHECK(a.seed == b.seed);
    CHECK(std::isfinite(a.ratio));
    if (a.refined) CHECK(a.krylov_sup >= std::max(a.best_unimodular, a.best_rademacher) * (1 - 1e-9));
    if (a.duality_gap >= 0) CHECK(a.duality_gap < 1e-6);
    if (a.adjoint_estimate >= 0) {
      const SieveCell& t = g1.at(a.n, a.m);
      CHECK(a.adjoint_estimate >= std::max(t.best_unimodular, t.best_rademacher) * (1 - 1e-9));
    }
  }
  CHECK(sieve_envelope(7, 2, 3, false) == doctest::Approx(49 + 343 + std::pow(7.0, 10.0 / 3)));
}

TEST_CASE("h(b) values") {
  Lab L;
  CHECK(h_value(L.R, Poly::one()) == 0);
  CHECK(h_value(L.R, L.R.from_text("1,1")) == 1);          // prime of degree 1
  CHECK(h_value(L.R, L.R.from_text("3,0,1")) == (oracle::irreducible(L.R, L.R.from_text("3,0,1")) ? 2 : -2));
  CHECK(h_bound_holds(L.R, 4));
}

TEST_CASE("Vaughan branch sums against a direct prime loop") {
  Lab L;
  for (int n = 1; n <= 4; ++n) {
    VaughanLab V(L.E, n);
    for (const Poly& Rp : {Poly::one(), Poly::t(), L.R.from_text("2,1,1")}) {
      Cyclo h(L.C);
      for (const Poly& pi : enumerate(L.R, SetKind::P, n))
        if (!L.R.divides(pi, Rp)) h += oracle::gauss(L.R, L.C, Rp, pi, 1).scaled(n);
      CHECK(V.H(Rp) == h);
      for (int U = 0; U <= n; ++U) {
        const VaughanCell c = V.sigmas(Rp, U);
        CHECK(c.identity_holds());
        CHECK(c.s0 == h);
        if (2 * U < n) CHECK(c.s4.is_zero());
      }
    }
  }
}

TEST_CASE("Vaughan suite, n <= 4") {
  Lab L;
  const CheckLog log = vaughan_suite(L.E, 1, 4, {Poly::one(), Poly::t()});
  for (const CheckStat& s : log.stats()) {
    CAPTURE(s.name);
    CHECK(s.ok());
  }
}

TEST_CASE("prime cancellation sums equal term-by-term sums") {
  Lab L;
  GaussCounter G(L.E);
  PrimeTable T(L.R, 4, false);
  for (const Poly& Rp : {Poly::one(), L.R.from_text("3,1,1")})
    for (int n = 1; n <= 4; ++n) {
      Cyclo d(L.C);
      std::uint64_t np = 0;
      for (const Poly& pi : enumerate(L.R, SetKind::P, n))
        if (!L.R.divides(pi, Rp)) d += L.E.direct(Rp, pi, 1), ++np;
      const CancellationRow r = prime_cancellation(G, T, Rp, n);
      CHECK(r.S == d);
      CHECK(std::abs(r.value - d.to_complex()) < 1e-6);
      std::int64_t hist = 0;
      for (auto x : r.angle_hist) hist += x;
      CHECK(static_cast<std::uint64_t>(hist) == np);
      CHECK(r.primes == np);
    }
}

}  // TEST_SUITE
