#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kummerlab/lfunc.hpp"
#include "kummerlab/onelevel.hpp"
#include "oracle.hpp"

using namespace kummerlab;

namespace {

struct Lab {
  Lab(std::uint32_t p, std::uint32_t k, std::uint32_t ell) : F(p, k, ell), R(F), C(ell, p), E(R, C) {}
  FieldCtx F;
  PolyRing R;
  CycloCtx C;
  GaussEngine E;
};

// sum over zeros of the periodised Fejer kernel, summed in x directly
double sigma_zeros_direct(const std::vector<double>& theta, double v, int d) {
  auto phi = [v](double x) {
    if (x == 0) return 1.0;
    const double s = std::sin(std::numbers::pi * v * x) / (std::numbers::pi * v * x);
    return s * s;
  };
  double total = 0;
  for (double th : theta)
    for (int m = -200000; m <= 200000; ++m) total += phi((d - 1) * (th - m));
  return total;
}

}  // namespace

TEST_SUITE("lfunc") {

TEST_CASE("L-polynomial coefficients are the character sums over M_n") {
  for (auto [p, k, ell, d] : {std::tuple{7u, 1u, 3u, 4}, {3u, 2u, 4u, 3}, {13u, 1u, 3u, 2}, {11u, 1u, 5u, 3}}) {
    Lab L(p, k, ell);
    std::mt19937_64 rng(p * d);
    for (int it = 0; it < 12; ++it) {
      Poly c = oracle::random_poly(L.R, rng, d);
      if (!is_squarefree(L.R, c)) continue;
      for (int j = 1; j < static_cast<int>(ell); ++j) {
        const LPoly lp = lpoly(L.R, c, j);
        REQUIRE(lp.coeffs.size() == static_cast<std::size_t>(d));
        for (int n = 0; n < d; ++n) CHECK(lp.coeffs[n] == oracle::charsum(L.R, c, j, n));
        CHECK(lpoly_sum(L.R, c, j, d).coeffs == lp.coeffs);
      }
    }
  }
}

TEST_CASE("L-polynomial rejects the non-family moduli") {
  Lab L(7, 1, 3);
  CHECK_THROWS(lpoly(L.R, L.R.from_text("1,2,1"), 1));  // square
  CHECK_THROWS(lpoly(L.R, L.R.from_text("1,0,0,1"), 1));  // ell | d
}

TEST_CASE("family scanner histograms reproduce direct L-polynomials and prime sums") {
  for (auto [p, k, ell, d] : {std::tuple{7u, 1u, 3u, 4}, {3u, 2u, 4u, 3}}) {
    Lab L(p, k, ell);
    PrimeTable T(L.R, d, false);
    FamilyScanner S(T, d, d);
    std::uint64_t n = 0;
    S.run([&](const Poly& c, std::uint64_t, const FamilyScanner::Hist& h) {
      if (n++ % 37) return;
      for (int j = 1; j < static_cast<int>(ell); ++j) {
        REQUIRE(lpoly_from_hist(c, j, d, ell, h).coeffs == lpoly(L.R, c, j).coeffs);
        for (int m = 1; m <= d; ++m) REQUIRE(lambda_sum_conj(m, j, ell, h) == lambda_sum_direct(L.R, c, j, m));
      }
    });
    CHECK(n == S.family_size());
    CHECK(n == count_set(L.R, SetKind::H, d));
  }
}

TEST_CASE("zeros on the critical circle and the exact functional equation") {
  for (auto [p, k, ell, d] : {std::tuple{7u, 1u, 3u, 5}, {3u, 2u, 4u, 5}, {13u, 1u, 3u, 4}}) {
    Lab L(p, k, ell);
    std::mt19937_64 rng(d + p);
    for (int it = 0; it < 20; ++it) {
      const Poly c = oracle::random_poly(L.R, rng, d);
      if (!is_squarefree(L.R, c)) continue;
      const LPoly lp = lpoly(L.R, c, 1);
      const AngleSet a = angles(lp, L.F.q());
      CHECK(a.roots.size() == static_cast<std::size_t>(d - 1));
      CHECK(a.max_rh_residual < 1e-9);
      const FunctionalEquation fe = functional_equation(lp, L.E);
      CHECK(fe.exact);
      CHECK(fe.gauss_form_exact);
      CHECK(fe.residual < 1e-10);
      CHECK(fe.omega_dev < 1e-10);
    }
  }
}

TEST_CASE("roots of a known polynomial") {
  const std::vector<cdouble> c = {cdouble(-6), cdouble(11), cdouble(-6), cdouble(1)};  // (u-1)(u-2)(u-3)
  auto r = poly_roots(c);
  std::sort(r.begin(), r.end(), [](cdouble a, cdouble b) { return a.real() < b.real(); });
  REQUIRE(r.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(r[i] - cdouble(i + 1)) < 1e-10);
}

TEST_CASE("exact central-value vanishing test") {
  CycloCtx C(3, 7);
  auto I = [&](std::int64_t v) { return Cyclo::integer(C, v); };
  // 7 - 7 q^{-1}... with q = 7: sum c_n 7^{-n/2}
  CHECK(half_power_zero({I(1), I(0), I(-7)}, 7) == Vanishing::Yes);
  CHECK(half_power_zero({I(1), I(0), I(-6)}, 7) == Vanishing::No);
  CHECK(half_power_zero({I(7), I(-49)}, 49) == Vanishing::Yes);  // square q: sqrt is rational
  CHECK(half_power_zero({I(0), I(1)}, 7) == Vanishing::No);
}

TEST_CASE("sum over zeros equals the directly periodised Fejer kernel") {
  Lab L(7, 1, 3);
  std::mt19937_64 rng(8);
  for (double v : {0.5, 1.0, 1.7}) {
    for (int it = 0; it < 3; ++it) {
      const int d = 5;
      Poly c = oracle::random_poly(L.R, rng, d);
      if (!is_squarefree(L.R, c)) continue;
      const AngleSet a = angles(lpoly(L.R, c, 1), 7);
      const TestFunction phi = TestFunction::fejer(v);
      CHECK(std::abs(sigma_zeros(a.theta, phi, d) - sigma_zeros_direct(a.theta, v, d)) < 1e-4);
    }
  }
}

TEST_CASE("Fejer transform values") {
  const TestFunction phi = TestFunction::fejer(1.0);
  CHECK(phi.phi0() == doctest::Approx(1.0));
  CHECK(phi.hat(0.5) == doctest::Approx(0.5));
  CHECK(phi.hat(1.0) == 0.0);
  CHECK(phi.max_frequency(4) == 2);
  CHECK(TestFunction::fejer(2.0).hat(1.0) == doctest::Approx(0.25));
  CHECK_THROWS(TestFunction::fejer(0.0));
}

TEST_CASE("family average: explicit formula per character and thread independence") {
  Lab L(7, 1, 3);
  PrimeTable T(L.R, 6, false);
  const TestFunction phi = TestFunction::fejer(1.0);
  for (int d : {2, 4}) {
    const DensityReport one = family_average(T, L.C, d, phi, true, UINT64_MAX, 1);
    const DensityReport three = family_average(T, L.C, d, phi, true, UINT64_MAX, 3);
    CHECK(one.family_size == count_set(L.R, SetKind::H, d));
    CHECK(one.max_residual < 1e-8);
    CHECK(one.max_frequency_residual < 1e-8);
    CHECK(one.max_rh_residual < 1e-8);
    CHECK(one.ambiguous == 0);
    CHECK(one.mean_sigma == three.mean_sigma);
    CHECK(one.order_counts == three.order_counts);
    REQUIRE(one.rows.size() == three.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) CHECK(one.rows[i].sigma_zeros == three.rows[i].sigma_zeros);
    const ExplicitAverage ex = family_average_explicit(T, d, phi);
    CHECK(ex.family_size == one.family_size);
    CHECK(std::abs(ex.mean_sigma - one.mean_sigma) < 1e-9);
  }
}

TEST_CASE("row sink sees every row once in index order") {
  Lab L(7, 1, 3);
  PrimeTable T(L.R, 4, false);
  std::vector<Poly> seen;
  const DensityReport r = family_average(T, L.C, 4, TestFunction::fejer(1.0), false, UINT64_MAX, 2,
                                         [&](const CharacterDensityRow& row) { seen.push_back(row.c); });
  CHECK(seen.size() == r.family_size);
  CHECK(r.rows.empty());
  for (std::size_t i = 1; i < seen.size(); ++i) CHECK(L.R.monic_index(seen[i - 1]) < L.R.monic_index(seen[i]));
}

TEST_CASE("index cap truncates the scan") {
  Lab L(7, 1, 3);
  PrimeTable T(L.R, 4, false);
  const DensityReport r = family_average(T, L.C, 4, TestFunction::fejer(1.0), false, 1000);
  CHECK(r.truncated);
  CHECK(r.family_size < 1000);
}

}  // TEST_SUITE
