#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kummerlab/genseries.hpp"
#include "kummerlab/sievelab.hpp"

namespace kummerlab {

// Pass/fail counts per named identity, with the first few failing parameter sets.
struct CheckStat {
  std::string name;
  std::uint64_t passed = 0, total = 0;
  double worst = 0;  // largest residual seen, for numeric checks
  std::vector<std::string> failures;
  bool ok() const { return total > 0 && passed == total; }
};

class CheckLog {
 public:
  static constexpr std::size_t kKeptFailures = 5;

  template <class Params>
  void record(const std::string& name, bool ok, Params&& params, double value = 0) {
    CheckStat& s = stat(name);
    ++s.total;
    if (value > s.worst) s.worst = value;
    if (ok) {
      ++s.passed;
    } else if (s.failures.size() < kKeptFailures) {
      s.failures.push_back(params());
    }
  }
  void merge(const CheckLog& o);
  const std::vector<CheckStat>& stats() const { return v_; }
  const CheckStat* find(const std::string& name) const;
  bool all_ok() const;

 private:
  CheckStat& stat(const std::string& name);
  std::vector<CheckStat> v_;
  std::map<std::string, std::size_t> idx_;
};

// Gauss-sum structure over every monic c of degree <= max_deg and every r mod c (which covers
// all r of degree < deg c and, through reduction, every r): |G|^2 = |c| mu^2(c) for (r, c) = 1,
// the twist rule, both coprime-splitting forms, the prime-power case split and fast = direct.
CheckLog gauss_structure_exhaustive(const GaussEngine& E, int max_deg);
// The same identities on random (r, c, b, j) draws with deg <= max_deg.
CheckLog gauss_structure_random(const GaussEngine& E, int samples, std::uint64_t seed, int max_deg = 3);
// Dual identity for every order-ell character whose modulus is exactly f, for all monic f of
// degree 1..max_deg and m = 1..deg f + 1. Stats "even branch" and "odd branch".
CheckLog poisson_suite(const GaussEngine& E, int max_deg);

struct PsiSuiteOptions {
  double tol = 1e-8;
  FeConvention convention{false, 1, 1};
  int max_coeff_degree = 1 << 30;  // skip classes whose P needs C(r, k) beyond this k
};
// For every monic r with deg r <= max_deg_r and every class i: B-independence of P, the series
// oracle through deg r + 2 ell, the functional equation, the corrected approximate functional
// equation for every split n <= deg r, and (ell = 3) the pole residue cross-check.
CheckLog psi_suite(PsiLab& L, int max_deg_r, const PsiSuiteOptions& opt = {});
// Random r of degree <= max_deg_r under the coefficient limit (for larger ell).
CheckLog psi_spot(PsiLab& L, int max_deg_r, int per_degree, std::uint64_t seed, const PsiSuiteOptions& opt);

// Coprimality, level-sum and full-expansion identities of the truncated series through K.
// Grid: r of deg <= 1 against linear pi for the coprimality identities, squarefree coprime
// (r1, r2) with deg r1 <= 2, deg r2 <= 1 for the level sums, and all r of deg <= 2 plus the
// cubes of linear primes with a in {1} + linear primes for the expansion.
CheckLog series_identity_suite(PsiLab& L, int K);
// Random spot checks of the same identities (used for ell = 5).
CheckLog series_identity_spot(PsiLab& L, int K, std::uint64_t seed);

// The Vaughan identity for every U in 0..n, Sigma_4 = 0 for U < n/2, Sigma_0 = H(n, R), and the
// two divisor-sum forms of Sigma_1, Sigma_2' for U < n/2, for n = min_n..max_n and each R; plus
// |h(b)| <= deg b over squarefree b of degree <= max_n.
CheckLog vaughan_suite(const GaussEngine& E, int min_n, int max_n, const std::vector<Poly>& Rs);

}  // namespace kummerlab
