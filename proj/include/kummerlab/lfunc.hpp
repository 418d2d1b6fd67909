#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "kummerlab/factor.hpp"
#include "kummerlab/gauss.hpp"

namespace kummerlab {

using cdouble = std::complex<double>;

// Element of the group ring Z[C_ell]: counts[e] multiplies zeta_ell^e.
using GroupRingElt = std::vector<std::int64_t>;

// L(u, chi) for chi = chi_c^j: coefficient n is sum_{f in M_n} chi(f), n < d.
struct LPoly {
  Poly modulus;
  int j = 1;
  int d = 0;
  std::vector<GroupRingElt> coeffs;  // length d

  Cyclo coeff(const CycloCtx& C, int n) const;
  std::vector<cdouble> embedded() const;  // zeta_ell -> e^{2 pi i / ell}
};

// Validates c squarefree and ell not dividing d (odd character family).
LPoly lpoly(const PolyRing& R, const Poly& c, int j = 1);
// Same coefficients without the family precondition, by summation over M_n.
LPoly lpoly_sum(const PolyRing& R, const Poly& c, int j, int ncoeffs);

struct FunctionalEquation {
  cdouble omega;
  double residual = 0;        // max coefficient mismatch in the embedding, relative to q^{(d-1)/2}
  double omega_dev = 0;       // | |omega| - 1 |
  bool exact = false;         // q^n c_{d-1-n} = c_{d-1} conj(c_n) in Z[zeta]
  double printed_odd_dev = 0;  // | |q^{(d-1)/2} c_{d-1}| - 1 |, the displayed odd-case normalization
  bool gauss_form_exact = false;  // c_{d-1} tau(chi on constants) = G(1, chi)
};
FunctionalEquation functional_equation(const LPoly& L, const GaussEngine& E);

struct AngleSet {
  std::vector<double> theta;     // sorted, in [0, 1)
  std::vector<cdouble> roots;
  double max_rh_residual = 0;    // max | |u| sqrt(q) - 1 |
};
// Companion-matrix eigenvalues with a Newton polish; throws if a root fails to converge.
AngleSet angles(const LPoly& L, std::uint32_t q);
std::vector<cdouble> poly_roots(const std::vector<cdouble>& coeffs);

enum class Vanishing { No, Yes, Ambiguous };
const char* vanishing_name(Vanishing v);

struct CentralValue {
  cdouble value;
  Vanishing vanishing = Vanishing::No;
  int order = 0;  // order of vanishing at u = q^{-1/2} (exact derivative tests)
};
CentralValue central_value(const LPoly& L, const CycloCtx& C, std::uint32_t q);
// Exact test of sum_n coeffs[n] q^{-n/2} = 0 for Z[zeta] coefficients.
Vanishing half_power_zero(const std::vector<Cyclo>& c, std::uint32_t q);

// Steps c through H_d (index order) and reports, for every prime P of degree
// <= max_prime_deg, the exponent chi_c(P) = (P/c) = (c/P), using a residue of c
// modulo each P that is updated digit by digit.
class FamilyScanner {
 public:
  FamilyScanner(const PrimeTable& T, int d, int max_prime_deg);
  int d() const { return d_; }
  // Per prime degree D, hist[D][e] = #{P in P_D : chi_c(P) = zeta^e}; zero values are not counted.
  using Hist = std::vector<std::vector<std::int64_t>>;
  void run(const std::function<void(const Poly& c, std::uint64_t index, const Hist& hist)>& fn,
           std::uint64_t begin = 0, std::uint64_t end = UINT64_MAX) const;
  std::uint64_t family_size() const;

 private:
  const PrimeTable* T_;
  int d_, maxD_;
  std::vector<std::uint8_t> squarefree_;
};

// L coefficients (degree < d) of chi_c^j from the prime histogram via the Euler product.
LPoly lpoly_from_hist(const Poly& c, int j, int d, int ell, const FamilyScanner::Hist& hist);
// sum_{f in M_n} Lambda(f) conj(chi_c^j(f)) from the histogram, as a group ring element.
GroupRingElt lambda_sum_conj(int n, int j, int ell, const FamilyScanner::Hist& hist);
GroupRingElt lambda_sum_direct(const PolyRing& R, const Poly& c, int j, int n);

cdouble embed(const GroupRingElt& g);

}  // namespace kummerlab
