#pragma once

#include <complex>
#include <string>
#include <vector>

#include "kummerlab/gausscount.hpp"

namespace kummerlab {

// Power series in u known exactly through degree K.
class TruncSeries {
 public:
  TruncSeries() = default;
  TruncSeries(const CycloCtx& C, int K);
  static TruncSeries from_coeffs(const CycloCtx& C, int K, const std::vector<Cyclo>& c);
  // (1 - c u^step)^{-1}
  static TruncSeries geometric_inverse(const CycloCtx& C, int K, const Cyclo& c, int step);
  static TruncSeries monomial(const CycloCtx& C, int K, const Cyclo& c, int deg);

  int K() const { return K_; }
  const CycloCtx& ctx() const { return *C_; }
  Cyclo& operator[](int k) { return c_[k]; }
  const Cyclo& operator[](int k) const { return c_[k]; }
  const std::vector<Cyclo>& coeffs() const { return c_; }

  TruncSeries operator+(const TruncSeries& o) const;
  TruncSeries operator-(const TruncSeries& o) const;
  TruncSeries operator*(const TruncSeries& o) const;
  TruncSeries& operator+=(const TruncSeries& o) { return *this = *this + o; }
  TruncSeries& operator-=(const TruncSeries& o) { return *this = *this - o; }
  TruncSeries scaled(const Cyclo& s) const;
  TruncSeries shifted(int s) const;  // times u^s, s >= 0
  // Multiplicative inverse; the constant term must be +-1.
  TruncSeries inverse() const;
  // Keep the degrees congruent to i mod ell.
  TruncSeries class_part(int i, int ell) const;
  // First degree where the two differ, or -1.
  int first_difference(const TruncSeries& o) const;
  bool operator==(const TruncSeries& o) const { return first_difference(o) < 0; }

 private:
  const CycloCtx* C_ = nullptr;
  int K_ = 0;
  std::vector<Cyclo> c_;
};

// psi^(i)(r, u) = u^i P(u^ell) / (1 - q^{ell+1} u^ell).
struct RatSeries {
  Poly r;
  int i = 0;
  int ell = 0;
  std::uint32_t q = 0;
  int B = 0;  // truncation used to build P
  std::vector<Cyclo> P;

  int deg_P() const;
  TruncSeries expand(int K) const;
  std::complex<double> eval(std::complex<double> u) const;
  // (1 - q^{ell+1} u^ell) psi at u, i.e. u^i P(u^ell)
  std::complex<double> numerator(std::complex<double> u) const;
  // P(q^{-ell-1}), the pole coefficient of psi in the variable u^ell
  std::complex<double> pole_value() const;
};

// [x]_ell in {0..ell-1}, or {1..ell} when one_based.
int bracket(int x, int ell, bool one_based);

struct FeConvention {
  bool one_based = false;  // bracket representative set
  int chi_ell_sign = -1;   // chi_ell = Omega^{chi_ell_sign} on alpha^{(q-1)/ell}
  int chi_r_sign = 1;      // chi_r restricted to constants as Omega^{chi_r_sign}
  std::string name() const;
  static std::vector<FeConvention> all();
};

struct FeResult {
  double residual = 0;         // max relative error over the panel
  double involution = 0;       // |M(u) M(1/(q^2 u)) - I| over the panel
  int i_star = 0;
};

struct AfeResult {
  double residual_literal = 0;    // with the (qu)^{deg r + 1 - ell} W term
  double residual_corrected = 0;  // without it
};

struct ResidueResult {
  std::complex<double> value;     // P(q^{-ell-1})
  int i_prime_literal = 0;        // least i' = i mod ell with i' > deg r
  int i_prime_valid = 0;          // i + ell B with B > (1 + deg r - i)/ell
  bool literal_match = false;     // exact equality for the literal i'
  bool valid_match = false;       // exact equality for i + ell B
  double rel_error = 0;           // numeric check at the valid i'
  double r1_ratio = 0;            // |value| / |r_1|^{-1/6}
};

struct IdentityCheck {
  std::string name;
  std::string params;
  int first_diff = -1;  // -1 if exact through K
  bool ok() const { return first_diff < 0; }
};

class PsiLab {
 public:
  explicit PsiLab(GaussCounter& G);
  GaussCounter& counter() { return *G_; }
  const GaussEngine& engine() const { return G_->engine(); }
  int ell() const { return G_->engine().ell(); }

  // minimal B = floor((1 + deg r - i)/ell) + 1; pass B >= minimal to override
  static int min_B(int deg_r, int i, int ell);
  RatSeries build_psi(const Poly& r, int i, int B = -1);
  // P computed at B and B + 1 agree
  bool b_independent(const Poly& r, int i);
  // (1 - q^ell u^ell)^{-1} sum_{deg F = i mod ell} G(r, F) u^{deg F}, through K
  TruncSeries psi_series(const Poly& r, int i, int K);
  TruncSeries psi_constrained(const Poly& r, const Poly& a, const Poly& v, int i, int K);
  // build_psi expanded against psi_series; also checks the pole structure.
  bool series_oracle(const Poly& r, int i, int K);

  Cyclo W(const Poly& r, int i, const FeConvention& cv) const;
  FeResult functional_eq_check(const Poly& r, int i, const FeConvention& cv,
                               const std::vector<std::complex<double>>& panel);
  AfeResult afe_check(const Poly& r, int i, int n, const FeConvention& cv,
                      const std::vector<std::complex<double>>& panel);
  ResidueResult residue_at_pole(const Poly& r, int i);

  // Three coprimality/divisibility identities for pi not dividing r, r0 | r.
  std::vector<IdentityCheck> lemma51_check(const Poly& r, const Poly& r0, const Poly& pi, int i, int K);
  // rs[1..ell-1] squarefree and pairwise coprime (rs[0] ignored); level 1 <= j <= ell-2,
  // or j = ell-1 for the r_{ell-1} statement.
  IdentityCheck lemma52_check(const std::vector<Poly>& rs, int j, int i, int K);
  // psi_r(r, a) against the full E-sum / d-sum expansion; r and a monic, a squarefree, (r, a) = 1.
  IdentityCheck theorem53_check(const Poly& r, const Poly& a, int i, int K);
  TruncSeries theorem53_rhs(const Poly& r, const Poly& a, int i, int K);

  static std::vector<std::complex<double>> default_panel(std::uint32_t q);

 private:
  Cyclo euler_coeff(const Poly& pi, int symbol_power) const;
  TruncSeries euler_inverse(const Poly& pi, int symbol_power, int K) const;
  Poly apply_d_power(const Poly& x, const Poly& d, int e) const;  // x / d^e, or x d^{-e}
  GaussCounter* G_;
};

}  // namespace kummerlab
