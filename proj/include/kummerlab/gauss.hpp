#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "kummerlab/characters.hpp"
#include "kummerlab/factor.hpp"

namespace kummerlab {

// Character values on every residue a mod f (a indexed by its coefficient digits),
// with the additive-character sum G(V, chi) = sum_a chi(a) e_q(V a / f) evaluated
// by one pass over the residues.
class CharTable {
 public:
  CharTable(const PolyRing& R, const Character& chi);
  // Power residue (a/c); raise to j through gauss(V, C, j).
  CharTable(const PolyRing& R, const Poly& c);

  const Poly& modulus() const { return f_; }
  std::int8_t value(std::uint64_t residue_index) const { return sym_[residue_index]; }
  // Histogram counts[e * p + b] of (chi exponent e, trace b) over the residues.
  std::vector<std::int64_t> histogram(const Poly& V) const;
  Cyclo gauss(const Poly& V, const CycloCtx& C, int j = 1) const;
  // Character sum over all residues a with chi raised to j and no additive twist.
  static Cyclo from_histogram(const std::vector<std::int64_t>& h, const FieldCtx& F, const CycloCtx& C, int j);

 private:
  void build(const std::function<int(const Poly&)>& eval);
  const PolyRing* R_;
  Poly f_;
  std::vector<std::int8_t> sym_;
};

class GaussEngine {
 public:
  GaussEngine(const PolyRing& R, const CycloCtx& C);

  const PolyRing& ring() const { return *R_; }
  const FieldCtx& field() const { return R_->field(); }
  const CycloCtx& cyclo() const { return *C_; }
  int ell() const { return static_cast<int>(R_->field().ell()); }

  const Cyclo& tau(int j) const;              // tau(chi_0^j)
  const Cyclo& tau_pow(int j, int n) const;  // tau(chi_0^j)^n, cached
  Cyclo zeta_ell(std::int64_t e) const { return Cyclo::ell_root(*C_, e); }
  Cyclo q_pow(int e) const;  // exact integer q^e

  // Definition: sum over all a mod c. Guarded by direct_budget on |c|.
  Cyclo direct(const Poly& r, const Poly& c, int j) const;
  // Factor c; coprime splitting with the (c_2/c_1)^{2j} twist and the prime-power cases.
  Cyclo fast(const Poly& r, const Poly& c, int j) const;
  Cyclo fast(const Poly& r, const Factorization& fc, int j) const;
  // G_j(r, pi^i) by the prime-power case split.
  Cyclo prime_power(const Poly& r, const Poly& pi, int i, int j) const;
  // G_j(rt, pi) for a prime pi not dividing rt: residue sum when |pi| <= prime_direct_limit,
  // otherwise (pi'/pi)^j (-1)^{deg+1} tau^deg (Hasse-Davenport lift) with the twist.
  Cyclo prime_level(const Poly& rt, const Poly& pi, int j) const;
  // Squarefree F coprime to r, from the discriminant class of F.
  Cyclo squarefree_closed(const Poly& r, const Poly& F, int j) const;
  // (-1)^sigma zeta^{j e} tau_j^n for a w class (see w_class)
  Cyclo from_w_class(int w, int n, int j) const;

  std::uint64_t direct_budget = std::uint64_t{1} << 22;
  std::uint64_t prime_direct_limit = 4096;

 private:
  const PolyRing* R_;
  const CycloCtx* C_;
  std::vector<Cyclo> tau_;
  mutable std::map<std::pair<int, int>, Cyclo> tau_pow_;
};

// Valuation of pi in r (r != 0); -1 meaning infinity for r = 0.
int valuation(const PolyRing& R, const Poly& r, const Poly& pi);

// Poisson summation on a character mod f: both sides of the dual identity,
// multiplied through by |f| (and by the q^{1/2} in the odd branch) so they are exact.
struct PoissonResult {
  Cyclo lhs;  // |f| * sum_{h in M_m} chi(h)
  Cyclo rhs;  // dual side, same scaling
  bool odd_branch = false;
  bool residual_zero() const { return lhs == rhs; }
};
PoissonResult poisson_check(const GaussEngine& E, const Character& chi, int m);
// Same with the character table of chi already built (shared across m).
PoissonResult poisson_check(const GaussEngine& E, const Character& chi, int m, const CharTable& table);
Cyclo poisson_charsum(const GaussEngine& E, const Character& chi, int m);

}  // namespace kummerlab
