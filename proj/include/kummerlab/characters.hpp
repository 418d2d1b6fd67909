#pragma once

#include <cstdint>
#include <vector>

#include "kummerlab/cyclo.hpp"
#include "kummerlab/poly.hpp"

namespace kummerlab {

inline constexpr int kMaxKernelDeg = 127;

// log_gen Res(c, a) mod (q - 1) for monic c, or -1 when c and a have a common root.
// Euclidean loop: Res(c, a) = Res(c, a mod c), unit extraction, and the swap
// Res(A, B) = (-1)^{deg A deg B} Res(B, A) for monic A, B.
std::int64_t res_log(const FieldCtx& F, const Fq* c, int dc, const Fq* a, int da);
std::int64_t res_log(const PolyRing& R, const Poly& c, const Poly& a);

// ell-th residue symbol exponent (a/c), or kZeroExp. Reciprocity-driven fast path.
int symbol(const PolyRing& R, const Poly& a, const Poly& c);
// Definitional value at a prime: a^{(q^deg - 1)/ell} mod pi mapped through omega.
int symbol_prime(const PolyRing& R, const Poly& a, const Poly& pi);
// Factor c and multiply the definitional prime values.
int symbol_slow(const PolyRing& R, const Poly& a, const Poly& c);

inline int add_exp(int a, int b, int ell) { return (a == kZeroExp || b == kZeroExp) ? kZeroExp : (a + b) % ell; }
inline int mul_exp(int a, int s, int ell) {
  if (a == kZeroExp) return kZeroExp;
  return static_cast<int>(((static_cast<std::int64_t>(a) * s) % ell + ell) % ell);
}

// Trace to F_p of the 1/t coefficient of a/c (c monic); e_q(a/c) = zeta_p^{this}.
std::uint32_t eq_trace(const PolyRing& R, const Poly& a, const Poly& c);
Cyclo eq_char(const PolyRing& R, const CycloCtx& C, const Poly& a, const Poly& c);

// tau(chi_0^j) = sum_{a != 0} zeta_ell^{j log a} zeta_p^{Tr a}.
Cyclo tau_scalar(const FieldCtx& F, const CycloCtx& C, std::int64_t j);

// epsilon(chi) = tau(chi)/sqrt(q) for odd chi and 1 for even chi. Kept as the exact
// tau together with a flag; the q^{1/2} is applied only in complex embeddings.
struct ScalarEpsilon {
  Cyclo tau;
  bool odd = false;
  std::complex<double> value(std::uint32_t q) const;
};
ScalarEpsilon epsilon(const FieldCtx& F, const CycloCtx& C, std::int64_t restriction_exp);

// chi = prod_i chi_{c_i}^{j_i}; chi(f) = prod (f/c_i)^{j_i}.
class Character {
 public:
  Character() = default;
  Character(const PolyRing& R, std::vector<std::pair<Poly, int>> parts);
  static Character power_residue(const PolyRing& R, const Poly& c, int j = 1) { return Character(R, {{c, j}}); }

  int eval(const Poly& f) const;  // exponent or kZeroExp
  Character conj() const;
  // chi(alpha) = zeta_ell^{s log alpha} on constants; s = sum j_i deg c_i mod ell
  int restriction_exp() const;
  bool odd() const { return restriction_exp() != 0; }
  const Poly& modulus() const { return modulus_; }
  const std::vector<std::pair<Poly, int>>& parts() const { return parts_; }

 private:
  const PolyRing* R_ = nullptr;
  std::vector<std::pair<Poly, int>> parts_;
  Poly modulus_;
};

// For squarefree monic F: class w = sigma*ell + e with
// G_j(1, F) = (-1)^sigma zeta_ell^{j e} tau(chi_0^j)^{deg F};
// e = log Res(F, F') mod ell and (-1)^sigma is the quadratic character of disc F.
// Returns -1 for non-squarefree F.
int w_class(const FieldCtx& F, const Fq* f, int n);

}  // namespace kummerlab
