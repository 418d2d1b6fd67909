#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kummerlab/gauss.hpp"

namespace kummerlab {

inline constexpr std::uint8_t kNotSquarefree = 0xFF;

// w_class from the log of Res(F, F') for a squarefree F of degree n.
int w_from_log(std::int64_t L, int n, std::uint32_t q, std::uint32_t ell);

// w_class of every monic polynomial of degree n, by index (kNotSquarefree otherwise).
// Depressed representatives are classified once and the affine images filled in:
// translation keeps the class, scaling by lambda adds n(1-n) log lambda to the log.
std::vector<std::uint8_t> build_wtable(const PolyRing& R, int n);
std::vector<std::uint8_t> build_wtable_direct(const PolyRing& R, int n);

// sigma_{lambda,b}(r) = rep with rep of least index in the affine orbit.
struct AffineRep {
  Poly rep;
  Fq lambda = 1;
  Fq b = 0;
};
AffineRep affine_canonical(const PolyRing& R, const Poly& r);

// Coefficient sums c_k = sum_{F in M_k, a | F, (F, v) = 1} G_j(r, F).
// F splits as F1 * a3 * F3' with F1 supported on the primes of r, a3 the part of a
// prime to r and F3' squarefree and prime to r v a3; the F3' sum only depends on
// (w class, symbols of F3' at the primes of r, symbol at a3), counted by one pass
// over M_n against the w table.
class GaussCounter {
 public:
  explicit GaussCounter(const GaussEngine& E);
  const GaussEngine& engine() const { return *E_; }

  std::vector<Cyclo> coefficients(const Poly& r, int K, int j = 1, const Poly& a = Poly::one(),
                                  const Poly& v = Poly::one());
  // Plain C(r, k), k = 0..K, computed at the affine-orbit representative and transported:
  // C(r, k) = zeta^{j k (k - deg r - 1) log lambda} C(sigma r, k).
  std::vector<Cyclo> plain(const Poly& r, int K, int j = 1);
  // Term-by-term sum with gauss fast; for cross-checks at small K.
  std::vector<Cyclo> coefficients_naive(const Poly& r, int K, int j = 1, const Poly& a = Poly::one(),
                                        const Poly& v = Poly::one()) const;

  const std::vector<std::uint8_t>& wtable(int n);
  void release_tables();
  std::uint64_t steps() const { return steps_; }
  int count_cache_hits() const { return hits_; }

 private:
  struct Tracked {
    Poly pi;
    int group;  // -1: coprimality only
  };
  const std::vector<std::int64_t>& counts(int n, const std::vector<Tracked>& tr, int groups);

  const GaussEngine* E_;
  std::map<int, std::vector<std::uint8_t>> w_;
  std::map<std::string, std::vector<std::int64_t>> counts_;
  std::map<std::string, std::vector<Cyclo>> plain_;
  std::uint64_t steps_ = 0;
  int hits_ = 0;
};

}  // namespace kummerlab
