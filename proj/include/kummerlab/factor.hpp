#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kummerlab/poly.hpp"

namespace kummerlab {

struct Factorization {
  Fq unit = 1;
  std::vector<std::pair<Poly, int>> factors;  // monic irreducibles, canonical order
};

struct EllDecomposition {
  std::vector<Poly> r;  // r[1..ell], r[0] unused (set to 1)
  Poly r_ell_star;
};

// Rabin test: x^{q^d} = x mod f and gcd(x^{q^{d/s}} - x, f) = 1 for primes s | d.
bool is_irreducible(const PolyRing& R, const Poly& f);

// Squarefree split, distinct-degree split, then seeded Cantor-Zassenhaus.
Factorization factor(const PolyRing& R, const Poly& f, std::uint64_t seed = 0x6b756d6d6572ULL);
Poly expand(const PolyRing& R, const Factorization& fac);

bool is_squarefree(const PolyRing& R, const Poly& f);
int mobius(const PolyRing& R, const Poly& f);
int von_mangoldt(const PolyRing& R, const Poly& f);  // deg pi if f = pi^k, else 0
std::uint64_t euler_phi(const PolyRing& R, const Poly& f);
Poly radical(const PolyRing& R, const Poly& f);
EllDecomposition ell_decompose(const PolyRing& R, const Poly& r);

// Monic polynomials of degree n stepped in index order; next() returns the
// position of the highest coefficient that changed, or -1 after the last one.
class MonicOdometer {
 public:
  MonicOdometer(const PolyRing& R, int n);
  int next();
  const std::vector<Fq>& coeffs() const { return c_; }
  std::uint64_t index() const { return idx_; }
  Poly poly() const { return Poly(c_); }

 private:
  std::uint32_t q_;
  int n_;
  std::vector<Fq> c_;
  std::uint64_t idx_ = 0;
};

// Calls fn(index of pi*g) for every g in M_m.
void for_each_multiple(const PolyRing& R, const Poly& pi, int m, const std::function<void(std::uint64_t)>& fn);

enum class SetKind { M, H, P };
// All monic polynomials of the given kind and degree, in index order.
std::vector<Poly> enumerate(const PolyRing& R, SetKind kind, int n);
std::uint64_t count_set(const PolyRing& R, SetKind kind, int n);

// Monic irreducibles by degree, built by sieving and cached on disk.
class PrimeTable {
 public:
  PrimeTable(const PolyRing& R, int max_n, bool use_cache = true);
  int max_n() const { return max_n_; }
  const std::vector<std::uint64_t>& indices(int n) const { return idx_.at(n); }
  std::vector<Poly> primes(int n) const;
  // Byte per monic polynomial of degree n: 1 if squarefree.
  std::vector<std::uint8_t> squarefree_flags(int n) const;
  // Mobius and von Mangoldt values over M_n, by index.
  std::vector<std::int8_t> mobius_table(int n) const;
  std::vector<std::uint8_t> mangoldt_table(int n) const;
  const PolyRing& ring() const { return *R_; }
  int cache_hits() const { return hits_; }

 private:
  const PolyRing* R_;
  int max_n_;
  int hits_ = 0;
  std::vector<std::vector<std::uint64_t>> idx_;
};

std::vector<std::uint64_t> sieve_primes(const PolyRing& R, int n, const std::vector<std::vector<std::uint64_t>>& lower);

}  // namespace kummerlab
