#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kummerlab/field.hpp"

namespace kummerlab {

// Dense polynomial over F_q, ascending coefficients, trimmed (zero polynomial is empty).
struct Poly {
  std::vector<Fq> c;

  Poly() = default;
  explicit Poly(std::vector<Fq> coeffs) : c(std::move(coeffs)) { trim(); }
  static Poly constant(Fq a) { return a == 0 ? Poly() : Poly(std::vector<Fq>{a}); }
  static Poly one() { return constant(1); }
  static Poly t() { return Poly(std::vector<Fq>{0, 1}); }

  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }
  Fq lead() const { return c.empty() ? 0 : c.back(); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }
  Fq operator[](std::size_t i) const { return i < c.size() ? c[i] : 0; }
  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool operator==(const Poly& o) const { return c == o.c; }
  bool operator!=(const Poly& o) const { return c != o.c; }
};

// Canonical order: by degree, then by the monic index of the coefficients below the top.
bool poly_less(const Poly& a, const Poly& b, std::uint32_t q);

class PolyRing {
 public:
  explicit PolyRing(const FieldCtx& F) : F_(&F) {}
  const FieldCtx& field() const { return *F_; }
  std::uint32_t q() const { return F_->q(); }

  Poly add(const Poly& a, const Poly& b) const;
  Poly sub(const Poly& a, const Poly& b) const;
  Poly neg(const Poly& a) const;
  Poly mul(const Poly& a, const Poly& b) const;
  Poly scale(const Poly& a, Fq s) const;
  // Division with remainder; throws std::domain_error on a zero divisor.
  std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) const;
  Poly mod(const Poly& a, const Poly& b) const;
  Poly div_exact(const Poly& a, const Poly& b) const;  // throws if remainder nonzero
  bool divides(const Poly& d, const Poly& a) const;
  Poly gcd(const Poly& a, const Poly& b) const;  // monic, gcd(0,0) = 0
  Poly powmod(const Poly& a, unsigned __int128 e, const Poly& m) const;
  Poly pow(const Poly& a, std::uint32_t e) const;
  Poly mulmod(const Poly& a, const Poly& b, const Poly& m) const;
  Poly derivative(const Poly& a) const;
  Poly monic(const Poly& a) const;  // a / lead(a)
  Fq eval(const Poly& a, Fq x) const;
  // f(lambda t + b)
  Poly compose_affine(const Poly& f, Fq lambda, Fq b) const;
  // lambda^{-deg f} f(lambda t + b): the monic-preserving affine action
  Poly affine_act(const Poly& f, Fq lambda, Fq b) const;

  // Monic polynomials of degree n are indexed by sum_{i<n} c_i q^i.
  Poly monic_from_index(int n, std::uint64_t idx) const;
  std::uint64_t monic_index(const Poly& f) const;  // f monic
  std::uint64_t count_monic(int n) const;          // q^n, throws beyond 2^62

  std::string to_text(const Poly& f) const;  // "3,0,1"; zero -> "0"
  Poly from_text(const std::string& s) const;

 private:
  const FieldCtx* F_;
};

}  // namespace kummerlab
