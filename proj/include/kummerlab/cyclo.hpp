#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace kummerlab {

// Z[zeta_m] with m = ell * p, stored on the power basis modulo Phi_m.
// zeta_ell = zeta_m^p and zeta_p = zeta_m^ell, so the standard embedding
// zeta_m -> e^{2 pi i / m} sends them to e^{2 pi i / ell} and e^{2 pi i / p}.
class CycloCtx {
 public:
  CycloCtx(std::uint32_t ell, std::uint32_t p);

  std::uint32_t ell() const { return ell_; }
  std::uint32_t p() const { return p_; }
  std::uint32_t m() const { return m_; }
  std::uint32_t phi() const { return phi_; }
  const std::vector<std::int64_t>& cyclotomic_poly() const { return Phi_; }
  // Power-basis coordinates of zeta_m^k for 0 <= k < 2m.
  const std::int64_t* root(std::uint32_t k) const { return &red_[static_cast<std::size_t>(k) * phi_]; }

  // Exponent of zeta_m giving zeta_ell^a * zeta_p^b.
  std::uint32_t root_index(std::int64_t a, std::int64_t b) const;

 private:
  std::uint32_t ell_, p_, m_, phi_;
  std::vector<std::int64_t> Phi_;
  std::vector<std::int64_t> red_;
};

class Cyclo {
 public:
  Cyclo() = default;
  explicit Cyclo(const CycloCtx& ctx) : ctx_(&ctx), c_(ctx.phi(), 0) {}
  static Cyclo integer(const CycloCtx& ctx, std::int64_t v);
  static Cyclo root(const CycloCtx& ctx, std::int64_t k);  // zeta_m^k
  static Cyclo ell_root(const CycloCtx& ctx, std::int64_t j) { return root(ctx, j * ctx.p()); }
  // sum_k counts[k] zeta_m^k, counts of length m
  static Cyclo from_root_counts(const CycloCtx& ctx, const std::vector<std::int64_t>& counts);

  const CycloCtx& ctx() const { return *ctx_; }
  bool valid() const { return ctx_ != nullptr; }
  const std::vector<std::int64_t>& coeffs() const { return c_; }

  bool is_zero() const;
  bool operator==(const Cyclo& o) const { return c_ == o.c_; }
  bool operator!=(const Cyclo& o) const { return c_ != o.c_; }

  Cyclo& operator+=(const Cyclo& o);
  Cyclo& operator-=(const Cyclo& o);
  Cyclo& operator*=(const Cyclo& o) { return *this = *this * o; }
  Cyclo operator+(const Cyclo& o) const { Cyclo r = *this; r += o; return r; }
  Cyclo operator-(const Cyclo& o) const { Cyclo r = *this; r -= o; return r; }
  Cyclo operator-() const;
  Cyclo operator*(const Cyclo& o) const;
  Cyclo scaled(std::int64_t s) const;
  // Exact division by an integer; throws if not divisible.
  Cyclo divided(std::int64_t s) const;
  Cyclo mul_root(std::int64_t k) const;  // times zeta_m^k
  void add_root(std::int64_t k, std::int64_t times);  // += times * zeta_m^k
  Cyclo conj() const;                    // zeta_m -> zeta_m^{-1}
  Cyclo galois(std::int64_t a) const;    // zeta_m -> zeta_m^a, gcd(a, m) = 1
  Cyclo pow(std::uint64_t e) const;

  std::complex<double> to_complex() const;
  // Embedding zeta_m -> e^{2 pi i a / m}.
  std::complex<double> to_complex(std::int64_t a) const;
  std::int64_t max_abs_coeff() const;
  std::string to_text() const;  // "[c0 c1 ...]"

 private:
  const CycloCtx* ctx_ = nullptr;
  std::vector<std::int64_t> c_;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t ipow(std::int64_t b, std::uint32_t e);  // checked

}  // namespace kummerlab
