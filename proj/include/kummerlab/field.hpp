#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kummerlab {

// Elements of F_q are stored as integers in [0, q): base-p digits are the
// coefficients of the element in F_p[x]/(modulus).
using Fq = std::uint32_t;

// Exponent of a root of unity, or kZeroExp for the value 0.
inline constexpr int kZeroExp = -1;

class FieldCtx {
 public:
  FieldCtx(std::uint32_t p, std::uint32_t k, std::uint32_t ell);

  std::uint32_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t q() const { return q_; }
  std::uint32_t ell() const { return ell_; }
  Fq gen() const { return gen_; }
  Fq zeta() const { return zeta_; }
  // Digits (ascending, length k+1, monic) of the defining polynomial of F_q over F_p.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Fq add(Fq a, Fq b) const {
    if (k_ == 1) {
      Fq s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    if (!add_tab_.empty()) return add_tab_[a * q_ + b];
    return add_digits(a, b);
  }
  Fq neg(Fq a) const { return neg_[a]; }
  Fq sub(Fq a, Fq b) const { return add(a, neg_[b]); }
  Fq mul(Fq a, Fq b) const {
    if (a == 0 || b == 0) return 0;
    if (!mul_tab_.empty()) return mul_tab_[a * q_ + b];
    return exp_[log_[a] + log_[b]];
  }
  Fq inv(Fq a) const;  // throws on 0
  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }
  Fq pow(Fq a, std::uint64_t e) const;

  // Discrete log with respect to gen; a must be nonzero.
  std::uint32_t log(Fq a) const { return log_[a]; }
  Fq exp(std::uint64_t e) const { return exp_[e % (q_ - 1)]; }

  // Absolute trace to F_p.
  std::uint32_t trace(Fq a) const { return trace_[a]; }

  // j with a = zeta^j, kZeroExp for a = 0; throws if a is not an ell-th root of unity.
  int omega(Fq a) const;
  // Exponent of Omega(a^((q-1)/ell)), i.e. log(a) mod ell; kZeroExp for 0.
  int chi0(Fq a) const { return a == 0 ? kZeroExp : static_cast<int>(log_[a] % ell_); }

  Fq from_int(std::int64_t v) const;  // image of an integer in the prime field
  Fq from_digits(const std::vector<std::uint32_t>& digits) const;
  std::vector<std::uint32_t> digits(Fq a) const;

  // Text form: "5" for prime fields, "1;2" (ascending F_p digits) for extensions.
  std::string to_text(Fq a) const;
  Fq from_text(const std::string& s) const;

  // Slow reference multiplication on digit vectors (used to build tables and by tests).
  Fq mul_digits(Fq a, Fq b) const;
  Fq add_digits(Fq a, Fq b) const;

  bool operator==(const FieldCtx& o) const {
    return p_ == o.p_ && k_ == o.k_ && ell_ == o.ell_ && modulus_ == o.modulus_;
  }

 private:
  std::uint32_t p_, k_, q_, ell_;
  Fq gen_ = 0, zeta_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<Fq> add_tab_, mul_tab_, neg_, exp_;
  std::vector<std::uint32_t> log_, trace_;
};

bool is_prime_u64(std::uint64_t n);

}  // namespace kummerlab
