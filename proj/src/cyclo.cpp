#include "kummerlab/cyclo.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "kummerlab/simd.hpp"

namespace kummerlab {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in cyclotomic add");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in cyclotomic mul");
  return r;
}

std::int64_t ipow(std::int64_t b, std::uint32_t e) {
  std::int64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r = checked_mul(r, b);
  return r;
}

namespace {

using IPoly = std::vector<std::int64_t>;

IPoly exact_div(IPoly num, const IPoly& den) {
  const std::size_t dn = den.size() - 1;
  if (den[dn] != 1) throw std::logic_error("cyclotomic division by non-monic polynomial");
  IPoly quo(num.size() - dn, 0);
  for (std::size_t top = num.size() - 1; top + 1 > dn && top >= dn; --top) {
    std::int64_t c = num[top];
    quo[top - dn] = c;
    for (std::size_t i = 0; i <= dn; ++i) num[top - dn + i] -= c * den[i];
    if (top == dn) break;
  }
  for (std::size_t i = 0; i < dn; ++i)
    if (num[i] != 0) throw std::logic_error("cyclotomic polynomial division not exact");
  return quo;
}

IPoly cyclotomic(std::uint32_t n, std::map<std::uint32_t, IPoly>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  IPoly f(n + 1, 0);
  f[0] = -1;
  f[n] = 1;
  for (std::uint32_t d = 1; d < n; ++d)
    if (n % d == 0) f = exact_div(f, cyclotomic(d, memo));
  memo[n] = f;
  return f;
}

std::int64_t narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("int64 overflow in cyclotomic arithmetic");
  return static_cast<std::int64_t>(v);
}

}  // namespace

CycloCtx::CycloCtx(std::uint32_t ell, std::uint32_t p) : ell_(ell), p_(p), m_(ell * p) {
  if (ell == 0 || p == 0 || ell % p == 0) throw std::invalid_argument("CycloCtx needs gcd(ell, p) = 1");
  std::map<std::uint32_t, IPoly> memo;
  Phi_ = cyclotomic(m_, memo);
  phi_ = static_cast<std::uint32_t>(Phi_.size() - 1);
  red_.assign(static_cast<std::size_t>(2 * m_) * phi_, 0);
  std::vector<std::int64_t> cur(phi_, 0);
  cur[0] = 1;
  for (std::uint32_t k = 0; k < 2 * m_; ++k) {
    for (std::uint32_t i = 0; i < phi_; ++i) red_[static_cast<std::size_t>(k) * phi_ + i] = cur[i];
    // multiply by x and reduce by the monic Phi_m
    std::int64_t top = cur[phi_ - 1];
    for (std::uint32_t i = phi_ - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    for (std::uint32_t i = 0; i < phi_; ++i) cur[i] -= top * Phi_[i];
  }
}

std::uint32_t CycloCtx::root_index(std::int64_t a, std::int64_t b) const {
  std::int64_t v = (a % static_cast<std::int64_t>(ell_)) * p_ + (b % static_cast<std::int64_t>(p_)) * ell_;
  v %= static_cast<std::int64_t>(m_);
  if (v < 0) v += m_;
  return static_cast<std::uint32_t>(v);
}

Cyclo Cyclo::integer(const CycloCtx& ctx, std::int64_t v) {
  Cyclo r(ctx);
  r.c_[0] = v;
  return r;
}

Cyclo Cyclo::root(const CycloCtx& ctx, std::int64_t k) {
  Cyclo r(ctx);
  r.add_root(k, 1);
  return r;
}

Cyclo Cyclo::from_root_counts(const CycloCtx& ctx, const std::vector<std::int64_t>& counts) {
  if (counts.size() != ctx.m()) throw std::invalid_argument("root counts must have length m");
  std::vector<__int128> acc(ctx.phi(), 0);
  for (std::uint32_t k = 0; k < ctx.m(); ++k) {
    if (counts[k] == 0) continue;
    const std::int64_t* b = ctx.root(k);
    for (std::uint32_t i = 0; i < ctx.phi(); ++i) acc[i] += static_cast<__int128>(counts[k]) * b[i];
  }
  Cyclo r(ctx);
  for (std::uint32_t i = 0; i < ctx.phi(); ++i) r.c_[i] = narrow(acc[i]);
  return r;
}

bool Cyclo::is_zero() const {
  for (auto v : c_)
    if (v != 0) return false;
  return true;
}

Cyclo& Cyclo::operator+=(const Cyclo& o) {
  if (!simd::add_i64(c_.data(), o.c_.data(), c_.size()))
    throw std::overflow_error("int64 overflow in cyclotomic add");
  return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (__builtin_sub_overflow(c_[i], o.c_[i], &c_[i])) throw std::overflow_error("int64 overflow in cyclotomic sub");
  }
  return *this;
}

Cyclo Cyclo::operator-() const {
  Cyclo r(*ctx_);
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = checked_mul(c_[i], -1);
  return r;
}

Cyclo Cyclo::operator*(const Cyclo& o) const {
  const std::uint32_t n = ctx_->phi();
  std::vector<__int128> acc(2 * n - 1, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (c_[i] == 0) continue;
    for (std::uint32_t j = 0; j < n; ++j) acc[i + j] += static_cast<__int128>(c_[i]) * o.c_[j];
  }
  const auto& Phi = ctx_->cyclotomic_poly();
  for (std::uint32_t top = 2 * n - 2; top >= n; --top) {
    __int128 c = acc[top];
    if (c != 0)
      for (std::uint32_t i = 0; i < n; ++i) acc[top - n + i] -= c * Phi[i];
  }
  Cyclo r(*ctx_);
  for (std::uint32_t i = 0; i < n; ++i) r.c_[i] = narrow(acc[i]);
  return r;
}

Cyclo Cyclo::scaled(std::int64_t s) const {
  Cyclo r(*ctx_);
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = checked_mul(c_[i], s);
  return r;
}

Cyclo Cyclo::divided(std::int64_t s) const {
  if (s == 0) throw std::domain_error("cyclotomic division by zero");
  Cyclo r(*ctx_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] % s != 0) throw std::domain_error("cyclotomic value not divisible");
    r.c_[i] = c_[i] / s;
  }
  return r;
}

void Cyclo::add_root(std::int64_t k, std::int64_t times) {
  const std::int64_t m = ctx_->m();
  k %= m;
  if (k < 0) k += m;
  if (k < static_cast<std::int64_t>(ctx_->phi())) {
    c_[k] = checked_add(c_[k], times);
    return;
  }
  const std::int64_t* b = ctx_->root(static_cast<std::uint32_t>(k));
  for (std::uint32_t i = 0; i < ctx_->phi(); ++i)
    if (b[i] != 0) c_[i] = checked_add(c_[i], checked_mul(times, b[i]));
}

Cyclo Cyclo::mul_root(std::int64_t k) const {
  const std::int64_t m = ctx_->m();
  k %= m;
  if (k < 0) k += m;
  Cyclo r(*ctx_);
  std::vector<__int128> acc(ctx_->phi(), 0);
  for (std::uint32_t i = 0; i < ctx_->phi(); ++i) {
    if (c_[i] == 0) continue;
    const std::int64_t* b = ctx_->root(static_cast<std::uint32_t>((i + k) % m));
    for (std::uint32_t t = 0; t < ctx_->phi(); ++t) acc[t] += static_cast<__int128>(c_[i]) * b[t];
  }
  for (std::uint32_t t = 0; t < ctx_->phi(); ++t) r.c_[t] = narrow(acc[t]);
  return r;
}

Cyclo Cyclo::galois(std::int64_t a) const {
  const std::int64_t m = ctx_->m();
  a %= m;
  if (a < 0) a += m;
  Cyclo r(*ctx_);
  std::vector<__int128> acc(ctx_->phi(), 0);
  for (std::uint32_t i = 0; i < ctx_->phi(); ++i) {
    if (c_[i] == 0) continue;
    const std::int64_t* b = ctx_->root(static_cast<std::uint32_t>((a * i) % m));
    for (std::uint32_t t = 0; t < ctx_->phi(); ++t) acc[t] += static_cast<__int128>(c_[i]) * b[t];
  }
  for (std::uint32_t t = 0; t < ctx_->phi(); ++t) r.c_[t] = narrow(acc[t]);
  return r;
}

Cyclo Cyclo::conj() const { return galois(-1); }

Cyclo Cyclo::pow(std::uint64_t e) const {
  Cyclo result = integer(*ctx_, 1), base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

std::complex<double> Cyclo::to_complex() const { return to_complex(1); }

std::complex<double> Cyclo::to_complex(std::int64_t a) const {
  const long double m = ctx_->m();
  long double re = 0, im = 0;
  for (std::uint32_t i = 0; i < ctx_->phi(); ++i) {
    if (c_[i] == 0) continue;
    const std::int64_t mm = ctx_->m();
    const long double ang =
        2.0L * std::numbers::pi_v<long double> * static_cast<long double>(((a * i) % mm + mm) % mm) / m;
    re += static_cast<long double>(c_[i]) * std::cos(ang);
    im += static_cast<long double>(c_[i]) * std::sin(ang);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

std::int64_t Cyclo::max_abs_coeff() const {
  std::int64_t r = 0;
  for (auto v : c_) r = std::max(r, v < 0 ? -v : v);
  return r;
}

std::string Cyclo::to_text() const {
  std::string s = "[";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(c_[i]);
  }
  return s + "]";
}

}  // namespace kummerlab
