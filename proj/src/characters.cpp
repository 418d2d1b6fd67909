#include "kummerlab/characters.hpp"

#include <cmath>
#include <stdexcept>

#include "kummerlab/factor.hpp"

namespace kummerlab {

namespace {

// Prime-field variant: plain integers with Lemire reduction instead of table lookups.
std::int64_t res_log_prime(const FieldCtx& F, const Fq* c, int dc, const Fq* a, int da) {
  const std::uint32_t p = F.p();
  const std::uint64_t M = UINT64_C(0xFFFFFFFFFFFFFFFF) / p + 1;
  auto red = [&](std::uint32_t x) -> std::uint32_t {
    const std::uint64_t low = M * x;
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(low) * p) >> 64);
  };
  const std::int64_t qm1 = p - 1;
  std::uint32_t bufA[kMaxKernelDeg + 1], bufB[kMaxKernelDeg + 1];
  std::uint32_t* A = bufA;
  std::uint32_t* B = bufB;
  int dA = dc, dB = da;
  for (int i = 0; i <= dA; ++i) A[i] = c[i];
  for (int i = 0; i <= dB; ++i) B[i] = a[i];
  while (dB >= 0 && B[dB] == 0) --dB;
  std::int64_t L = 0;
  while (true) {
    if (dA == 0) return L % qm1;
    for (int top = dB; top >= dA; --top) {
      const std::uint32_t coef = B[top];
      if (coef == 0) continue;
      const std::uint32_t nc = p - coef;
      std::uint32_t* row = B + (top - dA);
      for (int i = 0; i < dA; ++i) row[i] = red(row[i] + nc * A[i]);
    }
    if (dB >= dA) dB = dA - 1;
    while (dB >= 0 && B[dB] == 0) --dB;
    if (dB < 0) return -1;
    const std::uint32_t lead = B[dB];
    L += static_cast<std::int64_t>(dA) * F.log(lead);
    if (dB == 0) return L % qm1;
    if (lead != 1) {
      const std::uint32_t inv = F.inv(lead);
      for (int i = 0; i < dB; ++i) B[i] = red(B[i] * inv);
      B[dB] = 1;
    }
    if ((dA & 1) && (dB & 1)) L += qm1 / 2;
    std::swap(A, B);
    std::swap(dA, dB);
  }
}

}  // namespace

std::int64_t res_log(const FieldCtx& F, const Fq* c, int dc, const Fq* a, int da) {
  if (dc > kMaxKernelDeg || da > kMaxKernelDeg) throw std::length_error("res_log degree above kernel limit");
  if (F.k() == 1 && F.p() < 40000) return res_log_prime(F, c, dc, a, da);
  const std::int64_t qm1 = F.q() - 1;
  const std::int64_t half = qm1 / 2;
  Fq bufA[kMaxKernelDeg + 1], bufB[kMaxKernelDeg + 1];
  Fq* A = bufA;  // monic, degree dA
  Fq* B = bufB;
  int dA = dc, dB = da;
  for (int i = 0; i <= dA; ++i) A[i] = c[i];
  for (int i = 0; i <= dB; ++i) B[i] = a[i];
  while (dB >= 0 && B[dB] == 0) --dB;
  std::int64_t L = 0;
  while (true) {
    if (dA == 0) return L % qm1;
    // B mod A
    for (int top = dB; top >= dA; --top) {
      const Fq coef = B[top];
      if (coef == 0) continue;
      const Fq nc = F.neg(coef);
      for (int i = 0; i < dA; ++i) B[top - dA + i] = F.add(B[top - dA + i], F.mul(nc, A[i]));
      B[top] = 0;
    }
    if (dB >= dA) dB = dA - 1;
    while (dB >= 0 && B[dB] == 0) --dB;
    if (dB < 0) return -1;
    const Fq lead = B[dB];
    L += static_cast<std::int64_t>(dA) * F.log(lead);
    if (dB == 0) return L % qm1;
    if (lead != 1) {
      const Fq inv = F.inv(lead);
      for (int i = 0; i < dB; ++i) B[i] = F.mul(B[i], inv);
      B[dB] = 1;
    }
    if ((dA & 1) && (dB & 1)) L += half;
    std::swap(A, B);
    std::swap(dA, dB);
    L %= qm1;
  }
}

std::int64_t res_log(const PolyRing& R, const Poly& c, const Poly& a) {
  if (!c.is_monic()) throw std::invalid_argument("res_log needs a monic modulus");
  if (a.is_zero()) return c.deg() == 0 ? 0 : -1;
  return res_log(R.field(), c.c.data(), c.deg(), a.c.data(), a.deg());
}

int symbol(const PolyRing& R, const Poly& a, const Poly& c) {
  const std::int64_t L = res_log(R, c, a);
  if (L < 0) return kZeroExp;
  return static_cast<int>(L % R.field().ell());
}

int symbol_prime(const PolyRing& R, const Poly& a, const Poly& pi) {
  const FieldCtx& F = R.field();
  const int d = pi.deg();
  const double bits = d * std::log2(static_cast<double>(F.q()));
  if (bits > 120) throw std::length_error("symbol_prime exponent exceeds 128 bits");
  unsigned __int128 qd = 1;
  for (int i = 0; i < d; ++i) qd *= F.q();
  const Poly v = R.powmod(a, (qd - 1) / F.ell(), pi);
  if (v.is_zero()) return kZeroExp;
  if (v.deg() != 0) throw std::logic_error("power residue is not a constant");
  return F.omega(v.c[0]);
}

int symbol_slow(const PolyRing& R, const Poly& a, const Poly& c) {
  const int ell = static_cast<int>(R.field().ell());
  int e = 0;
  for (auto& [pi, mult] : factor(R, c).factors) e = add_exp(e, mul_exp(symbol_prime(R, a, pi), mult, ell), ell);
  return e;
}

std::uint32_t eq_trace(const PolyRing& R, const Poly& a, const Poly& c) {
  if (c.deg() <= 0) return 0;
  const Poly rem = R.mod(a, c);
  return R.field().trace(rem[static_cast<std::size_t>(c.deg() - 1)]);
}

Cyclo eq_char(const PolyRing& R, const CycloCtx& C, const Poly& a, const Poly& c) {
  return Cyclo::root(C, C.root_index(0, eq_trace(R, a, c)));
}

Cyclo tau_scalar(const FieldCtx& F, const CycloCtx& C, std::int64_t j) {
  std::vector<std::int64_t> counts(C.m(), 0);
  for (Fq a = 1; a < F.q(); ++a) counts[C.root_index(j * static_cast<std::int64_t>(F.log(a) % F.ell()), F.trace(a))]++;
  return Cyclo::from_root_counts(C, counts);
}

std::complex<double> ScalarEpsilon::value(std::uint32_t q) const {
  if (!odd) return 1.0;
  return tau.to_complex() / std::sqrt(static_cast<double>(q));
}

ScalarEpsilon epsilon(const FieldCtx& F, const CycloCtx& C, std::int64_t restriction_exp) {
  const std::int64_t ell = F.ell();
  ScalarEpsilon e;
  e.odd = ((restriction_exp % ell) + ell) % ell != 0;
  e.tau = tau_scalar(F, C, restriction_exp);
  return e;
}

Character::Character(const PolyRing& R, std::vector<std::pair<Poly, int>> parts) : R_(&R), parts_(std::move(parts)) {
  modulus_ = Poly::one();
  for (auto& [c, j] : parts_) {
    if (!c.is_monic()) throw std::invalid_argument("character modulus must be monic");
    modulus_ = R.mul(modulus_, c);
  }
}

int Character::eval(const Poly& f) const {
  const int ell = static_cast<int>(R_->field().ell());
  int e = 0;
  for (auto& [c, j] : parts_) e = add_exp(e, mul_exp(symbol(*R_, f, c), j, ell), ell);
  return e;
}

Character Character::conj() const {
  auto parts = parts_;
  for (auto& pj : parts) pj.second = -pj.second;
  return Character(*R_, std::move(parts));
}

int Character::restriction_exp() const {
  const std::int64_t ell = R_->field().ell();
  std::int64_t s = 0;
  for (auto& [c, j] : parts_) s += static_cast<std::int64_t>(j) * c.deg();
  return static_cast<int>(((s % ell) + ell) % ell);
}

int w_class(const FieldCtx& F, const Fq* f, int n) {
  if (n <= 0) return 0;
  Fq der[kMaxKernelDeg + 1];
  for (int i = 1; i <= n; ++i) der[i - 1] = F.mul(f[i], F.from_int(i));
  int dd = n - 1;
  while (dd >= 0 && der[dd] == 0) --dd;
  if (dd < 0) return -1;
  std::int64_t L = res_log(F, f, n, der, dd);
  if (L < 0) return -1;
  const std::int64_t qm1 = F.q() - 1;
  const std::int64_t disc = (static_cast<std::int64_t>(n) * (n - 1) / 2) % 2 ? L + qm1 / 2 : L;
  const int sigma = static_cast<int>(disc & 1);
  return sigma * static_cast<int>(F.ell()) + static_cast<int>(L % F.ell());
}

}  // namespace kummerlab
