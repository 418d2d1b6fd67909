#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kummerlab/simd.hpp"

namespace kummerlab::simd {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

namespace {
Isa detect() {
  const char* env = std::getenv("KUMMERLAB_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}
std::atomic<int> g_isa{-1};
}  // namespace

Isa active() {
  int v = g_isa.load(std::memory_order_relaxed);
  if (v < 0) {
    v = static_cast<int>(detect());
    g_isa.store(v, std::memory_order_relaxed);
  }
  return static_cast<Isa>(v);
}

void force(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) isa = Isa::Scalar;
  g_isa.store(static_cast<int>(isa), std::memory_order_relaxed);
}

std::string name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool add_i64(std::int64_t* dst, const std::int64_t* src, std::size_t n) {
  return active() == Isa::Avx2 ? avx2::add_i64(dst, src, n) : scalar::add_i64(dst, src, n);
}
bool axpy_i64_small(std::int64_t* dst, const std::int64_t* src, std::int32_t s, std::size_t n) {
  return active() == Isa::Avx2 ? avx2::axpy_i64_small(dst, src, s, n)
                               : scalar::axpy_i64_small(dst, src, s, n);
}
void bucket_rows(const std::int8_t* sym, std::size_t n, const double* X, std::size_t w, double* B, std::size_t nb) {
  if (active() == Isa::Avx2)
    avx2::bucket_rows(sym, n, X, w, B, nb);
  else
    scalar::bucket_rows(sym, n, X, w, B, nb);
}
void bucket_cols(const std::int8_t* sym, std::size_t n, const double* y, std::size_t w, double* B) {
  if (active() == Isa::Avx2)
    avx2::bucket_cols(sym, n, y, w, B);
  else
    scalar::bucket_cols(sym, n, y, w, B);
}

namespace scalar {

bool add_i64(std::int64_t* dst, const std::int64_t* src, std::size_t n) {
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) ok &= !__builtin_add_overflow(dst[i], src[i], &dst[i]);
  return ok;
}

bool axpy_i64_small(std::int64_t* dst, const std::int64_t* src, std::int32_t s, std::size_t n) {
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (src[i] >= (std::int64_t{1} << 31) || src[i] < -(std::int64_t{1} << 31)) return false;
    ok &= !__builtin_add_overflow(dst[i], src[i] * std::int64_t{s}, &dst[i]);
  }
  return ok;
}

void bucket_rows(const std::int8_t* sym, std::size_t n, const double* X, std::size_t w, double* B, std::size_t nb) {
  const std::size_t len = nb * w, stride = len + w;
  if (stride <= kBucketBank) {
    // bucket nb absorbs the zero symbols without a branch
    double bank[4 * kBucketBank] = {};
    for (std::size_t j = 0; j < n; ++j) {
      const int s = sym[j];
      const std::size_t slot = s < 0 ? nb : static_cast<std::size_t>(s);
      double* b = bank + (j & 3) * stride + slot * w;
      const double* x = X + j * w;
      for (std::size_t t = 0; t < w; ++t) b[t] += x[t];
    }
    for (std::size_t i = 0; i < len; ++i)
      B[i] += (bank[i] + bank[stride + i]) + (bank[2 * stride + i] + bank[3 * stride + i]);
    return;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const int s = sym[j];
    if (s < 0) continue;
    double* b = B + static_cast<std::size_t>(s) * w;
    const double* x = X + j * w;
    for (std::size_t t = 0; t < w; ++t) b[t] += x[t];
  }
}

void bucket_cols(const std::int8_t* sym, std::size_t n, const double* y, std::size_t w, double* B) {
  for (std::size_t j = 0; j < n; ++j) {
    const int s = sym[j];
    if (s < 0) continue;
    double* b = B + (static_cast<std::size_t>(s) * n + j) * w;
    for (std::size_t t = 0; t < w; ++t) b[t] += y[t];
  }
}

}  // namespace scalar
}  // namespace kummerlab::simd
