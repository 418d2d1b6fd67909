#include <immintrin.h>

#include <algorithm>

#include "kummerlab/simd.hpp"

namespace kummerlab::simd::avx2 {

__attribute__((target("avx2"))) bool add_i64(std::int64_t* dst, const std::int64_t* src, std::size_t n) {
  std::size_t i = 0;
  __m256i ovf = _mm256_setzero_si256();
  for (; i + 4 <= n; i += 4) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    __m256i r = _mm256_add_epi64(a, b);
    // Signed overflow iff both operands differ in sign from the result.
    ovf = _mm256_or_si256(ovf, _mm256_and_si256(_mm256_xor_si256(a, r), _mm256_xor_si256(b, r)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), r);
  }
  bool ok = _mm256_movemask_pd(_mm256_castsi256_pd(ovf)) == 0;
  for (; i < n; ++i) ok &= !__builtin_add_overflow(dst[i], src[i], &dst[i]);
  return ok;
}

__attribute__((target("avx2"))) bool axpy_i64_small(std::int64_t* dst, const std::int64_t* src, std::int32_t s,
                                                    std::size_t n) {
  std::size_t i = 0;
  const __m256i sv = _mm256_set1_epi64x(s);
  const __m256i hi = _mm256_set1_epi64x((std::int64_t{1} << 31) - 1);   // largest allowed
  const __m256i lo = _mm256_set1_epi64x(-(std::int64_t{1} << 31) - 1);  // just below smallest
  __m256i bad = _mm256_setzero_si256();
  __m256i ovf = _mm256_setzero_si256();
  for (; i + 4 <= n; i += 4) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    bad = _mm256_or_si256(bad, _mm256_or_si256(_mm256_cmpgt_epi64(x, hi), _mm256_cmpgt_epi64(lo, x)));
    __m256i prod = _mm256_mul_epi32(x, sv);
    __m256i r = _mm256_add_epi64(a, prod);
    ovf = _mm256_or_si256(ovf, _mm256_and_si256(_mm256_xor_si256(a, r), _mm256_xor_si256(prod, r)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), r);
  }
  if (_mm256_movemask_pd(_mm256_castsi256_pd(bad)) != 0) return false;
  bool ok = _mm256_movemask_pd(_mm256_castsi256_pd(ovf)) == 0;
  for (; i < n; ++i) {
    if (src[i] >= (std::int64_t{1} << 31) || src[i] < -(std::int64_t{1} << 31)) return false;
    ok &= !__builtin_add_overflow(dst[i], src[i] * std::int64_t{s}, &dst[i]);
  }
  return ok;
}

namespace {
__attribute__((target("avx2"))) inline void add_into(double* b, const double* x, std::size_t w) {
  std::size_t t = 0;
  for (; t + 4 <= w; t += 4) _mm256_storeu_pd(b + t, _mm256_add_pd(_mm256_loadu_pd(b + t), _mm256_loadu_pd(x + t)));
  for (; t + 2 <= w; t += 2) _mm_storeu_pd(b + t, _mm_add_pd(_mm_loadu_pd(b + t), _mm_loadu_pd(x + t)));
  for (; t < w; ++t) b[t] += x[t];
}
}  // namespace

namespace {
template <std::size_t W>
__attribute__((target("avx2"))) void banked_fixed(const std::int8_t* sym, std::size_t n, const double* X,
                                                  std::size_t nb, double* bank, std::size_t stride) {
  for (std::size_t j = 0; j < n; ++j) {
    const int s = sym[j];
    const std::size_t slot = s < 0 ? nb : static_cast<std::size_t>(s);
    double* b = bank + (j & 3) * stride + slot * W;
    const double* x = X + j * W;
    if constexpr (W == 2) {
      _mm_storeu_pd(b, _mm_add_pd(_mm_loadu_pd(b), _mm_loadu_pd(x)));
    } else {
      for (std::size_t t = 0; t < W; t += 4)
        _mm256_storeu_pd(b + t, _mm256_add_pd(_mm256_loadu_pd(b + t), _mm256_loadu_pd(x + t)));
    }
  }
}
}  // namespace

__attribute__((target("avx2"))) void bucket_rows(const std::int8_t* sym, std::size_t n, const double* X,
                                                 std::size_t w, double* B, std::size_t nb) {
  const std::size_t len = nb * w, stride = len + w;
  if (stride <= kBucketBank) {
    alignas(32) double bank[4 * kBucketBank];
    std::fill(bank, bank + 4 * stride, 0.0);
    switch (w) {
      case 2: banked_fixed<2>(sym, n, X, nb, bank, stride); break;
      case 4: banked_fixed<4>(sym, n, X, nb, bank, stride); break;
      case 8: banked_fixed<8>(sym, n, X, nb, bank, stride); break;
      case 16: banked_fixed<16>(sym, n, X, nb, bank, stride); break;
      default:
        for (std::size_t j = 0; j < n; ++j) {
          const int s = sym[j];
          const std::size_t slot = s < 0 ? nb : static_cast<std::size_t>(s);
          add_into(bank + (j & 3) * stride + slot * w, X + j * w, w);
        }
    }
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
      const __m256d s01 = _mm256_add_pd(_mm256_loadu_pd(bank + i), _mm256_loadu_pd(bank + stride + i));
      const __m256d s23 = _mm256_add_pd(_mm256_loadu_pd(bank + 2 * stride + i), _mm256_loadu_pd(bank + 3 * stride + i));
      _mm256_storeu_pd(B + i, _mm256_add_pd(_mm256_loadu_pd(B + i), _mm256_add_pd(s01, s23)));
    }
    for (; i < len; ++i) B[i] += (bank[i] + bank[stride + i]) + (bank[2 * stride + i] + bank[3 * stride + i]);
    return;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const int s = sym[j];
    if (s < 0) continue;
    add_into(B + static_cast<std::size_t>(s) * w, X + j * w, w);
  }
}

__attribute__((target("avx2"))) void bucket_cols(const std::int8_t* sym, std::size_t n, const double* y,
                                                 std::size_t w, double* B) {
  if (w == 2) {
    const __m128d yv = _mm_loadu_pd(y);
    for (std::size_t j = 0; j < n; ++j) {
      const int s = sym[j];
      if (s < 0) continue;
      double* b = B + (static_cast<std::size_t>(s) * n + j) * 2;
      _mm_storeu_pd(b, _mm_add_pd(_mm_loadu_pd(b), yv));
    }
    return;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const int s = sym[j];
    if (s < 0) continue;
    double* b = B + (static_cast<std::size_t>(s) * n + j) * w;
    std::size_t t = 0;
    for (; t + 4 <= w; t += 4)
      _mm256_storeu_pd(b + t, _mm256_add_pd(_mm256_loadu_pd(b + t), _mm256_loadu_pd(y + t)));
    for (; t < w; ++t) b[t] += y[t];
  }
}

}  // namespace kummerlab::simd::avx2
