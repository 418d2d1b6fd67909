#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace kummerlab::simd {

enum class Isa { Scalar, Avx2 };

// Active kernel set. Chosen once from CPU features; KUMMERLAB_SIMD=scalar forces the reference.
Isa active();
void force(Isa isa);  // tests and benchmarks
std::string name(Isa isa);
bool avx2_available();

// dst[i] += src[i]; returns false if any lane overflowed (dst is then unspecified).
bool add_i64(std::int64_t* dst, const std::int64_t* src, std::size_t n);
// dst[i] += s * src[i] with |s| < 2^31 and |src[i]| < 2^31; returns false on overflow.
bool axpy_i64_small(std::int64_t* dst, const std::int64_t* src, std::int32_t s, std::size_t n);

// Row-side bucket accumulation for symbol-indexed bilinear forms, sym[j] < nb:
// for j < n with sym[j] >= 0: B[sym[j]*w + t] += X[j*w + t], t < w.
// When (nb+1)*w <= kBucketBank the terms go round-robin into four private banks (j mod 4),
// summed as (b0 + b1) + (b2 + b3) at the end; both variants use this exact order.
inline constexpr std::size_t kBucketBank = 1024;
void bucket_rows(const std::int8_t* sym, std::size_t n, const double* X, std::size_t w, double* B, std::size_t nb);
// Column-side scatter: for j < n with sym[j] >= 0: B[(sym[j]*n + j)*w + t] += y[t].
void bucket_cols(const std::int8_t* sym, std::size_t n, const double* y, std::size_t w, double* B);

namespace scalar {
bool add_i64(std::int64_t* dst, const std::int64_t* src, std::size_t n);
bool axpy_i64_small(std::int64_t* dst, const std::int64_t* src, std::int32_t s, std::size_t n);
void bucket_rows(const std::int8_t* sym, std::size_t n, const double* X, std::size_t w, double* B, std::size_t nb);
void bucket_cols(const std::int8_t* sym, std::size_t n, const double* y, std::size_t w, double* B);
}  // namespace scalar

namespace avx2 {
bool add_i64(std::int64_t* dst, const std::int64_t* src, std::size_t n);
bool axpy_i64_small(std::int64_t* dst, const std::int64_t* src, std::int32_t s, std::size_t n);
void bucket_rows(const std::int8_t* sym, std::size_t n, const double* X, std::size_t w, double* B, std::size_t nb);
void bucket_cols(const std::int8_t* sym, std::size_t n, const double* y, std::size_t w, double* B);
}  // namespace avx2

}  // namespace kummerlab::simd
