#include "mmslab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace mmslab::kernels {
namespace {

// Convert 8 xored uint32 lanes to doubles in two halves. Values stay well
// below 2^31 (size guards cap point counts at 2^21), so the signed
// conversion is exact.
inline void xor8_to_double(const std::uint32_t* p, __m256i mv, __m256d scale,
                           double* out) {
  __m256i x = _mm256_xor_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)), mv);
  __m128i lo = _mm256_castsi256_si128(x);
  __m128i hi = _mm256_extracti128_si256(x, 1);
  _mm256_storeu_pd(out, _mm256_mul_pd(_mm256_cvtepi32_pd(lo), scale));
  _mm256_storeu_pd(out + 4, _mm256_mul_pd(_mm256_cvtepi32_pd(hi), scale));
}

void v_fill_xor_scaled(double* out, const std::uint32_t* masks, std::size_t n,
                       std::uint32_t m, double scale) {
  const __m256i mv = _mm256_set1_epi32(static_cast<int>(m));
  const __m256d sv = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) xor8_to_double(masks + i, mv, sv, out + i);
  for (; i < n; ++i) out[i] = scale * static_cast<double>(masks[i] ^ m);
}

void v_fill_absdiff(double* out, const double* xs, std::size_t n, double x0) {
  const __m256d xv = _mm256_set1_pd(x0);
  const __m256d signmask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(xs + i), xv);
    _mm256_storeu_pd(out + i, _mm256_andnot_pd(signmask, d));
  }
  for (; i < n; ++i) out[i] = std::fabs(xs[i] - x0);
}

void v_fill_add_const(double* out, const double* in, std::size_t n, double c) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(in + i), cv));
  for (; i < n; ++i) out[i] = in[i] + c;
}

void v_axpy_min(double* acc, const double* row, std::size_t n, double add) {
  const __m256d av = _mm256_set1_pd(add);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_add_pd(_mm256_loadu_pd(row + i), av);
    _mm256_storeu_pd(acc + i, _mm256_min_pd(_mm256_loadu_pd(acc + i), v));
  }
  for (; i < n; ++i) {
    double v = row[i] + add;
    if (v < acc[i]) acc[i] = v;
  }
}

std::size_t v_count_le(const double* x, std::size_t n, double thr) {
  const __m256d tv = _mm256_set1_pd(thr);
  std::size_t c = 0, i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(x + i), tv, _CMP_LE_OQ);
    c += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
  }
  for (; i < n; ++i) c += (x[i] <= thr);
  return c;
}

std::size_t v_count_lt(const double* x, std::size_t n, double thr) {
  const __m256d tv = _mm256_set1_pd(thr);
  std::size_t c = 0, i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(x + i), tv, _CMP_LT_OQ);
    c += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
  }
  for (; i < n; ++i) c += (x[i] < thr);
  return c;
}

template <int CMP>
double v_sum_where(const double* x, const double* w, std::size_t n, double thr) {
  const __m256d tv = _mm256_set1_pd(thr);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(x + i), tv, CMP);
    acc = _mm256_add_pd(acc, _mm256_and_pd(cmp, _mm256_loadu_pd(w + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    if (CMP == _CMP_LE_OQ ? (x[i] <= thr) : (x[i] < thr)) s += w[i];
  }
  return s;
}

double v_min_val(const double* x, std::size_t n) {
  std::size_t i = 0;
  double m = x[0];
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    m = lanes[0];
    for (int k = 1; k < 4; ++k)
      if (lanes[k] < m) m = lanes[k];
  }
  for (; i < n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

double v_min_plus(const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  double m = a[0] + b[0];
  if (n >= 4) {
    __m256d acc = _mm256_add_pd(_mm256_loadu_pd(a), _mm256_loadu_pd(b));
    for (i = 4; i + 4 <= n; i += 4)
      acc = _mm256_min_pd(acc, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    m = lanes[0];
    for (int k = 1; k < 4; ++k)
      if (lanes[k] < m) m = lanes[k];
  }
  for (; i < n; ++i) {
    double v = a[i] + b[i];
    if (v < m) m = v;
  }
  return m;
}

std::uint32_t v_min_xor(const std::uint32_t* masks, std::size_t n, std::uint32_t m) {
  std::size_t i = 0;
  std::uint32_t best = masks[0] ^ m;
  if (n >= 8) {
    const __m256i mv = _mm256_set1_epi32(static_cast<int>(m));
    __m256i acc = _mm256_xor_si256(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(masks)), mv);
    for (i = 8; i + 8 <= n; i += 8) {
      __m256i x = _mm256_xor_si256(
          _mm256_loadu_si256(reinterpret_cast<const __m256i*>(masks + i)), mv);
      acc = _mm256_min_epu32(acc, x);
    }
    alignas(32) std::uint32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    best = lanes[0];
    for (int k = 1; k < 8; ++k)
      if (lanes[k] < best) best = lanes[k];
  }
  for (; i < n; ++i) {
    std::uint32_t v = masks[i] ^ m;
    if (v < best) best = v;
  }
  return best;
}

}  // namespace

const Impl* avx2() {
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  static const Impl impl = {
      v_fill_xor_scaled,
      v_fill_absdiff,
      v_fill_add_const,
      v_axpy_min,
      v_count_le,
      v_count_lt,
      v_sum_where<_CMP_LE_OQ>,
      v_sum_where<_CMP_LT_OQ>,
      v_min_val,
      v_min_plus,
      v_min_xor,
      "avx2",
  };
  return &impl;
}

}  // namespace mmslab::kernels

#else

namespace mmslab::kernels {
const Impl* avx2() { return nullptr; }
}  // namespace mmslab::kernels

#endif
