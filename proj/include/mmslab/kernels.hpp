#pragma once

#include <cstddef>
#include <cstdint>

namespace mmslab::kernels {

/// Data-parallel inner loops shared by the whole library. Every entry has a
/// scalar reference implementation and (on x86-64 with AVX2) a vector
/// implementation; the active table is chosen once at startup.
///
/// Contract notes:
///  - fill_*, axpy_min, min_* and count_* are bit-exact across
///    implementations (element-wise ops in identical order, or
///    order-independent reductions).
///  - sum_where_* may differ between implementations by reassociation
///    rounding only; on dyadic inputs (the model spaces) the sums are exact
///    and therefore identical.
struct Impl {
  // out[i] = scale * double(masks[i] ^ m)
  void (*fill_xor_scaled)(double* out, const std::uint32_t* masks, std::size_t n,
                          std::uint32_t m, double scale);
  // out[i] = |xs[i] - x0|
  void (*fill_absdiff)(double* out, const double* xs, std::size_t n, double x0);
  // out[i] = in[i] + c
  void (*fill_add_const)(double* out, const double* in, std::size_t n, double c);
  // acc[i] = min(acc[i], row[i] + add)
  void (*axpy_min)(double* acc, const double* row, std::size_t n, double add);
  // #{i : x[i] <= thr}
  std::size_t (*count_le)(const double* x, std::size_t n, double thr);
  // #{i : x[i] < thr}
  std::size_t (*count_lt)(const double* x, std::size_t n, double thr);
  // sum of w[i] over x[i] <= thr
  double (*sum_where_le)(const double* x, const double* w, std::size_t n, double thr);
  // sum of w[i] over x[i] < thr
  double (*sum_where_lt)(const double* x, const double* w, std::size_t n, double thr);
  // min_i x[i]  (n >= 1)
  double (*min_val)(const double* x, std::size_t n);
  // min_i (a[i] + b[i])  (n >= 1)
  double (*min_plus)(const double* a, const double* b, std::size_t n);
  // min_i (masks[i] ^ m)  (n >= 1)
  std::uint32_t (*min_xor)(const std::uint32_t* masks, std::size_t n, std::uint32_t m);

  const char* name;
};

/// Active implementation (AVX2 when supported, unless MMSLAB_FORCE_SCALAR=1).
const Impl& active();
/// Scalar reference implementation, always available.
const Impl& scalar();
/// AVX2 implementation or nullptr when the CPU/build lacks it.
const Impl* avx2();

// Convenience forwarders.
inline void fill_xor_scaled(double* out, const std::uint32_t* masks, std::size_t n,
                            std::uint32_t m, double scale) {
  active().fill_xor_scaled(out, masks, n, m, scale);
}
inline void fill_absdiff(double* out, const double* xs, std::size_t n, double x0) {
  active().fill_absdiff(out, xs, n, x0);
}
inline void fill_add_const(double* out, const double* in, std::size_t n, double c) {
  active().fill_add_const(out, in, n, c);
}
inline void axpy_min(double* acc, const double* row, std::size_t n, double add) {
  active().axpy_min(acc, row, n, add);
}
inline std::size_t count_le(const double* x, std::size_t n, double thr) {
  return active().count_le(x, n, thr);
}
inline std::size_t count_lt(const double* x, std::size_t n, double thr) {
  return active().count_lt(x, n, thr);
}
inline double sum_where_le(const double* x, const double* w, std::size_t n, double thr) {
  return active().sum_where_le(x, w, n, thr);
}
inline double sum_where_lt(const double* x, const double* w, std::size_t n, double thr) {
  return active().sum_where_lt(x, w, n, thr);
}
inline double min_val(const double* x, std::size_t n) { return active().min_val(x, n); }
inline double min_plus(const double* a, const double* b, std::size_t n) {
  return active().min_plus(a, b, n);
}
inline std::uint32_t min_xor(const std::uint32_t* masks, std::size_t n, std::uint32_t m) {
  return active().min_xor(masks, n, m);
}

}  // namespace mmslab::kernels
