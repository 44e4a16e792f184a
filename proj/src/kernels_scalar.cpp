#include "mmslab/kernels.hpp"

#include <cmath>

namespace mmslab::kernels {
namespace {

void s_fill_xor_scaled(double* out, const std::uint32_t* masks, std::size_t n,
                       std::uint32_t m, double scale) {
  for (std::size_t i = 0; i < n; ++i) out[i] = scale * static_cast<double>(masks[i] ^ m);
}

void s_fill_absdiff(double* out, const double* xs, std::size_t n, double x0) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(xs[i] - x0);
}

void s_fill_add_const(double* out, const double* in, std::size_t n, double c) {
  for (std::size_t i = 0; i < n; ++i) out[i] = in[i] + c;
}

void s_axpy_min(double* acc, const double* row, std::size_t n, double add) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = row[i] + add;
    if (v < acc[i]) acc[i] = v;
  }
}

std::size_t s_count_le(const double* x, std::size_t n, double thr) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (x[i] <= thr);
  return c;
}

std::size_t s_count_lt(const double* x, std::size_t n, double thr) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (x[i] < thr);
  return c;
}

double s_sum_where_le(const double* x, const double* w, std::size_t n, double thr) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] <= thr) s += w[i];
  return s;
}

double s_sum_where_lt(const double* x, const double* w, std::size_t n, double thr) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] < thr) s += w[i];
  return s;
}

double s_min_val(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

double s_min_plus(const double* a, const double* b, std::size_t n) {
  double m = a[0] + b[0];
  for (std::size_t i = 1; i < n; ++i) {
    double v = a[i] + b[i];
    if (v < m) m = v;
  }
  return m;
}

std::uint32_t s_min_xor(const std::uint32_t* masks, std::size_t n, std::uint32_t m) {
  std::uint32_t best = masks[0] ^ m;
  for (std::size_t i = 1; i < n; ++i) {
    std::uint32_t v = masks[i] ^ m;
    if (v < best) best = v;
  }
  return best;
}

}  // namespace

const Impl& scalar() {
  static const Impl impl = {
      s_fill_xor_scaled, s_fill_absdiff, s_fill_add_const, s_axpy_min,
      s_count_le,        s_count_lt,     s_sum_where_le,   s_sum_where_lt,
      s_min_val,         s_min_plus,     s_min_xor,        "scalar",
  };
  return impl;
}

}  // namespace mmslab::kernels
