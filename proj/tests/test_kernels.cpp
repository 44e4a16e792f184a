#include <doctest.h>

#include <cmath>
#include <vector>

#include "mmslab/kernels.hpp"
#include "mmslab/rng.hpp"

using namespace mmslab;

namespace {

struct Arrays {
  std::vector<double> x, w;
  std::vector<std::uint32_t> m;
};

Arrays random_arrays(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Arrays a;
  a.x.resize(n);
  a.w.resize(n);
  a.m.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.x[i] = rng.uniform(-4.0, 4.0);
    a.w[i] = rng.uniform(0.0, 2.0);
    a.m[i] = static_cast<std::uint32_t>(rng.below(1u << 20));
  }
  return a;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree") {
  const kernels::Impl& s = kernels::scalar();
  const kernels::Impl* v = kernels::avx2();
  if (!v) {
    MESSAGE("avx2 not available on this machine; dispatch falls back to scalar");
    CHECK(kernels::active().name == std::string("scalar"));
    return;
  }
  // Sizes straddle vector widths and exercise remainders.
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 33u, 127u, 1024u, 1029u}) {
    Arrays a = random_arrays(n, 1234 + n);
    const double thr = 0.37;

    std::vector<double> out_s(n), out_v(n);
    s.fill_xor_scaled(out_s.data(), a.m.data(), n, 0xA5F0u, 0.125);
    v->fill_xor_scaled(out_v.data(), a.m.data(), n, 0xA5F0u, 0.125);
    CHECK(out_s == out_v);  // exact

    s.fill_absdiff(out_s.data(), a.x.data(), n, 0.7);
    v->fill_absdiff(out_v.data(), a.x.data(), n, 0.7);
    CHECK(out_s == out_v);

    s.fill_add_const(out_s.data(), a.x.data(), n, 1.75);
    v->fill_add_const(out_v.data(), a.x.data(), n, 1.75);
    CHECK(out_s == out_v);

    std::vector<double> acc_s(n, 1.0), acc_v(n, 1.0);
    s.axpy_min(acc_s.data(), a.x.data(), n, 0.25);
    v->axpy_min(acc_v.data(), a.x.data(), n, 0.25);
    CHECK(acc_s == acc_v);

    CHECK(s.count_le(a.x.data(), n, thr) == v->count_le(a.x.data(), n, thr));
    CHECK(s.count_lt(a.x.data(), n, thr) == v->count_lt(a.x.data(), n, thr));
    CHECK(s.min_val(a.x.data(), n) == v->min_val(a.x.data(), n));
    CHECK(s.min_plus(a.x.data(), a.w.data(), n) == v->min_plus(a.x.data(), a.w.data(), n));
    CHECK(s.min_xor(a.m.data(), n, 0x3Cu) == v->min_xor(a.m.data(), n, 0x3Cu));

    // Sums may reassociate; only rounding-level differences are allowed.
    double ss = s.sum_where_le(a.x.data(), a.w.data(), n, thr);
    double sv = v->sum_where_le(a.x.data(), a.w.data(), n, thr);
    CHECK(std::fabs(ss - sv) <= 1e-12 * (1.0 + std::fabs(ss)));
    ss = s.sum_where_lt(a.x.data(), a.w.data(), n, thr);
    sv = v->sum_where_lt(a.x.data(), a.w.data(), n, thr);
    CHECK(std::fabs(ss - sv) <= 1e-12 * (1.0 + std::fabs(ss)));
  }
}

TEST_CASE("kernel reference semantics") {
  const kernels::Impl& s = kernels::scalar();
  Arrays a = random_arrays(257, 77);
  // count_le is monotone in the threshold and consistent with sum on unit weights
  std::vector<double> ones(a.x.size(), 1.0);
  double prev = 0;
  for (double thr = -4.0; thr <= 4.0; thr += 0.5) {
    double c = static_cast<double>(s.count_le(a.x.data(), a.x.size(), thr));
    CHECK(c >= prev);
    CHECK(c == s.sum_where_le(a.x.data(), ones.data(), a.x.size(), thr));
    prev = c;
  }
  // dyadic weights sum exactly: scalar == avx2 bit-for-bit
  if (const kernels::Impl* v = kernels::avx2()) {
    std::vector<double> dy(a.x.size(), 0.0009765625);  // 2^-10
    double ss = s.sum_where_le(a.x.data(), dy.data(), a.x.size(), 1.0);
    double sv = v->sum_where_le(a.x.data(), dy.data(), a.x.size(), 1.0);
    CHECK(ss == sv);
  }
}
