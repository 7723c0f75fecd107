#include <vector>

#include "doctest.h"
#include "shnw/aligned.hpp"
#include "shnw/simd/kernels.hpp"
#include "shnw/stochastic.hpp"

using namespace shnw;

namespace {

struct Data {
  RVector c, s, w;
  CVector x, y;
};

Data make(std::size_t n, std::uint64_t seed) {
  RngStream rng(seed, 0, Substream::test);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    d.c.push_back(rng.normal());
    d.s.push_back(rng.normal());
    d.w.push_back(rng.normal());
    d.x.emplace_back(rng.normal(), rng.normal());
    d.y.emplace_back(rng.normal(), rng.normal());
  }
  return d;
}

void close(const CVector& a, const CVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].real() == doctest::Approx(b[i].real()).epsilon(1e-14));
    CHECK(a[i].imag() == doctest::Approx(b[i].imag()).epsilon(1e-14));
  }
}

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("dispatch honours the table contract") {
  const auto& k = simd::kernels();
  CHECK(k.rotate != nullptr);
  CHECK(simd::scalar_kernels().name == std::string("scalar"));
  if (simd::avx2_kernels() == nullptr) MESSAGE("AVX2 variant not available on this machine");
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (v == nullptr) return;
  const simd::KernelTable& r = simd::scalar_kernels();
  for (std::size_t n : {0, 1, 2, 3, 5, 8, 17, 64, 1001}) {
    CAPTURE(n);
    Data a = make(n, 100 + n);
    Data b = a;
    r.rotate(n, a.c.data(), a.s.data(), a.w.data(), a.x.data(), a.y.data());
    v->rotate(n, b.c.data(), b.s.data(), b.w.data(), b.x.data(), b.y.data());
    close(a.x, b.x);
    close(a.y, b.y);

    a = make(n, 200 + n);
    b = a;
    r.scale(n, a.c.data(), a.x.data(), a.y.data());
    v->scale(n, b.c.data(), b.x.data(), b.y.data());
    close(a.y, b.y);

    r.scale_add(n, 0.3, a.s.data(), a.x.data(), a.y.data());
    v->scale_add(n, 0.3, b.s.data(), b.x.data(), b.y.data());
    close(a.y, b.y);

    r.axpy(n, -1.7, a.x.data(), a.y.data());
    v->axpy(n, -1.7, b.x.data(), b.y.data());
    close(a.y, b.y);

    r.scal(n, 2.5, a.x.data());
    v->scal(n, 2.5, b.x.data());
    close(a.x, b.x);

    CHECK(r.sum_sq(n, a.x.data()) == doctest::Approx(v->sum_sq(n, b.x.data())).epsilon(1e-13));
    for (auto& w : a.w) w = std::abs(w);
    for (auto& w : b.w) w = std::abs(w);
    CHECK(r.weighted_sum_sq(n, a.w.data(), a.x.data()) ==
          doctest::Approx(v->weighted_sum_sq(n, b.w.data(), b.x.data())).epsilon(1e-13));

    CVector oa(n), ob(n);
    r.mul_real(n, a.x.data(), a.y.data(), oa.data());
    v->mul_real(n, b.x.data(), b.y.data(), ob.data());
    close(oa, ob);
    for (const auto& z : ob) CHECK(z.imag() == 0.0);
  }
}

TEST_CASE("kernels work on unaligned views") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (v == nullptr) return;
  Data a = make(33, 7);
  Data b = a;
  simd::scalar_kernels().axpy(32, 0.5, a.x.data() + 1, a.y.data() + 1);
  v->axpy(32, 0.5, b.x.data() + 1, b.y.data() + 1);
  close(a.y, b.y);
}

}
