// FFT, grid indexing, RNG determinism. The FFT is checked against a naive
// O(n^2) DFT so every later spectral test rests on an independently verified
// transform.

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <string>
#include <vector>

#include "zklab/core.hpp"
#include "zklab/fft.hpp"
#include "zklab/rng.hpp"
#include "zklab/symbols.hpp"

using namespace zklab;

namespace {

std::vector<cplx> naive_dft(const std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  const double sgn = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sgn * 2.0 * kPi * static_cast<double>(k * j % n) /
                         static_cast<double>(n);
      acc += a[j] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;  // both directions unnormalized, matching the library contract
  }
  return out;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("fft matches the naive DFT", "[fft]") {
  Rng rng(derive_seed(7, "fft-oracle"));
  for (std::size_t n : {8u, 16u, 64u, 12u, 20u, 48u}) {  // pow2 and Bluestein sizes
    std::vector<cplx> a(n);
    for (auto& v : a) v = rng.gaussian_c();
    std::vector<cplx> fwd = a;
    fft(fwd, false);
    CHECK(max_diff(fwd, naive_dft(a, false)) < 1e-10);
    std::vector<cplx> rt = fwd;
    fft(rt, true);
    for (auto& v : rt) v /= static_cast<double>(n);  // unnormalized inverse
    CHECK(max_diff(rt, a) < 1e-12);
  }
}

TEST_CASE("strided fft agrees with per-column copies", "[fft]") {
  Rng rng(derive_seed(7, "fft-strided"));
  const std::size_t n = 16, cols = 5;
  std::vector<cplx> mat(n * cols);
  for (auto& v : mat) v = rng.gaussian_c();
  std::vector<cplx> expect = mat;
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<cplx> line(n);
    for (std::size_t r = 0; r < n; ++r) line[r] = mat[r * cols + c];
    fft(line, false);
    for (std::size_t r = 0; r < n; ++r) expect[r * cols + c] = line[r];
  }
  fft_strided(mat.data(), n, cols, cols, 1, false);
  CHECK(max_diff(mat, expect) < 1e-12);
}

TEST_CASE("grid index maps round-trip and frequencies are centered", "[core]") {
  Grid g(2.0 * kPi, 16, 12, kTwoPi, 8);
  for (int i = 0; i < g.Nx; ++i)
    CHECK(Grid::storage_index(Grid::signed_index(i, g.Nx), g.Nx) == i);
  CHECK(g.xi(0) == 0.0);
  CHECK(g.xi(1) == Catch::Approx(1.0));           // dxi = 2pi/Lx = 1
  CHECK(g.xi(g.Nx - 1) == Catch::Approx(-1.0));   // wrap to -1
  CHECK(g.q(g.Ny / 2 - 1) == g.Ny / 2 - 1);
  CHECK(g.q(g.Ny / 2) == -g.Ny / 2);
  CHECK(g.sigma(g.Nt - 1) == Catch::Approx(-g.dtau()));
  // physical sample points: x and t centered, y from zero
  CHECK(g.x(0) == Catch::Approx(-0.5 * g.Lx));
  CHECK(g.y(0) == 0.0);
  CHECK(g.t(g.Nt / 2) == Catch::Approx(0.0));
}

TEST_CASE("grid validation rejects odd or tiny extents", "[core]") {
  CHECK_THROWS_AS(Grid(1.0, 7, 8, 1.0, 8), GridError);
  CHECK_THROWS_AS(Grid(1.0, 8, 4, 1.0, 8), GridError);
  CHECK_THROWS_AS(Grid(-1.0, 8, 8, 1.0, 8), GridError);
}

TEST_CASE("symbols match their defining formulas", "[symbols]") {
  CHECK(phase(2.0, 3.0) == Catch::Approx(2.0 * (4.0 + 9.0)));
  CHECK(dilated_norm(1.0, 2.0) == Catch::Approx(std::sqrt(3.0 + 4.0)));
  CHECK(bracket(0.0) == 1.0);
  CHECK(bracket(3.0, 4.0) == Catch::Approx(std::sqrt(26.0)));
  CHECK(h_parity(4) == 0.0);
  CHECK(h_parity(-3) == 0.5);
  CHECK(h_parity(7) == 0.5);
}

TEST_CASE("fnv1a matches the published 64-bit vectors", "[rng]") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("derived seeds separate streams", "[rng]") {
  const uint64_t s = derive_seed(42, "stream", 1, 2);
  CHECK(s == derive_seed(42, "stream", 1, 2));  // pure function
  CHECK(s != derive_seed(42, "stream", 2, 1));
  CHECK(s != derive_seed(42, "maerts", 1, 2));
  CHECK(s != derive_seed(43, "stream", 1, 2));
}

TEST_CASE("rng reproduces and distributions are sane", "[rng]") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  Rng r(derive_seed(9, "moments"));
  const int n = 200000;
  double mean = 0.0, second = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx z = r.gaussian_c();
    mean += z.real();
    second += std::norm(z);
  }
  mean /= n;
  second /= n;
  CHECK(std::abs(mean) < 0.01);           // sigma/sqrt(n) ~ 0.0016
  CHECK(second == Catch::Approx(1.0).margin(0.02));  // E|z|^2 = 1

  for (int i = 0; i < 1000; ++i) {
    const long long v = r.uniform_int(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
  }
}
