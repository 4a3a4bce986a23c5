#pragma once

// Self-contained complex FFT: iterative radix-2 for power-of-two sizes and
// Bluestein's chirp-z for the rest. Unnormalized: forward computes
// X_k = sum_a x_a e^{-2 pi i a k / n}, inverse the conjugate sum; callers
// apply measure/normalization factors. Deterministic (no planner state).

#include <cstddef>
#include <memory>
#include <vector>

#include "zklab/core.hpp"

namespace zklab {
namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

struct Radix2Tables {
  std::size_t n = 0;
  std::vector<std::size_t> rev;   // bit-reversal permutation
  std::vector<cplx> w;            // forward twiddles, per stage, packed

  explicit Radix2Tables(std::size_t n_) : n(n_), rev(n_) {
    std::size_t logn = 0;
    while ((std::size_t{1} << logn) < n) ++logn;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t k = 0; k < logn; ++k)
        if (i & (std::size_t{1} << k)) r |= std::size_t{1} << (logn - 1 - k);
      rev[i] = r;
    }
    // Stage s uses half = 2^s twiddles e^{-i pi k / half}, k < half.
    w.reserve(n);
    for (std::size_t half = 1; half < n; half <<= 1) {
      for (std::size_t k = 0; k < half; ++k) {
        double ang = -kPi * static_cast<double>(k) / static_cast<double>(half);
        w.push_back(cplx(std::cos(ang), std::sin(ang)));
      }
    }
  }
};

inline const Radix2Tables& radix2_tables(std::size_t n) {
  thread_local std::vector<std::unique_ptr<Radix2Tables>> cache;
  for (const auto& t : cache)
    if (t->n == n) return *t;
  cache.push_back(std::make_unique<Radix2Tables>(n));
  return *cache.back();
}

inline void fft_pow2(cplx* a, std::size_t n, bool inverse) {
  const Radix2Tables& t = radix2_tables(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = t.rev[i];
    if (i < r) std::swap(a[i], a[r]);
  }
  std::size_t woff = 0;
  for (std::size_t half = 1; half < n; half <<= 1) {
    for (std::size_t start = 0; start < n; start += half << 1) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx tw = t.w[woff + k];
        if (inverse) tw = std::conj(tw);
        cplx u = a[start + k];
        cplx v = a[start + half + k] * tw;
        a[start + k] = u + v;
        a[start + half + k] = u - v;
      }
    }
    woff += half;
  }
}

struct BluesteinTables {
  std::size_t n = 0, m = 0;
  std::vector<cplx> chirp;    // e^{-i pi k^2 / n}, k < n
  std::vector<cplx> kernel_f; // FFT of the padded conjugate-chirp kernel
};

inline const BluesteinTables& bluestein_tables(std::size_t n) {
  thread_local std::vector<std::unique_ptr<BluesteinTables>> cache;
  for (const auto& p : cache)
    if (p->n == n) return *p;
  BluesteinTables t;
  t.n = n;
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  t.m = m;
  t.chirp.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle argument small and exact.
    std::size_t k2 = (k * k) % (2 * n);
    double ang = -kPi * static_cast<double>(k2) / static_cast<double>(n);
    t.chirp[k] = cplx(std::cos(ang), std::sin(ang));
  }
  t.kernel_f.assign(m, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    cplx v = std::conj(t.chirp[k]);
    t.kernel_f[k] = v;
    if (k != 0) t.kernel_f[m - k] = v;
  }
  fft_pow2(t.kernel_f.data(), m, false);
  cache.push_back(std::make_unique<BluesteinTables>(std::move(t)));
  return *cache.back();
}

// Forward transform only; the public wrapper reduces the inverse to this.
inline void fft_bluestein(cplx* a, std::size_t n) {
  const BluesteinTables& t = bluestein_tables(n);
  std::vector<cplx> buf(t.m, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) buf[k] = a[k] * t.chirp[k];
  fft_pow2(buf.data(), t.m, false);
  for (std::size_t k = 0; k < t.m; ++k) buf[k] *= t.kernel_f[k];
  // unnormalized inverse FFT via conjugation, then scale by 1/m
  for (std::size_t k = 0; k < t.m; ++k) buf[k] = std::conj(buf[k]);
  fft_pow2(buf.data(), t.m, false);
  const double inv_m = 1.0 / static_cast<double>(t.m);
  for (std::size_t k = 0; k < n; ++k)
    a[k] = std::conj(buf[k]) * inv_m * t.chirp[k];
}

}  // namespace detail

// In-place unnormalized DFT of length n on contiguous data.
inline void fft(cplx* a, std::size_t n, bool inverse) {
  if (n == 1) return;
  if (detail::is_pow2(n)) {
    detail::fft_pow2(a, n, inverse);
    return;
  }
  if (!inverse) {
    detail::fft_bluestein(a, n);
  } else {
    // inverse = conj . forward . conj
    for (std::size_t k = 0; k < n; ++k) a[k] = std::conj(a[k]);
    detail::fft_bluestein(a, n);
    for (std::size_t k = 0; k < n; ++k) a[k] = std::conj(a[k]);
  }
}

inline void fft(std::vector<cplx>& a, bool inverse) { fft(a.data(), a.size(), inverse); }

// Strided in-place transform: count lines of length n, elements at
// base[line_stride*l + stride*k]. Gathers into a scratch buffer; the
// per-line FFT dominates for the sizes used here.
inline void fft_strided(cplx* base, std::size_t n, std::size_t stride,
                        std::size_t nlines, std::size_t line_stride, bool inverse) {
  thread_local std::vector<cplx> scratch;
  scratch.resize(n);
  for (std::size_t l = 0; l < nlines; ++l) {
    cplx* p = base + line_stride * l;
    if (stride == 1) {
      fft(p, n, inverse);
    } else {
      for (std::size_t k = 0; k < n; ++k) scratch[k] = p[stride * k];
      fft(scratch.data(), n, inverse);
      for (std::size_t k = 0; k < n; ++k) p[stride * k] = scratch[k];
    }
  }
}

}  // namespace zklab
