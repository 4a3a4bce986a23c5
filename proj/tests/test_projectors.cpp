// Cutoff family and spectral projectors. The load-bearing property is the
// telescoping partition of unity -- every shell decomposition downstream
// assumes it sums to 1 exactly (up to roundoff) on the whole frequency plane.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "zklab/cutoff.hpp"
#include "zklab/ensembles.hpp"
#include "zklab/projectors.hpp"
#include "zklab/rng.hpp"

using namespace zklab;

TEST_CASE("mu is a smooth even plateau bump", "[cutoff]") {
  CHECK(mu(0.0) == 1.0);
  CHECK(mu(1.25) == 1.0);
  CHECK(mu(-1.25) == 1.0);
  CHECK(mu(1.6) == 0.0);
  CHECK(mu(-2.0) == 0.0);
  // monotone nonincreasing in |x| across the ramp
  double prev = 1.0;
  for (double x = 1.25; x <= 1.6; x += 0.01) {
    const double v = mu(x);
    CHECK(v <= prev + 1e-15);
    CHECK(v >= 0.0);
    prev = v;
  }
  CHECK(mu(1.4) == mu(-1.4));
}

TEST_CASE("psi support and plateau", "[cutoff]") {
  CHECK(psi(1.0) == 1.0);
  CHECK(psi(0.8) == 1.0);
  CHECK(psi(1.25) == 1.0);
  CHECK(psi(0.6) == 0.0);   // below 5/8
  CHECK(psi(1.7) == 0.0);   // above 8/5
  CHECK(psi(-1.0) == 1.0);  // even
}

TEST_CASE("dyadic partition telescopes to one", "[cutoff]") {
  Rng rng(derive_seed(3, "partition"));
  for (int trial = 0; trial < 1000; ++trial) {
    // log-uniform radius up to 1e3, random direction
    const double r = std::pow(10.0, rng.uniform(-2.0, 3.0));
    const double ang = rng.uniform(0.0, 2.0 * kPi);
    const double xi = r * std::cos(ang);
    const double q = r * std::sin(ang);
    double sum = 0.0;
    for (long long N = 1; N <= (1LL << 14); N *= 2) sum += psi_N(xi, q, N);
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  // the modulation family telescopes the same way
  for (int trial = 0; trial < 200; ++trial) {
    const double s = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(0.0, 3.0));
    double sum = 0.0;
    for (long long L = 1; L <= (1LL << 14); L *= 2) sum += eta_L(s, L);
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("psi_N supports are the expected dyadic annuli", "[cutoff]") {
  Rng rng(derive_seed(3, "supports"));
  for (int trial = 0; trial < 500; ++trial) {
    const double xi = rng.uniform(-40.0, 40.0);
    const double q = rng.uniform(-40.0, 40.0);
    const double r = dilated_norm(xi, q);
    for (long long N : {1LL, 2LL, 8LL, 32LL}) {
      const double v = psi_N(xi, q, N);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (N == 1) {
        if (v != 0.0) CHECK(r <= 1.6);
        if (r <= 1.25) CHECK(v == 1.0);
      } else {
        const double Nd = static_cast<double>(N);
        if (v != 0.0) {
          CHECK(r >= 0.625 * Nd);
          CHECK(r <= 1.6 * Nd);
        }
        if (r >= 0.8 * Nd && r <= 1.25 * Nd) CHECK(v == 1.0);
      }
    }
  }
}

TEST_CASE("time cutoff plateau and support scale with delta", "[cutoff]") {
  for (double delta : {0.5, 1.0, 3.0}) {
    CHECK(time_cutoff(0.0, delta) == 1.0);
    CHECK(time_cutoff(delta, delta) == 1.0);
    CHECK(time_cutoff(2.0 * delta, delta) == 0.0);
    CHECK(time_cutoff(1.5 * delta, delta) > 0.0);
    CHECK(time_cutoff(1.5 * delta, delta) < 1.0);
    CHECK(time_cutoff(-1.5 * delta, delta) == time_cutoff(1.5 * delta, delta));
  }
}

TEST_CASE("grid shell lists reach past the grid corner", "[cutoff]") {
  Grid g(2.0 * kPi, 64, 64, kTwoPi, 8);
  const auto shells = dyadic_shells(g);
  REQUIRE(shells.size() >= 2);
  CHECK(shells.front() == 1);
  // truncated partition must still sum to 1 at the extreme lattice point
  const double xi = g.xi_max(), q = static_cast<double>(g.q_max());
  double sum = 0.0;
  for (long long N : shells) sum += psi_N(xi, q, N);
  CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("shell projector acts mode by mode", "[projectors]") {
  Grid g(2.0 * kPi, 16, 16, kTwoPi, 8);
  Rng rng(derive_seed(5, "proj"));
  SpectralField u(g, false);
  for (auto& v : u.coeff) v = rng.gaussian_c();
  const long long N = 4;
  const SpectralField pu = apply_PN(u, N);
  for (int j = 0; j < g.Nx; ++j)
    for (int b = 0; b < g.Ny; ++b) {
      const double w = psi_N(g.xi(j), static_cast<double>(g.q(b)), N);
      CHECK(std::abs(pu.at(j, b) - w * u.at(j, b)) < 1e-15);
    }
}

TEST_CASE("modulation projector weights the sheared axis", "[projectors]") {
  Grid g(2.0 * kPi, 8, 8, kTwoPi, 16);
  Rng rng(derive_seed(5, "projQ"));
  SpaceTimeField u(g, false);
  for (auto& v : u.coeff) v = rng.gaussian_c();
  const long long L = 2;
  const SpaceTimeField qu = apply_QL(u, L);
  for (int m = 0; m < g.Nt; ++m) {
    const double w = eta_L(g.sigma(m), L);
    for (int j = 0; j < g.Nx; ++j)
      for (int b = 0; b < g.Ny; ++b)
        CHECK(std::abs(qu.at(m, j, b) - w * u.at(m, j, b)) < 1e-15);
  }
}

TEST_CASE("hyperbola-gap predicate matches its definition", "[projectors]") {
  // |3 xi^2 - q^2| >= kappa |xi|^alpha AND |xi| >= kappa2
  CHECK(p_alpha_keeps(2.0, 0.0, 0.0, 1.0, 1.0));        // gap 12 >= 1
  CHECK_FALSE(p_alpha_keeps(1.0, 1.7, 0.0, 1.0, 1.0));  // gap 0.11 < 1
  CHECK_FALSE(p_alpha_keeps(0.5, 4.0, 0.0, 1.0, 1.0));  // |xi| < kappa2
  // alpha = 1: threshold scales linearly in |xi|
  CHECK(p_alpha_keeps(4.0, 0.0, 1.0, 10.0, 1.0));        // 48 >= 40
  CHECK_FALSE(p_alpha_keeps(4.0, 6.0, 1.0, 10.0, 1.0));  // |48-36|=12 < 40
  // exactly on the hyperbola the gap vanishes for every alpha
  const double xi = 3.0, q = std::sqrt(3.0) * xi;
  for (double alpha : {0.0, 0.5, 1.0})
    CHECK_FALSE(p_alpha_keeps(xi, q, alpha, 1e-6, 1e-6));
}

TEST_CASE("region projectors keep exactly the described modes", "[projectors]") {
  Grid g(2.0 * kPi, 16, 16, kTwoPi, 8);
  Rng rng(derive_seed(5, "region"));
  SpectralField u(g, false);
  for (auto& v : u.coeff) v = rng.gaussian_c();

  const RegionDescriptor regions[] = {
      RegionDescriptor::xi_vs_q_power(2.0 / 3.0),
      RegionDescriptor::xi_vs_q_power(0.5, /*complement=*/true),
      RegionDescriptor::hyperbola_gap(1.0),
      RegionDescriptor::half_space(+1),
      RegionDescriptor::half_space(-1),
      RegionDescriptor::custom(
          [](double xi, int q) { return xi > 0.0 && q % 2 == 0; }),
  };
  for (const auto& rd : regions) {
    const SpectralField ru = region_projector(u, rd);
    for (int j = 0; j < g.Nx; ++j)
      for (int b = 0; b < g.Ny; ++b) {
        const cplx want =
            rd.keeps(g.xi(j), g.q(b)) ? u.at(j, b) : cplx(0.0, 0.0);
        CHECK(std::abs(ru.at(j, b) - want) < 1e-15);
      }
  }
}
