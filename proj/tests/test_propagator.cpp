// The linear group and its two one-dimensional factorizations. The reference
// is the bare 2D multiplier written out longhand in each test; the three
// implementations must agree to near machine precision, satisfy the group
// law, and preserve both mass and the physical-space solution's reality.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "zklab/norms.hpp"
#include "zklab/propagator.hpp"
#include "zklab/rng.hpp"
#include "zklab/transforms.hpp"

using namespace zklab;

namespace {

SpectralField random_field(const Grid& g, uint64_t seed, bool real) {
  Rng rng(seed);
  SpectralField u(g, real);
  for (auto& v : u.coeff) v = rng.gaussian_c();
  if (real) {
    // symmetrize: u(-k) = conj(u(k)); the unpaired highest modes on an even
    // grid have no conjugate partner, so real data keeps them empty
    SpectralField s(g, true);
    for (int j = 0; j < g.Nx; ++j)
      for (int b = 0; b < g.Ny; ++b) {
        const int jn = (g.Nx - j) % g.Nx, bn = (g.Ny - b) % g.Ny;
        s.at(j, b) = 0.5 * (u.at(j, b) + std::conj(u.at(jn, bn)));
      }
    for (int b = 0; b < g.Ny; ++b) s.at(g.Nx / 2, b) = 0.0;
    for (int j = 0; j < g.Nx; ++j) s.at(j, g.Ny / 2) = 0.0;
    return s;
  }
  return u;
}

double max_mode_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeff.size(); ++i)
    m = std::max(m, std::abs(a.coeff[i] - b.coeff[i]));
  return m;
}

}  // namespace

TEST_CASE("multiplier matches the longhand phase on every mode", "[propagator]") {
  Grid g(4.0 * kPi, 16, 16);
  const SpectralField u0 = random_field(g, derive_seed(31, "prop"), false);
  const double t = 0.37;
  const SpectralField ut = linear_propagate(u0, t);
  for (int j = 0; j < g.Nx; ++j)
    for (int b = 0; b < g.Ny; ++b) {
      const double xi = g.xi(j), q = static_cast<double>(g.q(b));
      const double ang = t * xi * (xi * xi + q * q);
      const cplx want = u0.at(j, b) * cplx(std::cos(ang), std::sin(ang));
      // the angles reach ~1e2, so regrouping the products moves cos/sin by a
      // few ulps of the angle; 1e-12 still pins every mode individually
      CHECK(std::abs(ut.at(j, b) - want) < 1e-12);
    }
}

TEST_CASE("both factorized views equal the 2D multiplier", "[propagator]") {
  Grid g(2.0 * kPi, 16, 12);
  Rng seeds(derive_seed(31, "views"));
  for (int trial = 0; trial < 10; ++trial) {
    const SpectralField u0 =
        random_field(g, derive_seed(31, "views-field", trial), false);
    const double t = seeds.uniform(-3.0, 3.0);
    const SpectralField ref = linear_propagate(u0, t);
    CHECK(max_mode_diff(schrodinger_view_evolve(u0, t), ref) < 1e-10);
    CHECK(max_mode_diff(airy_view_evolve(u0, t), ref) < 1e-10);
  }
}

TEST_CASE("group law and unitarity", "[propagator]") {
  Grid g(2.0 * kPi, 16, 16);
  const SpectralField u0 = random_field(g, derive_seed(31, "group"), false);
  const double t1 = 0.81, t2 = -1.37;
  const SpectralField two_step = linear_propagate(linear_propagate(u0, t1), t2);
  const SpectralField one_step = linear_propagate(u0, t1 + t2);
  CHECK(max_mode_diff(two_step, one_step) < 1e-13);

  // |multiplier| = 1: every Sobolev norm is preserved exactly
  for (double s : {0.0, 1.0}) {
    CHECK(norm(linear_propagate(u0, 2.13), NormSpec::hs(s)) ==
          Catch::Approx(norm(u0, NormSpec::hs(s))).epsilon(1e-13));
  }
  CHECK(max_mode_diff(linear_propagate(u0, 0.0), u0) == 0.0);
}

TEST_CASE("reality is preserved in physical space", "[propagator]") {
  Grid g(2.0 * kPi, 16, 16);
  const SpectralField u0 = random_field(g, derive_seed(31, "real"), true);
  REQUIRE(conjugate_symmetry_defect(u0) < 1e-12);
  const SpectralField ut = linear_propagate(u0, 0.59);
  CHECK(conjugate_symmetry_defect(ut) < 1e-12);
  const PhysicalField ph = to_physical(ut);
  double worst = 0.0;
  for (const auto& v : ph.val) worst = std::max(worst, std::abs(v.imag()));
  CHECK(worst < 1e-13);
}

TEST_CASE("free lift slices reproduce the propagated datum", "[propagator]") {
  // ties the space-time lift, the slice transform, and the group together
  Grid gs(2.0 * kPi, 8, 8);
  const SpectralField u0 = random_field(gs, derive_seed(31, "lift"), false);
  SpaceTimeField U = lift_linear_evolution(u0, kTwoPi, 16);
  const std::vector<SpectralField> slices = time_slices(U);
  const Grid& g = U.grid;
  for (int r = 0; r < g.Nt; r += 3) {
    const SpectralField want = linear_propagate(u0, g.t(r));
    CHECK(max_mode_diff(slices[static_cast<std::size_t>(r)], want) < 1e-10);
  }
  // and off-lattice times through the direct slice evaluator
  const double t = 0.123456;
  CHECK(max_mode_diff(time_slice_at(U, t), linear_propagate(u0, t)) < 1e-10);
}
