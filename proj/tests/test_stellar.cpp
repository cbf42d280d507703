#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "errors.hpp"
#include "stellar.hpp"
#include "support.hpp"

using namespace spinwig;

using namespace spinwig::testing;

TEST_CASE("star chart is canonical") {
  const Star a = Star::canonical(-0.3, 0.2);
  CHECK(a.theta == doctest::Approx(0.3));
  CHECK(a.phi == doctest::Approx(0.2 + kPi));
  const Star b = Star::canonical(1.0, -1.0);
  CHECK(b.phi == doctest::Approx(2 * kPi - 1.0));
  const Star c = Star::canonical(1e-14, 2.0);
  CHECK(c.theta == 0.0);
  CHECK(c.phi == 0.0);
  const Star d = Star::canonical(kPi, 3.0);
  CHECK(d.phi == 0.0);
  const Star e = Star::from_cartesian({0.0, -2.0, 0.0});
  CHECK(e.theta == doctest::Approx(kPi / 2));
  CHECK(e.phi == doctest::Approx(3 * kPi / 2));
}

TEST_CASE("spin state validation") {
  CHECK_THROWS_AS(SpinState(Spin(2), {0.0, 0.0, 0.0}), Error);
  try {
    SpinState(Spin(1), {0.0, 0.0});
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::ZeroState);
  }
  CHECK_THROWS_AS(SpinState(Spin(2), {1.0, 0.0}), Error);
  const SpinState s(Spin(1), {3.0, complex(0, 4.0)});
  CHECK(std::abs(s.amplitudes()[0] - 0.6) < 1e-15);
  CHECK(std::abs(s.amplitudes()[1] - complex(0, 0.8)) < 1e-15);
}

TEST_CASE("dicke states place stars on the poles") {
  for (int tj = 1; tj <= 12; ++tj)
    for (int tm = -tj; tm <= tj; tm += 2) {
      const Constellation c =
          state_to_constellation(SpinState::dicke(Spin(tj), Projection(tm)));
      const int north = static_cast<int>(std::count_if(
          c.stars().begin(), c.stars().end(), [](const Star &s) { return s.theta == 0.0; }));
      const int south = static_cast<int>(std::count_if(
          c.stars().begin(), c.stars().end(), [](const Star &s) { return s.theta == kPi; }));
      CHECK(north == (tj + tm) / 2);
      CHECK(south == (tj - tm) / 2);
    }
}

TEST_CASE("coherent state points along its stars") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 2 * kPi);
  for (int tj = 1; tj <= 10; ++tj)
    for (int trial = 0; trial < 5; ++trial) {
      const double theta = std::acos(u(rng)), phi = p(rng);
      const SpinState c = SpinState::coherent(Spin(tj), theta, phi);
      const Vec3 jv = spin_expectation(c);
      const Vec3 n = Star{theta, phi}.cartesian();
      for (int i = 0; i < 3; ++i)
        CHECK(std::abs(jv[static_cast<std::size_t>(i)] - 0.5 * tj * n[static_cast<std::size_t>(i)]) < 1e-12);
      // Rotating |j,j> by (phi, theta, 0) gives the same ray.
      const SpinState r = rotate_state(SpinState::dicke(Spin(tj), Projection(tj)), {phi, theta, 0});
      CHECK(r.fidelity(c) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("rotation acts on <J> as the rotation matrix") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  for (int tj = 1; tj <= 8; ++tj) {
    const SpinState psi = random_state(Spin(tj), rng);
    const EulerAngles e{a(rng), a(rng), a(rng)};
    const Vec3 before = rotate_vector(rotation_matrix(e), spin_expectation(psi));
    const Vec3 after = spin_expectation(rotate_state(psi, e));
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(before[static_cast<std::size_t>(i)] - after[static_cast<std::size_t>(i)]) < 1e-12);
  }
}

TEST_CASE("majorana roundtrip fidelity") {
  std::mt19937_64 rng(1234);
  for (int tj = 1; tj <= 12; ++tj) {
    double worst = 1.0;
    for (int trial = 0; trial < 500; ++trial) {
      const SpinState psi = random_state(Spin(tj), rng);
      const SpinState back = constellation_to_state(state_to_constellation(psi));
      worst = std::min(worst, psi.fidelity(back));
    }
    CHECK(worst >= 1.0 - 1e-9);
  }
}

TEST_CASE("constellation roundtrip recovers stars") {
  std::mt19937_64 rng(77);
  for (int n = 1; n <= 10; ++n)
    for (int trial = 0; trial < 50; ++trial) {
      const Constellation c = random_constellation(n, rng);
      const Constellation back = state_to_constellation(constellation_to_state(c));
      CHECK(matched_distance(c, back) < 1e-7);
    }
  // Stars at the poles survive too.
  const Constellation poles({{0, 0}, {0, 0}, {kPi, 0}, {1.0, 2.0}});
  CHECK(matched_distance(poles, state_to_constellation(constellation_to_state(poles))) < 1e-7);
}

TEST_CASE("stars rotate with the state") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  for (int tj = 1; tj <= 10; ++tj)
    for (int trial = 0; trial < 10; ++trial) {
      const SpinState psi = random_state(Spin(tj), rng);
      const EulerAngles e{a(rng), a(rng), a(rng)};
      const Constellation lhs = state_to_constellation(rotate_state(psi, e));
      const Constellation rhs = rotate_constellation(state_to_constellation(psi), e);
      CHECK(matched_distance(lhs, rhs) < 1e-7);
    }
}

TEST_CASE("tetrahedral state has the tetrahedron as constellation") {
  const SpinState t(Spin(4), {0.0, std::sqrt(2.0 / 3.0), 0.0, 0.0, 1.0 / std::sqrt(3.0)});
  const Constellation c = state_to_constellation(t);
  CHECK(constellations_equivalent(c, tetrahedron(), 1e-8));
  CHECK(t.fidelity(constellation_to_state(tetrahedron())) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gram spectra of reference shapes") {
  const auto t = gram_spectrum(tetrahedron()).eigenvalues;
  for (double x : t)
    CHECK(x == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  const auto o = gram_spectrum(octahedron()).eigenvalues;
  for (double x : o)
    CHECK(x == doctest::Approx(2.0).epsilon(1e-12));
  const auto p = gram_spectrum(Constellation({{0, 0}, {kPi, 0}})).eigenvalues;
  CHECK(p[0] == doctest::Approx(2.0));
  CHECK(std::abs(p[1]) < 1e-14);
  CHECK(std::abs(p[2]) < 1e-14);
}

TEST_CASE("rotational equivalence") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  for (int n = 2; n <= 9; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      const Constellation c = random_constellation(n, rng);
      const EulerAngles e{a(rng), a(rng), a(rng)};
      std::vector<Star> rotated = rotate_constellation(c, e).stars();
      std::shuffle(rotated.begin(), rotated.end(), rng);
      const Constellation d(rotated);
      CHECK(alignment_residual(c, d) < 1e-9);
      CHECK(constellations_equivalent(c, d, 1e-6));
      // Moving one star breaks equivalence.
      std::vector<Star> kicked = d.stars();
      kicked[0].theta = std::clamp(kicked[0].theta + 0.05, 0.0, kPi);
      CHECK_FALSE(constellations_equivalent(c, Constellation(kicked), 1e-6));
    }
  // Mirror image of a chiral configuration is not a rotation of it.
  const Constellation chiral({{0, 0}, {1.0, 0}, {1.3, 1.0}, {2.0, 2.5}, {2.2, 4.0}});
  std::vector<Star> mirror;
  for (const Star &s : chiral.stars())
    mirror.push_back({s.theta, -s.phi});
  CHECK(alignment_residual(chiral, Constellation(mirror)) > 1e-3);
  // Collinear configurations.
  const Constellation axis({{0, 0}, {0, 0}, {kPi, 0}});
  const Constellation tilted = rotate_constellation(axis, EulerAngles{0.3, 1.1, 0});
  CHECK(constellations_equivalent(axis, tilted, 1e-9));
}

TEST_CASE("coulomb energies of reference shapes") {
  CHECK(coulomb_energy(Constellation({{0, 0}, {kPi, 0}})) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(coulomb_energy(tetrahedron()) == doctest::Approx(6.0 / std::sqrt(8.0 / 3.0)).epsilon(1e-13));
  CHECK(coulomb_energy(octahedron()) == doctest::Approx(1.5 + 12.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(std::isinf(coulomb_energy(Constellation({{1, 1}, {1, 1}}))));
}
