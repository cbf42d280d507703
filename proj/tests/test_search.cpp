#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "measures.hpp"
#include "nelder_mead.hpp"
#include "phasespace.hpp"
#include "search.hpp"
#include "support.hpp"

using namespace spinwig;
namespace t = spinwig::testing;

TEST_CASE("nelder-mead") {
  const Objective rosen = [](std::span<const double> x) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      f += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
    return f;
  };
  NelderMeadOptions o;
  o.max_evals = 50000;
  const auto r = nelder_mead(rosen, {-1.2, 1.0, -0.5, 0.3}, o);
  CHECK(r.converged);
  for (double xi : r.x)
    CHECK(xi == doctest::Approx(1.0).epsilon(1e-4));

  o.lower = {-2.0, -2.0};
  o.upper = {0.5, 2.0};
  const auto boxed = nelder_mead(rosen, {-1.0, 1.0}, o);
  CHECK(boxed.x[0] <= 0.5);
  CHECK(boxed.x[0] == doctest::Approx(0.5).epsilon(1e-4));

  const Objective with_nan = [](std::span<const double> x) {
    return x[0] < -1.0 ? std::nan("") : (x[0] - 1.0) * (x[0] - 1.0);
  };
  CHECK(nelder_mead(with_nan, {-0.5}).x[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gauge chart") {
  std::mt19937_64 rng(21);
  for (int tj = 2; tj <= 7; ++tj) {
    CHECK(gauge_dimension(Spin(tj)) == 2 * tj - 3);
    for (int trial = 0; trial < 10; ++trial) {
      const Constellation c = t::random_constellation(tj, rng);
      const auto p = gauge_params(c);
      REQUIRE(static_cast<int>(p.size()) == gauge_dimension(Spin(tj)));
      const Constellation g = gauge_constellation(Spin(tj), p);
      CHECK(alignment_residual(c, g) < 1e-9);
      CHECK(g.stars()[0].theta == 0.0);
      CHECK(std::abs(g.stars()[1].phi) < 1e-12);
      CHECK(negativity(constellation_to_state(g)) ==
            doctest::Approx(negativity(constellation_to_state(c))).epsilon(1e-5));
    }
  }
}

TEST_CASE("small maximizations reach the known optima") {
  SearchOptions o;
  o.n_starts = 20;
  o.seed = 3;
  const SearchOutcome s1 = maximize_negativity(Spin(2), o);
  CHECK(s1.negativity == doctest::Approx(0.26935).epsilon(2e-5));
  const Constellation antipodal({{0.0, 0.0}, {kPi, 0.0}});
  CHECK(constellations_equivalent(s1.constellation, antipodal, 1e-3));
  CHECK(s1.n_converged_to_best >= 1);
  CHECK(s1.n_starts == 20);

  o.n_starts = 40;
  const SearchOutcome s32 = maximize_negativity(Spin(3), o);
  CHECK(s32.negativity == doctest::Approx(0.39634).epsilon(2e-5));
  const Constellation triangle({{kPi / 2, 0.0}, {kPi / 2, 2 * kPi / 3}, {kPi / 2, 4 * kPi / 3}});
  CHECK(constellations_equivalent(s32.constellation, triangle, 1e-3));
  for (std::size_t i = 1; i < s32.clusters.size(); ++i)
    CHECK(s32.clusters[i].value <= s32.clusters[0].value);

  o.n_starts = 40;
  const SearchOutcome s2 = maximize_negativity(Spin(4), o);
  CHECK(s2.negativity == doctest::Approx(0.50078).epsilon(2e-5));
  CHECK(constellations_equivalent(s2.constellation, t::tetrahedron(), 1e-3));
}

TEST_CASE("searches are reproducible across thread counts") {
  SearchOptions o;
  o.n_starts = 12;
  o.seed = 77;
  o.threads = 1;
  const SearchOutcome a = maximize_negativity(Spin(3), o);
  o.threads = 3;
  const SearchOutcome b = maximize_negativity(Spin(3), o);
  CHECK(a.negativity == b.negativity);
  CHECK(a.n_converged_to_best == b.n_converged_to_best);
  REQUIRE(a.constellation.size() == b.constellation.size());
  for (std::size_t i = 0; i < a.constellation.size(); ++i) {
    CHECK(a.constellation.stars()[i].theta == b.constellation.stars()[i].theta);
    CHECK(a.constellation.stars()[i].phi == b.constellation.stars()[i].phi);
  }
  o.seed = 78;
  CHECK(maximize_negativity(Spin(3), o).seed == 78);
}

TEST_CASE("minimization finds coherent states") {
  SearchOptions o;
  o.n_starts = 10;
  for (int tj : {2, 4}) {
    const SearchOutcome m = minimize_negativity(Spin(tj), o);
    // The minimum is flat; stars only gather near a common point.
    CHECK(m.spectrum.eigenvalues[0] > 0.95 * tj);
    CHECK(m.negativity ==
          doctest::Approx(negativity(named_state("coherent", Spin(tj)).state())).epsilon(1e-4));
  }
}

TEST_CASE("tetrahedron snap") {
  SearchOptions o;
  o.n_starts = 10;
  CHECK(maximize_with_tetra_snap(Spin(4), o).negativity == doctest::Approx(0.50078).epsilon(2e-5));
  CHECK_THROWS_AS(maximize_with_tetra_snap(Spin(3), o), Error);
}

TEST_CASE("polish from tabulated coordinates") {
  const auto c = std::get<Constellation>(named_state("max-5/2").definition);
  const SearchOutcome p = polish_negativity(c);
  CHECK(p.negativity >= negativity(constellation_to_state(c)) - 1e-6);
  CHECK(p.negativity == doctest::Approx(0.57016).epsilon(2e-5));
}

TEST_CASE("thomson problem") {
  SearchOptions o;
  o.n_starts = 10;
  CHECK(minimize_coulomb(2, o).energy == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(minimize_coulomb(4, o).energy == doctest::Approx(3.674234614).epsilon(1e-7));
  const ThomsonOutcome six = minimize_coulomb(6, o);
  CHECK(six.energy == doctest::Approx(9.985281374).epsilon(1e-7));
  CHECK(constellations_equivalent(six.constellation, t::octahedron(), 1e-4));
}

TEST_CASE("square pyramid family") {
  const auto sweep = sweep_pyramid({0.0, 1.0, 1.84, 2.5, kPi});
  CHECK(sweep.front().negativity ==
        doctest::Approx(negativity(named_state("coherent", Spin(5)).state())).epsilon(1e-5));
  CHECK(sweep[2].negativity > sweep[1].negativity);
  CHECK(sweep[2].negativity > sweep[3].negativity);
  const SweepPoint peak = pyramid_local_max(1.5, 2.2);
  CHECK(peak.parameter == doctest::Approx(1.841).epsilon(1e-2));
  CHECK(peak.negativity == doctest::Approx(0.570156).epsilon(1e-5));
  CHECK(sweep.back().negativity == doctest::Approx(0.2597).epsilon(1e-3));
}

TEST_CASE("spin-1 family") {
  std::vector<double> eta;
  for (int i = 0; i <= 20; ++i)
    eta.push_back(kPi * i / 20);
  const auto sweep = sweep_spin1_family(eta);
  for (std::size_t i = 1; i < sweep.size(); ++i)
    CHECK(sweep[i].negativity > sweep[i - 1].negativity);
  CHECK(sweep.back().negativity == doctest::Approx(0.26935).epsilon(2e-5));
  CHECK(spin1_family_state(0.7).fidelity(
            constellation_to_state(Constellation({{0.0, 0.0}, {0.7, 0.0}}))) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spin-3/2 family") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const double t1 = u(rng), t2 = u(rng), phi = 2 * u(rng);
    const SpinState a = spin32_family_state(t1, t2, phi);
    const SpinState b =
        constellation_to_state(Constellation({{0.0, 0.0}, {t1, 0.0}, {t2, phi}}));
    CHECK(a.fidelity(b) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(negativity(spin32_family_state(2 * kPi / 3, 2 * kPi / 3, kPi)) ==
        doctest::Approx(0.39634).epsilon(2e-5));
  const auto sweep = sweep_spin32_family({0.5, 1.0}, {0.5, 1.0}, {0.0, kPi});
  CHECK(sweep.size() == 6);
  for (const auto &p : sweep)
    CHECK(p.theta2 >= p.theta1);
}

TEST_CASE("two-triangles family") {
  std::vector<double> grid;
  for (int i = 0; i <= 30; ++i)
    grid.push_back(kPi * i / 30);
  const TriangleLandscape land = sweep_two_triangles(grid, grid, 32);
  CHECK(land.values.size() == grid.size() * grid.size());
  CHECK(land.at(3, 7) == doctest::Approx(land.at(7, 3)).epsilon(1e-9));
  const TrianglePoint best = two_triangles_max(land);
  CHECK(best.value == doctest::Approx(0.733958).epsilon(1e-5));
  CHECK(best.axial_separation == doctest::Approx(0.44).epsilon(0.05));
  const TrianglePoint ac = two_triangles_anticoherence_min(2);
  CHECK(ac.axial_separation == doctest::Approx(0.82).epsilon(0.03));
  CHECK(ac.value < 1e-3);
}
