#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "measures.hpp"
#include "phasespace.hpp"
#include "support.hpp"

using namespace spinwig;
namespace t = spinwig::testing;

namespace {

double norm2(const Vec3 &v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

// max over theta of C(2j, j-m) cos^{2(j+m)}(theta/2) sin^{2(j-m)}(theta/2),
// attained at cos^2(theta/2) = (j+m)/2j.
double dicke_husimi_max(int tj, int tm) {
  const int up = (tj + tm) / 2, down = (tj - tm) / 2;
  const double c2 = static_cast<double>(up) / tj;
  return binomial(tj, down) * std::pow(c2, up) * std::pow(1.0 - c2, down);
}

} // namespace

TEST_CASE("anticoherence measure") {
  const SpinState tet = named_state("tetrahedron").state();
  CHECK(std::abs(anticoherence_measure(tet, 1)) < 1e-14);
  CHECK(norm2(t::spin_expectation(tet)) < 1e-28);
  const SpinState ghz = named_state("ghz", Spin(3)).state();
  CHECK(std::abs(anticoherence_measure(ghz, 1)) < 1e-14);
  CHECK_THROWS_AS(anticoherence_measure(ghz, 0), Error);
  CHECK_THROWS_AS(anticoherence_measure(ghz, 4), Error);

  std::mt19937_64 rng(5);
  for (int tj = 1; tj <= 8; ++tj) {
    const double j = 0.5 * tj;
    const SpinState coherent = named_state("coherent", Spin(tj)).state();
    const auto top = anticoherence_profile(coherent);
    for (int trial = 0; trial < 200; ++trial) {
      const SpinState psi = t::random_state(Spin(tj), rng);
      const auto a = anticoherence_profile(psi);
      REQUIRE(a.size() == static_cast<std::size_t>(tj));
      for (std::size_t m = 1; m < a.size(); ++m)
        CHECK(a[m] >= a[m - 1] - 1e-15);
      CHECK(a.back() == doctest::Approx(1.0 - 1.0 / (tj + 1)).epsilon(1e-10));
      // Dipole block from <J>: A_1 = 3 |<J>|^2 / (j (j+1) (2j+1)).
      CHECK(a[0] == doctest::Approx(3.0 * norm2(t::spin_expectation(psi)) /
                                    (j * (j + 1) * (tj + 1)))
                        .epsilon(1e-10));
      for (std::size_t m = 0; m < a.size(); ++m)
        CHECK(a[m] <= top[m] + 1e-12);
    }
  }
}

TEST_CASE("platonic states are anticoherent to their design order") {
  const auto cube = anticoherence_profile(named_state("cube").state());
  CHECK(cube[2] < 1e-12);
  CHECK(cube[3] > 1e-3);
  const auto ico = anticoherence_profile(named_state("icosahedron").state());
  CHECK(ico[4] < 1e-12);
  CHECK(ico[5] > 1e-3);
  const auto octa = anticoherence_profile(named_state("octahedron").state());
  CHECK(octa[2] < 1e-12);
}

TEST_CASE("geometric entanglement") {
  for (int tj = 1; tj <= 6; ++tj) {
    CHECK(geometric_entanglement(named_state("coherent", Spin(tj)).state()) < 1e-12);
    CHECK(geometric_entanglement(SpinState::coherent(Spin(tj), 2.0, 1.0)) < 1e-9);
    for (int tm = -tj; tm <= tj; tm += 2) {
      const double expected = 1.0 - dicke_husimi_max(tj, tm);
      CHECK(geometric_entanglement(SpinState::dicke(Spin(tj), Projection(tm))) ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }
  CHECK(geometric_entanglement(SpinState::dicke(Spin(2), Projection(0))) ==
        doctest::Approx(0.5).epsilon(1e-9));

  std::mt19937_64 rng(3);
  for (int tj = 2; tj <= 8; tj += 2)
    for (int trial = 0; trial < 4; ++trial) {
      const SpinState psi = t::random_state(Spin(tj), rng);
      const double e = geometric_entanglement(psi);
      CHECK(e >= 0.0);
      CHECK(e <= 1.0);
      CHECK(std::abs(geometric_entanglement(rotate_state(psi, t::random_rotation(rng))) - e) < 1e-8);
    }
  const double w = geometric_entanglement(named_state("w", Spin(3)).state());
  const double ghz = geometric_entanglement(named_state("ghz", Spin(3)).state());
  MESSAGE("spin-3/2 geometric entanglement: W " << w << ", GHZ " << ghz);
}

TEST_CASE("one-qubit linear entropy") {
  for (int tj = 1; tj <= 10; ++tj) {
    CHECK(linear_entropy_one_qubit(named_state("coherent", Spin(tj)).state()) < 1e-15);
    const double j = 0.5 * tj;
    CHECK(linear_entropy_one_qubit(SpinState::dicke(Spin(tj), Projection(tj - 2))) ==
          doctest::Approx(0.5 * (1.0 - (j - 1) * (j - 1) / (j * j))).epsilon(1e-14));
  }
  CHECK(linear_entropy_one_qubit(named_state("ghz", Spin(3)).state()) ==
        doctest::Approx(0.5).epsilon(1e-14));
  std::mt19937_64 rng(10);
  for (int tj = 1; tj <= 8; ++tj)
    for (int trial = 0; trial < 50; ++trial) {
      const SpinState psi = t::random_state(Spin(tj), rng);
      const double s = linear_entropy_one_qubit(psi);
      CHECK(s >= 0.0);
      CHECK(s <= 0.5);
      const double a1 = anticoherence_measure(psi, 1);
      // Both vanish together with <J>.
      const double j = 0.5 * tj;
      CHECK(std::abs((0.5 - s) - a1 * (j + 1) * (tj + 1) / (6.0 * j)) < 1e-10);
    }
}

TEST_CASE("catalog entries") {
  const SpinState octa = named_state("octahedron").state();
  CHECK(std::abs(octa.amplitude(Projection(4)) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(octa.amplitude(Projection(-4)) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(constellations_equivalent(state_to_constellation(octa), t::octahedron(), 1e-8));
  const SpinState tet = named_state("tetrahedron").state();
  CHECK(tet.fidelity(constellation_to_state(t::tetrahedron())) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const NamedState m52 = named_state("max-5/2");
  const auto &stars = std::get<Constellation>(m52.definition).stars();
  REQUIRE(stars.size() == 5);
  CHECK(stars[3].theta == 2.86);
  CHECK(stars[3].phi == 2.23);
  CHECK(named_state("dicke:-1/2", Spin(3)).state().amplitude(Projection(-1)) == 1.0);
  CHECK(named_state("w", Spin(5)).state().amplitude(Projection(3)) == 1.0);
  CHECK(named_state("pyramid:3.14159265358979").state().fidelity(named_state("w", Spin(5)).state()) >
        0.0);
  try {
    named_state("dodecahedron");
    CHECK(false);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::UnknownName);
  }
  CHECK_THROWS_AS(named_state("coherent"), Error);
  CHECK_THROWS_AS(named_state("dicke:3/2", Spin(1)), Error);
  for (const NamedState &n : catalog()) {
    const SpinState s = n.state();
    double total = 0.0;
    for (const complex &a : s.amplitudes())
      total += std::norm(a);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.spin() == n.spin);
  }
}

TEST_CASE("dicke-coefficient extremal states match the constellation table") {
  const std::vector<std::pair<std::string, double>> rows = {
      {"1", 0.26935}, {"3/2", 0.39634}, {"2", 0.50078},
      {"5/2", 0.57016}, {"3", 0.65354}, {"7/2", 0.73395}};
  for (const auto &[j, value] : rows) {
    const double exact_tol = j.size() == 1 && j != "3" ? 1e-5 : 2e-3;
    CHECK(std::abs(negativity(named_state("max-dicke-" + j).state()) - value) < exact_tol);
    CHECK(std::abs(negativity(named_state("max-" + j).state()) - value) < 2e-3);
  }
}

TEST_CASE("measure report") {
  const MeasureReport r = measure_report(named_state("icosahedron").state());
  CHECK(r.spin == Spin(12));
  CHECK(r.anticoherence.size() == 12);
  CHECK(r.coulomb_energy > 0.0);
  CHECK(r.negativity > 0.0);
  CHECK(r.linear_entropy == doctest::Approx(0.5));
}
