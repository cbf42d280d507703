#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "angular.hpp"
#include "phasespace.hpp"

using namespace spinwig;

namespace {

// Explicit P_l coefficients from 2^-l sum_k (-1)^k C(l,k) C(2l-2k,l) x^{l-2k}.
double legendre_explicit(int l, double x) {
  long double s = 0.0L;
  for (int k = 0; 2 * k <= l; ++k) {
    const long double c = static_cast<long double>(binomial(l, k)) * binomial(2 * l - 2 * k, l);
    s += (k % 2 == 0 ? c : -c) * std::pow(static_cast<long double>(x), l - 2 * k);
  }
  return static_cast<double>(s / std::pow(2.0L, l));
}

} // namespace

TEST_CASE("spin parsing keeps half-integers exact") {
  CHECK(Spin::parse("5/2").twice() == 5);
  CHECK(Spin::parse("3.5").twice() == 7);
  CHECK(Spin::parse("2").twice() == 4);
  CHECK(Spin(7).dimension() == 8);
  CHECK(Spin(5).to_string() == "5/2");
  CHECK_THROWS(Spin::parse("1.3"));
  CHECK_THROWS(Spin::parse("abc"));
}

TEST_CASE("clebsch-gordan reference values") {
  // Coupling with a scalar.
  for (int tj = 0; tj <= 6; ++tj)
    for (int tm = -tj; tm <= tj; tm += 2) {
      const auto c = clebsch_gordan(Spin(tj), Projection(tm), Spin(0), Projection(0),
                                    Spin(tj), Projection(tm));
      CHECK(c.sign == 1);
      CHECK(c.magnitude == 1);
    }
  // C^{1/2 1/2}_{1/2 1/2; 1 0} = +sqrt(1/3), by hand from the Racah sum.
  const auto c = clebsch_gordan(Spin(1), Projection(1), Spin(2), Projection(0),
                                Spin(1), Projection(1));
  CHECK(c.sign == 1);
  CHECK(c.magnitude == ExactRational(1, 3));
  // Stretched state.
  const auto s = clebsch_gordan(Spin(1), Projection(1), Spin(1), Projection(1),
                                Spin(2), Projection(2));
  CHECK(s.sign == 1);
  CHECK(s.magnitude == 1);
  // Singlet: C^{00}_{1/2 1/2; 1/2 -1/2} = +1/sqrt2, C^{00}_{1/2 -1/2; 1/2 1/2} = -1/sqrt2
  const auto up = clebsch_gordan(Spin(1), Projection(1), Spin(1), Projection(-1),
                                 Spin(0), Projection(0));
  const auto down = clebsch_gordan(Spin(1), Projection(-1), Spin(1), Projection(1),
                                   Spin(0), Projection(0));
  CHECK(up.sign == 1);
  CHECK(down.sign == -1);
  CHECK(up.magnitude == ExactRational(1, 2));
}

TEST_CASE("clebsch-gordan selection rules give zero") {
  CHECK(clebsch_gordan(Spin(2), Projection(2), Spin(2), Projection(0), Spin(2),
                       Projection(0))
            .is_zero());
  CHECK(clebsch_gordan(Spin(2), Projection(0), Spin(2), Projection(0), Spin(8),
                       Projection(0))
            .is_zero());
  CHECK(clebsch_gordan(Spin(2), Projection(3), Spin(2), Projection(0), Spin(2),
                       Projection(3))
            .is_zero());
  // <1 0; 1 0 | 1 0> vanishes by parity.
  CHECK(clebsch_gordan(Spin(2), Projection(0), Spin(2), Projection(0), Spin(2),
                       Projection(0))
            .is_zero());
}

TEST_CASE("clebsch-gordan orthogonality for j1, j2 <= 4") {
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; b <= 8; ++b)
      for (int c = std::abs(a - b); c <= a + b; c += 2)
        for (int cp = std::abs(a - b); cp <= a + b; cp += 2)
          for (int M = -std::min(c, cp); M <= std::min(c, cp); M += 2) {
            ExactRational exact_sum = 0;
            double float_sum = 0.0;
            for (int m1 = -a; m1 <= a; m1 += 2) {
              const int m2 = M - m1;
              if (std::abs(m2) > b)
                continue;
              const auto x = clebsch_gordan(Spin(a), Projection(m1), Spin(b),
                                            Projection(m2), Spin(c), Projection(M));
              const auto y = clebsch_gordan(Spin(a), Projection(m1), Spin(b),
                                            Projection(m2), Spin(cp), Projection(M));
              if (c == cp)
                exact_sum += x.magnitude;
              else
                float_sum += x.to_double() * y.to_double();
            }
            if (c == cp)
              CHECK(exact_sum == 1);
            else
              CHECK(std::abs(float_sum) < 1e-13);
          }
}

TEST_CASE("legendre_p reference values and recurrence vs explicit polynomial") {
  CHECK(legendre_p(0, 0.3) == 1.0);
  CHECK(legendre_p(1, -0.7) == -0.7);
  CHECK(legendre_p(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK_THROWS_AS(legendre_p(3, 1.01), std::domain_error);
  CHECK_NOTHROW(legendre_p(3, 1.0 + 1e-13));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = u(rng);
    for (int l = 0; l <= 12; ++l)
      CHECK(std::abs(legendre_p(l, x) - legendre_explicit(l, x)) < 1e-13);
  }
}

TEST_CASE("spherical harmonic closed forms") {
  for (double theta : {0.0, 0.4, 1.7, kPi}) {
    for (double phi : {0.0, 2.2, 5.0}) {
      CHECK(std::abs(spherical_harmonic(0, 0, theta, phi) - 1.0 / std::sqrt(4 * kPi)) < 1e-15);
      CHECK(std::abs(spherical_harmonic(1, 0, theta, phi) -
                     std::sqrt(3.0 / (4 * kPi)) * std::cos(theta)) < 1e-15);
      // Condon-Shortley: Y_11 = -sqrt(3/8pi) sin e^{i phi}
      const complex y11 = -std::sqrt(3.0 / (8 * kPi)) * std::sin(theta) * std::polar(1.0, phi);
      CHECK(std::abs(spherical_harmonic(1, 1, theta, phi) - y11) < 1e-15);
      CHECK(std::abs(spherical_harmonic(1, -1, theta, phi) + std::conj(y11)) < 1e-15);
    }
  }
}

TEST_CASE("spherical harmonics are orthonormal on the quadrature grid") {
  const int n_theta = 16, n_phi = 32;
  const auto rule = gauss_legendre(n_theta);
  for (int K = 0; K <= 10; ++K)
    for (int q = -K; q <= K; ++q)
      for (int Kp = K; Kp <= std::min(10, K + 2); ++Kp) {
        complex s = 0.0;
        for (int i = 0; i < n_theta; ++i)
          for (int k = 0; k < n_phi; ++k) {
            const double theta = std::acos(rule->nodes[static_cast<std::size_t>(i)]);
            const double phi = 2 * kPi * k / n_phi;
            s += rule->weights[static_cast<std::size_t>(i)] * (2 * kPi / n_phi) *
                 std::conj(spherical_harmonic(K, q, theta, phi)) *
                 spherical_harmonic(Kp, q, theta, phi);
          }
        CHECK(std::abs(s - (K == Kp ? 1.0 : 0.0)) < 1e-12);
      }
}

TEST_CASE("spherical harmonic addition theorem") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0.0, kPi), up(0.0, 2 * kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const double t1 = ut(rng), p1 = up(rng), t2 = ut(rng), p2 = up(rng);
    const double cos_gamma =
        std::cos(t1) * std::cos(t2) + std::sin(t1) * std::sin(t2) * std::cos(p1 - p2);
    for (int K = 0; K <= 12; ++K) {
      complex s = 0.0;
      for (int q = -K; q <= K; ++q)
        s += spherical_harmonic(K, q, t1, p1) * std::conj(spherical_harmonic(K, q, t2, p2));
      const double expected = (2.0 * K + 1.0) / (4 * kPi) * legendre_p(K, cos_gamma);
      CHECK(std::abs(s - expected) < 1e-10);
    }
  }
}

TEST_CASE("spherical harmonics stay finite at high degree") {
  for (int K = 25; K <= 30; ++K) {
    const complex y = spherical_harmonic(K, K, 1.3, 0.2);
    CHECK(std::isfinite(y.real()));
    CHECK(std::abs(y) < 10.0);
  }
}

TEST_CASE("wigner small-d elements") {
  // Identity rotation.
  for (int tj = 1; tj <= 7; ++tj)
    for (int a = -tj; a <= tj; a += 2)
      for (int b = -tj; b <= tj; b += 2)
        CHECK(std::abs(wigner_small_d(Spin(tj), Projection(a), Projection(b), 0.0) -
                       (a == b ? 1.0 : 0.0)) < 1e-15);
  // 2x2 closed form.
  for (double beta : {0.3, 1.2, 2.9}) {
    CHECK(wigner_small_d(Spin(1), Projection(1), Projection(1), beta) ==
          doctest::Approx(std::cos(beta / 2)).epsilon(1e-14));
    CHECK(wigner_small_d(Spin(1), Projection(1), Projection(-1), beta) ==
          doctest::Approx(-std::sin(beta / 2)).epsilon(1e-14));
    CHECK(wigner_small_d(Spin(1), Projection(-1), Projection(1), beta) ==
          doctest::Approx(std::sin(beta / 2)).epsilon(1e-14));
  }
  // Column normalization.
  for (int tj = 1; tj <= 8; ++tj)
    for (int b = -tj; b <= tj; b += 2) {
      double s = 0.0;
      for (int a = -tj; a <= tj; a += 2)
        s += std::pow(wigner_small_d(Spin(tj), Projection(a), Projection(b), 1.1), 2);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("wigner small-d composes along y") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int tj = 1; tj <= 7; ++tj) {
    const Spin j(tj);
    const int d = j.dimension();
    for (int trial = 0; trial < 5; ++trial) {
      const double b1 = u(rng), b2 = u(rng);
      const auto m1 = wigner_small_d_matrix(j, b1);
      const auto m2 = wigner_small_d_matrix(j, b2);
      const auto m12 = wigner_small_d_matrix(j, b1 + b2);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          double s = 0.0;
          for (int k = 0; k < d; ++k)
            s += m1[static_cast<std::size_t>(r * d + k)] * m2[static_cast<std::size_t>(k * d + c)];
          CHECK(std::abs(s - m12[static_cast<std::size_t>(r * d + c)]) < 1e-12);
        }
    }
  }
}
