#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "stellar.hpp"

namespace spinwig::testing {

inline SpinState random_state(Spin j, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  std::vector<complex> a(static_cast<std::size_t>(j.dimension()));
  for (auto &x : a)
    x = complex(g(rng), g(rng));
  return SpinState(j, a);
}

inline Constellation random_constellation(int n, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 2 * kPi);
  std::vector<Star> s;
  for (int i = 0; i < n; ++i)
    s.push_back({std::acos(u(rng)), p(rng)});
  return Constellation(s);
}

inline EulerAngles random_rotation(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> a(-kPi, kPi);
  return {a(rng), a(rng), a(rng)};
}

// <J> from the ladder-operator matrix elements.
inline Vec3 spin_expectation(const SpinState &psi) {
  const Spin j = psi.spin();
  const double jj = j.value();
  complex jplus = 0.0;
  double jz = 0.0;
  for (int i = 0; i < j.dimension(); ++i) {
    const double m = Projection::from_index(j, i).value();
    jz += m * std::norm(psi.amplitudes()[static_cast<std::size_t>(i)]);
    if (i + 1 < j.dimension())
      jplus += std::sqrt(jj * (jj + 1) - m * (m + 1)) *
               std::conj(psi.amplitudes()[static_cast<std::size_t>(i + 1)]) *
               psi.amplitudes()[static_cast<std::size_t>(i)];
  }
  return {jplus.real(), jplus.imag(), jz};
}

inline Constellation tetrahedron() {
  const double t = std::acos(-1.0 / 3.0);
  return Constellation({{0, 0}, {t, 0}, {t, 2 * kPi / 3}, {t, 4 * kPi / 3}});
}

inline Constellation octahedron() {
  return Constellation({{0, 0},
                        {kPi, 0},
                        {kPi / 2, 0},
                        {kPi / 2, kPi / 2},
                        {kPi / 2, kPi},
                        {kPi / 2, 3 * kPi / 2}});
}

} // namespace spinwig::testing
