#pragma once

// Majorana stellar representation: Dicke amplitudes <-> constellations of
// 2j points on the unit sphere, rigid rotations, the A A^T rotation
// fingerprint, rotational equivalence and Coulomb energy.

#include <array>
#include <span>
#include <vector>

#include "angular.hpp"

namespace spinwig {

using Vec3 = std::array<double, 3>;

struct Star {
  double theta = 0.0; ///< polar angle in [0, pi]
  double phi = 0.0;   ///< azimuth in [0, 2pi)

  Vec3 cartesian() const;
  static Star from_cartesian(const Vec3 &v);
  /// Wraps into the canonical chart: theta reflected into [0, pi] (with
  /// phi += pi), phi mod 2pi, phi = 0 on the poles.
  static Star canonical(double theta, double phi);
};

/// Unordered multiset of stars; its size is 2j.
class Constellation {
public:
  Constellation() = default;
  explicit Constellation(std::vector<Star> stars);

  Spin spin() const { return Spin(static_cast<int>(stars_.size())); }
  std::size_t size() const { return stars_.size(); }
  const std::vector<Star> &stars() const { return stars_; }
  std::vector<Vec3> cartesian() const;

private:
  std::vector<Star> stars_;
};

/// Pure spin-j state in the Dicke basis, amplitudes ordered m = -j..j.
/// Always normalized; constructing from a zero vector throws ZeroState.
class SpinState {
public:
  SpinState(Spin j, std::vector<complex> amplitudes);

  static SpinState dicke(Spin j, Projection m);
  static SpinState coherent(Spin j, double theta, double phi);

  Spin spin() const { return j_; }
  int dimension() const { return j_.dimension(); }
  std::span<const complex> amplitudes() const { return amps_; }
  complex amplitude(Projection m) const {
    return amps_[static_cast<std::size_t>(m.index_in(j_))];
  }

  complex inner(const SpinState &other) const; ///< <this|other>
  double fidelity(const SpinState &other) const { return std::norm(inner(other)); }

private:
  Spin j_;
  std::vector<complex> amps_;
};

struct EulerAngles {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

/// Active rotation matrix Rz(alpha) Ry(beta) Rz(gamma), row-major.
std::array<double, 9> rotation_matrix(const EulerAngles &e);
Vec3 rotate_vector(const std::array<double, 9> &r, const Vec3 &v);

Constellation state_to_constellation(const SpinState &psi);
SpinState constellation_to_state(const Constellation &c);

/// Applies D^j(alpha, beta, gamma). The stars of the result are the stars of
/// psi rotated by rotation_matrix(e).
SpinState rotate_state(const SpinState &psi, const EulerAngles &e);
Constellation rotate_constellation(const Constellation &c, const EulerAngles &e);
Constellation rotate_constellation(const Constellation &c,
                                   const std::array<double, 9> &r);

struct GramSpectrum {
  std::array<double, 3> eigenvalues{}; ///< descending
};

GramSpectrum gram_spectrum(const Constellation &c);

/// Smallest achievable max per-star distance |R v_i - w_sigma(i)| over
/// rotations R and star assignments sigma.
double alignment_residual(const Constellation &c1, const Constellation &c2);

/// Spectrum filter first; if spectra agree within tol, explicit rotational
/// alignment must reach residual < tol.
bool constellations_equivalent(const Constellation &c1, const Constellation &c2,
                               double tol);

/// Sum over pairs of 1/|v_i - v_k|; +infinity if two stars coincide.
double coulomb_energy(const Constellation &c);

/// Multiset distance: max over stars after optimal matching (no rotation).
double matched_distance(const Constellation &c1, const Constellation &c2);

} // namespace spinwig
