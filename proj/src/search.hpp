#pragma once

// Multi-start Nelder-Mead searches over constellations: maximal and minimal
// Wigner negativity, the tetrahedron-snapped family, Thomson equilibria and
// sweeps of the low-dimensional families.

#include <cstdint>
#include <optional>
#include <vector>

#include "stellar.hpp"

namespace spinwig {

/// Gauge-fixed chart: star 1 on the north pole, star 2 at (p[0], 0), then
/// (theta, phi) pairs for stars 3..2j. Length 2*(2j) - 3 for 2j >= 2.
int gauge_dimension(Spin j);
Constellation gauge_constellation(Spin j, std::span<const double> params);
/// Rotates c so its first star sits on the north pole and its second on
/// phi = 0, then reads off the chart parameters.
std::vector<double> gauge_params(const Constellation &c);

struct SearchOptions {
  int n_starts = 2000;
  std::uint64_t seed = 1;
  double rel_tol = 1e-6;       ///< tolerance of the final negativity values
  int threads = 0;             ///< 0: automatic
  int explore_order = 32;      ///< theta order of the exploration objective
  int polish_order = 128;      ///< theta order of the polish objective
  int polish_clusters = 4;     ///< exploration clusters that get polished
  double explore_cluster_tol = 1e-2;
  double cluster_tol = 1e-4;   ///< Gram spectrum tolerance after polish
  double box_fraction = 0.05;  ///< polish box: +-5% of each parameter ...
  double box_floor = 0.02;     ///< ... but never narrower than this (radians)
};

struct ClusterSummary {
  Constellation constellation;
  double value = 0.0;
  GramSpectrum spectrum;
  int members = 0; ///< exploration starts that ended in this cluster
};

struct SearchOutcome {
  Constellation constellation;
  double negativity = 0.0;
  GramSpectrum spectrum;
  int n_starts = 0;
  int n_converged_to_best = 0;
  std::uint64_t seed = 0;
  std::vector<ClusterSummary> clusters; ///< best first
};

SearchOutcome maximize_negativity(Spin j, const SearchOptions &opts = {});
SearchOutcome minimize_negativity(Spin j, const SearchOptions &opts = {});
/// Four stars held as a rigid regular tetrahedron (orientation free), the
/// other 2j - 4 stars free. Requires 2j >= 4.
SearchOutcome maximize_with_tetra_snap(Spin j, const SearchOptions &opts = {});

/// Polish stage only, started from a known constellation (e.g. tabulated
/// coordinates) inside the +-box of its gauge parameters.
SearchOutcome polish_negativity(const Constellation &start, const SearchOptions &opts = {});

struct ThomsonOutcome {
  Constellation constellation;
  double energy = 0.0;
};
ThomsonOutcome minimize_coulomb(int n_stars, const SearchOptions &opts = {});

struct SweepPoint {
  double parameter = 0.0;
  double negativity = 0.0;
};

/// Apex at the pole, base stars at azimuths 0, pi/2, pi, 3pi/2.
std::vector<SweepPoint> sweep_pyramid(const std::vector<double> &theta_base,
                                      double rel_tol = 1e-6);
/// Interior local maximum of the pyramid family in [lo, hi].
SweepPoint pyramid_local_max(double lo, double hi, double rel_tol = 1e-7);

struct TriangleLandscape {
  std::vector<double> theta1, theta2;
  std::vector<double> values; ///< row-major, theta1 index first
  double at(std::size_t i, std::size_t k) const { return values[i * theta2.size() + k]; }
};
/// Negativity of pole + two triangles over a grid, at a fixed theta order.
TriangleLandscape sweep_two_triangles(const std::vector<double> &theta1,
                                      const std::vector<double> &theta2, int order = 64,
                                      int threads = 0);

struct TrianglePoint {
  double theta1 = 0.0, theta2 = 0.0;
  double value = 0.0;
  double axial_separation = 0.0; ///< |cos theta1 - cos theta2|
};
/// Landscape maximum refined by Nelder-Mead; value is the converged negativity.
TrianglePoint two_triangles_max(const TriangleLandscape &landscape, double rel_tol = 1e-6);
/// Minimum of the anticoherence measure A_M over the same family.
TrianglePoint two_triangles_anticoherence_min(int M);

/// State of the spin-1 family: one star at the pole, one at polar angle eta.
SpinState spin1_family_state(double eta);
std::vector<SweepPoint> sweep_spin1_family(const std::vector<double> &eta,
                                           double rel_tol = 1e-6);

/// Spin-3/2 family with stars at the pole, (t1, 0) and (t2, phi).
SpinState spin32_family_state(double theta1, double theta2, double phi);
struct Spin32Point {
  double theta1 = 0.0, theta2 = 0.0, phi = 0.0, negativity = 0.0;
};
/// Points with theta2 < theta1 are skipped (they repeat swapped ones).
std::vector<Spin32Point> sweep_spin32_family(const std::vector<double> &theta1,
                                             const std::vector<double> &theta2,
                                             const std::vector<double> &phi, int order = 64,
                                             int threads = 0);

} // namespace spinwig
