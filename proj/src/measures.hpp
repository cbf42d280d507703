#pragma once

// Comparison measures of nonclassicality (anticoherence, geometric
// entanglement, one-qubit linear entropy) and a catalog of named states.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stellar.hpp"

namespace spinwig {

/// A_M = sum_{K=1}^{M} sum_q |rho_Kq|^2, 1 <= M <= 2j.
double anticoherence_measure(const SpinState &psi, int M);
/// A_1 .. A_{2j}.
std::vector<double> anticoherence_profile(const SpinState &psi);

/// <J> by ladder-operator expectations.
Vec3 spin_expectation(const SpinState &psi);

struct HusimiMaximum {
  double q = 0.0;
  double theta = 0.0, phi = 0.0;
};
/// 64 x 128 grid scan, then local refinement from the best 8 cells.
HusimiMaximum husimi_maximum(const SpinState &psi);
/// 1 - max Q.
double geometric_entanglement(const SpinState &psi);

/// (1 - |<J>/j|^2) / 2, the linear entropy of one qubit of the symmetric
/// 2j-qubit state.
double linear_entropy_one_qubit(const SpinState &psi);

struct MeasureReport {
  Spin spin;
  double negativity = 0.0;
  std::vector<double> anticoherence; ///< M = 1..2j
  double geometric_entanglement = 0.0;
  double linear_entropy = 0.0;
  double coulomb_energy = 0.0;
};

MeasureReport measure_report(const SpinState &psi, double rel_tol = 1e-6);

struct NamedState {
  std::string name;
  Spin spin;
  std::string description;
  std::variant<std::vector<complex>, Constellation> definition;

  SpinState state() const;
};

/// Fixed entries plus the spin-parameterized families instantiated for
/// 2j = 1..12.
std::vector<NamedState> catalog();

/// Resolves a state name. Fixed names: tetrahedron, octahedron, cube,
/// icosahedron, max-<j>, max-dicke-<j>. Spin-parameterized (need spin):
/// coherent, ghz, w, dicke:<m>. Geometric families: pyramid[:<theta>],
/// two-triangles:<theta1>,<theta2>. Throws Error(UnknownName).
NamedState named_state(const std::string &name, std::optional<Spin> spin = std::nullopt);

Constellation square_pyramid(double theta_base);
/// Pole plus two equilateral triangles with matching orientation.
Constellation two_triangles(double theta1, double theta2);
Constellation regular_tetrahedron();

} // namespace spinwig
