#pragma once

// SU(2) Wigner kernel, Wigner and Husimi functions on the sphere, sphere
// quadrature and the Wigner negativity functional.
//
// Conventions: dmu = (2j+1)/(4pi) sin(theta) dtheta dphi, so the total
// measure is 2j+1 and every normalized state has integral W dmu = 1.

#include <algorithm>
#include <memory>
#include <span>
#include <vector>

#include "angular.hpp"
#include "stellar.hpp"

namespace spinwig {

/// Eigenvalues Delta_{j,m} of the diagonal Wigner kernel, ordered m = -j..j.
struct KernelSpectrum {
  Spin j;
  std::vector<double> delta;
};

KernelSpectrum kernel_spectrum(Spin j);

/// rho_{Kq} = tr[rho T^dagger_{Kq}], K = 0..2j, q = -K..K.
class MultipoleCoeffs {
public:
  MultipoleCoeffs(Spin j, std::vector<complex> values);

  Spin spin() const { return j_; }
  complex operator()(int K, int q) const {
    return values_[static_cast<std::size_t>(K * K + K + q)];
  }
  std::span<const complex> values() const { return values_; }

private:
  Spin j_;
  std::vector<complex> values_;
};

MultipoleCoeffs multipole_coeffs(const SpinState &psi);

/// Gauss-Legendre nodes/weights on [-1, 1]; memoized per order.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
std::shared_ptr<const GaussLegendreRule> gauss_legendre(int n);

/// Product rule: Gauss-Legendre in cos(theta) x uniform trapezoid in phi.
/// weight(i, k) already contains the (2j+1)/(4pi) measure factor.
class SphereGrid {
public:
  SphereGrid(Spin j, int n_theta, int n_phi);

  Spin spin() const { return j_; }
  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  double cos_theta(int i) const { return rule_->nodes[static_cast<std::size_t>(i)]; }
  double theta(int i) const;
  double phi(int k) const;
  double weight(int i) const; ///< weight of each node on ring i
  double total_weight() const;

private:
  Spin j_;
  int n_theta_;
  int n_phi_;
  std::shared_ptr<const GaussLegendreRule> rule_;
};

/// W on a grid, ring-major (value(i, k) = values[i * n_phi + k]).
struct WignerField {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> values;
  double max_imag_residue = 0.0;

  double at(int i, int k) const { return values[static_cast<std::size_t>(i * n_phi + k)]; }
};

/// Multipole expansion of W prepared for fast evaluation:
/// on the ring cos(theta) = x, W(phi) = B_0 + 2 Re sum_{q>0} B_q e^{i q phi}.
class WignerExpansion {
public:
  explicit WignerExpansion(const SpinState &psi);
  explicit WignerExpansion(const MultipoleCoeffs &rho);

  Spin spin() const { return j_; }
  double value(double theta, double phi) const;
  /// Ring coefficients B_q(x), q = 0..2j.
  void ring_coefficients(double cos_theta, std::vector<complex> &out) const;
  struct RingProfile {
    double abs_integral = 0.0; ///< integral of |W| over phi in [0, 2pi)
    int roots = 0;             ///< sign changes found on the ring
    int sign = 0;              ///< sign of W when roots == 0
    /// smallest |local extremum in phi| relative to max |W| on the ring
    double extremum_gap = 1.0;
    double peak = 0.0; ///< max |W| on the ring (an upper bound if roots == 0)
  };
  /// Exact up to root detection at the given azimuthal sampling.
  RingProfile ring_profile(double cos_theta, int n_samples) const;
  double ring_abs_integral(double cos_theta, int n_samples) const {
    return ring_profile(cos_theta, n_samples).abs_integral;
  }
  /// cos(theta) values where the ring profile changes topology, i.e. where
  /// integral |W| dphi stops being smooth in cos(theta). Sorted, interior only.
  std::vector<double> ring_breakpoints(int n_scan) const;
  /// Azimuthal sampling used for root detection.
  int ring_samples() const { return std::max(48, 6 * lmax_ + 8); }

private:
  Spin j_;
  int lmax_;
  // rho_{Kq} * sqrt(4pi/(2j+1)) for q >= 0, index K*(K+1)/2 + q.
  std::vector<complex> scaled_;
  // Normalized associated Legendre recurrence factors, same indexing.
  std::vector<double> rec_a_, rec_b_;
};

/// Multipole route, every (K, q) term summed; imaginary residue recorded.
WignerField wigner_eval(const SpinState &psi, const SphereGrid &grid);

double wigner_at(const SpinState &psi, double theta, double phi);

/// Diagonal-kernel route: sum_m Delta_m |<j,m;n|psi>|^2.
double wigner_at_diagonal(const SpinState &psi, double theta, double phi);

/// Q(theta, phi) = |<theta,phi|psi>|^2 where |theta,phi> is the coherent
/// state whose stars all sit at (theta, phi).
double husimi_eval(const SpinState &psi, double theta, double phi);

/// integral of W1 W2 dmu; grid must resolve degree 4j in both directions.
double overlap_via_traciality(const SpinState &psi1, const SpinState &psi2,
                              const SphereGrid &grid);

/// integral of f dmu on a grid for a sampled field.
double integrate(const WignerField &field, const SphereGrid &grid);

struct NegativityOptions {
  double rel_tol = 1e-6;
  int initial_n_theta = 0; ///< 0: max(32, 4j+4)
  int max_refinements = 8;
  int passes_required = 2;
};

struct NegativityReport {
  double value = 0.0;
  int panels = 1;                 ///< smooth pieces the theta range was cut into
  std::vector<int> n_theta;       ///< total theta nodes, one entry per level
  std::vector<double> estimates;  ///< negativity at that level
};

/// delta = (integral |W| dmu - 1)/2. The phi integral on each ring is done
/// exactly between roots; the theta integral is Gauss-Legendre on the pieces
/// between ring breakpoints, doubling the order until two consecutive
/// relative changes fall below rel_tol. Throws Error(NotConverged) otherwise.
NegativityReport negativity_report(const SpinState &psi,
                                   const NegativityOptions &opts = {});
double negativity(const SpinState &psi, double rel_tol = 1e-6);

/// Single-level estimate: exact phi integral on n_theta Gauss-Legendre rings,
/// no breakpoint search. Cheap; used for exploration and ensemble sampling.
double negativity_fixed(const WignerExpansion &expansion, int n_theta);
double negativity_fixed(const SpinState &psi, int n_theta);

/// Single level of the breakpoint-panel rule with `order` nodes per panel.
/// Continuous in the state as long as the panel count does not change.
double negativity_panels(const SpinState &psi, int order);

/// Plain product-grid estimate: sum of weights * |W| at grid nodes.
double negativity_on_grid(const SpinState &psi, const SphereGrid &grid);

struct CoherentScanRow {
  Spin j;
  double negativity = 0.0;
  double min_wigner = 0.0;   ///< minimum of W_{|j,j>} over theta
  double theta_at_min = 0.0;
};

/// Negativity of |j,j> and the minimum of its Wigner function for every
/// 2j = 1..2*j_max.
std::vector<CoherentScanRow> coherent_negativity_scan(Spin j_max,
                                                      double rel_tol = 1e-6);

} // namespace spinwig
