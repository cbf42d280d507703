#pragma once

// Angular-momentum arithmetic shared by every other module: exact
// Clebsch-Gordan coefficients, Legendre polynomials, spherical harmonics
// and Wigner small-d rotation elements. Half-integers are stored doubled.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace spinwig {

using complex = std::complex<double>;
using ExactRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kPi = 3.14159265358979323846;

/// Spin quantum number j, stored as 2j so half-integers stay exact.
class Spin {
public:
  constexpr Spin() = default;
  constexpr explicit Spin(int twice_j) : twice_j_(twice_j) {}

  static Spin from_double(double j);
  /// Parses "2", "5/2", "2.5".
  static Spin parse(const std::string &text);

  constexpr int twice() const { return twice_j_; }
  constexpr int dimension() const { return twice_j_ + 1; }
  constexpr double value() const { return 0.5 * twice_j_; }
  std::string to_string() const;

  friend constexpr bool operator==(Spin, Spin) = default;
  friend constexpr auto operator<=>(Spin, Spin) = default;

private:
  int twice_j_ = 0;
};

/// Magnetic projection m, stored as 2m.
class Projection {
public:
  constexpr Projection() = default;
  constexpr explicit Projection(int twice_m) : twice_m_(twice_m) {}

  constexpr int twice() const { return twice_m_; }
  constexpr double value() const { return 0.5 * twice_m_; }
  constexpr bool valid_for(Spin j) const {
    return twice_m_ <= j.twice() && -twice_m_ <= j.twice() &&
           ((j.twice() - twice_m_) % 2 == 0);
  }
  /// Array index of m in the ordering m = -j..j.
  constexpr int index_in(Spin j) const { return (j.twice() + twice_m_) / 2; }
  static constexpr Projection from_index(Spin j, int index) {
    return Projection(2 * index - j.twice());
  }

  friend constexpr bool operator==(Projection, Projection) = default;

private:
  int twice_m_ = 0;
};

/// sign * sqrt(magnitude); the carrier of an exact Clebsch-Gordan value.
struct SignedSqrtRational {
  int sign = 0;
  ExactRational magnitude = 0;

  double to_double() const;
  bool is_zero() const { return sign == 0; }
};

/// n! as an exact integer. Values are memoized once, up to n = 256.
const BigInt &factorial(int n);

/// Binomial coefficient C(n, k) as double (exact for the sizes used here).
double binomial(int n, int k);

/// Condon-Shortley C^{J M}_{j1 m1; j2 m2} via Racah's single-sum formula in
/// exact rational arithmetic. Selection-rule violations give zero.
SignedSqrtRational clebsch_gordan(Spin j1, Projection m1, Spin j2,
                                  Projection m2, Spin J, Projection M);

double clebsch_gordan_value(Spin j1, Projection m1, Spin j2, Projection m2,
                            Spin J, Projection M);

/// P_l(x) by upward recurrence. Throws std::domain_error for |x| > 1 + 1e-12.
double legendre_p(int l, double x);

/// Orthonormal associated Legendre factors for Y_{lm}, m >= 0:
/// Y_{lm}(theta, phi) = table(l, m) * e^{i m phi}, including the
/// Condon-Shortley phase. Values are stored row-major, index l*(l+1)/2 + m.
class NormalizedLegendreTable {
public:
  NormalizedLegendreTable(int lmax, double cos_theta);

  int lmax() const { return lmax_; }
  double operator()(int l, int m) const { return values_[l * (l + 1) / 2 + m]; }

private:
  int lmax_;
  std::vector<double> values_;
};

/// Orthonormal Y_{Kq}(theta, phi) with Condon-Shortley phase.
complex spherical_harmonic(int K, int q, double theta, double phi);

/// d^j_{m'm}(beta) from the explicit factorial sum; factorial ratios are
/// formed exactly before conversion to floating point.
double wigner_small_d(Spin j, Projection mp, Projection m, double beta);

/// Full (2j+1)x(2j+1) small-d matrix, row index m', column index m, both
/// ordered -j..j. Stored row-major.
std::vector<double> wigner_small_d_matrix(Spin j, double beta);

} // namespace spinwig
