#include "angular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinwig {

namespace {

constexpr int kMaxFactorial = 256;

bool triangle_ok(int a, int b, int c) {
  // Doubled arguments: |a-b| <= c <= a+b and a+b+c even.
  return c <= a + b && c >= std::abs(a - b) && (a + b + c) % 2 == 0;
}

} // namespace

Spin Spin::from_double(double j) {
  const double twice = std::round(2.0 * j);
  if (twice < 0 || std::abs(twice - 2.0 * j) > 1e-9)
    throw std::invalid_argument("spin must be a non-negative multiple of 1/2");
  return Spin(static_cast<int>(twice));
}

Spin Spin::parse(const std::string &text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos)
      return from_double(std::stod(text));
    const int num = std::stoi(text.substr(0, slash));
    const int den = std::stoi(text.substr(slash + 1));
    if (den == 1)
      return Spin(2 * num);
    if (den != 2)
      throw std::invalid_argument("spin denominator must be 1 or 2");
    if (num < 0)
      throw std::invalid_argument("spin must be non-negative");
    return Spin(num);
  } catch (const std::logic_error &) {
    throw std::invalid_argument("cannot parse spin '" + text + "'");
  }
}

std::string Spin::to_string() const {
  if (twice_j_ % 2 == 0)
    return std::to_string(twice_j_ / 2);
  return std::to_string(twice_j_) + "/2";
}

double SignedSqrtRational::to_double() const {
  if (sign == 0)
    return 0.0;
  const long double mag = static_cast<long double>(magnitude);
  return static_cast<double>(sign * std::sqrt(mag));
}

const BigInt &factorial(int n) {
  static const std::vector<BigInt> table = [] {
    std::vector<BigInt> f(kMaxFactorial + 1);
    f[0] = 1;
    for (int i = 1; i <= kMaxFactorial; ++i)
      f[i] = f[i - 1] * i;
    return f;
  }();
  if (n < 0 || n > kMaxFactorial)
    throw std::out_of_range("factorial argument out of range");
  return table[static_cast<std::size_t>(n)];
}

double binomial(int n, int k) {
  if (k < 0 || k > n)
    return 0.0;
  const BigInt c = factorial(n) / (factorial(k) * factorial(n - k));
  return static_cast<double>(c);
}

SignedSqrtRational clebsch_gordan(Spin j1, Projection m1, Spin j2,
                                  Projection m2, Spin J, Projection M) {
  SignedSqrtRational zero;
  if (!m1.valid_for(j1) || !m2.valid_for(j2) || !M.valid_for(J))
    return zero;
  if (m1.twice() + m2.twice() != M.twice())
    return zero;
  const int a = j1.twice(), b = j2.twice(), c = J.twice();
  if (!triangle_ok(a, b, c))
    return zero;

  // All combinations below are integers once the triangle parity holds.
  const int J_plus_j1_minus_j2 = (c + a - b) / 2;
  const int J_minus_j1_plus_j2 = (c - a + b) / 2;
  const int j1_plus_j2_minus_J = (a + b - c) / 2;
  const int j1_plus_j2_plus_J = (a + b + c) / 2;
  const int J_plus_M = (c + M.twice()) / 2;
  const int J_minus_M = (c - M.twice()) / 2;
  const int j1_minus_m1 = (a - m1.twice()) / 2;
  const int j1_plus_m1 = (a + m1.twice()) / 2;
  const int j2_minus_m2 = (b - m2.twice()) / 2;
  const int j2_plus_m2 = (b + m2.twice()) / 2;
  const int J_minus_j2_plus_m1 = (c - b + m1.twice()) / 2;
  const int J_minus_j1_minus_m2 = (c - a - m2.twice()) / 2;

  ExactRational prefactor(BigInt(c + 1) * factorial(J_plus_j1_minus_j2) *
                              factorial(J_minus_j1_plus_j2) *
                              factorial(j1_plus_j2_minus_J),
                          factorial(j1_plus_j2_plus_J + 1));
  prefactor *= ExactRational(factorial(J_plus_M) * factorial(J_minus_M) *
                             factorial(j1_minus_m1) * factorial(j1_plus_m1) *
                             factorial(j2_minus_m2) * factorial(j2_plus_m2));

  const int k_min = std::max({0, -J_minus_j2_plus_m1, -J_minus_j1_minus_m2});
  const int k_max = std::min({j1_plus_j2_minus_J, j1_minus_m1, j2_plus_m2});
  ExactRational sum = 0;
  for (int k = k_min; k <= k_max; ++k) {
    const BigInt denom = factorial(k) * factorial(j1_plus_j2_minus_J - k) *
                         factorial(j1_minus_m1 - k) *
                         factorial(j2_plus_m2 - k) *
                         factorial(J_minus_j2_plus_m1 + k) *
                         factorial(J_minus_j1_minus_m2 + k);
    const ExactRational term(BigInt(1), denom);
    if (k % 2 == 0)
      sum += term;
    else
      sum -= term;
  }
  if (sum == 0)
    return zero;

  SignedSqrtRational out;
  out.sign = sum > 0 ? 1 : -1;
  out.magnitude = sum * sum * prefactor;
  return out;
}

double clebsch_gordan_value(Spin j1, Projection m1, Spin j2, Projection m2,
                            Spin J, Projection M) {
  return clebsch_gordan(j1, m1, j2, m2, J, M).to_double();
}

double legendre_p(int l, double x) {
  if (l < 0)
    throw std::invalid_argument("legendre_p: negative degree");
  if (std::abs(x) > 1.0 + 1e-12)
    throw std::domain_error("legendre_p: |x| > 1");
  if (l == 0)
    return 1.0;
  double p_prev = 1.0, p = x;
  for (int n = 1; n < l; ++n) {
    const double next = ((2.0 * n + 1.0) * x * p - n * p_prev) / (n + 1.0);
    p_prev = p;
    p = next;
  }
  return p;
}

NormalizedLegendreTable::NormalizedLegendreTable(int lmax, double x)
    : lmax_(lmax), values_(static_cast<std::size_t>((lmax + 1) * (lmax + 2) / 2)) {
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  auto at = [this](int l, int m) -> double & {
    return values_[static_cast<std::size_t>(l * (l + 1) / 2 + m)];
  };
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0)
      pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    at(m, m) = pmm;
    if (m + 1 <= lmax)
      at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * pmm;
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                 (4.0 * (l - 1) * (l - 1) - 1.0));
      at(l, m) = a * (x * at(l - 1, m) - b * at(l - 2, m));
    }
  }
}

complex spherical_harmonic(int K, int q, double theta, double phi) {
  if (K < 0 || std::abs(q) > K)
    throw std::invalid_argument("spherical_harmonic: need |q| <= K");
  const NormalizedLegendreTable table(K, std::cos(theta));
  const int aq = std::abs(q);
  const complex y = table(K, aq) * std::polar(1.0, aq * phi);
  if (q >= 0)
    return y;
  // Y_{K,-q} = (-1)^q conj(Y_{Kq})
  return (aq % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

double wigner_small_d(Spin j, Projection mp, Projection m, double beta) {
  if (!mp.valid_for(j) || !m.valid_for(j))
    throw std::invalid_argument("wigner_small_d: projection not valid for spin");
  const int tj = j.twice();
  const int j_plus_mp = (tj + mp.twice()) / 2;
  const int j_minus_mp = (tj - mp.twice()) / 2;
  const int j_plus_m = (tj + m.twice()) / 2;
  const int j_minus_m = (tj - m.twice()) / 2;
  const int mp_minus_m = (mp.twice() - m.twice()) / 2;

  const BigInt numerator = factorial(j_plus_mp) * factorial(j_minus_mp) *
                           factorial(j_plus_m) * factorial(j_minus_m);
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);

  const int s_min = std::max(0, -mp_minus_m);
  const int s_max = std::min(j_plus_m, j_minus_mp);
  double sum = 0.0;
  for (int k = s_min; k <= s_max; ++k) {
    const BigInt denom = factorial(j_plus_m - k) * factorial(k) *
                         factorial(mp_minus_m + k) * factorial(j_minus_mp - k);
    const ExactRational ratio(numerator, denom * denom);
    const double coeff = static_cast<double>(std::sqrt(static_cast<long double>(ratio)));
    const int cos_power = tj - mp_minus_m - 2 * k;
    const int sin_power = mp_minus_m + 2 * k;
    const double term = coeff * std::pow(c, cos_power) * std::pow(s, sin_power);
    sum += ((mp_minus_m + k) % 2 == 0) ? term : -term;
  }
  return sum;
}

std::vector<double> wigner_small_d_matrix(Spin j, double beta) {
  const int d = j.dimension();
  std::vector<double> out(static_cast<std::size_t>(d * d));
  for (int r = 0; r < d; ++r)
    for (int col = 0; col < d; ++col)
      out[static_cast<std::size_t>(r * d + col)] = wigner_small_d(
          j, Projection::from_index(j, r), Projection::from_index(j, col), beta);
  return out;
}

} // namespace spinwig
