#include "polyroots.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace spinwig {

namespace {

// Returns (p(z), p'(z)).
std::pair<complex, complex> eval_with_derivative(std::span<const complex> c,
                                                 complex z) {
  complex p = 0.0, dp = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
  return {p, dp};
}

// Parlett-Reinsch style balancing by powers of two.
void balance(Eigen::MatrixXcd &a) {
  const Eigen::Index n = a.rows();
  constexpr double radix = 2.0;
  bool done = false;
  for (int sweep = 0; sweep < 100 && !done; ++sweep) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i)
          continue;
        c += std::abs(a(k, i));
        r += std::abs(a(i, k));
      }
      if (c == 0.0 || r == 0.0)
        continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

complex polish(std::span<const complex> coeffs, std::span<const complex> reversed,
               complex z) {
  const bool outside = std::abs(z) > 1.0;
  std::span<const complex> c = outside ? reversed : coeffs;
  complex x = outside ? 1.0 / z : z;
  double residual = std::abs(eval_with_derivative(c, x).first);
  for (int it = 0; it < 4 && residual > 0.0; ++it) {
    const auto [p, dp] = eval_with_derivative(c, x);
    if (dp == complex(0.0))
      break;
    const complex trial = x - p / dp;
    const double trial_residual = std::abs(eval_with_derivative(c, trial).first);
    if (!(trial_residual < residual))
      break;
    x = trial;
    residual = trial_residual;
  }
  return outside ? 1.0 / x : x;
}

} // namespace

complex polynomial_eval(std::span<const complex> coeffs, complex z) {
  return eval_with_derivative(coeffs, z).first;
}

std::vector<complex> polynomial_roots(std::span<const complex> coeffs) {
  if (coeffs.empty())
    throw std::invalid_argument("polynomial_roots: empty coefficient list");
  const std::size_t degree = coeffs.size() - 1;
  const complex lead = coeffs[degree];
  if (lead == complex(0.0))
    throw std::invalid_argument("polynomial_roots: zero leading coefficient");
  if (degree == 0)
    return {};
  if (degree == 1)
    return {-coeffs[0] / lead};

  const auto n = static_cast<Eigen::Index>(degree);
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    companion(0, k) = -coeffs[degree - 1 - static_cast<std::size_t>(k)] / lead;
  for (Eigen::Index k = 1; k < n; ++k)
    companion(k, k - 1) = 1.0;
  balance(companion);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("polynomial_roots: eigenvalue iteration failed");

  std::vector<complex> reversed(coeffs.rbegin(), coeffs.rend());
  std::vector<complex> roots;
  roots.reserve(degree);
  for (Eigen::Index k = 0; k < n; ++k)
    roots.push_back(polish(coeffs, reversed, solver.eigenvalues()(k)));
  return roots;
}

} // namespace spinwig
