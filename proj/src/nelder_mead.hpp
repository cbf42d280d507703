#pragma once

// Derivative-free minimization with the Nelder-Mead simplex.

#include <functional>
#include <span>
#include <vector>

namespace spinwig {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  double initial_step = 0.25;
  double f_tol = 1e-10; ///< spread of simplex values
  double x_tol = 1e-8;  ///< simplex diameter (max-norm)
  int max_evals = 20000;
  /// Dimension-dependent coefficients (Gao & Han); standard ones otherwise.
  bool adaptive = true;
  /// Fresh simplices built around a converged point; stops once a restart
  /// gains less than f_tol.
  int max_restarts = 2;
  /// Optional box; points are clamped into it before evaluation.
  std::vector<double> lower, upper;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evals = 0;
  int restarts = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead(const Objective &f, std::vector<double> x0,
                             const NelderMeadOptions &opts = {});

} // namespace spinwig
