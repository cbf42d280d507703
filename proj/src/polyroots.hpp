#pragma once

#include <span>
#include <vector>

#include "angular.hpp"

namespace spinwig {

/// All roots of sum_k coeffs[k] z^k. The leading coefficient must be
/// non-zero. Eigenvalues of the balanced companion matrix, each polished by
/// guarded Newton steps (on the reversed polynomial for |z| > 1).
std::vector<complex> polynomial_roots(std::span<const complex> coeffs);

/// Horner evaluation of sum_k coeffs[k] z^k.
complex polynomial_eval(std::span<const complex> coeffs, complex z);

} // namespace spinwig
