#include "nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace spinwig {

namespace {

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> f;
};

class Runner {
public:
  Runner(const Objective &f, const NelderMeadOptions &opts) : f_(f), opts_(opts) {}

  int evals() const { return evals_; }
  bool exhausted() const { return evals_ >= opts_.max_evals; }

  void clamp(std::vector<double> &x) const {
    if (opts_.lower.size() == x.size())
      for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::max(x[i], opts_.lower[i]);
    if (opts_.upper.size() == x.size())
      for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::min(x[i], opts_.upper[i]);
  }

  double eval(std::vector<double> &x) {
    clamp(x);
    ++evals_;
    const double v = f_(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }

  // Returns true on convergence, false when the budget ran out.
  bool run(Simplex &s) {
    const std::size_t n = s.x.size() - 1;
    const double dn = static_cast<double>(n);
    double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    if (opts_.adaptive && n > 1) {
      gamma = 1.0 + 2.0 / dn;
      rho = 0.75 - 0.5 / dn;
      sigma = 1.0 - 1.0 / dn;
    }
    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    while (true) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return s.f[a] < s.f[b]; });
      const std::size_t best = order.front(), worst = order.back(),
                        second = order[n - 1];
      double diameter = 0.0;
      for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          diameter = std::max(diameter, std::abs(s.x[k][i] - s.x[best][i]));
      const double spread = s.f[worst] - s.f[best];
      if ((spread <= opts_.f_tol && diameter <= opts_.x_tol) ||
          (std::isfinite(spread) && spread <= 0.0 && diameter <= opts_.x_tol))
        return true;
      if (exhausted())
        return false;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t k = 0; k <= n; ++k)
        if (k != worst)
          for (std::size_t i = 0; i < n; ++i)
            centroid[i] += s.x[k][i] / dn;

      for (std::size_t i = 0; i < n; ++i)
        xr[i] = centroid[i] + alpha * (centroid[i] - s.x[worst][i]);
      const double fr = eval(xr);
      if (fr < s.f[best]) {
        for (std::size_t i = 0; i < n; ++i)
          xe[i] = centroid[i] + gamma * (xr[i] - centroid[i]);
        const double fe = eval(xe);
        if (fe < fr) {
          s.x[worst] = xe;
          s.f[worst] = fe;
        } else {
          s.x[worst] = xr;
          s.f[worst] = fr;
        }
        continue;
      }
      if (fr < s.f[second]) {
        s.x[worst] = xr;
        s.f[worst] = fr;
        continue;
      }
      const bool outside = fr < s.f[worst];
      for (std::size_t i = 0; i < n; ++i)
        xc[i] = outside ? centroid[i] + rho * (xr[i] - centroid[i])
                        : centroid[i] + rho * (s.x[worst][i] - centroid[i]);
      const double fc = eval(xc);
      if (fc < (outside ? fr : s.f[worst])) {
        s.x[worst] = xc;
        s.f[worst] = fc;
        continue;
      }
      // Shrink towards the best vertex.
      for (std::size_t k = 0; k <= n; ++k) {
        if (k == best)
          continue;
        for (std::size_t i = 0; i < n; ++i)
          s.x[k][i] = s.x[best][i] + sigma * (s.x[k][i] - s.x[best][i]);
        s.f[k] = eval(s.x[k]);
      }
    }
  }

  Simplex build(const std::vector<double> &x0, double f0, double step) {
    const std::size_t n = x0.size();
    Simplex s;
    s.x.push_back(x0);
    s.f.push_back(f0);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> v = x0;
      double h = step;
      // Step inwards when the box would swallow the move.
      if (opts_.upper.size() == n && v[i] + h > opts_.upper[i])
        h = -h;
      if (opts_.lower.size() == n && v[i] + h < opts_.lower[i])
        h = opts_.upper.size() == n ? 0.5 * (opts_.upper[i] - opts_.lower[i]) : std::abs(h);
      v[i] += h;
      s.f.push_back(eval(v));
      s.x.push_back(std::move(v));
    }
    return s;
  }

private:
  const Objective &f_;
  const NelderMeadOptions &opts_;
  int evals_ = 0;
};

} // namespace

NelderMeadResult nelder_mead(const Objective &f, std::vector<double> x0,
                             const NelderMeadOptions &opts) {
  Runner runner(f, opts);
  NelderMeadResult result;
  runner.clamp(x0);
  result.x = x0;
  result.f = runner.eval(result.x);
  if (x0.empty()) {
    result.evals = runner.evals();
    result.converged = true;
    return result;
  }
  double step = opts.initial_step;
  for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    Simplex s = runner.build(result.x, result.f, step);
    const bool done = runner.run(s);
    const auto best = static_cast<std::size_t>(
        std::min_element(s.f.begin(), s.f.end()) - s.f.begin());
    const double gain = result.f - s.f[best];
    if (s.f[best] <= result.f) {
      result.x = s.x[best];
      result.f = s.f[best];
    }
    result.restarts = attempt;
    result.converged = done;
    if (!done || (attempt > 0 && gain <= opts.f_tol))
      break;
    step = std::max(10.0 * opts.x_tol, 0.1 * step);
  }
  result.evals = runner.evals();
  return result;
}

} // namespace spinwig
