#include "random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "measures.hpp"
#include "parallel.hpp"
#include "phasespace.hpp"

namespace spinwig {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Box-Muller on 53-bit uniforms; the standard library's normal
// distribution is implementation-defined.
double standard_normal(std::mt19937_64 &rng) {
  constexpr double scale = 1.0 / 9007199254740992.0;
  const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * scale;
  const double u2 = static_cast<double>(rng() >> 11) * scale;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

} // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)),
                    static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                    static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(index))),
                    static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(index)) >> 32)};
  return std::mt19937_64(seq);
}

SpinState haar_state(Spin j, std::mt19937_64 &rng) {
  std::vector<complex> a(static_cast<std::size_t>(j.dimension()));
  for (auto &x : a) {
    const double re = standard_normal(rng);
    x = complex(re, standard_normal(rng));
  }
  return SpinState(j, std::move(a));
}

Eigen::MatrixXcd cue_matrix(int dimension, std::mt19937_64 &rng) {
  Eigen::MatrixXcd z(dimension, dimension);
  for (int c = 0; c < dimension; ++c)
    for (int r = 0; r < dimension; ++r) {
      const double re = standard_normal(rng);
      z(r, c) = complex(re, standard_normal(rng)) / std::sqrt(2.0);
    }
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dimension; ++k) {
    const complex d = r(k, k);
    q.col(k) *= std::abs(d) > 0 ? d / std::abs(d) : complex(1.0);
  }
  return q;
}

double kolmogorov_survival(double lambda) {
  if (lambda < 0.2)
    return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16)
      break;
  }
  return std::clamp(s, 0.0, 1.0);
}

double Histogram::peak() const {
  const auto it = std::max_element(counts.begin(), counts.end());
  return lo + (static_cast<double>(it - counts.begin()) + 0.5) * bin_width();
}

Histogram make_histogram(const std::vector<double> &values, int bins, double lo, double hi) {
  Histogram h;
  h.lo = lo;
  h.hi = hi > lo ? hi : lo + 1.0;
  h.counts.assign(static_cast<std::size_t>(std::max(bins, 1)), 0);
  const double w = h.bin_width();
  for (double v : values) {
    if (!(v >= h.lo && v <= h.hi))
      continue;
    auto b = static_cast<long>(std::floor((v - h.lo) / w));
    b = std::clamp(b, 0L, static_cast<long>(h.counts.size()) - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

double BatchStats::fraction_within(double pct, double reference) const {
  if (values.empty())
    return 0.0;
  const double cut = (1.0 - pct / 100.0) * reference;
  const auto n = std::count_if(values.begin(), values.end(), [&](double v) { return v >= cut; });
  return static_cast<double>(n) / static_cast<double>(values.size());
}

BatchStats summarize(Spin j, std::uint64_t seed, std::vector<double> values) {
  BatchStats s;
  s.spin = j;
  s.seed = seed;
  s.n_samples = static_cast<int>(values.size());
  if (!values.empty()) {
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (double v : values)
      var += (v - s.mean) * (v - s.mean);
    s.std = values.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  }
  s.values = std::move(values);
  return s;
}

PairedSample sample_states(Spin j, int n, std::uint64_t seed, const SampleOptions &opts) {
  std::vector<double> neg(static_cast<std::size_t>(std::max(n, 0)));
  std::vector<double> ent(neg.size());
  parallel_for(n, opts.threads, [&](int i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    const SpinState psi = haar_state(j, rng);
    neg[static_cast<std::size_t>(i)] = negativity_fixed(psi, opts.negativity_order);
    ent[static_cast<std::size_t>(i)] = linear_entropy_one_qubit(psi);
  });
  return {summarize(j, seed, std::move(neg)), summarize(j, seed, std::move(ent))};
}

BatchStats negativity_batch(Spin j, int n, std::uint64_t seed, const SampleOptions &opts) {
  std::vector<double> v(static_cast<std::size_t>(std::max(n, 0)));
  parallel_for(n, opts.threads, [&](int i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    v[static_cast<std::size_t>(i)] = negativity_fixed(haar_state(j, rng), opts.negativity_order);
  });
  return summarize(j, seed, std::move(v));
}

BatchStats entropy_batch(Spin j, int n, std::uint64_t seed, const SampleOptions &opts) {
  std::vector<double> v(static_cast<std::size_t>(std::max(n, 0)));
  parallel_for(n, opts.threads, [&](int i) {
    auto rng = substream(seed, static_cast<std::uint64_t>(i));
    v[static_cast<std::size_t>(i)] = linear_entropy_one_qubit(haar_state(j, rng));
  });
  return summarize(j, seed, std::move(v));
}

double reference_max_negativity(Spin j) {
  switch (j.twice()) {
  case 1:
    return 1.0 / std::sqrt(3.0) - 0.5;
  case 2:
    return 0.26935;
  case 3:
    return 0.39634;
  case 4:
    return 0.50078;
  case 5:
    return 0.57016;
  case 6:
    return 0.65354;
  case 7:
    return 0.73395;
  default:
    return 0.0;
  }
}

double fraction_near_max(const BatchStats &stats, double pct, double reference_max) {
  double ref = reference_max;
  if (ref <= 0.0)
    ref = reference_max_negativity(stats.spin);
  if (ref <= 0.0)
    ref = stats.max;
  return stats.fraction_within(pct, ref);
}

} // namespace spinwig
