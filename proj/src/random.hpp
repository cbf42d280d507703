#pragma once

// Haar-random pure states, CUE matrices and batch statistics of
// negativity and one-qubit linear entropy over random samples.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "stellar.hpp"

namespace spinwig {

/// Independent generator for substream `index` of a master seed.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

/// Normalized complex Gaussian vector: one column of a Haar unitary.
SpinState haar_state(Spin j, std::mt19937_64 &rng);

/// Haar unitary: Ginibre matrix, QR, R's diagonal phases moved into Q.
Eigen::MatrixXcd cue_matrix(int dimension, std::mt19937_64 &rng);

/// Kolmogorov-Smirnov statistic of a sample against a continuous CDF and its
/// asymptotic p-value.
struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};
template <class Cdf> KsResult ks_test(std::vector<double> sample, Cdf &&cdf);
double kolmogorov_survival(double lambda);

struct Histogram {
  double lo = 0.0, hi = 1.0;
  std::vector<long> counts;
  double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
  /// Centre of the fullest bin.
  double peak() const;
};

/// Values outside [lo, hi] are dropped; hi falls in the last bin.
Histogram make_histogram(const std::vector<double> &values, int bins, double lo, double hi);

struct BatchStats {
  Spin spin;
  int n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;
  double mean = 0.0, std = 0.0, min = 0.0, max = 0.0;

  /// Fraction of values >= (1 - pct/100) * reference.
  double fraction_within(double pct, double reference) const;
};

BatchStats summarize(Spin j, std::uint64_t seed, std::vector<double> values);

struct SampleOptions {
  int threads = 0;
  /// Theta order of the single-level negativity estimate.
  int negativity_order = 64;
};

/// Negativity and linear entropy of the same n Haar states; sample i comes
/// from substream i of seed.
struct PairedSample {
  BatchStats negativity;
  BatchStats entropy;
};
PairedSample sample_states(Spin j, int n, std::uint64_t seed,
                           const SampleOptions &opts = {});

BatchStats negativity_batch(Spin j, int n, std::uint64_t seed,
                            const SampleOptions &opts = {});
BatchStats entropy_batch(Spin j, int n, std::uint64_t seed, const SampleOptions &opts = {});

/// Known maximal negativity for 2j <= 7, 0 otherwise.
double reference_max_negativity(Spin j);

/// Fraction of the batch within pct percent of reference_max; a
/// non-positive reference falls back to the table value, then to the sample
/// maximum.
double fraction_near_max(const BatchStats &stats, double pct = 2.0,
                         double reference_max = 0.0);

template <class Cdf> KsResult ks_test(std::vector<double> sample, Cdf &&cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

} // namespace spinwig
