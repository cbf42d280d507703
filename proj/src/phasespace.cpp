#include "phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "errors.hpp"

namespace spinwig {

namespace {

// C^{j, m+q}_{j m; K q} for all K, q, m of one spin, as doubles.
class CouplingTable {
public:
  explicit CouplingTable(Spin j) : j_(j), L_(j.twice()) {
    const int d = j.dimension();
    values_.assign(static_cast<std::size_t>((L_ + 1) * (2 * L_ + 1) * d), 0.0);
    for (int K = 0; K <= L_; ++K)
      for (int q = -K; q <= K; ++q)
        for (int mi = 0; mi < d; ++mi) {
          const Projection m = Projection::from_index(j, mi);
          const Projection mp(m.twice() + 2 * q);
          if (!mp.valid_for(j))
            continue;
          at(K, q, mi) = clebsch_gordan_value(j, m, Spin(2 * K), Projection(2 * q), j, mp);
        }
  }

  double operator()(int K, int q, int mi) const {
    return values_[index(K, q, mi)];
  }

private:
  std::size_t index(int K, int q, int mi) const {
    return static_cast<std::size_t>((K * (2 * L_ + 1) + (q + L_)) * j_.dimension() + mi);
  }
  double &at(int K, int q, int mi) { return values_[index(K, q, mi)]; }

  Spin j_;
  int L_;
  std::vector<double> values_;
};

const CouplingTable &coupling_table(Spin j) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const CouplingTable>> cache;
  std::lock_guard lock(mutex);
  auto &slot = cache[j.twice()];
  if (!slot)
    slot = std::make_unique<const CouplingTable>(j);
  return *slot;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v)
      s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// cos(q phi_k), sin(q phi_k) for phi_k = 2 pi k / n, q = 1..degree, laid out
// k-major so a ring sample is one contiguous dot product.
struct TrigTable {
  int n = 0, degree = 0;
  std::vector<double> cosines, sines;
};

const TrigTable &trig_table(int n, int degree) {
  thread_local std::map<std::pair<int, int>, TrigTable> cache;
  thread_local const TrigTable *last = nullptr;
  if (last && last->n == n && last->degree == degree)
    return *last;
  auto it = cache.find({n, degree});
  if (it == cache.end()) {
    TrigTable t;
    t.n = n;
    t.degree = degree;
    t.cosines.resize(static_cast<std::size_t>(n * degree));
    t.sines.resize(static_cast<std::size_t>(n * degree));
    for (int k = 0; k < n; ++k)
      for (int q = 1; q <= degree; ++q) {
        const double a = 2.0 * kPi * static_cast<double>((static_cast<long>(q) * k) % n) / n;
        t.cosines[static_cast<std::size_t>(k * degree + q - 1)] = std::cos(a);
        t.sines[static_cast<std::size_t>(k * degree + q - 1)] = std::sin(a);
      }
    it = cache.emplace(std::make_pair(n, degree), std::move(t)).first;
  }
  last = &it->second;
  return *last;
}

// Real trigonometric polynomial a0 + sum_q (alpha_q cos q phi + beta_q sin q phi).
struct RingPolynomial {
  double a0 = 0.0;
  std::vector<double> alpha, beta; // index q-1

  std::pair<double, double> value_and_slope(double phi) const {
    const double c1 = std::cos(phi), s1 = std::sin(phi);
    double c = 1.0, s = 0.0;
    double f = a0, df = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      const double cn = c * c1 - s * s1;
      s = s * c1 + c * s1;
      c = cn;
      const double q = static_cast<double>(i + 1);
      f += alpha[i] * c + beta[i] * s;
      df += q * (beta[i] * c - alpha[i] * s);
    }
    return {f, df};
  }

  double antiderivative(double phi) const {
    const double c1 = std::cos(phi), s1 = std::sin(phi);
    double c = 1.0, s = 0.0;
    double F = a0 * phi;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      const double cn = c * c1 - s * s1;
      s = s * c1 + c * s1;
      c = cn;
      const double q = static_cast<double>(i + 1);
      F += (alpha[i] * s - beta[i] * c) / q;
    }
    return F;
  }
};

// Safeguarded Newton on a bracket [lo, hi] with f(lo) f(hi) <= 0.
double bracketed_root(const RingPolynomial &p, double lo, double hi, double f_lo,
                      double f_hi) {
  if (f_lo == 0.0)
    return lo;
  if (f_hi == 0.0)
    return hi;
  double x = lo + (hi - lo) * f_lo / (f_lo - f_hi);
  if (f_lo > 0.0)
    std::swap(lo, hi); // keep f(lo) < 0 < f(hi)
  double dx_old = std::abs(hi - lo);
  double dx = dx_old;
  auto [f, df] = p.value_and_slope(x);
  for (int it = 0; it < 80; ++it) {
    const bool newton_out = ((x - hi) * df - f) * ((x - lo) * df - f) > 0.0;
    if (newton_out || std::abs(2.0 * f) > std::abs(dx_old * df)) {
      dx_old = dx;
      dx = 0.5 * (hi - lo);
      x = lo + dx;
    } else {
      dx_old = dx;
      dx = f / df;
      x -= dx;
    }
    if (std::abs(dx) < 1e-10)
      break;
    std::tie(f, df) = p.value_and_slope(x);
    if (f < 0.0)
      lo = x;
    else if (f > 0.0)
      hi = x;
    else
      break;
  }
  return x;
}

void check_state_grid(const SpinState &psi, const SphereGrid &grid) {
  if (psi.spin() != grid.spin())
    throw Error(ErrorCode::GridMismatch, "grid spin does not match state spin");
}

} // namespace

KernelSpectrum kernel_spectrum(Spin j) {
  KernelSpectrum out{j, std::vector<double>(static_cast<std::size_t>(j.dimension()), 0.0)};
  for (int mi = 0; mi < j.dimension(); ++mi) {
    const Projection m = Projection::from_index(j, mi);
    double s = 0.0;
    for (int l = 0; l <= j.twice(); ++l)
      s += (2.0 * l + 1.0) / j.dimension() *
           clebsch_gordan_value(j, m, Spin(2 * l), Projection(0), j, m);
    out.delta[static_cast<std::size_t>(mi)] = s;
  }
  return out;
}

MultipoleCoeffs::MultipoleCoeffs(Spin j, std::vector<complex> values)
    : j_(j), values_(std::move(values)) {
  const std::size_t expected = static_cast<std::size_t>(j.dimension() * j.dimension());
  if (values_.size() != expected)
    throw Error(ErrorCode::InvalidArgument, "multipole coefficient count must be (2j+1)^2");
}

MultipoleCoeffs multipole_coeffs(const SpinState &psi) {
  const Spin j = psi.spin();
  const int L = j.twice();
  const int d = j.dimension();
  const CouplingTable &cg = coupling_table(j);
  const auto a = psi.amplitudes();
  std::vector<complex> rho(static_cast<std::size_t>(d * d));
  for (int K = 0; K <= L; ++K) {
    const double norm = std::sqrt((2.0 * K + 1.0) / d);
    for (int q = -K; q <= K; ++q) {
      complex s = 0.0;
      for (int mi = 0; mi < d; ++mi) {
        const int mpi = mi + q;
        if (mpi < 0 || mpi >= d)
          continue;
        s += cg(K, q, mi) * std::conj(a[static_cast<std::size_t>(mpi)]) *
             a[static_cast<std::size_t>(mi)];
      }
      rho[static_cast<std::size_t>(K * K + K + q)] = std::conj(norm * s);
    }
  }
  return MultipoleCoeffs(j, std::move(rho));
}

std::shared_ptr<const GaussLegendreRule> gauss_legendre(int n) {
  if (n < 1)
    throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const GaussLegendreRule>> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end())
      return it->second;
  }
  auto rule = std::make_shared<GaussLegendreRule>();
  rule->nodes.resize(static_cast<std::size_t>(n));
  rule->weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double pn = n == 1 ? x : p1;
    const double pn1 = n == 1 ? 1.0 : p0;
    dp = n * (x * pn - pn1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Ascending order: node i is -x_i.
    rule->nodes[static_cast<std::size_t>(i)] = -x;
    rule->nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule->weights[static_cast<std::size_t>(i)] = w;
    rule->weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1)
    rule->nodes[static_cast<std::size_t>(n / 2)] = 0.0;

  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(n, std::move(rule));
  return it->second;
}

SphereGrid::SphereGrid(Spin j, int n_theta, int n_phi)
    : j_(j), n_theta_(n_theta), n_phi_(n_phi), rule_(gauss_legendre(n_theta)) {
  if (n_phi < 1)
    throw Error(ErrorCode::InvalidArgument, "n_phi must be positive");
}

double SphereGrid::theta(int i) const { return std::acos(cos_theta(i)); }

double SphereGrid::phi(int k) const { return 2.0 * kPi * k / n_phi_; }

double SphereGrid::weight(int i) const {
  return j_.dimension() / (4.0 * kPi) * rule_->weights[static_cast<std::size_t>(i)] *
         (2.0 * kPi / n_phi_);
}

double SphereGrid::total_weight() const {
  double s = 0.0;
  for (int i = 0; i < n_theta_; ++i)
    s += weight(i) * n_phi_;
  return s;
}

WignerExpansion::WignerExpansion(const SpinState &psi)
    : WignerExpansion(multipole_coeffs(psi)) {}

WignerExpansion::WignerExpansion(const MultipoleCoeffs &rho)
    : j_(rho.spin()), lmax_(rho.spin().twice()) {
  const double scale = std::sqrt(4.0 * kPi / j_.dimension());
  scaled_.resize(static_cast<std::size_t>((lmax_ + 1) * (lmax_ + 2) / 2));
  for (int K = 0; K <= lmax_; ++K)
    for (int q = 0; q <= K; ++q)
      scaled_[static_cast<std::size_t>(K * (K + 1) / 2 + q)] = scale * rho(K, q);
  rec_a_.assign(scaled_.size(), 0.0);
  rec_b_.assign(scaled_.size(), 0.0);
  for (int m = 0; m <= lmax_; ++m) {
    const auto diag = static_cast<std::size_t>(m * (m + 1) / 2 + m);
    rec_a_[diag] = m == 0 ? 1.0 / std::sqrt(4.0 * kPi)
                          : -std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    for (int l = m + 1; l <= lmax_; ++l) {
      const auto idx = static_cast<std::size_t>(l * (l + 1) / 2 + m);
      rec_a_[idx] = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      rec_b_[idx] = l == m + 1 ? 0.0
                               : std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                           (4.0 * (l - 1) * (l - 1) - 1.0));
    }
  }
}

void WignerExpansion::ring_coefficients(double x, std::vector<complex> &out) const {
  out.assign(static_cast<std::size_t>(lmax_ + 1), 0.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = rec_a_[0];
  for (int m = 0; m <= lmax_; ++m) {
    if (m > 0)
      pmm *= rec_a_[static_cast<std::size_t>(m * (m + 1) / 2 + m)] * s;
    complex acc = scaled_[static_cast<std::size_t>(m * (m + 1) / 2 + m)] * pmm;
    double p2 = 0.0, p1 = pmm;
    for (int l = m + 1; l <= lmax_; ++l) {
      const auto idx = static_cast<std::size_t>(l * (l + 1) / 2 + m);
      const double p = rec_a_[idx] * (x * p1 - rec_b_[idx] * p2);
      acc += scaled_[idx] * p;
      p2 = p1;
      p1 = p;
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
}

double WignerExpansion::value(double theta, double phi) const {
  thread_local std::vector<complex> b;
  ring_coefficients(std::cos(theta), b);
  double w = b[0].real();
  for (int q = 1; q <= lmax_; ++q)
    w += 2.0 * (b[static_cast<std::size_t>(q)] * std::polar(1.0, q * phi)).real();
  return w;
}

WignerExpansion::RingProfile WignerExpansion::ring_profile(double x,
                                                           int n_samples) const {
  constexpr double two_pi = 2.0 * kPi;
  thread_local std::vector<complex> b;
  thread_local RingPolynomial p;
  ring_coefficients(x, b);
  p.a0 = b[0].real();
  p.alpha.resize(static_cast<std::size_t>(lmax_));
  p.beta.resize(static_cast<std::size_t>(lmax_));
  double bound = 0.0;
  for (int q = 1; q <= lmax_; ++q) {
    p.alpha[static_cast<std::size_t>(q - 1)] = 2.0 * b[static_cast<std::size_t>(q)].real();
    p.beta[static_cast<std::size_t>(q - 1)] = -2.0 * b[static_cast<std::size_t>(q)].imag();
    bound += 2.0 * std::abs(b[static_cast<std::size_t>(q)]);
  }
  RingProfile out;
  if (std::abs(p.a0) > bound) {
    out.abs_integral = two_pi * std::abs(p.a0);
    out.sign = p.a0 > 0.0 ? 1 : -1;
    out.extremum_gap = (std::abs(p.a0) - bound) / (std::abs(p.a0) + bound);
    out.peak = std::abs(p.a0) + bound;
    return out;
  }

  const int n = std::max(n_samples, 4 * lmax_ + 4);
  const TrigTable &trig = trig_table(n, lmax_);
  thread_local std::vector<double> samples;
  samples.resize(static_cast<std::size_t>(n));
  const double *alpha = p.alpha.data();
  const double *beta = p.beta.data();
  for (int k = 0; k < n; ++k) {
    const double *c = trig.cosines.data() + static_cast<std::ptrdiff_t>(k) * lmax_;
    const double *sn = trig.sines.data() + static_cast<std::ptrdiff_t>(k) * lmax_;
    double f = p.a0;
    for (int q = 0; q < lmax_; ++q)
      f += alpha[q] * c[q] + beta[q] * sn[q];
    samples[static_cast<std::size_t>(k)] = f;
  }

  double peak = 0.0;
  for (double f : samples)
    peak = std::max(peak, std::abs(f));

  thread_local std::vector<double> roots;
  roots.clear();
  const double h = two_pi / n;
  for (int k = 0; k < n; ++k) {
    const double f0 = samples[static_cast<std::size_t>(k)];
    const double f1 = samples[static_cast<std::size_t>((k + 1) % n)];
    if ((f0 > 0.0) != (f1 > 0.0))
      roots.push_back(bracketed_root(p, k * h, (k + 1) * h, f0, f1));
  }

  // Sampled extrema that come close to zero may hide a pair of roots
  // between two samples; refine them.
  double gap = peak;
  for (int k = 0; k < n; ++k) {
    const double fm = samples[static_cast<std::size_t>((k + n - 1) % n)];
    const double f0 = samples[static_cast<std::size_t>(k)];
    const double fp = samples[static_cast<std::size_t>((k + 1) % n)];
    if ((f0 - fm) * (fp - f0) > 0.0)
      continue;
    const double curv = fp - 2.0 * f0 + fm;
    const double v = curv != 0.0 ? f0 - (fp - fm) * (fp - fm) / (8.0 * curv) : f0;
    const bool same_side = (fm > 0.0) == (f0 > 0.0) && (fp > 0.0) == (f0 > 0.0);
    if (!same_side || (std::abs(v) >= 0.5 * std::abs(f0) && (v > 0.0) == (f0 > 0.0))) {
      gap = std::min(gap, std::abs(v));
      continue;
    }
    const double sgn = f0 > 0.0 ? 1.0 : -1.0;
    const double lo = (k - 1) * h, hi = (k + 1) * h;
    std::uintmax_t iters = 60;
    const auto [phi_ext, scaled] = boost::math::tools::brent_find_minima(
        [&](double t) { return sgn * p.value_and_slope(t).first; }, lo, hi, 40, iters);
    const double f_ext = sgn * scaled;
    gap = std::min(gap, std::abs(f_ext));
    if ((f_ext > 0.0) == (f0 > 0.0))
      continue;
    roots.push_back(bracketed_root(p, lo, phi_ext, fm, f_ext));
    roots.push_back(bracketed_root(p, phi_ext, hi, f_ext, fp));
  }
  out.extremum_gap = peak > 0.0 ? gap / peak : 0.0;
  out.peak = peak;
  for (double &r : roots) {
    r = std::fmod(r, two_pi);
    if (r < 0.0)
      r += two_pi;
  }
  std::sort(roots.begin(), roots.end());
  out.roots = static_cast<int>(roots.size());
  if (roots.empty()) {
    out.abs_integral = two_pi * std::abs(p.a0);
    out.sign = samples[0] > 0.0 ? 1 : -1;
    return out;
  }

  double total = 0.0;
  double F_prev = p.antiderivative(roots.front());
  const double F_first = F_prev;
  for (std::size_t i = 1; i < roots.size(); ++i) {
    const double F = p.antiderivative(roots[i]);
    total += std::abs(F - F_prev);
    F_prev = F;
  }
  // Wrap-around segment from the last root to the first root + 2pi.
  total += std::abs(F_first + two_pi * p.a0 - F_prev);
  out.abs_integral = total;
  return out;
}

std::vector<double> WignerExpansion::ring_breakpoints(int n_scan) const {
  const int samples = ring_samples();
  struct ScanPoint {
    double theta;
    int signature;
    double gap;
    double peak;
  };
  auto probe = [&](double theta) {
    const RingProfile r = ring_profile(std::cos(theta), samples);
    return ScanPoint{theta, r.roots > 0 ? r.roots : 1000 * r.sign, r.extremum_gap * r.peak, r.peak};
  };
  std::vector<double> out;
  auto locate = [&](ScanPoint a, ScanPoint b) {
    for (int it = 0; it < 40 && b.theta - a.theta > 1e-7; ++it) {
      const ScanPoint mid = probe(0.5 * (a.theta + b.theta));
      if (mid.signature == a.signature)
        a = mid;
      else
        b = mid;
    }
    out.push_back(std::cos(0.5 * (a.theta + b.theta)));
  };

  std::vector<ScanPoint> scan;
  for (int i = 0; i <= n_scan; ++i)
    scan.push_back(probe(kPi * i / n_scan));
  for (int i = 0; i < n_scan; ++i)
    if (scan[static_cast<std::size_t>(i)].signature != scan[static_cast<std::size_t>(i + 1)].signature)
      locate(scan[static_cast<std::size_t>(i)], scan[static_cast<std::size_t>(i + 1)]);

  // Topology windows narrower than the scan spacing: an extremum dips
  // through zero and back between samples. Look where the extremum gap has a
  // small local minimum, measured against the largest |W| on the sphere so
  // that rings where W is small everywhere are not missed.
  double scale = 0.0;
  for (const ScanPoint &p : scan)
    scale = std::max(scale, p.peak);
  const double suspicious_gap = 0.05 * scale;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 1; i < n_scan; ++i) {
    const ScanPoint &l = scan[static_cast<std::size_t>(i - 1)];
    const ScanPoint &c = scan[static_cast<std::size_t>(i)];
    const ScanPoint &r = scan[static_cast<std::size_t>(i + 1)];
    if (c.gap > suspicious_gap || c.gap > l.gap || c.gap > r.gap)
      continue;
    if (l.signature != c.signature || r.signature != c.signature)
      continue;
    double a = l.theta, b = r.theta;
    ScanPoint x1 = probe(b - g * (b - a)), x2 = probe(a + g * (b - a));
    const ScanPoint *inside = nullptr;
    ScanPoint found{};
    for (int it = 0; it < 40 && b - a > 1e-6; ++it) {
      for (const ScanPoint *q : {&x1, &x2})
        if (q->signature != c.signature) {
          found = *q;
          inside = &found;
        }
      if (inside)
        break;
      if (x1.gap < x2.gap) {
        b = x2.theta;
        x2 = x1;
        x1 = probe(b - g * (b - a));
      } else {
        a = x1.theta;
        x1 = x2;
        x2 = probe(a + g * (b - a));
      }
    }
    if (inside) {
      locate(l, found);
      locate(found, r);
    }
  }

  std::sort(out.begin(), out.end());
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](double x) { return std::abs(x) >= 1.0 - 1e-12; }),
            out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            out.end());
  return out;
}

WignerField wigner_eval(const SpinState &psi, const SphereGrid &grid) {
  check_state_grid(psi, grid);
  const MultipoleCoeffs rho = multipole_coeffs(psi);
  const int L = psi.spin().twice();
  const double scale = std::sqrt(4.0 * kPi / psi.dimension());
  WignerField field;
  field.n_theta = grid.n_theta();
  field.n_phi = grid.n_phi();
  field.values.resize(static_cast<std::size_t>(grid.n_theta() * grid.n_phi()));
  for (int i = 0; i < grid.n_theta(); ++i) {
    const NormalizedLegendreTable table(L, grid.cos_theta(i));
    for (int k = 0; k < grid.n_phi(); ++k) {
      const double phi = grid.phi(k);
      complex w = 0.0;
      for (int K = 0; K <= L; ++K)
        for (int q = -K; q <= K; ++q) {
          const int aq = std::abs(q);
          complex y = table(K, aq) * std::polar(1.0, aq * phi);
          if (q < 0)
            y = (aq % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
          w += rho(K, q) * y;
        }
      w *= scale;
      field.values[static_cast<std::size_t>(i * grid.n_phi() + k)] = w.real();
      field.max_imag_residue = std::max(field.max_imag_residue, std::abs(w.imag()));
    }
  }
  return field;
}

double wigner_at(const SpinState &psi, double theta, double phi) {
  return WignerExpansion(psi).value(theta, phi);
}

double wigner_at_diagonal(const SpinState &psi, double theta, double phi) {
  // |<j,m;n|psi>|^2 = |(R^dagger psi)_m|^2 with R = Rz(phi) Ry(theta).
  const SpinState back = rotate_state(psi, EulerAngles{0.0, -theta, -phi});
  const KernelSpectrum spectrum = kernel_spectrum(psi.spin());
  double w = 0.0;
  for (int mi = 0; mi < psi.dimension(); ++mi)
    w += spectrum.delta[static_cast<std::size_t>(mi)] *
         std::norm(back.amplitudes()[static_cast<std::size_t>(mi)]);
  return w;
}

double husimi_eval(const SpinState &psi, double theta, double phi) {
  const Spin j = psi.spin();
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  complex overlap = 0.0;
  for (int mi = 0; mi < psi.dimension(); ++mi) {
    const int j_plus_m = mi;
    const int j_minus_m = j.twice() - mi;
    const complex coherent_amp =
        std::sqrt(binomial(j.twice(), j_minus_m)) * std::pow(c, j_plus_m) *
        std::pow(s, j_minus_m) * std::polar(1.0, j_minus_m * phi);
    overlap += std::conj(coherent_amp) * psi.amplitudes()[static_cast<std::size_t>(mi)];
  }
  return std::norm(overlap);
}

double integrate(const WignerField &field, const SphereGrid &grid) {
  std::vector<double> rings(static_cast<std::size_t>(field.n_theta));
  for (int i = 0; i < field.n_theta; ++i) {
    const std::span<const double> row(field.values.data() + static_cast<std::size_t>(i * field.n_phi),
                                      static_cast<std::size_t>(field.n_phi));
    rings[static_cast<std::size_t>(i)] = grid.weight(i) * pairwise_sum(row);
  }
  return pairwise_sum(rings);
}

double overlap_via_traciality(const SpinState &psi1, const SpinState &psi2,
                              const SphereGrid &grid) {
  check_state_grid(psi1, grid);
  check_state_grid(psi2, grid);
  const int needed = 2 * psi1.spin().twice() + 1;
  if (grid.n_theta() < needed || grid.n_phi() < needed) {
    std::ostringstream msg;
    msg << "grid under-resolved for traciality: need n_theta, n_phi >= " << needed;
    throw Error(ErrorCode::UnderResolved, msg.str());
  }
  WignerField f1 = wigner_eval(psi1, grid);
  const WignerField f2 = wigner_eval(psi2, grid);
  for (std::size_t i = 0; i < f1.values.size(); ++i)
    f1.values[i] *= f2.values[i];
  return integrate(f1, grid);
}

namespace {

std::vector<double> panel_edges(const WignerExpansion &expansion) {
  std::vector<double> edges{-1.0};
  for (double x : expansion.ring_breakpoints(std::max(48, 8 * expansion.spin().twice() + 16)))
    edges.push_back(x);
  edges.push_back(1.0);
  return edges;
}

// Gauss-Legendre of the given order on every panel. The substitution
// x = lo + width u^2 (3 - 2u) flattens the (x - x0)^{3/2} behaviour at
// breakpoints into a smooth u^3.
double panel_estimate(const WignerExpansion &expansion, const std::vector<double> &edges,
                      int order, std::vector<double> &terms) {
  const auto rule = gauss_legendre(order);
  const int samples = expansion.ring_samples();
  terms.clear();
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p];
    const double width = edges[p + 1] - lo;
    for (int i = 0; i < order; ++i) {
      const double u = 0.5 * (rule->nodes[static_cast<std::size_t>(i)] + 1.0);
      const double x = lo + width * u * u * (3.0 - 2.0 * u);
      const double jac = 6.0 * u * (1.0 - u) * width;
      terms.push_back(0.5 * rule->weights[static_cast<std::size_t>(i)] * jac *
                      expansion.ring_abs_integral(x, samples));
    }
  }
  const double measure = expansion.spin().dimension() / (4.0 * kPi);
  return 0.5 * (measure * pairwise_sum(terms) - 1.0);
}

} // namespace

NegativityReport negativity_report(const SpinState &psi, const NegativityOptions &opts) {
  const Spin j = psi.spin();
  const WignerExpansion expansion(psi);
  const int n0 = opts.initial_n_theta > 0 ? opts.initial_n_theta
                                          : std::max(32, 2 * j.twice() + 4);
  const std::vector<double> edges = panel_edges(expansion);
  const int panels = static_cast<int>(edges.size()) - 1;
  const int order0 = std::max(6, (n0 + panels - 1) / panels);

  NegativityReport report;
  report.panels = panels;
  int passes = 0;
  std::vector<double> terms;
  for (int level = 0; level <= opts.max_refinements; ++level) {
    const int order = order0 << level;
    const double estimate = panel_estimate(expansion, edges, order, terms);
    if (!report.estimates.empty()) {
      const double change = std::abs(estimate - report.estimates.back());
      passes = change <= opts.rel_tol * std::abs(estimate) + 1e-15 ? passes + 1 : 0;
    }
    report.n_theta.push_back(order * panels);
    report.estimates.push_back(estimate);
    report.value = estimate;
    if (passes >= opts.passes_required)
      return report;
  }
  std::ostringstream msg;
  msg.precision(12);
  const std::size_t k = report.estimates.size();
  msg << "negativity did not converge after " << opts.max_refinements
      << " refinements; last estimates ";
  if (k >= 2)
    msg << report.estimates[k - 2] << " and ";
  msg << report.estimates[k - 1];
  throw Error(ErrorCode::NotConverged, msg.str());
}

double negativity_panels(const SpinState &psi, int order) {
  const WignerExpansion expansion(psi);
  std::vector<double> terms;
  return panel_estimate(expansion, panel_edges(expansion), order, terms);
}

double negativity(const SpinState &psi, double rel_tol) {
  NegativityOptions opts;
  opts.rel_tol = rel_tol;
  return negativity_report(psi, opts).value;
}

double negativity_fixed(const WignerExpansion &expansion, int n_theta) {
  const auto rule = gauss_legendre(n_theta);
  const int samples = expansion.ring_samples();
  std::vector<double> terms(static_cast<std::size_t>(n_theta));
  for (int i = 0; i < n_theta; ++i)
    terms[static_cast<std::size_t>(i)] =
        rule->weights[static_cast<std::size_t>(i)] *
        expansion.ring_abs_integral(rule->nodes[static_cast<std::size_t>(i)], samples);
  const double measure = expansion.spin().dimension() / (4.0 * kPi);
  return 0.5 * (measure * pairwise_sum(terms) - 1.0);
}

double negativity_fixed(const SpinState &psi, int n_theta) {
  return negativity_fixed(WignerExpansion(psi), n_theta);
}

double negativity_on_grid(const SpinState &psi, const SphereGrid &grid) {
  check_state_grid(psi, grid);
  const WignerExpansion expansion(psi);
  std::vector<double> rings(static_cast<std::size_t>(grid.n_theta()));
  std::vector<double> row(static_cast<std::size_t>(grid.n_phi()));
  std::vector<complex> b;
  for (int i = 0; i < grid.n_theta(); ++i) {
    expansion.ring_coefficients(grid.cos_theta(i), b);
    for (int k = 0; k < grid.n_phi(); ++k) {
      double w = b[0].real();
      for (std::size_t q = 1; q < b.size(); ++q)
        w += 2.0 * (b[q] * std::polar(1.0, static_cast<double>(q) * grid.phi(k))).real();
      row[static_cast<std::size_t>(k)] = std::abs(w);
    }
    rings[static_cast<std::size_t>(i)] = grid.weight(i) * pairwise_sum(row);
  }
  return 0.5 * (pairwise_sum(rings) - 1.0);
}

std::vector<CoherentScanRow> coherent_negativity_scan(Spin j_max, double rel_tol) {
  std::vector<CoherentScanRow> rows;
  for (int tj = 1; tj <= j_max.twice(); ++tj) {
    const Spin j(tj);
    const SpinState psi = SpinState::dicke(j, Projection(tj));
    const WignerExpansion w(psi);
    CoherentScanRow row;
    row.j = j;
    row.negativity = negativity(psi, rel_tol);
    // Dense scan in theta, then golden-section refinement around the best.
    constexpr int samples = 2000;
    int best = 0;
    double best_value = w.value(0.0, 0.0);
    for (int i = 1; i <= samples; ++i) {
      const double v = w.value(kPi * i / samples, 0.0);
      if (v < best_value) {
        best_value = v;
        best = i;
      }
    }
    double a = kPi * std::max(0, best - 1) / samples;
    double b = kPi * std::min(samples, best + 1) / samples;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
      const double c = b - g * (b - a), d = a + g * (b - a);
      if (w.value(c, 0.0) < w.value(d, 0.0))
        b = d;
      else
        a = c;
    }
    row.theta_at_min = 0.5 * (a + b);
    row.min_wigner = std::min(best_value, w.value(row.theta_at_min, 0.0));
    rows.push_back(row);
  }
  return rows;
}

} // namespace spinwig
