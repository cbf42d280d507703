#include "stellar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "assignment.hpp"
#include "errors.hpp"
#include "polyroots.hpp"

namespace spinwig {

namespace {

// Coefficients of the Majorana polynomial below this fraction of the largest
// one are treated as exact zeros (roots at 0 or at infinity).
constexpr double kZeroCoefficient = 1e-14;
constexpr double kPoleSnap = 1e-12;

double distance(const Vec3 &a, const Vec3 &b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double dot(const Vec3 &a, const Vec3 &b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 cross(const Vec3 &a, const Vec3 &b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(const Vec3 &a) {
  const double n = std::sqrt(dot(a, a));
  return {a[0] / n, a[1] / n, a[2] / n};
}

double majorana_weight(Spin j, int index) {
  // (-1)^{j-m} sqrt(C(2j, j-m)) for m at array position index.
  const int j_minus_m = j.twice() - index;
  const double w = std::sqrt(binomial(j.twice(), j_minus_m));
  return (j_minus_m % 2 == 0) ? w : -w;
}

Star star_from_root(complex z) {
  const double theta = 2.0 * std::atan(std::abs(z));
  return Star::canonical(theta, std::arg(z));
}

using Matrix3 = std::array<double, 9>;

Matrix3 frame(const Vec3 &a, const Vec3 &b) {
  // Columns e1, e2, e3 of an orthonormal frame built from a and b.
  const Vec3 e1 = normalized(a);
  const double proj = dot(b, e1);
  const Vec3 e2 =
      normalized({b[0] - proj * e1[0], b[1] - proj * e1[1], b[2] - proj * e1[2]});
  const Vec3 e3 = cross(e1, e2);
  return {e1[0], e2[0], e3[0], e1[1], e2[1], e3[1], e1[2], e2[2], e3[2]};
}

Matrix3 multiply_transpose(const Matrix3 &a, const Matrix3 &b) {
  // a * b^T
  Matrix3 out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < 3; ++k)
        out[r * 3 + c] += a[r * 3 + k] * b[c * 3 + k];
  return out;
}

Matrix3 rotation_between(const Vec3 &from, const Vec3 &to) {
  const Vec3 axis = cross(from, to);
  const double s = std::sqrt(dot(axis, axis));
  const double c = dot(from, to);
  if (s < 1e-15) {
    if (c > 0)
      return {1, 0, 0, 0, 1, 0, 0, 0, 1};
    // Half-turn about any axis perpendicular to from.
    Vec3 perp = std::abs(from[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const double p = dot(perp, from);
    perp = normalized({perp[0] - p * from[0], perp[1] - p * from[1], perp[2] - p * from[2]});
    Matrix3 r{};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        r[i * 3 + k] = 2.0 * perp[i] * perp[k] - (i == k ? 1.0 : 0.0);
    return r;
  }
  const Vec3 k = {axis[0] / s, axis[1] / s, axis[2] / s};
  const double t = 1.0 - c;
  return {c + k[0] * k[0] * t,        k[0] * k[1] * t - k[2] * s, k[0] * k[2] * t + k[1] * s,
          k[1] * k[0] * t + k[2] * s, c + k[1] * k[1] * t,        k[1] * k[2] * t - k[0] * s,
          k[2] * k[0] * t - k[1] * s, k[2] * k[1] * t + k[0] * s, c + k[2] * k[2] * t};
}

// Kabsch: proper rotation minimizing sum |R v_i - w_i|^2.
Matrix3 kabsch(const std::vector<Vec3> &v, const std::vector<Vec3> &w) {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < v.size(); ++i)
    h += Eigen::Vector3d(w[i][0], w[i][1], w[i][2]) *
         Eigen::Vector3d(v[i][0], v[i][1], v[i][2]).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0)
    d(2, 2) = -1.0;
  const Eigen::Matrix3d r = svd.matrixU() * d * svd.matrixV().transpose();
  Matrix3 out{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      out[i * 3 + k] = r(i, k);
  return out;
}

struct Matching {
  std::vector<int> assignment;
  double max_distance = 0.0;
};

Matching match_stars(const std::vector<Vec3> &v, const std::vector<Vec3> &w) {
  const int n = static_cast<int>(v.size());
  std::vector<double> cost(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double d = distance(v[i], w[k]);
      cost[static_cast<std::size_t>(i * n + k)] = d * d;
    }
  Matching m;
  m.assignment = solve_assignment(cost, n);
  for (int i = 0; i < n; ++i)
    m.max_distance = std::max(m.max_distance, distance(v[i], w[m.assignment[i]]));
  return m;
}

double residual_for(const Matrix3 &r, const std::vector<Vec3> &v,
                    const std::vector<Vec3> &w) {
  std::vector<Vec3> rv(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    rv[i] = rotate_vector(r, v[i]);
  Matching m = match_stars(rv, w);
  // One Kabsch refinement on the matched pairs.
  std::vector<Vec3> matched(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    matched[i] = w[m.assignment[i]];
  const Matrix3 refined = kabsch(v, matched);
  for (std::size_t i = 0; i < v.size(); ++i)
    rv[i] = rotate_vector(refined, v[i]);
  return std::min(m.max_distance, match_stars(rv, w).max_distance);
}

} // namespace

Vec3 Star::cartesian() const {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

Star Star::from_cartesian(const Vec3 &v) {
  const double r = std::sqrt(dot(v, v));
  const double z = std::clamp(v[2] / r, -1.0, 1.0);
  const double rho = std::hypot(v[0], v[1]) / r;
  return canonical(std::atan2(rho, z), std::atan2(v[1], v[0]));
}

Star Star::canonical(double theta, double phi) {
  constexpr double two_pi = 2.0 * kPi;
  theta = std::fmod(theta, two_pi);
  if (theta < 0)
    theta += two_pi;
  if (theta > kPi) {
    theta = two_pi - theta;
    phi += kPi;
  }
  phi = std::fmod(phi, two_pi);
  if (phi < 0)
    phi += two_pi;
  if (phi >= two_pi)
    phi = 0.0;
  if (theta < kPoleSnap) {
    theta = 0.0;
    phi = 0.0;
  } else if (kPi - theta < kPoleSnap) {
    theta = kPi;
    phi = 0.0;
  }
  return {theta, phi};
}

Constellation::Constellation(std::vector<Star> stars) {
  stars_.reserve(stars.size());
  for (const Star &s : stars)
    stars_.push_back(Star::canonical(s.theta, s.phi));
}

std::vector<Vec3> Constellation::cartesian() const {
  std::vector<Vec3> out;
  out.reserve(stars_.size());
  for (const Star &s : stars_)
    out.push_back(s.cartesian());
  return out;
}

SpinState::SpinState(Spin j, std::vector<complex> amplitudes)
    : j_(j), amps_(std::move(amplitudes)) {
  if (static_cast<int>(amps_.size()) != j_.dimension())
    throw Error(ErrorCode::InvalidArgument,
                "amplitude count does not match 2j+1");
  double norm2 = 0.0;
  for (const complex &a : amps_)
    norm2 += std::norm(a);
  if (!(norm2 > 0.0) || !std::isfinite(norm2))
    throw Error(ErrorCode::ZeroState, "zero state");
  const double inv = 1.0 / std::sqrt(norm2);
  for (complex &a : amps_)
    a *= inv;
}

SpinState SpinState::dicke(Spin j, Projection m) {
  if (!m.valid_for(j))
    throw Error(ErrorCode::InvalidArgument, "projection not valid for spin");
  std::vector<complex> a(static_cast<std::size_t>(j.dimension()), 0.0);
  a[static_cast<std::size_t>(m.index_in(j))] = 1.0;
  return SpinState(j, std::move(a));
}

SpinState SpinState::coherent(Spin j, double theta, double phi) {
  std::vector<Star> stars(static_cast<std::size_t>(j.twice()), Star{theta, phi});
  return constellation_to_state(Constellation(std::move(stars)));
}

complex SpinState::inner(const SpinState &other) const {
  if (other.j_ != j_)
    throw Error(ErrorCode::InvalidArgument, "inner product across spins");
  complex s = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i)
    s += std::conj(amps_[i]) * other.amps_[i];
  return s;
}

std::array<double, 9> rotation_matrix(const EulerAngles &e) {
  const double ca = std::cos(e.alpha), sa = std::sin(e.alpha);
  const double cb = std::cos(e.beta), sb = std::sin(e.beta);
  const double cg = std::cos(e.gamma), sg = std::sin(e.gamma);
  // Rz(a) Ry(b) Rz(g)
  return {ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb,
          sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb,
          -sb * cg,               sb * sg,                 cb};
}

Vec3 rotate_vector(const std::array<double, 9> &r, const Vec3 &v) {
  return {r[0] * v[0] + r[1] * v[1] + r[2] * v[2],
          r[3] * v[0] + r[4] * v[1] + r[5] * v[2],
          r[6] * v[0] + r[7] * v[1] + r[8] * v[2]};
}

Constellation state_to_constellation(const SpinState &psi) {
  const Spin j = psi.spin();
  const int n = j.twice();
  std::vector<complex> coeffs(static_cast<std::size_t>(n + 1));
  double scale = 0.0;
  for (int k = 0; k <= n; ++k) {
    // Coefficient of z^k belongs to m = k - j, i.e. array index k.
    coeffs[static_cast<std::size_t>(k)] =
        majorana_weight(j, k) * psi.amplitudes()[static_cast<std::size_t>(k)];
    scale = std::max(scale, std::abs(coeffs[static_cast<std::size_t>(k)]));
  }
  if (!(scale > 0.0))
    throw Error(ErrorCode::ZeroState, "zero state");
  const double cutoff = kZeroCoefficient * scale;
  int low = 0;
  while (std::abs(coeffs[static_cast<std::size_t>(low)]) <= cutoff)
    ++low;
  int high = n;
  while (std::abs(coeffs[static_cast<std::size_t>(high)]) <= cutoff)
    --high;

  std::vector<Star> stars;
  stars.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < low; ++k)
    stars.push_back({0.0, 0.0});
  const std::span<const complex> middle(coeffs.data() + low,
                                        static_cast<std::size_t>(high - low + 1));
  for (const complex &z : polynomial_roots(middle))
    stars.push_back(star_from_root(z));
  for (int k = high; k < n; ++k)
    stars.push_back({kPi, 0.0});
  return Constellation(std::move(stars));
}

SpinState constellation_to_state(const Constellation &c) {
  const Spin j = c.spin();
  const int n = j.twice();
  if (n == 0)
    return SpinState(j, {1.0});
  // Homogeneous product of (cos(t/2) z - e^{i phi} sin(t/2)); bounded
  // coefficients even for stars at or near the south pole.
  std::vector<complex> poly{1.0};
  for (const Star &s : c.stars()) {
    const complex u = std::cos(0.5 * s.theta);
    const complex v = std::polar(std::sin(0.5 * s.theta), s.phi);
    std::vector<complex> next(poly.size() + 1, 0.0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] += u * poly[k];
      next[k] -= v * poly[k];
    }
    poly = std::move(next);
  }
  std::vector<complex> amps(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k)
    amps[static_cast<std::size_t>(k)] = poly[static_cast<std::size_t>(k)] / majorana_weight(j, k);
  return SpinState(j, std::move(amps));
}

SpinState rotate_state(const SpinState &psi, const EulerAngles &e) {
  const Spin j = psi.spin();
  const int d = j.dimension();
  const std::vector<double> small_d = wigner_small_d_matrix(j, e.beta);
  std::vector<complex> out(static_cast<std::size_t>(d), 0.0);
  for (int r = 0; r < d; ++r) {
    const double mp = Projection::from_index(j, r).value();
    complex acc = 0.0;
    for (int col = 0; col < d; ++col) {
      const double m = Projection::from_index(j, col).value();
      acc += small_d[static_cast<std::size_t>(r * d + col)] * std::polar(1.0, -m * e.gamma) *
             psi.amplitudes()[static_cast<std::size_t>(col)];
    }
    out[static_cast<std::size_t>(r)] = std::polar(1.0, -mp * e.alpha) * acc;
  }
  return SpinState(j, std::move(out));
}

Constellation rotate_constellation(const Constellation &c,
                                   const std::array<double, 9> &r) {
  std::vector<Star> stars;
  stars.reserve(c.size());
  for (const Star &s : c.stars())
    stars.push_back(Star::from_cartesian(rotate_vector(r, s.cartesian())));
  return Constellation(std::move(stars));
}

Constellation rotate_constellation(const Constellation &c, const EulerAngles &e) {
  return rotate_constellation(c, rotation_matrix(e));
}

GramSpectrum gram_spectrum(const Constellation &c) {
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  for (const Vec3 &v : c.cartesian()) {
    const Eigen::Vector3d x(v[0], v[1], v[2]);
    g += x * x.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(g, Eigen::EigenvaluesOnly);
  const auto &ev = solver.eigenvalues(); // ascending
  GramSpectrum out;
  for (int i = 0; i < 3; ++i)
    out.eigenvalues[static_cast<std::size_t>(i)] = std::max(0.0, ev(2 - i));
  return out;
}

double alignment_residual(const Constellation &c1, const Constellation &c2) {
  if (c1.size() != c2.size())
    return std::numeric_limits<double>::infinity();
  if (c1.size() == 0)
    return 0.0;
  const std::vector<Vec3> v = c1.cartesian();
  const std::vector<Vec3> w = c2.cartesian();
  const std::size_t n = v.size();

  // Anchor pair in c1: star 0 and the star least collinear with it.
  std::size_t b = 0;
  double best_cross = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const Vec3 x = cross(v[0], v[i]);
    const double s = std::sqrt(dot(x, x));
    if (s > best_cross) {
      best_cross = s;
      b = i;
    }
  }

  double best = std::numeric_limits<double>::infinity();
  if (best_cross < 1e-6) {
    // All stars on one axis: the image of star 0 fixes the rotation up to
    // a spin about that axis, which the residual does not see.
    for (std::size_t k = 0; k < n; ++k)
      best = std::min(best, residual_for(rotation_between(v[0], w[k]), v, w));
    return best;
  }

  const double anchor_dot = dot(v[0], v[b]);
  const Matrix3 from = frame(v[0], v[b]);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      if (k == l)
        continue;
      const double target_dot = dot(w[k], w[l]);
      if (std::abs(target_dot - anchor_dot) > 0.1)
        continue;
      const Vec3 x = cross(w[k], w[l]);
      if (std::sqrt(dot(x, x)) < 1e-9)
        continue;
      const Matrix3 to = frame(w[k], w[l]);
      best = std::min(best, residual_for(multiply_transpose(to, from), v, w));
    }
  return best;
}

bool constellations_equivalent(const Constellation &c1, const Constellation &c2,
                               double tol) {
  if (c1.size() != c2.size())
    return false;
  const GramSpectrum s1 = gram_spectrum(c1), s2 = gram_spectrum(c2);
  for (std::size_t i = 0; i < 3; ++i)
    if (std::abs(s1.eigenvalues[i] - s2.eigenvalues[i]) > tol)
      return false;
  return alignment_residual(c1, c2) < tol;
}

double coulomb_energy(const Constellation &c) {
  const std::vector<Vec3> v = c.cartesian();
  double energy = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t k = i + 1; k < v.size(); ++k) {
      const double d = distance(v[i], v[k]);
      if (d < 1e-12)
        return std::numeric_limits<double>::infinity();
      energy += 1.0 / d;
    }
  return energy;
}

double matched_distance(const Constellation &c1, const Constellation &c2) {
  if (c1.size() != c2.size())
    return std::numeric_limits<double>::infinity();
  if (c1.size() == 0)
    return 0.0;
  return match_stars(c1.cartesian(), c2.cartesian()).max_distance;
}

} // namespace spinwig
