#include "measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "errors.hpp"
#include "nelder_mead.hpp"
#include "phasespace.hpp"

namespace spinwig {

double anticoherence_measure(const SpinState &psi, int M) {
  if (M < 1 || M > psi.spin().twice())
    throw Error(ErrorCode::InvalidArgument,
                "anticoherence order must lie in 1.." + std::to_string(psi.spin().twice()));
  const MultipoleCoeffs rho = multipole_coeffs(psi);
  double a = 0.0;
  for (int K = 1; K <= M; ++K)
    for (int q = -K; q <= K; ++q)
      a += std::norm(rho(K, q));
  return a;
}

std::vector<double> anticoherence_profile(const SpinState &psi) {
  const MultipoleCoeffs rho = multipole_coeffs(psi);
  std::vector<double> out;
  double a = 0.0;
  for (int K = 1; K <= psi.spin().twice(); ++K) {
    for (int q = -K; q <= K; ++q)
      a += std::norm(rho(K, q));
    out.push_back(a);
  }
  return out;
}

Vec3 spin_expectation(const SpinState &psi) {
  const Spin j = psi.spin();
  const double jj = j.value();
  const auto a = psi.amplitudes();
  complex jplus = 0.0;
  double jz = 0.0;
  for (int i = 0; i < j.dimension(); ++i) {
    const double m = Projection::from_index(j, i).value();
    jz += m * std::norm(a[static_cast<std::size_t>(i)]);
    if (i + 1 < j.dimension())
      jplus += std::sqrt(jj * (jj + 1) - m * (m + 1)) *
               std::conj(a[static_cast<std::size_t>(i + 1)]) * a[static_cast<std::size_t>(i)];
  }
  return {jplus.real(), jplus.imag(), jz};
}

double linear_entropy_one_qubit(const SpinState &psi) {
  const Vec3 jv = spin_expectation(psi);
  const double j = psi.spin().value();
  const double r2 = (jv[0] * jv[0] + jv[1] * jv[1] + jv[2] * jv[2]) / (j * j);
  return std::clamp(0.5 * (1.0 - r2), 0.0, 0.5);
}

HusimiMaximum husimi_maximum(const SpinState &psi) {
  constexpr int n_theta = 64, n_phi = 128, n_best = 8;
  struct Cell {
    double q, theta, phi;
  };
  std::vector<Cell> cells;
  cells.reserve(n_theta * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double theta = kPi * (i + 0.5) / n_theta;
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2 * kPi * k / n_phi;
      cells.push_back({husimi_eval(psi, theta, phi), theta, phi});
    }
  }
  std::partial_sort(cells.begin(), cells.begin() + n_best, cells.end(),
                    [](const Cell &a, const Cell &b) { return a.q > b.q; });
  NelderMeadOptions opts;
  opts.initial_step = 0.5 * kPi / n_theta;
  opts.f_tol = 1e-14;
  opts.x_tol = 1e-9;
  opts.max_evals = 4000;
  const Objective f = [&](std::span<const double> x) { return -husimi_eval(psi, x[0], x[1]); };
  HusimiMaximum best{cells.front().q, cells.front().theta, cells.front().phi};
  for (int c = 0; c < n_best; ++c) {
    const auto r = nelder_mead(f, {cells[static_cast<std::size_t>(c)].theta,
                                   cells[static_cast<std::size_t>(c)].phi},
                               opts);
    if (-r.f > best.q) {
      const Star s = Star::canonical(r.x[0], r.x[1]);
      best = {-r.f, s.theta, s.phi};
    }
  }
  best.q = std::min(best.q, 1.0);
  return best;
}

double geometric_entanglement(const SpinState &psi) {
  return std::clamp(1.0 - husimi_maximum(psi).q, 0.0, 1.0);
}

MeasureReport measure_report(const SpinState &psi, double rel_tol) {
  MeasureReport r;
  r.spin = psi.spin();
  r.negativity = negativity(psi, rel_tol);
  r.anticoherence = anticoherence_profile(psi);
  r.geometric_entanglement = geometric_entanglement(psi);
  r.linear_entropy = linear_entropy_one_qubit(psi);
  r.coulomb_energy = coulomb_energy(state_to_constellation(psi));
  return r;
}

SpinState NamedState::state() const {
  if (const auto *amps = std::get_if<std::vector<complex>>(&definition))
    return SpinState(spin, *amps);
  return constellation_to_state(std::get<Constellation>(definition));
}

Constellation square_pyramid(double theta_base) {
  std::vector<Star> s{{0.0, 0.0}};
  for (int k = 0; k < 4; ++k)
    s.push_back(Star::canonical(theta_base, 0.5 * kPi * k));
  return Constellation(s);
}

Constellation two_triangles(double theta1, double theta2) {
  std::vector<Star> s{{0.0, 0.0}};
  for (double t : {theta1, theta2})
    for (int k = 0; k < 3; ++k)
      s.push_back(Star::canonical(t, 2 * kPi * k / 3));
  return Constellation(s);
}

Constellation regular_tetrahedron() {
  const double t = 2.0 * std::acos(1.0 / std::sqrt(3.0));
  return Constellation({{0, 0}, {t, 0}, {t, 2 * kPi / 3}, {t, 4 * kPi / 3}});
}

namespace {

Constellation from_vectors(const std::vector<Vec3> &v) {
  std::vector<Star> s;
  for (const Vec3 &x : v)
    s.push_back(Star::from_cartesian(x));
  return Constellation(s);
}

Constellation cube() {
  std::vector<Vec3> v;
  for (int a : {-1, 1})
    for (int b : {-1, 1})
      for (int c : {-1, 1})
        v.push_back({double(a), double(b), double(c)});
  return from_vectors(v);
}

Constellation icosahedron() {
  const double g = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Vec3> v;
  for (int a : {-1, 1})
    for (int b : {-1, 1}) {
      v.push_back({0.0, double(a), b * g});
      v.push_back({double(a), b * g, 0.0});
      v.push_back({b * g, 0.0, double(a)});
    }
  return from_vectors(v);
}

Constellation stars(std::initializer_list<Star> s) { return Constellation(std::vector<Star>(s)); }

// Extremal constellations, stored under 2j.
const std::map<int, Constellation> &extremal_constellations() {
  static const std::map<int, Constellation> table = [] {
    const double t = 2.0 * std::acos(1.0 / std::sqrt(3.0));
    std::map<int, Constellation> m;
    m[2] = stars({{0, 0}, {kPi, 0}});
    m[3] = stars({{0, 0}, {2 * kPi / 3, 0}, {2 * kPi / 3, kPi}});
    m[4] = stars({{0, 0}, {t, 0}, {t, 2 * kPi / 3}, {t, 4 * kPi / 3}});
    m[5] = stars({{0, 0}, {1.66, 0}, {1.43, 2.21}, {2.86, 2.23}, {1.65, 4.43}});
    m[6] = stars({{0, 0}, {1.62, 0}, {1.71, 2.03}, {1.71, 4.25}, {2.02, 4.54}, {2.02, 1.75}});
    m[7] = stars({{0, 0}, {1.97, 0}, {1.83, 2.18}, {2.07, 4.51}, {1.83, 4.09}, {2.06, 1.76},
                  {0.43, 6.25}});
    return m;
  }();
  return table;
}

// Dicke coefficients of the extremal states, m = -j..j.
const std::map<int, std::vector<complex>> &extremal_amplitudes() {
  static const std::map<int, std::vector<complex>> table = [] {
    using c = complex;
    std::map<int, std::vector<complex>> m;
    m[2] = {0, 1, 0};
    m[3] = {0, -std::sqrt(3.0) / 2, 0, 0.5};
    m[4] = {0, std::sqrt(2.0 / 3.0), 0, 0, 1 / std::sqrt(3.0)};
    m[5] = {0, c(-0.594, 0.373), c(0.090, 0.034), c(0.053, 0.200), c(-0.391, 0.507), 0.216};
    m[6] = {0, c(0.743, -0.001), -0.02, 0.156, 0.37, -0.111, 0.523};
    m[7] = {0,
            c(0.299, -0.008),
            c(0.687, -0.006),
            c(-0.227, -0.005),
            c(0.299, -0.001),
            c(0.215, -0.003),
            c(-0.074, -0.005),
            0.496};
    return m;
  }();
  return table;
}

std::vector<complex> basis(Spin j, std::initializer_list<std::pair<int, complex>> terms) {
  std::vector<complex> a(static_cast<std::size_t>(j.dimension()));
  for (const auto &[twice_m, v] : terms)
    a[static_cast<std::size_t>(Projection(twice_m).index_in(j))] += v;
  return a;
}

Spin require_spin(const std::string &name, std::optional<Spin> spin) {
  if (!spin || spin->twice() < 1)
    throw Error(ErrorCode::InvalidArgument, "state '" + name + "' needs a spin");
  return *spin;
}

std::vector<double> parse_numbers(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw Error(ErrorCode::Parse, "bad number '" + item + "'");
    }
  }
  return out;
}

} // namespace

NamedState named_state(const std::string &name, std::optional<Spin> spin) {
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
  const double r2 = 1.0 / std::sqrt(2.0);

  if (head == "coherent") {
    const Spin j = require_spin(name, spin);
    return {name, j, "spin coherent state |j,j>", basis(j, {{j.twice(), 1.0}})};
  }
  if (head == "ghz") {
    const Spin j = require_spin(name, spin);
    return {name, j, "(|j,j> + |j,-j>)/sqrt2", basis(j, {{j.twice(), r2}, {-j.twice(), r2}})};
  }
  if (head == "w") {
    const Spin j = require_spin(name, spin);
    return {name, j, "W state |j,j-1>", basis(j, {{j.twice() - 2, 1.0}})};
  }
  if (head == "dicke") {
    const Spin j = require_spin(name, spin);
    const bool negative = !arg.empty() && arg[0] == '-';
    Projection m;
    try {
      m = Projection((negative ? -1 : 1) * Spin::parse(arg.substr(negative ? 1 : 0)).twice());
    } catch (const std::exception &) {
      throw Error(ErrorCode::Parse, "bad projection in '" + name + "'");
    }
    if (!m.valid_for(j))
      throw Error(ErrorCode::InvalidArgument, "projection out of range in '" + name + "'");
    return {name, j, "Dicke state |j,m>", basis(j, {{m.twice(), 1.0}})};
  }
  if (head == "tetrahedron")
    return {name, Spin(4), "(1/sqrt3)|2,2> + sqrt(2/3)|2,-1>",
            basis(Spin(4), {{4, 1 / std::sqrt(3.0)}, {-2, std::sqrt(2.0 / 3.0)}})};
  if (head == "octahedron")
    return {name, Spin(6), "(|3,2> + |3,-2>)/sqrt2", basis(Spin(6), {{4, r2}, {-4, r2}})};
  if (head == "cube")
    return {name, Spin(8), "vertices of a cube", cube()};
  if (head == "icosahedron")
    return {name, Spin(12), "vertices of an icosahedron", icosahedron()};
  if (head == "pyramid") {
    const auto v = arg.empty() ? std::vector<double>{1.841} : parse_numbers(arg);
    if (v.size() != 1)
      throw Error(ErrorCode::Parse, "pyramid takes one base angle");
    return {name, Spin(5), "square pyramid, apex at the pole", square_pyramid(v[0])};
  }
  if (head == "two-triangles") {
    const auto v = parse_numbers(arg);
    if (v.size() != 2)
      throw Error(ErrorCode::Parse, "two-triangles takes two polar angles");
    return {name, Spin(7), "pole plus two parallel equilateral triangles",
            two_triangles(v[0], v[1])};
  }
  if (head.rfind("max-dicke-", 0) == 0 || head.rfind("max-", 0) == 0) {
    const bool dicke = head.rfind("max-dicke-", 0) == 0;
    Spin j;
    try {
      j = Spin::parse(head.substr(dicke ? 10 : 4));
    } catch (const std::exception &) {
      throw Error(ErrorCode::UnknownName, "unknown state '" + name + "'");
    }
    if (dicke) {
      const auto &t = extremal_amplitudes();
      if (const auto it = t.find(j.twice()); it != t.end())
        return {name, j, "maximally negative state, Dicke coefficients", it->second};
    } else {
      const auto &t = extremal_constellations();
      if (const auto it = t.find(j.twice()); it != t.end())
        return {name, j, "maximally negative constellation", it->second};
    }
  }
  throw Error(ErrorCode::UnknownName, "unknown state '" + name + "'");
}

std::vector<NamedState> catalog() {
  std::vector<NamedState> out;
  for (const char *n : {"tetrahedron", "octahedron", "cube", "icosahedron", "pyramid"})
    out.push_back(named_state(n));
  for (int tj = 2; tj <= 7; ++tj) {
    out.push_back(named_state("max-" + Spin(tj).to_string()));
    out.push_back(named_state("max-dicke-" + Spin(tj).to_string()));
  }
  for (int tj = 1; tj <= 12; ++tj)
    for (const char *n : {"coherent", "ghz", "w"})
      out.push_back(named_state(n, Spin(tj)));
  return out;
}

} // namespace spinwig
