#include "search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "errors.hpp"
#include "measures.hpp"
#include "nelder_mead.hpp"
#include "parallel.hpp"
#include "phasespace.hpp"
#include "random.hpp"

namespace spinwig {

int gauge_dimension(Spin j) { return j.twice() >= 2 ? 2 * j.twice() - 3 : 0; }

Constellation gauge_constellation(Spin j, std::span<const double> p) {
  std::vector<Star> s{{0.0, 0.0}};
  if (j.twice() >= 2)
    s.push_back(Star::canonical(p[0], 0.0));
  for (int k = 2; k < j.twice(); ++k)
    s.push_back(Star::canonical(p[static_cast<std::size_t>(2 * k - 3)],
                                p[static_cast<std::size_t>(2 * k - 2)]));
  return Constellation(s);
}

std::vector<double> gauge_params(const Constellation &c) {
  if (c.size() < 2)
    return {};
  const Star first = c.stars()[0];
  const Constellation tilted = rotate_constellation(c, EulerAngles{0.0, -first.theta, -first.phi});
  const double phi2 = tilted.stars()[1].phi;
  const Constellation g = rotate_constellation(tilted, EulerAngles{-phi2, 0.0, 0.0});
  std::vector<double> p{g.stars()[1].theta};
  for (std::size_t k = 2; k < g.size(); ++k) {
    p.push_back(g.stars()[k].theta);
    p.push_back(g.stars()[k].phi);
  }
  return p;
}

namespace {

enum class Goal { MaxNegativity, MinNegativity, Coulomb };

struct Problem {
  Goal goal;
  int dim;
  std::function<Constellation(std::span<const double>)> build;
  std::function<std::vector<double>(std::mt19937_64 &)> initial;
};

// Minimized by the optimizer.
double staged_objective(Goal goal, const Constellation &c, int order) {
  switch (goal) {
  case Goal::MaxNegativity:
    return -negativity_fixed(constellation_to_state(c), order);
  case Goal::MinNegativity:
    return negativity_fixed(constellation_to_state(c), order);
  case Goal::Coulomb:
    return coulomb_energy(c);
  }
  return 0.0;
}

double final_objective(Goal goal, const Constellation &c, double rel_tol) {
  switch (goal) {
  case Goal::MaxNegativity:
    return -negativity(constellation_to_state(c), rel_tol);
  case Goal::MinNegativity:
    return negativity(constellation_to_state(c), rel_tol);
  case Goal::Coulomb:
    return coulomb_energy(c);
  }
  return 0.0;
}

double spectrum_distance(const GramSpectrum &a, const GramSpectrum &b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    d = std::max(d, std::abs(a.eigenvalues[i] - b.eigenvalues[i]));
  return d;
}

bool better(double fa, const GramSpectrum &sa, double fb, const GramSpectrum &sb) {
  if (fa != fb)
    return fa < fb;
  return sa.eigenvalues < sb.eigenvalues;
}

struct Candidate {
  std::vector<double> x;
  double f = 0.0;
  Constellation c;
  GramSpectrum spectrum;
  int members = 1;
};

NelderMeadOptions polish_box(const std::vector<double> &x0, const SearchOptions &opts) {
  NelderMeadOptions nm;
  for (double v : x0) {
    const double half = std::max(opts.box_fraction * std::abs(v), opts.box_floor);
    nm.lower.push_back(v - half);
    nm.upper.push_back(v + half);
  }
  return nm;
}

// Stage one: fixed theta order inside the box around x0.
Candidate polish(const Problem &problem, const std::vector<double> &x0,
                 const SearchOptions &opts) {
  NelderMeadOptions nm = polish_box(x0, opts);
  nm.f_tol = problem.goal == Goal::Coulomb ? 1e-13 : 1e-11;
  nm.x_tol = 1e-7;
  nm.max_evals = 400 * std::max(problem.dim, 1) + 2000;
  nm.initial_step = opts.box_floor;
  const int order = opts.polish_order;
  const auto r = nelder_mead(
      [&](std::span<const double> x) {
        return staged_objective(problem.goal, problem.build(x), order);
      },
      x0, nm);
  Candidate out;
  out.x = r.x;
  out.c = problem.build(r.x);
  out.f = final_objective(problem.goal, out.c, opts.rel_tol);
  out.spectrum = gram_spectrum(out.c);
  return out;
}

// Stage two: breakpoint panels, accurate enough to place flat maxima.
Candidate refine(const Problem &problem, const Candidate &start, const std::vector<double> &box_centre,
                 const SearchOptions &opts) {
  if (problem.goal == Goal::Coulomb)
    return start;
  NelderMeadOptions nm = polish_box(box_centre, opts);
  nm.f_tol = 1e-12;
  nm.x_tol = 1e-8;
  nm.max_evals = 200 * std::max(problem.dim, 1) + 600;
  nm.initial_step = 0.25 * opts.box_floor;
  nm.max_restarts = 1;
  const double sign = problem.goal == Goal::MaxNegativity ? -1.0 : 1.0;
  const auto r = nelder_mead(
      [&](std::span<const double> x) {
        return sign * negativity_panels(constellation_to_state(problem.build(x)), 64);
      },
      start.x, nm);
  Candidate out = start;
  Constellation c = problem.build(r.x);
  const double f = final_objective(problem.goal, c, opts.rel_tol);
  if (f <= start.f) {
    out.x = r.x;
    out.c = std::move(c);
    out.f = f;
    out.spectrum = gram_spectrum(out.c);
  }
  return out;
}

SearchOutcome run_search(const Problem &problem, const SearchOptions &opts) {
  const int n_starts = std::max(opts.n_starts, 1);
  std::vector<Candidate> explored(static_cast<std::size_t>(n_starts));
  NelderMeadOptions nm;
  nm.initial_step = 0.3;
  nm.f_tol = 1e-8;
  nm.x_tol = 1e-4;
  nm.max_evals = 300 * std::max(problem.dim, 1) + 1000;
  nm.max_restarts = 1;
  parallel_for(n_starts, opts.threads, [&](int s) {
    auto rng = substream(opts.seed, static_cast<std::uint64_t>(s));
    const auto r = nelder_mead(
        [&](std::span<const double> x) {
          return staged_objective(problem.goal, problem.build(x), opts.explore_order);
        },
        problem.initial(rng), nm);
    Candidate &c = explored[static_cast<std::size_t>(s)];
    c.x = r.x;
    c.f = r.f;
    c.c = problem.build(r.x);
    c.spectrum = gram_spectrum(c.c);
  });

  std::vector<std::size_t> order(explored.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return better(explored[a].f, explored[a].spectrum, explored[b].f, explored[b].spectrum);
  });
  std::vector<Candidate> clusters;
  for (std::size_t idx : order) {
    const Candidate &e = explored[idx];
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Candidate &c) {
      return spectrum_distance(c.spectrum, e.spectrum) <= opts.explore_cluster_tol;
    });
    if (it == clusters.end())
      clusters.push_back(e);
    else
      ++it->members;
  }

  const std::size_t n_polish =
      std::min(clusters.size(), static_cast<std::size_t>(std::max(opts.polish_clusters, 1)));
  std::vector<Candidate> polished(n_polish);
  parallel_for(static_cast<int>(n_polish), opts.threads, [&](int k) {
    polished[static_cast<std::size_t>(k)] =
        polish(problem, clusters[static_cast<std::size_t>(k)].x, opts);
    polished[static_cast<std::size_t>(k)].members = clusters[static_cast<std::size_t>(k)].members;
  });
  double best_f = std::numeric_limits<double>::infinity();
  for (const Candidate &p : polished)
    best_f = std::min(best_f, p.f);
  std::vector<int> near;
  for (std::size_t k = 0; k < polished.size(); ++k)
    if (polished[k].f <= best_f + 1e-3 * std::abs(best_f))
      near.push_back(static_cast<int>(k));
  parallel_for(static_cast<int>(near.size()), opts.threads, [&](int i) {
    const auto k = static_cast<std::size_t>(near[static_cast<std::size_t>(i)]);
    polished[k] = refine(problem, polished[k], clusters[k].x, opts);
  });
  for (std::size_t k = n_polish; k < clusters.size(); ++k) {
    Candidate rest = clusters[k];
    rest.f = final_objective(problem.goal, rest.c, opts.rel_tol);
    polished.push_back(rest);
  }

  std::stable_sort(polished.begin(), polished.end(), [](const Candidate &a, const Candidate &b) {
    return better(a.f, a.spectrum, b.f, b.spectrum);
  });
  std::vector<Candidate> merged;
  for (const Candidate &p : polished) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Candidate &c) {
      return spectrum_distance(c.spectrum, p.spectrum) <= opts.cluster_tol;
    });
    if (it == merged.end())
      merged.push_back(p);
    else
      it->members += p.members;
  }

  const double sign = problem.goal == Goal::MaxNegativity ? -1.0 : 1.0;
  SearchOutcome out;
  out.constellation = merged.front().c;
  out.negativity = sign * merged.front().f;
  out.spectrum = merged.front().spectrum;
  out.n_starts = n_starts;
  out.n_converged_to_best = merged.front().members;
  out.seed = opts.seed;
  for (const Candidate &m : merged)
    out.clusters.push_back({m.c, sign * m.f, m.spectrum, m.members});
  return out;
}

std::vector<double> random_gauge_point(Spin j, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 2 * kPi);
  std::vector<double> x;
  if (j.twice() >= 2)
    x.push_back(std::acos(u(rng)));
  for (int k = 2; k < j.twice(); ++k) {
    x.push_back(std::acos(u(rng)));
    x.push_back(p(rng));
  }
  return x;
}

Problem gauge_problem(Spin j, Goal goal) {
  return {goal, gauge_dimension(j),
          [j](std::span<const double> x) { return gauge_constellation(j, x); },
          [j](std::mt19937_64 &rng) { return random_gauge_point(j, rng); }};
}

void require_spin(Spin j) {
  if (j.twice() < 1)
    throw Error(ErrorCode::InvalidArgument, "spin must be at least 1/2");
}

} // namespace

SearchOutcome maximize_negativity(Spin j, const SearchOptions &opts) {
  require_spin(j);
  return run_search(gauge_problem(j, Goal::MaxNegativity), opts);
}

SearchOutcome minimize_negativity(Spin j, const SearchOptions &opts) {
  require_spin(j);
  return run_search(gauge_problem(j, Goal::MinNegativity), opts);
}

SearchOutcome maximize_with_tetra_snap(Spin j, const SearchOptions &opts) {
  if (j.twice() < 4)
    throw Error(ErrorCode::InvalidArgument, "tetrahedron snap needs 2j >= 4");
  const int free = j.twice() - 4;
  const Constellation tet = regular_tetrahedron();
  Problem problem{Goal::MaxNegativity, 3 + 2 * free,
                  [tet, free](std::span<const double> x) {
                    std::vector<Star> s =
                        rotate_constellation(tet, EulerAngles{x[0], x[1], x[2]}).stars();
                    for (int k = 0; k < free; ++k)
                      s.push_back(Star::canonical(x[static_cast<std::size_t>(3 + 2 * k)],
                                                  x[static_cast<std::size_t>(4 + 2 * k)]));
                    return Constellation(s);
                  },
                  [free](std::mt19937_64 &rng) {
                    std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 2 * kPi);
                    std::vector<double> x{p(rng), std::acos(u(rng)), p(rng)};
                    for (int k = 0; k < free; ++k) {
                      x.push_back(std::acos(u(rng)));
                      x.push_back(p(rng));
                    }
                    return x;
                  }};
  return run_search(problem, opts);
}

SearchOutcome polish_negativity(const Constellation &start, const SearchOptions &opts) {
  const Spin j = start.spin();
  require_spin(j);
  const Problem problem = gauge_problem(j, Goal::MaxNegativity);
  const std::vector<double> x0 = gauge_params(start);
  const Candidate c = refine(problem, polish(problem, x0, opts), x0, opts);
  SearchOutcome out;
  out.constellation = c.c;
  out.negativity = -c.f;
  out.spectrum = c.spectrum;
  out.n_starts = 1;
  out.n_converged_to_best = 1;
  out.seed = opts.seed;
  out.clusters.push_back({c.c, -c.f, c.spectrum, 1});
  return out;
}

ThomsonOutcome minimize_coulomb(int n_stars, const SearchOptions &opts) {
  if (n_stars < 2)
    throw Error(ErrorCode::InvalidArgument, "Thomson problem needs at least two stars");
  SearchOptions o = opts;
  o.box_fraction = 0.05;
  const SearchOutcome r = run_search(gauge_problem(Spin(n_stars), Goal::Coulomb), o);
  return {r.constellation, r.negativity};
}

std::vector<SweepPoint> sweep_pyramid(const std::vector<double> &theta_base, double rel_tol) {
  std::vector<SweepPoint> out;
  for (double t : theta_base)
    out.push_back({t, negativity(constellation_to_state(square_pyramid(t)), rel_tol)});
  return out;
}

SweepPoint pyramid_local_max(double lo, double hi, double rel_tol) {
  const auto f = [&](double t) {
    return negativity(constellation_to_state(square_pyramid(t)), rel_tol);
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-5) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  return {t, f(t)};
}

TriangleLandscape sweep_two_triangles(const std::vector<double> &theta1,
                                      const std::vector<double> &theta2, int order,
                                      int threads) {
  TriangleLandscape l{theta1, theta2, std::vector<double>(theta1.size() * theta2.size())};
  parallel_for(static_cast<int>(l.values.size()), threads, [&](int idx) {
    const std::size_t i = static_cast<std::size_t>(idx) / theta2.size();
    const std::size_t k = static_cast<std::size_t>(idx) % theta2.size();
    l.values[static_cast<std::size_t>(idx)] =
        negativity_fixed(constellation_to_state(two_triangles(theta1[i], theta2[k])), order);
  });
  return l;
}

TrianglePoint two_triangles_max(const TriangleLandscape &l, double rel_tol) {
  const auto best = static_cast<std::size_t>(
      std::max_element(l.values.begin(), l.values.end()) - l.values.begin());
  const double t1 = l.theta1[best / l.theta2.size()];
  const double t2 = l.theta2[best % l.theta2.size()];
  NelderMeadOptions nm;
  nm.initial_step = 0.05;
  nm.f_tol = 1e-11;
  nm.x_tol = 1e-7;
  const auto r = nelder_mead(
      [](std::span<const double> x) {
        return -negativity_fixed(constellation_to_state(two_triangles(x[0], x[1])), 128);
      },
      {t1, t2}, nm);
  TrianglePoint p{r.x[0], r.x[1], 0.0, std::abs(std::cos(r.x[0]) - std::cos(r.x[1]))};
  p.value = negativity(constellation_to_state(two_triangles(p.theta1, p.theta2)), rel_tol);
  return p;
}

TrianglePoint two_triangles_anticoherence_min(int M) {
  const auto f = [M](double a, double b) {
    return anticoherence_measure(constellation_to_state(two_triangles(a, b)), M);
  };
  // Coarse grid with theta1 <= theta2, then Nelder-Mead.
  constexpr int n = 90;
  double best = std::numeric_limits<double>::infinity(), ba = 0.0, bb = 0.0;
  for (int i = 1; i < n; ++i)
    for (int k = i; k < n; ++k) {
      const double a = kPi * i / n, b = kPi * k / n;
      const double v = f(a, b);
      if (v < best) {
        best = v;
        ba = a;
        bb = b;
      }
    }
  NelderMeadOptions nm;
  nm.initial_step = 0.02;
  nm.f_tol = 1e-15;
  nm.x_tol = 1e-9;
  nm.lower = {0.0, 0.0};
  nm.upper = {kPi, kPi};
  const auto r = nelder_mead([&](std::span<const double> x) { return f(x[0], x[1]); },
                             {ba, bb}, nm);
  return {r.x[0], r.x[1], r.f, std::abs(std::cos(r.x[0]) - std::cos(r.x[1]))};
}

SpinState spin1_family_state(double eta) {
  return SpinState(Spin(2), {0.0, std::sin(eta / 2), std::sqrt(2.0) * std::cos(eta / 2)});
}

std::vector<SweepPoint> sweep_spin1_family(const std::vector<double> &eta, double rel_tol) {
  std::vector<SweepPoint> out;
  for (double e : eta)
    out.push_back({e, negativity(spin1_family_state(e), rel_tol)});
  return out;
}

SpinState spin32_family_state(double t1, double t2, double phi) {
  const double c1 = std::cos(t1 / 2), s1 = std::sin(t1 / 2);
  const double c2 = std::cos(t2 / 2), s2 = std::sin(t2 / 2);
  const complex e = std::polar(1.0, phi);
  const double r3 = std::sqrt(3.0);
  return SpinState(Spin(3), {0.0, r3 * s1 * s2 * e, r3 * (s1 * c2 + c1 * s2 * e), 3.0 * c1 * c2});
}

std::vector<Spin32Point> sweep_spin32_family(const std::vector<double> &theta1,
                                             const std::vector<double> &theta2,
                                             const std::vector<double> &phi, int order,
                                             int threads) {
  std::vector<Spin32Point> points;
  for (double p : phi)
    for (double a : theta1)
      for (double b : theta2)
        if (b >= a)
          points.push_back({a, b, p, 0.0});
  parallel_for(static_cast<int>(points.size()), threads, [&](int i) {
    Spin32Point &pt = points[static_cast<std::size_t>(i)];
    pt.negativity = negativity_fixed(spin32_family_state(pt.theta1, pt.theta2, pt.phi), order);
  });
  return points;
}

} // namespace spinwig
