#include "spinwig/spinwig.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "errors.hpp"
#include "io.hpp"
#include "measures.hpp"
#include "phasespace.hpp"
#include "random.hpp"
#include "search.hpp"

struct sw_state {
  spinwig::SpinState psi;
};

namespace {

using spinwig::Error;
using spinwig::ErrorCode;
using json = spinwig::io::json;

thread_local std::string last_error;

sw_status fail(sw_status code, const std::string &message) {
  last_error = message;
  return code;
}

template <class F> sw_status guarded(F &&body) {
  try {
    last_error.clear();
    body();
    return SW_OK;
  } catch (const Error &e) {
    return fail(static_cast<sw_status>(e.code()), e.what());
  } catch (const json::exception &e) {
    return fail(SW_ERR_PARSE, e.what());
  } catch (const std::invalid_argument &e) {
    return fail(SW_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range &e) {
    return fail(SW_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc &) {
    return fail(SW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(SW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SW_ERR_INTERNAL, "unknown failure");
  }
}

void require(bool ok, const char *what) {
  if (!ok)
    throw Error(ErrorCode::InvalidArgument, what);
}

char *copy_out(const std::string &s) {
  char *p = static_cast<char *>(std::malloc(s.size() + 1));
  if (!p)
    throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void emit(char **out, const std::string &s) {
  if (out)
    *out = copy_out(s);
}

sw_state *wrap(spinwig::SpinState psi) { return new sw_state{std::move(psi)}; }

json parse_request(const char *request) {
  require(request != nullptr, "request is null");
  try {
    json r = json::parse(request);
    if (!r.is_object())
      throw Error(ErrorCode::Parse, "request must be a JSON object");
    return r;
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::Parse, std::string("malformed request: ") + e.what());
  }
}

template <class T> T field(const json &r, const char *key, T fallback) {
  if (!r.contains(key) || r[key].is_null())
    return fallback;
  try {
    return r[key].get<T>();
  } catch (const json::exception &) {
    throw Error(ErrorCode::Parse, std::string("field \"") + key + "\" has the wrong type");
  }
}

spinwig::Spin request_spin(const json &r) {
  const int tj = field<int>(r, "twice_j", 0);
  require(tj >= 1, "request needs a positive \"twice_j\"");
  return spinwig::Spin(tj);
}

spinwig::SearchOptions search_options(const json &r) {
  spinwig::SearchOptions o;
  o.n_starts = field<int>(r, "starts", o.n_starts);
  o.seed = field<std::uint64_t>(r, "seed", o.seed);
  o.threads = field<int>(r, "threads", 0);
  o.rel_tol = field<double>(r, "tol", o.rel_tol);
  require(o.n_starts >= 1, "starts must be positive");
  require(o.rel_tol > 0.0 && o.rel_tol < 1.0, "tol must lie in (0, 1)");
  require(o.threads >= 0, "threads must be non-negative");
  return o;
}

std::vector<double> axis(int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i)
    v.push_back(spinwig::kPi * i / (n - 1));
  return v;
}

json pyramid_result(const json &r, std::string &table) {
  const int n = field<int>(r, "grid", 91);
  require(n >= 5, "grid must be at least 5");
  const double tol = field<double>(r, "tol", 1e-6);
  const auto sweep = spinwig::sweep_pyramid(axis(n), tol);
  table = spinwig::io::sweep_csv("theta_base", sweep);
  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < sweep.size(); ++i)
    if (sweep[i].negativity >= sweep[i - 1].negativity &&
        sweep[i].negativity >= sweep[i + 1].negativity &&
        (best == 0 || sweep[i].negativity > sweep[best].negativity))
      best = i;
  json out = {{"twice_j", 5}, {"constraint", "pyramid"}, {"w_state_negativity", sweep.back().negativity}};
  if (best == 0)
    return out;
  const auto peak = spinwig::pyramid_local_max(sweep[best - 1].parameter,
                                               sweep[best + 1].parameter, std::min(tol, 1e-7));
  out["theta_base"] = peak.parameter;
  out["negativity"] = peak.negativity;
  out["stars"] = spinwig::io::to_json(spinwig::square_pyramid(peak.parameter))["stars"];
  return out;
}

json triangles_result(const json &r, std::string &table) {
  const int n = field<int>(r, "grid", 61);
  require(n >= 5, "grid must be at least 5");
  const auto land = spinwig::sweep_two_triangles(axis(n), axis(n), 64, field<int>(r, "threads", 0));
  table = spinwig::io::landscape_csv(land);
  const auto best = spinwig::two_triangles_max(land, field<double>(r, "tol", 1e-6));
  json out = spinwig::io::to_json(best);
  out["twice_j"] = 7;
  out["constraint"] = "two-triangles";
  out["negativity"] = best.value;
  out["stars"] = spinwig::io::to_json(spinwig::two_triangles(best.theta1, best.theta2))["stars"];
  out["anticoherence_min"] = spinwig::io::to_json(spinwig::two_triangles_anticoherence_min(2));
  return out;
}

} // namespace

extern "C" {

const char *sw_version(void) { return "0.1.0"; }

const char *sw_last_error(void) { return last_error.c_str(); }

void sw_free(char *text) { std::free(text); }

sw_status sw_parse_spin(const char *text, int *twice_j) {
  return guarded([&] {
    require(text && twice_j, "null argument");
    const spinwig::Spin j = spinwig::Spin::parse(text);
    require(j.twice() >= 1, "spin must be positive");
    *twice_j = j.twice();
  });
}

sw_status sw_state_from_amplitudes(int twice_j, const double *re_im, size_t n_amps,
                                   sw_state **out) {
  return guarded([&] {
    require(out && (re_im || n_amps == 0), "null argument");
    require(twice_j >= 1, "twice_j must be positive");
    require(n_amps == static_cast<size_t>(twice_j) + 1, "amplitude count must be 2j + 1");
    std::vector<spinwig::complex> a;
    for (size_t i = 0; i < n_amps; ++i)
      a.emplace_back(re_im[2 * i], re_im[2 * i + 1]);
    *out = wrap(spinwig::SpinState(spinwig::Spin(twice_j), std::move(a)));
  });
}

sw_status sw_state_from_stars(const double *theta_phi, size_t n_stars, sw_state **out) {
  return guarded([&] {
    require(out && theta_phi, "null argument");
    require(n_stars >= 1, "need at least one star");
    std::vector<spinwig::Star> s;
    for (size_t i = 0; i < n_stars; ++i)
      s.push_back(spinwig::Star::canonical(theta_phi[2 * i], theta_phi[2 * i + 1]));
    *out = wrap(spinwig::constellation_to_state(spinwig::Constellation(std::move(s))));
  });
}

sw_status sw_state_from_json(const char *text, sw_state **out) {
  return guarded([&] {
    require(text && out, "null argument");
    auto parsed = spinwig::io::parse_state_text(text);
    if (auto *c = std::get_if<spinwig::Constellation>(&parsed))
      *out = wrap(spinwig::constellation_to_state(*c));
    else
      *out = wrap(std::get<spinwig::SpinState>(std::move(parsed)));
  });
}

sw_status sw_state_named(const char *name, int twice_j, sw_state **out) {
  return guarded([&] {
    require(name && out, "null argument");
    std::optional<spinwig::Spin> spin;
    if (twice_j > 0)
      spin = spinwig::Spin(twice_j);
    *out = wrap(spinwig::named_state(name, spin).state());
  });
}

void sw_state_destroy(sw_state *state) { delete state; }

sw_status sw_state_twice_j(const sw_state *state, int *twice_j) {
  return guarded([&] {
    require(state && twice_j, "null argument");
    *twice_j = state->psi.spin().twice();
  });
}

sw_status sw_state_amplitudes(const sw_state *state, double *re_im, size_t capacity) {
  return guarded([&] {
    require(state && re_im, "null argument");
    const auto a = state->psi.amplitudes();
    require(capacity >= a.size(), "buffer too small");
    for (size_t i = 0; i < a.size(); ++i) {
      re_im[2 * i] = a[i].real();
      re_im[2 * i + 1] = a[i].imag();
    }
  });
}

sw_status sw_state_stars(const sw_state *state, double *theta_phi, size_t capacity) {
  return guarded([&] {
    require(state && theta_phi, "null argument");
    const auto c = spinwig::state_to_constellation(state->psi);
    require(capacity >= c.size(), "buffer too small");
    for (size_t i = 0; i < c.size(); ++i) {
      theta_phi[2 * i] = c.stars()[i].theta;
      theta_phi[2 * i + 1] = c.stars()[i].phi;
    }
  });
}

sw_status sw_state_to_json(const sw_state *state, int as_stars, char **out) {
  return guarded([&] {
    require(state && out, "null argument");
    const json doc = as_stars ? spinwig::io::to_json(spinwig::state_to_constellation(state->psi))
                              : spinwig::io::to_json(state->psi);
    emit(out, doc.dump());
  });
}

sw_status sw_state_fidelity(const sw_state *a, const sw_state *b, double *out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    require(a->psi.spin() == b->psi.spin(), "states have different spins");
    *out = a->psi.fidelity(b->psi);
  });
}

sw_status sw_state_rotate(const sw_state *state, double alpha, double beta, double gamma,
                          sw_state **out) {
  return guarded([&] {
    require(state && out, "null argument");
    *out = wrap(spinwig::rotate_state(state->psi, {alpha, beta, gamma}));
  });
}

sw_status sw_negativity(const sw_state *state, double rel_tol, double *out) {
  return guarded([&] {
    require(state && out, "null argument");
    require(rel_tol > 0.0 && rel_tol < 1.0, "rel_tol must lie in (0, 1)");
    *out = spinwig::negativity(state->psi, rel_tol);
  });
}

sw_status sw_negativity_report(const sw_state *state, double rel_tol, char **out) {
  return guarded([&] {
    require(state && out, "null argument");
    require(rel_tol > 0.0 && rel_tol < 1.0, "rel_tol must lie in (0, 1)");
    spinwig::NegativityOptions o;
    o.rel_tol = rel_tol;
    json doc = spinwig::io::to_json(spinwig::negativity_report(state->psi, o));
    doc["twice_j"] = state->psi.spin().twice();
    doc["rel_tol"] = rel_tol;
    emit(out, doc.dump());
  });
}

sw_status sw_wigner_at(const sw_state *state, double theta, double phi, double *out) {
  return guarded([&] {
    require(state && out, "null argument");
    *out = spinwig::wigner_at(state->psi, theta, phi);
  });
}

sw_status sw_wigner_grid(const sw_state *state, int n_theta, int n_phi, sw_format format,
                         char **out) {
  return guarded([&] {
    require(state && out, "null argument");
    require(n_theta >= 1 && n_phi >= 1, "grid sizes must be positive");
    const spinwig::SphereGrid grid(state->psi.spin(), n_theta, n_phi);
    const auto field = spinwig::wigner_eval(state->psi, grid);
    emit(out, format == SW_FORMAT_CSV ? spinwig::io::wigner_csv(grid, field)
                                      : spinwig::io::wigner_json(grid, field).dump());
  });
}

sw_status sw_measures(const sw_state *state, double rel_tol, char **out) {
  return guarded([&] {
    require(state && out, "null argument");
    require(rel_tol > 0.0 && rel_tol < 1.0, "rel_tol must lie in (0, 1)");
    const auto report = spinwig::measure_report(state->psi, rel_tol);
    json doc = spinwig::io::to_json(report);
    // A_M never exceeds its value for a coherent state.
    const auto top = spinwig::anticoherence_profile(
        spinwig::SpinState::dicke(state->psi.spin(), spinwig::Projection(state->psi.spin().twice())));
    json maximal = json::array();
    for (std::size_t m = 0; m < top.size(); ++m)
      maximal.push_back(report.anticoherence[m] >= top[m] - 1e-12);
    doc["anticoherence_maximal"] = maximal;
    emit(out, doc.dump());
  });
}

sw_status sw_catalog(char **out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    json list = json::array();
    for (const auto &n : spinwig::catalog())
      list.push_back({{"name", n.name}, {"twice_j", n.spin.twice()}, {"description", n.description}});
    emit(out, list.dump());
  });
}

sw_status sw_search(const char *request, char **out, char **table) {
  if (table)
    *table = nullptr;
  return guarded([&] {
    require(out != nullptr, "null argument");
    const json r = parse_request(request);
    const std::string mode = field<std::string>(r, "constraint", "none");
    std::string csv;
    json doc;
    if (mode == "pyramid") {
      require(field<int>(r, "twice_j", 5) == 5, "the pyramid family has spin 5/2");
      doc = pyramid_result(r, csv);
    } else if (mode == "two-triangles") {
      require(field<int>(r, "twice_j", 7) == 7, "the two-triangles family has spin 7/2");
      doc = triangles_result(r, csv);
    } else if (mode == "polish") {
      require(r.contains("start"), "polish needs a \"start\" constellation");
      doc = spinwig::io::to_json(spinwig::polish_negativity(
          spinwig::io::parse_constellation(r["start"]), search_options(r)));
    } else if (mode == "thomson") {
      const spinwig::Spin j = request_spin(r);
      auto o = search_options(r);
      if (!r.contains("starts"))
        o.n_starts = 50;
      const auto t = spinwig::minimize_coulomb(j.twice(), o);
      doc = spinwig::io::to_json(t);
      doc["negativity"] = spinwig::negativity(spinwig::constellation_to_state(t.constellation),
                                              o.rel_tol);
    } else {
      const spinwig::Spin j = request_spin(r);
      const auto o = search_options(r);
      if (mode == "none")
        doc = spinwig::io::to_json(spinwig::maximize_negativity(j, o));
      else if (mode == "minimize")
        doc = spinwig::io::to_json(spinwig::minimize_negativity(j, o));
      else if (mode == "tetra-snap")
        doc = spinwig::io::to_json(spinwig::maximize_with_tetra_snap(j, o));
      else
        throw Error(ErrorCode::InvalidArgument, "unknown constraint '" + mode + "'");
    }
    doc["constraint"] = mode;
    emit(out, doc.dump());
    if (table && !csv.empty())
      *table = copy_out(csv);
  });
}

sw_status sw_sample(const char *request, char **out, char **histogram) {
  if (histogram)
    *histogram = nullptr;
  return guarded([&] {
    require(out != nullptr, "null argument");
    const json r = parse_request(request);
    const spinwig::Spin j = request_spin(r);
    const int n = field<int>(r, "n", 20000);
    const auto seed = field<std::uint64_t>(r, "seed", 1);
    const int bins = field<int>(r, "bins", 100);
    const std::string measure = field<std::string>(r, "measure", "negativity");
    require(n >= 1, "n must be positive");
    require(bins >= 1, "bins must be positive");
    spinwig::SampleOptions o;
    o.threads = field<int>(r, "threads", 0);
    require(o.threads >= 0, "threads must be non-negative");

    spinwig::BatchStats stats;
    double reference = 0.0;
    std::string source;
    if (measure == "negativity") {
      stats = spinwig::negativity_batch(j, n, seed, o);
      reference = spinwig::reference_max_negativity(j);
      source = reference > 0.0 ? "table" : "sample";
      if (reference <= 0.0)
        reference = stats.max;
    } else if (measure == "entropy") {
      stats = spinwig::entropy_batch(j, n, seed, o);
      reference = 0.5;
      source = "bound";
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown measure '" + measure + "'");
    }
    const auto h = spinwig::make_histogram(stats.values, bins, 0.0, std::max(reference, stats.max));
    json doc = spinwig::io::to_json(stats);
    doc["measure"] = measure;
    doc["reference_max"] = reference;
    doc["reference_source"] = source;
    doc["fraction_within_2pct"] = stats.fraction_within(2.0, reference);
    doc["histogram_peak"] = h.peak();
    doc["bins"] = bins;
    emit(out, doc.dump());
    if (histogram)
      *histogram = copy_out(spinwig::io::histogram_csv(h));
  });
}

} // extern "C"
