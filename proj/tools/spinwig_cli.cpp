#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "spinwig/spinwig.h"

using json = nlohmann::json;

namespace {

enum Exit { Ok = 0, Internal = 1, ParseFailure = 2, Invalid = 3, NoConvergence = 4 };

struct Failure {
  int code;
  std::string message;
};

int exit_code(sw_status s) {
  switch (s) {
  case SW_OK:
    return Ok;
  case SW_ERR_PARSE:
    return ParseFailure;
  case SW_ERR_NOT_CONVERGED:
    return NoConvergence;
  case SW_ERR_INTERNAL:
    return Internal;
  default:
    return Invalid;
  }
}

void check(sw_status s) {
  if (s != SW_OK)
    throw Failure{exit_code(s), sw_last_error()};
}

struct StateDeleter {
  void operator()(sw_state *s) const { sw_state_destroy(s); }
};
using State = std::unique_ptr<sw_state, StateDeleter>;

std::string take(char *p) {
  std::string s = p ? p : "";
  sw_free(p);
  return s;
}

struct Globals {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string threads = "auto";
  double tol = 1e-6;
  std::string output;
  std::string format;
};

int thread_count(const Globals &g) {
  if (g.threads == "auto")
    return 0;
  try {
    std::size_t used = 0;
    const int n = std::stoi(g.threads, &used);
    if (used == g.threads.size() && n >= 1)
      return n;
  } catch (const std::exception &) {
  }
  throw Failure{ParseFailure, "--threads expects a positive integer or \"auto\""};
}

void check_tol(const Globals &g) {
  if (!(g.tol > 0.0 && g.tol < 1.0))
    throw Failure{Invalid, "--tol must lie in (0, 1)"};
}

std::string format_or(const Globals &g, const std::string &fallback,
                      std::initializer_list<const char *> allowed) {
  const std::string f = g.format.empty() ? fallback : g.format;
  for (const char *a : allowed)
    if (f == a)
      return f;
  throw Failure{Invalid, "format '" + f + "' is not available for this command"};
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw Failure{Invalid, "cannot write '" + path + "'"};
}

void emit(const Globals &g, const std::string &text) {
  if (g.output.empty())
    std::cout << text;
  else
    write_file(g.output, text);
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Failure{Invalid, "cannot read '" + path + "'"};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int parse_spin(const std::string &text) {
  int tj = 0;
  if (sw_parse_spin(text.c_str(), &tj) != SW_OK)
    throw Failure{ParseFailure, std::string("bad spin '") + text + "': " + sw_last_error()};
  return tj;
}

struct ResolvedState {
  State state;
  bool from_stars = false;
  bool named = false;
};

ResolvedState resolve_state(const std::string &spec, const std::string &spin) {
  const int tj = spin.empty() ? 0 : parse_spin(spin);
  auto from_name = [&](const std::string &name) {
    sw_state *s = nullptr;
    const sw_status st = sw_state_named(name.c_str(), tj, &s);
    return std::pair{st, State(s)};
  };
  auto from_file = [&](const std::string &path) {
    const std::string text = read_file(path);
    sw_state *s = nullptr;
    check(sw_state_from_json(text.c_str(), &s));
    ResolvedState r{State(s)};
    try {
      r.from_stars = json::parse(text).contains("stars");
    } catch (const json::exception &) {
    }
    return r;
  };
  if (spec.rfind("name:", 0) == 0) {
    auto [st, s] = from_name(spec.substr(5));
    check(st);
    return {std::move(s), false, true};
  }
  if (spec.rfind("file:", 0) == 0)
    return from_file(spec.substr(5));
  auto [st, s] = from_name(spec);
  if (st == SW_OK)
    return {std::move(s), false, true};
  if (st == SW_ERR_UNKNOWN_NAME && std::ifstream(spec).good())
    return from_file(spec);
  check(st);
  return {};
}

json state_json(const sw_state *s, bool as_stars) {
  char *out = nullptr;
  check(sw_state_to_json(s, as_stars ? 1 : 0, &out));
  return json::parse(take(out));
}

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// Infinite values (coincident stars) arrive as null.
std::string number(const json &v) { return v.is_number() ? number(v.get<double>()) : "inf"; }

std::string spin_label(int tj) {
  return tj % 2 == 0 ? std::to_string(tj / 2) : std::to_string(tj) + "/2";
}

// ---- subcommands ----------------------------------------------------------

struct ConvertArgs {
  std::string state, spin, to = "auto";
  bool roundtrip = false;
};

void run_convert(const Globals &g, const ConvertArgs &a) {
  const ResolvedState r = resolve_state(a.state, a.spin);
  bool as_stars = a.to == "stars" || (a.to == "auto" && !r.from_stars);
  json out = state_json(r.state.get(), as_stars);
  if (a.roundtrip) {
    sw_state *back = nullptr;
    check(sw_state_from_json(out.dump().c_str(), &back));
    State b(back);
    double f = 0.0;
    check(sw_state_fidelity(r.state.get(), b.get(), &f));
    out["roundtrip_fidelity"] = f;
  }
  format_or(g, "json", {"json"});
  emit(g, out.dump(2) + "\n");
}

struct StateArgs {
  std::string state, spin;
};

void run_negativity(const Globals &g, const StateArgs &a) {
  check_tol(g);
  const ResolvedState r = resolve_state(a.state, a.spin);
  char *out = nullptr;
  check(sw_negativity_report(r.state.get(), g.tol, &out));
  const json doc = json::parse(take(out));
  const std::string f = format_or(g, "table", {"table", "json", "csv"});
  if (f == "json")
    return emit(g, doc.dump(2) + "\n");
  std::string text;
  if (f == "csv") {
    text = "n_theta,estimate\n";
    for (const auto &l : doc["levels"])
      text += std::to_string(l["n_theta"].get<int>()) + ',' + number(l["estimate"]) + '\n';
    return emit(g, text);
  }
  text = "spin " + spin_label(doc["twice_j"]) + ", " + std::to_string(doc["panels"].get<int>()) +
         " theta panels\n";
  for (const auto &l : doc["levels"])
    text += "  n_theta " + std::to_string(l["n_theta"].get<int>()) + "  " + number(l["estimate"]) + "\n";
  text += "negativity " + number(doc["negativity"]) + "  (rel_tol " + number(g.tol) + ")\n";
  emit(g, text);
}

struct SearchArgs {
  std::string spin, constraint = "none", start, table;
  int starts = 0, grid = 0;
};

void run_search(const Globals &g, const SearchArgs &a) {
  check_tol(g);
  json req = {{"constraint", a.constraint}, {"seed", g.seed}, {"threads", thread_count(g)},
              {"tol", g.tol}};
  if (!a.spin.empty())
    req["twice_j"] = parse_spin(a.spin);
  if (a.starts > 0)
    req["starts"] = a.starts;
  if (a.grid > 0)
    req["grid"] = a.grid;
  if (!a.start.empty()) {
    const ResolvedState r = resolve_state(a.start, a.spin);
    req["start"] = state_json(r.state.get(), true);
    if (a.constraint == "none")
      req["constraint"] = "polish";
  }
  char *out = nullptr, *table = nullptr;
  check(sw_search(req.dump().c_str(), &out, &table));
  const json doc = json::parse(take(out));
  const std::string csv = take(table);
  if (!a.table.empty()) {
    if (csv.empty())
      throw Failure{Invalid, "constraint '" + a.constraint + "' produces no table"};
    write_file(a.table, csv);
  }
  if (format_or(g, "json", {"json", "csv"}) == "csv") {
    if (csv.empty())
      throw Failure{Invalid, "constraint '" + a.constraint + "' produces no table"};
    return emit(g, csv);
  }
  emit(g, doc.dump(2) + "\n");
}

struct SampleArgs {
  std::string spin, measure = "negativity", histogram, stats;
  int n = 20000, bins = 100;
};

void run_sample(const Globals &g, const SampleArgs &a) {
  if (a.spin.empty())
    throw Failure{ParseFailure, "--spin is required"};
  const json req = {{"twice_j", parse_spin(a.spin)}, {"n", a.n},         {"seed", g.seed},
                    {"threads", thread_count(g)},    {"bins", a.bins},   {"measure", a.measure}};
  char *out = nullptr, *hist = nullptr;
  check(sw_sample(req.dump().c_str(), &out, &hist));
  const json doc = json::parse(take(out));
  const std::string csv = take(hist);
  if (!g.seed_given)
    std::cerr << "seed " << g.seed << "\n";
  if (format_or(g, "json", {"json", "csv"}) == "csv") {
    if (!a.stats.empty())
      write_file(a.stats, doc.dump(2) + "\n");
    return emit(g, csv);
  }
  if (!a.histogram.empty())
    write_file(a.histogram, csv);
  emit(g, doc.dump(2) + "\n");
}

struct MeasuresArgs {
  std::string state, spin;
  bool all = false;
};

std::string measures_row(const std::string &name, const json &m) {
  std::string a;
  for (std::size_t i = 0; i < m["anticoherence"].size(); ++i)
    a += (i ? " " : "") + number(m["anticoherence"][i]);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-22s %5s %12s %12s %12s %14s  ", name.c_str(),
                spin_label(m["twice_j"]).c_str(), number(m["negativity"]).c_str(),
                number(m["geometric_entanglement"]).c_str(), number(m["linear_entropy"]).c_str(),
                number(m["coulomb_energy"]).c_str());
  return buf + a + "\n";
}

void run_measures(const Globals &g, const MeasuresArgs &a) {
  check_tol(g);
  std::vector<std::pair<std::string, State>> states;
  if (a.all) {
    char *cat = nullptr;
    check(sw_catalog(&cat));
    const int tj = a.spin.empty() ? 0 : parse_spin(a.spin);
    for (const auto &e : json::parse(take(cat))) {
      if (tj > 0 && e["twice_j"] != tj)
        continue;
      sw_state *s = nullptr;
      check(sw_state_named(e["name"].get<std::string>().c_str(), e["twice_j"], &s));
      states.emplace_back(e["name"].get<std::string>(), State(s));
    }
  } else {
    if (a.state.empty())
      throw Failure{ParseFailure, "--state or --all is required"};
    states.emplace_back(a.state, resolve_state(a.state, a.spin).state);
  }
  const std::string f = format_or(g, "table", {"table", "json"});
  json all = json::array();
  std::string text;
  if (f == "table") {
    char head[256];
    std::snprintf(head, sizeof head, "%-22s %5s %12s %12s %12s %14s  %s\n", "state", "j",
                  "negativity", "E_G", "S_L", "coulomb", "A_1..A_2j");
    text = head;
  }
  for (auto &[name, s] : states) {
    char *out = nullptr;
    check(sw_measures(s.get(), g.tol, &out));
    json m = json::parse(take(out));
    m["name"] = name;
    if (f == "table")
      text += measures_row(name, m);
    all.push_back(std::move(m));
  }
  if (f == "json")
    text = (states.size() == 1 ? all[0] : all).dump(2) + "\n";
  emit(g, text);
}

struct WignerArgs {
  std::string state, spin;
  int grid = 64, phi = 0;
};

void run_wigner(const Globals &g, const WignerArgs &a) {
  const ResolvedState r = resolve_state(a.state, a.spin);
  if (a.grid < 1 || a.phi < 0)
    throw Failure{Invalid, "grid sizes must be positive"};
  const std::string f = format_or(g, "csv", {"csv", "json"});
  char *out = nullptr;
  check(sw_wigner_grid(r.state.get(), a.grid, a.phi > 0 ? a.phi : 2 * a.grid,
                       f == "csv" ? SW_FORMAT_CSV : SW_FORMAT_JSON, &out));
  std::string text = take(out);
  if (f == "json")
    text = json::parse(text).dump() + "\n";
  emit(g, text);
}

void run_catalog(const Globals &g) {
  char *out = nullptr;
  check(sw_catalog(&out));
  const json cat = json::parse(take(out));
  if (format_or(g, "table", {"table", "json"}) == "json")
    return emit(g, cat.dump(2) + "\n");
  std::string text;
  for (const auto &e : cat) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-18s %5s  %s\n", e["name"].get<std::string>().c_str(),
                  spin_label(e["twice_j"]).c_str(), e["description"].get<std::string>().c_str());
    text += buf;
  }
  emit(g, text);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Wigner negativity of spin states"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  if (const char *env = std::getenv("SPINWIG_THREADS"))
    g.threads = env;
  app.add_option("--seed", g.seed, "master seed for stochastic commands");
  app.add_option("--threads", g.threads, "worker threads: integer or \"auto\"");
  app.add_option("--tol", g.tol, "relative tolerance of converged negativities");
  app.add_option("--output,-o", g.output, "write the main output here instead of stdout");
  app.add_option("--format", g.format, "json | csv | table (defaults depend on the command)")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  const char *state_help = "name:<catalog name>, file:<path>, or either without prefix";

  ConvertArgs conv;
  auto *c = app.add_subcommand("convert", "Dicke amplitudes <-> Majorana constellation");
  c->add_option("--state,state", conv.state, state_help)->required();
  c->add_option("--spin", conv.spin, "spin for spin-parameterized names");
  c->add_option("--to", conv.to, "auto | amps | stars")->check(CLI::IsMember({"auto", "amps", "stars"}));
  c->add_flag("--roundtrip", conv.roundtrip, "convert back and report the fidelity");

  StateArgs neg;
  auto *n = app.add_subcommand("negativity", "converged Wigner negativity with refinement log");
  n->add_option("--state,state", neg.state, state_help)->required();
  n->add_option("--spin", neg.spin, "spin for spin-parameterized names");

  SearchArgs srch;
  auto *s = app.add_subcommand("search", "multi-start search for extremal negativity");
  s->add_option("--spin", srch.spin, "spin, e.g. 2 or 5/2 or 3.5");
  s->add_option("--starts", srch.starts, "number of random starts");
  s->add_option("--constraint", srch.constraint)
      ->check(CLI::IsMember({"none", "tetra-snap", "pyramid", "two-triangles", "minimize", "thomson"}));
  s->add_option("--start", srch.start, "polish from this constellation (state spec)");
  s->add_option("--grid", srch.grid, "sweep points per axis for family constraints");
  s->add_option("--table", srch.table, "write the sweep or landscape CSV here");

  SampleArgs smp;
  auto *sm = app.add_subcommand("sample", "statistics over Haar-random states");
  sm->add_option("--spin", smp.spin, "spin")->required();
  sm->add_option("--n", smp.n, "number of samples");
  sm->add_option("--bins", smp.bins, "histogram bins");
  sm->add_option("--measure", smp.measure)->check(CLI::IsMember({"negativity", "entropy"}));
  sm->add_option("--histogram", smp.histogram, "write the histogram CSV here (json format)");
  sm->add_option("--stats", smp.stats, "write the statistics JSON here (csv format)");

  MeasuresArgs mea;
  auto *m = app.add_subcommand("measures", "negativity, anticoherence, E_G, S_L, coulomb energy");
  m->add_option("--state,state", mea.state, state_help);
  m->add_option("--spin", mea.spin, "spin for spin-parameterized names (or filter for --all)");
  m->add_flag("--all", mea.all, "every catalog state");

  WignerArgs wig;
  auto *w = app.add_subcommand("wigner", "Wigner function on a sphere grid");
  w->add_option("--state,state", wig.state, state_help)->required();
  w->add_option("--spin", wig.spin, "spin for spin-parameterized names");
  w->add_option("--grid", wig.grid, "theta rings");
  w->add_option("--phi", wig.phi, "phi points per ring (default 2 x grid)");

  auto *cat = app.add_subcommand("catalog", "list named states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return ParseFailure;
  }
  g.seed_given = app.count("--seed") > 0;

  try {
    if (*c)
      run_convert(g, conv);
    else if (*n)
      run_negativity(g, neg);
    else if (*s)
      run_search(g, srch);
    else if (*sm)
      run_sample(g, smp);
    else if (*m)
      run_measures(g, mea);
    else if (*w)
      run_wigner(g, wig);
    else if (*cat)
      run_catalog(g);
  } catch (const Failure &f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const json::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return Internal;
  }
  return Ok;
}
