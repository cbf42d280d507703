#include "io.hpp"

#include <cstdio>

#include "errors.hpp"

namespace spinwig::io {

namespace {

json stars_json(const Constellation &c) {
  json stars = json::array();
  for (const Star &s : c.stars())
    stars.push_back({s.theta, s.phi});
  return stars;
}

json spectrum_json(const GramSpectrum &g) {
  return json::array({g.eigenvalues[0], g.eigenvalues[1], g.eigenvalues[2]});
}

int read_twice_j(const json &doc) {
  if (!doc.contains("twice_j") || !doc["twice_j"].is_number_integer())
    throw Error(ErrorCode::Parse, "missing integer field \"twice_j\"");
  const int tj = doc["twice_j"].get<int>();
  if (tj < 1)
    throw Error(ErrorCode::InvalidArgument, "twice_j must be positive");
  return tj;
}

std::pair<double, double> read_pair(const json &v, const char *what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw Error(ErrorCode::Parse, std::string("each ") + what + " entry must be a pair of numbers");
  return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

json to_json(const SpinState &psi) {
  json amps = json::array();
  for (const complex &a : psi.amplitudes())
    amps.push_back({a.real(), a.imag()});
  return {{"twice_j", psi.spin().twice()}, {"amps", amps}};
}

json to_json(const Constellation &c) {
  return {{"twice_j", static_cast<int>(c.size())}, {"stars", stars_json(c)}};
}

SpinState parse_spin_state(const json &doc) {
  if (!doc.is_object() || !doc.contains("amps") || !doc["amps"].is_array())
    throw Error(ErrorCode::Parse, "missing array field \"amps\"");
  const json &amps = doc["amps"];
  if (amps.empty())
    throw Error(ErrorCode::ZeroState, "zero state: empty amplitude list");
  const int tj = read_twice_j(doc);
  if (amps.size() != static_cast<std::size_t>(tj + 1))
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(tj + 1) +
                                                " amplitudes for twice_j = " +
                                                std::to_string(tj) + ", got " +
                                                std::to_string(amps.size()));
  std::vector<complex> a;
  for (const json &v : amps) {
    const auto [re, im] = read_pair(v, "amps");
    a.emplace_back(re, im);
  }
  return SpinState(Spin(tj), std::move(a));
}

Constellation parse_constellation(const json &doc) {
  if (!doc.is_object() || !doc.contains("stars") || !doc["stars"].is_array())
    throw Error(ErrorCode::Parse, "missing array field \"stars\"");
  const int tj = read_twice_j(doc);
  const json &stars = doc["stars"];
  if (stars.size() != static_cast<std::size_t>(tj))
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(tj) +
                                                " stars for twice_j = " + std::to_string(tj) +
                                                ", got " + std::to_string(stars.size()));
  std::vector<Star> s;
  for (const json &v : stars) {
    const auto [theta, phi] = read_pair(v, "stars");
    s.push_back(Star::canonical(theta, phi));
  }
  return Constellation(std::move(s));
}

std::variant<SpinState, Constellation> parse_state_document(const json &doc) {
  if (!doc.is_object())
    throw Error(ErrorCode::Parse, "state document must be a JSON object");
  const bool has_amps = doc.contains("amps"), has_stars = doc.contains("stars");
  if (has_amps == has_stars)
    throw Error(ErrorCode::Parse, "state document needs exactly one of \"amps\" or \"stars\"");
  if (has_amps)
    return parse_spin_state(doc);
  return parse_constellation(doc);
}

std::variant<SpinState, Constellation> parse_state_text(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::Parse, std::string("malformed JSON: ") + e.what());
  }
  return parse_state_document(doc);
}

json to_json(const NegativityReport &r) {
  json levels = json::array();
  for (std::size_t i = 0; i < r.estimates.size(); ++i)
    levels.push_back({{"n_theta", r.n_theta[i]}, {"estimate", r.estimates[i]}});
  return {{"negativity", r.value}, {"panels", r.panels}, {"levels", levels}};
}

json to_json(const MeasureReport &r) {
  return {{"twice_j", r.spin.twice()},
          {"negativity", r.negativity},
          {"anticoherence", r.anticoherence},
          {"geometric_entanglement", r.geometric_entanglement},
          {"linear_entropy", r.linear_entropy},
          {"coulomb_energy", r.coulomb_energy}};
}

json to_json(const SearchOutcome &s) {
  json clusters = json::array();
  for (const ClusterSummary &c : s.clusters)
    clusters.push_back({{"negativity", c.value},
                        {"members", c.members},
                        {"spectrum", spectrum_json(c.spectrum)},
                        {"stars", stars_json(c.constellation)}});
  return {{"twice_j", static_cast<int>(s.constellation.size())},
          {"negativity", s.negativity},
          {"stars", stars_json(s.constellation)},
          {"amps", to_json(constellation_to_state(s.constellation))["amps"]},
          {"spectrum", spectrum_json(s.spectrum)},
          {"n_starts", s.n_starts},
          {"n_converged_to_best", s.n_converged_to_best},
          {"seed", s.seed},
          {"clusters", clusters}};
}

json to_json(const ThomsonOutcome &t) {
  return {{"twice_j", static_cast<int>(t.constellation.size())},
          {"energy", t.energy},
          {"stars", stars_json(t.constellation)},
          {"spectrum", spectrum_json(gram_spectrum(t.constellation))}};
}

json to_json(const TrianglePoint &p) {
  return {{"theta1", p.theta1},
          {"theta2", p.theta2},
          {"value", p.value},
          {"axial_separation", p.axial_separation}};
}

json to_json(const BatchStats &s, bool include_values) {
  json out = {{"twice_j", s.spin.twice()}, {"n", s.n_samples}, {"seed", s.seed},
              {"mean", s.mean},            {"std", s.std},     {"min", s.min},
              {"max", s.max}};
  if (include_values)
    out["values"] = s.values;
  return out;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string histogram_csv(const Histogram &h) {
  std::string out = "bin_left,bin_right,count\n";
  const double w = h.bin_width();
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out += format_number(h.lo + w * static_cast<double>(b)) + ',';
    out += format_number(h.lo + w * static_cast<double>(b + 1)) + ',';
    out += std::to_string(h.counts[b]) + '\n';
  }
  return out;
}

std::string wigner_csv(const SphereGrid &grid, const WignerField &field) {
  std::string out = "theta,phi,W\n";
  for (int i = 0; i < grid.n_theta(); ++i)
    for (int k = 0; k < grid.n_phi(); ++k)
      out += format_number(grid.theta(i)) + ',' + format_number(grid.phi(k)) + ',' +
             format_number(field.at(i, k)) + '\n';
  return out;
}

json wigner_json(const SphereGrid &grid, const WignerField &field) {
  json theta = json::array(), phi = json::array(), rows = json::array();
  for (int i = 0; i < grid.n_theta(); ++i)
    theta.push_back(grid.theta(i));
  for (int k = 0; k < grid.n_phi(); ++k)
    phi.push_back(grid.phi(k));
  for (int i = 0; i < grid.n_theta(); ++i) {
    json row = json::array();
    for (int k = 0; k < grid.n_phi(); ++k)
      row.push_back(field.at(i, k));
    rows.push_back(std::move(row));
  }
  return {{"twice_j", grid.spin().twice()}, {"theta", theta}, {"phi", phi}, {"W", rows}};
}

std::string sweep_csv(const std::string &parameter, const std::vector<SweepPoint> &points) {
  std::string out = parameter + ",negativity\n";
  for (const SweepPoint &p : points)
    out += format_number(p.parameter) + ',' + format_number(p.negativity) + '\n';
  return out;
}

std::string landscape_csv(const TriangleLandscape &land) {
  std::string out = "theta1,theta2,negativity\n";
  for (std::size_t i = 0; i < land.theta1.size(); ++i)
    for (std::size_t k = 0; k < land.theta2.size(); ++k)
      out += format_number(land.theta1[i]) + ',' + format_number(land.theta2[k]) + ',' +
             format_number(land.at(i, k)) + '\n';
  return out;
}

std::string spin32_csv(const std::vector<Spin32Point> &points) {
  std::string out = "theta1,theta2,phi,negativity\n";
  for (const Spin32Point &p : points)
    out += format_number(p.theta1) + ',' + format_number(p.theta2) + ',' +
           format_number(p.phi) + ',' + format_number(p.negativity) + '\n';
  return out;
}

} // namespace spinwig::io
