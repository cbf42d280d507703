#pragma once

// JSON and CSV serialization. JSON keeps full binary64 precision; CSV rows
// are written with 9 significant digits.

#include <string>
#include <variant>

#include <json.hpp>

#include "measures.hpp"
#include "phasespace.hpp"
#include "random.hpp"
#include "search.hpp"

namespace spinwig::io {

using json = nlohmann::json;

/// {"twice_j": n, "amps": [[re, im], ...]}, amplitudes ordered m = -j..j.
json to_json(const SpinState &psi);
/// {"twice_j": n, "stars": [[theta, phi], ...]}
json to_json(const Constellation &c);

/// Reads either schema. Malformed documents throw Error(Parse); a star count
/// or amplitude count that disagrees with twice_j throws InvalidArgument; an
/// empty or all-zero amplitude list throws ZeroState.
std::variant<SpinState, Constellation> parse_state_document(const json &doc);
std::variant<SpinState, Constellation> parse_state_text(const std::string &text);
SpinState parse_spin_state(const json &doc);
Constellation parse_constellation(const json &doc);

json to_json(const NegativityReport &r);
json to_json(const MeasureReport &r);
json to_json(const SearchOutcome &s);
json to_json(const ThomsonOutcome &t);
json to_json(const TrianglePoint &p);
json to_json(const BatchStats &s, bool include_values = false);

std::string format_number(double x);

std::string histogram_csv(const Histogram &h);
std::string wigner_csv(const SphereGrid &grid, const WignerField &field);
json wigner_json(const SphereGrid &grid, const WignerField &field);
std::string sweep_csv(const std::string &parameter, const std::vector<SweepPoint> &points);
std::string landscape_csv(const TriangleLandscape &land);
std::string spin32_csv(const std::vector<Spin32Point> &points);

} // namespace spinwig::io
