#pragma once

#include <string>

#include "qsclab/state.hpp"

namespace qsclab::sim {

/// JSON state files:
///   { "layout": [{"label": "M", "dim": 2}, ...],
///     "reject_extended": false,
///     "kind": "pure" | "density",
///     "data": [[re, im], ...] }
/// Density data is row-major; pure data is the amplitude vector.
std::string state_to_json(const DensityState& s);
DensityState state_from_json(const std::string& text);

void save_state(const DensityState& s, const std::string& path);
DensityState load_state(const std::string& path);

} // namespace qsclab::sim
