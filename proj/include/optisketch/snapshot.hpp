#pragma once

// Versioned JSON snapshot of a projector. Matrices are not stored: the
// configuration (including seed, stream and any calibrated saturation) is
// enough to regenerate a bit-identical projector.

#include <json.hpp>

#include "optisketch/projection.hpp"

namespace optisketch {

inline constexpr int kSnapshotVersion = 1;

nlohmann::json to_json(const ProjectionConfig& config);
ProjectionConfig config_from_json(const nlohmann::json& j);

nlohmann::json snapshot(const Projector& projector);
Projector restore(const nlohmann::json& snapshot);

}  // namespace optisketch
