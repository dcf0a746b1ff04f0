#pragma once

#include <string>

#include "json.hpp"
#include "vcage/sim.hpp"

namespace vcage {

// JSON conversions shared by the dataset schema and the wire protocols.
// Parse failures raise `on_error` (SchemaError for dataset lines,
// ProtocolError for wire payloads).

nlohmann::json pose_to_json(const Pose& pose);
Pose pose_from_json(const nlohmann::json& j, ErrorCode on_error);

nlohmann::json subtask_to_json(const Subtask& subtask);
Subtask subtask_from_json(const nlohmann::json& j, ErrorCode on_error);

// Compact per-step state digest stored in dataset records: object poses plus
// the discrete switch/press/held state. Key order is canonical (sorted).
nlohmann::json state_digest(const SimState& state);

// Self-contained state for the critic wire protocol: the digest plus object
// shapes, affordances, and workspace bounds, enough to re-evaluate any
// postcondition on the receiving side.
nlohmann::json wire_state(const SimState& state);
SimState state_from_wire(const nlohmann::json& j);  // throws ProtocolError

}  // namespace vcage
