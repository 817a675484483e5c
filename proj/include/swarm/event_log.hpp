#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "swarm/engine.hpp"

namespace swarm {

// Line-delimited JSON event log.
//
// Line 1 (header):
//   {"kind":"header","schema":"beacon-swarm-eventlog","version":1,
//    "rng":..., "code_version":..., "seed":..., "snapshot_every":...,
//    "params":{...}, "arena":{...}[, "extensions":{...}]}
//   The extensions block is present only when the extension is enabled.
// Following lines, one per step starting at step 0 (initial state):
//   {"kind":"step","step":k,
//    "agents":[[id,x,y,heading,mode,released(,w_f1,w_f2,u1x,u1y,u2x,u2y)],...],
//    "transitions":[[id,from,to],...], "drift":[[id,vx,vy],...],
//    "coverage_gaps":n}
//   "agents" is present only on snapshot steps, "drift" only when non-empty.
//   Modes are "B", "F1", "F2"; beacon rows carry the six stored values.

inline constexpr const char* kLogSchemaName = "beacon-swarm-eventlog";

nlohmann::json to_json(const SimParams& p);
SimParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Arena& a);
Arena arena_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExtensionParams& e);
ExtensionParams extensions_from_json(const nlohmann::json& j);

std::string header_line(const LogHeader& header);
std::string record_line(const StepRecord& record);

void write_event_log(std::ostream& out, const EventLog& log);
std::string to_jsonl(const EventLog& log);

/// Throws swarm::Error on malformed input or a schema version mismatch
/// (the message names both versions).
EventLog read_event_log(std::istream& in);
EventLog load_event_log(const std::filesystem::path& path);

/// Writes to `<path>.tmp` and renames into place.
void save_event_log(const std::filesystem::path& path, const EventLog& log);

}  // namespace swarm
