#pragma once

#include "dirand/referee.hpp"

#include <json.hpp>

#include <string>

// Versioned JSON and per-block CSV forms of a protocol transcript.
namespace dirand::referee {

inline constexpr const char* kTranscriptSchema = "dirand.transcript";
inline constexpr int kTranscriptVersion = 1;

nlohmann::ordered_json params_to_json(const ProtocolAParams& p);
nlohmann::ordered_json params_to_json(const ProtocolBParams& p);
ProtocolAParams params_a_from_json(const nlohmann::ordered_json& j);
ProtocolBParams params_b_from_json(const nlohmann::ordered_json& j);

// Outputs are hex, MSB = round 1 of the block.
nlohmann::ordered_json to_json(const Transcript& t);
// Throws std::invalid_argument on schema or version mismatch.
Transcript transcript_from_json(const nlohmann::ordered_json& j);

// index,bell,x,y,mismatches,mismatch_rate,passed
std::string blocks_csv(const Transcript& t);

} // namespace dirand::referee
