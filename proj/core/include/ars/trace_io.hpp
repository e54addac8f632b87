#pragma once

// Line-delimited JSON records for generation traces: one object per query.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ars/engine.hpp"

namespace ars {

void to_json(nlohmann::json& j, const DifficultyScore& s);
void from_json(const nlohmann::json& j, DifficultyScore& s);
void to_json(nlohmann::json& j, const ReasoningMode& m);
void from_json(const nlohmann::json& j, ReasoningMode& m);
void to_json(nlohmann::json& j, const CheckpointRecord& c);
void from_json(const nlohmann::json& j, CheckpointRecord& c);
void to_json(nlohmann::json& j, const SuppressionEvent& e);
void from_json(const nlohmann::json& j, SuppressionEvent& e);
void to_json(nlohmann::json& j, const SampleRecord& s);
void from_json(const nlohmann::json& j, SampleRecord& s);
void to_json(nlohmann::json& j, const GenerationTrace& t);
void from_json(const nlohmann::json& j, GenerationTrace& t);

/// Writes one compact JSON object per line.
void write_trace_line(std::ostream& out, const GenerationTrace& trace, const nlohmann::json& extra = {});

/// Reads every record of a trace file. Throws ParseError naming the bad line.
std::vector<GenerationTrace> read_traces(const std::string& path);

}  // namespace ars
