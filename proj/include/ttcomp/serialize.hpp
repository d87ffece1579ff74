#pragma once

// JSON and CSV import/export. JSON schemas:
//   SourceModel             {"q": int, "pmfs": [[double,...],...]}
//   TypeThresholdFunction   {"q": int, "theta": [int,...], "reducer": [label,...]}
//     with label = integer | sorted array of symbols | {"sum": int, "count": int};
//     the reducer is indexed over the clipped box, coordinate 0 fastest.
//     Shorthand accepted on input: {"standard": name, "q": int, "param": int}.
//   Partition               array of arrays of 1-based sensor indices
//   RateReport              {"scheme","kind","rate","params","notes"}; an
//     unbounded rate serializes as null with "unbounded": true.
// CSV columns carry units in their names; all entropies are bits.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ttcomp/descriptions.hpp"
#include "ttcomp/partition.hpp"
#include "ttcomp/protocol.hpp"
#include "ttcomp/rates.hpp"
#include "ttcomp/source_model.hpp"
#include "ttcomp/type_threshold.hpp"

namespace ttcomp {

nlohmann::json to_json(const SourceModel& src);
SourceModel source_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Label& label);
Label label_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TypeThresholdFunction& f);
TypeThresholdFunction function_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Partition& p);  // 1-based on the wire
Partition partition_from_json(const nlohmann::json& j, int sensor_count);

nlohmann::json to_json(const RateReport& report);

// Mismatch count (always zero for a trace that was produced without
// throwing), rounds used and skipped, shifts, and per-value empirical chain
// entropies when trajectories were recorded.
nlohmann::json trace_summary_json(const ProtocolTrace& trace);

// One row per (symbol, value, step): symbol_index, value, step, u_value.
void write_description_trace_csv(std::ostream& os, const DescriptionSample& sample);

// One row per protocol round.
void write_round_trace_csv(std::ostream& os, const ProtocolTrace& trace);

// Canonical number formatting used by every CSV/JSON writer, so reruns are
// byte-identical across platforms.
std::string format_double(double x);

}  // namespace ttcomp
