#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "parabell/optimizer.hpp"

namespace parabell {

using Json = nlohmann::ordered_json;

/// Provenance block embedded in every output document.
struct RunManifest {
    std::string command;
    OptimizerConfig config;
    std::vector<std::string> setLabels;
    std::string outputPath;
    std::string timestampUTC;
};

/// Current UTC time as ISO-8601 with a trailing Z.
std::string utc_timestamp();

Json to_json(const OptimizerConfig& config);
Json to_json(const RunManifest& manifest);
/// Amplitudes as [[re, im], ...].
Json to_json(const QuantumState& psi);
Json to_json(Complex z);

/// Per-cell comparison with the published table.
struct CellVerdict {
    double reference = 0.0;
    double deviation = 0.0;
    double epsilonSpread = 0.0;
    bool withinReference = false;
    bool epsilonStable = false;
};
CellVerdict judge_cell(const TableCell& cell, double reference);

/// `results` payload of the tables command; independent of wall-clock time.
Json tables_payload(const std::vector<TableRow>& rows, bool& all_pass);

/// Formats a double with fixed decimals (for human-readable summaries).
std::string fixed(double value, int decimals);

}  // namespace parabell
