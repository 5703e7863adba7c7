#pragma once

// Deterministic file output: CSV with '.' decimal separator and
// shortest-round-trip doubles, JSON with stable key order. Identical
// inputs produce byte-identical files.

#include <string>
#include <vector>

#include "sslab/mc_engine.hpp"
#include "sslab/pide_solver.hpp"

#include <json.hpp>

namespace sslab {

using Json = nlohmann::ordered_json;

// Locale-independent shortest representation that round-trips.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string value_field_csv(const ValueField& field);
std::string simulation_results_csv(const std::vector<std::string>& labels,
                                   const std::vector<SimulationResult>& results);
std::string exit_table_csv(const ExitTable& table);
void write_json_file(const std::string& path, const Json& j);

}  // namespace sslab
