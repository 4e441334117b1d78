#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "consensus_lab/consensus.hpp"
#include "consensus_lab/delay_analysis.hpp"
#include "consensus_lab/graph.hpp"
#include "consensus_lab/harness.hpp"

namespace consensus_lab {

/// "%.17g" — enough digits to round-trip a double exactly.
std::string fmt17(double v);

// Graph JSON: {"n": int, "edges": [[i, j, w?], ...]} with 1-based agents
// and weight defaulting to 1.0.
Graph graph_from_json(const std::string& text);
Graph load_graph_file(const std::string& path);
nlohmann::json graph_to_json(const Graph& g);

// Trace CSV: header "k,x_1,...,x_n,e", one row per round.
std::string trace_to_csv(const RunTrace& trace);
RunTrace trace_from_csv(const std::string& text);

nlohmann::json trace_summary_json(const RunTrace& trace, bool stable,
                                  double empirical_factor, bool factor_is_noise);

nlohmann::json delay_report_to_json(const DelayReport& report);

// Regression estimates CSV: header "k,ahat_1,...,ahat_n,e".
std::string regression_to_csv(const RegressionTrace& trace);

// Dataset CSV: header "x,y", one pair per row.
std::pair<std::vector<double>, std::vector<double>> dataset_from_csv(
    const std::string& text);
std::string dataset_to_csv(const std::vector<double>& xs, const std::vector<double>& ys);

// Partition file: JSON list of agent indices, one per data row (0-based).
std::vector<int> partition_from_json(const std::string& text);

std::string read_file(const std::string& path);
/// Writes through a temp file in the same directory plus rename, so readers
/// never observe a half-written file.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace consensus_lab
