#include "consensus_lab/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "consensus_lab/errors.hpp"

namespace consensus_lab {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Graph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("graph JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    fail(ErrorCode::kParseError, "graph JSON needs fields \"n\" and \"edges\"");
  if (!j["n"].is_number_integer())
    fail(ErrorCode::kParseError, "graph JSON: \"n\" must be an integer");

  int n = j["n"].get<int>();
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3)
      fail(ErrorCode::kParseError, "graph JSON: edges are [i, j] or [i, j, w]");
    if (!e[0].is_number_integer() || !e[1].is_number_integer())
      fail(ErrorCode::kParseError, "graph JSON: agent indices must be integers");
    double w = e.size() == 3 ? e[2].get<double>() : 1.0;
    // file format is 1-based; internal representation 0-based
    edges.push_back({e[0].get<int>() - 1, e[1].get<int>() - 1, w});
  }
  return build_graph(n, edges);
}

Graph load_graph_file(const std::string& path) { return graph_from_json(read_file(path)); }

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges)
    edges.push_back(nlohmann::json::array({e.a + 1, e.b + 1, e.weight}));
  return nlohmann::json{{"n", g.n}, {"edges", edges}};
}

std::string trace_to_csv(const RunTrace& trace) {
  std::ostringstream out;
  std::size_t n = trace.states.empty() ? 0 : trace.states[0].size();
  out << "k";
  for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i;
  out << ",e\n";
  for (std::size_t k = 0; k < trace.states.size(); ++k) {
    out << k;
    for (double v : trace.states[k]) out << ',' << fmt17(v);
    out << ',' << fmt17(trace.error_log[k]) << '\n';
  }
  return out.str();
}

RunTrace trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::kParseError, "trace CSV: missing header");

  RunTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(row, field, ',')) {
      try {
        values.push_back(std::stod(field));
      } catch (const std::exception&) {
        fail(ErrorCode::kParseError, "trace CSV: bad number '" + field + "'");
      }
    }
    if (values.size() < 3)
      fail(ErrorCode::kParseError, "trace CSV: row needs k, states and e");
    trace.states.emplace_back(values.begin() + 1, values.end() - 1);
    trace.error_log.push_back(values.back());
  }
  if (trace.states.empty()) fail(ErrorCode::kParseError, "trace CSV: no rows");
  return trace;
}

nlohmann::json trace_summary_json(const RunTrace& trace, bool stable,
                                  double empirical_factor, bool factor_is_noise) {
  return nlohmann::json{
      {"rounds", trace.rounds()},
      {"final_error", trace.error_log.back()},
      {"final_max_deviation", trace.max_deviation(trace.rounds())},
      {"empirical_factor", empirical_factor},
      {"factor_is_noise", factor_is_noise},
      {"unstable", !stable},
      {"overflowed", trace.overflowed},
  };
}

nlohmann::json delay_report_to_json(const DelayReport& report) {
  nlohmann::json r_d = nlohmann::json::object();
  for (const auto& [d, r] : report.r_d) r_d[std::to_string(d)] = r;
  return nlohmann::json{
      {"delta", report.delta},
      {"lambdas", report.lambdas},
      {"r_d", r_d},
      {"t_d", std::isfinite(report.t_d) ? nlohmann::json(report.t_d)
                                        : nlohmann::json()},
      {"d_bar", report.d_bar.value},
      {"unbounded", report.d_bar.unbounded},
      {"d_accel", report.d_accel.value},
      {"degenerate_modes", report.d_accel.degenerate_modes},
      {"monotone_flag", report.monotone_flag},
  };
}

std::string regression_to_csv(const RegressionTrace& trace) {
  std::ostringstream out;
  std::size_t n = trace.estimates.empty() ? 0 : trace.estimates[0].size();
  out << "k";
  for (std::size_t i = 1; i <= n; ++i) out << ",ahat_" << i;
  out << ",e\n";
  for (std::size_t k = 0; k < trace.estimates.size(); ++k) {
    out << k;
    for (double v : trace.estimates[k]) out << ',' << fmt17(v);
    out << ',' << fmt17(trace.error_log[k]) << '\n';
  }
  return out.str();
}

std::pair<std::vector<double>, std::vector<double>> dataset_from_csv(
    const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::kParseError, "dataset CSV: missing header");

  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string sx, sy;
    if (!std::getline(row, sx, ',') || !std::getline(row, sy, ','))
      fail(ErrorCode::kParseError, "dataset CSV: rows are x,y");
    try {
      xs.push_back(std::stod(sx));
      ys.push_back(std::stod(sy));
    } catch (const std::exception&) {
      fail(ErrorCode::kParseError, "dataset CSV: bad number in '" + line + "'");
    }
  }
  if (xs.empty()) fail(ErrorCode::kParseError, "dataset CSV: no rows");
  return {std::move(xs), std::move(ys)};
}

std::string dataset_to_csv(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::ostringstream out;
  out << "x,y\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << fmt17(xs[i]) << ',' << fmt17(ys[i]) << '\n';
  return out.str();
}

std::vector<int> partition_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("partition JSON: ") + e.what());
  }
  if (!j.is_array())
    fail(ErrorCode::kParseError, "partition JSON must be a list of agent indices");
  std::vector<int> partition;
  for (const auto& v : j) {
    if (!v.is_number_integer())
      fail(ErrorCode::kParseError, "partition JSON entries must be integers");
    partition.push_back(v.get<int>());
  }
  return partition;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kParseError, "cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

}  // namespace consensus_lab
