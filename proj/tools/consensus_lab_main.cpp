#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "consensus_lab/errors.hpp"
#include "consensus_lab/io.hpp"

namespace cl = consensus_lab;
namespace fs = std::filesystem;

namespace {

// Exit codes are part of the CLI contract:
//   2 input parse/validation error, 3 disconnected graph, 4 stepsize out of range.
constexpr int kExitParse = 2;
constexpr int kExitDisconnected = 3;
constexpr int kExitStepsize = 4;

int exit_code_for(const cl::Error& e) {
  return e.code() == cl::ErrorCode::kStepsizeOutOfRange ? kExitStepsize : kExitParse;
}

cl::Graph load_connected_graph(const std::string& path) {
  cl::Graph g = cl::load_graph_file(path);
  if (!cl::is_connected(g)) {
    std::cerr << "error: graph in " << path << " is not connected\n";
    std::exit(kExitDisconnected);
  }
  return g;
}

void require_stepsize_range(const cl::Spectrum& spectrum, double delta) {
  if (!(delta > 0.0) || !(delta * spectrum.lambda_max() < 2.0))
    cl::fail(cl::ErrorCode::kStepsizeOutOfRange,
             "stepsize must lie in (0, 2/lambda_N) = (0, " +
                 std::to_string(2.0 / spectrum.lambda_max()) + ")");
}

// --inputs accepts a file path (one value per line or comma separated) or an
// inline comma-separated list.
cl::Vector parse_inputs(const std::string& spec, int n) {
  std::string text;
  if (fs::exists(spec))
    text = cl::read_file(spec);
  else
    text = spec;

  cl::Vector values;
  std::string token;
  for (char c : text) {
    if (c == ',' || c == '\n' || c == ' ' || c == '\t' || c == '\r') {
      if (!token.empty()) {
        try {
          values.push_back(std::stod(token));
        } catch (const std::exception&) {
          cl::fail(cl::ErrorCode::kParseError, "bad input value '" + token + "'");
        }
        token.clear();
      }
    } else {
      token += c;
    }
  }
  if (!token.empty()) {
    try {
      values.push_back(std::stod(token));
    } catch (const std::exception&) {
      cl::fail(cl::ErrorCode::kParseError, "bad input value '" + token + "'");
    }
  }
  if (static_cast<int>(values.size()) != n)
    cl::fail(cl::ErrorCode::kLengthMismatch,
             "expected " + std::to_string(n) + " inputs, got " +
                 std::to_string(values.size()));
  return values;
}

void write_out(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  cl::atomic_write((dir / name).string(), content);
}

cl::AlgorithmConfig make_config(const std::string& algorithm, double delta, int delay,
                                const cl::Spectrum& spectrum) {
  if (algorithm == "plain") {
    require_stepsize_range(spectrum, delta);
    return cl::AlgorithmConfig::plain(delta);
  }
  if (algorithm == "delayed") {
    require_stepsize_range(spectrum, delta);
    return cl::AlgorithmConfig::delayed(delta, delay);
  }
  if (algorithm == "nag-c") {
    require_stepsize_range(spectrum, delta);
    return cl::AlgorithmConfig::nag_c(delta);
  }
  if (algorithm == "nag-sc") return cl::AlgorithmConfig::nag_sc(spectrum);
  if (algorithm == "tm") return cl::AlgorithmConfig::triple_momentum(spectrum);
  cl::fail(cl::ErrorCode::kParseError, "unknown algorithm '" + algorithm + "'");
}

nlohmann::json cell_json(const cl::SweepCell& cell) {
  nlohmann::json j{
      {"label", cell.label},
      {"empirical_factor", cell.empirical_factor},
      {"factor_is_noise", cell.factor_is_noise},
      {"rounds_to_tolerance", cell.rounds_to_tolerance},
      {"stable", cell.stable},
      {"final_error", cell.trace.error_log.back()},
  };
  if (cell.analytic_r_d) j["analytic_r_d"] = *cell.analytic_r_d;
  return j;
}

std::uint64_t synthetic_seed() {
  if (const char* env = std::getenv("CONSENSUS_LAB_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 42;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated average-consensus lab: analytic delay certificates, "
               "simulation and sweeps over connected undirected graphs"};
  app.require_subcommand(1);

  std::string graph_path, inputs_spec, out_dir = ".", format = "csv";
  std::string algorithm = "plain", dataset_path, partition_path, delays_spec = "0,1,5,10";
  double delta = 0.0;
  int delay = 1, rounds = 200, points = 50;

  auto add_common = [&](CLI::App* cmd, bool needs_inputs) {
    cmd->add_option("--graph", graph_path, "graph JSON file")->required();
    cmd->add_option("--rounds", rounds, "number of synchronous rounds");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--format", format, "trace format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    if (needs_inputs)
      cmd->add_option("--inputs", inputs_spec, "inputs file or inline CSV")->required();
  };

  CLI::App* analyze = app.add_subcommand("analyze", "spectral + delay certificate");
  analyze->add_option("--graph", graph_path, "graph JSON file")->required();
  analyze->add_option("--delta", delta, "stepsize")->required();
  analyze->add_option("--out", out_dir, "output directory");

  CLI::App* simulate = app.add_subcommand("simulate", "run one algorithm");
  add_common(simulate, true);
  simulate->add_option("--algorithm", algorithm,
                       "plain|delayed|nag-c|nag-sc|tm");
  simulate->add_option("--delta", delta, "stepsize (plain/delayed/nag-c)");
  simulate->add_option("--delay", delay, "feedback delay (delayed)");

  CLI::App* sweep = app.add_subcommand("sweep", "delay sweep");
  add_common(sweep, true);
  sweep->add_option("--delta", delta, "stepsize")->required();
  sweep->add_option("--delays", delays_spec, "comma separated delays");

  CLI::App* compare = app.add_subcommand("compare", "compare the five algorithms");
  add_common(compare, true);

  CLI::App* regress = app.add_subcommand("regress", "distributed linear regression");
  add_common(regress, false);
  regress->add_option("--algorithm", algorithm, "plain|delayed|nag-c|nag-sc|tm");
  regress->add_option("--delta", delta, "stepsize (plain/delayed/nag-c)");
  regress->add_option("--delay", delay, "feedback delay (delayed)");
  regress->add_option("--dataset", dataset_path, "dataset CSV (x,y); default synthetic");
  regress->add_option("--points", points, "synthetic dataset size");
  regress->add_option("--partition", partition_path, "partition JSON (agent per row)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      cl::Graph g = load_connected_graph(graph_path);
      cl::Spectrum spectrum = cl::eigendecompose(cl::laplacian(g));
      cl::DelayReport report = cl::analyze_delays(spectrum, delta);
      nlohmann::json j = cl::delay_report_to_json(report);
      j["eigenvalues"] = spectrum.eigenvalues;
      write_out(out_dir, "report.json", j.dump(2) + "\n");
    } else if (*simulate) {
      cl::Graph g = load_connected_graph(graph_path);
      cl::Spectrum spectrum = cl::eigendecompose(cl::laplacian(g));
      cl::Vector inputs = parse_inputs(inputs_spec, g.n);
      cl::AlgorithmConfig config = make_config(algorithm, delta, delay, spectrum);
      cl::RunTrace trace = cl::run(config, g, inputs, rounds);

      bool stable = true;
      if (config.kind == cl::Algorithm::kPlain || config.kind == cl::Algorithm::kDelayed)
        stable = cl::convergence_factor(spectrum, delta,
                                        config.kind == cl::Algorithm::kDelayed
                                            ? config.delay
                                            : 0)
                     .stable;
      else
        stable = !trace.overflowed;

      double factor = std::numeric_limits<double>::quiet_NaN();
      bool noise = false;
      if (trace.rounds() >= 50) {
        cl::FactorEstimate est = cl::estimate_factor(trace);
        factor = est.value;
        noise = est.converged_to_noise;
      }
      if (format == "json") {
        nlohmann::json jt{{"states", trace.states}, {"e", trace.error_log}};
        write_out(out_dir, "trace.json", jt.dump(2) + "\n");
      } else {
        write_out(out_dir, "trace.csv", cl::trace_to_csv(trace));
      }
      write_out(out_dir, "summary.json",
                cl::trace_summary_json(trace, stable, factor, noise).dump(2) + "\n");
    } else if (*sweep) {
      cl::Graph g = load_connected_graph(graph_path);
      cl::Spectrum spectrum = cl::eigendecompose(cl::laplacian(g));
      require_stepsize_range(spectrum, delta);
      cl::Vector inputs = parse_inputs(inputs_spec, g.n);

      std::vector<int> delays;
      std::istringstream ds(delays_spec);
      std::string tok;
      while (std::getline(ds, tok, ','))
        if (!tok.empty()) delays.push_back(std::stoi(tok));

      cl::SweepResult result = cl::delay_sweep(g, delta, delays, inputs, rounds);
      nlohmann::json cells = nlohmann::json::array();
      for (const cl::SweepCell& cell : result.cells) {
        cells.push_back(cell_json(cell));
        write_out(out_dir, "trace_" + cell.label + ".csv", cl::trace_to_csv(cell.trace));
      }
      write_out(out_dir, "sweep.json",
                nlohmann::json{{"delta", delta}, {"cells", cells}}.dump(2) + "\n");
    } else if (*compare) {
      cl::Graph g = load_connected_graph(graph_path);
      cl::Vector inputs = parse_inputs(inputs_spec, g.n);
      cl::SweepResult result = cl::compare_algorithms(g, inputs, rounds);
      nlohmann::json cells = nlohmann::json::array();
      for (const cl::SweepCell& cell : result.cells) {
        cells.push_back(cell_json(cell));
        write_out(out_dir, "trace_" + cell.label + ".csv", cl::trace_to_csv(cell.trace));
      }
      write_out(out_dir, "compare.json",
                nlohmann::json{{"cells", cells}}.dump(2) + "\n");
    } else if (*regress) {
      cl::Graph g = load_connected_graph(graph_path);
      cl::Spectrum spectrum = cl::eigendecompose(cl::laplacian(g));

      cl::RegressionProblem problem;
      if (dataset_path.empty()) {
        problem = cl::RegressionProblem::synthetic(points, g.n, synthetic_seed());
      } else {
        auto [xs, ys] = cl::dataset_from_csv(cl::read_file(dataset_path));
        std::vector<int> partition;
        if (!partition_path.empty())
          partition = cl::partition_from_json(cl::read_file(partition_path));
        problem = cl::RegressionProblem::from_data(std::move(xs), std::move(ys), g.n,
                                                   4.267, std::move(partition));
      }
      cl::AlgorithmConfig config = make_config(algorithm, delta, delay, spectrum);
      cl::RegressionTrace trace = cl::solve_regression(problem, g, config, rounds);

      write_out(out_dir, "estimates.csv", cl::regression_to_csv(trace));
      write_out(out_dir, "regress.json",
                nlohmann::json{
                    {"slope", trace.slope},
                    {"final_max_deviation", trace.final_max_deviation},
                    {"had_zero_denominator", trace.had_zero_denominator},
                    {"overflowed", trace.overflowed},
                    {"rounds", trace.rounds()},
                }
                    .dump(2) +
                    "\n");
    }
  } catch (const cl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
