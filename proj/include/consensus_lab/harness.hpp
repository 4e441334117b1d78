#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "consensus_lab/consensus.hpp"
#include "consensus_lab/delay_analysis.hpp"
#include "consensus_lab/graph.hpp"

namespace consensus_lab {

struct FactorEstimate {
  double value = 0.0;
  bool converged_to_noise = false;  // disagreement fell below the noise floor
};

/// Least-squares slope of ln ||x(k) - mean*1|| over the final tail_fraction
/// of the usable rounds, exponentiated. The fit window ends where the
/// disagreement first drops below 1e-14 of its initial value, so the
/// estimate is invariant to input scaling.
FactorEstimate estimate_factor(const RunTrace& trace, double tail_fraction = 0.5);

struct SweepCell {
  std::string label;
  AlgorithmConfig config;
  double empirical_factor = 0.0;
  bool factor_is_noise = false;
  std::optional<double> analytic_r_d;  // Plain/Delayed only
  int rounds_to_tolerance = -1;        // first round below 1e-8, -1 if never
  bool stable = true;
  RunTrace trace;
};

struct SweepResult {
  std::vector<SweepCell> cells;
};

/// One Delayed run per requested delay plus the d=0 baseline, annotated
/// with the analytic convergence factor per cell.
SweepResult delay_sweep(const Graph& g, double delta, const std::vector<int>& delays,
                        const Vector& inputs, int rounds);

/// Plain (delta=1/lambdaN), Delayed (d=5, same delta), NAG-C, NAG-SC and
/// Triple-Momentum with spectral parameters taken from the graph.
SweepResult compare_algorithms(const Graph& g, const Vector& inputs, int rounds);

/// The in-network linear-regression workload: slope estimation with a
/// known intercept, split into two average-consensus problems.
struct RegressionProblem {
  std::vector<double> xs;
  std::vector<double> ys;
  double intercept = 4.267;
  int agents = 0;
  std::vector<int> partition;  // agent index per data row

  /// r1^i = sum x(y-b), r2^i = sum x^2 over agent i's shard.
  Vector reference_numerators() const;
  Vector reference_denominators() const;
  double centralized_slope() const;
  void validate() const;

  /// Round-robin assignment row -> row % agents.
  static RegressionProblem from_data(std::vector<double> xs, std::vector<double> ys,
                                     int agents, double intercept = 4.267,
                                     std::vector<int> partition = {});

  /// y = a_true*x + b + sd*noise with x uniform in [5, 25]; fully
  /// deterministic for a given seed.
  static RegressionProblem synthetic(int points, int agents, std::uint64_t seed,
                                     double a_true = 1.4, double noise_sd = 2.0,
                                     double intercept = 4.267);
};

struct RegressionTrace {
  std::vector<Vector> estimates;  // a_hat per agent per round; NaN on zero denominator
  Vector error_log;               // ln sum_i (a_hat_i - a)^2 over finite cells
  double slope = 0.0;             // centralized oracle value
  double final_max_deviation = 0.0;
  bool had_zero_denominator = false;
  bool overflowed = false;

  int rounds() const { return static_cast<int>(estimates.size()) - 1; }
};

/// Runs the numerator and denominator consensus problems in lockstep under
/// the same config and reports a_hat^i(k) = eta1^i(k)/eta2^i(k).
RegressionTrace solve_regression(const RegressionProblem& problem, const Graph& g,
                                 const AlgorithmConfig& config, int rounds);

}  // namespace consensus_lab
