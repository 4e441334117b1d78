#include "consensus_lab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "consensus_lab/errors.hpp"

namespace consensus_lab {

namespace {

double disagreement_norm(const Vector& x, double mean) {
  double s = 0.0;
  for (double v : x) s += (v - mean) * (v - mean);
  return std::sqrt(s);
}

}  // namespace

FactorEstimate estimate_factor(const RunTrace& trace, double tail_fraction) {
  if (!(tail_fraction > 0.0) || !(tail_fraction < 1.0))
    fail(ErrorCode::kInvalidArgument, "tail_fraction must lie in (0, 1)");
  if (trace.rounds() < 50)
    fail(ErrorCode::kInsufficientData, "factor estimation needs at least 50 rounds");

  std::vector<double> norms(trace.states.size());
  for (std::size_t k = 0; k < trace.states.size(); ++k)
    norms[k] = disagreement_norm(trace.states[k], trace.input_mean);

  double floor = 1e-14 * norms[0];
  if (!(floor > 0.0)) return {0.0, true};  // started at consensus

  int end = trace.rounds();
  for (std::size_t k = 0; k < norms.size(); ++k) {
    if (norms[k] < floor) {
      end = static_cast<int>(k) - 1;
      break;
    }
    if (norms[k] > 1e140) {  // the overflow clamp would flatten the tail
      end = static_cast<int>(k) - 1;
      break;
    }
  }
  if (end < 10) return {0.0, true};

  int start = static_cast<int>(std::ceil(end * (1.0 - tail_fraction)));
  start = std::min(start, end - 2);
  if (start < 0) start = 0;

  // least-squares line through (k, ln norm_k)
  double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
  int count = 0;
  for (int k = start; k <= end; ++k) {
    double y = std::log(norms[static_cast<std::size_t>(k)]);
    sk += k;
    sy += y;
    skk += static_cast<double>(k) * k;
    sky += k * y;
    ++count;
  }
  double denom = count * skk - sk * sk;
  if (denom == 0.0) return {0.0, true};
  double slope = (count * sky - sk * sy) / denom;
  return {std::exp(slope), false};
}

namespace {

SweepCell make_cell(std::string label, const AlgorithmConfig& config, const Graph& g,
                    const Vector& inputs, int rounds,
                    std::optional<double> analytic, bool analytic_stable) {
  SweepCell cell;
  cell.label = std::move(label);
  cell.config = config;
  cell.trace = run(config, g, inputs, rounds);
  if (cell.trace.rounds() >= 50) {
    FactorEstimate est = estimate_factor(cell.trace);
    cell.empirical_factor = est.value;
    cell.factor_is_noise = est.converged_to_noise;
  } else {
    cell.empirical_factor = std::numeric_limits<double>::quiet_NaN();
  }
  cell.analytic_r_d = analytic;
  cell.rounds_to_tolerance = cell.trace.rounds_to_tolerance(1e-8);
  cell.stable = analytic ? analytic_stable : !cell.trace.overflowed;
  return cell;
}

}  // namespace

SweepResult delay_sweep(const Graph& g, double delta, const std::vector<int>& delays,
                        const Vector& inputs, int rounds) {
  Spectrum spectrum = eigendecompose(laplacian(g));
  SweepResult result;

  auto add = [&](int d) {
    AlgorithmConfig config =
        d == 0 ? AlgorithmConfig::plain(delta) : AlgorithmConfig::delayed(delta, d);
    ConvergenceFactor cf = convergence_factor(spectrum, delta, d);
    result.cells.push_back(make_cell("d=" + std::to_string(d), config, g, inputs,
                                     rounds, cf.r_d, cf.stable));
  };

  add(0);  // baseline
  for (int d : delays)
    if (d != 0) add(d);
  return result;
}

SweepResult compare_algorithms(const Graph& g, const Vector& inputs, int rounds) {
  Spectrum spectrum = eigendecompose(laplacian(g));
  double delta = 1.0 / spectrum.lambda_max();
  SweepResult result;

  auto analytic = [&](int d) { return convergence_factor(spectrum, delta, d); };

  ConvergenceFactor cf0 = analytic(0);
  result.cells.push_back(make_cell("plain", AlgorithmConfig::plain(delta), g, inputs,
                                   rounds, cf0.r_d, cf0.stable));
  ConvergenceFactor cf5 = analytic(5);
  result.cells.push_back(make_cell("delayed-d5", AlgorithmConfig::delayed(delta, 5), g,
                                   inputs, rounds, cf5.r_d, cf5.stable));
  result.cells.push_back(make_cell("nag-c", AlgorithmConfig::nag_c(delta), g, inputs,
                                   rounds, std::nullopt, true));
  result.cells.push_back(make_cell("nag-sc", AlgorithmConfig::nag_sc(spectrum), g,
                                   inputs, rounds, std::nullopt, true));
  result.cells.push_back(make_cell("tm", AlgorithmConfig::triple_momentum(spectrum), g,
                                   inputs, rounds, std::nullopt, true));
  return result;
}

Vector RegressionProblem::reference_numerators() const {
  Vector r(static_cast<std::size_t>(agents), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i)
    r[static_cast<std::size_t>(partition[i])] += xs[i] * (ys[i] - intercept);
  return r;
}

Vector RegressionProblem::reference_denominators() const {
  Vector r(static_cast<std::size_t>(agents), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i)
    r[static_cast<std::size_t>(partition[i])] += xs[i] * xs[i];
  return r;
}

double RegressionProblem::centralized_slope() const {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += xs[i] * (ys[i] - intercept);
    den += xs[i] * xs[i];
  }
  if (!(den > 0.0)) fail(ErrorCode::kInvalidArgument, "sum of x^2 must be positive");
  return num / den;
}

void RegressionProblem::validate() const {
  if (agents < 1) fail(ErrorCode::kInvalidArgument, "need at least one agent");
  if (xs.size() != ys.size() || xs.size() != partition.size())
    fail(ErrorCode::kLengthMismatch, "dataset and partition sizes disagree");
  for (int p : partition)
    if (p < 0 || p >= agents)
      fail(ErrorCode::kIndexOutOfRange, "partition entry out of agent range");
}

RegressionProblem RegressionProblem::from_data(std::vector<double> xs,
                                               std::vector<double> ys, int agents,
                                               double intercept,
                                               std::vector<int> partition) {
  RegressionProblem p;
  p.xs = std::move(xs);
  p.ys = std::move(ys);
  p.agents = agents;
  p.intercept = intercept;
  if (partition.empty()) {
    partition.resize(p.xs.size());
    for (std::size_t i = 0; i < partition.size(); ++i)
      partition[i] = static_cast<int>(i) % agents;
  }
  p.partition = std::move(partition);
  p.validate();
  return p;
}

RegressionProblem RegressionProblem::synthetic(int points, int agents,
                                               std::uint64_t seed, double a_true,
                                               double noise_sd, double intercept) {
  if (points < 1) fail(ErrorCode::kInvalidArgument, "need at least one point");
  std::mt19937_64 rng(seed);
  // Explicit uniform/Box-Muller mapping keeps the stream independent of the
  // standard library's distribution implementations.
  auto uniform = [&rng]() {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  };
  std::vector<double> xs(static_cast<std::size_t>(points));
  std::vector<double> ys(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    xs[static_cast<std::size_t>(i)] = 5.0 + 20.0 * uniform();
    double u1 = uniform(), u2 = uniform();
    double gauss = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    ys[static_cast<std::size_t>(i)] =
        a_true * xs[static_cast<std::size_t>(i)] + intercept + noise_sd * gauss;
  }
  return from_data(std::move(xs), std::move(ys), agents, intercept);
}

RegressionTrace solve_regression(const RegressionProblem& problem, const Graph& g,
                                 const AlgorithmConfig& config, int rounds) {
  problem.validate();
  if (problem.agents != g.n)
    fail(ErrorCode::kLengthMismatch, "partition size must equal the agent count");

  Vector r1 = problem.reference_numerators();
  Vector r2 = problem.reference_denominators();

  RegressionTrace out;
  out.slope = problem.centralized_slope();

  ConsensusState num = init(config, g, r1);
  ConsensusState den = init(config, g, r2);

  auto record = [&](const Vector& eta1, const Vector& eta2) {
    Vector est(eta1.size());
    double sq = 0.0;
    bool any_finite = false;
    for (std::size_t i = 0; i < eta1.size(); ++i) {
      double v = eta1[i] / eta2[i];
      if (!std::isfinite(v)) {
        out.had_zero_denominator = true;
        v = std::numeric_limits<double>::quiet_NaN();
      } else {
        double dev = v - out.slope;
        sq += dev * dev;
        any_finite = true;
      }
      est[i] = v;
    }
    out.estimates.push_back(std::move(est));
    out.error_log.push_back(any_finite && sq > 0.0
                                ? std::max(std::log(sq), -745.0)
                                : (any_finite ? -745.0
                                              : std::numeric_limits<double>::quiet_NaN()));
  };

  record(num.x, den.x);
  for (int k = 0; k < rounds; ++k) {
    step(num);
    step(den);
    record(num.x, den.x);
  }
  out.overflowed = num.overflowed || den.overflowed;

  double final_dev = 0.0;
  for (double v : out.estimates.back()) {
    if (std::isnan(v)) {
      final_dev = std::numeric_limits<double>::quiet_NaN();
      break;
    }
    final_dev = std::max(final_dev, std::abs(v - out.slope));
  }
  out.final_max_deviation = final_dev;
  return out;
}

}  // namespace consensus_lab
