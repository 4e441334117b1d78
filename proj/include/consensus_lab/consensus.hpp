#pragma once

#include <deque>
#include <string>
#include <vector>

#include "consensus_lab/graph.hpp"
#include "consensus_lab/spectral.hpp"

namespace consensus_lab {

enum class Algorithm { kPlain, kDelayed, kNagC, kNagSc, kTripleMomentum };

std::string algorithm_name(Algorithm a);

/// Which iteration to run and its parameters. Build through the factories;
/// NAG-SC and Triple-Momentum derive their gains from (lambda2, lambdaN),
/// which the agents are assumed to know globally.
struct AlgorithmConfig {
  Algorithm kind = Algorithm::kPlain;
  double delta = 0.0;     // stepsize (Plain, Delayed, NagC)
  int delay = 0;          // Delayed only, >= 1
  double lambda2 = 0.0;   // NagSc / TripleMomentum
  double lambda_n = 0.0;

  static AlgorithmConfig plain(double delta);
  static AlgorithmConfig delayed(double delta, int delay);
  static AlgorithmConfig nag_c(double delta);
  static AlgorithmConfig nag_sc(double lambda2, double lambda_n);
  static AlgorithmConfig nag_sc(const Spectrum& spectrum);
  static AlgorithmConfig triple_momentum(double lambda2, double lambda_n);
  static AlgorithmConfig triple_momentum(const Spectrum& spectrum);

  struct TmGains {
    double rho;
    double alpha;
    double beta;
    double gamma;
    double delta;  // read-out mix, distinct from the consensus stepsize
  };
  TmGains tm_gains() const;
  double nag_sc_alpha() const { return 1.0 / lambda_n; }
  double nag_sc_beta() const;

  void validate() const;
};

/// One synchronous-round state machine. All agents read the previous
/// round's buffers (double buffering), so a run is deterministic.
struct ConsensusState {
  AlgorithmConfig config;
  Matrix laplacian;
  int round = 0;
  Vector x;                    // read-out values x(round)
  std::deque<Vector> history;  // Delayed: x(k-d)..x(k), front oldest
  Vector y_prev;               // NagC
  Vector x_prev;               // NagSc
  Vector xi_prev, xi_cur;      // TripleMomentum
  bool overflowed = false;     // some component hit the 1e150 clamp
};

ConsensusState init(const AlgorithmConfig& config, const Graph& g, const Vector& inputs);

/// Advances one synchronous round.
void step(ConsensusState& state);

struct RunTrace {
  std::vector<Vector> states;  // x(k), k = 0..rounds
  Vector error_log;            // e(k) = ln sum_i (x_i(k) - mean)^2, floored at -745
  double input_mean = 0.0;
  bool overflowed = false;

  int rounds() const { return static_cast<int>(states.size()) - 1; }
  /// max_i |x_i(k) - mean| at round k.
  double max_deviation(int k) const;
  /// First round with max deviation below tol, or -1.
  int rounds_to_tolerance(double tol) const;
};

RunTrace run(const AlgorithmConfig& config, const Graph& g, const Vector& inputs,
             int rounds);

}  // namespace consensus_lab
