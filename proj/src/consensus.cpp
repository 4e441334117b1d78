#include "consensus_lab/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "consensus_lab/errors.hpp"

namespace consensus_lab {

namespace {

constexpr double kOverflowClamp = 1e150;

void clamp_overflow(Vector& v, bool& flag) {
  for (double& e : v) {
    if (!std::isfinite(e)) {
      e = e > 0.0 || std::isnan(e) ? kOverflowClamp : -kOverflowClamp;
      flag = true;
    } else if (std::abs(e) > kOverflowClamp) {
      e = std::copysign(kOverflowClamp, e);
      flag = true;
    }
  }
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kPlain: return "plain";
    case Algorithm::kDelayed: return "delayed";
    case Algorithm::kNagC: return "nag-c";
    case Algorithm::kNagSc: return "nag-sc";
    case Algorithm::kTripleMomentum: return "tm";
  }
  return "unknown";
}

AlgorithmConfig AlgorithmConfig::plain(double delta) {
  AlgorithmConfig c;
  c.kind = Algorithm::kPlain;
  c.delta = delta;
  c.validate();
  return c;
}

AlgorithmConfig AlgorithmConfig::delayed(double delta, int delay) {
  AlgorithmConfig c;
  c.kind = Algorithm::kDelayed;
  c.delta = delta;
  c.delay = delay;
  c.validate();
  return c;
}

AlgorithmConfig AlgorithmConfig::nag_c(double delta) {
  AlgorithmConfig c;
  c.kind = Algorithm::kNagC;
  c.delta = delta;
  c.validate();
  return c;
}

AlgorithmConfig AlgorithmConfig::nag_sc(double lambda2, double lambda_n) {
  AlgorithmConfig c;
  c.kind = Algorithm::kNagSc;
  c.lambda2 = lambda2;
  c.lambda_n = lambda_n;
  c.validate();
  return c;
}

AlgorithmConfig AlgorithmConfig::nag_sc(const Spectrum& spectrum) {
  return nag_sc(spectrum.lambda2(), spectrum.lambda_max());
}

AlgorithmConfig AlgorithmConfig::triple_momentum(double lambda2, double lambda_n) {
  AlgorithmConfig c;
  c.kind = Algorithm::kTripleMomentum;
  c.lambda2 = lambda2;
  c.lambda_n = lambda_n;
  c.validate();
  return c;
}

AlgorithmConfig AlgorithmConfig::triple_momentum(const Spectrum& spectrum) {
  return triple_momentum(spectrum.lambda2(), spectrum.lambda_max());
}

AlgorithmConfig::TmGains AlgorithmConfig::tm_gains() const {
  TmGains g;
  g.rho = 1.0 - std::sqrt(lambda2 / lambda_n);
  g.alpha = (1.0 + g.rho) / lambda_n;
  g.beta = g.rho * g.rho / (2.0 - g.rho);
  g.gamma = g.rho * g.rho / ((1.0 + g.rho) * (2.0 - g.rho));
  g.delta = g.rho * g.rho / (1.0 - g.rho * g.rho);
  return g;
}

double AlgorithmConfig::nag_sc_beta() const {
  double sn = std::sqrt(lambda_n), s2 = std::sqrt(lambda2);
  return (sn - s2) / (sn + s2);
}

void AlgorithmConfig::validate() const {
  switch (kind) {
    case Algorithm::kPlain:
    case Algorithm::kNagC:
      if (!(delta > 0.0))
        fail(ErrorCode::kConfigMismatch, "stepsize must be positive");
      break;
    case Algorithm::kDelayed:
      if (!(delta > 0.0))
        fail(ErrorCode::kConfigMismatch, "stepsize must be positive");
      if (delay < 1)
        fail(ErrorCode::kConfigMismatch, "delayed consensus needs delay >= 1");
      break;
    case Algorithm::kNagSc:
    case Algorithm::kTripleMomentum:
      if (!(lambda2 > 0.0) || !(lambda_n >= lambda2) || !std::isfinite(lambda_n))
        fail(ErrorCode::kConfigMismatch,
             "spectral parameters need 0 < lambda2 <= lambdaN");
      break;
  }
}

ConsensusState init(const AlgorithmConfig& config, const Graph& g, const Vector& inputs) {
  config.validate();
  if (static_cast<int>(inputs.size()) != g.n)
    fail(ErrorCode::kLengthMismatch,
         "expected " + std::to_string(g.n) + " inputs, got " +
             std::to_string(inputs.size()));

  ConsensusState s;
  s.config = config;
  s.laplacian = laplacian(g);
  s.x = inputs;
  switch (config.kind) {
    case Algorithm::kPlain:
      break;
    case Algorithm::kDelayed:
      // x(k) = 0 for k in {-d..-1}, x(0) = inputs
      for (int k = 0; k < config.delay; ++k)
        s.history.emplace_back(inputs.size(), 0.0);
      s.history.push_back(inputs);
      break;
    case Algorithm::kNagC:
      s.y_prev = inputs;  // y(0) = x(0)
      break;
    case Algorithm::kNagSc:
      s.x_prev = inputs;  // x(0) = x(1) = inputs
      break;
    case Algorithm::kTripleMomentum:
      s.xi_prev = inputs;  // xi(0) = xi(1) = inputs
      s.xi_cur = inputs;
      break;
  }
  return s;
}

void step(ConsensusState& state) {
  const Matrix& l = state.laplacian;
  const std::size_t n = state.x.size();
  switch (state.config.kind) {
    case Algorithm::kPlain: {
      Vector lx = l * state.x;
      for (std::size_t i = 0; i < n; ++i) state.x[i] -= state.config.delta * lx[i];
      break;
    }
    case Algorithm::kDelayed: {
      Vector lx = l * state.history.front();  // x(k-d)
      Vector next = state.x;
      for (std::size_t i = 0; i < n; ++i) next[i] -= state.config.delta * lx[i];
      clamp_overflow(next, state.overflowed);
      state.history.push_back(next);
      state.history.pop_front();
      state.x = std::move(next);
      break;
    }
    case Algorithm::kNagC: {
      Vector lx = l * state.x;
      Vector y_next(n);
      for (std::size_t i = 0; i < n; ++i)
        y_next[i] = state.x[i] - state.config.delta * lx[i];
      double momentum = static_cast<double>(state.round + 1) / (state.round + 3);
      for (std::size_t i = 0; i < n; ++i)
        state.x[i] = y_next[i] + momentum * (y_next[i] - state.y_prev[i]);
      state.y_prev = std::move(y_next);
      break;
    }
    case Algorithm::kNagSc: {
      if (state.round == 0) break;  // x(1) = x(0) = inputs by definition
      double beta = state.config.nag_sc_beta();
      double alpha = state.config.nag_sc_alpha();
      Vector y(n);
      for (std::size_t i = 0; i < n; ++i)
        y[i] = (1.0 + beta) * state.x[i] - beta * state.x_prev[i];
      Vector ly = l * y;
      state.x_prev = state.x;
      for (std::size_t i = 0; i < n; ++i) state.x[i] = y[i] - alpha * ly[i];
      break;
    }
    case Algorithm::kTripleMomentum: {
      if (state.round == 0) break;  // xi(1) = xi(0), so x(1) = inputs
      AlgorithmConfig::TmGains g = state.config.tm_gains();
      Vector y(n);
      for (std::size_t i = 0; i < n; ++i)
        y[i] = (1.0 + g.gamma) * state.xi_cur[i] - g.gamma * state.xi_prev[i];
      Vector ly = l * y;
      Vector xi_next(n);
      for (std::size_t i = 0; i < n; ++i)
        xi_next[i] = (1.0 + g.beta) * state.xi_cur[i] - g.beta * state.xi_prev[i] -
                     g.alpha * ly[i];
      for (std::size_t i = 0; i < n; ++i)
        state.x[i] = (1.0 + g.delta) * xi_next[i] - g.delta * state.xi_cur[i];
      state.xi_prev = std::move(state.xi_cur);
      state.xi_cur = std::move(xi_next);
      break;
    }
  }
  clamp_overflow(state.x, state.overflowed);
  ++state.round;
}

double RunTrace::max_deviation(int k) const {
  double dev = 0.0;
  for (double v : states[static_cast<std::size_t>(k)])
    dev = std::max(dev, std::abs(v - input_mean));
  return dev;
}

int RunTrace::rounds_to_tolerance(double tol) const {
  for (int k = 0; k <= rounds(); ++k)
    if (max_deviation(k) < tol) return k;
  return -1;
}

RunTrace run(const AlgorithmConfig& config, const Graph& g, const Vector& inputs,
             int rounds) {
  if (rounds < 0) fail(ErrorCode::kInvalidArgument, "rounds must be >= 0");
  ConsensusState state = init(config, g, inputs);

  RunTrace trace;
  trace.input_mean =
      std::accumulate(inputs.begin(), inputs.end(), 0.0) / static_cast<double>(g.n);
  trace.states.reserve(static_cast<std::size_t>(rounds) + 1);

  auto record = [&](const Vector& x) {
    trace.states.push_back(x);
    double sq = 0.0;
    for (double v : x) {
      double dev = v - trace.input_mean;
      sq += dev * dev;
    }
    trace.error_log.push_back(sq > 0.0 ? std::max(std::log(sq), -745.0) : -745.0);
  };

  record(state.x);
  for (int k = 0; k < rounds; ++k) {
    step(state);
    record(state.x);
  }
  trace.overflowed = state.overflowed;
  return trace;
}

}  // namespace consensus_lab
