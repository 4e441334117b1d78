#pragma once

#include <map>
#include <optional>
#include <vector>

#include "consensus_lab/spectral.hpp"

namespace consensus_lab {

/// d^d/(d+1)^{d+1}, the critical coefficient at which s^{d+1}-s^d+c has
/// its double root; tabulated in the literature for d=1..5.
double table1(int d);

/// True iff every mode i>=2 has all roots of s^{d+1}-s^d+delta*lambda_i
/// strictly inside the unit circle. A root within 1e-12 of the circle is
/// undecidable at tolerance and raises MarginalStability.
bool stability_check(const Spectrum& spectrum, double delta, int d);

struct DelayBound {
  long value = 0;
  bool unbounded = false;  // d_hat exceeded the 1e6 cap
};

/// Largest delay d with d < d_hat(lambda_i) for every nonzero mode, where
/// d_hat = (pi/(2 asin(delta*lambda/2)) - 1)/2. Every d <= value is
/// guaranteed stable; value+1 is marginal or unstable.
DelayBound admissible_delay(const Spectrum& spectrum, double delta);

/// Unique phi in (0, pi/(d+1)) with sin(d phi)/sin((d+1) phi) = 1/abs_one_minus_dl.
double phi_solve(double abs_one_minus_dl, int d);

struct AccelerationBound {
  int value = 0;                       // largest certified d, 0 if none
  std::vector<double> degenerate_modes;  // modes with delta*lambda == 1, excluded
};

/// Largest d certified (sufficient condition) to satisfy r_{d,i} < |1-delta*lambda_i|
/// for every mode simultaneously; scans d=1,2,... and is capped at the
/// admissible delay. Modes with delta*lambda_i == 1 contract in one step at
/// d=0 and are excluded with a note.
AccelerationBound acceleration_delay_bound(const Spectrum& spectrum, double delta);

struct ConvergenceFactor {
  double r_d = 0.0;
  double t_d = 0.0;       // 1/log(1/r_d); +inf when r_d >= 1
  bool stable = false;
  std::vector<double> per_mode;  // r_{d,i}, i = 2..N
};

/// r_d = max_i max-root-modulus of s^{d+1}-s^d+delta*lambda_i.
ConvergenceFactor convergence_factor(const Spectrum& spectrum, double delta, int d);

/// Kuruklis disk test: all roots of s^{d+1}-s^d+c inside |s| < 1/a, for a > 1.
bool kuruklis_region_check(double c, int d, double a);

/// Full analytic certificate for one (graph, delta) pair.
struct DelayReport {
  double delta = 0.0;
  std::vector<double> lambdas;          // nonzero modes lambda_2..lambda_N
  std::map<int, double> r_d;            // delay -> convergence factor
  double t_d = 0.0;                     // convergence time at the queried delay
  DelayBound d_bar;
  AccelerationBound d_accel;
  bool monotone_flag = false;           // d^d/(d+1)^{d+1} < delta*lambda_2 at d=1
};

/// Builds a DelayReport with the r_d table for d = 0..min(d_bar, table_cap).
DelayReport analyze_delays(const Spectrum& spectrum, double delta, int table_cap = 32);

}  // namespace consensus_lab
