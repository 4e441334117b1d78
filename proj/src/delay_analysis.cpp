#include "consensus_lab/delay_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "consensus_lab/errors.hpp"

namespace consensus_lab {

namespace {

constexpr double kMarginBand = 1e-12;   // unit-circle undecidability band
constexpr long kDelayCap = 1000000;     // d_hat beyond this reports Unbounded

std::vector<double> nonzero_modes(const Spectrum& spectrum) {
  std::vector<double> modes;
  for (std::size_t i = 1; i < spectrum.eigenvalues.size(); ++i)
    modes.push_back(spectrum.eigenvalues[i]);
  return modes;
}

void require_stepsize(const Spectrum& spectrum, double delta) {
  double lam_n = spectrum.lambda_max();
  if (!(delta > 0.0) || !(delta * lam_n < 2.0))
    fail(ErrorCode::kStepsizeOutOfRange,
         "stepsize must lie in (0, 2/lambda_N), got " + std::to_string(delta));
}

double d_hat(double delta_lambda) {
  return 0.5 * (M_PI / (2.0 * std::asin(delta_lambda / 2.0)) - 1.0);
}

/// Unique phi in (0, pi/(d+1)) with sin(d phi)/sin((d+1) phi) = target.
/// Bisection on the rearranged form sin(d phi) - target*sin((d+1) phi),
/// which is sign-definite at both ends whenever target > d/(d+1).
double solve_sine_ratio(double target, int d) {
  if (d < 1) fail(ErrorCode::kInvalidArgument, "phi is defined for d >= 1");
  if (!(target > static_cast<double>(d) / (d + 1)))
    fail(ErrorCode::kNoRoot, "sine ratio never reaches target " + std::to_string(target));

  auto g = [&](double phi) {
    return std::sin(d * phi) - target * std::sin((d + 1) * phi);
  };
  double lo = 0.0;
  double hi = M_PI / (d + 1);
  // g(0+) < 0, g(hi-) = sin(d pi/(d+1)) > 0
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-16; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double phi = 0.5 * (lo + hi);
  if (std::abs(g(phi)) > 1e-12 * (1.0 + std::abs(target)))
    fail(ErrorCode::kNoRoot, "phi bisection failed to meet residual tolerance");
  return phi;
}

}  // namespace

double table1(int d) {
  if (d < 1) fail(ErrorCode::kInvalidArgument, "table1 is defined for d >= 1");
  return std::pow(static_cast<double>(d), d) /
         std::pow(static_cast<double>(d) + 1.0, d + 1);
}

bool stability_check(const Spectrum& spectrum, double delta, int d) {
  if (!(delta > 0.0)) fail(ErrorCode::kInvalidArgument, "stepsize must be positive");
  if (d < 0) fail(ErrorCode::kInvalidArgument, "delay must be >= 0");

  bool any_marginal = false;
  for (double lambda : nonzero_modes(spectrum)) {
    PolyRoots roots = poly_roots_delay(delta * lambda, d);
    bool mode_unstable = false;
    for (const auto& s : roots.roots) {
      double m = std::abs(s);
      if (m > 1.0 + kMarginBand)
        mode_unstable = true;
      else if (m >= 1.0 - kMarginBand)
        any_marginal = true;
    }
    if (mode_unstable) return false;
  }
  if (any_marginal)
    fail(ErrorCode::kMarginalStability,
         "a characteristic root lies within 1e-12 of the unit circle");
  return true;
}

DelayBound admissible_delay(const Spectrum& spectrum, double delta) {
  require_stepsize(spectrum, delta);

  double dhat_min = std::numeric_limits<double>::infinity();
  for (double lambda : nonzero_modes(spectrum))
    dhat_min = std::min(dhat_min, d_hat(delta * lambda));

  DelayBound bound;
  if (dhat_min > static_cast<double>(kDelayCap)) {
    bound.value = kDelayCap;
    bound.unbounded = true;
    return bound;
  }
  // Largest integer strictly below d_hat_min. The 1e-9 guard keeps the
  // reported delay clear of the marginal band used by stability_check.
  long d = static_cast<long>(std::ceil(dhat_min - 1e-9)) - 1;
  bound.value = std::max(d, 0L);
  return bound;
}

double phi_solve(double abs_one_minus_dl, int d) {
  if (!(abs_one_minus_dl > 0.0) || !(abs_one_minus_dl < 1.0))
    fail(ErrorCode::kInvalidArgument, "|1 - delta*lambda| must lie in (0, 1)");
  return solve_sine_ratio(1.0 / abs_one_minus_dl, d);
}

AccelerationBound acceleration_delay_bound(const Spectrum& spectrum, double delta) {
  require_stepsize(spectrum, delta);

  AccelerationBound out;
  std::vector<double> contractions;  // |1 - delta*lambda_i| per usable mode
  std::vector<double> delta_lambdas;
  for (double lambda : nonzero_modes(spectrum)) {
    double dl = delta * lambda;
    double a1 = std::abs(1.0 - dl);
    if (a1 <= kMarginBand) {
      out.degenerate_modes.push_back(lambda);  // contracts in one step at d=0
      continue;
    }
    contractions.push_back(a1);
    delta_lambdas.push_back(dl);
  }
  if (contractions.empty()) return out;  // r_0 = 0, nothing to beat

  long cap = admissible_delay(spectrum, delta).value;
  for (long d = 1; d <= cap; ++d) {
    bool certified = true;
    for (std::size_t i = 0; i < contractions.size(); ++i) {
      double a1 = contractions[i];
      double term2 = a1 / (1.0 - a1);
      if (!(static_cast<double>(d) < term2)) {
        certified = false;
        break;
      }
      // d < term2 is exactly the solvability condition a1 > d/(d+1), so
      // the Kuruklis angle exists here. Theorem's phi equation carries a
      // reciprocal typo; the sound target (from its own appendix) is a1.
      double phi = solve_sine_ratio(a1, static_cast<int>(d));
      double dl = delta_lambdas[i];
      double disk = std::sqrt((1.0 - dl) * (1.0 - dl) + 1.0 - 2.0 * a1 * std::cos(phi));
      double term1 = std::log(dl / disk) / std::log(a1);
      if (!(static_cast<double>(d) < term1)) {
        certified = false;
        break;
      }
    }
    if (!certified) break;
    out.value = static_cast<int>(d);
  }
  return out;
}

ConvergenceFactor convergence_factor(const Spectrum& spectrum, double delta, int d) {
  if (!(delta > 0.0)) fail(ErrorCode::kInvalidArgument, "stepsize must be positive");
  if (d < 0) fail(ErrorCode::kInvalidArgument, "delay must be >= 0");

  ConvergenceFactor out;
  for (double lambda : nonzero_modes(spectrum)) {
    double r = poly_roots_delay(delta * lambda, d).max_modulus;
    out.per_mode.push_back(r);
    out.r_d = std::max(out.r_d, r);
  }
  out.stable = out.r_d < 1.0 - kMarginBand;
  if (out.stable)
    out.t_d = out.r_d == 0.0 ? 0.0 : 1.0 / std::log(1.0 / out.r_d);
  else
    out.t_d = std::numeric_limits<double>::infinity();
  return out;
}

bool kuruklis_region_check(double c, int d, double a) {
  if (d < 1) fail(ErrorCode::kInvalidArgument, "kuruklis check needs d >= 1");
  if (!(c > 0.0)) fail(ErrorCode::kInvalidArgument, "c must be positive");
  a = std::abs(a);
  if (!(a < static_cast<double>(d + 1) / d)) return false;
  double phi = solve_sine_ratio(1.0 / a, d);
  double a_pow = std::pow(a, d + 1);
  double lower = (a - 1.0) / a_pow;
  double upper = std::sqrt(a * a + 1.0 - 2.0 * a * std::cos(phi)) / a_pow;
  return lower < c && c < upper;
}

DelayReport analyze_delays(const Spectrum& spectrum, double delta, int table_cap) {
  require_stepsize(spectrum, delta);

  DelayReport report;
  report.delta = delta;
  report.lambdas = nonzero_modes(spectrum);
  report.d_bar = admissible_delay(spectrum, delta);
  report.d_accel = acceleration_delay_bound(spectrum, delta);
  report.monotone_flag = table1(1) < delta * spectrum.lambda2();

  long last = std::min(report.d_bar.value, static_cast<long>(table_cap));
  double best = std::numeric_limits<double>::infinity();
  for (long d = 0; d <= last; ++d) {
    ConvergenceFactor cf = convergence_factor(spectrum, delta, static_cast<int>(d));
    report.r_d[static_cast<int>(d)] = cf.r_d;
    best = std::min(best, cf.r_d);
  }
  report.t_d = best < 1.0 ? (best == 0.0 ? 0.0 : 1.0 / std::log(1.0 / best))
                          : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace consensus_lab
