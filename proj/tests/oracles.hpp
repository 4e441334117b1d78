#pragma once

// Test-only oracles, independent of the library implementations they check:
// brute-force recursion simulation, determinant bisection for eigenvalues,
// closed-form roots for the quadratic delay case, and a plain log-linear fit.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "consensus_lab/graph.hpp"
#include "consensus_lab/linalg.hpp"

namespace oracles {

using consensus_lab::Edge;
using consensus_lab::Graph;
using consensus_lab::Matrix;
using consensus_lab::Vector;

/// z(k+1) = z(k) - c z(k-d), zero history, z(0) = z0.
inline std::vector<double> simulate_scalar_delay(double c, int d, int steps,
                                                 double z0 = 1.0) {
  std::vector<double> z;
  z.reserve(static_cast<std::size_t>(steps) + 1);
  z.push_back(z0);
  for (int k = 0; k < steps; ++k) {
    double delayed = (k - d) < 0 ? 0.0 : z[static_cast<std::size_t>(k - d)];
    double next = z.back() - c * delayed;
    if (std::abs(next) > 1e120) {  // clearly divergent; stop before inf
      z.push_back(next);
      return z;
    }
    z.push_back(next);
  }
  return z;
}

/// Empirical asymptotic stability: does the envelope shrink from the first
/// quarter of the run to the last quarter?
inline bool recursion_empirically_stable(double c, int d, int steps = 5000) {
  std::vector<double> z = simulate_scalar_delay(c, d, steps);
  if (static_cast<int>(z.size()) <= steps) return false;  // bailed out divergent
  std::size_t quarter = z.size() / 4;
  double early = 0.0, late = 0.0;
  for (std::size_t k = 0; k < quarter; ++k) early = std::max(early, std::abs(z[k]));
  for (std::size_t k = z.size() - quarter; k < z.size(); ++k)
    late = std::max(late, std::abs(z[k]));
  return late < early;
}

/// Least-squares decay factor of ln|series| over [begin, end].
inline double tail_decay_rate(const std::vector<double>& series, std::size_t begin,
                              std::size_t end) {
  double sk = 0, sy = 0, skk = 0, sky = 0;
  int n = 0;
  for (std::size_t k = begin; k < end; ++k) {
    double a = std::abs(series[k]);
    if (a < 1e-290) continue;
    double y = std::log(a);
    double kk = static_cast<double>(k);
    sk += kk;
    sy += y;
    skk += kk * kk;
    sky += kk * y;
    ++n;
  }
  double denom = n * skk - sk * sk;
  return std::exp((n * sky - sk * sy) / denom);
}

/// Fitted modulus of the dominant root of z(k+1) = z(k) - c z(k-d), from the
/// tail of a long simulation. Matches max root modulus for simple roots.
inline double recursion_decay_factor(double c, int d, int steps = 2000) {
  std::vector<double> z = simulate_scalar_delay(c, d, steps, 1.0);
  // Sum |z| over a full oscillation period per sample point to smooth the
  // complex-pair beating, then fit.
  std::vector<double> env;
  std::size_t window = static_cast<std::size_t>(d) + 2;
  for (std::size_t k = 0; k + window < z.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < window; ++j) s += std::abs(z[k + j]);
    env.push_back(s);
  }
  return tail_decay_rate(env, env.size() / 2, env.size());
}

/// det(A - x I) by Gaussian elimination with partial pivoting.
inline double charpoly_det(const Matrix& a, double x) {
  std::size_t n = a.rows();
  Matrix m = a;
  for (std::size_t i = 0; i < n; ++i) m(i, i) -= x;
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    if (std::abs(m(pivot, col)) < 1e-300) return 0.0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(pivot, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = m(r, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
    }
  }
  return det;
}

/// Bisection for a root of det(L - x I) inside [lo, hi] (a sign change must
/// exist there). High-precision independent eigenvalue oracle.
inline double bisect_eigenvalue(const Matrix& l, double lo, double hi) {
  double flo = charpoly_det(l, lo);
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    double fmid = charpoly_det(l, mid);
    if ((flo < 0) == (fmid < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Exact roots of s^2 - s + c.
inline std::pair<std::complex<double>, std::complex<double>> quadratic_roots(double c) {
  std::complex<double> disc = std::sqrt(std::complex<double>(1.0 - 4.0 * c, 0.0));
  return {(1.0 + disc) / 2.0, (1.0 - disc) / 2.0};
}

// --- shared fixture graphs ---

/// The five-agent unit-weight graph used throughout: edges
/// {1-2, 1-4, 1-5, 2-3, 2-5, 3-5, 4-5}, Laplacian diagonal (3,3,2,2,4),
/// eigenvalues {0, 3-sqrt(2), 3, 3+sqrt(2), 5}.
inline Graph five_agent_graph() {
  return consensus_lab::build_graph(
      5, {{0, 1, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}, {1, 2, 1.0}, {1, 4, 1.0},
          {2, 4, 1.0}, {3, 4, 1.0}});
}

inline Graph k2() { return consensus_lab::build_graph(2, {{0, 1, 1.0}}); }

inline Graph triangle() {
  return consensus_lab::build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
}

}  // namespace oracles
