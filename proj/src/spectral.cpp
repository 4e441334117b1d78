#include "consensus_lab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "consensus_lab/errors.hpp"

namespace consensus_lab {

namespace {

double offdiag_frobenius(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

Spectrum eigendecompose(const Matrix& l) {
  const std::size_t n = l.rows();
  if (n == 0 || l.cols() != n)
    fail(ErrorCode::kInvalidArgument, "eigendecompose needs a square matrix");

  Matrix a = l;                  // working copy, driven to diagonal
  Matrix v = Matrix::identity(n);

  constexpr double kThreshold = 1e-12;
  constexpr int kMaxSweeps = 100;

  int sweep = 0;
  while (offdiag_frobenius(a) > kThreshold) {
    if (++sweep > kMaxSweeps)
      fail(ErrorCode::kNoConvergence,
           "Jacobi eigensolver exceeded " + std::to_string(kMaxSweeps) + " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.basis = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    spec.eigenvalues[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) spec.basis(i, j) = v(i, order[j]);
  }

  // Pin column 0 to the exact Laplacian null direction, then re-orthogonalize
  // the rest against it and each other (modified Gram-Schmidt).
  double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) spec.basis(i, 0) = inv_sqrt_n;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += spec.basis(i, k) * spec.basis(i, j);
      for (std::size_t i = 0; i < n; ++i) spec.basis(i, j) -= proj * spec.basis(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += spec.basis(i, j) * spec.basis(i, j);
    norm = std::sqrt(norm);
    if (norm < 1e-8)
      fail(ErrorCode::kNoConvergence, "degenerate eigenvector after re-orthogonalization");
    for (std::size_t i = 0; i < n; ++i) spec.basis(i, j) /= norm;
  }

  // Sign convention: first entry with |.| > 1e-12 positive.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double e = spec.basis(i, j);
      if (std::abs(e) > 1e-12) {
        if (e < 0.0)
          for (std::size_t k = 0; k < n; ++k) spec.basis(k, j) = -spec.basis(k, j);
        break;
      }
    }
  }
  return spec;
}

namespace {

std::complex<double> eval_monic(const std::vector<double>& coeffs,
                                std::complex<double> s) {
  // coeffs ascending without the leading 1
  std::complex<double> acc(1.0, 0.0);
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * s + coeffs[i];
  return acc;
}

PolyRoots durand_kerner(const std::vector<double>& coeffs, double radius) {
  PolyRoots result;
  result.coefficients = coeffs;
  const std::size_t degree = coeffs.size();
  if (degree == 0) return result;
  if (degree == 1) {
    result.roots = {std::complex<double>(-coeffs[0], 0.0)};
    result.max_modulus = std::abs(coeffs[0]);
    result.iterations = 0;
    return result;
  }

  constexpr double kStepTol = 1e-12;
  constexpr int kMaxIterations = 10000;
  constexpr double kAngleOffset = 0.4;  // breaks symmetry with real axis

  std::vector<std::complex<double>> roots(degree);
  for (std::size_t i = 0; i < degree; ++i) {
    double angle = kAngleOffset + 2.0 * M_PI * static_cast<double>(i) /
                                      static_cast<double>(degree);
    roots[i] = std::polar(radius, angle);
  }

  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    double max_step = 0.0;
    for (std::size_t i = 0; i < degree; ++i) {
      std::complex<double> denom(1.0, 0.0);
      for (std::size_t j = 0; j < degree; ++j)
        if (j != i) denom *= roots[i] - roots[j];
      if (std::abs(denom) < 1e-300) {
        // coincident estimates; nudge apart and retry this sweep
        roots[i] += std::complex<double>(1e-8, 1e-8);
        max_step = 1.0;
        continue;
      }
      std::complex<double> delta = eval_monic(coeffs, roots[i]) / denom;
      roots[i] -= delta;
      max_step = std::max(max_step, std::abs(delta));
    }
    if (max_step < kStepTol) break;
  }
  if (iter >= kMaxIterations)
    fail(ErrorCode::kNoConvergence, "Durand-Kerner hit the iteration cap");

  std::sort(roots.begin(), roots.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              if (x.real() != y.real()) return x.real() < y.real();
              return x.imag() < y.imag();
            });
  result.roots = roots;
  result.iterations = iter;
  for (const auto& r : roots) result.max_modulus = std::max(result.max_modulus, std::abs(r));
  return result;
}

}  // namespace

PolyRoots poly_roots(const std::vector<double>& coefficients, double initial_radius) {
  double radius = initial_radius;
  if (radius <= 0.0) {
    double cmax = 0.0;
    for (double c : coefficients) cmax = std::max(cmax, std::abs(c));
    radius = 1.0 + cmax;  // Cauchy bound
  }
  return durand_kerner(coefficients, radius);
}

PolyRoots poly_roots_delay(double delta_lambda, int d) {
  if (!(delta_lambda > 0.0))
    fail(ErrorCode::kInvalidArgument, "delta_lambda must be positive");
  if (d < 0) fail(ErrorCode::kInvalidArgument, "delay must be >= 0");

  // s^{d+1} - s^d + c; for d=0 the two monomials share the constant slot.
  std::vector<double> coeffs(static_cast<std::size_t>(d) + 1, 0.0);
  coeffs[static_cast<std::size_t>(d)] = -1.0;
  coeffs[0] += delta_lambda;

  double radius = std::max(
      1.0, 2.0 * std::pow(delta_lambda, 1.0 / static_cast<double>(d + 1)));
  return durand_kerner(coeffs, radius);
}

}  // namespace consensus_lab
