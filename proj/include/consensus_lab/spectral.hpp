#pragma once

#include <complex>
#include <vector>

#include "consensus_lab/linalg.hpp"

namespace consensus_lab {

/// Eigendecomposition of a graph Laplacian. eigenvalues are ascending;
/// basis.column(0) is pinned to (1/sqrt(N))*1 and the remaining columns
/// are re-orthogonalized against it, so basis^T L basis = Diag(eigenvalues).
struct Spectrum {
  Vector eigenvalues;   // ascending, eigenvalues[0] ~ 0 for any Laplacian
  Matrix basis;         // orthonormal, first column 1/sqrt(N)*1

  double lambda2() const { return eigenvalues.size() > 1 ? eigenvalues[1] : 0.0; }
  double lambda_max() const { return eigenvalues.back(); }
};

/// Cyclic Jacobi rotations on a symmetric matrix. Off-diagonal Frobenius
/// threshold 1e-12, at most 100 sweeps; throws NoConvergence past that.
/// Eigenvector sign convention: first entry above 1e-12 in magnitude is
/// positive, so the basis is reproducible run to run.
Spectrum eigendecompose(const Matrix& l);

/// Roots of a monic real polynomial, computed by Durand-Kerner.
struct PolyRoots {
  std::vector<double> coefficients;          // c0 + c1 s + ... + s^degree
  std::vector<std::complex<double>> roots;   // degree entries
  double max_modulus = 0.0;
  int iterations = 0;
};

/// coefficients: ascending, WITHOUT the leading monic 1 (so degree = size).
/// initial_radius <= 0 picks the Cauchy-bound circle.
PolyRoots poly_roots(const std::vector<double>& coefficients, double initial_radius = 0.0);

/// All d+1 roots of s^{d+1} - s^d + delta_lambda. Initial guesses on a
/// circle of radius max(1, 2*delta_lambda^{1/(d+1)}) with a 0.4 rad
/// angular offset to break symmetry.
PolyRoots poly_roots_delay(double delta_lambda, int d);

}  // namespace consensus_lab
