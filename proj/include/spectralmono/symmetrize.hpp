#pragma once

#include "spectralmono/linalg.hpp"
#include "spectralmono/matrix.hpp"
#include "spectralmono/tolerances.hpp"

namespace spectralmono {

// Positive diagonal E with E^{-1} A E symmetric, scale-normalized so the
// first entry of each connected component of the positive pattern is 1.
struct Symmetrizer {
  DiagonalMatrix e;
};

// A = E K diag(lambda) K^T E^{-1} with K orthogonal, lambda[0] the Perron
// root, u and v the left/right Perron vectors (e^T v = u^T v = 1) and
// E_j = sqrt(v_j / u_j).
struct CanonicalForm {
  DiagonalMatrix e;
  Matrix k;
  Vec lambda;
  Vec u;
  Vec v;
};

// Shared decomposition of a commuting pair: both A and B reconstruct from
// the same E and K, with spectra lambda_a and lambda_b slot-aligned.
struct JointCanonicalForm {
  DiagonalMatrix e;
  Matrix k;
  Vec lambda_a;
  Vec lambda_b;
  Vec u;
  Vec v;
};

// P = (1/r(A)) D_u A D_u^{-1}, column-stochastic (e^T P = e^T).
struct Stochasticization {
  Matrix p;
  double rho = 0.0;
  Vec u;
};

// Detects diagonal symmetrizability by propagating entry ratios along a
// spanning forest of the positive pattern and verifying every non-tree edge
// (the Kolmogorov cycle condition). Throws PatternAsymmetric or
// CycleInconsistent (with the witness cycle) when A is not symmetrizable.
Symmetrizer detect_symmetrizer(const Matrix& a, const ToleranceConfig& tol = {});

bool is_symmetrizable(const Matrix& a, const ToleranceConfig& tol = {});

// E^{-1} A E, numerically symmetrized.
Matrix symmetrized(const Matrix& a, const Symmetrizer& sym);

CanonicalForm canonical_form(const Matrix& a, const ToleranceConfig& tol = {});

// Joint form for commuting symmetrizable irreducible A and B: eigenvalue
// clusters of the symmetrized A are rotated to diagonalize the symmetrized B
// within each cluster's eigenspace.
JointCanonicalForm joint_canonical_form(const Matrix& a, const Matrix& b,
                                        const ToleranceConfig& tol = {});

Stochasticization stochasticize(const Matrix& a, const ToleranceConfig& tol = {});

}  // namespace spectralmono
