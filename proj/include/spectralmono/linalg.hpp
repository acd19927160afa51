#pragma once

#include <vector>

#include "spectralmono/matrix.hpp"
#include "spectralmono/tolerances.hpp"

namespace spectralmono {

// Eigenvalues sorted descending, column i of `vectors` paired with values[i].
struct EigenDecomposition {
  Vec values;
  Matrix vectors;
};

// Perron pair normalized so e^T v = 1 and u^T v = 1.
struct PerronPair {
  double rho = 0.0;
  Vec v;
  Vec u;
};

// Cyclic Jacobi eigensolver for symmetric matrices. Orthogonality of the
// returned basis holds by construction; converges when the off-diagonal
// Frobenius norm falls below 1e-14 * |S|_F.
EigenDecomposition jacobi_eigh(const Matrix& s, const ToleranceConfig& tol = {});

// Dominant eigenpair of an irreducible nonnegative matrix via shifted power
// iteration with Collatz-Wielandt bracketing.
PerronPair perron(const Matrix& a, const ToleranceConfig& tol = {});

// Spectral radius of a square nonnegative matrix; reducible inputs are
// decomposed into strongly connected components and the maximum of the
// component spectral radii is returned.
double spectral_radius(const Matrix& a, const ToleranceConfig& tol = {});

Matrix kron(const Matrix& a, const Matrix& b, std::size_t dim_cap = 4096);
// Left fold: (((A1 (x) A2) (x) A3) ...).
Matrix kron(const std::vector<Matrix>& factors, std::size_t dim_cap = 4096);

// (A1 (x) A2 (x) ... (x) AL) x without materializing the product; index
// convention is big-endian (factor 1 outermost).
Vec kron_apply(const std::vector<const Matrix*>& factors, const Vec& x);

// True iff the digraph of the positive pattern is strongly connected.
// A 1x1 matrix counts as irreducible only when its entry is positive.
bool is_irreducible(const Matrix& a);

bool commute_check(const Matrix& a, const Matrix& b, double tol);

// Strongly connected components of the positive pattern, each a sorted list
// of vertex indices.
std::vector<std::vector<std::size_t>> strongly_connected_components(const Matrix& a);

}  // namespace spectralmono
