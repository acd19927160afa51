#pragma once

#include <cstddef>

namespace spectralmono {

// Central tolerance configuration. Values are relative to the natural scale
// of the quantity being checked unless a comment says otherwise. Ops take
// this struct as a trailing parameter so the CLI can override defaults.
struct ToleranceConfig {
  double tol_sym = 1e-9;     // symmetry residual, relative to 1 + |S|_inf
  double tol_eig = 1e-10;    // eigen residuals and reconstruction checks
  double tol_orth = 1e-10;   // orthogonality of eigenvector bases
  double tol_scalar = 1e-9;  // nonscalar-diagonal detection band
  double tol_cycle = 1e-8;   // symmetrizability cycle-consistency band
  double tol_norm = 1e-10;   // vector normalization checks
  double tol_cluster = 1e-7; // eigenvalue clustering, relative to 1 + |S|_inf
  double tol_mono = 1e-10;   // grid monotonicity slack, relative to 1 + r
  double zero_tol = 1e-8;    // eigenvalue sign band, relative to max |lambda|
  double fd_step = 1e-6;     // default finite-difference step
  int max_sweeps = 64;       // Jacobi sweep cap
  long max_iters = 500000;   // power-iteration cap
  std::size_t dim_cap = 4096; // Kronecker product dimension cap
};

}  // namespace spectralmono
