#pragma once

#include <vector>

#include "spectralmono/matrix.hpp"
#include "spectralmono/symmetrize.hpp"
#include "spectralmono/tolerances.hpp"

namespace spectralmono {

// Multi-site mutation-selection model: M_m = (x)_k [(1-m_k) r_k I_k + m_k A_k]
// with fitness diagonal D over the product space. Flat indices are big-endian
// (site 1 outermost): flat = ((i_1 n_2 + i_2) n_3 + ...) with 0-based i_k.
struct KroneckerModel {
  std::vector<Matrix> factors;       // symmetrizable irreducible nonnegative
  Vec rates;                         // m_k in [0, 1]
  DiagonalMatrix d;                  // size prod n_k
  Vec factor_radii;                  // r(A_k); all 1 for stochastic factors
  std::vector<std::size_t> sizes;

  std::size_t site_count() const { return factors.size(); }
  std::size_t total_dim() const;
  std::size_t flat_index(const std::vector<std::size_t>& multi) const;
  std::vector<std::size_t> multi_index(std::size_t flat) const;
};

KroneckerModel make_kronecker_model(std::vector<Matrix> factors, Vec rates,
                                    DiagonalMatrix d, const ToleranceConfig& tol = {});

// The assembled N x N mutation matrix (without D).
Matrix build_mm(const KroneckerModel& model, const ToleranceConfig& tol = {});

// r(M_m D).
double growth_rate(const KroneckerModel& model, const ToleranceConfig& tol = {});

// True when D takes at least two values over site k's index with the other
// sites held fixed; this is exactly when the growth rate is strictly
// decreasing in m_k.
bool d_condition(const KroneckerModel& model, std::size_t site,
                 const ToleranceConfig& tol = {});

struct GradientReport {
  double r = 0.0;
  Vec grad;                      // u^T (dM/dm_k) D v per site
  Vec grad_fd;                   // central-difference cross-check
  std::vector<bool> d_cond;      // per-site strictness condition
  std::vector<int> strictness;   // -1 strict negative expected, 0 weak
  bool regime_warning = false;   // some m_k >= 1/2: no sign guarantee
};

// Gradient via the Perron sensitivity formula; the per-site derivative
// matrices are applied as Kronecker-vector products without materializing
// them. Requires m in the open interval (0, 1)^L.
GradientReport grad_m(const KroneckerModel& model, const ToleranceConfig& tol = {},
                      bool with_fd_check = true);

// Per-factor stochasticization: the growth rate of the original model equals
// prod_k r(A_k) times the growth rate of the stochasticized model.
struct GeneralizedModel {
  KroneckerModel stochastic_model;
  double scale = 1.0;            // prod r(A_k)
  std::vector<Vec> factor_left_vectors;
};

GeneralizedModel generalized_model(const KroneckerModel& model,
                                   const ToleranceConfig& tol = {});

}  // namespace spectralmono
