#pragma once

#include <optional>

#include "spectralmono/matrix.hpp"
#include "spectralmono/spectral.hpp"
#include "spectralmono/tolerances.hpp"

namespace spectralmono {

enum class Orientation : std::uint8_t { Column, Row };

// Transition matrix held column-stochastic internally (e^T P = e^T); the
// ingestion convention is recorded so reports can echo it.
struct StochasticMatrix {
  Matrix p;
  Orientation source = Orientation::Column;
  std::size_t n() const { return p.rows(); }
};

// Builds a StochasticMatrix from raw data. With no explicit convention the
// orientation is auto-detected from which sums are closest to one; row
// convention transposes into the internal column form.
StochasticMatrix make_stochastic(const Matrix& raw,
                                 std::optional<Orientation> convention = std::nullopt,
                                 const ToleranceConfig& tol = {});

// Reversibility is equivalent to diagonal symmetrizability (the Kolmogorov
// criterion, decided by the spanning-forest ratio test).
bool is_reversible(const StochasticMatrix& p, const ToleranceConfig& tol = {});

struct SojournReport {
  Vec tau;                  // 1 / (1 - P_ii)
  double eh = 0.0;          // unweighted harmonic mean of tau
  double ea_lambda = 0.0;   // trace(P)/n = arithmetic mean of the eigenvalues
  double identity_residual = 0.0;  // |EH (1 - EA) - 1|
  double bound = 0.0;       // 1 + 1/(n-1)
  Relation bound_relation = Relation::Equal;
  double shorrocks = 0.0;
  std::optional<double> geweke;  // requires a real spectrum (reversible P)
};

SojournReport sojourn_report(const StochasticMatrix& p, const ToleranceConfig& tol = {});

// Geweke mobility index; throws ComplexSpectrum when P is not reversible.
double geweke_index(const StochasticMatrix& p, const ToleranceConfig& tol = {});

struct SojournBoundClass {
  Relation relation = Relation::Equal;
  SignClass sign_class;
  double eh = 0.0;
  double bound = 0.0;
  bool consistent = true;  // the theorem's implication holds
};

SojournBoundClass sojourn_bound_class(const StochasticMatrix& p,
                                      const ToleranceConfig& tol = {});

// P = (1 - alpha) I + alpha v e^T; alpha may exceed 1 up to
// min_i 1/(1 - v_i), where the smallest diagonal entry reaches zero.
StochasticMatrix rank_one_chain(const Vec& v, double alpha,
                                const ToleranceConfig& tol = {});

// Joint evaluation of the three equivalent legs for P in the rank-one
// family: the harmonic-mean bound, the derivative sign of
// r(P[(1-m)I + mQ]D), and the order of r(P^2 D) versus r(P D).
struct RankOneEquivalenceReport {
  double alpha = 0.0;
  double eh = 0.0;
  double bound = 0.0;
  Relation eh_relation = Relation::Equal;
  Vec m_samples;
  Vec dr_samples;
  int derivative_sign = 0;  // -1, 0, +1; 2 when the samples disagree
  double r_pd = 0.0;
  double r_p2d = 0.0;
  Relation radius_relation = Relation::Equal;  // r(P^2 D) vs r(P D)
  bool consistent = false;
};

RankOneEquivalenceReport rank_one_equivalence_report(
    const Vec& v, double alpha, const std::optional<Matrix>& q, const DiagonalMatrix& d,
    const ToleranceConfig& tol = {});

}  // namespace spectralmono
