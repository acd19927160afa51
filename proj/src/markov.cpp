#include "spectralmono/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectralmono/errors.hpp"
#include "spectralmono/linalg.hpp"
#include "spectralmono/symmetrize.hpp"

namespace spectralmono {

namespace {

double max_column_sum_error(const Matrix& m) {
  double worst = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

double max_row_sum_error(const Matrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

constexpr double kDetectBand = 1e-8;

}  // namespace

StochasticMatrix make_stochastic(const Matrix& raw,
                                 std::optional<Orientation> convention,
                                 const ToleranceConfig& tol) {
  require_square(raw, "make_stochastic");
  require_finite(raw, "make_stochastic");
  require_nonnegative(raw, "make_stochastic");
  (void)tol;

  const double col_err = max_column_sum_error(raw);
  const double row_err = max_row_sum_error(raw);

  Orientation source;
  if (convention.has_value()) {
    source = *convention;
    const double err = source == Orientation::Column ? col_err : row_err;
    if (err > kDetectBand)
      fail(ErrorCode::NotStochastic, "matrix does not match the requested convention");
  } else if (col_err <= kDetectBand) {
    source = Orientation::Column;  // doubly stochastic also lands here
  } else if (row_err <= kDetectBand) {
    source = Orientation::Row;
  } else {
    fail(ErrorCode::NotStochastic, "neither row nor column sums are one");
  }

  StochasticMatrix out;
  out.source = source;
  out.p = source == Orientation::Column ? raw : raw.transposed();
  return out;
}

bool is_reversible(const StochasticMatrix& p, const ToleranceConfig& tol) {
  if (!is_irreducible(p.p))
    fail(ErrorCode::Reducible, "is_reversible requires an irreducible chain");
  return is_symmetrizable(p.p, tol);
}

SojournReport sojourn_report(const StochasticMatrix& p, const ToleranceConfig& tol) {
  const std::size_t n = p.n();
  if (n < 2) fail(ErrorCode::InvalidInput, "sojourn_report requires n >= 2");

  SojournReport rep;
  rep.tau.resize(n);
  double exit_sum = 0.0;  // sum of (1 - P_ii)
  for (std::size_t i = 0; i < n; ++i) {
    const double stay = p.p(i, i);
    if (stay >= 1.0 - 1e-12)
      fail(ErrorCode::AbsorbingState,
           "state " + std::to_string(i + 1) + " has no exit probability");
    rep.tau[i] = 1.0 / (1.0 - stay);
    exit_sum += 1.0 - stay;
  }
  rep.eh = static_cast<double>(n) / exit_sum;
  rep.ea_lambda = p.p.trace() / static_cast<double>(n);
  rep.identity_residual = std::abs(rep.eh * (1.0 - rep.ea_lambda) - 1.0);
  rep.bound = 1.0 + 1.0 / static_cast<double>(n - 1);
  rep.shorrocks = exit_sum / static_cast<double>(n - 1);

  const double band = 1e-9 * (1.0 + rep.eh);
  if (rep.eh - rep.bound > band)
    rep.bound_relation = Relation::Greater;
  else if (rep.bound - rep.eh > band)
    rep.bound_relation = Relation::Less;
  else
    rep.bound_relation = Relation::Equal;

  if (is_symmetrizable(p.p, tol)) {
    const Symmetrizer sym = detect_symmetrizer(p.p, tol);
    const EigenDecomposition eig = jacobi_eigh(symmetrized(p.p, sym), tol);
    double abs_sum = 0.0;
    for (double lam : eig.values) abs_sum += std::abs(lam);
    rep.geweke = (static_cast<double>(n) - abs_sum) / static_cast<double>(n - 1);
  }
  return rep;
}

double geweke_index(const StochasticMatrix& p, const ToleranceConfig& tol) {
  SojournReport rep = sojourn_report(p, tol);
  if (!rep.geweke.has_value())
    fail(ErrorCode::ComplexSpectrum,
         "Geweke index needs a real spectrum; the chain is not reversible");
  return *rep.geweke;
}

SojournBoundClass sojourn_bound_class(const StochasticMatrix& p,
                                      const ToleranceConfig& tol) {
  if (!is_reversible(p, tol))
    fail(ErrorCode::ComplexSpectrum,
         "sojourn_bound_class requires a reversible chain (real spectrum)");
  const CanonicalForm form = canonical_form(p.p, tol);
  const SojournReport rep = sojourn_report(p, tol);

  SojournBoundClass out;
  out.sign_class = classify_eigen_signs(form.lambda, default_zero_tol(form.lambda, tol));
  out.relation = rep.bound_relation;
  out.eh = rep.eh;
  out.bound = rep.bound;
  switch (out.sign_class.tag) {
    case SignClassTag::C1_AllPositive:
      out.consistent = out.relation == Relation::Greater;
      break;
    case SignClassTag::C2_NonPerronNegative:
      out.consistent = out.relation == Relation::Less;
      break;
    case SignClassTag::C3_NonPerronZero:
      out.consistent = out.relation == Relation::Equal;
      break;
    case SignClassTag::C4_SameSignWithZeros:
      out.consistent = out.sign_class.c4_sign > 0 ? out.relation == Relation::Greater
                                                  : out.relation == Relation::Less;
      break;
    case SignClassTag::Mixed:
      out.consistent = true;
      break;
  }
  return out;
}

StochasticMatrix rank_one_chain(const Vec& v, double alpha, const ToleranceConfig& tol) {
  const std::size_t n = v.size();
  if (n < 2) fail(ErrorCode::InvalidInput, "rank_one_chain requires n >= 2");
  for (double x : v)
    if (!(x > 0.0)) fail(ErrorCode::InvalidInput, "rank_one_chain requires v > 0");
  if (std::abs(sum(v) - 1.0) > 1e-9)
    fail(ErrorCode::InvalidInput, "rank_one_chain requires e^T v = 1");
  (void)tol;

  double alpha_max = std::numeric_limits<double>::infinity();
  for (double x : v) alpha_max = std::min(alpha_max, 1.0 / (1.0 - x));
  if (!(alpha > 0.0) || alpha > alpha_max * (1.0 + 1e-12))
    fail(ErrorCode::AlphaOutOfRange,
         "alpha must lie in (0, " + std::to_string(alpha_max) + "]");

  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double value = alpha * v[i];
      if (i == j) value += 1.0 - alpha;
      // Exactly at the alpha bound the smallest diagonal entry is zero; clip
      // the rounding residue.
      if (value < 0.0 && value > -1e-12) value = 0.0;
      p(i, j) = value;
    }
  require_nonnegative(p, "rank_one_chain");
  return {std::move(p), Orientation::Column};
}

RankOneEquivalenceReport rank_one_equivalence_report(const Vec& v, double alpha,
                                                     const std::optional<Matrix>& q,
                                                     const DiagonalMatrix& d,
                                                     const ToleranceConfig& tol) {
  const StochasticMatrix p = rank_one_chain(v, alpha, tol);
  const std::size_t n = p.n();
  if (d.size() != n || !d.positive() || !d.nonscalar(tol.tol_scalar))
    fail(ErrorCode::InvalidInput,
         "rank_one_equivalence_report requires a nonscalar positive diagonal");

  Matrix q_eff;
  if (q.has_value()) {
    require_same_shape(p.p, *q, "rank_one_equivalence_report");
    if (!commute_check(p.p, *q, tol.tol_eig))
      fail(ErrorCode::NotCommuting, "Q must commute with P");
    q_eff = *q;
  } else {
    q_eff = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q_eff(i, j) = v[i];
  }

  RankOneEquivalenceReport rep;
  rep.alpha = alpha;
  const SojournReport sojourn = sojourn_report(p, tol);
  rep.eh = sojourn.eh;
  rep.bound = sojourn.bound;
  rep.eh_relation = sojourn.bound_relation;

  const HomotopyFamily family =
      make_family(FamilyShape::AffineProduct, p.p, q_eff, d, tol);
  rep.m_samples = {0.0, 0.25, 0.5, 0.75, 1.0};
  rep.dr_samples.reserve(rep.m_samples.size());
  bool all_pos = true, all_neg = true, all_zero = true;
  for (double m : rep.m_samples) {
    const DerivativeReport dr = drdm(family, m, tol);
    rep.dr_samples.push_back(dr.dr_analytic);
    const double band = 1e-10 * (1.0 + std::abs(dr.r_value));
    if (dr.dr_analytic > band) {
      all_neg = false;
      all_zero = false;
    } else if (dr.dr_analytic < -band) {
      all_pos = false;
      all_zero = false;
    } else {
      all_pos = false;
      all_neg = false;
    }
  }
  if (all_zero)
    rep.derivative_sign = 0;
  else if (all_pos)
    rep.derivative_sign = 1;
  else if (all_neg)
    rep.derivative_sign = -1;
  else
    rep.derivative_sign = 2;

  rep.r_pd = spectral_radius(right_scale(p.p, d), tol);
  rep.r_p2d = spectral_radius(right_scale(p.p * p.p, d), tol);
  const double band = 1e-9 * std::max({1.0, rep.r_pd, rep.r_p2d});
  if (rep.r_p2d - rep.r_pd > band)
    rep.radius_relation = Relation::Greater;
  else if (rep.r_pd - rep.r_p2d > band)
    rep.radius_relation = Relation::Less;
  else
    rep.radius_relation = Relation::Equal;

  // The corollaries tie the legs together: EH above the bound iff the
  // derivative is negative iff r(P^2 D) < r(P D); same pattern for the
  // equality and reversed cases.
  switch (rep.eh_relation) {
    case Relation::Greater:
      rep.consistent =
          rep.derivative_sign == -1 && rep.radius_relation == Relation::Less;
      break;
    case Relation::Equal:
      rep.consistent =
          rep.derivative_sign == 0 && rep.radius_relation == Relation::Equal;
      break;
    case Relation::Less:
      rep.consistent =
          rep.derivative_sign == 1 && rep.radius_relation == Relation::Greater;
      break;
  }
  return rep;
}

}  // namespace spectralmono
