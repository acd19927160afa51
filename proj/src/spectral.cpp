#include "spectralmono/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectralmono/errors.hpp"

namespace spectralmono {

const char* sign_class_name(SignClassTag tag) {
  switch (tag) {
    case SignClassTag::C1_AllPositive: return "C1";
    case SignClassTag::C2_NonPerronNegative: return "C2";
    case SignClassTag::C3_NonPerronZero: return "C3";
    case SignClassTag::C4_SameSignWithZeros: return "C4";
    case SignClassTag::Mixed: return "Mixed";
  }
  return "?";
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Less: return "<";
    case Relation::Equal: return "=";
    case Relation::Greater: return ">";
  }
  return "?";
}

const char* predicted_direction_name(PredictedDirection p) {
  switch (p) {
    case PredictedDirection::Negative: return "negative";
    case PredictedDirection::Positive: return "positive";
    case PredictedDirection::Zero: return "zero";
    case PredictedDirection::NonPositive: return "nonpositive";
    case PredictedDirection::NonNegative: return "nonnegative";
    case PredictedDirection::None: return "none";
  }
  return "?";
}

const char* order_prediction_name(OrderPrediction p) {
  switch (p) {
    case OrderPrediction::GreaterStrict: return ">";
    case OrderPrediction::GreaterOrEqual: return ">=";
    case OrderPrediction::LessStrict: return "<";
    case OrderPrediction::LessOrEqual: return "<=";
    case OrderPrediction::Equal: return "=";
    case OrderPrediction::None: return "none";
  }
  return "?";
}

SignClass classify_eigen_signs(const Vec& lambda, double zero_tol) {
  if (lambda.empty()) fail(ErrorCode::EmptySpectrum, "classify_eigen_signs");
  std::size_t pos = 0, neg = 0, zero = 0;
  for (std::size_t i = 1; i < lambda.size(); ++i) {
    if (lambda[i] > zero_tol)
      ++pos;
    else if (lambda[i] < -zero_tol)
      ++neg;
    else
      ++zero;
  }
  SignClass out;
  out.zero_tol = zero_tol;
  const std::size_t rest = lambda.size() - 1;
  if (lambda[0] > zero_tol && pos == rest)
    out.tag = SignClassTag::C1_AllPositive;
  else if (neg == rest && rest > 0)
    out.tag = SignClassTag::C2_NonPerronNegative;
  else if (zero == rest)
    out.tag = SignClassTag::C3_NonPerronZero;
  else if (zero > 0 && (pos == 0 || neg == 0)) {
    out.tag = SignClassTag::C4_SameSignWithZeros;
    out.c4_sign = pos > 0 ? 1 : -1;
  } else {
    out.tag = SignClassTag::Mixed;
  }
  return out;
}

double default_zero_tol(const Vec& lambda, const ToleranceConfig& tol) {
  double scale = 0.0;
  for (double x : lambda) scale = std::max(scale, std::abs(x));
  return tol.zero_tol * std::max(scale, 1e-300);
}

Matrix HomotopyFamily::at(double m) const {
  if (shape == FamilyShape::AffineProduct) {
    Matrix t = b;
    t *= m;
    for (std::size_t i = 0; i < t.rows(); ++i) t(i, i) += (1.0 - m) * r_b;
    return a * t;
  }
  Matrix out = a;
  out *= (1.0 - m);
  Matrix bm = b;
  bm *= m;
  out += bm;
  return out;
}

Vec HomotopyFamily::lambda_m(double m) const {
  const std::size_t n = joint.lambda_a.size();
  Vec lm(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (shape == FamilyShape::AffineProduct)
      lm[i] = joint.lambda_a[i] * ((1.0 - m) * r_b + m * joint.lambda_b[i]);
    else
      lm[i] = (1.0 - m) * joint.lambda_a[i] + m * joint.lambda_b[i];
  }
  return lm;
}

Matrix HomotopyFamily::derivative() const {
  if (shape == FamilyShape::AffineProduct) {
    Matrix t = b;
    for (std::size_t i = 0; i < t.rows(); ++i) t(i, i) -= r_b;
    return a * t;
  }
  return b - a;
}

HomotopyFamily make_family(FamilyShape shape, const Matrix& a, const Matrix& b,
                           const DiagonalMatrix& d, const ToleranceConfig& tol) {
  require_square(a, "make_family");
  require_same_shape(a, b, "make_family");
  if (d.size() != a.rows() || !d.positive())
    fail(ErrorCode::InvalidInput, "make_family requires a positive diagonal of matching size");
  HomotopyFamily f;
  f.shape = shape;
  f.a = a;
  f.b = b;
  f.d = d;
  f.joint = joint_canonical_form(a, b, tol);
  f.r_a = f.joint.lambda_a[0];
  f.r_b = f.joint.lambda_b[0];
  if (shape == FamilyShape::ConvexCombination &&
      std::abs(f.r_a - f.r_b) > tol.tol_eig * (1.0 + std::max(f.r_a, f.r_b)))
    fail(ErrorCode::InvalidInput,
         "convex combination requires equal Perron roots of A and B");
  return f;
}

namespace {

void check_unit_range(double m) {
  if (!(m >= -1e-12 && m <= 1.0 + 1e-12))
    fail(ErrorCode::InvalidInput, "homotopy parameter m must lie in [0, 1]");
}

}  // namespace

SosResult spectral_radius_sos(const HomotopyFamily& f, double m,
                              const ToleranceConfig& tol) {
  check_unit_range(m);
  const std::size_t n = f.a.rows();
  const Vec lm = f.lambda_m(m);
  const DiagonalMatrix dh = f.d.sqrt();

  // S_m = D^{1/2} K Lambda_m K^T D^{1/2}
  Matrix kl = f.joint.k;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) kl(i, j) *= lm[j];
  Matrix s_m = kl * f.joint.k.transposed();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s_m(i, j) *= dh(i) * dh(j);

  EigenDecomposition eig = jacobi_eigh(s_m, tol);
  const double r = eig.values[0];
  Vec x_hat = eig.vectors.column(0);
  if (sum(x_hat) < 0.0)
    for (double& x : x_hat) x = -x;

  Vec dx(n);
  for (std::size_t i = 0; i < n; ++i) dx[i] = dh(i) * x_hat[i];
  Vec y = f.joint.k.apply_transpose(dx);

  double r_sos = 0.0;
  for (std::size_t i = 0; i < n; ++i) r_sos += lm[i] * y[i] * y[i];
  if (std::abs(r_sos - r) > std::max(tol.tol_eig, 1e-12) * (1.0 + std::abs(r)))
    fail(ErrorCode::SOSMismatch,
         "sum-of-squares expansion disagrees with the eigenvalue");
  return {r, std::move(y), std::move(x_hat)};
}

FamilyPerron family_perron(const HomotopyFamily& f, double m,
                           const ToleranceConfig& tol) {
  SosResult sos = spectral_radius_sos(f, m, tol);
  const std::size_t n = f.a.rows();
  const DiagonalMatrix dh = f.d.sqrt();
  Vec v(n), u(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = f.joint.e(i) * sos.x_hat[i] / dh(i);
    u[i] = sos.x_hat[i] * dh(i) / f.joint.e(i);
  }
  const double sv = sum(v);
  for (double& x : v) x /= sv;
  const double uv = dot(u, v);
  for (double& x : u) x /= uv;
  return {sos.r, std::move(v), std::move(u)};
}

namespace {

double sensitivity_value(const HomotopyFamily& f, double m, const ToleranceConfig& tol) {
  FamilyPerron fp = family_perron(f, m, tol);
  Vec dv(fp.v.size());
  for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = f.d(i) * fp.v[i];
  const Vec t = f.derivative().apply(dv);
  return dot(fp.u, t);
}

// Second-order one-sided difference used at the interval endpoints.
double one_sided_fd(const HomotopyFamily& f, double m, double h, int direction,
                    const ToleranceConfig& tol) {
  const double s = static_cast<double>(direction);
  const double r0 = spectral_radius_sos(f, m, tol).r;
  const double r1 = spectral_radius_sos(f, m + s * h, tol).r;
  const double r2 = spectral_radius_sos(f, m + 2.0 * s * h, tol).r;
  return s * (-3.0 * r0 + 4.0 * r1 - r2) / (2.0 * h);
}

double fd_derivative(const HomotopyFamily& f, double m, double h,
                     const ToleranceConfig& tol) {
  if (m - h >= 0.0 && m + h <= 1.0) {
    const double rp = spectral_radius_sos(f, m + h, tol).r;
    const double rm = spectral_radius_sos(f, m - h, tol).r;
    return (rp - rm) / (2.0 * h);
  }
  return one_sided_fd(f, m, h, m - h < 0.0 ? 1 : -1, tol);
}

PredictedDirection convex_prediction(const JointCanonicalForm& joint, double band) {
  bool all_gt = true, all_lt = true, any_eq = false;
  for (std::size_t i = 1; i < joint.lambda_a.size(); ++i) {
    const double diff = joint.lambda_a[i] - joint.lambda_b[i];
    if (std::abs(diff) <= band) {
      any_eq = true;
      continue;
    }
    if (diff > 0.0)
      all_lt = false;
    else
      all_gt = false;
  }
  if (all_gt && all_lt) return PredictedDirection::Zero;  // every slot tied
  if (all_gt) return any_eq ? PredictedDirection::NonPositive : PredictedDirection::Negative;
  if (all_lt) return any_eq ? PredictedDirection::NonNegative : PredictedDirection::Positive;
  return PredictedDirection::None;
}

PredictedDirection affine_prediction(const SignClass& cls) {
  switch (cls.tag) {
    case SignClassTag::C1_AllPositive: return PredictedDirection::Negative;
    case SignClassTag::C2_NonPerronNegative: return PredictedDirection::Positive;
    case SignClassTag::C3_NonPerronZero: return PredictedDirection::Zero;
    case SignClassTag::C4_SameSignWithZeros:
      return cls.c4_sign > 0 ? PredictedDirection::NonPositive
                             : PredictedDirection::NonNegative;
    case SignClassTag::Mixed: return PredictedDirection::None;
  }
  return PredictedDirection::None;
}

}  // namespace

DerivativeReport drdm(const HomotopyFamily& f, double m, const ToleranceConfig& tol) {
  check_unit_range(m);
  SosResult sos = spectral_radius_sos(f, m, tol);
  const std::size_t n = f.a.rows();

  DerivativeReport rep;
  rep.m = m;
  rep.r_value = sos.r;
  rep.y_squared.resize(n);
  rep.per_term.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.y_squared[i] = sos.y[i] * sos.y[i];
    if (f.shape == FamilyShape::AffineProduct)
      rep.per_term[i] = f.joint.lambda_a[i] * (f.joint.lambda_b[i] - f.r_b) *
                        rep.y_squared[i];
    else
      rep.per_term[i] = (f.joint.lambda_b[i] - f.joint.lambda_a[i]) * rep.y_squared[i];
  }
  double acc = 0.0;
  for (double t : rep.per_term) acc += t;
  rep.dr_analytic = acc;

  rep.dr_fd = fd_derivative(f, m, tol.fd_step, tol);
  rep.fd_tol = std::max(1e-6, 10.0 * tol.fd_step * tol.fd_step);
  rep.fd_consistent = std::abs(rep.dr_analytic - rep.dr_fd) <= rep.fd_tol;

  rep.a_sign_class =
      classify_eigen_signs(f.joint.lambda_a, default_zero_tol(f.joint.lambda_a, tol));
  if (!f.d.nonscalar(tol.tol_scalar))
    rep.predicted = PredictedDirection::Zero;
  else if (f.shape == FamilyShape::AffineProduct)
    rep.predicted = affine_prediction(rep.a_sign_class);
  else
    rep.predicted = convex_prediction(f.joint, default_zero_tol(f.joint.lambda_a, tol));
  return rep;
}

double drdm_fd(const HomotopyFamily& f, double m, double h, const ToleranceConfig& tol) {
  if (!(h > 0.0)) fail(ErrorCode::InvalidInput, "drdm_fd requires h > 0");
  if (m - h < 0.0 || m + h > 1.0)
    fail(ErrorCode::StepTooLarge, "central difference would leave [0, 1]");
  const double rp = spectral_radius_sos(f, m + h, tol).r;
  const double rm = spectral_radius_sos(f, m - h, tol).r;
  const double fd = (rp - rm) / (2.0 * h);
  const double sens = sensitivity_value(f, m, tol);
  // Truncation plus a roundoff floor: the subtraction amplifies eigenvalue
  // rounding by 1/h, so a bare O(h^2) bound is unattainable for small h.
  const double eps = std::numeric_limits<double>::epsilon();
  const double band =
      10.0 * h * h + 64.0 * eps * (1.0 + std::max(std::abs(rp), std::abs(rm))) / h;
  if (std::abs(fd - sens) > band)
    fail(ErrorCode::OracleMismatch,
         "central difference and Perron sensitivity derivative disagree");
  return fd;
}

OrderingReport cohen_ordering(const Matrix& a, const DiagonalMatrix& d,
                              const ToleranceConfig& tol) {
  require_square(a, "cohen_ordering");
  require_nonnegative(a, "cohen_ordering");
  if (d.size() != a.rows() || !d.positive())
    fail(ErrorCode::InvalidInput, "cohen_ordering requires a positive diagonal");

  Symmetrizer sym;
  try {
    sym = detect_symmetrizer(a, tol);
  } catch (const SpectralError& err) {
    if (err.code() == ErrorCode::PatternAsymmetric ||
        err.code() == ErrorCode::CycleInconsistent)
      fail(ErrorCode::NotSymmetrizable, std::string("cohen_ordering: ") + err.what());
    throw;
  }
  const EigenDecomposition eig = jacobi_eigh(symmetrized(a, sym), tol);

  OrderingReport rep;
  rep.sign_class = classify_eigen_signs(eig.values, default_zero_tol(eig.values, tol));
  rep.lhs = spectral_radius(a, tol) * spectral_radius(right_scale(a, d), tol);
  rep.rhs = spectral_radius(right_scale(a * a, d), tol);

  const double band = 1e-9 * std::max({1.0, std::abs(rep.lhs), std::abs(rep.rhs)});
  if (rep.lhs - rep.rhs > band)
    rep.relation = Relation::Greater;
  else if (rep.rhs - rep.lhs > band)
    rep.relation = Relation::Less;
  else
    rep.relation = Relation::Equal;

  rep.strict_expected = is_irreducible(a) && d.nonscalar(tol.tol_scalar);
  if (!d.nonscalar(tol.tol_scalar)) {
    rep.predicted = OrderPrediction::Equal;
  } else {
    switch (rep.sign_class.tag) {
      case SignClassTag::C1_AllPositive:
        rep.predicted = rep.strict_expected ? OrderPrediction::GreaterStrict
                                            : OrderPrediction::GreaterOrEqual;
        break;
      case SignClassTag::C2_NonPerronNegative:
        rep.predicted = rep.strict_expected ? OrderPrediction::LessStrict
                                            : OrderPrediction::LessOrEqual;
        break;
      case SignClassTag::C3_NonPerronZero:
        rep.predicted = OrderPrediction::Equal;
        break;
      case SignClassTag::C4_SameSignWithZeros:
        rep.predicted = rep.sign_class.c4_sign > 0 ? OrderPrediction::GreaterOrEqual
                                                   : OrderPrediction::LessOrEqual;
        break;
      case SignClassTag::Mixed:
        rep.predicted = OrderPrediction::None;
        break;
    }
  }

  switch (rep.predicted) {
    case OrderPrediction::GreaterStrict:
      rep.consistent = rep.relation == Relation::Greater;
      break;
    case OrderPrediction::GreaterOrEqual:
      rep.consistent = rep.relation != Relation::Less;
      break;
    case OrderPrediction::LessStrict:
      rep.consistent = rep.relation == Relation::Less;
      break;
    case OrderPrediction::LessOrEqual:
      rep.consistent = rep.relation != Relation::Greater;
      break;
    case OrderPrediction::Equal:
      rep.consistent = rep.relation == Relation::Equal;
      break;
    case OrderPrediction::None:
      rep.consistent = true;
      break;
  }
  return rep;
}

Vec uniform_grid(std::size_t points) {
  if (points < 2) fail(ErrorCode::InvalidInput, "grid needs at least two points");
  Vec g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

namespace {

void require_column_stochastic(const Matrix& p, const char* op) {
  require_square(p, op);
  require_nonnegative(p, op);
  for (std::size_t j = 0; j < p.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) s += p(i, j);
    if (std::abs(s - 1.0) > 1e-8)
      fail(ErrorCode::NotStochastic, std::string(op) + " requires e^T P = e^T");
  }
}

Matrix mixture_with_identity(const Matrix& p, double m) {
  Matrix out = p;
  out *= m;
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += 1.0 - m;
  return out;
}

}  // namespace

KarlinProfile karlin_sweep(const Matrix& p, const DiagonalMatrix& d, const Vec& grid,
                           const ToleranceConfig& tol) {
  require_column_stochastic(p, "karlin_sweep");
  if (!is_irreducible(p)) fail(ErrorCode::Reducible, "karlin_sweep requires irreducible P");
  if (d.size() != p.rows() || !d.positive())
    fail(ErrorCode::InvalidInput, "karlin_sweep requires a positive diagonal");

  KarlinProfile prof;
  prof.m = grid;
  prof.r.reserve(grid.size());
  for (double m : grid)
    prof.r.push_back(spectral_radius(right_scale(mixture_with_identity(p, m), d), tol));

  prof.decreasing_ok = true;
  for (std::size_t k = 0; k + 1 < prof.r.size(); ++k) {
    const double slack = tol.tol_mono * (1.0 + prof.r[k]);
    if (prof.r[k + 1] - prof.r[k] > slack) {
      prof.decreasing_ok = false;
      break;
    }
  }
  return prof;
}

SquaredFamilyProfile squared_family_sweep(const Matrix& p, const DiagonalMatrix& d,
                                          const Vec& grid, const ToleranceConfig& tol) {
  require_column_stochastic(p, "squared_family_sweep");
  if (!is_symmetrizable(p, tol))
    fail(ErrorCode::NotSymmetrizable, "squared_family_sweep requires symmetrizable P");
  if (d.size() != p.rows() || !d.positive())
    fail(ErrorCode::InvalidInput, "squared_family_sweep requires a positive diagonal");

  SquaredFamilyProfile prof;
  prof.m = grid;
  prof.r.reserve(grid.size());
  for (double m : grid) {
    const Matrix mm = mixture_with_identity(p, m);
    prof.r.push_back(spectral_radius(right_scale(mm * mm, d), tol));
  }

  std::size_t argmin = 0;
  for (std::size_t k = 1; k < prof.r.size(); ++k)
    if (prof.r[k] < prof.r[argmin]) argmin = k;
  prof.argmin_m = prof.m[argmin];

  prof.unimodal_ok = true;
  for (std::size_t k = 0; k + 1 < prof.r.size(); ++k) {
    const double slack = tol.tol_mono * (1.0 + prof.r[k]);
    const bool descending_leg = k + 1 <= argmin;
    const double step = prof.r[k + 1] - prof.r[k];
    if ((descending_leg && step > slack) || (!descending_leg && step < -slack)) {
      prof.unimodal_ok = false;
      break;
    }
  }
  return prof;
}

LevingerProfile levinger_sweep(const Matrix& a, const Vec& grid,
                               const ToleranceConfig& tol) {
  require_square(a, "levinger_sweep");
  require_nonnegative(a, "levinger_sweep");
  if (!is_irreducible(a)) fail(ErrorCode::Reducible, "levinger_sweep requires irreducible A");

  const Matrix at = a.transposed();
  LevingerProfile prof;
  prof.m = grid;
  prof.r.reserve(grid.size());
  for (double m : grid) {
    Matrix blend = a;
    blend *= (1.0 - m);
    Matrix tr = at;
    tr *= m;
    blend += tr;
    prof.r.push_back(spectral_radius(blend, tol));
  }

  // r(m) = r(1-m) since the two blends are transposes of each other.
  prof.symmetric_ok = true;
  for (std::size_t k = 0; k < prof.r.size(); ++k) {
    const std::size_t mirror = prof.r.size() - 1 - k;
    if (std::abs(prof.r[k] - prof.r[mirror]) > 1e-9 * (1.0 + prof.r[k])) {
      prof.symmetric_ok = false;
      break;
    }
  }

  prof.monotone_halves_ok = true;
  for (std::size_t k = 0; k + 1 < prof.r.size(); ++k) {
    const double slack = tol.tol_mono * (1.0 + prof.r[k]);
    const double step = prof.r[k + 1] - prof.r[k];
    const bool first_half = prof.m[k + 1] <= 0.5 + 1e-15;
    const bool second_half = prof.m[k] >= 0.5 - 1e-15;
    if ((first_half && step > slack) || (second_half && step < -slack)) {
      prof.monotone_halves_ok = false;
      break;
    }
  }
  return prof;
}

bool cnd_check(const Matrix& s, const ToleranceConfig& tol) {
  require_square(s, "cnd_check");
  const std::size_t n = s.rows();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::abs(s(i, j) - s(j, i)));
  if (asym > tol.tol_sym * (1.0 + s.norm_inf()))
    fail(ErrorCode::NotSymmetric, "cnd_check requires a symmetric matrix");
  if (n == 1) return true;  // the hyperplane e^T x = 0 is trivial

  // Householder reflection mapping e_1 to e/sqrt(n); columns 2..n span the
  // orthogonal complement of e.
  Vec w(n, 0.0);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  w[0] = inv_sqrt_n - 1.0;
  for (std::size_t i = 1; i < n; ++i) w[i] = inv_sqrt_n;
  const double wnorm2 = dot(w, w);

  Matrix h = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) -= 2.0 * w[i] * w[j] / wnorm2;

  Matrix basis(n, n - 1);
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) basis(i, j - 1) = h(i, j);

  const Matrix projected = basis.transposed() * (s * basis);
  const EigenDecomposition eig = jacobi_eigh(projected, tol);
  const double band = tol.zero_tol * (1.0 + s.max_abs());
  return eig.values[0] < -band;
}

}  // namespace spectralmono
