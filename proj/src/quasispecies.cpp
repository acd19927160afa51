#include "spectralmono/quasispecies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectralmono/errors.hpp"
#include "spectralmono/linalg.hpp"

namespace spectralmono {

std::size_t KroneckerModel::total_dim() const {
  std::size_t n = 1;
  for (std::size_t s : sizes) n *= s;
  return n;
}

std::size_t KroneckerModel::flat_index(const std::vector<std::size_t>& multi) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) flat = flat * sizes[k] + multi[k];
  return flat;
}

std::vector<std::size_t> KroneckerModel::multi_index(std::size_t flat) const {
  std::vector<std::size_t> multi(sizes.size());
  for (std::size_t k = sizes.size(); k-- > 0;) {
    multi[k] = flat % sizes[k];
    flat /= sizes[k];
  }
  return multi;
}

KroneckerModel make_kronecker_model(std::vector<Matrix> factors, Vec rates,
                                    DiagonalMatrix d, const ToleranceConfig& tol) {
  if (factors.empty()) fail(ErrorCode::InvalidInput, "model needs at least one factor");
  if (rates.size() != factors.size())
    fail(ErrorCode::InvalidInput, "one mutation rate per site is required");

  KroneckerModel model;
  model.sizes.reserve(factors.size());
  model.factor_radii.reserve(factors.size());
  std::size_t total = 1;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const Matrix& f = factors[k];
    require_square(f, "make_kronecker_model");
    require_nonnegative(f, "make_kronecker_model");
    if (!is_irreducible(f))
      fail(ErrorCode::Reducible, "factor " + std::to_string(k + 1) + " is reducible");
    if (!is_symmetrizable(f, tol))
      fail(ErrorCode::NotSymmetrizable,
           "factor " + std::to_string(k + 1) + " is not symmetrizable");
    if (!(rates[k] >= 0.0 && rates[k] <= 1.0))
      fail(ErrorCode::InvalidInput, "mutation rates must lie in [0, 1]");
    model.sizes.push_back(f.rows());
    total *= f.rows();
    if (total > tol.dim_cap)
      fail(ErrorCode::DimensionOverflow, "product dimension exceeds the cap");
    model.factor_radii.push_back(f.rows() == 1 ? f(0, 0) : perron(f, tol).rho);
  }
  if (d.size() != total || !d.positive())
    fail(ErrorCode::InvalidInput, "fitness diagonal must be positive of size N");

  model.factors = std::move(factors);
  model.rates = std::move(rates);
  model.d = std::move(d);
  return model;
}

namespace {

// (1 - m_k) r_k I + m_k A_k
Matrix site_mixture(const KroneckerModel& model, std::size_t k) {
  Matrix f = model.factors[k];
  f *= model.rates[k];
  const double off = (1.0 - model.rates[k]) * model.factor_radii[k];
  for (std::size_t i = 0; i < f.rows(); ++i) f(i, i) += off;
  return f;
}

// A_k - r_k I, the m_k-derivative of the site mixture.
Matrix site_derivative(const KroneckerModel& model, std::size_t k) {
  Matrix f = model.factors[k];
  for (std::size_t i = 0; i < f.rows(); ++i) f(i, i) -= model.factor_radii[k];
  return f;
}

}  // namespace

Matrix build_mm(const KroneckerModel& model, const ToleranceConfig& tol) {
  std::vector<Matrix> mixtures;
  mixtures.reserve(model.site_count());
  for (std::size_t k = 0; k < model.site_count(); ++k)
    mixtures.push_back(site_mixture(model, k));
  return kron(mixtures, tol.dim_cap);
}

double growth_rate(const KroneckerModel& model, const ToleranceConfig& tol) {
  return spectral_radius(right_scale(build_mm(model, tol), model.d), tol);
}

bool d_condition(const KroneckerModel& model, std::size_t site,
                 const ToleranceConfig& tol) {
  if (site >= model.site_count()) fail(ErrorCode::InvalidInput, "site out of range");
  const std::size_t nk = model.sizes[site];
  std::size_t right = 1;
  for (std::size_t k = site + 1; k < model.site_count(); ++k) right *= model.sizes[k];
  const std::size_t left = model.total_dim() / (nk * right);

  double d_max = 0.0;
  for (std::size_t i = 0; i < model.d.size(); ++i)
    d_max = std::max(d_max, std::abs(model.d(i)));
  const double band = tol.tol_scalar * (1.0 + d_max);

  for (std::size_t l = 0; l < left; ++l) {
    for (std::size_t r = 0; r < right; ++r) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t i = 0; i < nk; ++i) {
        const double value = model.d((l * nk + i) * right + r);
        lo = std::min(lo, value);
        hi = std::max(hi, value);
      }
      if (hi - lo > band) return true;
    }
  }
  return false;
}

GradientReport grad_m(const KroneckerModel& model, const ToleranceConfig& tol,
                      bool with_fd_check) {
  const std::size_t sites = model.site_count();
  for (double m : model.rates)
    if (!(m > 0.0 && m < 1.0))
      fail(ErrorCode::InvalidInput, "grad_m requires rates in the open interval (0, 1)");

  const Matrix md = right_scale(build_mm(model, tol), model.d);
  const PerronPair pp = perron(md, tol);

  GradientReport rep;
  rep.r = pp.rho;
  rep.grad.resize(sites);
  rep.grad_fd.assign(sites, 0.0);
  rep.d_cond.resize(sites);
  rep.strictness.resize(sites);
  rep.regime_warning = false;
  for (double m : model.rates) rep.regime_warning |= m >= 0.5;

  Vec dv(pp.v.size());
  for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = model.d(i) * pp.v[i];

  std::vector<Matrix> mixtures;
  mixtures.reserve(sites);
  for (std::size_t k = 0; k < sites; ++k) mixtures.push_back(site_mixture(model, k));

  for (std::size_t k = 0; k < sites; ++k) {
    const Matrix deriv_k = site_derivative(model, k);
    std::vector<const Matrix*> chain;
    chain.reserve(sites);
    for (std::size_t j = 0; j < sites; ++j)
      chain.push_back(j == k ? &deriv_k : &mixtures[j]);
    const Vec t = kron_apply(chain, dv);
    rep.grad[k] = dot(pp.u, t);
    rep.d_cond[k] = d_condition(model, k, tol);
    rep.strictness[k] = (!rep.regime_warning && rep.d_cond[k]) ? -1 : 0;
  }

  if (with_fd_check) {
    const double h = tol.fd_step;
    for (std::size_t k = 0; k < sites; ++k) {
      KroneckerModel shifted = model;
      const double m0 = model.rates[k];
      if (m0 - h > 0.0 && m0 + h < 1.0) {
        shifted.rates[k] = m0 + h;
        const double rp = growth_rate(shifted, tol);
        shifted.rates[k] = m0 - h;
        const double rm = growth_rate(shifted, tol);
        rep.grad_fd[k] = (rp - rm) / (2.0 * h);
      } else {
        const double dir = m0 - h <= 0.0 ? 1.0 : -1.0;
        shifted.rates[k] = m0 + dir * h;
        const double r1 = growth_rate(shifted, tol);
        shifted.rates[k] = m0 + 2.0 * dir * h;
        const double r2 = growth_rate(shifted, tol);
        rep.grad_fd[k] = dir * (-3.0 * rep.r + 4.0 * r1 - r2) / (2.0 * h);
      }
      if (std::abs(rep.grad[k] - rep.grad_fd[k]) >
          std::max(1e-6, 10.0 * h * h) * (1.0 + std::abs(rep.grad[k])))
        fail(ErrorCode::OracleMismatch,
             "gradient disagrees with the finite-difference check at site " +
                 std::to_string(k + 1));
    }
  }
  return rep;
}

GeneralizedModel generalized_model(const KroneckerModel& model,
                                   const ToleranceConfig& tol) {
  GeneralizedModel out;
  std::vector<Matrix> stochastic_factors;
  stochastic_factors.reserve(model.site_count());
  out.factor_left_vectors.reserve(model.site_count());
  out.scale = 1.0;
  for (std::size_t k = 0; k < model.site_count(); ++k) {
    Stochasticization st = stochasticize(model.factors[k], tol);
    out.scale *= st.rho;
    stochastic_factors.push_back(std::move(st.p));
    out.factor_left_vectors.push_back(std::move(st.u));
  }
  out.stochastic_model = make_kronecker_model(std::move(stochastic_factors),
                                              model.rates, model.d, tol);

  const double r_original = growth_rate(model, tol);
  const double r_stochastic = growth_rate(out.stochastic_model, tol);
  if (std::abs(r_original - out.scale * r_stochastic) > 1e-9 * (1.0 + r_original))
    fail(ErrorCode::OracleMismatch,
         "growth rate does not match the stochasticized factorization");
  return out;
}

}  // namespace spectralmono
