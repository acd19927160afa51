#include "spectralmono/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "spectralmono/errors.hpp"

namespace spectralmono {

namespace {

double off_diagonal_frobenius(const Matrix& w) {
  double s = 0.0;
  const std::size_t n = w.rows();
  for (std::size_t p = 0; p + 1 < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * w(p, q) * w(p, q);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition jacobi_eigh(const Matrix& s, const ToleranceConfig& tol) {
  require_square(s, "jacobi_eigh");
  require_finite(s, "jacobi_eigh");
  const std::size_t n = s.rows();
  const double scale = s.norm_inf();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::abs(s(i, j) - s(j, i)));
  if (asym > tol.tol_sym * (1.0 + scale))
    fail(ErrorCode::NotSymmetric, "jacobi_eigh input is not symmetric");

  Matrix w = s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (w(i, j) + w(j, i));
      w(i, j) = avg;
      w(j, i) = avg;
    }

  Matrix q = Matrix::identity(n);
  const double target = 1e-14 * w.frobenius();
  bool converged = off_diagonal_frobenius(w) <= target;
  for (int sweep = 0; sweep < tol.max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const double apq = w(p, r);
        if (apq == 0.0) continue;
        const double theta = (w(r, r) - w(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);
        const double app = w(p, p), arr = w(r, r);
        w(p, p) = app - t * apq;
        w(r, r) = arr + t * apq;
        w(p, r) = 0.0;
        w(r, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == r) continue;
          const double akp = w(k, p), akr = w(k, r);
          w(k, p) = akp - sn * (akr + tau * akp);
          w(p, k) = w(k, p);
          w(k, r) = akr + sn * (akp - tau * akr);
          w(r, k) = w(k, r);
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double qkp = q(k, p), qkr = q(k, r);
          q(k, p) = qkp - sn * (qkr + tau * qkp);
          q(k, r) = qkr + sn * (qkp - tau * qkr);
        }
      }
    }
    converged = off_diagonal_frobenius(w) <= target;
  }
  if (!converged)
    fail(ErrorCode::NoConvergence, "jacobi_eigh did not reach the off-diagonal target");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w(a, a) > w(b, b); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = w(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = q(i, order[j]);
  }
  return out;
}

namespace {

struct PowerResult {
  double rho;
  Vec x;  // positive, 1-norm normalized
};

// Power iteration on A + shift*I with Collatz-Wielandt bracketing of the
// Perron root of A. Requires a strictly positive start and irreducible A.
PowerResult power_dominant(const Matrix& a, const ToleranceConfig& tol) {
  const std::size_t n = a.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  // A positive shift makes the iteration matrix primitive; max diagonal
  // alone can be zero (exchange-type patterns), so keep a scale-proportional
  // floor.
  const double shift = std::max(max_diag, 0.25 * a.max_abs());

  Vec x(n, 1.0 / static_cast<double>(n));
  double rho = 0.0;
  double best_gap = std::numeric_limits<double>::infinity();
  const double stop_rel = 5e-14;
  bool done = false;
  for (long iter = 0; iter < tol.max_iters; ++iter) {
    Vec z = a.apply(x);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ratio = z[i] / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    rho = 0.5 * (lo + hi);
    const double gap = hi - lo;
    best_gap = std::min(best_gap, gap);
    if (gap <= stop_rel * std::max(rho, 1e-300)) {
      done = true;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] += shift * x[i];
      total += z[i];
    }
    if (!(total > 0.0))
      fail(ErrorCode::NoConvergence, "power iteration collapsed to zero");
    for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / total;
    if (done) return {rho, x};
  }
  if (best_gap <= tol.tol_eig * std::max(rho, 1e-300)) return {rho, x};
  fail(ErrorCode::NoConvergence, "power iteration residual stalled above tol_eig");
}

}  // namespace

PerronPair perron(const Matrix& a, const ToleranceConfig& tol) {
  require_square(a, "perron");
  require_finite(a, "perron");
  require_nonnegative(a, "perron");
  if (!is_irreducible(a)) fail(ErrorCode::Reducible, "perron requires an irreducible matrix");
  const std::size_t n = a.rows();
  if (n == 1) return {a(0, 0), Vec{1.0}, Vec{1.0}};

  PowerResult right = power_dominant(a, tol);
  PowerResult left = power_dominant(a.transposed(), tol);

  Vec v = right.x;
  const double sv = sum(v);
  for (double& x : v) x /= sv;
  Vec u = left.x;
  const double uv = dot(u, v);
  if (!(uv > 0.0)) fail(ErrorCode::NoConvergence, "left/right Perron vectors misaligned");
  for (double& x : u) x /= uv;

  // Two-sided Rayleigh quotient; error is quadratic in the vector residuals.
  const Vec av = a.apply(v);
  const double rho = dot(u, av);

  const Vec atu = a.apply_transpose(u);
  double res_v = 0.0, res_u = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    res_v = std::max(res_v, std::abs(av[i] - rho * v[i]));
    res_u = std::max(res_u, std::abs(atu[i] - rho * u[i]));
  }
  const double vec_scale = std::max(1.0, std::max(norm_inf(u), norm_inf(v)));
  if (res_v > tol.tol_eig * std::max(rho, 1e-300) * vec_scale ||
      res_u > tol.tol_eig * std::max(rho, 1e-300) * vec_scale)
    fail(ErrorCode::NoConvergence, "Perron residual above tol_eig");
  return {rho, v, u};
}

double spectral_radius(const Matrix& a, const ToleranceConfig& tol) {
  require_square(a, "spectral_radius");
  require_finite(a, "spectral_radius");
  require_nonnegative(a, "spectral_radius");
  const auto components = strongly_connected_components(a);
  double best = 0.0;
  for (const auto& comp : components) {
    if (comp.size() == 1) {
      best = std::max(best, a(comp[0], comp[0]));
      continue;
    }
    Matrix sub(comp.size(), comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (std::size_t j = 0; j < comp.size(); ++j) sub(i, j) = a(comp[i], comp[j]);
    best = std::max(best, power_dominant(sub, tol).rho);
  }
  return best;
}

Matrix kron(const Matrix& a, const Matrix& b, std::size_t dim_cap) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  if (rows > dim_cap || cols > dim_cap)
    fail(ErrorCode::DimensionOverflow, "Kronecker product exceeds dimension cap");
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

Matrix kron(const std::vector<Matrix>& factors, std::size_t dim_cap) {
  if (factors.empty()) fail(ErrorCode::InvalidInput, "kron requires at least one factor");
  Matrix acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i], dim_cap);
  return acc;
}

Vec kron_apply(const std::vector<const Matrix*>& factors, const Vec& x) {
  if (factors.empty()) fail(ErrorCode::InvalidInput, "kron_apply requires factors");
  std::size_t total = 1;
  for (const Matrix* f : factors) {
    require_square(*f, "kron_apply");
    total *= f->rows();
  }
  if (x.size() != total) fail(ErrorCode::ShapeMismatch, "kron_apply vector size mismatch");

  Vec cur = x;
  Vec next(total);
  std::size_t left = 1;
  std::size_t right = total;
  for (const Matrix* f : factors) {
    const std::size_t nk = f->rows();
    right /= nk;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t l = 0; l < left; ++l) {
      const std::size_t base = l * nk * right;
      for (std::size_t i = 0; i < nk; ++i) {
        for (std::size_t j = 0; j < nk; ++j) {
          const double aij = (*f)(i, j);
          if (aij == 0.0) continue;
          const double* src = cur.data() + base + j * right;
          double* dst = next.data() + base + i * right;
          for (std::size_t r = 0; r < right; ++r) dst[r] += aij * src[r];
        }
      }
    }
    cur.swap(next);
    left *= nk;
  }
  return cur;
}

namespace {

// Iterative DFS order + transpose pass (Kosaraju).
void dfs_order(const std::vector<std::vector<std::size_t>>& adj,
               std::vector<std::size_t>& order) {
  const std::size_t n = adj.size();
  std::vector<char> seen(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    stack.emplace_back(s, 0);
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < adj[v].size()) {
        const std::size_t w = adj[v][idx++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> strongly_connected_components(const Matrix& a) {
  require_square(a, "strongly_connected_components");
  const std::size_t n = a.rows();
  std::vector<std::vector<std::size_t>> adj(n), radj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && a(i, j) > 0.0) {
        adj[i].push_back(j);
        radj[j].push_back(i);
      }

  std::vector<std::size_t> order;
  order.reserve(n);
  dfs_order(adj, order);

  std::vector<std::vector<std::size_t>> components;
  std::vector<char> seen(n, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (seen[*it]) continue;
    std::vector<std::size_t> comp;
    std::vector<std::size_t> stack{*it};
    seen[*it] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (std::size_t w : radj[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

bool is_irreducible(const Matrix& a) {
  require_square(a, "is_irreducible");
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0) > 0.0;
  return strongly_connected_components(a).size() == 1;
}

bool commute_check(const Matrix& a, const Matrix& b, double tol) {
  require_square(a, "commute_check");
  require_same_shape(a, b, "commute_check");
  const Matrix diff = a * b - b * a;
  return diff.norm_inf() <= tol * (1.0 + a.norm_inf() * b.norm_inf());
}

}  // namespace spectralmono
