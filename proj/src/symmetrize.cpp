#include "spectralmono/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "spectralmono/errors.hpp"

namespace spectralmono {

namespace {

std::string index_pair(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
}

// Walk parent pointers from i and j up to their lowest common ancestor;
// returns the cycle i -> ... -> lca -> ... -> j.
std::vector<std::size_t> tree_cycle(const std::vector<std::ptrdiff_t>& parent,
                                    const std::vector<int>& depth, std::size_t i,
                                    std::size_t j) {
  std::vector<std::size_t> up_i, up_j;
  std::size_t a = i, b = j;
  while (depth[a] > depth[b]) {
    up_i.push_back(a);
    a = static_cast<std::size_t>(parent[a]);
  }
  while (depth[b] > depth[a]) {
    up_j.push_back(b);
    b = static_cast<std::size_t>(parent[b]);
  }
  while (a != b) {
    up_i.push_back(a);
    up_j.push_back(b);
    a = static_cast<std::size_t>(parent[a]);
    b = static_cast<std::size_t>(parent[b]);
  }
  std::vector<std::size_t> cycle = std::move(up_i);
  cycle.push_back(a);
  cycle.insert(cycle.end(), up_j.rbegin(), up_j.rend());
  return cycle;
}

}  // namespace

Symmetrizer detect_symmetrizer(const Matrix& a, const ToleranceConfig& tol) {
  require_square(a, "detect_symmetrizer");
  require_finite(a, "detect_symmetrizer");
  require_nonnegative(a, "detect_symmetrizer");
  const std::size_t n = a.rows();
  const double scale = a.max_abs();

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool ij = a(i, j) > 0.0;
      const bool ji = a(j, i) > 0.0;
      if (ij != ji)
        fail_with_witness(ErrorCode::PatternAsymmetric,
                          "zero pattern is asymmetric at " + index_pair(i, j), {i, j});
    }

  Vec d(n, 0.0);
  std::vector<char> visited(n, 0);
  std::vector<std::ptrdiff_t> parent(n, -1);
  std::vector<int> depth(n, 0);

  for (std::size_t root = 0; root < n; ++root) {
    if (visited[root]) continue;
    visited[root] = 1;
    d[root] = 1.0;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || a(i, j) == 0.0 || visited[j]) continue;
        visited[j] = 1;
        // Symmetry of E^{-1} A E needs A_ij d_j / d_i = A_ji d_i / d_j.
        d[j] = d[i] * std::sqrt(a(j, i) / a(i, j));
        parent[j] = static_cast<std::ptrdiff_t>(i);
        depth[j] = depth[i] + 1;
        queue.push_back(j);
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (a(i, j) == 0.0) continue;
      const double forward = a(i, j) * d[j] / d[i];
      const double backward = a(j, i) * d[i] / d[j];
      if (std::abs(forward - backward) > tol.tol_cycle * (1.0 + scale)) {
        auto cycle = tree_cycle(parent, depth, i, j);
        fail_with_witness(
            ErrorCode::CycleInconsistent,
            "cycle condition fails on edge " + index_pair(i, j) +
                "; the corresponding closed walk has unequal forward/backward products",
            std::move(cycle));
      }
    }
  }
  return Symmetrizer{DiagonalMatrix(std::move(d))};
}

bool is_symmetrizable(const Matrix& a, const ToleranceConfig& tol) {
  try {
    detect_symmetrizer(a, tol);
    return true;
  } catch (const SpectralError& err) {
    if (err.code() == ErrorCode::PatternAsymmetric ||
        err.code() == ErrorCode::CycleInconsistent)
      return false;
    throw;
  }
}

Matrix symmetrized(const Matrix& a, const Symmetrizer& sym) {
  Matrix s = diagonal_conjugate(sym.e.inverse(), a);
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.cols(); ++j) {
      const double avg = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = avg;
      s(j, i) = avg;
    }
  return s;
}

namespace {

void fix_column_signs(Matrix& k) {
  // Column 0 is the Perron column: force it entrywise positive. Remaining
  // columns get their largest-magnitude entry made positive, for
  // deterministic output.
  const std::size_t n = k.rows();
  double col0_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) col0_sum += k(i, 0);
  if (col0_sum < 0.0)
    for (std::size_t i = 0; i < n; ++i) k(i, 0) = -k(i, 0);
  for (std::size_t j = 1; j < k.cols(); ++j) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(k(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (k(arg, j) < 0.0)
      for (std::size_t i = 0; i < n; ++i) k(i, j) = -k(i, j);
  }
}

struct PerronScaling {
  Vec u;
  Vec v;
  DiagonalMatrix e;
};

// Given the detector's E0 and the Perron column of the symmetrized matrix,
// produce u, v with e^T v = u^T v = 1 and the rescaled E with E_j^2 = v_j/u_j.
PerronScaling perron_scaling(const DiagonalMatrix& e0, const Vec& perron_col) {
  const std::size_t n = perron_col.size();
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = e0(i) * perron_col[i];
    if (!(v[i] > 0.0))
      fail(ErrorCode::NoConvergence, "Perron column is not strictly positive");
  }
  const double sv = sum(v);
  for (double& x : v) x /= sv;
  Vec u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = v[i] / (e0(i) * e0(i));
  const double uv = dot(u, v);
  for (double& x : u) x /= uv;
  Vec e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = std::sqrt(v[i] / u[i]);
  return {std::move(u), std::move(v), DiagonalMatrix(std::move(e))};
}

Matrix reconstruct(const DiagonalMatrix& e, const Matrix& k, const Vec& lambda) {
  Matrix kl = k;
  for (std::size_t i = 0; i < kl.rows(); ++i)
    for (std::size_t j = 0; j < kl.cols(); ++j) kl(i, j) *= lambda[j];
  return diagonal_conjugate(e, kl * k.transposed());
}

void check_reconstruction(const Matrix& a, const DiagonalMatrix& e, const Matrix& k,
                          const Vec& lambda, const ToleranceConfig& tol, ErrorCode code,
                          const char* what) {
  const Matrix r = reconstruct(e, k, lambda);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      diff = std::max(diff, std::abs(a(i, j) - r(i, j)));
  if (diff > 100.0 * tol.tol_eig * (1.0 + a.norm_inf()))
    fail(code, std::string(what) + " reconstruction residual too large");
}

}  // namespace

CanonicalForm canonical_form(const Matrix& a, const ToleranceConfig& tol) {
  if (!is_irreducible(a))
    fail(ErrorCode::Reducible, "canonical_form requires an irreducible matrix");
  const Symmetrizer sym = detect_symmetrizer(a, tol);
  const Matrix s_hat = symmetrized(a, sym);
  EigenDecomposition eig = jacobi_eigh(s_hat, tol);

  Matrix k = eig.vectors;
  fix_column_signs(k);
  PerronScaling ps = perron_scaling(sym.e, k.column(0));

  CanonicalForm form{std::move(ps.e), std::move(k), std::move(eig.values),
                     std::move(ps.u), std::move(ps.v)};
  check_reconstruction(a, form.e, form.k, form.lambda, tol, ErrorCode::NoConvergence,
                       "canonical form");
  return form;
}

JointCanonicalForm joint_canonical_form(const Matrix& a, const Matrix& b,
                                        const ToleranceConfig& tol) {
  require_square(a, "joint_canonical_form");
  require_same_shape(a, b, "joint_canonical_form");
  if (!commute_check(a, b, tol.tol_eig))
    fail(ErrorCode::NotCommuting, "joint_canonical_form requires commuting matrices");
  if (!is_irreducible(a) || !is_irreducible(b))
    fail(ErrorCode::Reducible, "joint_canonical_form requires irreducible matrices");

  const Symmetrizer sym = detect_symmetrizer(a, tol);
  const Matrix s_a = symmetrized(a, sym);
  Matrix s_b = diagonal_conjugate(sym.e.inverse(), b);
  {
    double asym = 0.0;
    for (std::size_t i = 0; i < s_b.rows(); ++i)
      for (std::size_t j = i + 1; j < s_b.cols(); ++j)
        asym = std::max(asym, std::abs(s_b(i, j) - s_b(j, i)));
    if (asym > tol.tol_sym * (1.0 + b.norm_inf()))
      fail(ErrorCode::NotJointlySymmetrizable,
           "the symmetrizer of A does not symmetrize B");
    for (std::size_t i = 0; i < s_b.rows(); ++i)
      for (std::size_t j = i + 1; j < s_b.cols(); ++j) {
        const double avg = 0.5 * (s_b(i, j) + s_b(j, i));
        s_b(i, j) = avg;
        s_b(j, i) = avg;
      }
  }

  EigenDecomposition eig_a = jacobi_eigh(s_a, tol);
  Matrix k = eig_a.vectors;
  const std::size_t n = a.rows();

  // Rotate each eigenvalue cluster of S_A so the projected S_B block becomes
  // diagonal; within a cluster any orthonormal basis diagonalizes S_A.
  const double cluster_band = tol.tol_cluster * (1.0 + s_a.norm_inf());
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && eig_a.values[end - 1] - eig_a.values[end] <= cluster_band) ++end;
    const std::size_t width = end - start;
    if (width > 1) {
      Matrix basis(n, width);
      for (std::size_t j = 0; j < width; ++j)
        basis.set_column(j, k.column(start + j));
      const Matrix block = basis.transposed() * (s_b * basis);
      EigenDecomposition rot = jacobi_eigh(block, tol);
      const Matrix rotated = basis * rot.vectors;
      for (std::size_t j = 0; j < width; ++j)
        k.set_column(start + j, rotated.column(j));
    }
    start = end;
  }

  Matrix t_a = k.transposed() * (s_a * k);
  Matrix t_b = k.transposed() * (s_b * k);
  const double joint_band =
      1e-8 * (1.0 + std::max(s_a.norm_inf(), s_b.norm_inf()));
  // Within a merged cluster the rotated S_A block may carry off-diagonals up
  // to the cluster band; the reconstruction check below still bounds the
  // overall error.
  const double a_band = std::max(joint_band, 2.0 * cluster_band);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(t_a(i, j)) > a_band || std::abs(t_b(i, j)) > joint_band)
        fail(ErrorCode::JointDiagonalizationFailed,
             "off-diagonal residual after cluster rotation exceeds tolerance");

  Vec lambda_a(n), lambda_b(n);
  for (std::size_t i = 0; i < n; ++i) {
    lambda_a[i] = t_a(i, i);
    lambda_b[i] = t_b(i, i);
  }

  // Perron slot of A leads; B must agree there since the Perron vector is
  // shared. Remaining slots ordered by descending lambda_A then lambda_B.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t perron_slot = static_cast<std::size_t>(
      std::max_element(lambda_a.begin(), lambda_a.end()) - lambda_a.begin());
  std::swap(order[0], order[perron_slot]);
  std::stable_sort(order.begin() + 1, order.end(), [&](std::size_t x, std::size_t y) {
    if (lambda_a[x] != lambda_a[y]) return lambda_a[x] > lambda_a[y];
    return lambda_b[x] > lambda_b[y];
  });

  Matrix k_ordered(n, n);
  Vec la(n), lb(n);
  for (std::size_t j = 0; j < n; ++j) {
    k_ordered.set_column(j, k.column(order[j]));
    la[j] = lambda_a[order[j]];
    lb[j] = lambda_b[order[j]];
  }
  const double rb_max = *std::max_element(lambda_b.begin(), lambda_b.end());
  if (std::abs(lb[0] - rb_max) > joint_band)
    fail(ErrorCode::JointDiagonalizationFailed,
         "Perron slots of A and B do not coincide");

  fix_column_signs(k_ordered);
  PerronScaling ps = perron_scaling(sym.e, k_ordered.column(0));

  JointCanonicalForm form{std::move(ps.e), std::move(k_ordered), std::move(la),
                          std::move(lb),   std::move(ps.u),      std::move(ps.v)};
  check_reconstruction(a, form.e, form.k, form.lambda_a, tol,
                       ErrorCode::JointDiagonalizationFailed, "joint form (A)");
  check_reconstruction(b, form.e, form.k, form.lambda_b, tol,
                       ErrorCode::JointDiagonalizationFailed, "joint form (B)");
  return form;
}

Stochasticization stochasticize(const Matrix& a, const ToleranceConfig& tol) {
  if (!is_irreducible(a))
    fail(ErrorCode::Reducible, "stochasticize requires an irreducible matrix");
  if (!is_symmetrizable(a, tol))
    fail(ErrorCode::NotSymmetrizable, "stochasticize requires a symmetrizable matrix");
  PerronPair pp = perron(a, tol);
  Matrix p = a;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j)
      p(i, j) = pp.u[i] * a(i, j) / (pp.u[j] * pp.rho);
  return {std::move(p), pp.rho, std::move(pp.u)};
}

}  // namespace spectralmono
