#include "rv/spectra.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "rv/errors.hpp"

namespace rv {

namespace {

using OpFn = std::function<Vec(const Vec&)>;

// Deterministic start vector; results must be bit-stable across runs.
Vec seeded_random_vector(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vec v(n);
  for (int i = 0; i < n; ++i)
    v[i] = static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;
  return v;
}

void fix_sign(Vec& x) {
  int at = 0;
  double best = 0;
  for (int i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > best) best = std::abs(x[at = i]);
  if (x[at] < 0) x = -x;
}

double pencil_residual(const Vec& ax, double lambda, const Vec& bx) {
  const double num = (ax - lambda * bx).norm();
  const double den = ax.norm() + std::abs(lambda) * bx.norm();
  return den > 0 ? num / den : num;
}

struct RitzPair {
  double value;  // operator eigenvalue, descending
  Vec vector;
};

// Lanczos with full reorthogonalization for the largest eigenvalues of a
// self-adjoint operator in the inner product <u,v> = u^T ip(v).  `deflate`
// removes invariant directions (the constant mode) from every vector.
std::vector<RitzPair> lanczos_largest(int n, const OpFn& op, const OpFn& ip,
                                      const std::function<void(Vec&)>& deflate, int want,
                                      double tol, int max_iterations) {
  std::vector<Vec> basis;     // ip-orthonormal Lanczos vectors
  std::vector<Vec> ip_basis;  // cached ip(v) for reorthogonalization
  std::vector<double> alpha, beta;

  Vec v = seeded_random_vector(n, 0x5eed0001u);
  deflate(v);
  double nrm = std::sqrt(std::max(0.0, v.dot(ip(v))));
  if (nrm == 0) throw SolveError("eigenvalue iteration started from a null vector");
  v /= nrm;
  basis.push_back(v);
  ip_basis.push_back(ip(v));

  Eigen::SelfAdjointEigenSolver<Mat> tri_solver;
  int restarts_left = 3;
  const int limit = std::min(n - 1, max_iterations);
  while (true) {
    const int j = static_cast<int>(basis.size()) - 1;
    Vec w = op(basis[j]);
    deflate(w);
    alpha.push_back(basis[j].dot(ip(w)));
    w -= alpha[j] * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    for (int pass = 0; pass < 2; ++pass)
      for (size_t i = 0; i < basis.size(); ++i) w -= ip_basis[i].dot(w) * basis[i];
    double b = std::sqrt(std::max(0.0, w.dot(ip(w))));

    // Ritz values and residual bounds from the current tridiagonal matrix.
    const int m = static_cast<int>(alpha.size());
    Mat tri = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) tri(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    tri_solver.compute(tri);
    const Vec theta = tri_solver.eigenvalues();  // ascending
    const double scale =
        std::max({std::abs(theta[m - 1]), std::abs(theta[0]), 1e-300});

    double worst_bound = 0;
    bool converged = m >= want;
    for (int i = 0; i < want && converged; ++i) {
      const double bound = b * std::abs(tri_solver.eigenvectors()(m - 1, m - 1 - i));
      worst_bound = std::max(worst_bound, bound);
      if (bound > tol * scale) converged = false;
    }
    const bool invariant = b <= 1e-14 * std::max(scale, 1.0);

    if (converged || (invariant && (m >= want || restarts_left == 0)) || m >= limit) {
      if (!converged && !invariant && m >= limit) {
        std::ostringstream msg;
        msg << "eigenvalue iteration did not converge after " << m
            << " steps (best residual bound " << worst_bound << ")";
        throw SolveError(msg.str());
      }
      std::vector<RitzPair> out;
      for (int i = 0; i < std::min(want, m); ++i) {
        RitzPair rp;
        rp.value = theta[m - 1 - i];
        rp.vector = Vec::Zero(n);
        for (int q = 0; q < m; ++q)
          rp.vector += tri_solver.eigenvectors()(q, m - 1 - i) * basis[q];
        deflate(rp.vector);
        out.push_back(std::move(rp));
      }
      return out;
    }

    if (invariant) {
      // Exact invariant subspace hit early: restart in a fresh direction.
      --restarts_left;
      w = seeded_random_vector(n, 0x5eed0002u + static_cast<uint64_t>(m));
      deflate(w);
      for (int pass = 0; pass < 2; ++pass)
        for (size_t i = 0; i < basis.size(); ++i) w -= ip_basis[i].dot(w) * basis[i];
      b = std::sqrt(std::max(0.0, w.dot(ip(w))));
      if (b == 0) throw SolveError("eigenvalue iteration exhausted the search space");
    }
    beta.push_back(b);
    basis.push_back(w / b);
    ip_basis.push_back(ip(basis.back()));
  }
}

Mat dense_block(const Sparse& a, const std::vector<int>& rows, const std::vector<int>& cols,
                const std::vector<int>& row_pos, const std::vector<int>& col_pos) {
  Mat out = Mat::Zero(rows.size(), cols.size());
  for (int k = 0; k < a.outerSize(); ++k)
    for (Sparse::InnerIterator it(a, k); it; ++it) {
      const int r = row_pos[it.row()], c = col_pos[it.col()];
      if (r >= 0 && c >= 0) out(r, c) = it.value();
    }
  return out;
}

struct DensePencilEigen {
  Vec values;   // ascending
  Mat vectors;  // columns
};

DensePencilEigen dense_generalized(const Mat& a, const Mat& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(a, b);
  if (solver.info() != Eigen::Success)
    throw SolveError("dense generalized eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Rough upper bound for the largest pencil eigenvalue, for the tiny
// regularizing shift of the shift-invert transform.
double spectrum_scale_estimate(const Sparse& k, const Sparse& m) {
  Vec krow = Vec::Zero(k.rows()), mrow = Vec::Zero(m.rows());
  for (int c = 0; c < k.outerSize(); ++c)
    for (Sparse::InnerIterator it(k, c); it; ++it) krow[it.row()] += std::abs(it.value());
  for (int c = 0; c < m.outerSize(); ++c)
    for (Sparse::InnerIterator it(m, c); it; ++it) mrow[it.row()] += std::abs(it.value());
  double best = 0;
  for (int i = 0; i < krow.size(); ++i)
    if (mrow[i] > 0) best = std::max(best, krow[i] / mrow[i]);
  return best > 0 ? best : 1.0;
}

void finalize(SpectralResult& r, const Vec& ax, const Vec& bx, const Sparse& b_for_deflation) {
  r.residual = pencil_residual(ax, r.eigenvalue_1, bx);
  const Vec& x = r.eigenvector_1;
  const double xb = std::sqrt(std::max(0.0, x.dot(b_for_deflation * x)));
  const double one_bx = (b_for_deflation * x).sum();
  r.deflation_report = xb > 0 ? std::abs(one_bx) / xb : 0.0;
  if (!(r.eigenvalue_1 > 0)) {
    std::ostringstream msg;
    msg << "first " << r.problem_kind << " eigenvalue is not positive: " << r.eigenvalue_1;
    throw SolveError(msg.str());
  }
}

}  // namespace

SpectralResult solve_closed(const ImmersedMesh& mesh, const AssembledSystem& sys,
                            const EigenOptions& opts) {
  if (!mesh.closed())
    throw DomainError("the closed eigenvalue problem requires a mesh without boundary");
  const Sparse& k = sys.stiffness;
  const Sparse& m = sys.mass;
  const int n = mesh.num_vertices();
  SpectralResult r;
  r.problem_kind = "closed";

  const Vec ones = Vec::Ones(n);
  const double ones_m_ones = ones.dot(m * ones);

  if (n < opts.dense_threshold) {
    DensePencilEigen eig = dense_generalized(Mat(k), Mat(m));
    const double scale = std::max(std::abs(eig.values[0]), std::abs(eig.values[n - 1]));
    if (std::abs(eig.values[0]) > 1e-7 * std::max(scale, 1.0))
      throw SolveError("constant mode of the closed problem is not discretely harmonic");
    r.eigenvalue_1 = eig.values[1];
    r.eigenvector_1 = eig.vectors.col(1);
    for (int i = 2; i < std::min(n, 2 + opts.extra); ++i)
      r.next_eigenvalues.push_back(eig.values[i]);
  } else {
    const double shift = 1e-6 * spectrum_scale_estimate(k, m);
    Sparse shifted = k + shift * m;
    Eigen::SimplicialLDLT<Sparse> ldlt(shifted);
    if (ldlt.info() != Eigen::Success)
      throw SolveError("factorization of the shifted stiffness matrix failed");
    auto op = [&](const Vec& x) { return Vec(ldlt.solve(m * x)); };
    auto ip = [&](const Vec& x) { return Vec(m * x); };
    auto deflate = [&](Vec& x) { x -= (ones.dot(m * x) / ones_m_ones) * ones; };
    auto pairs = lanczos_largest(n, op, ip, deflate, opts.extra + 3, opts.tol,
                                 opts.max_iterations);
    r.eigenvalue_1 = 1.0 / pairs[0].value - shift;
    r.eigenvector_1 = pairs[0].vector;
    for (size_t i = 1; i < pairs.size() && static_cast<int>(i) <= opts.extra; ++i)
      r.next_eigenvalues.push_back(1.0 / pairs[i].value - shift);
  }
  r.eigenvector_1 /= std::sqrt(r.eigenvector_1.dot(m * r.eigenvector_1));
  fix_sign(r.eigenvector_1);
  finalize(r, k * r.eigenvector_1, m * r.eigenvector_1, m);
  return r;
}

CondensedBoundary condense_boundary(const ImmersedMesh& mesh, const AssembledSystem& sys) {
  if (mesh.closed()) throw DomainError("boundary condensation requires a mesh with boundary");
  CondensedBoundary cb;
  const int nv = mesh.num_vertices();
  std::vector<int> pos_b(nv, -1), pos_i(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (mesh.is_boundary_vertex(v)) {
      pos_b[v] = static_cast<int>(cb.boundary.size());
      cb.boundary.push_back(v);
    } else {
      pos_i[v] = static_cast<int>(cb.interior.size());
      cb.interior.push_back(v);
    }
  }
  const Sparse& k = sys.stiffness;
  Mat kbb = dense_block(k, cb.boundary, cb.boundary, pos_b, pos_b);
  Mat kib = dense_block(k, cb.interior, cb.boundary, pos_i, pos_b);
  cb.boundary_mass = dense_block(sys.boundary_mass, cb.boundary, cb.boundary, pos_b, pos_b);
  cb.boundary_stiffness =
      dense_block(sys.boundary_stiffness, cb.boundary, cb.boundary, pos_b, pos_b);

  // Interior block of K, factorized sparsely.
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < k.outerSize(); ++c)
    for (Sparse::InnerIterator it(k, c); it; ++it) {
      const int r2 = pos_i[it.row()], c2 = pos_i[it.col()];
      if (r2 >= 0 && c2 >= 0) trips.emplace_back(r2, c2, it.value());
    }
  Sparse kii(cb.interior.size(), cb.interior.size());
  kii.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Sparse> ldlt(kii);
  if (ldlt.info() != Eigen::Success)
    throw SolveError("interior stiffness block is singular; is T positive definite?");
  cb.extension = ldlt.solve(kib);
  cb.schur = kbb - kib.transpose() * cb.extension;
  cb.schur = 0.5 * (cb.schur + cb.schur.transpose()).eval();
  return cb;
}

namespace {

SpectralResult condensed_solve(const ImmersedMesh& mesh, const AssembledSystem& sys,
                               const Mat& lhs, const CondensedBoundary& cb,
                               const std::string& kind, const EigenOptions& opts) {
  const int nb = static_cast<int>(cb.boundary.size());
  DensePencilEigen eig = dense_generalized(lhs, cb.boundary_mass);
  const double scale = std::max(std::abs(eig.values[0]), std::abs(eig.values[nb - 1]));
  if (std::abs(eig.values[0]) > 1e-7 * std::max(scale, 1.0))
    throw SolveError("constant mode of the boundary problem is not in the kernel");

  SpectralResult r;
  r.problem_kind = kind;
  r.eigenvalue_1 = eig.values[1];
  for (int i = 2; i < std::min(nb, 2 + opts.extra); ++i)
    r.next_eigenvalues.push_back(eig.values[i]);

  // Harmonic extension of the boundary eigenvector to all vertices.
  Vec y = eig.vectors.col(1);
  Vec ui = -cb.extension * y;
  Vec full = Vec::Zero(mesh.num_vertices());
  for (int j = 0; j < nb; ++j) full[cb.boundary[j]] = y[j];
  for (size_t j = 0; j < cb.interior.size(); ++j) full[cb.interior[j]] = ui[j];
  r.eigenvector_1 = full;
  const double ynorm = std::sqrt(y.dot(cb.boundary_mass * y));
  r.eigenvector_1 /= ynorm;
  fix_sign(r.eigenvector_1);

  // Residual on the condensed pencil (the interior rows vanish identically).
  y = Vec::Zero(nb);
  for (int j = 0; j < nb; ++j) y[j] = r.eigenvector_1[cb.boundary[j]];
  r.residual = pencil_residual(lhs * y, r.eigenvalue_1, cb.boundary_mass * y);
  const Vec bx = sys.boundary_mass * r.eigenvector_1;
  const double xb = std::sqrt(std::max(0.0, r.eigenvector_1.dot(bx)));
  r.deflation_report = xb > 0 ? std::abs(bx.sum()) / xb : 0.0;
  if (!(r.eigenvalue_1 > 0)) {
    std::ostringstream msg;
    msg << "first " << kind << " eigenvalue is not positive: " << r.eigenvalue_1;
    throw SolveError(msg.str());
  }
  return r;
}

}  // namespace

SpectralResult solve_steklov(const ImmersedMesh& mesh, const AssembledSystem& sys,
                             const EigenOptions& opts) {
  CondensedBoundary cb = condense_boundary(mesh, sys);
  return condensed_solve(mesh, sys, cb.schur, cb, "steklov", opts);
}

SpectralResult solve_wentzell(const ImmersedMesh& mesh, const AssembledSystem& sys, double b,
                              const EigenOptions& opts) {
  if (b < 0) throw ConfigError("wentzell parameter b must be nonnegative");
  CondensedBoundary cb = condense_boundary(mesh, sys);
  Mat lhs = cb.schur + b * cb.boundary_stiffness;
  SpectralResult r = condensed_solve(mesh, sys, lhs, cb, "wentzell", opts);
  return r;
}

SpectralResult solve_steklov_full(const ImmersedMesh& mesh, const AssembledSystem& sys,
                                  const EigenOptions& opts) {
  if (mesh.closed()) throw DomainError("the Steklov problem requires a mesh with boundary");
  const Sparse& k = sys.stiffness;
  const Sparse& b = sys.boundary_mass;
  const int n = mesh.num_vertices();
  SpectralResult r;
  r.problem_kind = "steklov";

  // Spectral transformation for the singular pencil K u = sigma B u:
  //   B u = tau (K + B) u with tau = 1/(1 + sigma); constants sit at tau = 1.
  Sparse kb = k + b;
  const Vec ones = Vec::Ones(n);
  const double ones_kb_ones = ones.dot(kb * ones);

  std::vector<std::pair<double, Vec>> taus;  // descending, constants removed
  if (n < opts.dense_threshold) {
    DensePencilEigen eig = dense_generalized(Mat(b), Mat(kb));
    int at = n - 1;
    if (std::abs(eig.values[at] - 1.0) > 1e-7)
      throw SolveError("constant mode of the Steklov pencil is displaced");
    --at;  // skip the constant (tau = 1)
    for (int cnt = 0; cnt <= opts.extra && at >= 0; ++cnt, --at)
      taus.emplace_back(eig.values[at], eig.vectors.col(at));
  } else {
    Eigen::SimplicialLDLT<Sparse> ldlt(kb);
    if (ldlt.info() != Eigen::Success)
      throw SolveError("factorization of K + B failed");
    auto op = [&](const Vec& x) { return Vec(ldlt.solve(b * x)); };
    auto ip = [&](const Vec& x) { return Vec(kb * x); };
    auto deflate = [&](Vec& x) { x -= (ones.dot(kb * x) / ones_kb_ones) * ones; };
    auto pairs = lanczos_largest(n, op, ip, deflate, opts.extra + 3, opts.tol,
                                 opts.max_iterations);
    for (auto& p : pairs) taus.emplace_back(p.value, std::move(p.vector));
  }

  r.eigenvalue_1 = 1.0 / taus[0].first - 1.0;
  r.eigenvector_1 = taus[0].second;
  for (size_t i = 1; i < taus.size() && static_cast<int>(i) <= opts.extra; ++i)
    r.next_eigenvalues.push_back(1.0 / taus[i].first - 1.0);

  const double xb = std::sqrt(std::max(0.0, r.eigenvector_1.dot(b * r.eigenvector_1)));
  r.eigenvector_1 /= xb;
  fix_sign(r.eigenvector_1);
  finalize(r, k * r.eigenvector_1, b * r.eigenvector_1, b);
  return r;
}

}  // namespace rv
