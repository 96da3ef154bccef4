#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qcell/operators.hpp"

namespace qcell {

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending, MHz
  Eigen::MatrixXd eigenvectors;  // columns over the ModeBasis ordering
};

struct EigensolveOptions {
  std::size_t dense_limit = 4096;
  int max_iterations = 2000;
  double residual_tol = 1e-10;  // relative to the matrix scale
  std::uint64_t seed = 0x51e55eedULL;
};

namespace eig_detail {

// Connected components of the sparsity graph.  With rwa the Hamiltonian is
// block diagonal in the total excitation number, and solving the blocks
// separately is both faster and exactly equivalent.
inline std::vector<int> components(const Eigen::SparseMatrix<double>& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      int a = find(static_cast<int>(it.row()));
      int b = find(static_cast<int>(it.col()));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<int> comp(n);
  for (int i = 0; i < n; ++i) comp[i] = find(i);
  return comp;
}

// Lanczos with full reorthogonalization for the k lowest eigenpairs of a
// (sub-)matrix accessed through a mat-vec callback.
template <typename MatVec>
inline void lanczos_lowest(const MatVec& apply, int dim, int k, double scale,
                           const EigensolveOptions& opts,
                           Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  const int max_basis = std::min(dim, std::max(4 * k + 40, 80));
  Eigen::MatrixXd v(dim, max_basis);
  std::vector<double> alpha, beta;

  SplitMix64 rng(opts.seed);
  Eigen::VectorXd w(dim);
  for (int i = 0; i < dim; ++i) w[i] = rng.next_symmetric();
  w.normalize();
  v.col(0) = w;

  double last_residual = std::numeric_limits<double>::infinity();
  int m = 0;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    if (m == max_basis) break;
    Eigen::VectorXd hv(dim);
    apply(v.col(m), hv);
    double a = v.col(m).dot(hv);
    alpha.push_back(a);
    hv -= a * v.col(m);
    if (m > 0) hv -= beta[m - 1] * v.col(m - 1);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j <= m; ++j) hv -= v.col(j).dot(hv) * v.col(j);
    double b = hv.norm();

    // converged Ritz pairs?
    const int nb = m + 1;
    if (nb >= k || b < 1e-14 * std::max(scale, 1.0)) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(nb, nb);
      for (int i = 0; i < nb; ++i) t(i, i) = alpha[i];
      for (int i = 0; i + 1 < nb; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      bool done = nb >= dim || b < 1e-14 * std::max(scale, 1.0);
      if (!done && nb >= k) {
        last_residual = 0.0;
        for (int i = 0; i < k; ++i)
          last_residual = std::max(
              last_residual, std::abs(b * es.eigenvectors()(nb - 1, i)));
        done = last_residual <= opts.residual_tol * std::max(scale, 1.0);
      }
      if (done) {
        const int kk = std::min(k, nb);
        values = es.eigenvalues().head(kk);
        vectors = v.leftCols(nb) * es.eigenvectors().leftCols(kk);
        for (int i = 0; i < kk; ++i) vectors.col(i).normalize();
        return;
      }
    }
    if (b < 1e-14 * std::max(scale, 1.0)) break;  // invariant subspace hit
    beta.push_back(b);
    v.col(m + 1) = hv / b;
    ++m;
  }
  throw SolverError(
      "iterative eigensolver did not converge; achieved residual " +
      std::to_string(last_residual));
}

}  // namespace eig_detail

// Lowest-k (or full) eigendecomposition.  Components of the sparsity graph
// are solved independently; blocks up to dense_limit use a dense solver,
// larger ones a Lanczos iteration (which requires k).  Ties in the final
// ordering are broken on the first nonzero eigenvector component so the
// labelling downstream is reproducible.
inline Spectrum eigensolve(const OperatorMatrix& h,
                           std::optional<int> k = std::nullopt,
                           const EigensolveOptions& opts = {}) {
  const auto& m = h.sparse();
  const int n = static_cast<int>(m.rows());
  if (n == 0) return {};

  std::vector<int> comp = eig_detail::components(m);
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[comp[i]].push_back(i);

  const double scale = m.norm();

  struct Pair {
    double value;
    Eigen::VectorXd vector;  // full length
    int first_nonzero;
  };
  std::vector<Pair> pairs;

  for (const auto& [root, idx] : groups) {
    const int nd = static_cast<int>(idx.size());
    const int want = k ? std::min(*k, nd) : nd;
    Eigen::VectorXd vals;
    Eigen::MatrixXd vecs;
    if (static_cast<std::size_t>(nd) <= opts.dense_limit) {
      Eigen::MatrixXd block(nd, nd);
      block.setZero();
      for (int col = 0; col < nd; ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, idx[col]); it;
             ++it) {
          // rows of this column restricted to the component
          auto pos = std::lower_bound(idx.begin(), idx.end(),
                                      static_cast<int>(it.row()));
          if (pos != idx.end() && *pos == static_cast<int>(it.row()))
            block(static_cast<int>(pos - idx.begin()), col) = it.value();
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
      if (es.info() != Eigen::Success)
        throw SolverError("dense eigensolver failed");
      vals = es.eigenvalues().head(want);
      vecs = es.eigenvectors().leftCols(want);
    } else {
      if (!k)
        throw SolverError(
            "component of dimension " + std::to_string(nd) +
            " exceeds the dense limit; pass k to use the iterative solver");
      auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
        y.setZero();
        for (int col = 0; col < nd; ++col)
          for (Eigen::SparseMatrix<double>::InnerIterator it(m, idx[col]); it;
               ++it) {
            auto pos = std::lower_bound(idx.begin(), idx.end(),
                                        static_cast<int>(it.row()));
            if (pos != idx.end() && *pos == static_cast<int>(it.row()))
              y[static_cast<int>(pos - idx.begin())] += it.value() * x[col];
          }
      };
      eig_detail::lanczos_lowest(apply, nd, want, scale, opts, vals, vecs);
    }
    for (int c = 0; c < vals.size(); ++c) {
      Pair p;
      p.value = vals[c];
      p.vector = Eigen::VectorXd::Zero(n);
      for (int r = 0; r < nd; ++r) p.vector[idx[r]] = vecs(r, c);
      // canonical sign: largest-magnitude component positive
      int imax = 0;
      double amax = 0.0;
      p.first_nonzero = n;
      for (int r = 0; r < n; ++r) {
        double a = std::abs(p.vector[r]);
        if (a > amax) {
          amax = a;
          imax = r;
        }
        if (p.first_nonzero == n && a > 1e-12) p.first_nonzero = r;
      }
      if (p.vector[imax] < 0.0) p.vector = -p.vector;
      pairs.push_back(std::move(p));
    }
  }

  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.first_nonzero < b.first_nonzero;
  });
  const int keep = k ? std::min<int>(*k, static_cast<int>(pairs.size()))
                     : static_cast<int>(pairs.size());

  Spectrum s;
  s.eigenvalues.resize(keep);
  s.eigenvectors.resize(n, keep);
  for (int i = 0; i < keep; ++i) {
    s.eigenvalues[i] = pairs[i].value;
    s.eigenvectors.col(i) = pairs[i].vector;
  }
  return s;
}

}  // namespace qcell
