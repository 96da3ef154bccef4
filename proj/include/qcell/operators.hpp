#pragma once

#include <cmath>
#include <ostream>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qcell/basis.hpp"

namespace qcell {

// Real symmetric sparse operator over a ModeBasis, entries in MHz.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(std::size_t dim) : mat_(dim, dim) {}

  static OperatorMatrix from_triplets(
      std::size_t dim, const std::vector<Eigen::Triplet<double>>& triplets) {
    OperatorMatrix m(dim);
    m.mat_.setFromTriplets(triplets.begin(), triplets.end());
    m.mat_.makeCompressed();
    return m;
  }

  static OperatorMatrix from_dense(const Eigen::MatrixXd& d) {
    OperatorMatrix m(d.rows());
    m.mat_ = d.sparseView();
    m.mat_.makeCompressed();
    return m;
  }

  std::size_t dimension() const { return static_cast<std::size_t>(mat_.rows()); }
  const Eigen::SparseMatrix<double>& sparse() const { return mat_; }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(mat_); }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < mat_.rows(); ++i) t += mat_.coeff(i, i);
    return t;
  }

  // relative asymmetry, 0 for an exactly symmetric assembly
  double hermiticity_defect() const {
    Eigen::SparseMatrix<double> d = Eigen::SparseMatrix<double>(mat_.transpose()) - mat_;
    double n = mat_.norm();
    return n == 0.0 ? 0.0 : d.norm() / n;
  }

  void check_hermitian(double tol = 1e-12) const {
    if (hermiticity_defect() > tol)
      throw SolverError("operator is not Hermitian within tolerance");
  }

  // coordinate-format text dump (row, col, value), upper triangle included
  void dump_coordinates(std::ostream& out) const {
    out.precision(17);
    for (int k = 0; k < mat_.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(mat_, k); it; ++it)
        out << it.row() << " " << it.col() << " " << it.value() << "\n";
  }

 private:
  Eigen::SparseMatrix<double> mat_;
};

// Assembles the circuit Hamiltonian in the occupation basis:
//   H = sum_i E_i(n_i)  +  sum_edges G * (b - b^dag)(a^dag - a)
// The coupling expands to G (b^dag a + b a^dag) - G (b^dag a^dag + b a);
// with rwa=true the pair-creation/annihilation part is dropped, so H
// commutes with the total excitation number.
inline OperatorMatrix build_hamiltonian(const DeviceLayout& layout,
                                        const ModeBasis& basis,
                                        bool rwa = true) {
  const std::size_t dim = basis.dimension();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(dim * (2 + layout.edges.size()));

  struct EdgeIdx {
    int x, y;
    double g;
  };
  std::vector<EdgeIdx> edges;
  edges.reserve(layout.edges.size());
  for (const auto& e : layout.edges)
    edges.push_back({basis.mode_index(e.a), basis.mode_index(e.b),
                     e.strength_mhz});

  Occupation target;
  for (std::size_t s = 0; s < dim; ++s) {
    const Occupation& occ = basis.states[s];
    trip.emplace_back(static_cast<int>(s), static_cast<int>(s),
                      basis.bare_energy(occ));
    for (const auto& e : edges) {
      if (e.g == 0.0) continue;
      // exchange term: +G sqrt(n_x (n_y+1)) |..n_x-1, n_y+1..><..n_x, n_y..|
      // emitted once per unordered pair by requiring target > source ordinal
      for (int dir = 0; dir < 2; ++dir) {
        int from = dir == 0 ? e.x : e.y;
        int to = dir == 0 ? e.y : e.x;
        if (occ[from] == 0) continue;
        if (occ[to] + 1 >= basis.modes[to].n_levels) continue;
        target = occ;
        target[from] -= 1;
        target[to] += 1;
        auto t = basis.find_state(target);
        if (!t || *t <= s) continue;
        double amp = e.g * std::sqrt(static_cast<double>(occ[from]) *
                                     (occ[to] + 1.0));
        trip.emplace_back(static_cast<int>(s), static_cast<int>(*t), amp);
        trip.emplace_back(static_cast<int>(*t), static_cast<int>(s), amp);
      }
      if (!rwa) {
        // counter-rotating pair creation: -G sqrt((n_x+1)(n_y+1))
        if (occ[e.x] + 1 < basis.modes[e.x].n_levels &&
            occ[e.y] + 1 < basis.modes[e.y].n_levels) {
          target = occ;
          target[e.x] += 1;
          target[e.y] += 1;
          if (auto t = basis.find_state(target)) {
            double amp = -e.g * std::sqrt((occ[e.x] + 1.0) * (occ[e.y] + 1.0));
            trip.emplace_back(static_cast<int>(s), static_cast<int>(*t), amp);
            trip.emplace_back(static_cast<int>(*t), static_cast<int>(s), amp);
          }
        }
      }
    }
  }
  return OperatorMatrix::from_triplets(dim, trip);
}

}  // namespace qcell
