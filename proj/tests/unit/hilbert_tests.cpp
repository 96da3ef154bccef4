#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "qcell/pipeline.hpp"

using namespace qcell;

namespace {

// independent enumeration oracle: nested odometer over all occupation
// vectors, filtered by the caps
std::size_t count_states_oracle(const std::vector<int>& levels, int total_cap) {
  std::vector<int> occ(levels.size(), 0);
  std::size_t count = 0;
  while (true) {
    int total = 0;
    for (int n : occ) total += n;
    if (total <= total_cap) ++count;
    std::size_t k = 0;
    while (k < occ.size()) {
      if (++occ[k] < levels[k]) break;
      occ[k] = 0;
      ++k;
    }
    if (k == occ.size()) return count;
  }
}

DeviceLayout single_transmon() {
  DeviceLayout l;
  l.qubits = {TransmonSpec{"q", 6000.0, -200.0, 4, 20000.0, false, {}}};
  l.validate();
  return l;
}

}  // namespace

TEST_CASE("basis enumerates a lone transmon") {
  ModeBasis b = build_basis(single_transmon());
  REQUIRE(b.dimension() == 4);
  for (int n = 0; n < 4; ++n)
    CHECK(b.states[n] == Occupation{static_cast<std::uint8_t>(n)});
}

TEST_CASE("uncapped cell basis has 4^5 * 3^4 states") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  ModeBasis b = build_basis(cell, TruncationPolicy{});
  CHECK(b.dimension() == 82944);
}

TEST_CASE("excitation cap matches the brute-force enumeration oracle") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  for (int cap : {2, 3, 4, 5}) {
    TruncationPolicy p;
    p.total_excitation_cap = cap;
    ModeBasis b = build_basis(cell, p);
    std::vector<int> levels(5, 4);
    levels.insert(levels.end(), 4, 3);
    CHECK(b.dimension() == count_states_oracle(levels, cap));
  }
}

TEST_CASE("basis order is lexicographic and the index map is consistent") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  TruncationPolicy p;
  p.total_excitation_cap = 3;
  ModeBasis b = build_basis(cell, p);
  for (std::size_t i = 1; i < b.dimension(); ++i)
    CHECK(b.states[i - 1] < b.states[i]);
  for (std::size_t i = 0; i < b.dimension(); ++i)
    CHECK(b.state_index(b.states[i]) == i);
}

TEST_CASE("hard limit aborts oversized bases") {
  DeviceLayout big = generate_sycamore_like(4, 8);
  TruncationPolicy p;
  p.total_excitation_cap = 3;
  p.hard_limit = 1000;
  REQUIRE_THROWS_WITH(build_basis(big, p),
                      Catch::Matchers::ContainsSubstring("hard limit"));
}

TEST_CASE("bare energy cutoff prunes high-lying states") {
  DeviceLayout l = single_transmon();
  TruncationPolicy p;
  p.bare_energy_cutoff_mhz = 6500.0;  // keeps |0> and |1> only
  ModeBasis b = build_basis(l, p);
  CHECK(b.dimension() == 2);
}

TEST_CASE("uncoupled transmon Hamiltonian is the Duffing diagonal") {
  DeviceLayout l = single_transmon();
  ModeBasis b = build_basis(l);
  OperatorMatrix h = build_hamiltonian(l, b);
  Eigen::MatrixXd d = h.dense();
  for (int n = 0; n < 4; ++n) {
    double expected = n * 6000.0 + 0.5 * (-200.0) * n * (n - 1);
    CHECK(d(n, n) == expected);
  }
  CHECK(d.diagonal().cwiseAbs().sum() == Catch::Approx(d.cwiseAbs().sum()));
}

TEST_CASE("all couplings zero gives a diagonal matrix") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  for (auto& e : cell.edges) e.strength_mhz = 0.0;
  TruncationPolicy p;
  p.total_excitation_cap = 3;
  ModeBasis b = build_basis(cell, p);
  OperatorMatrix h = build_hamiltonian(cell, b);
  Eigen::MatrixXd d = h.dense();
  CHECK((d - Eigen::MatrixXd(d.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("resonant exchange splits the single-excitation doublet by 2G") {
  DeviceLayout l;
  l.qubits = {TransmonSpec{"a", 6000.0, -200.0, 3, 20000.0, false, {}},
              TransmonSpec{"b", 6000.0, -200.0, 3, 20000.0, false, {}}};
  l.edges = {{"a", "b", 25.0, EdgeKind::Side}};
  l.validate();
  TruncationPolicy p;
  p.total_excitation_cap = 1;
  ModeBasis b = build_basis(l, p);
  Spectrum s = eigensolve(build_hamiltonian(l, b));
  REQUIRE(s.eigenvalues.size() == 3);
  CHECK(s.eigenvalues[2] - s.eigenvalues[1] == Catch::Approx(50.0).margin(1e-9));
}

TEST_CASE("assembly is exactly symmetric and trace equals bare energies") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  TruncationPolicy p;
  p.total_excitation_cap = 4;
  ModeBasis b = build_basis(cell, p);
  OperatorMatrix h = build_hamiltonian(cell, b);
  CHECK(h.hermiticity_defect() == 0.0);
  double bare = 0.0;
  for (const auto& s : b.states) bare += b.bare_energy(s);
  CHECK(h.trace() == Catch::Approx(bare).epsilon(1e-14));
}

TEST_CASE("rotating-wave assembly commutes with total excitation number") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  TruncationPolicy p;
  p.total_excitation_cap = 3;
  ModeBasis b = build_basis(cell, p);
  const auto& m = build_hamiltonian(cell, b, true).sparse();
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      REQUIRE(b.total_excitation(it.row()) == b.total_excitation(it.col()));
  // and the counter-rotating terms break that block structure
  const auto& f = build_hamiltonian(cell, b, false).sparse();
  bool mixes = false;
  for (int k = 0; k < f.outerSize() && !mixes; ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(f, k); it; ++it)
      if (b.total_excitation(it.row()) != b.total_excitation(it.col())) {
        mixes = true;
        break;
      }
  CHECK(mixes);
}

TEST_CASE("coordinate dump lists every stored entry") {
  DeviceLayout l = testfix::pair_with_coupler();
  TruncationPolicy p;
  p.total_excitation_cap = 1;
  ModeBasis b = build_basis(l, p);
  OperatorMatrix h = build_hamiltonian(l, b);
  std::ostringstream os;
  h.dump_coordinates(os);
  CHECK(std::count(os.str().begin(), os.str().end(), '\n') ==
        static_cast<long>(h.sparse().nonZeros()));
}

TEST_CASE("diagonal matrices eigensolve to their sorted diagonal") {
  std::vector<Eigen::Triplet<double>> t{{0, 0, 3.0}, {1, 1, -1.0}, {2, 2, 2.0}};
  Spectrum s = eigensolve(OperatorMatrix::from_triplets(3, t));
  CHECK(s.eigenvalues[0] == -1.0);
  CHECK(s.eigenvalues[1] == 2.0);
  CHECK(s.eigenvalues[2] == 3.0);
}

TEST_CASE("two-level closed form") {
  double g = 7.0, delta = 23.0;
  std::vector<Eigen::Triplet<double>> t{{0, 1, g}, {1, 0, g}, {1, 1, delta}};
  Spectrum s = eigensolve(OperatorMatrix::from_triplets(2, t));
  double disc = std::sqrt(delta * delta + 4 * g * g);
  CHECK(s.eigenvalues[0] == Catch::Approx((delta - disc) / 2).margin(1e-12));
  CHECK(s.eigenvalues[1] == Catch::Approx((delta + disc) / 2).margin(1e-12));
}

TEST_CASE("random dense matrix reconstructs from its eigenpairs") {
  SplitMix64 rng(5);
  const int n = 100;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.next_symmetric();
  Spectrum s = eigensolve(OperatorMatrix::from_dense(a));
  Eigen::MatrixXd rebuilt =
      s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
  CHECK((rebuilt - a).norm() <= 1e-8 * a.norm());
  // residual and orthonormality invariants
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd r = a * s.eigenvectors.col(k) -
                        s.eigenvalues[k] * s.eigenvectors.col(k);
    CHECK(r.norm() <= 1e-9 * a.norm());
  }
  Eigen::MatrixXd gram =
      s.eigenvectors.transpose() * s.eigenvectors -
      Eigen::MatrixXd::Identity(n, n);
  CHECK(gram.norm() < 1e-10);
}

TEST_CASE("k-lowest agrees with the full solve") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  TruncationPolicy p;
  p.total_excitation_cap = 2;
  ModeBasis b = build_basis(cell, p);
  OperatorMatrix h = build_hamiltonian(cell, b);
  Spectrum full = eigensolve(h);
  Spectrum low = eigensolve(h, 7);
  REQUIRE(low.eigenvalues.size() == 7);
  for (int k = 0; k < 7; ++k)
    CHECK(low.eigenvalues[k] == Catch::Approx(full.eigenvalues[k]).margin(1e-9));
}

TEST_CASE("iterative path handles components above the dense limit") {
  // single sparse chain with a dominant diagonal; first-order perturbation
  // theory provides an independent check on the lowest eigenvalues
  const int n = 6000;
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, 0.5 * i);
  for (int i = 0; i + 1 < n; ++i) {
    t.emplace_back(i, i + 1, 0.05);
    t.emplace_back(i + 1, i, 0.05);
  }
  OperatorMatrix h = OperatorMatrix::from_triplets(n, t);
  EigensolveOptions opts;
  opts.dense_limit = 1024;
  Spectrum s = eigensolve(h, 4, opts);
  REQUIRE(s.eigenvalues.size() == 4);
  const auto& m = h.sparse();
  for (int k = 0; k < 4; ++k) {
    Eigen::VectorXd r = m * s.eigenvectors.col(k) -
                        s.eigenvalues[k] * s.eigenvectors.col(k);
    CHECK(r.norm() <= 1e-8 * m.norm());
    double pt = 0.5 * k;  // second-order shifts are -/+ 0.05^2/0.5
    if (k == 0)
      pt -= 0.05 * 0.05 / 0.5;
    else
      pt += 0.05 * 0.05 / 0.5 * 0.0;  // interior levels shift by ~0
    CHECK(std::abs(s.eigenvalues[k] - pt) < 1e-2);
  }
}

TEST_CASE("full solve of an oversized component is refused") {
  const int n = 5000;
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, 1.0 * i);
  for (int i = 0; i + 1 < n; ++i) {
    t.emplace_back(i, i + 1, 0.1);
    t.emplace_back(i + 1, i, 0.1);
  }
  EigensolveOptions opts;
  opts.dense_limit = 1024;
  REQUIRE_THROWS_WITH(eigensolve(OperatorMatrix::from_triplets(n, t),
                                 std::nullopt, opts),
                      Catch::Matchers::ContainsSubstring("dense limit"));
}

TEST_CASE("eigenvalues are invariant under mode reordering") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  TruncationPolicy p;
  p.total_excitation_cap = 3;
  ModeBasis b1 = build_basis(cell, p);
  Spectrum s1 = eigensolve(build_hamiltonian(cell, b1));

  DeviceLayout shuffled = cell;
  std::rotate(shuffled.qubits.begin(), shuffled.qubits.begin() + 2,
              shuffled.qubits.end());
  std::rotate(shuffled.couplers.begin(), shuffled.couplers.begin() + 1,
              shuffled.couplers.end());
  shuffled.validate();
  ModeBasis b2 = build_basis(shuffled, p);
  Spectrum s2 = eigensolve(build_hamiltonian(shuffled, b2));

  REQUIRE(s1.eigenvalues.size() == s2.eigenvalues.size());
  double scale = s1.eigenvalues.cwiseAbs().maxCoeff();
  for (int k = 0; k < s1.eigenvalues.size(); ++k)
    CHECK(std::abs(s1.eigenvalues[k] - s2.eigenvalues[k]) <= 1e-9 * scale);
}

TEST_CASE("truncation convergence: qubit levels 3, 4, 5 on one cell") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  std::vector<TruncationPolicy> policies;
  for (int qlev : {3, 4, 5}) {
    TruncationPolicy p;
    for (const auto& q : cell.qubits) p.level_caps[q.id] = qlev;
    p.total_excitation_cap = 4;
    // level caps above the declared count require regenerating the specs
    policies.push_back(p);
  }
  // widen the declared level count so caps of 5 are meaningful
  for (auto& q : cell.qubits) q.n_levels = 5;
  cell.validate();

  Occupation probe(5, 0);
  probe[0] = probe[1] = 1;
  auto rows = convergence_check(cell, policies, {probe});
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].drift_mhz < 1e-3);  // below 1 kHz between the last two
}

TEST_CASE("convergence of an uncoupled layout is exactly flat") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  for (auto& e : cell.edges) e.strength_mhz = 0.0;
  std::vector<TruncationPolicy> policies(2);
  policies[0].total_excitation_cap = 3;
  policies[1].total_excitation_cap = 4;
  for (const auto& row : convergence_check(cell, policies))
    CHECK(row.drift_mhz == 0.0);
}

TEST_CASE("coupler level convergence is reported") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  std::vector<TruncationPolicy> policies;
  for (int clev : {2, 3}) {
    TruncationPolicy p;
    for (const auto& c : cell.couplers) p.level_caps[c.id] = clev;
    p.total_excitation_cap = 4;
    policies.push_back(p);
  }
  auto rows = convergence_check(cell, policies);
  REQUIRE_FALSE(rows.empty());
  bool has_drift_row = false;
  for (const auto& row : rows)
    if (!row.first && row.drift_mhz > 0.0) has_drift_row = true;
  CHECK(has_drift_row);
}
