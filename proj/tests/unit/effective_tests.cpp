#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "qcell/pipeline.hpp"

using namespace qcell;

TEST_CASE("uncoupled labeling is the identity with unit overlaps") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  for (auto& e : cell.edges) e.strength_mhz = 0.0;
  TruncationPolicy p;
  p.total_excitation_cap = 3;
  ModeBasis b = build_basis(cell, p);
  Spectrum s = eigensolve(build_hamiltonian(cell, b));
  StateLabeling lab = label_states(s, b);
  for (std::size_t i = 0; i < b.dimension(); ++i) {
    CHECK(lab.overlap[i] == Catch::Approx(1.0).margin(1e-12));
    CHECK_FALSE(lab.hybridized[i]);
    CHECK(lab.energy_of(s, i) == Catch::Approx(b.bare_energy(b.states[i])).margin(1e-9));
  }
}

TEST_CASE("resonant exchange pair is flagged hybridized at overlap 1/2") {
  DeviceLayout l;
  l.qubits = {TransmonSpec{"a", 6000.0, -200.0, 3, 20000.0, false, {}},
              TransmonSpec{"b", 6000.0, -200.0, 3, 20000.0, false, {}}};
  l.edges = {{"a", "b", 10.0, EdgeKind::Side}};
  l.validate();
  TruncationPolicy p;
  p.total_excitation_cap = 1;
  ModeBasis b = build_basis(l, p);
  Spectrum s = eigensolve(build_hamiltonian(l, b));
  StateLabeling lab = label_states(s, b);
  int flagged = 0;
  for (std::size_t i = 0; i < b.dimension(); ++i) {
    if (b.total_excitation(i) != 1) continue;
    CHECK(lab.overlap[i] == Catch::Approx(0.5).margin(1e-9));
    if (lab.hybridized[i]) ++flagged;
  }
  CHECK(flagged == 2);
}

TEST_CASE("dispersive labeling matches perturbation theory") {
  // Delta/G = 10; second-order dressed energies E ~ f +/- G^2/Delta
  double f1 = 6000.0, f2 = 6500.0, g = 50.0;
  DeviceLayout l;
  l.qubits = {TransmonSpec{"a", f1, -200.0, 3, 20000.0, false, {}},
              TransmonSpec{"b", f2, -200.0, 3, 20000.0, false, {}}};
  l.edges = {{"a", "b", g, EdgeKind::Side}};
  l.validate();
  TruncationPolicy p;
  p.total_excitation_cap = 1;
  ModeBasis b = build_basis(l, p);
  Spectrum s = eigensolve(build_hamiltonian(l, b));
  StateLabeling lab = label_states(s, b);
  for (std::size_t i = 0; i < b.dimension(); ++i)
    CHECK(lab.overlap[i] > 0.99);
  Occupation one_a{1, 0}, one_b{0, 1};
  double shift = g * g / (f1 - f2);
  CHECK(lab.energy_of(s, b.state_index(one_a)) ==
        Catch::Approx(f1 + shift).margin(0.5));
  CHECK(lab.energy_of(s, b.state_index(one_b)) ==
        Catch::Approx(f2 - shift).margin(0.5));
}

TEST_CASE("decoupled coupler leaves bare energies and direct exchange") {
  DeviceLayout l = testfix::pair_with_coupler(6000.0, 6100.0, 7050.0,
                                              /*g_qc=*/0.0, /*g_direct=*/8.0);
  LayoutSolution sol = solve_layout(l);
  Occupation s10{1, 0}, s01{0, 1}, s11{1, 1};
  CHECK(sol.eff.dressed_energy(s10) == Catch::Approx(6000.0).margin(1e-9));
  CHECK(sol.eff.dressed_energy(s01) == Catch::Approx(6100.0).margin(1e-9));
  CHECK(sol.eff.j_table.get(0, 0, 1, 0) == Catch::Approx(8.0).margin(1e-9));
  // uncoupled coupler: dressed |11> is additive
  CHECK(sol.eff.dressed_energy(s11) ==
        Catch::Approx(sol.eff.dressed_energy(s10) + sol.eff.dressed_energy(s01))
            .margin(0.05));
}

TEST_CASE("dispersive exchange matches the closed-form estimate within 5%") {
  // Delta/G = 10 with no direct coupling: block-diagonalized J vs Eq-style J
  DeviceLayout l = testfix::pair_with_coupler(6000.0, 6050.0, 7025.0, 100.0, 0.0);
  double j_exact = solve_single_excitation(l).exchange(0, 1);
  double j_pert = perturbative_j(0.0, 100.0, 100.0, 7025.0, 6000.0, 6050.0);
  CHECK(std::abs(j_pert - j_exact) <= 0.05 * std::abs(j_exact));
}

TEST_CASE("higher-level exchange approaches sqrt(2) in the harmonic limit") {
  DeviceLayout l;
  l.qubits = {TransmonSpec{"a", 6000.0, -0.01, 4, 20000.0, false, {}},
              TransmonSpec{"b", 6400.0, -0.01, 4, 20000.0, false, {}}};
  l.edges = {{"a", "b", 5.0, EdgeKind::Side}};
  l.validate();
  LayoutSolution sol = solve_layout(l);
  Occupation from{2, 0}, to{1, 1}, f10{1, 0}, t01{0, 1};
  const auto& basis = sol.eff.qubit_basis;
  double elem_high = sol.eff.h(basis.state_index(from), basis.state_index(to));
  double elem_low = sol.eff.h(basis.state_index(f10), basis.state_index(t01));
  CHECK(elem_high / elem_low == Catch::Approx(std::sqrt(2.0)).margin(1e-3));
  // and the stored table divides the ladder factor out
  CHECK(sol.eff.j_table.get(0, 1, 1, 0) ==
        Catch::Approx(sol.eff.j_table.get(0, 0, 1, 0)).margin(1e-3));
}

TEST_CASE("exchange table is symmetric under pair swap") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  LayoutSolution sol = solve_layout(cell);
  const auto& jt = sol.eff.j_table;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int ta = 0; ta < 2; ++ta)
        for (int tb = 0; tb < 2; ++tb)
          CHECK(jt.get(a, ta, b, tb) == jt.get(b, tb, a, ta));
}

TEST_CASE("least-action unitary beats re-phased alternatives") {
  DeviceLayout l = testfix::pair_with_coupler(6000.0, 6150.0, 6900.0, 80.0, 6.0);
  TruncationPolicy p;
  p.total_excitation_cap = 2;
  SolveOptions so;
  so.policy = p;
  LayoutSolution sol = solve_layout(l, so);

  std::vector<bool> in_block(sol.basis.dimension());
  for (std::size_t i = 0; i < sol.basis.dimension(); ++i)
    in_block[i] = sol.basis.states[i][2] == 0;  // coupler mode ground
  Eigen::MatrixXd u = least_action_unitary(sol.spectrum, sol.labeling, in_block);
  const int n = static_cast<int>(sol.basis.dimension());
  CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-9);
  double base = (u - Eigen::MatrixXd::Identity(n, n)).norm();

  // alternatives: same column spaces, eigenvector columns re-phased
  SplitMix64 rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    StateLabeling tweaked = sol.labeling;
    Spectrum flipped = sol.spectrum;
    for (int c = 0; c < n; ++c)
      if (rng.next() & 1) flipped.eigenvectors.col(c) *= -1.0;
    Eigen::MatrixXd v = least_action_unitary(flipped, tweaked, in_block);
    // the polar form is phase-insensitive; flipping before the polar step
    // must not beat it, and direct column use certainly must not
    Eigen::MatrixXd direct(n, n);
    for (int i = 0; i < n; ++i)
      direct.col(i) = flipped.eigenvectors.col(tweaked.eigen_of_bare[i]);
    CHECK(base <= (direct - Eigen::MatrixXd::Identity(n, n)).norm() + 1e-12);
    CHECK(std::abs((v - Eigen::MatrixXd::Identity(n, n)).norm() - base) < 1e-9);
  }
}

TEST_CASE("block separability failure is reported") {
  // park the coupler right on the qubits: the dressed block straddles
  DeviceLayout l;
  l.qubits = {TransmonSpec{"a", 7000.0, -200.0, 3, 20000.0, false, {}},
              TransmonSpec{"b", 7000.4, -200.0, 3, 20000.0, false, {}}};
  l.couplers = {CouplerSpec{"c", 7000.2, {6000.0, 9000.0}, 3, 0.0}};
  l.edges = {{"a", "c", 100.0, EdgeKind::QubitCoupler},
             {"b", "c", 100.0, EdgeKind::QubitCoupler}};
  l.validate();
  TruncationPolicy p;
  p.total_excitation_cap = 1;
  ModeBasis b = build_basis(l, p);
  Spectrum s = eigensolve(build_hamiltonian(l, b));
  StateLabeling lab = label_states(s, b);
  BlockDiagOptions opts;
  opts.separability_floor = 0.2;
  REQUIRE_THROWS_WITH(block_diagonalize(s, b, lab, opts),
                      Catch::Matchers::ContainsSubstring("separable"));
}

// ---- Pauli coefficients -----------------------------------------------------

TEST_CASE("uncoupled system: single-Z is -f/2 and higher weights vanish") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  for (auto& e : cell.edges) e.strength_mhz = 0.0;
  LayoutSolution sol = solve_layout(cell);
  PauliCoefficients pc = pauli_coefficients(sol.eff, 5);
  for (const auto& [mask, a] : pc.alpha_mhz) {
    int w = std::popcount(mask);
    if (w >= 2) CHECK(std::abs(a) < 1e-9);
  }
  for (int q = 0; q < 5; ++q)
    CHECK(pc.get(1u << q) ==
          Catch::Approx(-cell.qubits[q].freq_idle_mhz / 2).margin(1e-8));
  // identity entry equals the mean computational energy
  auto energies = computational_energies(sol.eff);
  double mean = 0.0;
  for (double e : energies) mean += e;
  mean /= energies.size();
  CHECK(pc.get(0u) == Catch::Approx(mean).margin(1e-9));
}

TEST_CASE("two dispersive transmons: 4 alpha_ZZ is the parity sum") {
  DeviceLayout l = testfix::pair_with_coupler(6000.0, 6400.0, 7400.0, 100.0, 2.0);
  LayoutSolution sol = solve_layout(l);
  auto energies = computational_energies(sol.eff);
  double zeta = energies[3] + energies[0] - energies[1] - energies[2];
  PauliCoefficients pc = pauli_coefficients(sol.eff, 2);
  CHECK(4.0 * pc.get(3u) == Catch::Approx(zeta).margin(1e-10));
}

TEST_CASE("exact ZZ approaches the second-order closed form as J shrinks") {
  double rel_prev = -1.0;
  for (double gq : {8.0, 4.0, 2.0}) {
    DeviceLayout l = testfix::pair_with_coupler(6000.0, 6400.0, 7400.0, 0.0, gq);
    LayoutSolution sol = solve_layout(l);
    PauliCoefficients pc = pauli_coefficients(sol.eff, 2);
    double exact = pc.get(3u);
    QubitLevelTable lv = sol.eff.dressed_levels();
    double pert = alpha_zz_2nd(0, 1, sol.eff.j_table, lv);
    double rel = std::abs(pert - exact) / std::abs(exact);
    if (gq == 8.0) CHECK(rel < 0.10);  // J/Delta ~ 0.02 here
    if (rel_prev > 0.0) CHECK(rel < rel_prev);
    rel_prev = rel;
  }
}

TEST_CASE("three-qubit string matches a hand-rolled parity sum") {
  DeviceLayout toy = testfix::triangle();
  TruncationPolicy p;
  p.total_excitation_cap = 5;
  SolveOptions so;
  so.policy = p;
  LayoutSolution sol = solve_layout(toy, so);
  auto energies = computational_energies(sol.eff);

  // independent oracle: explicit loop with its own sign bookkeeping
  auto brute = [&](std::uint32_t mask) {
    double acc = 0.0;
    for (std::uint32_t s = 0; s < 8; ++s) {
      int sign = 1;
      for (int q = 0; q < 3; ++q)
        if ((mask & (1u << q)) && (s & (1u << q))) sign = -sign;
      acc += sign * energies[s];
    }
    return acc / 8.0;
  };
  PauliCoefficients pc = pauli_coefficients(sol.eff, 3);
  for (std::uint32_t mask = 1; mask < 8; ++mask)
    CHECK(pc.get(mask) == Catch::Approx(brute(mask)).margin(1e-12));
  CHECK(coefficient(sol.eff, PauliString::from_string("ZZZ")) ==
        Catch::Approx(brute(7u)).margin(1e-12));
}

TEST_CASE("parity transform is complete and involutive") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  LayoutSolution sol = solve_layout(cell);
  auto energies = computational_energies(sol.eff);
  auto alpha = parity_transform(energies, 5);
  for (std::uint32_t s = 0; s < 32; ++s)
    CHECK(reconstruct_energy(alpha, s) ==
          Catch::Approx(energies[s]).margin(1e-9));
}

TEST_CASE("weight-2+ coefficients ignore per-qubit energy shifts") {
  SplitMix64 rng(21);
  const int n = 4;
  std::vector<double> energies(1u << n);
  for (auto& e : energies) e = 6000.0 * rng.next_symmetric();
  auto alpha = parity_transform(energies, n);

  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 4> shift{};
    for (auto& c : shift) c = 100.0 * rng.next_symmetric();
    std::vector<double> shifted = energies;
    for (std::uint32_t s = 0; s < shifted.size(); ++s)
      for (int q = 0; q < n; ++q)
        if (s & (1u << q)) shifted[s] += shift[q];
    auto alpha2 = parity_transform(shifted, n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
      if (std::popcount(mask) >= 2)
        CHECK(std::abs(alpha2[mask] - alpha[mask]) < 1e-12 * 6000.0);
  }
}

TEST_CASE("single-string evaluation is consistent with the table") {
  DeviceLayout cell = generate_sycamore_like(2, 2);
  LayoutSolution sol = solve_layout(cell);
  PauliCoefficients pc = pauli_coefficients(sol.eff);
  PauliString zz = PauliString::from_string("ZZIII");
  CHECK(coefficient(sol.eff, zz) == Catch::Approx(pc.get(zz)).margin(1e-12));
  // uncoupled cross-check: ZZ on a system with no couplings at all
  DeviceLayout bare = cell;
  for (auto& e : bare.edges) e.strength_mhz = 0.0;
  CHECK(std::abs(coefficient(solve_layout(bare).eff, zz)) < 1e-9);
}

TEST_CASE("coefficient export uses the documented CSV schema") {
  DeviceLayout l = testfix::pair_with_coupler();
  PauliCoefficients pc = pauli_coefficients(solve_layout(l).eff, 2);
  std::ostringstream os;
  pc.write_csv(os);
  std::string csv = os.str();
  CHECK(csv.rfind("string,z_mask,alpha_MHz,zeta_MHz,convention\n", 0) == 0);
  CHECK(csv.find("ZZ,3,") != std::string::npos);
  // zeta column is 2^N times alpha
  CHECK(pc.zeta(3u) == Catch::Approx(4.0 * pc.get(3u)));
}

TEST_CASE("missing computational states are reported") {
  DeviceLayout l = testfix::pair_with_coupler();
  TruncationPolicy p;
  p.total_excitation_cap = 1;  // |11> not admitted
  SolveOptions so;
  so.policy = p;
  LayoutSolution sol = solve_layout(l, so);
  REQUIRE_THROWS_WITH(pauli_coefficients(sol.eff),
                      Catch::Matchers::ContainsSubstring("missing dressed energy"));
}

TEST_CASE("pauli string rendering and parsing") {
  PauliString p = PauliString::from_string("ZIZ");
  CHECK(p.z_mask == 0b101u);
  CHECK(p.weight() == 2);
  CHECK(p.str() == "ZIZ");
  CHECK(p.sign(0b001) == -1);
  CHECK(p.sign(0b101) == 1);
  CHECK(p.sign(0b010) == 1);
  REQUIRE_THROWS_AS(PauliString::from_string("ZXI"), Error);
}
