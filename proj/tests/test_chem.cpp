#include <doctest.h>

#include <cstdio>

#include "spinfact/chem.hpp"

using namespace spinfact;

TEST_CASE("fcidump round trip preserves the integrals") {
  MolecularIntegrals ints = synth_hamiltonian(3, 7);
  const std::string path = "roundtrip.fcidump";
  write_fcidump(ints, path);
  MolecularIntegrals back = parse_fcidump(path);
  std::remove(path.c_str());
  CHECK(back.n_spatial == ints.n_spatial);
  CHECK(back.n_electrons == ints.n_electrons);
  CHECK(back.ms2 == ints.ms2);
  CHECK(std::abs(back.e_core - ints.e_core) < 1e-12);
  CHECK((back.h - ints.h).cwiseAbs().maxCoeff() < 1e-12);
  for (std::size_t k = 0; k < ints.g.size(); ++k) {
    CHECK(std::abs(back.g[k] - ints.g[k]) < 1e-12);
  }
}

TEST_CASE("synthetic hamiltonian conserves particle number and spin") {
  for (unsigned seed : {0u, 3u}) {
    MolecularIntegrals ints = synth_hamiltonian(3, seed);
    SpMat h = build_hamiltonian(ints);
    CHECK(to_dense(SpMat(h - SpMat(h.adjoint()))).cwiseAbs().maxCoeff() < 1e-12);
    for (const SpMat& sym : {number_operator(3), s_z_operator(3), s_squared_operator(3)}) {
      CHECK(hs_norm(commutator(h, sym)) < 1e-12);
    }
  }
}

TEST_CASE("spin operators obey S^2 = S-S+ + Sz(Sz+1) and su(2) brackets") {
  const int n = 2;
  SpMat sp = s_plus_operator(n);
  SpMat sz = s_z_operator(n);
  // [Sz, S+] = S+
  CHECK(hs_norm(SpMat(commutator(sz, sp) - sp)) < 1e-12);
  // S^2 eigenvalues on 2 orbitals: S in {0, 1/2, 1} across all particle
  // sectors, so S(S+1) in {0, 0.75, 2}
  Eigen::SelfAdjointEigenSolver<DenseMat> es(to_dense(s_squared_operator(n)),
                                             Eigen::EigenvaluesOnly);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double ev = es.eigenvalues()[k];
    CHECK(std::min({std::abs(ev), std::abs(ev - 0.75), std::abs(ev - 2.0)}) < 1e-12);
  }
}

TEST_CASE("sector projection agrees with a brute-force filtered diagonalization") {
  MolecularIntegrals ints = synth_hamiltonian(2, 1);
  SpMat h = build_hamiltonian(ints);
  DenseMat hd = to_dense(h);
  DenseMat s2 = to_dense(s_squared_operator(2));

  const std::vector<int> idx = sector_indices(2, 2, 0);
  CHECK(idx.size() == 4);  // two electrons, m_s = 0, two orbitals

  // brute force: diagonalize the full matrix, filter eigenvectors by sector
  Eigen::SelfAdjointEigenSolver<DenseMat> es(hd);
  double best = 1e300;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    Eigen::VectorXcd v = es.eigenvectors().col(k);
    double weight = 0.0;
    for (int i : idx) weight += std::norm(v[i]);
    const double spin = std::real(v.dot(Eigen::VectorXcd(s2 * v)));
    if (weight > 1.0 - 1e-9 && std::abs(spin) < 1e-8) best = std::min(best, es.eigenvalues()[k]);
  }
  CHECK(exact_ground(h, 2, 2, 0, 0) == doctest::Approx(best).epsilon(1e-10));
}
