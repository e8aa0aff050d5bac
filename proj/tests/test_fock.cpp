#include <doctest.h>

#include "spinfact/fock.hpp"

using namespace spinfact;

TEST_CASE("jordan-wigner ladders satisfy the fermionic anticommutators") {
  const int nq = 4;
  std::vector<SpMat> c, d;
  for (int q = 0; q < nq; ++q) {
    c.push_back(jw_ladder(q, Ladder::Create, nq));
    d.push_back(jw_ladder(q, Ladder::Annihilate, nq));
  }
  auto anticomm = [](const SpMat& x, const SpMat& y) { return SpMat(x * y + y * x); };
  for (int p = 0; p < nq; ++p) {
    for (int q = 0; q < nq; ++q) {
      CHECK(hs_norm(anticomm(c[p], c[q])) == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(hs_norm(anticomm(d[p], d[q])) == doctest::Approx(0.0).epsilon(1e-12));
      SpMat mixed = anticomm(c[p], d[q]);
      if (p == q) {
        SpMat id(mixed.rows(), mixed.cols());
        id.setIdentity();
        CHECK(hs_norm(SpMat(mixed - id)) < 1e-12);
      } else {
        CHECK(hs_norm(mixed) < 1e-12);
      }
    }
  }
}

TEST_CASE("number operator is the diagonal occupation projector") {
  const int nq = 3;
  for (int q = 0; q < nq; ++q) {
    DenseMat n = to_dense(number_op(q, nq));
    for (int s = 0; s < (1 << nq); ++s) {
      CHECK(std::abs(n(s, s) - Complex((s >> q) & 1)) < 1e-15);
    }
    CHECK((n - DenseMat(n.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("rotation generators are anti-Hermitian with spectra in {-1,0,1}") {
  for (Family f : {Family::S2_iiab, Family::S2_ijaa, Family::S4_singlet, Family::S4_triplet}) {
    OrbitalSet set = family_orbitals(f);
    SymmetrizedGenerator sym = build_symmetrized(f);
    for (const GeneratorSpec& spec : sym.specs) {
      SpMat g = build_generator(set, spec);
      CHECK(anti_hermitian_defect(g) < 1e-14);
      Eigen::SelfAdjointEigenSolver<DenseMat> es(DenseMat(Complex(0, 1) * to_dense(g)),
                                                 Eigen::EigenvaluesOnly);
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double ev = es.eigenvalues()[k];
        CHECK(std::min({std::abs(ev), std::abs(ev - 1), std::abs(ev + 1)}) < 1e-12);
      }
    }
  }
}

TEST_CASE("symmetrized generator amplitudes on a reference determinant") {
  // [DERIVED] oracle: apply the assembled seniority-2 generator to the
  // determinant with both i spin orbitals occupied; the images are the two
  // paired double excitations, weighted by the family coefficients.
  OrbitalSet set = OrbitalSet::seniority2_iab();
  SymmetrizedGenerator sym = build_symmetrized(Family::S2_iiab);
  SpMat g = assemble(set, sym);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(64);
  const int ref = 0b000011;  // i_a, i_b occupied (qubits 0, 1)
  psi[ref] = 1.0;
  Eigen::VectorXcd out = g * psi;
  // a_a b_b target (qubits 2, 5) and a_b b_a target (qubits 3, 4)
  const double r2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(out[0b100100] - Complex(r2)) < 1e-12);
  CHECK(std::abs(out[0b011000] - Complex(-r2)) < 1e-12);
  CHECK(std::abs(out.norm() - 1.0) < 1e-12);
}
