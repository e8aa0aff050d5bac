#include <doctest.h>

#include "spinfact/expm.hpp"
#include "spinfact/vqe.hpp"

using namespace spinfact;

TEST_CASE("pool operators are anti-Hermitian and nonzero") {
  for (PoolKind kind : {PoolKind::SD, PoolKind::SA, PoolKind::PAIR}) {
    std::vector<PoolOperator> pool = build_pool(kind, 3);
    CHECK(!pool.empty());
    for (const PoolOperator& op : pool) {
      CHECK(anti_hermitian_defect(op.matrix) < 1e-12);
      CHECK(hs_norm(op.matrix) > 1e-12);
    }
  }
}

TEST_CASE("spin-adapted pool commutes with S^2, Sz and N") {
  SpMat s2 = s_squared_operator(3);
  SpMat sz = s_z_operator(3);
  SpMat num = number_operator(3);
  for (const PoolOperator& op : build_pool(PoolKind::SA, 3)) {
    CHECK(hs_norm(commutator(op.matrix, s2)) < 1e-10);
    CHECK(hs_norm(commutator(op.matrix, sz)) < 1e-10);
    CHECK(hs_norm(commutator(op.matrix, num)) < 1e-10);
  }
}

TEST_CASE("bare singles-and-doubles pool contains spin-breaking operators") {
  SpMat s2 = s_squared_operator(3);
  bool any_breaks = false;
  for (const PoolOperator& op : build_pool(PoolKind::SD, 3)) {
    if (hs_norm(commutator(op.matrix, s2)) > 1e-6) any_breaks = true;
  }
  CHECK(any_breaks);
}

TEST_CASE("exp generator application matches the dense exponential") {
  std::vector<PoolOperator> pool = build_pool(PoolKind::SA, 2);
  const PoolOperator& op = pool.front();
  AntiHermitianExp cache(to_dense(op.matrix));
  Eigen::VectorXcd psi = closed_shell_reference(2, 2);
  for (double t : {-3.7, 0.2, 1.9}) {
    Eigen::VectorXcd direct = cache.at(t) * psi;
    Eigen::VectorXcd series = apply_exp_generator(op.matrix, t, psi);
    CHECK((direct - series).norm() < 1e-12);
  }
}

TEST_CASE("adaptive vqe solves a 2-orbital system to the sector ground state") {
  MolecularIntegrals ints = synth_hamiltonian(2, 0);
  SpMat h = build_hamiltonian(ints);
  SpMat s2 = s_squared_operator(2);
  AdaptResult run = adapt_vqe(h, build_pool(PoolKind::SA, 2),
                              closed_shell_reference(2, ints.n_electrons), s2);
  CHECK(run.converged);
  const double exact = exact_ground(h, 2, ints.n_electrons, ints.ms2, 0);
  CHECK(std::abs(run.energy - exact) < 1e-6);
  CHECK(std::abs(run.s2) < 1e-8);
  // energies are non-increasing across iterations
  for (std::size_t k = 1; k < run.iterations.size(); ++k) {
    CHECK(run.iterations[k].energy <= run.iterations[k - 1].energy + 1e-12);
  }
}
