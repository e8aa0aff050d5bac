#pragma once

#include <string>
#include <vector>

#include "spinfact/chem.hpp"

namespace spinfact {

enum class PoolKind { SD, SA, PAIR };
PoolKind parse_pool(const std::string& name);
std::string pool_name(PoolKind kind);

struct PoolOperator {
  std::string label;
  SpMat matrix;  // anti-Hermitian rotation generator on 2*n_spatial qubits
};

/// Operator pools on n_spatial orbitals.
///  SD    spin-orbital singles and doubles
///  SA    spin-adapted singles, singlet and triplet spin-adapted doubles,
///        seniority-2 forms at coincident indices, and pair doubles
///  PAIR  spin-adapted singles plus pair doubles only
std::vector<PoolOperator> build_pool(PoolKind kind, int n_spatial);

/// psi <- exp(t * A) psi by scaled Taylor summation (A anti-Hermitian).
Eigen::VectorXcd apply_exp_generator(const SpMat& a, double t, const Eigen::VectorXcd& psi);

/// Closed-shell reference determinant: the lowest n_electrons/2 spatial
/// orbitals doubly occupied.
Eigen::VectorXcd closed_shell_reference(int n_spatial, int n_electrons);

struct AdaptOptions {
  int max_operators = 60;
  double grad_tol = 1e-5;       // stop when max selection gradient drops below
  int bfgs_max_iterations = 500;
  double bfgs_grad_tol = 1e-8;
};

struct AdaptIteration {
  int step = 0;
  int chosen = -1;  // pool index
  double max_grad = 0.0;
  double energy = 0.0;
  double s2 = 0.0;  // <S^2> after re-minimization
};

struct AdaptResult {
  std::vector<AdaptIteration> iterations;
  std::vector<int> operator_sequence;  // pool indices, in application order
  Eigen::VectorXd parameters;
  double energy = 0.0;
  double s2 = 0.0;
  bool converged = false;
  Eigen::VectorXcd state;
};

/// Adaptive VQE: grows the ansatz one pool operator at a time (largest
/// commutator gradient, ties to the lowest index) and re-minimizes all
/// parameters by warm-started BFGS after each growth step.
AdaptResult adapt_vqe(const SpMat& hamiltonian, const std::vector<PoolOperator>& pool,
                      const Eigen::VectorXcd& reference, const SpMat& s2_operator,
                      const AdaptOptions& options = {});

struct VqeRunRecord {
  std::string pool;
  int n_spatial = 0;
  int n_electrons = 0;
  int ms2 = 0;
  unsigned seed = 0;
  std::string reference;
  double exact_energy = 0.0;
  bool pool_includes_coincident_forms = false;
  bool pool_includes_pair_doubles = false;
  AdaptResult result;
};

void write_vqe_json(const VqeRunRecord& record, const std::string& path);
void write_vqe_csv(const VqeRunRecord& record, const std::string& path);

}  // namespace spinfact
