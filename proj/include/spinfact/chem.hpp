#pragma once

#include <string>
#include <vector>

#include "spinfact/fock.hpp"

namespace spinfact {

/// Spin-free molecular integrals in chemists' notation:
///   H = e_core + sum_pq h_pq E_pq-like one-body part
///       + 1/2 sum_pqrs (pq|rs) a^dag_{p s} a^dag_{r t} a_{s t} a_{q s}
/// g is stored dense with the full 8-fold index symmetry applied.
struct MolecularIntegrals {
  int n_spatial = 0;
  int n_electrons = 0;
  int ms2 = 0;
  double e_core = 0.0;
  Eigen::MatrixXd h;       // n x n, symmetric
  std::vector<double> g;   // n^4, (pq|rs) at ((p*n+q)*n+r)*n+s

  double& g_at(int p, int q, int r, int s) {
    return g[static_cast<std::size_t>(((p * n_spatial + q) * n_spatial + r) * n_spatial + s)];
  }
  double g_at(int p, int q, int r, int s) const {
    return g[static_cast<std::size_t>(((p * n_spatial + q) * n_spatial + r) * n_spatial + s)];
  }
};

MolecularIntegrals parse_fcidump(const std::string& path);
void write_fcidump(const MolecularIntegrals& ints, const std::string& path);

/// Random spin-free test Hamiltonian: diagonally dominant h plus small
/// 8-fold-symmetric two-electron integrals, deterministic in the seed.
MolecularIntegrals synth_hamiltonian(int n_spatial, unsigned seed);

/// Jordan-Wigner qubit convention for molecular operators:
/// qubit 2p = p_alpha, qubit 2p+1 = p_beta; 2*n_spatial qubits total.
SpMat build_hamiltonian(const MolecularIntegrals& ints);

/// Total-spin operators on n_spatial orbitals (same qubit convention).
SpMat s_plus_operator(int n_spatial);
SpMat s_z_operator(int n_spatial);
SpMat s_squared_operator(int n_spatial);  // S-S+ + Sz(Sz + 1)
SpMat number_operator(int n_spatial);

/// Indices of basis states with the given electron count and 2*m_s.
std::vector<int> sector_indices(int n_spatial, int n_electrons, int ms2);

/// Lowest eigenvalue of H restricted to the (N, m_s) sector; if s_quantum
/// is non-negative, additionally projected onto the total-spin-S eigenspace.
double exact_ground(const SpMat& hamiltonian, int n_spatial, int n_electrons, int ms2,
                    int s2_doubled = -1);  // s2_doubled = 2S, -1 = no S filter

}  // namespace spinfact
