#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "spinfact/orbitals.hpp"

namespace spinfact {

using Complex = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Complex>;
using DenseMat = Eigen::MatrixXcd;

enum class Ladder { Create, Annihilate };

/// Jordan-Wigner representation of a ladder operator on `n_qubits` modes.
/// Bit q of a basis-state index is the occupation of qubit q.
SpMat jw_ladder(int qubit, Ladder kind, int n_qubits);

/// Occupation-number operator n(p) = a^dag(p) a(p); diagonal projector.
SpMat number_op(int qubit, int n_qubits);

/// Rotation generator of a double excitation:
///   G^{u1 u2}_{l1 l2} = a^dag(u1) a^dag(u2) a(l2) a(l1) - h.c.
/// All four spin orbitals must be distinct.
SpMat build_g(const OrbitalSet& set, std::pair<SpinOrbital, SpinOrbital> lower,
              std::pair<SpinOrbital, SpinOrbital> upper);

/// One monomial of an occupation-number polynomial: coeff * prod n(p).
struct Monomial {
  long long coeff = 0;
  std::vector<SpinOrbital> factors;  // sorted, distinct
};

/// Symbolic description of one algebra element: sign * poly({n}) * G.
/// An absent polynomial means the bare rotation generator.
struct GeneratorSpec {
  int sign = 1;
  std::vector<Monomial> polynomial;  // empty => no prefactor
  std::pair<SpinOrbital, SpinOrbital> lower;
  std::pair<SpinOrbital, SpinOrbital> upper;

  bool has_polynomial() const { return !polynomial.empty(); }
  /// Spin orbitals appearing in the polynomial (sorted, distinct).
  std::vector<SpinOrbital> polynomial_support() const;
};

/// Diagonal matrix of an occupation polynomial.
SpMat build_polynomial(const OrbitalSet& set, const std::vector<Monomial>& poly);

/// Full matrix of a GeneratorSpec.  Rejects specs whose polynomial indices
/// overlap the base indices, and specs with repeated base orbitals.
SpMat build_generator(const OrbitalSet& set, const GeneratorSpec& spec);

/// Symmetrized generator families from the spin-adapted expansion.
enum class Family { S2_iiab, S2_ijaa, S4_singlet, S4_triplet };

Family parse_family(const std::string& name);
std::string family_name(Family f);
OrbitalSet family_orbitals(Family f);

/// Elementary generators and their real coefficients, in equation order.
/// The assembled operator is sum_k c[k] * build_generator(specs[k]).
struct SymmetrizedGenerator {
  std::vector<GeneratorSpec> specs;
  std::vector<double> coefficients;
};

SymmetrizedGenerator build_symmetrized(Family family);

/// Assembled matrix sum_k c_k A_k of a symmetrized generator.
SpMat assemble(const OrbitalSet& set, const SymmetrizedGenerator& sym);

// --- small numeric helpers shared by the algebra layer ---

inline SpMat commutator(const SpMat& x, const SpMat& y) {
  return SpMat((x * y - y * x).pruned(Complex(1.0), 1e-14));
}

/// Hilbert-Schmidt inner product Re tr(X^dag Y) / dim.
double hs_inner(const SpMat& x, const SpMat& y);
double hs_norm(const SpMat& x);

/// Max |entry| of X^dag + X (anti-Hermiticity defect).
double anti_hermitian_defect(const SpMat& x);

DenseMat to_dense(const SpMat& x);

}  // namespace spinfact
