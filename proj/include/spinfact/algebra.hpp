#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinfact/dsl.hpp"
#include "spinfact/fock.hpp"

namespace spinfact {

struct StructureTerm {
  int k = 0;
  double coeff = 0.0;
};

/// A Lie algebra realized by concrete Fock-space matrices plus its
/// structure tensor over that basis.
struct LieAlgebraModel {
  Family family = Family::S2_iiab;
  OrbitalSet set = OrbitalSet::seniority4();
  bool appendix_mode = false;

  std::vector<DslEntry> entries;  // DSL provenance (appendix mode only)
  std::vector<SpMat> basis;
  Eigen::MatrixXd gram;  // HS inner products of the basis

  // structure[i][j]: [A_i, A_j] = sum_k coeff * A_k
  std::vector<std::vector<std::vector<StructureTerm>>> structure;
  double closure_residual = 0.0;  // max Frobenius residual over all pairs

  Eigen::MatrixXd center_basis;   // m x z, orthonormal coefficient columns
  Eigen::MatrixXd derived_basis;  // m x d, orthonormal coefficient columns

  int dim() const { return static_cast<int>(basis.size()); }

  /// Coefficient vector -> Fock matrix.
  SpMat assemble_coeffs(const Eigen::VectorXd& coeffs) const;
  /// Least-squares coordinates of X over the basis (Gram solve); residual out.
  Eigen::VectorXd project(const SpMat& x, double* residual = nullptr) const;
};

/// Commutator closure of a seed set. Returns an orthonormalized basis
/// (discovery mode). max_dim <= 0 means the 4^n - 1 traceless cap.
std::vector<SpMat> close_algebra(const std::vector<SpMat>& seeds, double rel_tol = 1e-8,
                                 int max_dim = -1);

/// Fills gram, structure and closure_residual. Throws if a bracket leaves
/// the span (residual above 1e-6).
void compute_structure(LieAlgebraModel& model);

/// Max norm of the Jacobi identity residual over all basis triples,
/// evaluated on the structure tensor.
double jacobi_residual(const LieAlgebraModel& model);

/// Orthonormal basis of the center: nullspace of the stacked adjoint maps.
Eigen::MatrixXd center(const LieAlgebraModel& model, double tol = 1e-9);

/// Orthonormal basis of the derived algebra [g, g].
Eigen::MatrixXd derived(const LieAlgebraModel& model, double tol = 1e-9);

/// Adjoint matrix of the coefficient vector x acting on the whole algebra.
Eigen::MatrixXd adjoint_matrix(const LieAlgebraModel& model, const Eigen::VectorXd& x);

/// Killing form restricted to the given coefficient-column subspace.
Eigen::MatrixXd killing_form(const LieAlgebraModel& model, const Eigen::MatrixXd& subspace);

/// Partition of the derived algebra into pairwise commuting ideals.
/// Requires every basis element to lie either in the derived algebra or
/// outside it (true for the appendix bases). Returns 0-based basis index
/// lists, each sorted, ordered by first element.
std::vector<std::vector<int>> ideal_partition(const LieAlgebraModel& model, double tol = 1e-8);

/// True iff all pairwise brackets between the listed basis elements vanish.
bool verify_abelian(const LieAlgebraModel& model, const std::vector<int>& indices);

// ---- data-file plumbing ----

std::string data_path(const std::string& filename);
std::string family_stem(Family family);  // s2_iiab, s2_ijaa, s4_singlet, s4_triplet

/// Loads <stem>.alg, builds matrices, computes the structure tensor,
/// center and derived subspaces.
LieAlgebraModel load_appendix(Family family);

/// Closure from the symmetrized-generator seeds, orthonormal basis.
LieAlgebraModel build_discovery(Family family);

std::vector<Combination> load_centers(Family family);    // <stem>.centers
std::vector<DslEntry> load_zexplicit(Family family);     // <stem>.zexplicit
std::vector<IndexList> load_ideal_lists(Family family);  // <stem>.ideals

/// 28x28 signed integer commutation table (singlet only).
std::vector<std::vector<int>> load_commutation_table(const std::string& path);

void write_algebra_json(const LieAlgebraModel& model, const std::string& path);

}  // namespace spinfact
