#pragma once

#include <memory>
#include <string>
#include <vector>

#include "spinfact/algebra.hpp"
#include "spinfact/expm.hpp"

namespace spinfact {

struct CentralFactor {
  int z_index = 0;  // 1-based center label (Z1, Z2, ...)
  double angle = 0.0;
};

struct SemisimpleFactor {
  int basis_index = 0;  // 1-based appendix index
  double t = 0.0;
};

struct FactorizationResult {
  Family family = Family::S2_iiab;
  double theta = 0.0;
  std::vector<CentralFactor> central;
  std::vector<SemisimpleFactor> semisimple;  // ascending basis index
  double cost_residual = 0.0;                // adjoint-representation cost
  double fock_residual = 0.0;                // Frobenius error in the Fock rep
  int iterations = 0;
  int restarts_used = 0;
  unsigned seed = 0;
};

/// Exact product factorization of exp(theta * G_sym) into central phases
/// and one factor per semisimple appendix generator.  The nonlinear solve
/// runs in the adjoint representation, block by block over the commuting
/// ideals; the result is certified against the Fock-space exponential.
class Factorizer {
 public:
  explicit Factorizer(const LieAlgebraModel& model);

  FactorizationResult factorize(double theta, unsigned seed = 0) const;

  /// Frobenius distance between the factored product and exp(theta*G_sym),
  /// both built in the Fock representation.
  double fock_residual(const FactorizationResult& result) const;

  const Eigen::VectorXd& target_coefficients() const { return target_coeffs_; }
  const std::vector<int>& semisimple_indices() const { return semisimple_idx_; }

 private:
  // cached spectral decomposition of a real matrix with purely imaginary
  // spectrum: exp(t*A) = P0 + sum_w cos(wt) C_w + sin(wt) S_w, so each
  // evaluation is a handful of d^2 accumulations instead of matrix products
  struct CachedExp {
    explicit CachedExp(const Eigen::MatrixXd& a);
    Eigen::MatrixXd at(double t) const;
    Eigen::MatrixXd p0;                 // projector onto the kernel
    std::vector<double> freqs;          // distinct positive frequencies w
    std::vector<Eigen::MatrixXd> cosm;  // C_w = 2 Re P_{iw}
    std::vector<Eigen::MatrixXd> sinm;  // S_w = -2 Im P_{iw}
  };

  // invariant subspace of the restricted adjoint representation: all the
  // adjoint matrices are simultaneously block-diagonal over the components,
  // so the Frobenius cost splits into an exact sum of small-matrix costs
  struct Component {
    Eigen::MatrixXd u;               // d x m, orthonormal columns
    std::vector<int> active;         // factor positions with a nonzero block
    std::vector<Eigen::MatrixXd> b;  // m x m restricted generator per active
    std::vector<CachedExp> exps;     // cached spectra of the same
  };

  struct Block {
    std::vector<int> members;          // 0-based basis indices, ascending
    std::vector<Eigen::MatrixXd> ads;  // restricted adjoint matrix per member
    std::vector<Component> comps;
  };

  const LieAlgebraModel* model_;
  Eigen::VectorXd target_coeffs_;           // G_sym over the appendix basis
  std::vector<Eigen::VectorXd> z_coeffs_;   // center combinations
  std::vector<int> paired_elementary_;      // 0-based k_i per center
  std::vector<double> central_angles_unit_; // angle_i at theta = 1
  Eigen::VectorXd semisimple_target_;       // S over the appendix basis
  std::vector<int> semisimple_idx_;         // 0-based, ascending
  std::vector<Block> blocks_;

  mutable std::vector<std::unique_ptr<AntiHermitianExp>> basis_exp_;  // lazy
  std::vector<std::unique_ptr<AntiHermitianExp>> center_exp_;
  std::unique_ptr<AntiHermitianExp> target_exp_;

  const AntiHermitianExp& basis_exp(int k) const;
};

void write_factorization_json(const FactorizationResult& result, const std::string& path);

}  // namespace spinfact
