#include <doctest.h>

#include <numbers>

#include "spinfact/factorize.hpp"

using namespace spinfact;

namespace {

Eigen::MatrixXcd product_unitary(const LieAlgebraModel& model, const FactorizationResult& r) {
  const Eigen::Index n = model.basis.front().rows();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  std::vector<Combination> combos = load_centers(model.family);
  // left-to-right product: central factors first, then the semisimple ones
  std::vector<std::pair<Eigen::MatrixXcd, double>> factors;
  for (const CentralFactor& f : r.central) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(model.dim());
    for (const auto& [idx, coeff] : combos[f.z_index - 1].terms) z[idx - 1] = coeff;
    factors.emplace_back(to_dense(model.assemble_coeffs(z)), f.angle);
  }
  for (const SemisimpleFactor& f : r.semisimple) {
    factors.emplace_back(to_dense(model.basis[f.basis_index - 1]), f.t);
  }
  for (const auto& [mat, param] : factors) u = u * AntiHermitianExp(mat).at(param);
  return u;
}

}  // namespace

TEST_CASE("seniority-2 factorization certifies on a small theta set") {
  LieAlgebraModel model = load_appendix(Family::S2_iiab);
  Factorizer fac(model);
  for (double theta : {-2.2, 0.3, std::numbers::pi}) {
    FactorizationResult r = fac.factorize(theta, 0);
    CHECK(r.cost_residual < 1e-10);
    CHECK(r.fock_residual < 1e-6);
    CHECK(r.central.size() == 2);
    CHECK(r.semisimple.size() == 3);
  }
}

TEST_CASE("factorized unitaries satisfy the group property in theta") {
  LieAlgebraModel model = load_appendix(Family::S2_iiab);
  Factorizer fac(model);
  const double t1 = 0.7, t2 = -1.1;
  Eigen::MatrixXcd u1 = product_unitary(model, fac.factorize(t1, 0));
  Eigen::MatrixXcd u2 = product_unitary(model, fac.factorize(t2, 0));
  Eigen::MatrixXcd u12 = product_unitary(model, fac.factorize(t1 + t2, 0));
  CHECK((u1 * u2 - u12).norm() < 1e-6);
  // unitarity
  CHECK((u1 * u1.adjoint() - Eigen::MatrixXcd::Identity(u1.rows(), u1.rows())).norm() < 1e-10);
}

TEST_CASE("central factors can be permuted freely") {
  LieAlgebraModel model = load_appendix(Family::S2_ijaa);
  Factorizer fac(model);
  FactorizationResult r = fac.factorize(0.9, 0);
  REQUIRE(r.central.size() == 2);
  FactorizationResult swapped = r;
  std::swap(swapped.central[0], swapped.central[1]);
  Eigen::MatrixXcd u1 = product_unitary(model, r);
  Eigen::MatrixXcd u2 = product_unitary(model, swapped);
  CHECK((u1 - u2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("singlet factorization covers all 24 semisimple factors") {
  LieAlgebraModel model = load_appendix(Family::S4_singlet);
  Factorizer fac(model);
  FactorizationResult r = fac.factorize(1.3, 0);
  CHECK(r.cost_residual < 1e-10);
  CHECK(r.fock_residual < 1e-6);
  CHECK(r.central.size() == 4);
  CHECK(r.semisimple.size() == 24);
  // factors are in ascending appendix order
  for (std::size_t k = 1; k < r.semisimple.size(); ++k) {
    CHECK(r.semisimple[k - 1].basis_index < r.semisimple[k].basis_index);
  }
}

TEST_CASE("theta = 0 factorizes to the identity schedule") {
  LieAlgebraModel model = load_appendix(Family::S2_iiab);
  Factorizer fac(model);
  FactorizationResult r = fac.factorize(0.0, 0);
  for (const CentralFactor& f : r.central) CHECK(std::abs(f.angle) < 1e-12);
  for (const SemisimpleFactor& f : r.semisimple) CHECK(std::abs(f.t) < 1e-9);
}
