#include <doctest.h>

#include "spinfact/algebra.hpp"

using namespace spinfact;

TEST_CASE("seniority-2 closure discovers a 5-dimensional algebra") {
  LieAlgebraModel model = build_discovery(Family::S2_iiab);
  CHECK(model.dim() == 5);
  CHECK(model.closure_residual < 1e-9);
  CHECK(jacobi_residual(model) < 1e-9);
  CHECK(model.center_basis.cols() == 2);
  CHECK(model.derived_basis.cols() == 3);
}

TEST_CASE("appendix seniority-2 basis reproduces the recorded brackets") {
  LieAlgebraModel model = load_appendix(Family::S2_iiab);
  REQUIRE(model.dim() == 5);
  // [A1, A2] = A3 and [A3, A5] = -A4, as integers
  auto single_term = [&](int i, int j) {
    REQUIRE(model.structure[i][j].size() == 1);
    return model.structure[i][j][0];
  };
  StructureTerm t12 = single_term(0, 1);
  CHECK(t12.k == 2);
  CHECK(t12.coeff == doctest::Approx(1.0).epsilon(1e-12));
  StructureTerm t35 = single_term(2, 4);
  CHECK(t35.k == 3);
  CHECK(t35.coeff == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(model.structure[0][4].empty());  // [A1, A5] = 0
}

TEST_CASE("discovery and appendix bases span the same space") {
  LieAlgebraModel discovery = build_discovery(Family::S2_ijaa);
  LieAlgebraModel appendix = load_appendix(Family::S2_ijaa);
  REQUIRE(discovery.dim() == appendix.dim());
  // least-squares projection onto the (not necessarily orthonormal) discovery
  // basis via its Gram matrix
  const int m = discovery.dim();
  Eigen::MatrixXd gram(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) gram(i, j) = hs_inner(discovery.basis[i], discovery.basis[j]);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  for (const SpMat& a : appendix.basis) {
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) b[i] = hs_inner(discovery.basis[i], a);
    const Eigen::VectorXd c = ldlt.solve(b);
    SpMat r = a;
    for (int i = 0; i < m; ++i) {
      r = SpMat(r - SpMat(Complex(c[i]) * discovery.basis[i]));
    }
    CHECK(hs_norm(r) < 1e-9);
  }
}

TEST_CASE("killing form is negative definite on the derived algebra") {
  LieAlgebraModel model = load_appendix(Family::S2_iiab);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(killing_form(model, model.derived_basis));
  CHECK(es.eigenvalues().maxCoeff() < -1e-8);
}

TEST_CASE("central combination vectors really commute with everything") {
  LieAlgebraModel model = load_appendix(Family::S4_singlet);
  for (const Combination& combo : load_centers(Family::S4_singlet)) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(model.dim());
    for (const auto& [idx, coeff] : combo.terms) v[idx - 1] = coeff;
    CHECK(adjoint_matrix(model, v).cwiseAbs().maxCoeff() < 1e-10);
    SpMat z = model.assemble_coeffs(v);
    for (const SpMat& a : model.basis) CHECK(hs_norm(commutator(z, a)) < 1e-10);
  }
}

TEST_CASE("ideal partition of the seniority-2 derived algebra is one so(3) block") {
  LieAlgebraModel model = load_appendix(Family::S2_iiab);
  std::vector<std::vector<int>> ideals = ideal_partition(model);
  REQUIRE(ideals.size() == 1);
  CHECK(ideals[0] == std::vector<int>{2, 3, 4});
  CHECK_FALSE(verify_abelian(model, ideals[0]));  // so(3) is not abelian
  // the center, by contrast, is abelian
  CHECK(verify_abelian(model, {0, 4}));
}
