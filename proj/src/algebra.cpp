#include "spinfact/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <Eigen/SVD>
#include <json.hpp>

namespace spinfact {

namespace {

using SpVec = Eigen::SparseVector<Complex>;

SpVec vectorize(const SpMat& m) {
  const Eigen::Index n = m.rows();
  SpVec v(n * n);
  v.reserve(m.nonZeros());
  for (int col = 0; col < m.outerSize(); ++col) {
    for (SpMat::InnerIterator it(m, col); it; ++it) {
      v.insert(it.col() * n + it.row()) = it.value();
    }
  }
  return v;
}

// HS inner product in vector form: <x, y> = conj(x) . y / dim.
Complex vec_inner(const SpVec& x, const SpVec& y, double dim) { return x.dot(y) / dim; }

double vec_norm(const SpVec& x, double dim) { return std::sqrt(x.squaredNorm() / dim); }

}  // namespace

SpMat LieAlgebraModel::assemble_coeffs(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != dim()) throw std::invalid_argument("coefficient size mismatch");
  SpMat acc(basis.front().rows(), basis.front().cols());
  for (int k = 0; k < dim(); ++k) {
    if (coeffs[k] != 0.0) acc = acc + SpMat(coeffs[k] * basis[k]);
  }
  acc.prune([](int, int, const Complex& v) { return std::abs(v) > 1e-15; });
  return acc;
}

Eigen::VectorXd LieAlgebraModel::project(const SpMat& x, double* residual) const {
  const int m = dim();
  const double d = static_cast<double>(basis.front().rows());
  Eigen::VectorXd b(m);
  for (int k = 0; k < m; ++k) b[k] = hs_inner(basis[k], x);
  Eigen::VectorXd c = gram.ldlt().solve(b);
  if (residual != nullptr) {
    SpMat r = x;
    for (int k = 0; k < m; ++k) {
      if (c[k] != 0.0) r = SpMat(r - SpMat(c[k] * basis[k]));
    }
    *residual = std::sqrt(std::max(0.0, r.squaredNorm() / d));
  }
  return c;
}

std::vector<SpMat> close_algebra(const std::vector<SpMat>& seeds, double rel_tol, int max_dim) {
  if (seeds.empty()) throw std::invalid_argument("no seeds");
  const Eigen::Index n = seeds.front().rows();
  const double dim = static_cast<double>(n);
  if (max_dim <= 0) {
    // traceless anti-Hermitian operators cannot exceed n^2 - 1 dimensions
    max_dim = static_cast<int>(n * n - 1);
  }

  std::vector<SpMat> basis;     // accepted elements, kept as produced
  std::vector<SpVec> basisVec;  // same, in vector form
  std::vector<double> basisNrm2;

  // Independence test: a candidate is dependent only when it is a scalar
  // multiple of an element already in the list.  This matches the counting
  // convention of the source tables (which enumerate every bracket result
  // that is not a rescaling of a previous one, even when the results are
  // linearly dependent as a set).
  auto try_add = [&](const SpMat& cand) {
    SpVec v = vectorize(cand);
    const double nrm0 = vec_norm(v, dim);
    if (nrm0 < 1e-12) return false;
    for (std::size_t k = 0; k < basisVec.size(); ++k) {
      const Complex c = vec_inner(basisVec[k], v, dim) / basisNrm2[k];
      if (std::abs(c) < 1e-12) continue;
      SpVec r = v;
      r -= SpVec(c * basisVec[k]);
      if (vec_norm(r, dim) <= rel_tol * nrm0) return false;
    }
    basisNrm2.push_back(vec_norm(v, dim) * vec_norm(v, dim));
    basis.push_back(cand);
    basisVec.push_back(std::move(v));
    return true;
  };

  for (const SpMat& s : seeds) try_add(s);

  // process every pair (i, j) with j < i exactly once while the list grows
  for (std::size_t i = 1; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      try_add(commutator(basis[i], basis[j]));
      if (static_cast<int>(basis.size()) > max_dim) {
        throw std::runtime_error("closure exceeded dimension cap");
      }
    }
  }
  return basis;
}

void compute_structure(LieAlgebraModel& model) {
  const int m = model.dim();
  const double dim = static_cast<double>(model.basis.front().rows());

  std::vector<SpVec> vecs(m);
  for (int k = 0; k < m; ++k) vecs[k] = vectorize(model.basis[k]);

  model.gram.resize(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      double g = std::real(vec_inner(vecs[i], vecs[j], dim));
      model.gram(i, j) = g;
      model.gram(j, i) = g;
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> gram_ldlt(model.gram);
  // A basis listed by the counting convention of the source tables can be
  // linearly dependent as a matrix set; the Gram solve is then ill-posed.
  // Every bracket of such a basis resolves as a scalar multiple of a single
  // element, so that match is attempted first and the least-squares solve is
  // only a fallback for orthonormalized discovery bases.
  const bool gram_ok =
      Eigen::BDCSVD<Eigen::MatrixXd>(model.gram).singularValues().minCoeff() > 1e-8;

  model.structure.assign(m, std::vector<std::vector<StructureTerm>>(m));
  model.closure_residual = 0.0;

  Eigen::VectorXcd dense(static_cast<Eigen::Index>(dim * dim));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      SpVec bv = vectorize(commutator(model.basis[i], model.basis[j]));
      const double bn = vec_norm(bv, dim);
      std::vector<StructureTerm> terms;
      double res = 0.0;
      bool resolved = false;
      if (bn < 1e-10) {
        resolved = true;  // zero bracket
      }
      if (!resolved) {
        // single-element proportionality match
        for (int k = 0; k < m; ++k) {
          const Complex c = vec_inner(vecs[k], bv, dim) / model.gram(k, k);
          if (std::abs(c.imag()) > 1e-9 || std::abs(c.real()) < 1e-10) continue;
          SpVec r = bv;
          r -= SpVec(c * vecs[k]);
          const double rn = vec_norm(r, dim);
          if (rn <= 1e-8 * bn) {
            terms.push_back({k, c.real()});
            res = rn;
            resolved = true;
            break;
          }
        }
      }
      if (!resolved && gram_ok) {
        Eigen::VectorXd b(m);
        for (int k = 0; k < m; ++k) b[k] = std::real(vec_inner(vecs[k], bv, dim));
        Eigen::VectorXd c = gram_ldlt.solve(b);
        dense.setZero();
        for (SpVec::InnerIterator it(bv); it; ++it) dense[it.index()] = it.value();
        for (int k = 0; k < m; ++k) {
          if (c[k] != 0.0) {
            for (SpVec::InnerIterator it(vecs[k]); it; ++it) {
              dense[it.index()] -= c[k] * it.value();
            }
          }
        }
        res = std::sqrt(dense.squaredNorm() / dim);
        for (int k = 0; k < m; ++k) {
          if (std::abs(c[k]) > 1e-10) terms.push_back({k, c[k]});
        }
        resolved = true;
      }
      model.closure_residual = std::max(model.closure_residual, res);
      if (!resolved || res > 1e-6) {
        throw std::runtime_error("basis is not closed under commutation");
      }
      model.structure[i][j] = terms;
      for (StructureTerm& t : terms) t.coeff = -t.coeff;
      model.structure[j][i] = std::move(terms);
    }
  }
}

double jacobi_residual(const LieAlgebraModel& model) {
  const int m = model.dim();
  double worst = 0.0;
  Eigen::VectorXd acc(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      for (int k = j + 1; k < m; ++k) {
        acc.setZero();
        auto add_nested = [&](int a, int b, int c) {
          // [A_a, [A_b, A_c]]
          for (const StructureTerm& t : model.structure[b][c]) {
            for (const StructureTerm& u : model.structure[a][t.k]) {
              acc[u.k] += t.coeff * u.coeff;
            }
          }
        };
        add_nested(i, j, k);
        add_nested(j, k, i);
        add_nested(k, i, j);
        // coefficient-space max norm; well defined even when the basis
        // matrices are linearly dependent
        worst = std::max(worst, acc.cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

Eigen::MatrixXd adjoint_matrix(const LieAlgebraModel& model, const Eigen::VectorXd& x) {
  const int m = model.dim();
  Eigen::MatrixXd ad = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < m; ++j) {
      for (const StructureTerm& t : model.structure[i][j]) ad(t.k, j) += x[i] * t.coeff;
    }
  }
  return ad;
}

Eigen::MatrixXd center(const LieAlgebraModel& model, double tol) {
  const int m = model.dim();
  // stack ad(A_j) columns: x is central iff ad(x) = 0, i.e. the linear map
  // x -> [sum_i x_i c_{ij}^k]_{jk} vanishes
  Eigen::MatrixXd stacked(m * m, m);
  stacked.setZero();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (const StructureTerm& t : model.structure[i][j]) {
        stacked(j * m + t.k, i) += t.coeff;
      }
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = tol * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > cutoff) ++rank;
  }
  return svd.matrixV().rightCols(m - rank);
}

Eigen::MatrixXd derived(const LieAlgebraModel& model, double tol) {
  const int m = model.dim();
  std::vector<Eigen::VectorXd> cols;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (model.structure[i][j].empty()) continue;
      Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
      for (const StructureTerm& t : model.structure[i][j]) v[t.k] = t.coeff;
      cols.push_back(std::move(v));
    }
  }
  Eigen::MatrixXd img(m, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) img.col(static_cast<Eigen::Index>(c)) = cols[c];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(img);
  qr.setThreshold(tol);
  const int rank = static_cast<int>(qr.rank());
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, rank);
  return q;
}

Eigen::MatrixXd killing_form(const LieAlgebraModel& model, const Eigen::MatrixXd& subspace) {
  const int d = static_cast<int>(subspace.cols());
  std::vector<Eigen::MatrixXd> ads(d);
  for (int r = 0; r < d; ++r) ads[r] = adjoint_matrix(model, subspace.col(r));
  Eigen::MatrixXd k(d, d);
  for (int r = 0; r < d; ++r) {
    for (int s = r; s < d; ++s) {
      double v = (ads[r] * ads[s]).trace();
      k(r, s) = v;
      k(s, r) = v;
    }
  }
  return k;
}

std::vector<std::vector<int>> ideal_partition(const LieAlgebraModel& model, double tol) {
  const int m = model.dim();

  // basis indices inside the derived algebra: e_k within span(derived_basis)
  const Eigen::MatrixXd& db = model.derived_basis;
  std::vector<int> derived_idx;
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(m, k);
    const double res = (e - db * (db.transpose() * e)).norm();
    if (res < tol) {
      derived_idx.push_back(k);
    } else if (res < 1.0 - tol) {
      throw std::runtime_error("basis element straddles the derived algebra");
    }
  }

  // Finest partition of the derived indices into blocks whose spans are
  // invariant under the full adjoint action.  Single-seed ad-closures can
  // overlap (the minimal ideals need not be aligned with the basis), so
  // the blocks are the connected components of the bracket-coupling
  // relation i ~ k whenever some [A_j, A_i] has weight on A_k.
  std::vector<int> parent(m);
  for (int k = 0; k < m; ++k) parent[k] = k;
  std::function<int(int)> find = [&](int k) {
    while (parent[k] != k) k = parent[k] = parent[parent[k]];
    return k;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (int j = 0; j < m; ++j) {
    for (int i : derived_idx) {
      for (const StructureTerm& t : model.structure[j][i]) {
        if (std::abs(t.coeff) > tol) unite(i, t.k);
      }
    }
  }
  std::map<int, std::vector<int>> by_root;
  for (int k : derived_idx) by_root[find(k)].push_back(k);
  std::vector<std::vector<int>> ideals;
  for (auto& [root, members] : by_root) {
    std::sort(members.begin(), members.end());
    ideals.push_back(members);
  }
  std::sort(ideals.begin(), ideals.end());

  // invariance: [g, I_r] stays inside I_r
  for (const std::vector<int>& block : ideals) {
    std::vector<bool> inside(m, false);
    for (int k : block) inside[k] = true;
    for (int j = 0; j < m; ++j) {
      for (int i : block) {
        for (const StructureTerm& t : model.structure[j][i]) {
          if (std::abs(t.coeff) > tol && !inside[t.k]) {
            throw std::runtime_error("ideal block is not invariant");
          }
        }
      }
    }
  }

  // cross-brackets between distinct ideals must vanish
  for (std::size_t r = 0; r < ideals.size(); ++r) {
    for (std::size_t s = r + 1; s < ideals.size(); ++s) {
      for (int i : ideals[r]) {
        for (int j : ideals[s]) {
          if (!model.structure[i][j].empty()) {
            throw std::runtime_error("ideal blocks fail to commute");
          }
        }
      }
    }
  }
  return ideals;
}

bool verify_abelian(const LieAlgebraModel& model, const std::vector<int>& indices) {
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      if (hs_norm(commutator(model.basis[indices[a]], model.basis[indices[b]])) > 1e-10) {
        return false;
      }
    }
  }
  return true;
}

std::string data_path(const std::string& filename) {
  return std::string(SPINFACT_DATA_DIR) + "/" + filename;
}

std::string family_stem(Family family) {
  switch (family) {
    case Family::S2_iiab: return "s2_iiab";
    case Family::S2_ijaa: return "s2_ijaa";
    case Family::S4_singlet: return "s4_singlet";
    case Family::S4_triplet: return "s4_triplet";
  }
  throw std::logic_error("unknown family");
}

LieAlgebraModel load_appendix(Family family) {
  LieAlgebraModel model;
  model.family = family;
  model.set = family_orbitals(family);
  model.appendix_mode = true;
  model.entries = parse_generator_file(data_path(family_stem(family) + ".alg"));
  for (const DslEntry& e : model.entries) model.basis.push_back(build_generator(model.set, e.spec));
  compute_structure(model);
  model.center_basis = center(model);
  model.derived_basis = derived(model);
  return model;
}

LieAlgebraModel build_discovery(Family family) {
  LieAlgebraModel model;
  model.family = family;
  model.set = family_orbitals(family);
  model.appendix_mode = false;
  SymmetrizedGenerator sym = build_symmetrized(family);
  std::vector<SpMat> seeds;
  for (const GeneratorSpec& s : sym.specs) seeds.push_back(build_generator(model.set, s));
  model.basis = close_algebra(seeds);
  compute_structure(model);
  model.center_basis = center(model);
  model.derived_basis = derived(model);
  return model;
}

std::vector<Combination> load_centers(Family family) {
  return parse_combination_file(data_path(family_stem(family) + ".centers"));
}

std::vector<DslEntry> load_zexplicit(Family family) {
  return parse_generator_file(data_path(family_stem(family) + ".zexplicit"));
}

std::vector<IndexList> load_ideal_lists(Family family) {
  return parse_index_list_file(data_path(family_stem(family) + ".ideals"));
}

std::vector<std::vector<int>> load_commutation_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<int>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<int> row;
    int v;
    while (ss >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw std::runtime_error("ragged commutation table");
  }
  return rows;
}

void write_algebra_json(const LieAlgebraModel& model, const std::string& path) {
  nlohmann::ordered_json j;
  j["family"] = family_name(model.family);
  j["dimension"] = model.dim();
  nlohmann::ordered_json basis = nlohmann::ordered_json::array();
  for (const DslEntry& e : model.entries) basis.push_back(e.name + " = " + format_generator(e.spec));
  j["basis"] = basis;

  nlohmann::ordered_json sc = nlohmann::ordered_json::array();
  for (int i = 0; i < model.dim(); ++i) {
    for (int jj = i + 1; jj < model.dim(); ++jj) {
      for (const StructureTerm& t : model.structure[i][jj]) {
        sc.push_back({i, jj, t.k, t.coeff});
      }
    }
  }
  j["structure_constants"] = sc;

  auto cols_to_json = [](const Eigen::MatrixXd& mat) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < mat.cols(); ++c) {
      nlohmann::ordered_json col = nlohmann::ordered_json::array();
      for (Eigen::Index r = 0; r < mat.rows(); ++r) col.push_back(mat(r, c));
      out.push_back(col);
    }
    return out;
  };
  j["center"] = cols_to_json(model.center_basis);
  j["derived"] = cols_to_json(model.derived_basis);

  nlohmann::ordered_json ideals = nlohmann::ordered_json::array();
  for (const std::vector<int>& block : ideal_partition(model)) ideals.push_back(block);
  j["ideal_partition"] = ideals;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace spinfact
