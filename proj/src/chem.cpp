#include "spinfact/chem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace spinfact {

namespace {

void symmetrize_g(MolecularIntegrals& ints, int p, int q, int r, int s, double value) {
  // chemists' (pq|rs): p<->q, r<->s, (pq)<->(rs)
  const int idx[8][4] = {{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r},
                         {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}};
  for (const auto& t : idx) ints.g_at(t[0], t[1], t[2], t[3]) = value;
}

}  // namespace

MolecularIntegrals parse_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  // namelist header: everything up to the first line consisting of "/" or "&END"
  std::size_t body_pos = std::string::npos;
  {
    std::istringstream ss(text);
    std::string line;
    std::size_t offset = 0;
    while (std::getline(ss, line)) {
      std::string trimmed = line;
      trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
      if (!trimmed.empty()) trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
      offset += line.size() + 1;
      std::string upper = trimmed;
      std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
      if (trimmed == "/" || upper == "&END" || (!upper.empty() && upper.back() == '/')) {
        body_pos = offset;
        break;
      }
    }
  }
  if (body_pos == std::string::npos) throw std::runtime_error("FCIDUMP namelist not terminated");
  std::string header = text.substr(0, body_pos);
  std::transform(header.begin(), header.end(), header.begin(), ::toupper);

  MolecularIntegrals ints;
  auto read_int = [&](const std::string& key) {
    const std::size_t at = header.find(key);
    if (at == std::string::npos) throw std::runtime_error("FCIDUMP missing " + key);
    std::size_t p = header.find('=', at);
    if (p == std::string::npos) throw std::runtime_error("FCIDUMP missing value for " + key);
    return std::stoi(header.substr(p + 1));
  };
  ints.n_spatial = read_int("NORB");
  ints.n_electrons = read_int("NELEC");
  ints.ms2 = header.find("MS2") != std::string::npos ? read_int("MS2") : 0;
  ints.h = Eigen::MatrixXd::Zero(ints.n_spatial, ints.n_spatial);
  ints.g.assign(static_cast<std::size_t>(std::pow(ints.n_spatial, 4)), 0.0);

  std::istringstream body(text.substr(body_pos));
  double value;
  int i, j, k, l;
  while (body >> value >> i >> j >> k >> l) {
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      ints.e_core = value;
    } else if (k == 0 && l == 0) {
      ints.h(i - 1, j - 1) = value;
      ints.h(j - 1, i - 1) = value;
    } else {
      symmetrize_g(ints, i - 1, j - 1, k - 1, l - 1, value);
    }
  }
  return ints;
}

void write_fcidump(const MolecularIntegrals& ints, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(16);
  out << "&FCI NORB=" << ints.n_spatial << ",NELEC=" << ints.n_electrons
      << ",MS2=" << ints.ms2 << ",\n/\n";
  const int n = ints.n_spatial;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q <= p; ++q) {
      for (int r = 0; r <= p; ++r) {
        for (int s = 0; s <= (r == p ? q : r); ++s) {
          const double v = ints.g_at(p, q, r, s);
          if (v != 0.0) {
            out << v << " " << p + 1 << " " << q + 1 << " " << r + 1 << " " << s + 1 << "\n";
          }
        }
      }
    }
  }
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q <= p; ++q) {
      if (ints.h(p, q) != 0.0) out << ints.h(p, q) << " " << p + 1 << " " << q + 1 << " 0 0\n";
    }
  }
  out << ints.e_core << " 0 0 0 0\n";
}

MolecularIntegrals synth_hamiltonian(int n_spatial, unsigned seed) {
  if (n_spatial < 2 || n_spatial > 5) throw std::invalid_argument("n_spatial must be 2..5");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  MolecularIntegrals ints;
  ints.n_spatial = n_spatial;
  ints.n_electrons = 2 * (n_spatial / 2);
  ints.ms2 = 0;
  ints.e_core = 0.5 * uni(rng);
  ints.h = Eigen::MatrixXd::Zero(n_spatial, n_spatial);
  for (int p = 0; p < n_spatial; ++p) {
    ints.h(p, p) = -2.0 + 0.9 * p + 0.1 * uni(rng);
    for (int q = 0; q < p; ++q) {
      const double v = 0.2 * uni(rng);
      ints.h(p, q) = v;
      ints.h(q, p) = v;
    }
  }
  ints.g.assign(static_cast<std::size_t>(std::pow(n_spatial, 4)), 0.0);
  for (int p = 0; p < n_spatial; ++p) {
    for (int q = 0; q <= p; ++q) {
      for (int r = 0; r <= p; ++r) {
        for (int s = 0; s <= (r == p ? q : r); ++s) {
          double v = 0.15 * uni(rng);
          if (p == q && r == s) v = 0.3 + 0.2 * std::abs(uni(rng));  // coulomb-like diagonal
          symmetrize_g(ints, p, q, r, s, v);
        }
      }
    }
  }
  return ints;
}

namespace {

struct LadderCache {
  std::vector<SpMat> create, destroy;

  explicit LadderCache(int n_qubits) {
    for (int q = 0; q < n_qubits; ++q) {
      create.push_back(jw_ladder(q, Ladder::Create, n_qubits));
      destroy.push_back(jw_ladder(q, Ladder::Annihilate, n_qubits));
    }
  }
};

inline int so_qubit(int p, int sigma) { return 2 * p + sigma; }

}  // namespace

SpMat build_hamiltonian(const MolecularIntegrals& ints) {
  const int n = ints.n_spatial;
  const int nq = 2 * n;
  const Eigen::Index dim = Eigen::Index{1} << nq;
  LadderCache ops(nq);

  SpMat h(dim, dim);
  {
    SpMat id(dim, dim);
    id.setIdentity();
    h = SpMat(ints.e_core * id);
  }
  // one-electron part
  std::vector<std::vector<SpMat>> hop(nq, std::vector<SpMat>(nq));
  for (int a = 0; a < nq; ++a) {
    for (int b = 0; b < nq; ++b) hop[a][b] = SpMat(ops.create[a] * ops.destroy[b]);
  }
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (ints.h(p, q) == 0.0) continue;
      for (int sigma = 0; sigma < 2; ++sigma) {
        h = SpMat(h + SpMat(Complex(ints.h(p, q)) * hop[so_qubit(p, sigma)][so_qubit(q, sigma)]));
      }
    }
  }
  // two-electron part, chemists' notation
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      for (int r = 0; r < n; ++r) {
        for (int s = 0; s < n; ++s) {
          const double g = ints.g_at(p, q, r, s);
          if (g == 0.0) continue;
          for (int sigma = 0; sigma < 2; ++sigma) {
            for (int tau = 0; tau < 2; ++tau) {
              SpMat term(ops.create[so_qubit(p, sigma)] *
                         SpMat(ops.create[so_qubit(r, tau)] *
                               SpMat(ops.destroy[so_qubit(s, tau)] *
                                     ops.destroy[so_qubit(q, sigma)])));
              h = SpMat(h + SpMat(Complex(0.5 * g) * term));
            }
          }
        }
      }
    }
  }
  h.prune([](int, int, const Complex& v) { return std::abs(v) > 1e-14; });
  return h;
}

SpMat s_plus_operator(int n_spatial) {
  const int nq = 2 * n_spatial;
  const Eigen::Index dim = Eigen::Index{1} << nq;
  SpMat sp(dim, dim);
  for (int p = 0; p < n_spatial; ++p) {
    sp = SpMat(sp + SpMat(jw_ladder(so_qubit(p, 0), Ladder::Create, nq) *
                          jw_ladder(so_qubit(p, 1), Ladder::Annihilate, nq)));
  }
  return sp;
}

SpMat s_z_operator(int n_spatial) {
  const int nq = 2 * n_spatial;
  const Eigen::Index dim = Eigen::Index{1} << nq;
  SpMat sz(dim, dim);
  for (int p = 0; p < n_spatial; ++p) {
    sz = SpMat(sz + SpMat(Complex(0.5) * SpMat(number_op(so_qubit(p, 0), nq) -
                                               number_op(so_qubit(p, 1), nq))));
  }
  return sz;
}

SpMat s_squared_operator(int n_spatial) {
  const Eigen::Index dim = Eigen::Index{1} << (2 * n_spatial);
  SpMat sp = s_plus_operator(n_spatial);
  SpMat sz = s_z_operator(n_spatial);
  SpMat id(dim, dim);
  id.setIdentity();
  return SpMat(SpMat(sp.adjoint()) * sp + sz * SpMat(sz + id));
}

SpMat number_operator(int n_spatial) {
  const int nq = 2 * n_spatial;
  const Eigen::Index dim = Eigen::Index{1} << nq;
  SpMat num(dim, dim);
  for (int q = 0; q < nq; ++q) num = SpMat(num + number_op(q, nq));
  return num;
}

std::vector<int> sector_indices(int n_spatial, int n_electrons, int ms2) {
  const int nq = 2 * n_spatial;
  std::vector<int> idx;
  for (int state = 0; state < (1 << nq); ++state) {
    int count = 0, spin = 0;
    for (int q = 0; q < nq; ++q) {
      if (state & (1 << q)) {
        ++count;
        spin += (q % 2 == 0) ? 1 : -1;
      }
    }
    if (count == n_electrons && spin == ms2) idx.push_back(state);
  }
  return idx;
}

double exact_ground(const SpMat& hamiltonian, int n_spatial, int n_electrons, int ms2,
                    int s2_doubled) {
  const std::vector<int> idx = sector_indices(n_spatial, n_electrons, ms2);
  if (idx.empty()) throw std::invalid_argument("empty sector");
  const int d = static_cast<int>(idx.size());
  DenseMat hd = to_dense(hamiltonian);
  Eigen::MatrixXcd sub(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) sub(a, b) = hd(idx[a], idx[b]);
  }

  if (s2_doubled < 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub);
    return es.eigenvalues()[0];
  }

  const double s = 0.5 * s2_doubled;
  const double target = s * (s + 1.0);
  DenseMat s2d = to_dense(s_squared_operator(n_spatial));
  Eigen::MatrixXcd s2sub(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) s2sub(a, b) = s2d(idx[a], idx[b]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> spin(s2sub);
  std::vector<int> keep;
  for (int k = 0; k < d; ++k) {
    if (std::abs(spin.eigenvalues()[k] - target) < 1e-6) keep.push_back(k);
  }
  if (keep.empty()) throw std::invalid_argument("no states with requested total spin");
  Eigen::MatrixXcd basis(d, static_cast<int>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) basis.col(c) = spin.eigenvectors().col(keep[c]);
  Eigen::MatrixXcd proj = basis.adjoint() * sub * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(proj);
  return es.eigenvalues()[0];
}

}  // namespace spinfact
