#include "spinfact/vqe.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "spinfact/fock.hpp"
#include "spinfact/minimize.hpp"

namespace spinfact {

PoolKind parse_pool(const std::string& name) {
  if (name == "sd" || name == "SD") return PoolKind::SD;
  if (name == "sa" || name == "SA") return PoolKind::SA;
  if (name == "pair" || name == "PAIR") return PoolKind::PAIR;
  throw std::invalid_argument("unknown pool: " + name);
}

std::string pool_name(PoolKind kind) {
  switch (kind) {
    case PoolKind::SD: return "sd";
    case PoolKind::SA: return "sa";
    case PoolKind::PAIR: return "pair";
  }
  throw std::logic_error("unknown pool kind");
}

namespace {

struct PoolBuilder {
  int n_spatial;
  int nq;
  Eigen::Index dim;
  std::vector<SpMat> create, destroy;
  std::vector<PoolOperator> pool;

  explicit PoolBuilder(int n)
      : n_spatial(n), nq(2 * n), dim(Eigen::Index{1} << (2 * n)) {
    for (int q = 0; q < nq; ++q) {
      create.push_back(jw_ladder(q, Ladder::Create, nq));
      destroy.push_back(jw_ladder(q, Ladder::Annihilate, nq));
    }
  }

  static int q_of(int p, int sigma) { return 2 * p + sigma; }

  SpMat single_g(int upper, int lower) {
    SpMat t(create[upper] * destroy[lower]);
    return SpMat(t - SpMat(t.adjoint()));
  }

  // G^{u1 u2}_{l1 l2} = a^dag_{u1} a^dag_{u2} a_{l2} a_{l1} - h.c.
  SpMat double_g(int u1, int u2, int l2, int l1) {
    SpMat t(create[u1] * SpMat(create[u2] * SpMat(destroy[l2] * destroy[l1])));
    return SpMat(t - SpMat(t.adjoint()));
  }

  /// Elementary generator of a symmetrized family mapped onto concrete
  /// spatial orbitals via spat_map[Spatial label].
  SpMat mapped_g(const GeneratorSpec& spec, const std::array<int, 4>& spat_map) {
    if (spec.has_polynomial()) throw std::logic_error("elementary spec has a polynomial");
    auto q = [&](SpinOrbital so) {
      return q_of(spat_map[static_cast<int>(so.spatial)], static_cast<int>(so.spin));
    };
    SpMat g = double_g(q(spec.upper.first), q(spec.upper.second), q(spec.lower.second),
                       q(spec.lower.first));
    return spec.sign < 0 ? SpMat(Complex(-1.0) * g) : g;
  }

  SpMat mapped_family(Family family, const std::array<int, 4>& spat_map) {
    SymmetrizedGenerator sym = build_symmetrized(family);
    SpMat acc(dim, dim);
    for (std::size_t k = 0; k < sym.specs.size(); ++k) {
      acc = SpMat(acc + SpMat(Complex(sym.coefficients[k]) * mapped_g(sym.specs[k], spat_map)));
    }
    return acc;
  }

  void add(const std::string& label, SpMat m) {
    m.prune([](int, int, const Complex& v) { return std::abs(v) > 1e-14; });
    const double norm = hs_norm(m);
    if (norm < 1e-12) return;
    for (const PoolOperator& existing : pool) {
      const double d1 = hs_norm(SpMat(existing.matrix - m));
      const double d2 = hs_norm(SpMat(existing.matrix + m));
      if (std::min(d1, d2) < 1e-12 * std::max(1.0, norm)) return;  // duplicate up to sign
    }
    pool.push_back({label, std::move(m)});
  }
};

std::string orbs(int a, int b) { return std::to_string(a) + "," + std::to_string(b); }

}  // namespace

std::vector<PoolOperator> build_pool(PoolKind kind, int n) {
  PoolBuilder b(n);
  const double r2 = 1.0 / std::sqrt(2.0);

  if (kind == PoolKind::SD) {
    static const char spin_ch[2] = {'a', 'b'};
    for (int i = 0; i < n; ++i) {
      for (int a = i + 1; a < n; ++a) {
        for (int s = 0; s < 2; ++s) {
          b.add("single(" + std::to_string(i) + spin_ch[s] + "->" + std::to_string(a) +
                    spin_ch[s] + ")",
                b.single_g(PoolBuilder::q_of(a, s), PoolBuilder::q_of(i, s)));
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        for (int a = 0; a < n; ++a) {
          for (int bb = a; bb < n; ++bb) {
            if (std::make_pair(i, j) >= std::make_pair(a, bb)) continue;
            for (int s = 0; s < 2; ++s) {
              for (int t = 0; t < 2; ++t) {
                const std::string tag = "(" + std::to_string(i) + spin_ch[s] + "," +
                                        std::to_string(j) + spin_ch[t] + "->" + orbs(a, bb) + ")";
                b.add("double" + tag + "_direct",
                      b.double_g(PoolBuilder::q_of(a, s), PoolBuilder::q_of(bb, t),
                                 PoolBuilder::q_of(j, t), PoolBuilder::q_of(i, s)));
                b.add("double" + tag + "_swapped",
                      b.double_g(PoolBuilder::q_of(a, t), PoolBuilder::q_of(bb, s),
                                 PoolBuilder::q_of(j, t), PoolBuilder::q_of(i, s)));
              }
            }
          }
        }
      }
    }
    return std::move(b.pool);
  }

  // spin-adapted singles for both SA and PAIR pools
  for (int i = 0; i < n; ++i) {
    for (int a = i + 1; a < n; ++a) {
      SpMat g = SpMat(b.single_g(PoolBuilder::q_of(a, 0), PoolBuilder::q_of(i, 0)) +
                      b.single_g(PoolBuilder::q_of(a, 1), PoolBuilder::q_of(i, 1)));
      b.add("sa_single(" + std::to_string(i) + "->" + std::to_string(a) + ")",
            SpMat(Complex(r2) * g));
    }
  }

  auto add_pair_double = [&](int i, int a) {
    b.add("pair(" + std::to_string(i) + "->" + std::to_string(a) + ")",
          b.double_g(PoolBuilder::q_of(a, 0), PoolBuilder::q_of(a, 1), PoolBuilder::q_of(i, 1),
                     PoolBuilder::q_of(i, 0)));
  };

  if (kind == PoolKind::PAIR) {
    for (int i = 0; i < n; ++i) {
      for (int a = i + 1; a < n; ++a) add_pair_double(i, a);
    }
    return std::move(b.pool);
  }

  // SA doubles: classify the index pattern of lower pair (i<=j) vs upper
  // pair (a<=b); lexicographic pair order avoids the -transpose duplicate
  SpMat s2op = s_squared_operator(n);
  auto add_spin_adapted = [&](const std::string& label, const SpMat& m) {
    // safety net: every SA pool operator must conserve total spin
    if (hs_norm(commutator(m, s2op)) > 1e-10) {
      throw std::runtime_error("pool operator breaks total spin: " + label);
    }
    b.add(label, m);
  };

  const int I = static_cast<int>(Spatial::I), J = static_cast<int>(Spatial::J);
  const int A = static_cast<int>(Spatial::A), B = static_cast<int>(Spatial::B);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int a = 0; a < n; ++a) {
        for (int bb = a; bb < n; ++bb) {
          if (std::make_pair(i, j) >= std::make_pair(a, bb)) continue;
          std::array<int, 4> map{};
          if (i == j && a == bb) {
            if (i != a) add_pair_double(i, a);
          } else if (i == j) {
            map[I] = i;
            map[A] = a;
            map[B] = bb;
            add_spin_adapted("s2_iiab(" + std::to_string(i) + "->" + orbs(a, bb) + ")",
                             b.mapped_family(Family::S2_iiab, map));
          } else if (a == bb) {
            map[I] = i;
            map[J] = j;
            map[A] = a;
            add_spin_adapted("s2_ijaa(" + orbs(i, j) + "->" + std::to_string(a) + ")",
                             b.mapped_family(Family::S2_ijaa, map));
          } else {
            map[I] = i;
            map[J] = j;
            map[A] = a;
            map[B] = bb;
            add_spin_adapted("singlet(" + orbs(i, j) + "->" + orbs(a, bb) + ")",
                             b.mapped_family(Family::S4_singlet, map));
            add_spin_adapted("triplet(" + orbs(i, j) + "->" + orbs(a, bb) + ")",
                             b.mapped_family(Family::S4_triplet, map));
          }
        }
      }
    }
  }
  return std::move(b.pool);
}

Eigen::VectorXcd apply_exp_generator(const SpMat& a, double t, const Eigen::VectorXcd& psi) {
  if (t == 0.0) return psi;
  // 1-norm estimate for the scaling step count
  double norm1 = 0.0;
  for (int col = 0; col < a.outerSize(); ++col) {
    double s = 0.0;
    for (SpMat::InnerIterator it(a, col); it; ++it) s += std::abs(it.value());
    norm1 = std::max(norm1, s);
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * norm1)));
  const double dt = t / steps;

  Eigen::VectorXcd state = psi;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd term = state;
    Eigen::VectorXcd acc = state;
    for (int k = 1; k <= 40; ++k) {
      term = (dt / static_cast<double>(k)) * (a * term);
      acc += term;
      if (term.norm() < 1e-16 * acc.norm()) break;
    }
    state = acc;
  }
  return state;
}

Eigen::VectorXcd closed_shell_reference(int n_spatial, int n_electrons) {
  if (n_electrons % 2 != 0) throw std::invalid_argument("closed shell needs even electrons");
  const Eigen::Index dim = Eigen::Index{1} << (2 * n_spatial);
  int state = 0;
  for (int p = 0; p < n_electrons / 2; ++p) state |= (1 << (2 * p)) | (1 << (2 * p + 1));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi[state] = 1.0;
  return psi;
}

namespace {

Eigen::VectorXcd ansatz_state(const std::vector<const SpMat*>& ops, const Eigen::VectorXd& t,
                              const Eigen::VectorXcd& reference) {
  Eigen::VectorXcd psi = reference;
  for (std::size_t k = 0; k < ops.size(); ++k) psi = apply_exp_generator(*ops[k], t[k], psi);
  return psi;
}

}  // namespace

AdaptResult adapt_vqe(const SpMat& hamiltonian, const std::vector<PoolOperator>& pool,
                      const Eigen::VectorXcd& reference, const SpMat& s2_operator,
                      const AdaptOptions& options) {
  AdaptResult res;
  res.state = reference;
  res.energy = std::real(reference.dot(Eigen::VectorXcd(hamiltonian * reference)));
  res.parameters.resize(0);

  std::vector<const SpMat*> ops;

  for (int step = 0; step < options.max_operators; ++step) {
    // selection gradients g_k = <psi|[H, A_k]|psi> = 2 Re <H psi | A_k psi>
    const Eigen::VectorXcd hpsi = hamiltonian * res.state;
    int chosen = -1;
    double max_grad = 0.0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      const double g =
          std::abs(2.0 * std::real(hpsi.dot(Eigen::VectorXcd(pool[k].matrix * res.state))));
      if (chosen < 0 || g > max_grad) {  // strict ">" ties to the lowest index
        max_grad = g;
        chosen = static_cast<int>(k);
      }
    }
    if (max_grad < options.grad_tol) {
      res.converged = true;
      break;
    }

    res.operator_sequence.push_back(chosen);
    ops.push_back(&pool[chosen].matrix);
    Eigen::VectorXd t0(res.parameters.size() + 1);
    t0.head(res.parameters.size()) = res.parameters;
    t0[t0.size() - 1] = 0.0;

    auto objective = [&](const Eigen::VectorXd& t, Eigen::VectorXd* grad) {
      // forward pass, keeping intermediate states for the reverse sweep
      std::vector<Eigen::VectorXcd> states(ops.size() + 1);
      states[0] = reference;
      for (std::size_t k = 0; k < ops.size(); ++k) {
        states[k + 1] = apply_exp_generator(*ops[k], t[k], states[k]);
      }
      Eigen::VectorXcd lambda = hamiltonian * states.back();
      const double energy = std::real(states.back().dot(lambda));
      if (grad != nullptr) {
        grad->resize(t.size());
        for (int k = static_cast<int>(ops.size()) - 1; k >= 0; --k) {
          (*grad)[k] =
              2.0 * std::real(lambda.dot(Eigen::VectorXcd(*ops[k] * states[k + 1])));
          lambda = apply_exp_generator(*ops[k], -t[k], lambda);
        }
      }
      return energy;
    };

    MinimizeOptions mopts;
    mopts.max_iterations = options.bfgs_max_iterations;
    mopts.f_target = -1e300;  // minimize the energy itself; stop on gradient
    mopts.grad_tol = options.bfgs_grad_tol;
    MinimizeResult min = bfgs(objective, t0, mopts);

    res.parameters = min.x;
    res.state = ansatz_state(ops, res.parameters, reference);
    res.energy = min.f;
    res.s2 = std::real(res.state.dot(Eigen::VectorXcd(s2_operator * res.state)));

    AdaptIteration it;
    it.step = step + 1;
    it.chosen = chosen;
    it.max_grad = max_grad;
    it.energy = res.energy;
    it.s2 = res.s2;
    res.iterations.push_back(it);
  }

  if (res.iterations.empty()) {
    res.s2 = std::real(res.state.dot(Eigen::VectorXcd(s2_operator * res.state)));
  }
  return res;
}

void write_vqe_json(const VqeRunRecord& record, const std::string& path) {
  nlohmann::ordered_json j;
  j["pool"] = record.pool;
  j["n_spatial"] = record.n_spatial;
  j["n_electrons"] = record.n_electrons;
  j["ms2"] = record.ms2;
  j["seed"] = record.seed;
  j["reference"] = record.reference;
  j["pool_includes_coincident_forms"] = record.pool_includes_coincident_forms;
  j["pool_includes_pair_doubles"] = record.pool_includes_pair_doubles;
  j["exact_energy"] = record.exact_energy;
  j["final_energy"] = record.result.energy;
  j["final_s2"] = record.result.s2;
  j["converged"] = record.result.converged;
  j["n_parameters"] = static_cast<int>(record.result.parameters.size());
  nlohmann::ordered_json iters = nlohmann::ordered_json::array();
  for (const AdaptIteration& it : record.result.iterations) {
    iters.push_back({{"iteration", it.step},
                     {"operator", it.chosen},
                     {"max_grad", it.max_grad},
                     {"energy", it.energy},
                     {"s2", it.s2}});
  }
  j["iterations"] = iters;
  nlohmann::ordered_json params = nlohmann::ordered_json::array();
  for (Eigen::Index k = 0; k < record.result.parameters.size(); ++k) {
    params.push_back(record.result.parameters[k]);
  }
  j["parameters"] = params;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_vqe_csv(const VqeRunRecord& record, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(15);
  out << "iteration,energy,s2,max_grad\n";
  for (const AdaptIteration& it : record.result.iterations) {
    out << it.step << "," << it.energy << "," << it.s2 << "," << it.max_grad << "\n";
  }
}

}  // namespace spinfact
