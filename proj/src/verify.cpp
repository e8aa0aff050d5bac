#include "spinfact/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "spinfact/algebra.hpp"
#include "spinfact/chem.hpp"
#include "spinfact/factorize.hpp"
#include "spinfact/pauli.hpp"
#include "spinfact/vqe.hpp"

namespace spinfact {

namespace {

constexpr Family kFamilies[] = {Family::S2_iiab, Family::S2_ijaa, Family::S4_singlet,
                                Family::S4_triplet};

int expected_dimension(Family f) {
  switch (f) {
    case Family::S2_iiab:
    case Family::S2_ijaa: return 5;
    case Family::S4_singlet: return 28;
    case Family::S4_triplet: return 138;
  }
  return 0;
}

int expected_center_dim(Family f) { return f == Family::S4_triplet  ? 6
                                           : f == Family::S4_singlet ? 4
                                                                     : 2; }

int expected_schedule_strings(Family f) {
  switch (f) {
    case Family::S2_iiab:
    case Family::S2_ijaa: return 48;
    case Family::S4_singlet: return 384;
    case Family::S4_triplet: return 768;
  }
  return 0;
}

struct Context {
  unsigned seed = 0;
  std::map<Family, LieAlgebraModel> models;
  std::map<Family, std::unique_ptr<Factorizer>> factorizers;
  std::map<Family, FactorizationResult> sample;  // theta = pi/4

  const LieAlgebraModel& model(Family f) {
    auto it = models.find(f);
    if (it == models.end()) it = models.emplace(f, load_appendix(f)).first;
    return it->second;
  }
  const Factorizer& factorizer(Family f) {
    auto it = factorizers.find(f);
    if (it == factorizers.end()) {
      it = factorizers.emplace(f, std::make_unique<Factorizer>(model(f))).first;
    }
    return *it->second;
  }
  const FactorizationResult& sample_factorization(Family f) {
    auto it = sample.find(f);
    if (it == sample.end()) {
      it = sample.emplace(f, factorizer(f).factorize(std::numbers::pi / 4.0, seed)).first;
    }
    return it->second;
  }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

// compares a computed structure tensor against a signed-integer table:
// entry (i, j) = k means [A_i, A_j] = sign(k) A_|k|
bool match_table(const LieAlgebraModel& model, const std::vector<std::vector<int>>& table,
                 std::string* detail) {
  const int m = model.dim();
  if (static_cast<int>(table.size()) != m) {
    *detail = "table size mismatch";
    return false;
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const int k = table[i][j];
      Eigen::VectorXd want = Eigen::VectorXd::Zero(m);
      if (k != 0) want[std::abs(k) - 1] = k > 0 ? 1.0 : -1.0;
      Eigen::VectorXd got = Eigen::VectorXd::Zero(m);
      for (const StructureTerm& t : model.structure[i][j]) got[t.k] = t.coeff;
      if ((want - got).cwiseAbs().maxCoeff() > 1e-9) {
        *detail = "mismatch at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
        return false;
      }
    }
  }
  return true;
}

// frozen copy of the recorded block membership for the triplet derived part,
// in file order with ascending members, guarding the data files against drift
std::vector<std::vector<int>> expected_triplet_blocks() {
  return {{10, 22, 51},
          {13, 29, 45},
          {14, 30, 52},
          {16, 36, 53},
          {17, 41, 49},
          {18, 42, 54},
          {7, 19, 31},
          {63, 69, 83, 101, 107, 123},
          {64, 73, 84, 102, 111, 126},
          {65, 66, 70, 72, 85, 86, 103, 104, 108, 110, 124, 125},
          {23, 24, 32, 34, 55, 56, 59, 60, 97, 98, 121, 122},
          {8, 20, 39, 67, 68, 71, 74, 93, 94, 105, 106, 109, 112, 131, 132},
          {9, 21, 25, 26, 43, 44, 46, 57, 58, 61, 62, 99, 100, 135, 136},
          {11, 27, 33, 75, 76, 79, 81, 87, 88, 113, 114, 117, 119, 127, 128},
          {12, 28, 40, 77, 78, 80, 82, 95, 96, 115, 116, 118, 120, 133, 134},
          {15, 35, 37, 38, 47, 48, 50, 89, 90, 91, 92, 129, 130, 137, 138}};
}

// distance of a coefficient vector to the span of orthonormal columns
double span_residual(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v) {
  return (v - basis * (basis.transpose() * v)).norm() / v.norm();
}

CriterionResult criterion1(Context&) {
  CriterionResult r{1, "discovery closure dimensions", true, "", 0.0};
  std::ostringstream detail;
  for (Family f : kFamilies) {
    const auto start = std::chrono::steady_clock::now();
    LieAlgebraModel model = build_discovery(f);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail << family_name(f) << ": dim=" << model.dim() << " (" << fmt(secs) << "s) ";
    if (model.dim() != expected_dimension(f) || secs > 60.0) r.pass = false;
  }
  r.detail = detail.str();
  return r;
}

CriterionResult criterion2(Context& ctx) {
  CriterionResult r{2, "seniority-2 structure constants", true, "", 0.0};
  std::ostringstream detail;
  for (Family f : {Family::S2_iiab, Family::S2_ijaa}) {
    const LieAlgebraModel& model = ctx.model(f);
    std::string why;
    const auto table = load_commutation_table(data_path(family_stem(f) + ".table"));
    const bool ok = match_table(model, table, &why) && model.closure_residual < 1e-9 &&
                    jacobi_residual(model) < 1e-9;
    detail << family_name(f) << ": " << (ok ? "ok" : why)
           << " closure_residual=" << model.closure_residual << " ";
    if (!ok) r.pass = false;
  }
  r.detail = detail.str();
  return r;
}

CriterionResult criterion3(Context& ctx) {
  CriterionResult r{3, "singlet commutation table", true, "", 0.0};
  const LieAlgebraModel& model = ctx.model(Family::S4_singlet);
  std::string why;
  const auto table = load_commutation_table(data_path("s4_singlet.table"));
  if (!match_table(model, table, &why)) {
    r.pass = false;
    r.detail = why;
    return r;
  }
  if (model.closure_residual > 1e-9 || jacobi_residual(model) > 1e-9) {
    r.pass = false;
    r.detail = "closure or Jacobi residual above 1e-9";
    return r;
  }
  r.detail = "all 28x28 entries match; closure_residual=" + fmt(model.closure_residual);
  return r;
}

CriterionResult criterion4(Context& ctx) {
  CriterionResult r{4, "centers", true, "", 0.0};
  std::ostringstream detail;
  for (Family f : kFamilies) {
    const LieAlgebraModel& model = ctx.model(f);
    bool ok = static_cast<int>(model.center_basis.cols()) == expected_center_dim(f);
    const std::vector<Combination> combos = load_centers(f);
    const std::vector<DslEntry> explicit_forms = load_zexplicit(f);
    ok = ok && combos.size() == explicit_forms.size() &&
         static_cast<int>(combos.size()) == expected_center_dim(f);
    double worst_span = 0.0, worst_matrix = 0.0;
    for (std::size_t z = 0; z < combos.size() && ok; ++z) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(model.dim());
      for (const auto& [idx, coeff] : combos[z].terms) v[idx - 1] = coeff;
      worst_span = std::max(worst_span, span_residual(model.center_basis, v));
      const SpMat combo_matrix = model.assemble_coeffs(v);
      const SpMat explicit_matrix = build_generator(model.set, explicit_forms[z].spec);
      worst_matrix = std::max(
          worst_matrix, to_dense(SpMat(combo_matrix - explicit_matrix)).cwiseAbs().maxCoeff());
    }
    ok = ok && worst_span < 1e-9 && worst_matrix < 1e-10;
    detail << family_name(f) << ": dim=" << model.center_basis.cols()
           << " span=" << worst_span << " explicit=" << worst_matrix << " ";
    if (!ok) r.pass = false;
  }
  r.detail = detail.str();
  return r;
}

CriterionResult criterion5(Context& ctx) {
  CriterionResult r{5, "derived algebras and ideals", true, "", 0.0};
  std::ostringstream detail;
  for (Family f : kFamilies) {
    const LieAlgebraModel& model = ctx.model(f);
    const int expected_derived = expected_dimension(f) - expected_center_dim(f);
    bool ok = static_cast<int>(model.derived_basis.cols()) == expected_derived;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> killing(
        killing_form(model, model.derived_basis));
    const double max_eig = killing.eigenvalues().maxCoeff();
    ok = ok && max_eig < -1e-8;

    // commutator-connected components of the derived algebra
    std::vector<std::vector<int>> computed = ideal_partition(model);
    // singlet and seniority-2: the derived algebra admits no proper split
    if (f == Family::S4_singlet) {
      ok = ok && computed.size() == 1 && static_cast<int>(computed[0].size()) == 24;
    }
    if (f == Family::S2_iiab || f == Family::S2_ijaa) {
      ok = ok && computed.size() == 1 && static_cast<int>(computed[0].size()) == 3;
    }

    // recorded block lists: sizes, membership, and partition property
    std::vector<std::vector<int>> recorded;
    std::vector<int> sizes;
    std::set<int> seen;
    bool disjoint = true;
    for (const IndexList& lst : load_ideal_lists(f)) {
      std::vector<int> block = lst.indices;
      std::sort(block.begin(), block.end());
      sizes.push_back(static_cast<int>(block.size()));
      for (int k : block) disjoint = disjoint && seen.insert(k).second;
      recorded.push_back(std::move(block));
    }
    std::sort(sizes.begin(), sizes.end());
    ok = ok && disjoint &&
         static_cast<int>(seen.size()) == expected_derived;
    // every listed index must belong to the computed derived span
    double derived_span = 0.0;
    for (int k : seen) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(model.dim());
      e[k - 1] = 1.0;
      derived_span = std::max(derived_span, span_residual(model.derived_basis, e));
    }
    ok = ok && derived_span < 1e-9;
    if (f == Family::S4_triplet) {
      const std::vector<int> want = {3, 3, 3, 3, 3, 3, 3, 6, 6, 12, 12, 15, 15, 15, 15, 15};
      ok = ok && sizes == want;
      ok = ok && expected_triplet_blocks() == recorded;
    }

    detail << family_name(f) << ": derived=" << model.derived_basis.cols()
           << " killing_max=" << fmt(max_eig) << " components=" << computed.size()
           << " blocks=" << recorded.size() << " ";
    if (!ok) r.pass = false;
  }
  r.detail = detail.str();
  return r;
}

CriterionResult criterion6(Context& ctx) {
  CriterionResult r{6, "generator spectra", true, "", 0.0};
  double worst = 0.0;
  for (Family f : kFamilies) {
    const LieAlgebraModel& model = ctx.model(f);
    for (const SpMat& a : model.basis) {
      const DenseMat h = Complex(0.0, 1.0) * to_dense(a);
      Eigen::SelfAdjointEigenSolver<DenseMat> es(h, Eigen::EigenvaluesOnly);
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double ev = es.eigenvalues()[k];
        worst = std::max(worst, std::min({std::abs(ev), std::abs(ev - 1.0), std::abs(ev + 1.0)}));
      }
    }
  }
  r.pass = worst < 1e-10;
  r.detail = "max deviation of spec(iA) from {-1,0,1}: " + fmt(worst);
  return r;
}

CriterionResult criterion7(Context& ctx) {
  CriterionResult r{7, "factorization over the theta grid", true, "", 0.0};
  std::ostringstream detail;
  for (Family f : kFamilies) {
    const Factorizer& fac = ctx.factorizer(f);
    double worst_cost = 0.0, worst_fock = 0.0, worst_secs = 0.0;
    for (int t = 0; t < 9; ++t) {
      const double theta = -std::numbers::pi + t * (2.0 * std::numbers::pi / 8.0);
      const auto start = std::chrono::steady_clock::now();
      try {
        FactorizationResult result = fac.factorize(theta, ctx.seed);
        worst_cost = std::max(worst_cost, result.cost_residual);
        worst_fock = std::max(worst_fock, result.fock_residual);
      } catch (const std::exception& e) {
        r.pass = false;
        detail << family_name(f) << " theta=" << fmt(theta) << ": " << e.what() << " ";
      }
      worst_secs = std::max(
          worst_secs,
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    if (worst_cost > 1e-10 || worst_fock > 1e-6 || worst_secs > 600.0) r.pass = false;
    detail << family_name(f) << ": cost<=" << worst_cost << " fock<=" << worst_fock << " t<="
           << fmt(worst_secs) << "s ";
  }
  r.detail = detail.str();
  return r;
}

CriterionResult criterion8(Context& ctx) {
  CriterionResult r{8, "schedule string totals", true, "", 0.0};
  std::ostringstream detail;
  for (Family f : kFamilies) {
    PauliSchedule sched = build_schedule(ctx.model(f), ctx.sample_factorization(f));
    // re-verify commutativity inside each factor from the emitted entries
    bool commuting = true;
    std::size_t at = 0;
    for (int count : sched.per_factor_counts) {
      std::vector<PauliTerm> factor;
      for (int k = 0; k < count; ++k) factor.push_back({sched.entries[at + k].p, 0.0});
      at += static_cast<std::size_t>(count);
      commuting = commuting && check_commuting(factor);
    }
    const bool ok = commuting && sched.total_strings == expected_schedule_strings(f);
    detail << family_name(f) << ": total=" << sched.total_strings
           << " distinct=" << sched.distinct_strings << " commuting=" << (commuting ? "yes" : "no")
           << " ";
    if (!ok) r.pass = false;
  }
  r.detail = detail.str();
  return r;
}

CriterionResult criterion9(Context& ctx) {
  CriterionResult r{9, "schedule replays the exponential", true, "", 0.0};
  std::ostringstream detail;
  for (Family f : kFamilies) {
    const LieAlgebraModel& model = ctx.model(f);
    const FactorizationResult& fact = ctx.sample_factorization(f);
    PauliSchedule sched = build_schedule(model, fact);
    const DenseMat target =
        AntiHermitianExp(to_dense(assemble(model.set, build_symmetrized(f)))).at(fact.theta);
    const Eigen::Index dim = target.rows();
    double worst = 0.0;
    for (Eigen::Index col = 0; col < dim; ++col) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
      e[col] = 1.0;
      worst = std::max(worst, (apply_schedule(sched, e) - target.col(col)).norm());
    }
    detail << family_name(f) << ": max column error " << worst << " ";
    if (worst > 1e-6) r.pass = false;
  }
  r.detail = detail.str();
  return r;
}

CriterionResult criterion10(Context& ctx) {
  CriterionResult r{10, "spin-conserving adaptive VQE", true, "", 0.0};
  std::ostringstream detail;
  for (unsigned seed = 0; seed <= 4; ++seed) {
    for (int n : {3, 4}) {
      const auto start = std::chrono::steady_clock::now();
      MolecularIntegrals ints = synth_hamiltonian(n, seed);
      SpMat h = build_hamiltonian(ints);
      SpMat s2 = s_squared_operator(n);
      std::vector<PoolOperator> pool = build_pool(PoolKind::SA, n);
      AdaptResult run = adapt_vqe(h, pool, closed_shell_reference(n, ints.n_electrons), s2);
      const double exact = exact_ground(h, n, ints.n_electrons, ints.ms2, 0);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

      double worst_s2 = std::abs(run.s2);
      for (const AdaptIteration& it : run.iterations) {
        worst_s2 = std::max(worst_s2, std::abs(it.s2));  // singlet: S(S+1) = 0
      }
      const double err = std::abs(run.energy - exact);
      const bool ok = run.converged && worst_s2 < 1e-8 && err < 1e-6 && secs < 600.0;
      detail << "n=" << n << ",seed=" << seed << ": dE=" << err << " s2<=" << worst_s2 << " ("
             << fmt(secs) << "s) ";
      if (!ok) r.pass = false;
    }
  }
  r.detail = detail.str();
  return r;
}

CriterionResult criterion11(Context& ctx) {
  CriterionResult r{11, "desk-scale substitute: pool comparison and spin collapse", true, "", 0.0};
  std::ostringstream detail;
  const int n = 3;
  MolecularIntegrals ints = synth_hamiltonian(n, ctx.seed);
  SpMat h = build_hamiltonian(ints);
  SpMat s2 = s_squared_operator(n);

  // (a) spin-adapted pool reaches the singlet ground state with no more
  //     parameters than the bare singles-and-doubles pool
  Eigen::VectorXcd reference = closed_shell_reference(n, ints.n_electrons);
  AdaptResult sa = adapt_vqe(h, build_pool(PoolKind::SA, n), reference, s2);
  AdaptResult sd = adapt_vqe(h, build_pool(PoolKind::SD, n), reference, s2);
  const double exact_singlet = exact_ground(h, n, ints.n_electrons, ints.ms2, 0);
  const bool comparison_ok = sa.converged && sd.converged &&
                             std::abs(sa.energy - exact_singlet) < 1e-6 &&
                             sa.parameters.size() <= sd.parameters.size();
  detail << "params sa=" << sa.parameters.size() << " sd=" << sd.parameters.size()
         << " dE_sa=" << std::abs(sa.energy - exact_singlet) << " ";
  if (!comparison_ok) r.pass = false;

  // (b) triplet reference: the spin-adapted pool keeps <S^2> = 2, the bare
  //     pool is free to collapse toward the lower singlet surface
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  Eigen::VectorXcd csf = Eigen::VectorXcd::Zero(dim);
  // orbitals 0 and 1 singly occupied, m_s = 0 triplet combination
  csf[(1 << 0) | (1 << 3)] = 1.0 / std::sqrt(2.0);
  csf[(1 << 1) | (1 << 2)] = 1.0 / std::sqrt(2.0);
  AdaptResult sa_trip = adapt_vqe(h, build_pool(PoolKind::SA, n), csf, s2);
  AdaptResult sd_trip = adapt_vqe(h, build_pool(PoolKind::SD, n), csf, s2);
  const double exact_triplet = exact_ground(h, n, 2, 0, 2);
  double worst_s2 = std::abs(sa_trip.s2 - 2.0);
  for (const AdaptIteration& it : sa_trip.iterations) {
    worst_s2 = std::max(worst_s2, std::abs(it.s2 - 2.0));
  }
  const bool collapse_ok = sa_trip.converged && worst_s2 < 1e-8 &&
                           std::abs(sa_trip.energy - exact_triplet) < 1e-6 &&
                           std::abs(sd_trip.s2 - 2.0) > 0.05 &&
                           sd_trip.energy < exact_triplet - 1e-6;
  detail << "| triplet: dE_sa=" << std::abs(sa_trip.energy - exact_triplet)
         << " s2_sa<=" << worst_s2 << " s2_sd=" << sd_trip.s2 << " E_sd=" << sd_trip.energy
         << " exact=" << exact_triplet << " ";
  if (!collapse_ok) r.pass = false;

  // (c) molecular-scale results are gated on external FCIDUMP inputs;
  //     the recorded recipes must be present
  std::ifstream recipes(data_path("../docs/molecular_workflows.md"));
  if (!recipes || recipes.peek() == std::ifstream::traits_type::eof()) {
    r.pass = false;
    detail << "| missing docs/molecular_workflows.md";
  }
  r.detail = detail.str();
  return r;
}

}  // namespace

bool AcceptanceReport::all_passed() const {
  for (const CriterionResult& c : criteria) {
    if (!c.pass) return false;
  }
  return true;
}

AcceptanceReport run_acceptance(unsigned seed, std::ostream& log) {
  AcceptanceReport report;
  report.seed = seed;
  Context ctx;
  ctx.seed = seed;
  log << kToolVersion << " acceptance battery, seed=" << seed << "\n";

  struct Check {
    int number;
    const char* name;
    CriterionResult (*run)(Context&);
  };
  const Check checks[] = {{1, "discovery closure dimensions", criterion1},
                          {2, "seniority-2 structure constants", criterion2},
                          {3, "singlet commutation table", criterion3},
                          {4, "centers", criterion4},
                          {5, "derived algebras and ideals", criterion5},
                          {6, "generator spectra", criterion6},
                          {7, "factorization over the theta grid", criterion7},
                          {8, "schedule string totals", criterion8},
                          {9, "schedule replays the exponential", criterion9},
                          {10, "spin-conserving adaptive VQE", criterion10},
                          {11, "pool comparison and spin collapse", criterion11}};
  for (const Check& check : checks) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
      result = check.run(ctx);
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    result.number = check.number;
    result.name = check.name;
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << "criterion " << result.number << " [" << result.name << "]: "
        << (result.pass ? "PASS" : "FAIL") << " (" << fmt(result.seconds) << "s) "
        << result.detail << "\n";
    report.criteria.push_back(std::move(result));
  }
  log << (report.all_passed() ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << "\n";
  return report;
}

}  // namespace spinfact
