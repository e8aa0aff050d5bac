#include <cmath>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "spinfact/algebra.hpp"
#include "spinfact/chem.hpp"
#include "spinfact/factorize.hpp"
#include "spinfact/pauli.hpp"
#include "spinfact/verify.hpp"
#include "spinfact/vqe.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

std::string block_summary(const std::vector<int>& block_sizes) {
  std::map<int, int> sizes;
  for (int s : block_sizes) ++sizes[s];
  std::string out;
  for (const auto& [size, count] : sizes) {
    if (!out.empty()) out += ",";
    out += std::to_string(size) + "x" + std::to_string(count);
  }
  return out;
}

// the recorded block lists where the basis carries them; otherwise the
// commutator-connected components of the derived algebra
std::string ideal_summary(const spinfact::LieAlgebraModel& model) {
  std::vector<int> sizes;
  if (model.appendix_mode) {
    for (const auto& lst : spinfact::load_ideal_lists(model.family)) {
      sizes.push_back(static_cast<int>(lst.indices.size()));
    }
  } else {
    for (const auto& block : spinfact::ideal_partition(model)) {
      sizes.push_back(static_cast<int>(block.size()));
    }
  }
  return block_summary(sizes);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-adapted rotation algebras: closure, factorization, schedules, VQE"};
  app.set_version_flag("--version", spinfact::kToolVersion);
  app.require_subcommand(1);

  std::string out_path, family_name_arg = "s4-triplet", pool_arg = "sa", fcidump_path, csv_path;
  unsigned seed = 0;
  double tol = 1e-6, theta = M_PI / 4.0;
  bool json_stdout = false, discovery = false, check = false;
  int n_spatial = 3;

  app.add_option("--out", out_path, "output file path")->capture_default_str();
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--tol", tol, "tolerance for --check style verifications")
      ->capture_default_str();
  app.add_flag("--json", json_stdout, "echo the JSON output to stdout");

  CLI::App* algebra = app.add_subcommand("algebra", "build an algebra and report its anatomy");
  algebra->add_option("--family", family_name_arg, "s2-iiab|s2-ijaa|s4-singlet|s4-triplet")
      ->capture_default_str();
  algebra->add_flag("--discovery", discovery, "closure from the elementary seeds instead of "
                                              "the recorded basis");

  CLI::App* factorize = app.add_subcommand("factorize", "factor exp(theta*G) into a product");
  factorize->add_option("--family", family_name_arg)->capture_default_str();
  factorize->add_option("--theta", theta, "rotation angle")->capture_default_str();

  CLI::App* schedule = app.add_subcommand("schedule", "emit the Pauli rotation schedule");
  schedule->add_option("--family", family_name_arg)->capture_default_str();
  schedule->add_option("--theta", theta, "rotation angle")->capture_default_str();
  schedule->add_flag("--check", check, "replay the schedule against the dense exponential");

  CLI::App* vqe = app.add_subcommand("vqe", "adaptive VQE on a test or FCIDUMP Hamiltonian");
  vqe->add_option("--pool", pool_arg, "sd|sa|pair")->capture_default_str();
  vqe->add_option("--n", n_spatial, "spatial orbitals for the synthetic Hamiltonian")
      ->capture_default_str();
  vqe->add_option("--fcidump", fcidump_path, "FCIDUMP input instead of a synthetic system");
  vqe->add_option("--csv", csv_path, "per-iteration CSV output path");

  CLI::App* verify = app.add_subcommand("verify-all", "run the full acceptance battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (algebra->parsed()) {
      spinfact::Family family = spinfact::parse_family(family_name_arg);
      spinfact::LieAlgebraModel model = discovery ? spinfact::build_discovery(family)
                                                  : spinfact::load_appendix(family);
      std::cout << "dim=" << model.dim() << " center=" << model.center_basis.cols()
                << " derived=" << model.derived_basis.cols() << " ideals=" << ideal_summary(model)
                << "\n";
      if (!out_path.empty()) spinfact::write_algebra_json(model, out_path);
      return kExitOk;
    }

    if (factorize->parsed()) {
      spinfact::Family family = spinfact::parse_family(family_name_arg);
      spinfact::LieAlgebraModel model = spinfact::load_appendix(family);
      spinfact::Factorizer fac(model);
      spinfact::FactorizationResult result = fac.factorize(theta, seed);
      std::cout << "family=" << spinfact::family_name(family) << " theta=" << theta
                << " cost_residual=" << result.cost_residual
                << " fock_residual=" << result.fock_residual << " seed=" << seed << "\n";
      if (!out_path.empty()) spinfact::write_factorization_json(result, out_path);
      if (json_stdout) {
        spinfact::write_factorization_json(result, "/dev/stdout");
      }
      return kExitOk;
    }

    if (schedule->parsed()) {
      spinfact::Family family = spinfact::parse_family(family_name_arg);
      spinfact::LieAlgebraModel model = spinfact::load_appendix(family);
      spinfact::Factorizer fac(model);
      spinfact::FactorizationResult result = fac.factorize(theta, seed);
      spinfact::PauliSchedule sched = spinfact::build_schedule(model, result);
      std::cout << "family=" << spinfact::family_name(family) << " theta=" << theta
                << " total_strings=" << sched.total_strings
                << " distinct_strings=" << sched.distinct_strings << "\n";
      if (check) {
        const spinfact::DenseMat target =
            spinfact::AntiHermitianExp(
                spinfact::to_dense(spinfact::assemble(model.set, spinfact::build_symmetrized(family))))
                .at(theta);
        double worst = 0.0;
        for (Eigen::Index col = 0; col < target.rows(); ++col) {
          Eigen::VectorXcd e = Eigen::VectorXcd::Zero(target.rows());
          e[col] = 1.0;
          worst = std::max(worst, (spinfact::apply_schedule(sched, e) - target.col(col)).norm());
        }
        std::cout << "check: max column error " << worst << (worst < tol ? " ok" : " FAIL")
                  << "\n";
        if (worst >= tol) return kExitNumerical;
      }
      if (!out_path.empty()) spinfact::write_schedule_json(sched, out_path);
      if (json_stdout) spinfact::write_schedule_json(sched, "/dev/stdout");
      return kExitOk;
    }

    if (vqe->parsed()) {
      spinfact::MolecularIntegrals ints = fcidump_path.empty()
                                              ? spinfact::synth_hamiltonian(n_spatial, seed)
                                              : spinfact::parse_fcidump(fcidump_path);
      spinfact::PoolKind kind = spinfact::parse_pool(pool_arg);
      spinfact::SpMat h = spinfact::build_hamiltonian(ints);
      spinfact::SpMat s2 = spinfact::s_squared_operator(ints.n_spatial);
      spinfact::VqeRunRecord record;
      record.pool = spinfact::pool_name(kind);
      record.n_spatial = ints.n_spatial;
      record.n_electrons = ints.n_electrons;
      record.ms2 = ints.ms2;
      record.seed = seed;
      record.reference = "closed-shell determinant";
      record.pool_includes_coincident_forms = kind == spinfact::PoolKind::SA;
      record.pool_includes_pair_doubles = kind != spinfact::PoolKind::SD;
      record.result = spinfact::adapt_vqe(
          h, spinfact::build_pool(kind, ints.n_spatial),
          spinfact::closed_shell_reference(ints.n_spatial, ints.n_electrons), s2);
      record.exact_energy = spinfact::exact_ground(h, ints.n_spatial, ints.n_electrons, ints.ms2);
      std::cout << "pool=" << record.pool << " energy=" << record.result.energy
                << " exact_sector=" << record.exact_energy << " s2=" << record.result.s2
                << " params=" << record.result.parameters.size()
                << " converged=" << (record.result.converged ? "yes" : "no") << "\n";
      if (!out_path.empty()) spinfact::write_vqe_json(record, out_path);
      if (!csv_path.empty()) spinfact::write_vqe_csv(record, csv_path);
      if (json_stdout) spinfact::write_vqe_json(record, "/dev/stdout");
      return record.result.converged ? kExitOk : kExitNumerical;
    }

    if (verify->parsed()) {
      spinfact::AcceptanceReport report = spinfact::run_acceptance(seed, std::cout);
      return report.all_passed() ? kExitOk : kExitNumerical;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
