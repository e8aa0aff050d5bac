#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinfact/factorize.hpp"

namespace spinfact {

/// Pauli string over n qubits as X/Z bit masks; bit q refers to qubit q.
/// Letter at qubit q: (x,z) = (0,0) I, (1,0) X, (0,1) Z, (1,1) Y.
struct PauliString {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  int n_qubits = 0;

  std::string letters() const;  // qubit 0 first, e.g. "XZYI"
  bool commutes_with(const PauliString& other) const;
  bool operator==(const PauliString& other) const {
    return x == other.x && z == other.z && n_qubits == other.n_qubits;
  }
};

/// One term of an anti-Hermitian operator A = i * sum_k r_k P_k, r_k real.
struct PauliTerm {
  PauliString p;
  double r = 0.0;
};

/// Exact Pauli decomposition via c_P = tr(P^dag M) / 2^n, pruned below
/// 1e-12.  Requires M anti-Hermitian (all coefficients purely imaginary).
/// Terms come back sorted by string (I < Z < X < Y, qubit 0 major).
std::vector<PauliTerm> pauli_decompose(const SpMat& m, int n_qubits);

/// True iff all strings in the set commute pairwise.
bool check_commuting(const std::vector<PauliTerm>& terms);

struct ScheduleEntry {
  PauliString p;
  double angle = 0.0;  // rotation exp(i * angle * P)
};

struct PauliSchedule {
  Family family = Family::S2_iiab;
  double theta = 0.0;
  int n_qubits = 0;
  std::vector<ScheduleEntry> entries;
  std::vector<int> per_factor_counts;  // one per factor, factor order
  int total_strings = 0;               // sum of per-factor counts
  int distinct_strings = 0;
};

/// Jordan-Wigner rotation schedule for a certified factorization:
/// each factor exp(t*A) with A = i sum r_k P_k (all P_k commuting) becomes
/// the rotations exp(i * (t*r_k) * P_k) in deterministic string order.
PauliSchedule build_schedule(const LieAlgebraModel& model, const FactorizationResult& result);

/// Applies the schedule to a state vector (dimension 2^n).
Eigen::VectorXcd apply_schedule(const PauliSchedule& schedule, const Eigen::VectorXcd& psi);

void write_schedule_json(const PauliSchedule& schedule, const std::string& path);

}  // namespace spinfact
