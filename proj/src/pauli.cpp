#include "spinfact/pauli.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace spinfact {

namespace {

// letter sort rank at one qubit: I < Z < X < Y
inline int letter_rank(std::uint32_t x_bit, std::uint32_t z_bit) {
  return static_cast<int>(2 * x_bit + z_bit);
}

bool string_less(const PauliString& a, const PauliString& b) {
  for (int q = 0; q < a.n_qubits; ++q) {
    const int ra = letter_rank((a.x >> q) & 1u, (a.z >> q) & 1u);
    const int rb = letter_rank((b.x >> q) & 1u, (b.z >> q) & 1u);
    if (ra != rb) return ra < rb;
  }
  return false;
}

// phase of <r^x | P | r> for P with masks (x, z): i^{pop(x&z)} (-1)^{pop(r&z)}
inline Complex pauli_phase(std::uint32_t x, std::uint32_t z, std::uint32_t r) {
  static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Complex p = ipow[std::popcount(x & z) & 3];
  if (std::popcount(r & z) & 1) p = -p;
  return p;
}

}  // namespace

std::string PauliString::letters() const {
  static const char table[4] = {'I', 'X', 'Z', 'Y'};
  std::string out(static_cast<std::size_t>(n_qubits), 'I');
  for (int q = 0; q < n_qubits; ++q) {
    out[static_cast<std::size_t>(q)] = table[((x >> q) & 1u) | (((z >> q) & 1u) << 1)];
  }
  return out;
}

bool PauliString::commutes_with(const PauliString& other) const {
  const int anti = std::popcount(x & other.z) + std::popcount(other.x & z);
  return (anti & 1) == 0;
}

std::vector<PauliTerm> pauli_decompose(const SpMat& m, int n_qubits) {
  const std::uint32_t dim = 1u << n_qubits;
  if (m.rows() != static_cast<Eigen::Index>(dim)) throw std::invalid_argument("dimension mismatch");
  if (anti_hermitian_defect(m) > 1e-10) throw std::invalid_argument("matrix is not anti-Hermitian");

  // group matrix entries by the flip mask x = row ^ col
  std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, Complex>>> groups;
  for (int col = 0; col < m.outerSize(); ++col) {
    for (SpMat::InnerIterator it(m, col); it; ++it) {
      groups[static_cast<std::uint32_t>(it.row()) ^ static_cast<std::uint32_t>(it.col())]
          .emplace_back(static_cast<std::uint32_t>(it.col()), it.value());
    }
  }

  std::vector<PauliTerm> terms;
  for (const auto& [x, entries] : groups) {
    for (std::uint32_t z = 0; z < dim; ++z) {
      Complex c = 0.0;
      for (const auto& [r, value] : entries) c += std::conj(pauli_phase(x, z, r)) * value;
      c /= static_cast<double>(dim);
      if (std::abs(c) <= 1e-12) continue;
      if (std::abs(c.real()) > 1e-12) {
        throw std::runtime_error("coefficient is not purely imaginary");
      }
      terms.push_back({PauliString{x, z, n_qubits}, c.imag()});
    }
  }
  std::sort(terms.begin(), terms.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return string_less(a.p, b.p); });
  return terms;
}

bool check_commuting(const std::vector<PauliTerm>& terms) {
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      if (!terms[a].p.commutes_with(terms[b].p)) return false;
    }
  }
  return true;
}

PauliSchedule build_schedule(const LieAlgebraModel& model, const FactorizationResult& result) {
  PauliSchedule sched;
  sched.family = result.family;
  sched.theta = result.theta;
  sched.n_qubits = model.set.n_qubits();

  // factor list: central phases first, then the semisimple factors in
  // ascending appendix order (matching the certified product)
  std::vector<std::pair<SpMat, double>> factors;
  std::vector<Combination> combos = load_centers(model.family);
  for (const CentralFactor& f : result.central) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(model.dim());
    for (const auto& [idx, coeff] : combos[static_cast<std::size_t>(f.z_index - 1)].terms) {
      z[idx - 1] = coeff;
    }
    factors.emplace_back(model.assemble_coeffs(z), f.angle);
  }
  for (const SemisimpleFactor& f : result.semisimple) {
    factors.emplace_back(model.basis[f.basis_index - 1], f.t);
  }

  std::set<std::pair<std::uint32_t, std::uint32_t>> distinct;
  for (const auto& [mat, param] : factors) {
    std::vector<PauliTerm> terms = pauli_decompose(mat, sched.n_qubits);
    if (!check_commuting(terms)) {
      throw std::runtime_error("factor decomposes into non-commuting strings");
    }
    sched.per_factor_counts.push_back(static_cast<int>(terms.size()));
    for (const PauliTerm& t : terms) {
      sched.entries.push_back({t.p, param * t.r});
      distinct.insert({t.p.x, t.p.z});
    }
  }
  sched.total_strings = static_cast<int>(sched.entries.size());
  sched.distinct_strings = static_cast<int>(distinct.size());
  return sched;
}

Eigen::VectorXcd apply_schedule(const PauliSchedule& schedule, const Eigen::VectorXcd& psi) {
  const std::uint32_t dim = 1u << schedule.n_qubits;
  if (psi.size() != static_cast<Eigen::Index>(dim)) throw std::invalid_argument("state size");
  Eigen::VectorXcd state = psi;
  Eigen::VectorXcd pstate(dim);
  // the product is left-to-right in entry order, so apply in reverse
  for (auto it = schedule.entries.rbegin(); it != schedule.entries.rend(); ++it) {
    const PauliString& p = it->p;
    for (std::uint32_t r = 0; r < dim; ++r) {
      // (P psi)[r^x] = phase(r) psi[r]
      pstate[r ^ p.x] = pauli_phase(p.x, p.z, r) * state[r];
    }
    const double c = std::cos(it->angle), s = std::sin(it->angle);
    state = c * state + Complex(0.0, s) * pstate;
  }
  return state;
}

void write_schedule_json(const PauliSchedule& schedule, const std::string& path) {
  nlohmann::ordered_json j;
  j["family"] = family_name(schedule.family);
  j["theta"] = schedule.theta;
  j["n_qubits"] = schedule.n_qubits;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const ScheduleEntry& e : schedule.entries) {
    entries.push_back({{"pauli", e.p.letters()}, {"angle", e.angle}});
  }
  j["entries"] = entries;
  j["total_strings"] = schedule.total_strings;
  j["distinct_strings"] = schedule.distinct_strings;
  j["per_factor_counts"] = schedule.per_factor_counts;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace spinfact
