#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinfact {

/// Spatial orbital labels used by the rotation generators.
enum class Spatial : std::uint8_t { I = 0, J = 1, A = 2, B = 3 };

enum class Spin : std::uint8_t { Alpha = 0, Beta = 1 };

/// One spin orbital: a spatial label plus a spin projection.
struct SpinOrbital {
  Spatial spatial;
  Spin spin;

  friend bool operator==(const SpinOrbital&, const SpinOrbital&) = default;
  friend auto operator<=>(const SpinOrbital&, const SpinOrbital&) = default;
};

std::string to_string(SpinOrbital so);
SpinOrbital parse_spin_orbital(const std::string& text);

/// Fixed set of spatial labels, mapped onto Jordan-Wigner qubits in the
/// canonical order i_a, i_b, j_a, j_b, a_a, a_b, b_a, b_b truncated to the
/// labels that are present.  Seniority-2 sets hold 3 spatial labels
/// (6 qubits), seniority-4 sets hold all 4 (8 qubits).
class OrbitalSet {
 public:
  explicit OrbitalSet(std::vector<Spatial> labels);

  static OrbitalSet seniority2_iab();   // {i, a, b}
  static OrbitalSet seniority2_ija();   // {i, j, a}
  static OrbitalSet seniority4();       // {i, j, a, b}

  int n_qubits() const { return 2 * static_cast<int>(labels_.size()); }
  std::size_t dim() const { return std::size_t{1} << n_qubits(); }

  bool contains(Spatial s) const { return index_[static_cast<int>(s)] >= 0; }

  /// Qubit index of a spin orbital; throws if the label is absent.
  int qubit(SpinOrbital so) const;

  const std::vector<Spatial>& labels() const { return labels_; }

 private:
  std::vector<Spatial> labels_;
  std::array<int, 4> index_;  // spatial label -> position, -1 if absent
};

}  // namespace spinfact
