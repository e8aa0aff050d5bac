#include "spinfact/orbitals.hpp"
#include <cstring>

#include <algorithm>

namespace spinfact {

namespace {
constexpr const char* kSpatialNames = "ijab";
}

std::string to_string(SpinOrbital so) {
  std::string out(1, kSpatialNames[static_cast<int>(so.spatial)]);
  out += so.spin == Spin::Alpha ? ".a" : ".b";
  return out;
}

SpinOrbital parse_spin_orbital(const std::string& text) {
  if (text.size() != 3 || text[1] != '.')
    throw std::invalid_argument("bad spin orbital '" + text + "'");
  const char* pos = std::strchr(kSpatialNames, text[0]);
  if (pos == nullptr || text[0] == '\0')
    throw std::invalid_argument("bad spatial label in '" + text + "'");
  Spin spin;
  if (text[2] == 'a')
    spin = Spin::Alpha;
  else if (text[2] == 'b')
    spin = Spin::Beta;
  else
    throw std::invalid_argument("bad spin label in '" + text + "'");
  return {static_cast<Spatial>(pos - kSpatialNames), spin};
}

OrbitalSet::OrbitalSet(std::vector<Spatial> labels) : labels_(std::move(labels)) {
  if (labels_.empty() || labels_.size() > 4)
    throw std::invalid_argument("orbital set must hold 1..4 spatial labels");
  if (!std::is_sorted(labels_.begin(), labels_.end()))
    throw std::invalid_argument("orbital set labels must follow canonical order");
  index_.fill(-1);
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (index_[static_cast<int>(labels_[k])] >= 0)
      throw std::invalid_argument("duplicate spatial label in orbital set");
    index_[static_cast<int>(labels_[k])] = static_cast<int>(k);
  }
}

OrbitalSet OrbitalSet::seniority2_iab() { return OrbitalSet({Spatial::I, Spatial::A, Spatial::B}); }
OrbitalSet OrbitalSet::seniority2_ija() { return OrbitalSet({Spatial::I, Spatial::J, Spatial::A}); }
OrbitalSet OrbitalSet::seniority4() {
  return OrbitalSet({Spatial::I, Spatial::J, Spatial::A, Spatial::B});
}

int OrbitalSet::qubit(SpinOrbital so) const {
  int pos = index_[static_cast<int>(so.spatial)];
  if (pos < 0)
    throw std::out_of_range("spin orbital " + to_string(so) + " not in orbital set");
  return 2 * pos + (so.spin == Spin::Beta ? 1 : 0);
}

}  // namespace spinfact
