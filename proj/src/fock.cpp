#include "spinfact/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace spinfact {

namespace {

int parity_below(std::size_t state, int qubit) {
  std::size_t mask = (std::size_t{1} << qubit) - 1;
  return std::popcount(state & mask) & 1 ? -1 : 1;
}

}  // namespace

SpMat jw_ladder(int qubit, Ladder kind, int n_qubits) {
  if (n_qubits < 1 || n_qubits > 10)
    throw std::out_of_range("jw_ladder: unsupported qubit count");
  if (qubit < 0 || qubit >= n_qubits)
    throw std::out_of_range("jw_ladder: qubit index out of range");
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t bit = std::size_t{1} << qubit;
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(dim / 2);
  for (std::size_t s = 0; s < dim; ++s) {
    const bool occupied = (s & bit) != 0;
    if (kind == Ladder::Create && !occupied)
      trips.emplace_back(s | bit, s, double(parity_below(s, qubit)));
    else if (kind == Ladder::Annihilate && occupied)
      trips.emplace_back(s & ~bit, s, double(parity_below(s, qubit)));
  }
  SpMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SpMat number_op(int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits)
    throw std::out_of_range("number_op: qubit index out of range");
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t bit = std::size_t{1} << qubit;
  std::vector<Eigen::Triplet<Complex>> trips;
  for (std::size_t s = 0; s < dim; ++s)
    if (s & bit) trips.emplace_back(s, s, 1.0);
  SpMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SpMat build_g(const OrbitalSet& set, std::pair<SpinOrbital, SpinOrbital> lower,
              std::pair<SpinOrbital, SpinOrbital> upper) {
  const std::array<SpinOrbital, 4> all{lower.first, lower.second, upper.first, upper.second};
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (all[i] == all[j])
        throw std::invalid_argument("build_g: repeated spin orbital " + to_string(all[i]));
  const int n = set.n_qubits();
  SpMat exc = jw_ladder(set.qubit(upper.first), Ladder::Create, n) *
              jw_ladder(set.qubit(upper.second), Ladder::Create, n) *
              jw_ladder(set.qubit(lower.second), Ladder::Annihilate, n) *
              jw_ladder(set.qubit(lower.first), Ladder::Annihilate, n);
  SpMat g = SpMat(exc - SpMat(exc.adjoint()));
  g.prune([](int, int, const Complex& v) { return std::abs(v) > 1e-15; });
  return g;
}

std::vector<SpinOrbital> GeneratorSpec::polynomial_support() const {
  std::set<SpinOrbital> sup;
  for (const auto& mono : polynomial) sup.insert(mono.factors.begin(), mono.factors.end());
  return {sup.begin(), sup.end()};
}

SpMat build_polynomial(const OrbitalSet& set, const std::vector<Monomial>& poly) {
  const std::size_t dim = set.dim();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  for (const auto& mono : poly) {
    std::size_t mask = 0;
    for (const auto& so : mono.factors) mask |= std::size_t{1} << set.qubit(so);
    for (std::size_t s = 0; s < dim; ++s)
      if ((s & mask) == mask) diag[s] += double(mono.coeff);
  }
  std::vector<Eigen::Triplet<Complex>> trips;
  for (std::size_t s = 0; s < dim; ++s)
    if (diag[s] != 0.0) trips.emplace_back(s, s, diag[s]);
  SpMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SpMat build_generator(const OrbitalSet& set, const GeneratorSpec& spec) {
  const std::array<SpinOrbital, 4> base{spec.lower.first, spec.lower.second, spec.upper.first,
                                        spec.upper.second};
  for (const auto& so : spec.polynomial_support())
    if (std::find(base.begin(), base.end(), so) != base.end())
      throw std::invalid_argument("build_generator: polynomial index " + to_string(so) +
                                  " overlaps the base generator");
  SpMat g = build_g(set, spec.lower, spec.upper);
  if (spec.sign < 0) g = SpMat(-g);
  if (!spec.has_polynomial()) return g;
  return SpMat((build_polynomial(set, spec.polynomial) * g).pruned(Complex(1.0), 1e-15));
}

Family parse_family(const std::string& name) {
  if (name == "s2-iiab") return Family::S2_iiab;
  if (name == "s2-ijaa") return Family::S2_ijaa;
  if (name == "s4-singlet") return Family::S4_singlet;
  if (name == "s4-triplet") return Family::S4_triplet;
  throw std::invalid_argument("unknown family '" + name +
                              "' (expected s2-iiab, s2-ijaa, s4-singlet, s4-triplet)");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::S2_iiab: return "s2-iiab";
    case Family::S2_ijaa: return "s2-ijaa";
    case Family::S4_singlet: return "s4-singlet";
    case Family::S4_triplet: return "s4-triplet";
  }
  throw std::logic_error("bad family");
}

OrbitalSet family_orbitals(Family f) {
  switch (f) {
    case Family::S2_iiab: return OrbitalSet::seniority2_iab();
    case Family::S2_ijaa: return OrbitalSet::seniority2_ija();
    default: return OrbitalSet::seniority4();
  }
}

namespace {

SpinOrbital so(Spatial s, Spin sp) { return {s, sp}; }

GeneratorSpec bare(SpinOrbital l1, SpinOrbital l2, SpinOrbital u1, SpinOrbital u2) {
  GeneratorSpec spec;
  spec.lower = {l1, l2};
  spec.upper = {u1, u2};
  return spec;
}

}  // namespace

SymmetrizedGenerator build_symmetrized(Family family) {
  using enum Spatial;
  constexpr Spin al = Spin::Alpha, be = Spin::Beta;
  SymmetrizedGenerator out;
  const double r2 = 1.0 / std::sqrt(2.0);
  switch (family) {
    case Family::S2_iiab:
      out.specs = {bare(so(I, al), so(I, be), so(A, al), so(B, be)),
                   bare(so(I, al), so(I, be), so(A, be), so(B, al))};
      out.coefficients = {r2, -r2};
      break;
    case Family::S2_ijaa:
      out.specs = {bare(so(I, al), so(J, be), so(A, al), so(A, be)),
                   bare(so(I, be), so(J, al), so(A, al), so(A, be))};
      out.coefficients = {r2, -r2};
      break;
    case Family::S4_singlet:
      out.specs = {bare(so(I, al), so(J, be), so(A, al), so(B, be)),
                   bare(so(I, be), so(J, al), so(A, be), so(B, al)),
                   bare(so(I, be), so(J, al), so(A, al), so(B, be)),
                   bare(so(I, al), so(J, be), so(A, be), so(B, al))};
      out.coefficients = {0.5, 0.5, -0.5, -0.5};
      break;
    case Family::S4_triplet: {
      const double c = 1.0 / (2.0 * std::sqrt(3.0));
      out.specs = {bare(so(I, al), so(J, be), so(A, al), so(B, be)),
                   bare(so(I, be), so(J, al), so(A, be), so(B, al)),
                   bare(so(I, be), so(J, al), so(A, al), so(B, be)),
                   bare(so(I, al), so(J, be), so(A, be), so(B, al)),
                   bare(so(I, al), so(J, al), so(A, al), so(B, al)),
                   bare(so(I, be), so(J, be), so(A, be), so(B, be))};
      out.coefficients = {c, c, c, c, 2 * c, 2 * c};
      break;
    }
  }
  return out;
}

SpMat assemble(const OrbitalSet& set, const SymmetrizedGenerator& sym) {
  SpMat total(set.dim(), set.dim());
  for (std::size_t k = 0; k < sym.specs.size(); ++k)
    total += SpMat(sym.coefficients[k] * build_generator(set, sym.specs[k]));
  total.prune([](int, int, const Complex& v) { return std::abs(v) > 1e-15; });
  return total;
}

double hs_inner(const SpMat& x, const SpMat& y) {
  // Re tr(X^dag Y)/dim; both matrices share the same square dimension.
  Complex acc = 0.0;
  for (int k = 0; k < x.outerSize(); ++k)
    for (SpMat::InnerIterator ix(x, k); ix; ++ix) acc += std::conj(ix.value()) * y.coeff(ix.row(), ix.col());
  return acc.real() / double(x.rows());
}

double hs_norm(const SpMat& x) {
  double acc = 0.0;
  for (int k = 0; k < x.outerSize(); ++k)
    for (SpMat::InnerIterator ix(x, k); ix; ++ix) acc += std::norm(ix.value());
  return std::sqrt(acc / double(x.rows()));
}

double anti_hermitian_defect(const SpMat& x) {
  SpMat d = SpMat(x + SpMat(x.adjoint()));
  double worst = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

DenseMat to_dense(const SpMat& x) { return DenseMat(x); }

}  // namespace spinfact
