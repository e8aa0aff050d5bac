#include <doctest.h>

#include "spinfact/algebra.hpp"
#include "spinfact/dsl.hpp"

using namespace spinfact;

TEST_CASE("generator files parse, format, and re-parse to identical matrices") {
  for (Family f : {Family::S2_iiab, Family::S2_ijaa, Family::S4_singlet, Family::S4_triplet}) {
    OrbitalSet set = family_orbitals(f);
    std::vector<DslEntry> entries = parse_generator_file(data_path(family_stem(f) + ".alg"));
    CHECK(static_cast<int>(entries.size()) ==
          (f == Family::S4_triplet ? 138 : f == Family::S4_singlet ? 28 : 5));
    for (const DslEntry& e : entries) {
      SpMat m1 = build_generator(set, e.spec);
      GeneratorSpec reparsed = parse_generator(format_generator(e.spec));
      SpMat m2 = build_generator(set, reparsed);
      CHECK(hs_norm(SpMat(m1 - m2)) < 1e-14);
    }
  }
}

TEST_CASE("polynomial coefficients re-derived from the matrix are the same integers") {
  OrbitalSet set = family_orbitals(Family::S4_triplet);
  std::vector<DslEntry> entries = parse_generator_file(data_path("s4_triplet.alg"));
  for (std::size_t k = 0; k < entries.size(); k += 7) {  // sample across the file
    const GeneratorSpec& spec = entries[k].spec;
    std::vector<Monomial> recovered =
        reproject_polynomial(set, spec, build_generator(set, spec));
    auto canon = [](std::vector<Monomial> poly) {
      std::sort(poly.begin(), poly.end(), [](const Monomial& a, const Monomial& b) {
        return a.factors < b.factors;
      });
      return poly;
    };
    std::vector<Monomial> want = spec.polynomial;
    if (want.empty()) want.push_back({1, {}});  // bare generator = unit prefactor
    std::vector<Monomial> a = canon(want), b = canon(recovered);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].coeff == b[i].coeff);
      CHECK(a[i].factors == b[i].factors);
    }
  }
}

TEST_CASE("combination and index-list files parse with signed integer terms") {
  std::vector<Combination> centers = parse_combination_file(data_path("s4_triplet.centers"));
  REQUIRE(centers.size() == 6);
  CHECK(centers[0].name == "Z1");
  for (const Combination& combo : centers) {
    for (const auto& [idx, coeff] : combo.terms) {
      CHECK(idx >= 1);
      CHECK(idx <= 138);
      CHECK(std::abs(coeff - std::round(coeff)) < 1e-15);
    }
  }
  std::vector<IndexList> ideals = parse_index_list_file(data_path("s4_triplet.ideals"));
  REQUIRE(ideals.size() == 16);
  std::size_t total = 0;
  for (const IndexList& lst : ideals) total += lst.indices.size();
  CHECK(total == 132);
}
