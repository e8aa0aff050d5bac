#pragma once

#include <string>
#include <vector>

#include "spinfact/fock.hpp"

namespace spinfact {

/// One parsed line of a generator file: `<name> = <element>`.
struct DslEntry {
  int index = 0;  // 1-based position in the file
  std::string name;
  GeneratorSpec spec;
};

/// Parses one element expression, e.g.
///   `-(1 - n(i.a) - n(i.b)) * G(a.a,b.b -> a.b,b.a)`
/// Several parenthesized polynomial groups may be multiplied together;
/// the parser expands the product into a flat monomial list.
GeneratorSpec parse_generator(const std::string& text);

/// Parses a whole generator file (UTF-8, one `A<k> = ...` per line,
/// '#' comments and blank lines ignored).  Entries must be numbered
/// 1..m in order.
std::vector<DslEntry> parse_generator_file(const std::string& path);

std::string format_generator(const GeneratorSpec& spec);

/// Recovers the integer polynomial coefficients of `spec` from its matrix
/// by projection: evaluates the diagonal prefactor on every occupation
/// pattern of the polynomial support and Moebius-inverts to monomials.
/// Used by the parse -> matrix -> re-derive round-trip check.
std::vector<Monomial> reproject_polynomial(const OrbitalSet& set, const GeneratorSpec& spec,
                                           const SpMat& matrix);

/// Named integer linear combinations over a basis, e.g. center files:
///   `Z1 = A3 + A9 + A13 - 3*A104`
struct Combination {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (1-based basis index, coefficient)
};

std::vector<Combination> parse_combination_file(const std::string& path);

/// Index lists, e.g. ideal files: `I3_1: A10 A22 A51`.
struct IndexList {
  std::string name;
  std::vector<int> indices;  // 1-based
};

std::vector<IndexList> parse_index_list_file(const std::string& path);

}  // namespace spinfact
