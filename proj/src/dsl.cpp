#include "spinfact/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace spinfact {

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("DSL parse error at position " + std::to_string(pos) + " in '" +
                                s + "': " + what);
  }
  long long integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected integer");
    return std::stoll(s.substr(start, pos - start));
  }
  SpinOrbital orbital() {
    skip_ws();
    if (pos + 3 > s.size()) fail("expected spin orbital");
    SpinOrbital so = parse_spin_orbital(s.substr(pos, 3));
    pos += 3;
    return so;
  }
};

// One parenthesized polynomial group: `(1 - n(p) + 2*n(p)*n(q) ...)`.
std::vector<Monomial> parse_poly_group(Cursor& cur) {
  cur.expect('(');
  std::vector<Monomial> terms;
  bool first = true;
  while (true) {
    int sign = 1;
    char c = cur.peek();
    if (c == ')') {
      cur.expect(')');
      break;
    }
    if (c == '+') {
      cur.eat('+');
    } else if (c == '-') {
      cur.eat('-');
      sign = -1;
    } else if (!first) {
      cur.fail("expected '+', '-' or ')' between monomials");
    }
    first = false;

    Monomial mono;
    mono.coeff = sign;
    bool saw_factor = false;
    if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
      mono.coeff = sign * cur.integer();
      saw_factor = true;
    }
    while (true) {
      if (saw_factor && !cur.eat('*')) break;
      if (cur.peek() != 'n') {
        if (!saw_factor) cur.fail("expected coefficient or n(...)");
        cur.fail("expected n(...) after '*'");
      }
      ++cur.pos;  // 'n'
      cur.expect('(');
      mono.factors.push_back(cur.orbital());
      cur.expect(')');
      saw_factor = true;
    }
    std::sort(mono.factors.begin(), mono.factors.end());
    if (std::adjacent_find(mono.factors.begin(), mono.factors.end()) != mono.factors.end())
      cur.fail("repeated orbital inside one monomial (occupations are idempotent; simplify first)");
    terms.push_back(std::move(mono));
  }
  if (terms.empty()) cur.fail("empty polynomial group");
  return terms;
}

std::vector<Monomial> multiply_polys(const std::vector<Monomial>& a,
                                     const std::vector<Monomial>& b) {
  std::map<std::vector<SpinOrbital>, long long> acc;
  for (const auto& ma : a)
    for (const auto& mb : b) {
      std::vector<SpinOrbital> factors = ma.factors;
      factors.insert(factors.end(), mb.factors.begin(), mb.factors.end());
      std::sort(factors.begin(), factors.end());
      factors.erase(std::unique(factors.begin(), factors.end()), factors.end());  // n^2 = n
      acc[factors] += ma.coeff * mb.coeff;
    }
  std::vector<Monomial> out;
  for (auto& [factors, coeff] : acc)
    if (coeff != 0) out.push_back({coeff, factors});
  return out;
}

void canonicalize(std::vector<Monomial>& poly) {
  std::map<std::vector<SpinOrbital>, long long> acc;
  for (auto& m : poly) acc[m.factors] += m.coeff;
  poly.clear();
  for (auto& [factors, coeff] : acc)
    if (coeff != 0) poly.push_back({coeff, factors});
}

}  // namespace

GeneratorSpec parse_generator(const std::string& text) {
  Cursor cur{text};
  GeneratorSpec spec;
  if (cur.eat('-')) spec.sign = -1;

  std::vector<std::vector<Monomial>> groups;
  while (cur.peek() == '(') {
    groups.push_back(parse_poly_group(cur));
    cur.expect('*');
  }
  if (!groups.empty()) {
    std::vector<Monomial> poly = groups[0];
    for (std::size_t g = 1; g < groups.size(); ++g) poly = multiply_polys(poly, groups[g]);
    canonicalize(poly);
    spec.polynomial = std::move(poly);
  }

  if (cur.peek() != 'G') cur.fail("expected G(...)");
  ++cur.pos;
  cur.expect('(');
  spec.lower.first = cur.orbital();
  cur.expect(',');
  spec.lower.second = cur.orbital();
  cur.expect('-');
  cur.expect('>');
  spec.upper.first = cur.orbital();
  cur.expect(',');
  spec.upper.second = cur.orbital();
  cur.expect(')');
  cur.skip_ws();
  if (cur.pos != text.size()) cur.fail("trailing characters");
  return spec;
}

namespace {

std::string strip_comment(std::string line) {
  auto hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
  std::size_t start = 0;
  while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
  return line.substr(start);
}

}  // namespace

std::vector<DslEntry> parse_generator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open generator file " + path);
  std::vector<DslEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected '<name> = ...'");
    DslEntry entry;
    entry.name = strip_comment(line.substr(0, eq));
    entry.index = static_cast<int>(entries.size()) + 1;
    // Files named A1..Am must be numbered consecutively; other names are free-form.
    if (entry.name.size() > 1 && entry.name[0] == 'A' &&
        std::isdigit(static_cast<unsigned char>(entry.name[1])) &&
        std::stoi(entry.name.substr(1)) != entry.index)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": entries must be numbered consecutively");
    try {
      entry.spec = parse_generator(line.substr(eq + 1));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string format_generator(const GeneratorSpec& spec) {
  std::ostringstream out;
  if (spec.sign < 0) out << '-';
  if (spec.has_polynomial()) {
    out << '(';
    bool first = true;
    for (const auto& mono : spec.polynomial) {
      long long c = mono.coeff;
      if (first) {
        if (c < 0) out << '-';
      } else {
        out << (c < 0 ? " - " : " + ");
      }
      first = false;
      long long mag = std::llabs(c);
      bool printed = false;
      if (mag != 1 || mono.factors.empty()) {
        out << mag;
        printed = true;
      }
      for (const auto& so : mono.factors) {
        if (printed) out << '*';
        out << "n(" << to_string(so) << ')';
        printed = true;
      }
    }
    out << ") * ";
  }
  out << "G(" << to_string(spec.lower.first) << ',' << to_string(spec.lower.second) << " -> "
      << to_string(spec.upper.first) << ',' << to_string(spec.upper.second) << ')';
  return out.str();
}

std::vector<Monomial> reproject_polynomial(const OrbitalSet& set, const GeneratorSpec& spec,
                                           const SpMat& matrix) {
  // A reference entry of the bare generator; the polynomial never touches
  // the base orbitals, so scaling that entry across all occupation patterns
  // of the support reads the polynomial off the matrix.
  SpMat g = build_g(set, spec.lower, spec.upper);
  if (spec.sign < 0) g = SpMat(-g);
  int ref_row = -1, ref_col = -1;
  for (int k = 0; k < g.outerSize() && ref_row < 0; ++k)
    for (SpMat::InnerIterator it(g, k); it; ++it) {
      ref_row = static_cast<int>(it.row());
      ref_col = static_cast<int>(it.col());
      break;
    }
  if (ref_row < 0) throw std::logic_error("reproject_polynomial: zero base generator");

  const auto support = spec.polynomial_support();
  std::vector<int> support_bits;
  for (const auto& so : support) support_bits.push_back(set.qubit(so));

  // Polynomial value on each occupation pattern of the support.
  const std::size_t patterns = std::size_t{1} << support_bits.size();
  std::vector<double> value(patterns);
  for (std::size_t t = 0; t < patterns; ++t) {
    std::size_t row = ref_row, col = ref_col;
    for (std::size_t b = 0; b < support_bits.size(); ++b) {
      std::size_t bit = std::size_t{1} << support_bits[b];
      if (t & (std::size_t{1} << b)) {
        row |= bit;
        col |= bit;
      } else {
        row &= ~bit;
        col &= ~bit;
      }
    }
    // divide by the bare generator's entry at the same occupation pattern so
    // that Jordan--Wigner string signs from the spectator orbitals cancel
    const Complex bare = g.coeff(row, col);
    if (std::abs(bare) < 1e-12)
      throw std::runtime_error("reproject_polynomial: bare generator vanishes on pattern");
    Complex ratio = matrix.coeff(row, col) / bare;
    if (std::abs(ratio.imag()) > 1e-9)
      throw std::runtime_error("reproject_polynomial: non-real prefactor ratio");
    value[t] = ratio.real();
  }

  // Moebius inversion: coeff(S) = sum_{T subset of S} (-1)^{|S\T|} value(T).
  std::vector<Monomial> poly;
  for (std::size_t sub = 0; sub < patterns; ++sub) {
    double coeff = 0.0;
    for (std::size_t t = sub;; t = (t - 1) & sub) {
      int parity = std::popcount(sub ^ t);
      coeff += (parity % 2 ? -1.0 : 1.0) * value[t];
      if (t == 0) break;
    }
    long long rounded = std::llround(coeff);
    if (std::abs(coeff - double(rounded)) > 1e-9)
      throw std::runtime_error("reproject_polynomial: non-integer coefficient " +
                               std::to_string(coeff));
    if (rounded == 0) continue;
    Monomial mono;
    mono.coeff = rounded;
    for (std::size_t b = 0; b < support_bits.size(); ++b)
      if (sub & (std::size_t{1} << b)) mono.factors.push_back(support[b]);
    poly.push_back(std::move(mono));
  }
  return poly;
}

std::vector<Combination> parse_combination_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open combination file " + path);
  std::vector<Combination> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected '<name> = ...'");
    Combination combo;
    combo.name = strip_comment(line.substr(0, eq));
    Cursor cur{line};
    cur.pos = eq + 1;
    bool first = true;
    while (cur.peek() != '\0') {
      int sign = 1;
      if (cur.eat('-'))
        sign = -1;
      else if (!cur.eat('+') && !first)
        cur.fail("expected '+' or '-'");
      first = false;
      double coeff = 1.0;
      if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        coeff = double(cur.integer());
        cur.expect('*');
      }
      if (cur.peek() != 'A') cur.fail("expected A<k>");
      ++cur.pos;
      combo.terms.emplace_back(static_cast<int>(cur.integer()), sign * coeff);
    }
    out.push_back(std::move(combo));
  }
  return out;
}

std::vector<IndexList> parse_index_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open index list file " + path);
  std::vector<IndexList> out;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_comment(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw std::runtime_error(path + ": expected '<name>: A.. A..'");
    IndexList lst;
    lst.name = line.substr(0, colon);
    std::istringstream rest(line.substr(colon + 1));
    std::string tok;
    while (rest >> tok) {
      if (tok[0] != 'A') throw std::runtime_error(path + ": expected A<k>, got " + tok);
      lst.indices.push_back(std::stoi(tok.substr(1)));
    }
    out.push_back(std::move(lst));
  }
  return out;
}

}  // namespace spinfact
