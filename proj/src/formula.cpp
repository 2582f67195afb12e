#include "drivesat/formula.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace drivesat {

Clause make_clause(std::initializer_list<int> dimacs, ClauseKind kind) {
  std::vector<Literal> lits;
  lits.reserve(dimacs.size());
  for (int v : dimacs)
    lits.push_back(Literal::from_dimacs(v));
  return Clause(std::move(lits), kind);
}

bool normalize_literals(std::vector<Literal> &lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  // After sorting, a literal and its complement are adjacent.
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i].atom() == lits[i - 1].atom())
      return false;
  return true;
}

bool Formula::add_clause(std::vector<Literal> lits, ClauseKind kind) {
  if (!normalize_literals(lits))
    return false;
  for (Literal l : lits)
    num_atoms = std::max(num_atoms, l.atom());
  clauses.emplace_back(std::move(lits), kind);
  return true;
}

bool Formula::add_clause(std::initializer_list<int> dimacs) {
  return add_clause(make_clause(dimacs).literals);
}

ParseError::ParseError(std::size_t line, const std::string &what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool parse_int(std::string_view tok, long long &out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i)
      out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

} // namespace

ParseResult parse_dimacs(std::istream &in) {
  ParseResult result;
  bool have_header = false;
  long long declared_vars = 0;
  long long declared_clauses = 0;
  std::size_t read_clauses = 0;
  std::size_t tautologies = 0;
  std::vector<Literal> current;
  std::string line;
  std::size_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty())
      continue;
    if (toks[0] == "c" || toks[0].front() == 'c')
      continue;
    if (toks[0] == "%") // trailer used by some benchmark archives
      break;
    if (toks[0] == "p") {
      if (have_header)
        throw ParseError(lineno, "duplicate header");
      if (toks.size() != 4 || toks[1] != "cnf" || !parse_int(toks[2], declared_vars) ||
          !parse_int(toks[3], declared_clauses) || declared_vars < 0 || declared_clauses < 0)
        throw ParseError(lineno, "malformed header '" + line + "'");
      have_header = true;
      result.formula.num_atoms = static_cast<std::uint32_t>(declared_vars);
      continue;
    }
    if (!have_header)
      throw ParseError(lineno, "clause data before 'p cnf' header");
    for (auto tok : toks) {
      long long v = 0;
      if (!parse_int(tok, v))
        throw ParseError(lineno, "non-integer token '" + std::string(tok) + "'");
      if (v == 0) {
        ++read_clauses;
        if (!normalize_literals(current))
          ++tautologies;
        else
          result.formula.clauses.emplace_back(std::move(current), ClauseKind::input);
        current.clear();
        continue;
      }
      if (std::llabs(v) > declared_vars)
        throw ParseError(lineno, "literal " + std::string(tok) + " exceeds declared variable count " +
                                     std::to_string(declared_vars));
      current.push_back(Literal::from_dimacs(static_cast<int>(v)));
    }
  }
  if (!have_header)
    throw ParseError(lineno, "missing 'p cnf' header");
  if (!current.empty()) {
    result.warnings.push_back("last clause not terminated by 0");
    ++read_clauses;
    if (normalize_literals(current))
      result.formula.clauses.emplace_back(std::move(current), ClauseKind::input);
    else
      ++tautologies;
  }
  if (static_cast<long long>(read_clauses) != declared_clauses)
    result.warnings.push_back("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                              std::to_string(read_clauses));
  if (tautologies > 0)
    result.warnings.push_back("dropped " + std::to_string(tautologies) + " tautological clause(s)");
  return result;
}

ParseResult parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

ParseResult parse_dimacs_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  return parse_dimacs(in);
}

void render_dimacs(const Formula &f, std::ostream &out) {
  out << "p cnf " << f.num_atoms << ' ' << f.clauses.size() << '\n';
  for (const auto &c : f.clauses) {
    for (Literal l : c.literals)
      out << l.to_dimacs() << ' ';
    out << "0\n";
  }
}

std::string render_dimacs(const Formula &f) {
  std::ostringstream out;
  render_dimacs(f, out);
  return out.str();
}

ModelCheck check_model(const Formula &f, const Model &m) {
  if (m.num_atoms() < f.num_atoms)
    throw std::invalid_argument("model covers " + std::to_string(m.num_atoms()) + " atoms, formula has " +
                                std::to_string(f.num_atoms));
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const auto &c = f.clauses[i];
    bool sat = std::any_of(c.literals.begin(), c.literals.end(), [&](Literal l) { return m.satisfies(l); });
    if (!sat)
      return ModelCheck{false, i, c};
  }
  return {};
}

} // namespace drivesat
