#ifndef DRIVESAT_FORMULA_HPP
#define DRIVESAT_FORMULA_HPP

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace drivesat {

/// Propositional atom, 1-based and dense. Id 0 is never a valid atom.
using Atom = std::uint32_t;

/// A literal packed as 2*atom + negative, so complements differ in the low bit.
class Literal {
public:
  constexpr Literal() = default;
  constexpr Literal(Atom atom, bool negative) : code_(2 * atom + (negative ? 1U : 0U)) {}

  static constexpr Literal positive(Atom atom) { return Literal(atom, false); }
  static constexpr Literal negative(Atom atom) { return Literal(atom, true); }
  static constexpr Literal from_code(std::uint32_t code) {
    Literal l;
    l.code_ = code;
    return l;
  }
  /// DIMACS convention: +v / -v. Zero is not a literal.
  static Literal from_dimacs(int value) {
    return Literal(static_cast<Atom>(std::abs(value)), value < 0);
  }

  [[nodiscard]] constexpr Atom atom() const { return code_ >> 1; }
  [[nodiscard]] constexpr bool is_negative() const { return (code_ & 1U) != 0; }
  [[nodiscard]] constexpr std::uint32_t code() const { return code_; }
  [[nodiscard]] int to_dimacs() const {
    return is_negative() ? -static_cast<int>(atom()) : static_cast<int>(atom());
  }

  constexpr Literal operator~() const { return from_code(code_ ^ 1U); }
  constexpr auto operator<=>(const Literal &) const = default;

private:
  std::uint32_t code_ = 0;
};

enum class ClauseKind : std::uint8_t { input, learned, driver_added };

struct Clause {
  std::vector<Literal> literals;
  ClauseKind kind = ClauseKind::input;

  Clause() = default;
  explicit Clause(std::vector<Literal> lits, ClauseKind k = ClauseKind::input)
      : literals(std::move(lits)), kind(k) {}

  [[nodiscard]] std::size_t size() const { return literals.size(); }
  [[nodiscard]] bool empty() const { return literals.empty(); }
  bool operator==(const Clause &) const = default;
};

/// Builds a clause from signed DIMACS integers (no terminating zero).
Clause make_clause(std::initializer_list<int> dimacs, ClauseKind kind = ClauseKind::input);

/// Sorts and deduplicates `lits`. Returns false when the clause is a
/// tautology (contains a literal and its complement).
bool normalize_literals(std::vector<Literal> &lits);

struct Formula {
  std::uint32_t num_atoms = 0;
  std::vector<Clause> clauses;

  /// Normalizes and appends; tautologies are dropped. Returns true if added.
  bool add_clause(std::vector<Literal> lits, ClauseKind kind = ClauseKind::input);
  bool add_clause(std::initializer_list<int> dimacs);
};

/// Total assignment. Index 0 is unused so that `values[atom]` works directly.
struct Model {
  std::vector<bool> values;

  Model() = default;
  explicit Model(std::uint32_t num_atoms) : values(num_atoms + 1, false) {}

  [[nodiscard]] std::uint32_t num_atoms() const {
    return values.empty() ? 0 : static_cast<std::uint32_t>(values.size() - 1);
  }
  [[nodiscard]] bool value(Atom a) const { return values.at(a); }
  [[nodiscard]] bool satisfies(Literal l) const { return values.at(l.atom()) != l.is_negative(); }
  void set(Atom a, bool v) { values.at(a) = v; }
};

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string &what);
  [[nodiscard]] std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct ParseResult {
  Formula formula;
  std::vector<std::string> warnings;
};

ParseResult parse_dimacs(std::istream &in);
ParseResult parse_dimacs(std::string_view text);
ParseResult parse_dimacs_file(const std::string &path);

void render_dimacs(const Formula &f, std::ostream &out);
std::string render_dimacs(const Formula &f);

struct ModelCheck {
  bool satisfied = true;
  /// Index into `Formula::clauses` of the first violated clause.
  std::optional<std::size_t> violated_index;
  std::optional<Clause> violated;
};

/// Throws std::invalid_argument when the model does not cover every atom.
ModelCheck check_model(const Formula &f, const Model &m);

} // namespace drivesat

template <> struct std::hash<drivesat::Literal> {
  std::size_t operator()(drivesat::Literal l) const noexcept { return l.code(); }
};

#endif
