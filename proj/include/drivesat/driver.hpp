#ifndef DRIVESAT_DRIVER_HPP
#define DRIVESAT_DRIVER_HPP

// The solver/driver contract. The solver notifies the driver through events
// and asks it for directions through two synchronous requests; every request
// gets exactly one response before the solver proceeds.

#include "drivesat/formula.hpp"

#include <bitset>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace drivesat {

enum class Truth : std::int8_t { False = -1, Undef = 0, True = 1 };

/// Read-only view of the solver's partial interpretation, valid only for the
/// duration of the call it is passed to.
class Interpretation {
public:
  Interpretation() = default;
  Interpretation(std::span<const Truth> values, std::span<const std::uint32_t> levels,
                 std::span<const Literal> trail, std::span<const std::uint8_t> eliminated,
                 std::uint32_t decision_level)
      : values_(values), levels_(levels), trail_(trail), eliminated_(eliminated),
        decision_level_(decision_level) {}

  [[nodiscard]] std::uint32_t num_atoms() const {
    return values_.empty() ? 0 : static_cast<std::uint32_t>(values_.size() - 1);
  }
  [[nodiscard]] Truth value(Atom a) const { return values_[a]; }
  [[nodiscard]] Truth value(Literal l) const {
    Truth t = values_[l.atom()];
    return l.is_negative() ? static_cast<Truth>(-static_cast<int>(t)) : t;
  }
  [[nodiscard]] bool is_undef(Atom a) const { return values_[a] == Truth::Undef; }
  /// Decision level of an assigned atom; meaningless when unassigned.
  [[nodiscard]] std::uint32_t level(Atom a) const { return levels_[a]; }
  [[nodiscard]] bool is_eliminated(Atom a) const { return eliminated_[a] != 0; }
  [[nodiscard]] std::uint32_t decision_level() const { return decision_level_; }
  /// Assigned literals in assignment order.
  [[nodiscard]] std::span<const Literal> trail() const { return trail_; }

private:
  std::span<const Truth> values_;
  std::span<const std::uint32_t> levels_;
  std::span<const Literal> trail_;
  std::span<const std::uint8_t> eliminated_;
  std::uint32_t decision_level_ = 0;
};

// ---------------------------------------------------------------------------
// Events (solver -> driver)

enum class EventKind : std::uint8_t {
  search,
  inco_choice,
  conflict,
  learn_clause,
  lit_in_conflict,
  deletion,
  restart,
  unroll_lit,
};
inline constexpr std::size_t kNumEventKinds = 8;

class EventMask {
public:
  constexpr EventMask() = default;
  EventMask(std::initializer_list<EventKind> kinds) {
    for (auto k : kinds)
      set(k);
  }
  static EventMask all() {
    EventMask m;
    m.bits_.set();
    return m;
  }
  static EventMask none() { return {}; }

  void set(EventKind k, bool on = true) { bits_.set(static_cast<std::size_t>(k), on); }
  [[nodiscard]] bool has(EventKind k) const { return bits_.test(static_cast<std::size_t>(k)); }
  [[nodiscard]] bool empty() const { return bits_.none(); }
  EventMask operator|(EventMask o) const {
    EventMask m;
    m.bits_ = bits_ | o.bits_;
    return m;
  }
  EventMask operator&(EventMask o) const {
    EventMask m;
    m.bits_ = bits_ & o.bits_;
    return m;
  }
  bool operator==(const EventMask &) const = default;

private:
  std::bitset<kNumEventKinds> bits_;
};

namespace event {
/// Search begins; `clauses` and `active_atoms` describe the simplified problem.
struct Search {
  std::span<const Clause> clauses;
  std::span<const Atom> active_atoms;
  std::uint32_t num_atoms = 0;
};
struct IncoChoice {
  Literal literal;
};
/// `decision` is empty for a conflict at level 0.
struct Conflict {
  std::optional<Literal> decision;
};
struct LearnClause {
  std::span<const Literal> literals;
};
struct LitInConflict {
  Literal literal;
};
struct Deletion {
  std::span<const Literal> literals;
};
struct Restart {};
struct UnrollLit {
  Literal literal;
};
} // namespace event

using Event = std::variant<event::Search, event::IncoChoice, event::Conflict, event::LearnClause,
                           event::LitInConflict, event::Deletion, event::Restart, event::UnrollLit>;

inline EventKind kind_of(const Event &e) { return static_cast<EventKind>(e.index()); }
std::string_view event_name(EventKind kind);

// ---------------------------------------------------------------------------
// Requests (solver -> driver, synchronous)

namespace request {
struct GetAtomsToBeFrozen {
  std::span<const Atom> atoms;
};
struct GetChoice {
  const Interpretation *interpretation = nullptr;
};
} // namespace request

using Request = std::variant<request::GetAtomsToBeFrozen, request::GetChoice>;
std::string_view request_name(const Request &r);

// ---------------------------------------------------------------------------
// Responses (driver -> solver)

/// Sign of a planned choice: positive, negative, or left to the solver.
enum class Sign : std::uint8_t { p, n, f };

struct PlanEntry {
  Atom atom = 0;
  Sign sign = Sign::f;
  bool operator==(const PlanEntry &) const = default;
};

namespace response {
struct Freeze {
  std::vector<Atom> atoms;
  bool operator==(const Freeze &) const = default;
};
struct Choice {
  std::vector<PlanEntry> plan;
  bool operator==(const Choice &) const = default;
};
/// An empty target is the restart marker.
struct Unroll {
  std::optional<Literal> target;
  bool operator==(const Unroll &) const = default;
};
/// Hand the next `n` choices to the default heuristic (all of them if n <= 0).
struct Fallback {
  std::int64_t n = 0;
  std::vector<std::pair<Atom, std::uint64_t>> initial_activity;
  std::vector<std::pair<Atom, std::uint64_t>> factor;
  std::vector<std::pair<Atom, Sign>> sign;
  bool operator==(const Fallback &) const = default;
};
/// An empty literal list is the clause {bottom} and ends the search.
struct AddClause {
  std::vector<Literal> literals;
  static AddClause bottom() { return {}; }
  bool operator==(const AddClause &) const = default;
};
} // namespace response

using Response =
    std::variant<response::Freeze, response::Choice, response::Unroll, response::Fallback, response::AddClause>;
std::string_view response_name(const Response &r);

/// Raised whenever a driver breaks the contract; the search is abandoned.
class ProtocolViolation : public std::runtime_error {
public:
  explicit ProtocolViolation(const std::string &what) : std::runtime_error("protocol violation: " + what) {}
};

/// Throws ProtocolViolation unless `rsp` is a legal reply to `req`.
void check_pairing(const Request &req, const Response &rsp);

// ---------------------------------------------------------------------------

class Driver {
public:
  virtual ~Driver() = default;

  /// Event kinds this driver wants. Events outside the mask are never built.
  [[nodiscard]] virtual EventMask subscription() const = 0;
  virtual void on_event(const Event &e) = 0;
  virtual Response answer(const Request &r) = 0;
  [[nodiscard]] virtual std::string name() const = 0;
};

/// Mirror of the solver trail kept from GetChoice views and UnrollLit events.
/// Entries are pushed in trail order, so an unrolled literal the mirror knows
/// about is always its most recent entry.
class TrailMirror {
public:
  void reset(std::uint32_t num_atoms);

  /// Appends the trail suffix the mirror has not seen yet; returns it.
  std::span<const Literal> sync(const Interpretation &view);
  /// Returns true when the literal was known to the mirror (and is now gone).
  bool on_unroll(Literal l);

  [[nodiscard]] Truth value(Atom a) const { return a < values_.size() ? values_[a] : Truth::Undef; }
  [[nodiscard]] Truth value(Literal l) const {
    Truth t = value(l.atom());
    return l.is_negative() ? static_cast<Truth>(-static_cast<int>(t)) : t;
  }
  [[nodiscard]] std::span<const Literal> literals() const { return stack_; }
  [[nodiscard]] std::size_t size() const { return stack_.size(); }

private:
  std::vector<Truth> values_;
  std::vector<Literal> stack_;
};

} // namespace drivesat

#endif
