// Test-only helpers: independent oracles and scripted drivers. Nothing here
// calls into the engine's search code paths it is used to check.
#ifndef DRIVESAT_TESTS_SUPPORT_HPP
#define DRIVESAT_TESTS_SUPPORT_HPP

#include "drivesat/driver.hpp"
#include "drivesat/engine.hpp"
#include "drivesat/formula.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace drivesat::testing {

/// Small satisfiable fixture: {a,b,-c},{a},{-b},{c,d},{c,-d}
/// with a..d mapped to 1..4.
inline Formula example_formula() {
  Formula f;
  f.num_atoms = 4;
  f.add_clause({1, 2, -3});
  f.add_clause({1});
  f.add_clause({-2});
  f.add_clause({3, 4});
  f.add_clause({3, -4});
  return f;
}

inline Formula random_kcnf(std::uint32_t vars, std::uint32_t clauses, std::uint32_t k, std::mt19937_64 &rng) {
  Formula f;
  f.num_atoms = vars;
  std::uniform_int_distribution<std::uint32_t> pick(1, vars);
  std::bernoulli_distribution neg(0.5);
  while (f.clauses.size() < clauses) {
    std::vector<Literal> lits;
    std::set<Atom> used;
    while (lits.size() < k) {
      Atom a = pick(rng);
      if (used.insert(a).second)
        lits.push_back(Literal(a, neg(rng)));
    }
    f.add_clause(std::move(lits));
  }
  return f;
}

/// Exhaustive search over all 2^n assignments (n <= 24).
inline std::optional<Model> brute_force(const Formula &f) {
  const std::uint32_t n = f.num_atoms;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    bool ok = true;
    for (const auto &c : f.clauses) {
      bool sat = false;
      for (Literal l : c.literals) {
        bool v = ((bits >> (l.atom() - 1)) & 1U) != 0;
        if (v != l.is_negative()) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) {
      Model m(n);
      for (Atom a = 1; a <= n; ++a)
        m.set(a, ((bits >> (a - 1)) & 1U) != 0);
      return m;
    }
  }
  return std::nullopt;
}

/// Re-derives the first-UIP clause by explicit resolution over reason clauses:
/// starting from the conflict clause, resolve away the current-level literal
/// assigned last until exactly one current-level literal remains. Level-0
/// literals are dropped. Returns the literal set.
inline std::set<Literal> resolution_replay(const Engine &e, ClauseRef conflict) {
  const std::uint32_t current = e.decision_level();
  std::set<Literal> c;
  auto add = [&](Literal l) {
    if (e.level(l.atom()) > 0)
      c.insert(l);
  };
  for (Literal l : e.clause_literals(conflict))
    add(l);
  for (;;) {
    std::vector<Literal> at_current;
    for (Literal l : c)
      if (e.level(l.atom()) == current)
        at_current.push_back(l);
    if (at_current.size() <= 1)
      return c;
    Literal latest = *std::max_element(at_current.begin(), at_current.end(), [&](Literal x, Literal y) {
      return e.trail_position(x.atom()) < e.trail_position(y.atom());
    });
    ClauseRef r = e.reason(latest.atom());
    if (r == Engine::kDecision || r == Engine::kUnitReason)
      throw std::logic_error("resolution replay hit a literal without reason clause");
    c.erase(latest);
    for (Literal l : e.clause_literals(r))
      if (l != ~latest)
        add(l);
  }
}

/// Driver assembled from lambdas. Unset handlers freeze nothing and fall back.
struct ScriptedDriver : Driver {
  EventMask mask = EventMask::all();
  std::function<void(const Event &)> event_fn;
  std::function<Response(const request::GetAtomsToBeFrozen &)> frozen_fn;
  std::function<Response(const Interpretation &)> choice_fn;
  std::string label = "scripted";

  [[nodiscard]] EventMask subscription() const override { return mask; }
  void on_event(const Event &e) override {
    if (event_fn)
      event_fn(e);
  }
  Response answer(const Request &r) override {
    if (const auto *fr = std::get_if<request::GetAtomsToBeFrozen>(&r))
      return frozen_fn ? frozen_fn(*fr) : Response(response::Freeze{});
    const auto &view = *std::get<request::GetChoice>(r).interpretation;
    return choice_fn ? choice_fn(view) : Response(response::Fallback{});
  }
  [[nodiscard]] std::string name() const override { return label; }
};

/// Records event kinds (and literal payloads where present) of every event.
struct EventLog {
  std::vector<EventKind> kinds;
  std::vector<std::vector<int>> payloads;

  void operator()(const Event &e) {
    kinds.push_back(kind_of(e));
    std::vector<int> p;
    std::visit(
        [&](const auto &ev) {
          using T = std::decay_t<decltype(ev)>;
          if constexpr (std::is_same_v<T, event::IncoChoice> || std::is_same_v<T, event::LitInConflict> ||
                        std::is_same_v<T, event::UnrollLit>) {
            p.push_back(ev.literal.to_dimacs());
          } else if constexpr (std::is_same_v<T, event::Conflict>) {
            p.push_back(ev.decision ? ev.decision->to_dimacs() : 0);
          } else if constexpr (std::is_same_v<T, event::LearnClause> || std::is_same_v<T, event::Deletion>) {
            for (Literal l : ev.literals)
              p.push_back(l.to_dimacs());
          }
        },
        e);
    payloads.push_back(std::move(p));
  }
  [[nodiscard]] std::size_t count(EventKind k) const { return std::count(kinds.begin(), kinds.end(), k); }
};

} // namespace drivesat::testing

#endif
