#ifndef DRIVESAT_BUILTIN_DRIVERS_HPP
#define DRIVESAT_BUILTIN_DRIVERS_HPP

#include "drivesat/activity.hpp"
#include "drivesat/driver.hpp"

#include <memory>
#include <optional>
#include <random>
#include <string>

namespace drivesat {

/// Choice([(at, s)]) for the undefined atom with the highest activity;
/// s is the atom's sign preference, negative by default. Throws
/// std::logic_error when every atom is assigned.
Response minisat_choose(ActivityState &state, const Interpretation &view);

/// The MiniSAT heuristic written as a driver: bumps on LearnClause, keeps its
/// order in sync through UnrollLit, answers every GetChoice with one choice.
class MinisatDriver : public Driver {
public:
  explicit MinisatDriver(std::uint64_t seed = 0, ActivityConfig cfg = {});

  [[nodiscard]] EventMask subscription() const override;
  void on_event(const Event &e) override;
  Response answer(const Request &r) override;
  [[nodiscard]] std::string name() const override { return "minisat"; }

  [[nodiscard]] const ActivityState &state() const { return state_; }

private:
  std::uint64_t seed_;
  ActivityConfig cfg_;
  ActivityState state_;
};

/// Hands everything to the solver's default heuristic at the first choice.
class FallbackNowDriver : public Driver {
public:
  [[nodiscard]] EventMask subscription() const override { return EventMask::none(); }
  void on_event(const Event &) override {}
  Response answer(const Request &r) override;
  [[nodiscard]] std::string name() const override { return "fallback"; }
};

/// Pigeons and holes recovered from an anonymous CNF: atom (i-1)*m + j means
/// "pigeon i sits in hole j" (1-based i, j).
struct PigeonholeView {
  std::uint32_t pigeons = 0;
  std::uint32_t holes = 0;
  [[nodiscard]] Atom var(std::uint32_t pigeon, std::uint32_t hole) const { return (pigeon - 1) * holes + hole; }
  [[nodiscard]] std::pair<std::uint32_t, std::uint32_t> cell(Atom a) const {
    return {(a - 1) / holes + 1, (a - 1) % holes + 1};
  }
};

/// Recognizes the at-least-one-hole rows and at-most-one-pigeon-per-hole
/// pairs over a pigeons x holes grid. Extra clauses are tolerated.
std::optional<PigeonholeView> recognize_pigeonhole(std::span<const Clause> clauses, std::uint32_t num_atoms);

/// Standard CNF for n pigeons and m holes.
Formula pigeonhole_formula(std::uint32_t pigeons, std::uint32_t holes);

/// Freezes every atom; at the first choice answers AddClause({bottom}) when
/// there are more pigeons than holes, Fallback(0) otherwise (or when the
/// formula is not recognized).
class PigeonholeDriver : public Driver {
public:
  [[nodiscard]] EventMask subscription() const override { return EventMask{EventKind::search}; }
  void on_event(const Event &e) override;
  Response answer(const Request &r) override;
  [[nodiscard]] std::string name() const override { return "pigeonhole"; }

  [[nodiscard]] const std::optional<PigeonholeView> &recognized() const { return view_; }

private:
  std::optional<PigeonholeView> view_;
};

/// Replays a fixed plan in one Choice, then hands over with Fallback(0).
/// Freezes every atom the plan mentions.
class PlanDriver : public Driver {
public:
  explicit PlanDriver(std::vector<PlanEntry> plan) : plan_(std::move(plan)) {}
  [[nodiscard]] EventMask subscription() const override { return EventMask::none(); }
  void on_event(const Event &) override {}
  Response answer(const Request &r) override;
  [[nodiscard]] std::string name() const override { return "plan"; }

private:
  std::vector<PlanEntry> plan_;
  bool sent_ = false;
};

/// Parses "3p,1n,4f" into a plan.
std::vector<PlanEntry> parse_plan(std::string_view text);

/// Seeded mix of every GetChoice response kind (short plans, unrolls,
/// restarts, one-step fallbacks), used to exercise transports. Freezes all
/// atoms, subscribes to all events and hands over for good after `patience`
/// requests.
class RandomDriver : public Driver {
public:
  explicit RandomDriver(std::uint64_t seed = 0, std::uint64_t patience = 300) : rng_(seed), patience_(patience) {}
  [[nodiscard]] EventMask subscription() const override { return EventMask::all(); }
  void on_event(const Event &e) override;
  Response answer(const Request &r) override;
  [[nodiscard]] std::string name() const override { return "random"; }

  [[nodiscard]] std::uint64_t events_seen() const { return events_; }

private:
  std::mt19937_64 rng_;
  std::uint64_t patience_;
  std::uint64_t requests_ = 0;
  std::uint64_t events_ = 0;
};

/// Drivers selectable by name: "minisat", "pigeonhole", "fallback", "random",
/// "plan:<entries>". Returns null for "default" (the solver's own heuristic)
/// and throws std::invalid_argument for anything else.
std::unique_ptr<Driver> make_builtin_driver(const std::string &name, std::uint64_t seed = 0);

} // namespace drivesat

#endif
