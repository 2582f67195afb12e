#ifndef DRIVESAT_ENGINE_HPP
#define DRIVESAT_ENGINE_HPP

#include "drivesat/activity.hpp"
#include "drivesat/driver.hpp"
#include "drivesat/formula.hpp"
#include "drivesat/simplify.hpp"

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drivesat {

enum class SolveStatus : std::uint8_t { satisfiable, unsatisfiable, unknown };
std::string_view status_name(SolveStatus s);

struct SolverConfig {
  /// Restart after luby(i) * luby_base conflicts.
  std::uint64_t luby_base = 64;
  bool restarts = true;
  /// Conflicts between two reductions of the learned clause database.
  std::uint64_t deletion_interval = 2000;
  /// Learned clauses with LBD at most this are never deleted.
  std::uint32_t keep_lbd = 2;
  std::uint64_t seed = 0;
  /// Intersected with the driver's own subscription.
  EventMask event_mask = EventMask::all();
  std::optional<std::uint64_t> conflict_budget;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Local minimization of learned clauses (off: plain first UIP).
  bool minimize = false;
  /// When off, the default heuristic always branches negatively.
  bool phase_saving = true;
  bool simplify = true;
  SimplifyOptions simplify_options;
  ActivityConfig activity;
  double clause_decay = 0.999;
  /// Consecutive GetChoice answers that yield no decision before the driver
  /// is declared stuck.
  std::uint64_t max_idle_requests = 100000;
};

struct Stats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learned = 0;
  std::uint64_t deleted = 0;
  std::uint64_t propagations = 0;
  std::uint64_t requests = 0;
  std::uint64_t plan_decisions = 0;
  std::uint64_t plan_skipped = 0;
  std::uint64_t plan_cleared = 0;
  bool operator==(const Stats &) const = default;
};

struct SolveResult {
  SolveStatus status = SolveStatus::unknown;
  std::optional<Model> model;
  Stats stats;
};

struct ConflictAnalysis {
  /// learned[0] is the asserting literal; learned[1] (if any) has the
  /// backjump level.
  std::vector<Literal> learned;
  std::uint32_t backjump_level = 0;
  std::uint32_t lbd = 0;
};

using ClauseRef = std::uint32_t;

/// i-th element (1-based) of the Luby sequence 1 1 2 1 1 2 4 ...
std::uint64_t luby(std::uint64_t i);

/// CDCL search engine. `run` performs the whole protocol (freeze request,
/// simplification, Search event, search loop). The lower-level operations are
/// public so tests can drive the engine step by step after `load`.
class Engine {
public:
  static constexpr ClauseRef kDecision = 0xFFFFFFFFU;
  static constexpr ClauseRef kUnitReason = 0xFFFFFFFEU;

  /// `driver` may be null: the default heuristic then makes every choice.
  Engine(std::uint32_t num_atoms, SolverConfig cfg = {}, Driver *driver = nullptr);

  SolveResult run(const Formula &f);

  // -- step interface ------------------------------------------------------
  /// Adds clauses at level 0 without simplification. Returns false if the
  /// formula is found inconsistent while loading.
  bool load(const Formula &f);
  bool load(Formula &&f);
  void mark_eliminated(Atom a);

  /// Unit propagation to fixpoint. Returns the falsified clause on conflict.
  std::optional<ClauseRef> propagate();
  void decide(Literal l);
  /// First-UIP analysis. Requires decision_level() >= 1.
  ConflictAnalysis analyze(ClauseRef conflict);
  void backjump(std::uint32_t level);
  /// Stores a learned clause and asserts its first literal. Call after
  /// backjumping to the analysis' level.
  void learn(const ConflictAnalysis &a);

  /// Applies a GetChoice response. Returns false when the response proves the
  /// problem inconsistent (AddClause of the empty clause, or a clause false
  /// at level 0).
  bool apply_unroll(std::optional<Literal> target);
  void apply_fallback(const response::Fallback &fb);
  bool apply_add_clause(std::vector<Literal> literals);
  void apply_choice(const response::Choice &c);
  /// Next literal from the queued plan, skipping assigned atoms.
  std::optional<Literal> next_from_plan();

  // -- queries -------------------------------------------------------------
  [[nodiscard]] std::uint32_t num_atoms() const { return num_atoms_; }
  [[nodiscard]] std::uint32_t decision_level() const { return static_cast<std::uint32_t>(level_start_.size()); }
  [[nodiscard]] Truth value(Atom a) const { return values_[a]; }
  [[nodiscard]] Truth value(Literal l) const {
    Truth t = values_[l.atom()];
    return l.is_negative() ? static_cast<Truth>(-static_cast<int>(t)) : t;
  }
  [[nodiscard]] std::uint32_t level(Atom a) const { return levels_[a]; }
  [[nodiscard]] ClauseRef reason(Atom a) const { return reasons_[a]; }
  [[nodiscard]] std::span<const Literal> trail() const { return trail_; }
  [[nodiscard]] std::span<const Literal> clause_literals(ClauseRef c) const {
    return {arena_.data() + clauses_[c].start, clauses_[c].size};
  }
  [[nodiscard]] ClauseKind clause_kind(ClauseRef c) const { return clauses_[c].kind; }
  [[nodiscard]] bool clause_deleted(ClauseRef c) const { return clauses_[c].deleted; }
  [[nodiscard]] std::size_t clause_count() const { return clauses_.size(); }
  [[nodiscard]] std::uint32_t trail_position(Atom a) const { return positions_[a]; }
  [[nodiscard]] Interpretation view() const;
  [[nodiscard]] const Stats &stats() const { return stats_; }
  [[nodiscard]] const ActivityState &activity() const { return activity_; }
  [[nodiscard]] bool saved_phase_negative(Atom a) const { return saved_negative_[a] != 0; }
  [[nodiscard]] std::size_t plan_size() const { return plan_.size(); }
  [[nodiscard]] bool fallback_permanent() const { return fallback_permanent_; }
  [[nodiscard]] std::int64_t fallback_remaining() const { return fallback_left_; }
  [[nodiscard]] bool all_assigned() const { return assigned_ == active_count_; }
  /// Decision literals in the order they were taken during `run`.
  [[nodiscard]] const std::vector<Literal> &decision_log() const { return decision_log_; }
  void set_record_decisions(bool on) { record_decisions_ = on; }
  /// Model over the engine's atoms (eliminated atoms are left false).
  [[nodiscard]] Model model() const;

private:
  /// Literals live in `arena_`; a deleted clause has size 0.
  struct StoredClause {
    std::uint32_t start = 0;
    std::uint32_t size = 0;
    ClauseKind kind = ClauseKind::input;
    double activity = 0;
    std::uint32_t lbd = 0;
    bool deleted = false;
  };
  struct Watcher {
    ClauseRef cref;
    Literal blocker;
  };
  enum class Step { decided, retry, inconsistent };

  SolveStatus search();
  Step decide_next();
  Literal default_decision();
  Literal signed_choice(Atom a, Sign s) const;

  void enqueue(Literal l, ClauseRef reason);
  ClauseRef store_clause(std::vector<Literal> lits, ClauseKind kind);
  void attach(ClauseRef c);
  void restart();
  void reduce_db();
  bool locked(ClauseRef c) const;
  void bump_clause(ClauseRef c);
  void clear_plan();
  void validate_atom(Atom a, std::string_view what) const;
  [[nodiscard]] bool budget_exhausted() const;

  template <class E> void emit(EventKind kind, E &&ev) {
    if (driver_ != nullptr && mask_.has(kind))
      driver_->on_event(Event(std::forward<E>(ev)));
  }
  [[nodiscard]] bool wants(EventKind kind) const { return driver_ != nullptr && mask_.has(kind); }

  std::uint32_t num_atoms_;
  SolverConfig cfg_;
  Driver *driver_;
  EventMask mask_;

  std::vector<Truth> values_;
  std::vector<std::uint32_t> levels_;
  std::vector<ClauseRef> reasons_;
  std::vector<std::uint32_t> positions_;
  std::vector<std::uint8_t> eliminated_;
  std::vector<std::uint8_t> saved_negative_;
  std::vector<std::uint8_t> seen_;
  std::vector<Literal> trail_;
  std::vector<std::uint32_t> level_start_;
  std::size_t qhead_ = 0;
  std::size_t assigned_ = 0;
  std::size_t active_count_ = 0;

  void reserve_for(const Formula &f);
  bool load_clause(std::vector<Literal> lits, ClauseKind kind);

  std::span<Literal> lits_of(ClauseRef c) { return {arena_.data() + clauses_[c].start, clauses_[c].size}; }

  std::vector<StoredClause> clauses_;
  std::vector<Literal> arena_;
  std::vector<ClauseRef> free_slots_;
  std::vector<std::vector<Watcher>> watches_;
  double clause_inc_ = 1.0;

  ActivityState activity_;
  std::deque<PlanEntry> plan_;
  bool fallback_permanent_ = false;
  std::int64_t fallback_left_ = 0;
  bool just_decided_ = false;

  std::uint64_t restart_index_ = 1;
  std::uint64_t conflicts_since_restart_ = 0;

  bool record_decisions_ = false;
  std::vector<Literal> decision_log_;
  Stats stats_;
};

/// Convenience wrapper: `Engine(f.num_atoms, cfg, driver).run(f)`.
SolveResult solve(const Formula &f, Driver *driver = nullptr, const SolverConfig &cfg = {});

} // namespace drivesat

#endif
