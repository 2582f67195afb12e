#include "drivesat/engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace drivesat {

std::string_view status_name(SolveStatus s) {
  switch (s) {
  case SolveStatus::satisfiable: return "SATISFIABLE";
  case SolveStatus::unsatisfiable: return "UNSATISFIABLE";
  case SolveStatus::unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::uint64_t luby(std::uint64_t i) {
  // Find the finite subsequence containing index i, then its position in it.
  std::uint64_t size = 1;
  std::uint64_t seq = 0;
  std::uint64_t x = i - 1;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::uint64_t{1} << seq;
}

Engine::Engine(std::uint32_t num_atoms, SolverConfig cfg, Driver *driver)
    : num_atoms_(num_atoms), cfg_(std::move(cfg)), driver_(driver),
      mask_(driver != nullptr ? driver->subscription() & cfg_.event_mask : EventMask::none()),
      values_(num_atoms + 1, Truth::Undef), levels_(num_atoms + 1, 0), reasons_(num_atoms + 1, kDecision),
      positions_(num_atoms + 1, 0), eliminated_(num_atoms + 1, 0), saved_negative_(num_atoms + 1, 1),
      seen_(num_atoms + 1, 0), active_count_(num_atoms), watches_(2 * (num_atoms + 1)),
      activity_(num_atoms, cfg_.seed, cfg_.activity) {
  if (cfg_.luby_base < 1 || cfg_.deletion_interval < 1)
    throw std::invalid_argument("luby_base and deletion_interval must be at least 1");
  trail_.reserve(num_atoms);
  for (Atom a = 1; a <= num_atoms; ++a)
    activity_.insert(a);
}

SolveResult solve(const Formula &f, Driver *driver, const SolverConfig &cfg) {
  Engine engine(f.num_atoms, cfg, driver);
  return engine.run(f);
}

// ---------------------------------------------------------------------------

SolveResult Engine::run(const Formula &f) {
  SolveResult res;
  if (budget_exhausted()) {
    res.stats = stats_;
    return res;
  }

  std::vector<Atom> frozen;
  if (driver_ != nullptr) {
    std::vector<Atom> atoms(num_atoms_);
    std::iota(atoms.begin(), atoms.end(), Atom{1});
    Request req = request::GetAtomsToBeFrozen{atoms};
    Response rsp = driver_->answer(req);
    ++stats_.requests;
    check_pairing(req, rsp);
    frozen = std::get<response::Freeze>(rsp).atoms;
    for (Atom a : frozen)
      if (a == 0 || a > num_atoms_)
        throw ProtocolViolation("Freeze names unknown atom " + std::to_string(a));
  }

  SimplifyOptions sopts = cfg_.simplify_options;
  if (!cfg_.simplify)
    sopts.eliminate = false;
  SimplifiedFormula simp = simplify(f, frozen, sopts);
  if (simp.inconsistent) {
    res.status = SolveStatus::unsatisfiable;
    res.stats = stats_;
    return res;
  }
  for (Atom a = 1; a <= num_atoms_; ++a) {
    if (simp.status[a] == AtomStatus::eliminated)
      mark_eliminated(a);
    else if (simp.status[a] == AtomStatus::fixed_true)
      enqueue(Literal::positive(a), kUnitReason);
    else if (simp.status[a] == AtomStatus::fixed_false)
      enqueue(Literal::negative(a), kUnitReason);
  }
  // The driver sees the clauses before the engine takes them over.
  if (wants(EventKind::search)) {
    auto active = simp.active_atoms();
    emit(EventKind::search, event::Search{simp.formula.clauses, active, num_atoms_});
  }
  if (!load(std::move(simp.formula))) {
    res.status = SolveStatus::unsatisfiable;
    res.stats = stats_;
    return res;
  }

  res.status = search();
  if (res.status == SolveStatus::satisfiable) {
    Model m = model();
    simp.extend_model(m);
    res.model = std::move(m);
  }
  res.stats = stats_;
  return res;
}

void Engine::reserve_for(const Formula &f) {
  clauses_.reserve(clauses_.size() + f.clauses.size());
  std::size_t total = 0;
  for (const auto &c : f.clauses)
    total += c.literals.size();
  arena_.reserve(arena_.size() + total);
  std::vector<std::uint32_t> watched(watches_.size(), 0);
  for (const auto &c : f.clauses)
    for (std::size_t i = 0; i < std::min<std::size_t>(2, c.literals.size()); ++i)
      if (c.literals[i].code() < watched.size())
        ++watched[c.literals[i].code()];
  for (std::size_t k = 0; k < watches_.size(); ++k)
    watches_[k].reserve(watches_[k].size() + watched[k]);
}

bool Engine::load_clause(std::vector<Literal> lits, ClauseKind kind) {
  if (!normalize_literals(lits))
    return true;
  if (lits.empty())
    return false;
  if (lits.size() == 1) {
    Truth t = value(lits[0]);
    if (t == Truth::False)
      return false;
    if (t == Truth::Undef)
      enqueue(lits[0], kUnitReason);
    return true;
  }
  attach(store_clause(std::move(lits), kind));
  return true;
}

bool Engine::load(const Formula &f) {
  reserve_for(f);
  for (const auto &c : f.clauses)
    if (!load_clause(c.literals, c.kind))
      return false;
  return true;
}

bool Engine::load(Formula &&f) {
  reserve_for(f);
  for (auto &c : f.clauses)
    if (!load_clause(std::move(c.literals), c.kind))
      return false;
  return true;
}

void Engine::mark_eliminated(Atom a) {
  if (eliminated_[a] != 0)
    return;
  eliminated_[a] = 1;
  --active_count_;
}

// ---------------------------------------------------------------------------

SolveStatus Engine::search() {
  for (;;) {
    auto conflict = propagate();
    if (conflict) {
      ++stats_.conflicts;
      if (decision_level() == 0) {
        emit(EventKind::conflict, event::Conflict{std::nullopt});
        return SolveStatus::unsatisfiable;
      }
      Literal decision = trail_[level_start_.back()];
      emit(EventKind::conflict, event::Conflict{decision});
      if (just_decided_)
        emit(EventKind::inco_choice, event::IncoChoice{decision});
      just_decided_ = false;

      ConflictAnalysis a = analyze(*conflict);
      clear_plan();
      backjump(a.backjump_level);
      learn(a);
      clause_inc_ /= cfg_.clause_decay;
      ++conflicts_since_restart_;

      if (budget_exhausted())
        return SolveStatus::unknown;
      if (cfg_.restarts && conflicts_since_restart_ >= luby(restart_index_) * cfg_.luby_base)
        restart();
      if (stats_.conflicts % cfg_.deletion_interval == 0)
        reduce_db();
      continue;
    }
    just_decided_ = false;
    if (all_assigned())
      return SolveStatus::satisfiable;
    if (cfg_.deadline && (stats_.decisions & 1023U) == 0 && std::chrono::steady_clock::now() >= *cfg_.deadline)
      return SolveStatus::unknown;

    switch (decide_next()) {
    case Step::decided: just_decided_ = true; break;
    case Step::retry: break;
    case Step::inconsistent: return SolveStatus::unsatisfiable;
    }
  }
}

Engine::Step Engine::decide_next() {
  std::uint64_t idle = 0;
  for (;;) {
    if (driver_ == nullptr || fallback_permanent_ || fallback_left_ > 0) {
      if (fallback_left_ > 0)
        --fallback_left_;
      decide(default_decision());
      return Step::decided;
    }
    if (auto l = next_from_plan()) {
      decide(*l);
      return Step::decided;
    }
    if (++idle > cfg_.max_idle_requests)
      throw ProtocolViolation(driver_->name() + " answered " + std::to_string(idle - 1) +
                              " consecutive GetChoice requests without a usable choice");

    Interpretation v = view();
    Request req = request::GetChoice{&v};
    Response rsp = driver_->answer(req);
    ++stats_.requests;
    check_pairing(req, rsp);

    if (auto *c = std::get_if<response::Choice>(&rsp)) {
      apply_choice(*c);
    } else if (auto *u = std::get_if<response::Unroll>(&rsp)) {
      apply_unroll(u->target);
      return Step::retry;
    } else if (auto *fb = std::get_if<response::Fallback>(&rsp)) {
      apply_fallback(*fb);
    } else if (auto *ac = std::get_if<response::AddClause>(&rsp)) {
      return apply_add_clause(std::move(ac->literals)) ? Step::retry : Step::inconsistent;
    }
  }
}

Literal Engine::default_decision() {
  auto atom = activity_.pop_best([this](Atom a) { return values_[a] == Truth::Undef && eliminated_[a] == 0; });
  if (!atom)
    throw std::logic_error("default heuristic found no undefined atom");
  if (auto pref = activity_.sign_pref(*atom))
    return Literal(*atom, *pref == Sign::n);
  return Literal(*atom, saved_negative_[*atom] != 0);
}

Literal Engine::signed_choice(Atom a, Sign s) const {
  switch (s) {
  case Sign::p: return Literal::positive(a);
  case Sign::n: return Literal::negative(a);
  case Sign::f: break;
  }
  return Literal(a, saved_negative_[a] != 0);
}

void Engine::validate_atom(Atom a, std::string_view what) const {
  if (a == 0 || a > num_atoms_)
    throw ProtocolViolation(std::string(what) + " names unknown atom " + std::to_string(a));
  if (eliminated_[a] != 0)
    throw ProtocolViolation(std::string(what) + " names atom " + std::to_string(a) +
                            ", which was eliminated during simplification (freeze it first)");
}

void Engine::apply_choice(const response::Choice &c) {
  for (const auto &e : c.plan)
    validate_atom(e.atom, "Choice");
  clear_plan();
  plan_.assign(c.plan.begin(), c.plan.end());
}

std::optional<Literal> Engine::next_from_plan() {
  while (!plan_.empty()) {
    PlanEntry e = plan_.front();
    plan_.pop_front();
    if (values_[e.atom] != Truth::Undef) {
      ++stats_.plan_skipped;
      continue;
    }
    ++stats_.plan_decisions;
    return signed_choice(e.atom, e.sign);
  }
  return std::nullopt;
}

bool Engine::apply_unroll(std::optional<Literal> target) {
  if (!target) {
    if (decision_level() > 0)
      backjump(0);
    emit(EventKind::restart, event::Restart{});
    ++stats_.restarts;
    conflicts_since_restart_ = 0;
    clear_plan();
    return true;
  }
  Atom a = target->atom();
  if (a == 0 || a > num_atoms_)
    throw ProtocolViolation("Unroll names unknown atom " + std::to_string(a));
  if (values_[a] == Truth::Undef)
    throw ProtocolViolation("Unroll target " + std::to_string(target->to_dimacs()) + " is already undefined");
  if (levels_[a] == 0)
    throw ProtocolViolation("Unroll target " + std::to_string(target->to_dimacs()) +
                            " is fixed at level 0 and cannot be made undefined");
  backjump(levels_[a] - 1);
  clear_plan();
  return true;
}

void Engine::apply_fallback(const response::Fallback &fb) {
  auto check = [this](Atom a) {
    if (a == 0 || a > num_atoms_)
      throw ProtocolViolation("Fallback names unknown atom " + std::to_string(a));
  };
  for (const auto &[a, v] : fb.initial_activity)
    check(a);
  for (const auto &[a, v] : fb.factor) {
    check(a);
    if (v == 0)
      throw ProtocolViolation("Fallback amplifying factor for atom " + std::to_string(a) + " must be positive");
  }
  for (const auto &[a, s] : fb.sign) {
    check(a);
    if (s == Sign::f)
      throw ProtocolViolation("Fallback sign priority for atom " + std::to_string(a) + " must be p or n");
  }
  for (const auto &[a, v] : fb.initial_activity)
    activity_.set_activity(a, static_cast<double>(v));
  for (const auto &[a, v] : fb.factor)
    activity_.set_factor(a, static_cast<double>(v));
  for (const auto &[a, s] : fb.sign)
    activity_.set_sign_pref(a, s);
  if (fb.n <= 0) {
    fallback_permanent_ = true;
  } else {
    fallback_left_ = fb.n;
  }
}

bool Engine::apply_add_clause(std::vector<Literal> lits) {
  for (Literal l : lits)
    validate_atom(l.atom(), "AddClause");
  clear_plan();
  if (lits.empty())
    return false;
  if (!normalize_literals(lits))
    return true;

  // Backjump until the clause is no longer falsified.
  for (;;) {
    std::uint32_t max_false = 0;
    bool any_open = false;
    for (Literal l : lits) {
      if (value(l) == Truth::False)
        max_false = std::max(max_false, levels_[l.atom()]);
      else
        any_open = true;
    }
    if (any_open)
      break;
    if (max_false == 0)
      return false;
    backjump(max_false - 1);
  }

  if (lits.size() == 1) {
    Literal x = lits[0];
    if (value(x) == Truth::True && levels_[x.atom()] == 0)
      return true;
    if (decision_level() > 0)
      backjump(0);
    if (value(x) == Truth::Undef)
      enqueue(x, kUnitReason);
    return true;
  }

  auto rank = [this](Literal l) {
    // true < undef < false; false literals by decreasing level.
    Truth t = value(l);
    if (t == Truth::True)
      return std::pair<int, std::int64_t>{0, levels_[l.atom()]};
    if (t == Truth::Undef)
      return std::pair<int, std::int64_t>{1, 0};
    return std::pair<int, std::int64_t>{2, -static_cast<std::int64_t>(levels_[l.atom()])};
  };
  std::stable_sort(lits.begin(), lits.end(), [&](Literal x, Literal y) { return rank(x) < rank(y); });
  bool unit = value(lits[0]) == Truth::Undef && value(lits[1]) == Truth::False;
  ClauseRef c = store_clause(std::move(lits), ClauseKind::driver_added);
  attach(c);
  if (unit)
    enqueue(lits_of(c)[0], c);
  return true;
}

void Engine::clear_plan() {
  stats_.plan_cleared += plan_.size();
  plan_.clear();
}

bool Engine::budget_exhausted() const {
  if (cfg_.conflict_budget && stats_.conflicts >= *cfg_.conflict_budget)
    return true;
  return cfg_.deadline && std::chrono::steady_clock::now() >= *cfg_.deadline;
}

// ---------------------------------------------------------------------------

void Engine::enqueue(Literal l, ClauseRef reason) {
  Atom a = l.atom();
  values_[a] = l.is_negative() ? Truth::False : Truth::True;
  levels_[a] = decision_level();
  reasons_[a] = reason;
  positions_[a] = static_cast<std::uint32_t>(trail_.size());
  trail_.push_back(l);
  ++assigned_;
}

void Engine::decide(Literal l) {
  if (values_[l.atom()] != Truth::Undef)
    throw std::logic_error("decision on an assigned atom");
  level_start_.push_back(static_cast<std::uint32_t>(trail_.size()));
  enqueue(l, kDecision);
  ++stats_.decisions;
  if (record_decisions_)
    decision_log_.push_back(l);
}

std::optional<ClauseRef> Engine::propagate() {
  while (qhead_ < trail_.size()) {
    Literal p = trail_[qhead_++];
    ++stats_.propagations;
    Literal false_lit = ~p;
    auto &ws = watches_[false_lit.code()];
    std::size_t i = 0;
    std::size_t j = 0;
    const std::size_t n = ws.size();
    while (i < n) {
      Watcher w = ws[i++];
      if (value(w.blocker) == Truth::True) {
        ws[j++] = w;
        continue;
      }
      auto lits = lits_of(w.cref);
      if (lits[0] == false_lit)
        std::swap(lits[0], lits[1]);
      Literal first = lits[0];
      Watcher kept{w.cref, first};
      if (first != w.blocker && value(first) == Truth::True) {
        ws[j++] = kept;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (value(lits[k]) != Truth::False) {
          std::swap(lits[1], lits[k]);
          watches_[lits[1].code()].push_back(kept);
          moved = true;
          break;
        }
      }
      if (moved)
        continue;
      ws[j++] = kept;
      if (value(first) == Truth::False) {
        while (i < n)
          ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.cref;
      }
      enqueue(first, w.cref);
    }
    ws.resize(j);
  }
  return std::nullopt;
}

ConflictAnalysis Engine::analyze(ClauseRef conflict) {
  const std::uint32_t current = decision_level();
  if (current == 0)
    throw std::logic_error("conflict analysis at decision level 0");

  ConflictAnalysis out;
  out.learned.push_back(Literal()); // asserting literal goes here
  std::uint32_t open = 0;
  ClauseRef cref = conflict;
  std::optional<Literal> pivot;
  std::size_t index = trail_.size();

  for (;;) {
    if (clauses_[cref].kind == ClauseKind::learned)
      bump_clause(cref);
    const auto lits = lits_of(cref);
    for (std::size_t k = pivot ? 1 : 0; k < lits.size(); ++k) {
      Literal q = lits[k];
      Atom a = q.atom();
      if (seen_[a] != 0 || levels_[a] == 0)
        continue;
      seen_[a] = 1;
      emit(EventKind::lit_in_conflict, event::LitInConflict{q});
      if (cfg_.activity.bump_on_lit_in_conflict)
        activity_.bump(a);
      if (levels_[a] == current)
        ++open;
      else
        out.learned.push_back(q);
    }
    while (seen_[trail_[index - 1].atom()] == 0)
      --index;
    pivot = trail_[--index];
    seen_[pivot->atom()] = 0;
    if (--open == 0)
      break;
    cref = reasons_[pivot->atom()];
  }
  out.learned[0] = ~*pivot;

  if (cfg_.minimize) {
    auto keep = [&](Literal q) {
      ClauseRef r = reasons_[q.atom()];
      if (r == kDecision || r == kUnitReason)
        return true;
      const auto rl = lits_of(r);
      return std::any_of(rl.begin() + 1, rl.end(),
                         [&](Literal x) { return seen_[x.atom()] == 0 && levels_[x.atom()] > 0; });
    };
    std::vector<Literal> all(out.learned.begin() + 1, out.learned.end());
    std::vector<Literal> kept{out.learned[0]};
    for (Literal q : all)
      if (keep(q))
        kept.push_back(q);
    for (Literal q : all)
      seen_[q.atom()] = 0;
    out.learned = std::move(kept);
  } else {
    for (std::size_t k = 1; k < out.learned.size(); ++k)
      seen_[out.learned[k].atom()] = 0;
  }

  if (out.learned.size() > 1) {
    std::size_t best = 1;
    for (std::size_t k = 2; k < out.learned.size(); ++k)
      if (levels_[out.learned[k].atom()] > levels_[out.learned[best].atom()])
        best = k;
    std::swap(out.learned[1], out.learned[best]);
    out.backjump_level = levels_[out.learned[1].atom()];
  }
  std::vector<std::uint32_t> lv;
  lv.reserve(out.learned.size());
  for (Literal l : out.learned)
    lv.push_back(levels_[l.atom()]);
  std::sort(lv.begin(), lv.end());
  out.lbd = static_cast<std::uint32_t>(std::unique(lv.begin(), lv.end()) - lv.begin());

  activity_.on_learn(out.learned);
  emit(EventKind::learn_clause, event::LearnClause{out.learned});
  return out;
}

void Engine::backjump(std::uint32_t level) {
  if (level >= decision_level())
    throw std::logic_error("backjump target " + std::to_string(level) + " is not below the current level " +
                           std::to_string(decision_level()));
  const std::size_t target = level_start_[level];
  const bool notify = wants(EventKind::unroll_lit);
  while (trail_.size() > target) {
    Literal l = trail_.back();
    trail_.pop_back();
    Atom a = l.atom();
    values_[a] = Truth::Undef;
    reasons_[a] = kDecision;
    if (cfg_.phase_saving)
      saved_negative_[a] = l.is_negative() ? 1 : 0;
    --assigned_;
    activity_.insert(a);
    if (notify)
      driver_->on_event(Event(event::UnrollLit{l}));
  }
  level_start_.resize(level);
  qhead_ = std::min(qhead_, trail_.size());
}

void Engine::learn(const ConflictAnalysis &a) {
  ++stats_.learned;
  if (a.learned.size() == 1) {
    enqueue(a.learned[0], kUnitReason);
    return;
  }
  ClauseRef c = store_clause(a.learned, ClauseKind::learned);
  clauses_[c].lbd = a.lbd;
  attach(c);
  bump_clause(c);
  enqueue(a.learned[0], c);
}

void Engine::restart() {
  if (decision_level() > 0)
    backjump(0);
  emit(EventKind::restart, event::Restart{});
  ++stats_.restarts;
  ++restart_index_;
  conflicts_since_restart_ = 0;
  clear_plan();
}

ClauseRef Engine::store_clause(std::vector<Literal> lits, ClauseKind kind) {
  StoredClause sc;
  sc.start = static_cast<std::uint32_t>(arena_.size());
  sc.size = static_cast<std::uint32_t>(lits.size());
  sc.kind = kind;
  arena_.insert(arena_.end(), lits.begin(), lits.end());
  if (!free_slots_.empty()) {
    ClauseRef c = free_slots_.back();
    free_slots_.pop_back();
    clauses_[c] = std::move(sc);
    return c;
  }
  clauses_.push_back(std::move(sc));
  return static_cast<ClauseRef>(clauses_.size() - 1);
}

void Engine::attach(ClauseRef c) {
  const auto lits = lits_of(c);
  watches_[lits[0].code()].push_back({c, lits[1]});
  watches_[lits[1].code()].push_back({c, lits[0]});
}

void Engine::bump_clause(ClauseRef c) {
  clauses_[c].activity += clause_inc_;
  if (clauses_[c].activity > 1e20) {
    for (auto &sc : clauses_)
      sc.activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

bool Engine::locked(ClauseRef c) const {
  Literal first = clause_literals(c)[0];
  return values_[first.atom()] != Truth::Undef && reasons_[first.atom()] == c && value(first) == Truth::True;
}

void Engine::reduce_db() {
  std::vector<ClauseRef> candidates;
  for (ClauseRef c = 0; c < clauses_.size(); ++c) {
    const auto &sc = clauses_[c];
    if (sc.deleted || sc.kind != ClauseKind::learned || sc.lbd <= cfg_.keep_lbd || locked(c))
      continue;
    candidates.push_back(c);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [this](ClauseRef x, ClauseRef y) { return clauses_[x].activity < clauses_[y].activity; });
  candidates.resize(candidates.size() / 2);
  if (candidates.empty())
    return;
  for (ClauseRef c : candidates) {
    auto &sc = clauses_[c];
    emit(EventKind::deletion, event::Deletion{lits_of(c)});
    sc.deleted = true;
    ++stats_.deleted;
  }
  for (auto &ws : watches_)
    std::erase_if(ws, [this](const Watcher &w) { return clauses_[w.cref].deleted; });
  for (ClauseRef c : candidates) {
    clauses_[c].size = 0;
    free_slots_.push_back(c);
  }
  // Slide the surviving literals down over the freed ones.
  std::vector<ClauseRef> order;
  for (ClauseRef c = 0; c < clauses_.size(); ++c)
    if (clauses_[c].size > 0)
      order.push_back(c);
  std::sort(order.begin(), order.end(), [this](ClauseRef x, ClauseRef y) { return clauses_[x].start < clauses_[y].start; });
  std::uint32_t top = 0;
  for (ClauseRef c : order) {
    auto &sc = clauses_[c];
    std::copy(arena_.begin() + sc.start, arena_.begin() + sc.start + sc.size, arena_.begin() + top);
    sc.start = top;
    top += sc.size;
  }
  arena_.resize(top);
}

Interpretation Engine::view() const {
  return Interpretation(values_, levels_, trail_, eliminated_, decision_level());
}

Model Engine::model() const {
  Model m(num_atoms_);
  for (Atom a = 1; a <= num_atoms_; ++a)
    m.set(a, values_[a] == Truth::True);
  return m;
}

} // namespace drivesat
