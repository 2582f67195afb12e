#include "drivesat/builtin_drivers.hpp"
#include "drivesat/engine.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace drivesat;
using namespace drivesat::testing;

namespace {

// Freezes everything so every atom stays choosable.
ScriptedDriver freezing_driver() {
  ScriptedDriver d;
  d.frozen_fn = [](const request::GetAtomsToBeFrozen &r) -> Response {
    return response::Freeze{std::vector<Atom>(r.atoms.begin(), r.atoms.end())};
  };
  return d;
}

Formula free_atoms(std::uint32_t n) {
  Formula f;
  f.num_atoms = n;
  return f;
}

std::vector<int> dimacs(const std::vector<Literal> &ls) {
  std::vector<int> out;
  for (Literal l : ls)
    out.push_back(l.to_dimacs());
  return out;
}

struct Snapshot {
  std::uint32_t level = 0;
  std::vector<int> trail;
  std::vector<std::uint32_t> levels;
};

Snapshot snap(const Interpretation &v) {
  Snapshot s;
  s.level = v.decision_level();
  for (Literal l : v.trail()) {
    s.trail.push_back(l.to_dimacs());
    s.levels.push_back(v.level(l.atom()));
  }
  return s;
}

} // namespace

TEST(PairingTest, LegalityMatrix) {
  Interpretation v;
  std::vector<Atom> atoms{1};
  Request frozen = request::GetAtomsToBeFrozen{atoms};
  Request choice = request::GetChoice{&v};
  EXPECT_NO_THROW(check_pairing(frozen, response::Freeze{}));
  for (Response r : {Response(response::Choice{}), Response(response::Unroll{}), Response(response::Fallback{}),
                     Response(response::AddClause{})}) {
    EXPECT_THROW(check_pairing(frozen, r), ProtocolViolation);
    EXPECT_NO_THROW(check_pairing(choice, r));
  }
  try {
    check_pairing(choice, response::Freeze{});
    FAIL();
  } catch (const ProtocolViolation &e) {
    std::string msg = e.what();
    EXPECT_EQ(msg.rfind("protocol violation: ", 0), 0U);
    EXPECT_NE(msg.find(request_name(choice)), std::string::npos);
    EXPECT_NE(msg.find(response_name(response::Freeze{})), std::string::npos);
  }
}

TEST(ChoiceTest, PositiveCompletesWithoutConflict) {
  auto d = freezing_driver();
  std::vector<Snapshot> seen;
  d.choice_fn = [&](const Interpretation &v) -> Response {
    seen.push_back(snap(v));
    if (seen.size() == 1)
      return response::Choice{{{3, Sign::p}}};
    return response::Fallback{};
  };
  Engine e(4, {}, &d);
  e.set_record_decisions(true);
  auto r = e.run(example_formula());
  ASSERT_EQ(r.status, SolveStatus::satisfiable);
  EXPECT_EQ(seen[0].trail, (std::vector<int>{1, -2}));
  EXPECT_EQ(seen[0].level, 0U);
  ASSERT_FALSE(e.decision_log().empty());
  EXPECT_EQ(e.decision_log()[0], Literal::positive(3));
  EXPECT_EQ(r.stats.conflicts, 0U);
  EXPECT_TRUE(check_model(example_formula(), *r.model).satisfied);
}

TEST(ChoiceTest, AssignedEntriesAreSkipped) {
  auto d = freezing_driver();
  int calls = 0;
  d.choice_fn = [&](const Interpretation &) -> Response {
    if (calls++ == 0)
      return response::Choice{{{1, Sign::p}, {3, Sign::p}}};
    return response::Fallback{};
  };
  Engine e(4, {}, &d);
  e.set_record_decisions(true);
  auto r = e.run(example_formula());
  ASSERT_EQ(r.status, SolveStatus::satisfiable);
  EXPECT_EQ(e.decision_log()[0], Literal::positive(3));
  EXPECT_EQ(r.stats.plan_skipped, 1U);
  EXPECT_EQ(r.stats.plan_decisions, 1U);
}

TEST(ChoiceTest, FreeSignUsesSavedPhaseAndConflicts) {
  auto d = freezing_driver();
  EventLog log;
  d.event_fn = [&](const Event &ev) { log(ev); };
  int calls = 0;
  d.choice_fn = [&](const Interpretation &) -> Response {
    if (calls++ == 0)
      return response::Choice{{{3, Sign::f}}};
    return response::Fallback{};
  };
  Engine e(4, {}, &d);
  e.set_record_decisions(true);
  auto r = e.run(example_formula());
  ASSERT_EQ(r.status, SolveStatus::satisfiable);
  EXPECT_EQ(e.decision_log()[0], Literal::negative(3));
  EXPECT_GE(r.stats.conflicts, 1U);
  auto first_conflict = std::find(log.kinds.begin(), log.kinds.end(), EventKind::conflict) - log.kinds.begin();
  ASSERT_LT(static_cast<std::size_t>(first_conflict), log.kinds.size());
  EXPECT_EQ(log.payloads[first_conflict], std::vector<int>{-3});
  ASSERT_EQ(log.count(EventKind::inco_choice), 1U);
  auto inco = std::find(log.kinds.begin(), log.kinds.end(), EventKind::inco_choice) - log.kinds.begin();
  EXPECT_EQ(log.payloads[inco], std::vector<int>{-3});
  EXPECT_TRUE(r.model->value(3));
}

TEST(ChoiceTest, EliminatedAtomIsViolation) {
  // Only 1 and 2 are frozen; 3 and 4 occur once each and get eliminated.
  Formula f;
  f.num_atoms = 4;
  f.add_clause({1, 2});
  f.add_clause({-1, -2});
  f.add_clause({1, 3});
  f.add_clause({2, 4});
  ScriptedDriver d;
  d.frozen_fn = [](const request::GetAtomsToBeFrozen &) -> Response { return response::Freeze{{1, 2}}; };
  d.choice_fn = [](const Interpretation &v) -> Response {
    for (Atom a = 1; a <= v.num_atoms(); ++a)
      if (v.is_eliminated(a))
        return response::Choice{{{a, Sign::p}}};
    return response::Choice{{{99, Sign::p}}};
  };
  EXPECT_THROW(solve(f, &d), ProtocolViolation);
}

TEST(ChoiceTest, UselessChoicesTripIdleGuard) {
  auto d = freezing_driver();
  d.choice_fn = [](const Interpretation &) -> Response { return response::Choice{{{1, Sign::p}}}; };
  SolverConfig cfg;
  cfg.max_idle_requests = 50;
  EXPECT_THROW(solve(example_formula(), &d, cfg), ProtocolViolation);
}

TEST(UnrollTest, BottomRestartsFromAnyLevel) {
  auto d = freezing_driver();
  EventLog log;
  d.event_fn = [&](const Event &ev) { log(ev); };
  std::vector<Snapshot> seen;
  bool unrolled = false;
  d.choice_fn = [&](const Interpretation &v) -> Response {
    seen.push_back(snap(v));
    if (!unrolled && v.decision_level() == 5) {
      unrolled = true;
      return response::Unroll{};
    }
    if (unrolled)
      return response::Fallback{};
    return response::Choice{{{v.decision_level() + 1, Sign::n}}};
  };
  auto r = solve(free_atoms(8), &d);
  ASSERT_EQ(r.status, SolveStatus::satisfiable);
  ASSERT_GE(seen.size(), 7U);
  EXPECT_EQ(seen[5].level, 5U);
  EXPECT_EQ(seen[6].level, 0U);
  EXPECT_TRUE(seen[6].trail.empty());
  EXPECT_EQ(log.count(EventKind::restart), 1U);
  EXPECT_EQ(log.count(EventKind::unroll_lit), 5U);
  EXPECT_EQ(r.stats.restarts, 1U);
}

TEST(UnrollTest, LiteralTargetGoesBelowItsLevel) {
  auto d = freezing_driver();
  std::vector<Snapshot> seen;
  bool unrolled = false;
  d.choice_fn = [&](const Interpretation &v) -> Response {
    seen.push_back(snap(v));
    if (!unrolled && v.decision_level() == 7) {
      unrolled = true;
      EXPECT_EQ(v.level(3), 3U);
      return response::Unroll{Literal::positive(3)};
    }
    if (unrolled)
      return response::Fallback{};
    return response::Choice{{{v.decision_level() + 1, Sign::p}}};
  };
  auto r = solve(free_atoms(9), &d);
  ASSERT_EQ(r.status, SolveStatus::satisfiable);
  ASSERT_GE(seen.size(), 9U);
  EXPECT_EQ(seen[8].level, 2U);
  EXPECT_EQ(seen[8].trail, (std::vector<int>{1, 2}));
}

TEST(UnrollTest, StepLevelPostcondition) {
  ScriptedDriver d;
  Engine e(5, {}, &d);
  ASSERT_TRUE(e.load(free_atoms(5)));
  for (Atom a = 1; a <= 4; ++a)
    e.decide(Literal::positive(a));
  e.apply_unroll(Literal::positive(2));
  EXPECT_EQ(e.value(Atom{2}), Truth::Undef);
  EXPECT_EQ(e.decision_level(), 1U);
}

TEST(UnrollTest, UndefinedOrLevelZeroTargetsAreViolations) {
  for (int variant = 0; variant < 3; ++variant) {
    auto d = freezing_driver();
    d.choice_fn = [&](const Interpretation &) -> Response {
      if (variant == 0)
        return response::Unroll{Literal::positive(3)}; // undefined
      if (variant == 1)
        return response::Unroll{Literal::positive(1)}; // fixed at level 0
      return response::Unroll{Literal::positive(42)};
    };
    EXPECT_THROW(solve(example_formula(), &d), ProtocolViolation) << variant;
  }
}

TEST(FallbackTest, ZeroIsPermanent) {
  std::mt19937_64 rng(3);
  Formula f = random_kcnf(30, 100, 3, rng);
  FallbackNowDriver d;
  Engine e(f.num_atoms, {}, &d);
  auto r = e.run(f);
  EXPECT_EQ(r.status, SolveStatus::satisfiable);
  EXPECT_GT(r.stats.decisions, 1U);
  EXPECT_EQ(r.stats.requests, 2U);
  EXPECT_TRUE(e.fallback_permanent());
}

TEST(FallbackTest, OneAlternatesAndMatchesDefault) {
  std::mt19937_64 rng(21);
  for (int iter = 0; iter < 10; ++iter) {
    Formula f = random_kcnf(40, 170, 3, rng);
    ScriptedDriver d;
    std::size_t choice_requests = 0;
    d.choice_fn = [&](const Interpretation &) -> Response {
      ++choice_requests;
      return response::Fallback{1, {}, {}, {}};
    };
    SolverConfig cfg;
    cfg.seed = iter;
    Engine with(f.num_atoms, cfg, &d);
    Engine without(f.num_atoms, cfg);
    with.set_record_decisions(true);
    without.set_record_decisions(true);
    auto a = with.run(f);
    auto b = without.run(f);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(with.decision_log(), without.decision_log());
    EXPECT_EQ(choice_requests, a.stats.decisions);
  }
}

TEST(FallbackTest, SignOverrideAndWindow) {
  auto d = freezing_driver();
  std::vector<Snapshot> seen;
  d.choice_fn = [&](const Interpretation &v) -> Response {
    seen.push_back(snap(v));
    if (seen.size() == 1)
      return response::Fallback{2, {{5, 10}}, {}, {{5, Sign::p}}};
    return response::Fallback{};
  };
  Engine e(6, {}, &d);
  e.set_record_decisions(true);
  auto r = e.run(free_atoms(6));
  ASSERT_EQ(r.status, SolveStatus::satisfiable);
  EXPECT_EQ(e.decision_log()[0], Literal::positive(5));
  ASSERT_GE(seen.size(), 2U);
  EXPECT_EQ(seen[1].level, 2U);
  EXPECT_TRUE(r.model->value(5));
}

TEST(FallbackTest, ActivityAndFactorAreApplied) {
  ScriptedDriver d;
  Engine e(3, {}, &d);
  ASSERT_TRUE(e.load(free_atoms(3)));
  e.apply_fallback(response::Fallback{3, {{2, 7}}, {{1, 4}}, {{3, Sign::n}}});
  EXPECT_DOUBLE_EQ(e.activity().activity(2), 7.0);
  EXPECT_DOUBLE_EQ(e.activity().factor(1), 4.0);
  EXPECT_EQ(e.activity().sign_pref(3), Sign::n);
  EXPECT_EQ(e.fallback_remaining(), 3);
  EXPECT_FALSE(e.fallback_permanent());
}

TEST(FallbackTest, MalformedMapsAreViolations) {
  std::vector<response::Fallback> bad{
      {0, {{9, 1}}, {}, {}},
      {0, {}, {{0, 1}}, {}},
      {0, {}, {{1, 0}}, {}},
      {0, {}, {}, {{2, Sign::f}}},
  };
  for (const auto &fb : bad) {
    auto d = freezing_driver();
    d.choice_fn = [&](const Interpretation &) -> Response { return fb; };
    EXPECT_THROW(solve(example_formula(), &d), ProtocolViolation);
  }
}

TEST(AddClauseTest, BottomEndsSearch) {
  auto d = freezing_driver();
  d.choice_fn = [](const Interpretation &) -> Response { return response::AddClause::bottom(); };
  auto r = solve(example_formula(), &d);
  EXPECT_EQ(r.status, SolveStatus::unsatisfiable);
  EXPECT_EQ(r.stats.decisions, 0U);
  EXPECT_EQ(r.stats.conflicts, 0U);
}

TEST(AddClauseTest, SatisfiedClauseLeavesTrail) {
  auto d = freezing_driver();
  std::vector<Snapshot> seen;
  d.choice_fn = [&](const Interpretation &v) -> Response {
    seen.push_back(snap(v));
    if (seen.size() == 1)
      return response::AddClause{{Literal::positive(1), Literal::positive(3)}};
    return response::Fallback{};
  };
  auto r = solve(example_formula(), &d);
  ASSERT_EQ(r.status, SolveStatus::satisfiable);
  ASSERT_GE(seen.size(), 2U);
  EXPECT_EQ(seen[0].trail, seen[1].trail);
  EXPECT_EQ(seen[0].level, seen[1].level);
}

TEST(AddClauseTest, UnitAgainstDecisionBackjumpsToZero) {
  auto d = freezing_driver();
  std::vector<Snapshot> seen;
  d.choice_fn = [&](const Interpretation &v) -> Response {
    seen.push_back(snap(v));
    if (seen.size() == 1)
      return response::Choice{{{1, Sign::p}}};
    if (seen.size() == 2)
      return response::AddClause{{Literal::negative(1)}};
    return response::Fallback{};
  };
  auto r = solve(free_atoms(3), &d);
  ASSERT_EQ(r.status, SolveStatus::satisfiable);
  ASSERT_GE(seen.size(), 3U);
  EXPECT_EQ(seen[1].level, 1U);
  EXPECT_EQ(seen[2].level, 0U);
  EXPECT_EQ(seen[2].trail, std::vector<int>{-1});
  EXPECT_FALSE(r.model->value(1));
}

TEST(AddClauseTest, FalsifiedClauseBecomesUnitAtHighestOpenLevel) {
  auto d = freezing_driver();
  std::vector<Snapshot> seen;
  d.choice_fn = [&](const Interpretation &v) -> Response {
    seen.push_back(snap(v));
    if (seen.size() == 1)
      return response::Choice{{{1, Sign::p}, {2, Sign::p}, {3, Sign::p}}};
    if (seen.size() == 2)
      return response::AddClause{{Literal::negative(1), Literal::negative(2)}};
    return response::Fallback{};
  };
  auto r = solve(free_atoms(4), &d);
  ASSERT_EQ(r.status, SolveStatus::satisfiable);
  ASSERT_GE(seen.size(), 3U);
  EXPECT_EQ(seen[1].level, 3U);
  EXPECT_EQ(seen[2].level, 1U);
  EXPECT_EQ(seen[2].trail, (std::vector<int>{1, -2}));
  EXPECT_EQ(seen[2].levels, (std::vector<std::uint32_t>{1, 1}));
  EXPECT_FALSE(r.model->value(1) && r.model->value(2));
}

TEST(AddClauseTest, ClauseFalseAtLevelZeroIsInconsistent) {
  auto d = freezing_driver();
  d.choice_fn = [](const Interpretation &) -> Response {
    return response::AddClause{{Literal::negative(1), Literal::positive(2)}};
  };
  EXPECT_EQ(solve(example_formula(), &d).status, SolveStatus::unsatisfiable);
}

TEST(AddClauseTest, EliminatedAtomIsViolation) {
  Formula f;
  f.num_atoms = 3;
  f.add_clause({1, 2});
  f.add_clause({-1, -2});
  f.add_clause({2, 3});
  ScriptedDriver d;
  d.frozen_fn = [](const request::GetAtomsToBeFrozen &) -> Response { return response::Freeze{{1, 2}}; };
  d.choice_fn = [](const Interpretation &v) -> Response {
    EXPECT_TRUE(v.is_eliminated(3));
    return response::AddClause{{Literal::positive(3), Literal::positive(1)}};
  };
  EXPECT_THROW(solve(f, &d), ProtocolViolation);
}

// Plan entries are either decided, skipped, cleared or still queued.
TEST(PlanTest, Conservation) {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 40; ++iter) {
    Formula f = random_kcnf(25, 100, 3, rng);
    auto d = freezing_driver();
    std::uint64_t planned = 0;
    d.choice_fn = [&](const Interpretation &v) -> Response {
      response::Choice c;
      std::size_t k = 1 + rng() % 5;
      for (std::size_t i = 0; i < k; ++i)
        c.plan.push_back({1 + static_cast<Atom>(rng() % v.num_atoms()), static_cast<Sign>(rng() % 3)});
      // Always include one undefined atom so the plan makes progress.
      for (Atom a = 1; a <= v.num_atoms(); ++a)
        if (v.is_undef(a)) {
          c.plan.push_back({a, Sign::f});
          break;
        }
      planned += c.plan.size();
      return c;
    };
    Engine e(f.num_atoms, {}, &d);
    auto r = e.run(f);
    ASSERT_NE(r.status, SolveStatus::unknown);
    EXPECT_EQ(planned, r.stats.plan_decisions + r.stats.plan_skipped + r.stats.plan_cleared + e.plan_size());
    EXPECT_EQ(r.stats.plan_decisions, r.stats.decisions);
    if (r.status == SolveStatus::satisfiable) {
      EXPECT_TRUE(check_model(f, *r.model).satisfied);
    } else {
      EXPECT_FALSE(brute_force(f).has_value());
    }
  }
}

TEST(ParityTest, FallbackZeroMatchesDefaultDecisionForDecision) {
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 20; ++iter) {
    Formula f = random_kcnf(60, 255, 3, rng);
    SolverConfig cfg;
    cfg.seed = 1000 + iter;
    FallbackNowDriver d;
    Engine a(f.num_atoms, cfg);
    Engine b(f.num_atoms, cfg, &d);
    a.set_record_decisions(true);
    b.set_record_decisions(true);
    auto ra = a.run(f);
    auto rb = b.run(f);
    EXPECT_EQ(ra.status, rb.status);
    EXPECT_EQ(dimacs(a.decision_log()), dimacs(b.decision_log()));
    EXPECT_EQ(ra.stats.conflicts, rb.stats.conflicts);
  }
}

// Any illegal response aborts with a diagnostic, whatever the search state.
TEST(LegalityFuzzTest, IllegalResponsesAbort) {
  std::mt19937_64 rng(55);
  for (int iter = 0; iter < 200; ++iter) {
    Formula f = random_kcnf(12, 30, 3, rng);
    const int kind = static_cast<int>(rng() % 8);
    const int after = static_cast<int>(rng() % 3);
    ScriptedDriver d;
    d.frozen_fn = [&](const request::GetAtomsToBeFrozen &r) -> Response {
      if (kind == 0)
        return response::Choice{};
      if (kind == 1)
        return response::Freeze{{f.num_atoms + 1}};
      // Freeze half so some atoms may be eliminated.
      std::vector<Atom> half;
      for (Atom a : r.atoms)
        if (a % 2 == 0)
          half.push_back(a);
      return response::Freeze{half};
    };
    int calls = 0;
    d.choice_fn = [&](const Interpretation &v) -> Response {
      auto undef = [&]() -> Atom {
        for (Atom a = 2; a <= v.num_atoms(); a += 2)
          if (v.is_undef(a))
            return a;
        return 0;
      };
      if (calls++ < after && undef() != 0)
        return response::Choice{{{undef(), Sign::n}}};
      switch (kind) {
      case 2: return response::Freeze{};
      case 3: return response::Choice{{{0, Sign::p}}};
      case 4: return response::Choice{{{f.num_atoms + 5, Sign::p}}};
      case 5: return response::Fallback{0, {}, {}, {{f.num_atoms + 1, Sign::p}}};
      case 6: return response::AddClause{{Literal::positive(f.num_atoms + 3)}};
      default: {
        for (Atom a = 1; a <= v.num_atoms(); ++a)
          if (v.is_eliminated(a))
            return response::Choice{{{a, Sign::p}}};
        return response::Unroll{Literal::positive(f.num_atoms + 2)};
      }
      }
    };
    try {
      (void)solve(f, &d);
      // Only legal outcome: the search ended before the driver was asked.
      EXPECT_GE(kind, 2) << "freeze-stage violations must always abort";
      EXPECT_EQ(calls, 0);
    } catch (const ProtocolViolation &e) {
      EXPECT_EQ(std::string(e.what()).rfind("protocol violation: ", 0), 0U);
    }
  }
}

TEST(TrailMirrorTest, SyncAndUnroll) {
  ScriptedDriver d;
  Engine e(4, {}, &d);
  ASSERT_TRUE(e.load(free_atoms(4)));
  TrailMirror m;
  m.reset(4);
  e.decide(Literal::positive(1));
  e.decide(Literal::negative(2));
  auto v = e.view();
  EXPECT_EQ(m.sync(v).size(), 2U);
  EXPECT_EQ(m.sync(v).size(), 0U);
  EXPECT_EQ(m.value(Literal::negative(2)), Truth::True);
  EXPECT_TRUE(m.on_unroll(Literal::negative(2)));
  EXPECT_FALSE(m.on_unroll(Literal::negative(3)));
  EXPECT_EQ(m.value(Atom{2}), Truth::Undef);
  EXPECT_EQ(m.size(), 1U);
}
