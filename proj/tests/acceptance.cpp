// Acceptance run: one [PASS]/[FAIL] line per criterion. Thresholds are the
// constants right below; nothing here is tuned to the measured results.
#include "drivesat/builtin_drivers.hpp"
#include "drivesat/engine.hpp"
#include "drivesat/pup.hpp"
#include "drivesat/runner.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

using namespace drivesat;
using namespace drivesat::testing;
using Clock = std::chrono::steady_clock;

namespace {

// Oracle equivalence
constexpr int kOracleInstances = 510;
constexpr std::uint32_t kOracleMaxVars = 20;
constexpr double kOracleSeconds = 60.0;
// First UIP
constexpr std::size_t kUipConflicts = 1000;
// Pigeonhole
constexpr std::uint32_t kPhpMaxHoles = 50;
constexpr double kPhpMillis = 10.0;
constexpr int kPhpRepeats = 5; // median of this many runs per size
constexpr std::uint64_t kPhp98MinConflicts = 1000;
// Fallback parity
constexpr int kParityInstances = 20;
// Protocol legality
constexpr int kLegalityRuns = 400;
// PUP
constexpr std::uint64_t kPupBudget = 50000;
constexpr double kPupSeconds = 300.0;

int failures = 0;

void report(bool ok, const std::string &name, const std::string &detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << std::endl;
  failures += ok ? 0 : 1;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// Bitmask enumeration; independent of the engine.
bool enumerate_sat(const Formula &f) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> masks; // (positive, negative)
  for (const auto &c : f.clauses) {
    std::uint32_t p = 0;
    std::uint32_t n = 0;
    for (Literal l : c.literals)
      (l.is_negative() ? n : p) |= 1U << (l.atom() - 1);
    masks.emplace_back(p, n);
  }
  for (std::uint32_t bits = 0; bits < (1U << f.num_atoms); ++bits) {
    bool ok = true;
    for (auto [p, n] : masks)
      if ((bits & p) == 0 && (~bits & n) == 0) {
        ok = false;
        break;
      }
    if (ok)
      return true;
  }
  return false;
}

void oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  const double ratios[] = {3.0, 4.26, 5.0};
  int agree = 0;
  int models_ok = 0;
  int sat = 0;
  for (int i = 0; i < kOracleInstances; ++i) {
    const auto vars = static_cast<std::uint32_t>(5 + rng() % (kOracleMaxVars - 4));
    const auto clauses = static_cast<std::uint32_t>(ratios[i % 3] * vars + 0.5);
    Formula f = random_kcnf(vars, clauses, 3, rng);
    SolverConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(i);
    auto r = solve(f, nullptr, cfg);
    const bool truth = enumerate_sat(f);
    if ((r.status == SolveStatus::satisfiable) == truth && r.status != SolveStatus::unknown)
      ++agree;
    if (r.status == SolveStatus::satisfiable) {
      ++sat;
      models_ok += check_model(f, *r.model).satisfied ? 1 : 0;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << agree << "/" << kOracleInstances << " statuses match enumeration, " << models_ok << "/" << sat
    << " models verified, " << secs << " s (limit " << kOracleSeconds << " s)";
  report(agree == kOracleInstances && models_ok == sat && secs < kOracleSeconds, "oracle equivalence", d.str());
}

void example_fidelity() {
  auto sat = solve(example_formula());
  const bool solved = sat.status == SolveStatus::satisfiable && check_model(example_formula(), *sat.model).satisfied;

  Engine e(4);
  e.load(example_formula());
  const bool no_conflict = !e.propagate().has_value();
  std::vector<int> trail;
  for (Literal l : e.trail())
    trail.push_back(l.to_dimacs());
  const bool exact = no_conflict && trail == std::vector<int>{1, -2} && e.decision_level() == 0;

  e.decide(Literal::negative(3));
  const bool conflict = e.propagate().has_value();

  std::ostringstream d;
  d << "example formula " << (solved ? "SAT with verified model" : "NOT solved") << ", level-0 trail {";
  for (std::size_t i = 0; i < trail.size(); ++i)
    d << (i ? "," : "") << trail[i];
  d << "}, deciding -c " << (conflict ? "conflicts" : "does not conflict");
  report(solved && exact && conflict, "example fidelity", d.str());
}

void first_uip() {
  std::mt19937_64 rng(77);
  std::size_t checked = 0;
  std::size_t asserting = 0;
  std::size_t replayed = 0;
  while (checked < kUipConflicts) {
    Formula f = random_kcnf(40, 170, 3, rng);
    Engine e(f.num_atoms);
    if (!e.load(f))
      continue;
    for (int step = 0; step < 3000; ++step) {
      auto c = e.propagate();
      if (c) {
        if (e.decision_level() == 0)
          break;
        auto oracle = resolution_replay(e, *c);
        auto a = e.analyze(*c);
        std::size_t at_current = 0;
        for (Literal l : a.learned)
          at_current += e.level(l.atom()) == e.decision_level() ? 1 : 0;
        ++checked;
        asserting += at_current == 1 ? 1 : 0;
        replayed += std::set<Literal>(a.learned.begin(), a.learned.end()) == oracle ? 1 : 0;
        e.backjump(a.backjump_level);
        e.learn(a);
        continue;
      }
      std::vector<Atom> free;
      for (Atom x = 1; x <= e.num_atoms(); ++x)
        if (e.value(x) == Truth::Undef)
          free.push_back(x);
      if (free.empty())
        break;
      e.decide(Literal(free[rng() % free.size()], (rng() & 1U) != 0));
    }
  }
  std::ostringstream d;
  d << checked << " conflicts: " << asserting << " with one current-level literal, " << replayed
    << " re-derived exactly by resolution replay";
  report(asserting == checked && replayed == checked, "first UIP", d.str());
}

void pigeonhole() {
  std::uint32_t good = 0;
  double worst_ms = 0;
  for (std::uint32_t n = 1; n <= kPhpMaxHoles; ++n) {
    Formula f = pigeonhole_formula(n + 1, n);
    std::vector<double> times;
    bool clean = true;
    for (int rep = 0; rep < kPhpRepeats; ++rep) {
      PigeonholeDriver d;
      const auto t0 = Clock::now();
      auto r = solve(f, &d);
      times.push_back(seconds_since(t0) * 1000);
      clean = clean && r.status == SolveStatus::unsatisfiable && r.stats.conflicts == 0 && r.stats.decisions == 0;
    }
    std::nth_element(times.begin(), times.begin() + kPhpRepeats / 2, times.end());
    const double ms = times[kPhpRepeats / 2];
    worst_ms = std::max(worst_ms, ms);
    if (clean && ms < kPhpMillis)
      ++good;
  }
  auto base = solve(pigeonhole_formula(9, 8));
  std::ostringstream d;
  d << good << "/" << kPhpMaxHoles << " PHP(n+1,n) UNSAT with 0 conflicts and 0 decisions under " << kPhpMillis
    << " ms median of " << kPhpRepeats << " (slowest " << worst_ms
    << " ms); default driver on PHP(9,8): " << status_name(base.status) << " after " << base.stats.conflicts << " conflicts (need > " << kPhp98MinConflicts << ")";
  report(good == kPhpMaxHoles && base.status == SolveStatus::unsatisfiable &&
             base.stats.conflicts > kPhp98MinConflicts,
         "pigeonhole driver", d.str());
}

void fallback_parity() {
  std::mt19937_64 rng(99);
  int same = 0;
  for (int i = 0; i < kParityInstances; ++i) {
    Formula f = random_kcnf(50, 213, 3, rng);
    SolverConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(1000 + i);
    Engine a(f.num_atoms, cfg, nullptr);
    a.set_record_decisions(true);
    auto ra = a.run(f);
    FallbackNowDriver d;
    Engine b(f.num_atoms, cfg, &d);
    b.set_record_decisions(true);
    auto rb = b.run(f);
    if (ra.status == rb.status && a.decision_log() == b.decision_log() && !a.decision_log().empty())
      ++same;
  }
  report(same == kParityInstances, "fallback parity",
         std::to_string(same) + "/" + std::to_string(kParityInstances) + " decision sequences identical");
}

// Each run injects one illegal response; the only acceptable outcome is a
// ProtocolViolation. Runs whose illegal response could not be delivered (no
// request, or nothing eliminated to point at) are counted separately.
void protocol_legality() {
  std::mt19937_64 rng(4242);
  int aborted = 0;
  int exercised = 0;
  int other_errors = 0;
  int kinds_seen[11] = {};
  for (int run = 0; run < kLegalityRuns; ++run) {
    Formula f = random_kcnf(16, 40, 3, rng);
    const int kind = static_cast<int>(rng() % 11);
    const int after = static_cast<int>(rng() % 3);
    const Atom n = f.num_atoms;
    bool injected = false;
    ScriptedDriver d;
    d.frozen_fn = [&](const request::GetAtomsToBeFrozen &r) -> Response {
      if (kind == 0) {
        injected = true;
        return response::Choice{{{1, Sign::p}}};
      }
      if (kind == 1) {
        injected = true;
        return response::Freeze{{n + 1}};
      }
      std::vector<Atom> half;
      for (Atom a : r.atoms)
        if (a % 2 == 0)
          half.push_back(a);
      return response::Freeze{half};
    };
    int calls = 0;
    d.choice_fn = [&](const Interpretation &v) -> Response {
      Atom frozen_undef = 0;
      for (Atom a = 2; a <= v.num_atoms() && frozen_undef == 0; a += 2)
        if (v.is_undef(a))
          frozen_undef = a;
      Atom eliminated = 0;
      for (Atom a = 1; a <= v.num_atoms() && eliminated == 0; ++a)
        if (v.is_eliminated(a))
          eliminated = a;
      if (calls++ < after && frozen_undef != 0)
        return response::Choice{{{frozen_undef, Sign::n}}};
      injected = true;
      switch (kind) {
      case 2: return response::Freeze{};
      case 3: return response::Choice{{{0, Sign::p}}};
      case 4: return response::Choice{{{n + 5, Sign::p}}};
      case 5: return response::Fallback{0, {{n + 1, 3}}, {}, {}};
      case 6: return response::AddClause{{Literal::positive(n + 3)}};
      case 7: return response::Unroll{Literal::positive(n + 2)};
      case 8:
        if (eliminated == 0)
          break;
        return response::Choice{{{eliminated, Sign::p}}};
      case 9:
        if (eliminated == 0)
          break;
        return response::AddClause{{Literal::positive(eliminated)}};
      default:
        if (frozen_undef == 0)
          break;
        return response::Unroll{Literal::positive(frozen_undef)}; // not assigned
      }
      injected = false;
      return response::Fallback{};
    };
    try {
      (void)solve(f, &d);
    } catch (const ProtocolViolation &e) {
      if (std::string(e.what()).rfind("protocol violation: ", 0) == 0)
        ++aborted;
    } catch (...) {
      ++other_errors;
    }
    if (injected) {
      ++exercised;
      ++kinds_seen[kind];
    }
  }
  int kinds = 0;
  for (int k : kinds_seen)
    kinds += k > 0 ? 1 : 0;
  std::ostringstream d;
  d << aborted << "/" << exercised << " illegal responses aborted with a protocol violation (" << kinds
    << "/11 kinds exercised, " << kLegalityRuns - exercised << " runs ended before the injection point, "
    << other_errors << " other errors)";
  report(exercised > kLegalityRuns / 2 && aborted == exercised && other_errors == 0 && kinds == 11,
         "protocol legality", d.str());
}

void pup_end_to_end() {
  const auto t0 = Clock::now();
  struct Suite {
    pup::Family family;
    std::vector<std::uint32_t> sizes;
  };
  std::vector<Suite> suites{{pup::Family::double_chain, {}}, {pup::Family::triple_chain, {}}, {pup::Family::grid, {2, 3, 4}}};
  for (std::uint32_t n = 1; n <= 16; ++n)
    suites[0].sizes.push_back(n);
  for (std::uint32_t n = 1; n <= 12; ++n)
    suites[1].sizes.push_back(n);
  int sat_models = 0;
  int valid_models = 0;
  int solved_default = 0;
  int solved_pred = 0;
  int instances = 0;
  int errors = 0;
  for (const auto &s : suites) {
    BenchSpec spec;
    spec.family = s.family;
    spec.sizes = s.sizes;
    spec.seeds = {0, 1, 2};
    spec.drivers = {"default", "pup:pred", "pup:quickpup", "pup:quickpup-star"};
    spec.conflicts = kPupBudget;
    for (const auto &row : run_bench(spec)) {
      if (row.status == "ERROR") {
        ++errors;
        continue;
      }
      const bool solved = row.status != "UNKNOWN";
      if (row.driver == "default") {
        ++instances;
        solved_default += solved ? 1 : 0;
      }
      if (row.driver == "pup:pred")
        solved_pred += solved ? 1 : 0;
      if (row.status == "SATISFIABLE") {
        ++sat_models;
        valid_models += row.valid ? 1 : 0;
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << instances << " instances up to grid(4): " << valid_models << "/" << sat_models
    << " SAT models decode to valid placements; solved with " << kPupBudget << " conflicts: pred " << solved_pred
    << ", default " << solved_default << "; " << errors << " errors; " << secs << " s (limit " << kPupSeconds << " s)";
  report(errors == 0 && valid_models == sat_models && solved_pred >= solved_default && secs < kPupSeconds,
         "PUP end-to-end", d.str());
}

void determinism() {
  std::mt19937_64 rng(8080);
  std::vector<Formula> inputs;
  for (int i = 0; i < 4; ++i)
    inputs.push_back(random_kcnf(70, 298, 3, rng));
  inputs.push_back(pigeonhole_formula(6, 5));
  const std::vector<std::string> drivers{"default", "minisat", "fallback", "pigeonhole", "random",
                                         "extern:'" + std::string(DRIVESAT_DRIVER_TOOL) + "' minisat"};
  int same = 0;
  int total = 0;
  auto render = [](const RunReport &r) {
    std::ostringstream out;
    print_report(out, r, true, false);
    return out.str();
  };
  for (const auto &f : inputs) {
    for (const auto &d : drivers) {
      for (std::uint64_t seed : {1ULL, 2ULL}) {
        RunOptions o;
        o.driver = d;
        o.seed = seed;
        o.conflicts = 20000;
        ++total;
        same += render(run(f, o)) == render(run(f, o)) ? 1 : 0;
      }
    }
  }
  pup::Instance inst = pup::generate(pup::Family::grid, 3, 7);
  pup::Encoded e = pup::encode(inst);
  for (const std::string d : {"pup:pred", "pup:quickpup", "pup:quickpup-star"}) {
    RunOptions o;
    o.driver = d;
    o.seed = 3;
    ++total;
    same += render(run(e.formula, o, &inst, &e.encoding)) == render(run(e.formula, o, &inst, &e.encoding)) ? 1 : 0;
  }
  report(same == total, "determinism",
         std::to_string(same) + "/" + std::to_string(total) + " repeated runs gave byte-identical reports");
}

} // namespace

int main() {
  oracle_equivalence();
  example_fidelity();
  first_uip();
  pigeonhole();
  fallback_parity();
  protocol_legality();
  pup_end_to_end();
  determinism();
  return failures == 0 ? 0 : 1;
}
