#ifndef DRIVESAT_RUNNER_HPP
#define DRIVESAT_RUNNER_HPP
// Shared plumbing for the command line: picking drivers by name, running one
// solve into a report, and running benchmark suites.

#include "drivesat/engine.hpp"
#include "drivesat/pup.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace drivesat {

struct RunOptions {
  std::string driver = "default";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> conflicts;
  /// Wall-clock limit, checked between conflicts.
  std::optional<double> timeout_seconds;
  /// Root zone for the pup drivers.
  std::uint32_t root = 0;
};

struct RunReport {
  SolveStatus status = SolveStatus::unknown;
  std::optional<Model> model;
  Stats stats;
  double wall_ms = 0;
  std::string driver;
};

/// Every name make_builtin_driver accepts, plus "extern:<command>" and
/// "pup:<variant>" (the latter only with an instance). Null means the
/// solver's own heuristic.
std::unique_ptr<Driver> make_driver(const std::string &spec, std::uint64_t seed, const pup::Instance *inst = nullptr,
                                    const pup::Encoding *enc = nullptr, std::uint32_t root = 0);

RunReport run(const Formula &f, const RunOptions &opts, const pup::Instance *inst = nullptr,
              const pup::Encoding *enc = nullptr);

/// `s` line, `v` line when SAT, then `c` statistics lines when asked.
void print_report(std::ostream &out, const RunReport &r, bool stats, bool wall_time = true);

/// 10 for SAT, 20 for UNSAT, 0 otherwise.
int exit_code(SolveStatus s);

struct BenchSpec {
  pup::Family family = pup::Family::double_chain;
  std::vector<std::uint32_t> sizes;
  std::vector<std::uint64_t> seeds{0};
  std::vector<std::string> drivers{"default", "pup:pred"};
  std::optional<std::uint64_t> conflicts;
  std::optional<double> timeout_seconds;
};

struct BenchRow {
  std::string instance;
  std::string driver;
  std::uint64_t seed = 0;
  /// SATISFIABLE / UNSATISFIABLE / UNKNOWN, or ERROR when the run failed.
  std::string status;
  Stats stats;
  double time_ms = 0;
  /// Model checked against the instance (SAT rows only).
  bool valid = false;
  std::string error;
};

/// One row per (instance, driver); a failing row is recorded and the suite
/// goes on.
std::vector<BenchRow> run_bench(const BenchSpec &spec);

/// instance,driver,seed,status,decisions,conflicts,restarts,time_ms
void write_csv(std::ostream &out, const std::vector<BenchRow> &rows);
/// Per driver: solved count and mean time of the solved runs.
void write_summary(std::ostream &out, const std::vector<BenchRow> &rows);

} // namespace drivesat

#endif
