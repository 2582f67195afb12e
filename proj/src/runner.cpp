#include "drivesat/runner.hpp"

#include "drivesat/builtin_drivers.hpp"
#include "drivesat/wire.hpp"

#include <chrono>
#include <iomanip>
#include <map>
#include <ostream>
#include <stdexcept>

namespace drivesat {

std::unique_ptr<Driver> make_driver(const std::string &spec, std::uint64_t seed, const pup::Instance *inst,
                                    const pup::Encoding *enc, std::uint32_t root) {
  if (spec.rfind("extern:", 0) == 0)
    return std::make_unique<wire::ExternalDriver>(spec.substr(7));
  if (spec.rfind("pup:", 0) == 0) {
    if (inst == nullptr || enc == nullptr)
      throw std::invalid_argument("driver '" + spec + "' needs a PUP instance");
    return std::make_unique<pup::PupDriver>(*inst, *enc, pup::parse_variant(spec.substr(4)), root);
  }
  return make_builtin_driver(spec, seed);
}

RunReport run(const Formula &f, const RunOptions &opts, const pup::Instance *inst, const pup::Encoding *enc) {
  const auto start = std::chrono::steady_clock::now();
  auto driver = make_driver(opts.driver, opts.seed, inst, enc, opts.root);
  SolverConfig cfg;
  cfg.seed = opts.seed;
  cfg.conflict_budget = opts.conflicts;
  if (opts.timeout_seconds)
    cfg.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                               std::chrono::duration<double>(*opts.timeout_seconds));
  SolveResult r = solve(f, driver.get(), cfg);
  RunReport rep;
  rep.status = r.status;
  rep.model = std::move(r.model);
  rep.stats = r.stats;
  rep.driver = driver ? driver->name() : "default";
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

void print_report(std::ostream &out, const RunReport &r, bool stats, bool wall_time) {
  out << "s " << status_name(r.status) << '\n';
  if (r.model) {
    out << 'v';
    for (Atom a = 1; a <= r.model->num_atoms(); ++a)
      out << ' ' << (r.model->values[a] ? "" : "-") << a;
    out << " 0\n";
  }
  if (!stats)
    return;
  out << "c driver " << r.driver << '\n'
      << "c decisions " << r.stats.decisions << '\n'
      << "c conflicts " << r.stats.conflicts << '\n'
      << "c restarts " << r.stats.restarts << '\n'
      << "c learned " << r.stats.learned << '\n'
      << "c deleted " << r.stats.deleted << '\n'
      << "c propagations " << r.stats.propagations << '\n';
  if (wall_time)
    out << "c time_ms " << std::fixed << std::setprecision(3) << r.wall_ms << '\n';
}

int exit_code(SolveStatus s) {
  switch (s) {
  case SolveStatus::satisfiable:
    return 10;
  case SolveStatus::unsatisfiable:
    return 20;
  case SolveStatus::unknown:
    return 0;
  }
  return 0;
}

std::vector<BenchRow> run_bench(const BenchSpec &spec) {
  std::vector<BenchRow> rows;
  for (std::uint32_t size : spec.sizes) {
    for (std::uint64_t seed : spec.seeds) {
      const std::string label =
          std::string(pup::family_name(spec.family)) + "-" + std::to_string(size) + "-s" + std::to_string(seed);
      std::optional<pup::Instance> inst;
      std::optional<pup::Encoded> enc;
      std::string gen_error;
      try {
        inst = pup::generate(spec.family, size, seed);
        enc = pup::encode(*inst);
      } catch (const std::exception &e) {
        gen_error = e.what();
      }
      for (const auto &d : spec.drivers) {
        BenchRow row;
        row.instance = label;
        row.driver = d;
        row.seed = seed;
        if (!inst) {
          row.status = "ERROR";
          row.error = gen_error;
          rows.push_back(row);
          continue;
        }
        try {
          RunOptions o;
          o.driver = d;
          o.seed = seed;
          o.conflicts = spec.conflicts;
          o.timeout_seconds = spec.timeout_seconds;
          RunReport r = run(enc->formula, o, &*inst, &enc->encoding);
          row.status = std::string(status_name(r.status));
          row.stats = r.stats;
          row.time_ms = r.wall_ms;
          row.valid = r.model && pup::validate(*inst, pup::decode(enc->encoding, *r.model)).empty();
        } catch (const std::exception &e) {
          row.status = "ERROR";
          row.error = e.what();
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_csv(std::ostream &out, const std::vector<BenchRow> &rows) {
  out << "instance,driver,seed,status,decisions,conflicts,restarts,time_ms\n";
  for (const auto &r : rows)
    out << r.instance << ',' << r.driver << ',' << r.seed << ',' << r.status << ',' << r.stats.decisions << ','
        << r.stats.conflicts << ',' << r.stats.restarts << ',' << std::fixed << std::setprecision(3) << r.time_ms
        << '\n';
}

void write_summary(std::ostream &out, const std::vector<BenchRow> &rows) {
  struct Tally {
    std::size_t runs = 0;
    std::size_t solved = 0;
    double time = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Tally> by_driver;
  for (const auto &r : rows) {
    if (!by_driver.count(r.driver))
      order.push_back(r.driver);
    Tally &t = by_driver[r.driver];
    ++t.runs;
    if (r.status == "SATISFIABLE" || r.status == "UNSATISFIABLE") {
      ++t.solved;
      t.time += r.time_ms;
    }
  }
  for (const auto &d : order) {
    const Tally &t = by_driver[d];
    out << d << ": solved " << t.solved << " of " << t.runs << " instances";
    if (t.solved > 0)
      out << " with average time " << std::fixed << std::setprecision(1) << t.time / static_cast<double>(t.solved)
          << " ms";
    out << '\n';
  }
}

} // namespace drivesat
