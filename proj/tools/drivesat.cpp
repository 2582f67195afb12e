// drivesat: solve DIMACS files with a chosen driver, work with PUP instances,
// run benchmark suites.
#include "drivesat/pup.hpp"
#include "drivesat/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace drivesat;

namespace {

pup::Instance load_instance(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return pup::read_instance(in);
}

// "2..4", "2-4" or "2,3,5"
template <class T> std::vector<T> parse_list(const std::string &text) {
  std::vector<T> out;
  auto range = text.find("..");
  auto dash = text.find('-');
  if (range != std::string::npos || (dash != std::string::npos && dash > 0)) {
    const auto cut = range != std::string::npos ? range : dash;
    const T lo = static_cast<T>(std::stoull(text.substr(0, cut)));
    const T hi = static_cast<T>(std::stoull(text.substr(cut + (range != std::string::npos ? 2 : 1))));
    for (T v = lo; v <= hi; ++v)
      out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(static_cast<T>(std::stoull(item)));
  return out;
}

struct SolveFlags {
  std::string file;
  RunOptions opts;
  std::uint64_t conflicts = 0;
  double timeout = 0;
  bool stats = false;
};

void add_solve_flags(CLI::App *cmd, SolveFlags &f) {
  cmd->add_option("--driver", f.opts.driver,
                  "default | minisat | pigeonhole | fallback | random | plan:<..> | extern:<cmd> | "
                  "pup:{quickpup|quickpup-star|pred}");
  cmd->add_option("--seed", f.opts.seed);
  cmd->add_option("--conflicts", f.conflicts, "Conflict budget");
  cmd->add_option("--timeout", f.timeout, "Seconds");
  cmd->add_option("--root", f.opts.root, "Root zone index (pup drivers)");
  cmd->add_flag("--stats", f.stats, "Print statistics as c lines");
}

void finish_options(CLI::App *cmd, SolveFlags &f) {
  if (cmd->count("--conflicts") > 0)
    f.opts.conflicts = f.conflicts;
  if (cmd->count("--timeout") > 0)
    f.opts.timeout_seconds = f.timeout;
}

int cmd_solve(CLI::App *cmd, SolveFlags &f) {
  finish_options(cmd, f);
  RunReport r;
  if (f.opts.driver.rfind("pup:", 0) == 0) {
    // pup drivers need the instance, so the input is the instance itself.
    pup::Instance inst = load_instance(f.file);
    pup::Encoded e = pup::encode(inst);
    r = run(e.formula, f.opts, &inst, &e.encoding);
  } else {
    ParseResult p = parse_dimacs_file(f.file);
    for (const auto &w : p.warnings)
      std::cerr << "c warning: " << w << '\n';
    r = run(p.formula, f.opts);
  }
  print_report(std::cout, r, f.stats);
  return exit_code(r.status);
}

int cmd_pup_solve(CLI::App *cmd, SolveFlags &f) {
  finish_options(cmd, f);
  pup::Instance inst = load_instance(f.file);
  pup::Encoded e = pup::encode(inst);
  RunReport r = run(e.formula, f.opts, &inst, &e.encoding);
  std::cout << "s " << status_name(r.status) << '\n';
  if (r.model) {
    pup::Solution sol = pup::decode(e.encoding, *r.model);
    pup::write_solution(std::cout, inst, sol);
    auto vs = pup::validate(inst, sol);
    for (const auto &v : vs)
      std::cerr << "invalid: " << v.message << '\n';
    if (!vs.empty())
      return 1;
  }
  if (f.stats) {
    r.model.reset();
    std::ostringstream stats;
    print_report(stats, r, true);
    std::string text = stats.str();
    std::cout << text.substr(text.find('\n') + 1);
  }
  return exit_code(r.status);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"CDCL SAT solver with pluggable branching drivers"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  auto *solve_cmd = app.add_subcommand("solve", "Solve a DIMACS CNF (a PUP instance with pup: drivers)");
  solve_cmd->add_option("file", solve_flags.file)->required();
  add_solve_flags(solve_cmd, solve_flags);

  auto *pup_cmd = app.add_subcommand("pup", "Partner Units Problem tools");
  pup_cmd->require_subcommand(1);

  std::string family;
  std::uint32_t size = 1;
  std::uint64_t gen_seed = 0;
  std::uint32_t gen_units = 0;
  std::string out_path;
  auto *gen = pup_cmd->add_subcommand("generate", "Generate an instance");
  gen->add_option("family", family, "double | triple | grid")->required();
  gen->add_option("size", size)->required();
  gen->add_option("--seed", gen_seed);
  gen->add_option("--units", gen_units, "Fixed unit count instead of the feasibility search");
  gen->add_option("-o,--output", out_path);

  std::string inst_path;
  auto *enc_cmd = pup_cmd->add_subcommand("encode", "Print the CNF encoding as DIMACS");
  enc_cmd->add_option("instance", inst_path)->required();

  SolveFlags pup_flags;
  pup_flags.opts.driver = "pup:pred";
  auto *psolve = pup_cmd->add_subcommand("solve", "Solve an instance and print the placement");
  psolve->add_option("instance", pup_flags.file)->required();
  add_solve_flags(psolve, pup_flags);

  std::string sol_path;
  auto *val = pup_cmd->add_subcommand("validate", "Check a solution against an instance");
  val->add_option("instance", inst_path)->required();
  val->add_option("solution", sol_path)->required();

  std::uint32_t order_root = 0;
  auto *ord = pup_cmd->add_subcommand("order", "Print the breadth-first vertex order");
  ord->add_option("instance", inst_path)->required();
  ord->add_option("--root", order_root);

  BenchSpec bench;
  std::string bench_family = "double";
  std::string bench_sizes = "1..4";
  std::string bench_seeds = "0";
  std::string bench_drivers = "default,pup:pred";
  std::uint64_t bench_conflicts = 0;
  double bench_timeout = 0;
  std::string csv_path;
  auto *bench_cmd = app.add_subcommand("bench", "Run a PUP suite; CSV on stdout, summary on stderr");
  bench_cmd->add_option("--family", bench_family);
  bench_cmd->add_option("--sizes", bench_sizes, "e.g. 2..4 or 2,3");
  bench_cmd->add_option("--seeds", bench_seeds, "e.g. 0..4 or 1,7");
  bench_cmd->add_option("--drivers", bench_drivers, "Comma separated");
  bench_cmd->add_option("--conflicts", bench_conflicts);
  bench_cmd->add_option("--timeout", bench_timeout, "Seconds per run");
  bench_cmd->add_option("--csv", csv_path, "Write the CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed())
      return cmd_solve(solve_cmd, solve_flags);

    if (gen->parsed()) {
      pup::Family fam = pup::parse_family(family);
      pup::Instance inst =
          gen_units > 0 ? pup::layout(fam, size, gen_seed, gen_units) : pup::generate(fam, size, gen_seed);
      if (out_path.empty()) {
        pup::write_instance(std::cout, inst);
      } else {
        std::ofstream out(out_path);
        pup::write_instance(out, inst);
      }
      return 0;
    }
    if (enc_cmd->parsed()) {
      render_dimacs(pup::encode(load_instance(inst_path)).formula, std::cout);
      return 0;
    }
    if (psolve->parsed())
      return cmd_pup_solve(psolve, pup_flags);
    if (val->parsed()) {
      pup::Instance inst = load_instance(inst_path);
      std::ifstream in(sol_path);
      if (!in)
        throw std::runtime_error("cannot open " + sol_path);
      auto vs = pup::validate(inst, pup::read_solution(in, inst));
      if (vs.empty()) {
        std::cout << "valid\n";
        return 0;
      }
      for (const auto &v : vs)
        std::cout << "violation: " << v.message << '\n';
      return 1;
    }
    if (ord->parsed()) {
      pup::Instance inst = load_instance(inst_path);
      for (pup::Vertex v : pup::bfs_order(inst, order_root))
        std::cout << (v.sensor ? inst.sensors[v.index] : inst.zones[v.index]) << '\n';
      return 0;
    }
    if (bench_cmd->parsed()) {
      bench.family = pup::parse_family(bench_family);
      bench.sizes = parse_list<std::uint32_t>(bench_sizes);
      bench.seeds = parse_list<std::uint64_t>(bench_seeds);
      bench.drivers.clear();
      std::stringstream ss(bench_drivers);
      for (std::string d; std::getline(ss, d, ',');)
        bench.drivers.push_back(d);
      if (bench_cmd->count("--conflicts") > 0)
        bench.conflicts = bench_conflicts;
      if (bench_cmd->count("--timeout") > 0)
        bench.timeout_seconds = bench_timeout;
      auto rows = run_bench(bench);
      if (csv_path.empty()) {
        write_csv(std::cout, rows);
      } else {
        std::ofstream out(csv_path);
        write_csv(out, rows);
      }
      for (const auto &r : rows)
        if (!r.error.empty())
          std::cerr << r.instance << " / " << r.driver << ": " << r.error << '\n';
      write_summary(std::cerr, rows);
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "drivesat: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
