// Serves a built-in driver over stdin/stdout using the wire protocol, so the
// solver can run it out of process: drivesat solve f.cnf --driver "extern:drivesat-driver minisat"
#include "drivesat/builtin_drivers.hpp"
#include "drivesat/pup.hpp"
#include "drivesat/wire.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

// pup:<variant> needs the instance the formula was encoded from.
std::unique_ptr<drivesat::Driver> make_pup_driver(const std::string &variant, const std::string &path,
                                                  std::uint32_t root) {
  namespace pup = drivesat::pup;
  if (path.empty())
    throw std::invalid_argument("pup drivers need --instance");
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open " + path);
  pup::Instance inst = pup::read_instance(in);
  pup::Encoded e = pup::encode(inst);
  return std::make_unique<pup::PupDriver>(inst, e.encoding, pup::parse_variant(variant), root);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Out-of-process driver host"};
  std::string name;
  std::uint64_t seed = 0;
  std::string instance;
  std::uint32_t root = 0;
  app.add_option("driver", name,
                 "minisat | pigeonhole | fallback | random | plan:<3p,1n,...> | pup:{quickpup|quickpup-star|pred}")
      ->required();
  app.add_option("--seed", seed, "Seed for drivers that use one");
  app.add_option("--instance", instance, "PUP instance file (pup drivers)");
  app.add_option("--root", root, "Root zone index for the pup order");
  CLI11_PARSE(app, argc, argv);

  std::unique_ptr<drivesat::Driver> driver;
  try {
    if (name.rfind("pup:", 0) == 0)
      driver = make_pup_driver(name.substr(4), instance, root);
    else
      driver = drivesat::make_builtin_driver(name, seed);
  } catch (const std::exception &e) {
    std::cerr << "drivesat-driver: " << e.what() << '\n';
    return 2;
  }
  if (!driver) {
    std::cerr << "drivesat-driver: 'default' is the solver's own heuristic, nothing to serve\n";
    return 2;
  }
  std::ios::sync_with_stdio(false);
  return drivesat::wire::serve(*driver, std::cin, std::cout, std::cerr);
}
