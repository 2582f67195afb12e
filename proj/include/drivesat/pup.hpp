#ifndef DRIVESAT_PUP_HPP
#define DRIVESAT_PUP_HPP
// Partner Units Problem: zones and sensors go onto capacity-limited units;
// a zone and a sensor that touch must share a unit or sit on partner units.

#include "drivesat/driver.hpp"
#include "drivesat/engine.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace drivesat::pup {

struct Instance {
  std::vector<std::string> zones;
  std::vector<std::string> sensors;
  /// (zone index, sensor index)
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uint32_t num_units = 0;
  std::uint32_t ucap = 2;
  std::uint32_t iucap = 2;

  /// Throws std::invalid_argument naming the broken invariant. Too few units
  /// is not an error here, just an infeasible instance.
  void check() const;
  /// ceil(max(zones, sensors) / ucap): fewer units can never work.
  [[nodiscard]] std::uint32_t capacity_bound() const;
};

/// A zone or a sensor.
struct Vertex {
  bool sensor = false;
  std::uint32_t index = 0;
  bool operator==(const Vertex &) const = default;
};

/// Atom layout: zu(z,u), then su(s,u), then partner(u,v) for u < v, then the
/// counter auxiliaries. Units are 0-based here.
class Encoding {
public:
  Encoding() = default;
  Encoding(std::uint32_t zones, std::uint32_t sensors, std::uint32_t units);

  [[nodiscard]] Atom zu(std::uint32_t z, std::uint32_t u) const { return 1 + z * units_ + u; }
  [[nodiscard]] Atom su(std::uint32_t s, std::uint32_t u) const { return 1 + (zones_ + s) * units_ + u; }
  [[nodiscard]] Atom at(Vertex v, std::uint32_t u) const { return v.sensor ? su(v.index, u) : zu(v.index, u); }
  [[nodiscard]] Atom partner(std::uint32_t u, std::uint32_t v) const;

  /// For a zu/su atom: the vertex and unit it places; nullopt otherwise.
  [[nodiscard]] std::optional<std::pair<Vertex, std::uint32_t>> placement(Atom a) const;
  [[nodiscard]] bool is_partner(Atom a) const { return a > last_placement() && a <= last_partner(); }

  [[nodiscard]] Atom last_placement() const { return (zones_ + sensors_) * units_; }
  [[nodiscard]] Atom last_partner() const { return last_placement() + units_ * (units_ - (units_ > 0 ? 1 : 0)) / 2; }
  [[nodiscard]] std::uint32_t num_atoms() const { return num_atoms_; }
  [[nodiscard]] std::uint32_t zones() const { return zones_; }
  [[nodiscard]] std::uint32_t sensors() const { return sensors_; }
  [[nodiscard]] std::uint32_t units() const { return units_; }

  /// Allocates a fresh auxiliary atom.
  Atom fresh() { return ++num_atoms_; }

private:
  std::uint32_t zones_ = 0;
  std::uint32_t sensors_ = 0;
  std::uint32_t units_ = 0;
  std::uint32_t num_atoms_ = 0;
};

struct Solution {
  std::vector<std::uint32_t> zone_unit;
  std::vector<std::uint32_t> sensor_unit;
  /// Pairs (u, v) with u < v.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> partners;
  bool operator==(const Solution &) const = default;
};

struct Encoded {
  Formula formula;
  Encoding encoding;
};

/// Exactly-one unit per vertex, at-most-UCap per unit (sequential counters),
/// partner links for every touching pair on different units and at-most-IUCap
/// partners per unit. No symmetry breaking.
Encoded encode(const Instance &inst);

/// Reads unit placements and the true partner atoms out of a model.
Solution decode(const Encoding &enc, const Model &m);

enum class ViolationKind { assignment, capacity, partner, partner_degree };

struct Violation {
  ViolationKind kind;
  std::string message;
};

/// Direct check of the problem constraints; empty when the solution is valid.
std::vector<Violation> validate(const Instance &inst, const Solution &sol);

/// Breadth-first over the zone/sensor graph from `root_zone`, neighbours in
/// edge input order. Vertices left unreached start new searches in input
/// order (zones first, then sensors).
std::vector<Vertex> bfs_order(const Instance &inst, std::uint32_t root_zone = 0);

enum class Variant { quickpup, quickpup_star, pred };

std::string_view variant_name(Variant v);
/// Accepts "quickpup", "quickpup-star" and "pred".
Variant parse_variant(std::string_view name);

/// Depth-first placement heuristic over the BFS order. Each GetChoice places
/// the first unplaced vertex on the next unit of the variant's trial
/// sequence; a vertex without any unit left unrolls the previous placement,
/// and running out of placements to unroll hands over with Fallback(0).
class PupDriver : public Driver {
public:
  PupDriver(Instance inst, Encoding enc, Variant variant, std::uint32_t root_zone = 0);

  [[nodiscard]] EventMask subscription() const override {
    return EventMask{EventKind::search, EventKind::unroll_lit};
  }
  void on_event(const Event &e) override;
  Response answer(const Request &r) override;
  [[nodiscard]] std::string name() const override { return "pup:" + std::string(variant_name(variant_)); }

  [[nodiscard]] const TrailMirror &mirror() const { return mirror_; }
  [[nodiscard]] const std::vector<Vertex> &order() const { return order_; }
  /// Placements made by the driver that are still on the trail.
  [[nodiscard]] std::vector<Literal> placements() const;
  [[nodiscard]] bool fell_back() const { return fell_back_; }
  [[nodiscard]] std::uint64_t unrolls() const { return unrolls_; }

private:
  struct Placed {
    Vertex vertex;
    std::uint32_t unit;
    Literal literal;
  };
  // Units already ruled out for a vertex by an unroll at a given depth.
  struct Excluded {
    std::size_t depth;
    Vertex vertex;
    std::uint32_t unit;
  };

  [[nodiscard]] std::optional<std::uint32_t> unit_of(Vertex v) const;
  [[nodiscard]] std::vector<std::uint32_t> trial_sequence(Vertex v) const;
  [[nodiscard]] std::vector<Vertex> near(Vertex v) const;
  Response choose();

  Instance inst_;
  Encoding enc_;
  Variant variant_;
  std::vector<Vertex> order_;
  std::vector<std::vector<std::uint32_t>> zone_adj_;
  std::vector<std::vector<std::uint32_t>> sensor_adj_;
  TrailMirror mirror_;
  std::vector<Placed> stack_;
  std::vector<Excluded> excluded_;
  bool fell_back_ = false;
  std::uint64_t unrolls_ = 0;
};

enum class Family { double_chain, triple_chain, grid };

std::string_view family_name(Family f);
/// Accepts "double", "triple" and "grid".
Family parse_family(std::string_view name);

/// Builds the family's layout of the given size (UCap = 2; IUCap = 2 for the
/// chains and 4 for grids), shuffles the input order with `seed`, and sets
/// num_units to the smallest count the solver can show feasible, starting at
/// the capacity lower bound.
Instance generate(Family f, std::uint32_t size, std::uint64_t seed);

/// Same layout with an explicit unit count (no feasibility search); 0 means
/// the capacity lower bound.
Instance layout(Family f, std::uint32_t size, std::uint64_t seed, std::uint32_t units);

/// A small railway layout with six sensors, four zones and three units.
Instance railway_example();
Solution railway_example_solution();

/// Text format: `zone <id>`, `sensor <id>`, `edge <zone> <sensor>`,
/// `param units <n> ucap <k> iucap <k>`; `#` starts a comment.
Instance read_instance(std::istream &in);
void write_instance(std::ostream &out, const Instance &inst);

/// `zone <id> <unit>`, `sensor <id> <unit>`, `partner <u> <v>`; units 1-based.
/// `s` and `c` lines are skipped.
Solution read_solution(std::istream &in, const Instance &inst);
void write_solution(std::ostream &out, const Instance &inst, const Solution &sol);

/// Exhaustive search over unit placements; only for tiny instances.
bool brute_force_feasible(const Instance &inst);

} // namespace drivesat::pup

#endif
