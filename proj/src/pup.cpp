#include "drivesat/pup.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace drivesat::pup {

void Instance::check() const {
  for (auto [z, s] : edges)
    if (z >= zones.size() || s >= sensors.size())
      throw std::invalid_argument("edge endpoint out of range");
  if (ucap < 1)
    throw std::invalid_argument("ucap must be at least 1");
}

std::uint32_t Instance::capacity_bound() const {
  const std::size_t most = std::max(zones.size(), sensors.size());
  return static_cast<std::uint32_t>((most + ucap - 1) / ucap);
}

Encoding::Encoding(std::uint32_t zones, std::uint32_t sensors, std::uint32_t units)
    : zones_(zones), sensors_(sensors), units_(units) {
  num_atoms_ = last_partner();
}

Atom Encoding::partner(std::uint32_t u, std::uint32_t v) const {
  if (u > v)
    std::swap(u, v);
  // pairs (0,1) (0,2) .. (0,U-1) (1,2) ..
  const std::uint32_t before = u * units_ - u * (u + 1) / 2;
  return last_placement() + 1 + before + (v - u - 1);
}

std::optional<std::pair<Vertex, std::uint32_t>> Encoding::placement(Atom a) const {
  if (a == 0 || a > last_placement())
    return std::nullopt;
  const std::uint32_t i = (a - 1) / units_;
  const std::uint32_t u = (a - 1) % units_;
  if (i < zones_)
    return std::make_pair(Vertex{false, i}, u);
  return std::make_pair(Vertex{true, i - zones_}, u);
}

namespace {

// Sinz sequential counter: at most k of xs are true.
void at_most(Formula &f, Encoding &enc, const std::vector<Atom> &xs, std::uint32_t k) {
  const std::size_t n = xs.size();
  if (k >= n)
    return;
  auto neg = [](Atom a) { return Literal::negative(a); };
  auto pos = [](Atom a) { return Literal::positive(a); };
  if (k == 0) {
    for (Atom x : xs)
      f.add_clause({neg(x)});
    return;
  }
  // r[i][j]: at least j+1 of xs[0..i] are true (i < n-1).
  std::vector<std::vector<Atom>> r(n - 1, std::vector<Atom>(k));
  for (auto &row : r)
    for (auto &a : row)
      a = enc.fresh();
  f.add_clause({neg(xs[0]), pos(r[0][0])});
  for (std::uint32_t j = 1; j < k; ++j)
    f.add_clause({neg(r[0][j])});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    f.add_clause({neg(xs[i]), pos(r[i][0])});
    f.add_clause({neg(r[i - 1][0]), pos(r[i][0])});
    for (std::uint32_t j = 1; j < k; ++j) {
      f.add_clause({neg(xs[i]), neg(r[i - 1][j - 1]), pos(r[i][j])});
      f.add_clause({neg(r[i - 1][j]), pos(r[i][j])});
    }
    f.add_clause({neg(xs[i]), neg(r[i - 1][k - 1])});
  }
  f.add_clause({neg(xs[n - 1]), neg(r[n - 2][k - 1])});
}

void exactly_one(Formula &f, const std::vector<Atom> &xs) {
  std::vector<Literal> alo;
  for (Atom x : xs)
    alo.push_back(Literal::positive(x));
  f.add_clause(alo);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      f.add_clause({Literal::negative(xs[i]), Literal::negative(xs[j])});
}

} // namespace

Encoded encode(const Instance &inst) {
  inst.check();
  const auto Z = static_cast<std::uint32_t>(inst.zones.size());
  const auto S = static_cast<std::uint32_t>(inst.sensors.size());
  const std::uint32_t U = inst.num_units;
  Encoded out{Formula{}, Encoding(Z, S, U)};
  Formula &f = out.formula;
  Encoding &enc = out.encoding;

  for (std::uint32_t z = 0; z < Z; ++z) {
    std::vector<Atom> xs;
    for (std::uint32_t u = 0; u < U; ++u)
      xs.push_back(enc.zu(z, u));
    exactly_one(f, xs);
  }
  for (std::uint32_t s = 0; s < S; ++s) {
    std::vector<Atom> xs;
    for (std::uint32_t u = 0; u < U; ++u)
      xs.push_back(enc.su(s, u));
    exactly_one(f, xs);
  }
  for (std::uint32_t u = 0; u < U; ++u) {
    std::vector<Atom> zs;
    std::vector<Atom> ss;
    for (std::uint32_t z = 0; z < Z; ++z)
      zs.push_back(enc.zu(z, u));
    for (std::uint32_t s = 0; s < S; ++s)
      ss.push_back(enc.su(s, u));
    at_most(f, enc, zs, inst.ucap);
    at_most(f, enc, ss, inst.ucap);
  }
  for (auto [z, s] : inst.edges)
    for (std::uint32_t u = 0; u < U; ++u)
      for (std::uint32_t v = 0; v < U; ++v)
        if (u != v)
          f.add_clause({Literal::negative(enc.zu(z, u)), Literal::negative(enc.su(s, v)),
                        Literal::positive(enc.partner(u, v))});
  for (std::uint32_t u = 0; u < U; ++u) {
    std::vector<Atom> ps;
    for (std::uint32_t v = 0; v < U; ++v)
      if (v != u)
        ps.push_back(enc.partner(u, v));
    at_most(f, enc, ps, inst.iucap);
  }
  f.num_atoms = enc.num_atoms();
  return out;
}

Solution decode(const Encoding &enc, const Model &m) {
  Solution sol;
  sol.zone_unit.assign(enc.zones(), 0);
  sol.sensor_unit.assign(enc.sensors(), 0);
  for (Atom a = 1; a <= enc.last_placement(); ++a) {
    if (!m.values[a])
      continue;
    auto [v, u] = *enc.placement(a);
    (v.sensor ? sol.sensor_unit : sol.zone_unit)[v.index] = u;
  }
  for (std::uint32_t u = 0; u < enc.units(); ++u)
    for (std::uint32_t v = u + 1; v < enc.units(); ++v)
      if (m.values[enc.partner(u, v)])
        sol.partners.emplace_back(u, v);
  return sol;
}

std::vector<Violation> validate(const Instance &inst, const Solution &sol) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind k, std::string msg) { out.push_back({k, std::move(msg)}); };
  const std::uint32_t U = inst.num_units;
  if (sol.zone_unit.size() != inst.zones.size() || sol.sensor_unit.size() != inst.sensors.size()) {
    add(ViolationKind::assignment, "not every zone and sensor has exactly one unit");
    return out;
  }
  std::vector<std::uint32_t> zones_on(U, 0);
  std::vector<std::uint32_t> sensors_on(U, 0);
  for (std::size_t z = 0; z < sol.zone_unit.size(); ++z) {
    if (sol.zone_unit[z] >= U)
      add(ViolationKind::assignment, "zone " + inst.zones[z] + " on a unit that does not exist");
    else
      ++zones_on[sol.zone_unit[z]];
  }
  for (std::size_t s = 0; s < sol.sensor_unit.size(); ++s) {
    if (sol.sensor_unit[s] >= U)
      add(ViolationKind::assignment, "sensor " + inst.sensors[s] + " on a unit that does not exist");
    else
      ++sensors_on[sol.sensor_unit[s]];
  }
  if (!out.empty())
    return out;
  for (std::uint32_t u = 0; u < U; ++u) {
    if (zones_on[u] > inst.ucap)
      add(ViolationKind::capacity, "unit " + std::to_string(u + 1) + " holds " + std::to_string(zones_on[u]) + " zones");
    if (sensors_on[u] > inst.ucap)
      add(ViolationKind::capacity,
          "unit " + std::to_string(u + 1) + " holds " + std::to_string(sensors_on[u]) + " sensors");
  }
  std::set<std::pair<std::uint32_t, std::uint32_t>> links;
  for (auto [u, v] : sol.partners) {
    if (u >= U || v >= U || u == v)
      add(ViolationKind::partner, "bad partner pair");
    else
      links.insert(std::minmax(u, v));
  }
  for (auto [z, s] : inst.edges) {
    const std::uint32_t a = sol.zone_unit[z];
    const std::uint32_t b = sol.sensor_unit[s];
    if (a != b && links.count(std::minmax(a, b)) == 0)
      add(ViolationKind::partner, "zone " + inst.zones[z] + " and sensor " + inst.sensors[s] +
                                      " are on units " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                                      " which are not partners");
  }
  std::vector<std::uint32_t> degree(U, 0);
  for (auto [u, v] : links) {
    ++degree[u];
    ++degree[v];
  }
  for (std::uint32_t u = 0; u < U; ++u)
    if (degree[u] > inst.iucap)
      add(ViolationKind::partner_degree,
          "unit " + std::to_string(u + 1) + " has " + std::to_string(degree[u]) + " partners");
  return out;
}

namespace {

struct Adjacency {
  std::vector<std::vector<std::uint32_t>> zone;   // zone -> sensors
  std::vector<std::vector<std::uint32_t>> sensor; // sensor -> zones
};

Adjacency adjacency(const Instance &inst) {
  Adjacency adj;
  adj.zone.resize(inst.zones.size());
  adj.sensor.resize(inst.sensors.size());
  for (auto [z, s] : inst.edges) {
    adj.zone[z].push_back(s);
    adj.sensor[s].push_back(z);
  }
  return adj;
}

} // namespace

std::vector<Vertex> bfs_order(const Instance &inst, std::uint32_t root_zone) {
  const Adjacency adj = adjacency(inst);
  std::vector<bool> seen_z(inst.zones.size(), false);
  std::vector<bool> seen_s(inst.sensors.size(), false);
  std::vector<Vertex> order;
  auto bfs = [&](Vertex root) {
    std::deque<Vertex> q{root};
    (root.sensor ? seen_s : seen_z)[root.index] = true;
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      order.push_back(v);
      const auto &next = v.sensor ? adj.sensor[v.index] : adj.zone[v.index];
      auto &seen = v.sensor ? seen_z : seen_s;
      for (std::uint32_t w : next) {
        if (seen[w])
          continue;
        seen[w] = true;
        q.push_back({!v.sensor, w});
      }
    }
  };
  if (root_zone < inst.zones.size())
    bfs({false, root_zone});
  for (std::uint32_t z = 0; z < inst.zones.size(); ++z)
    if (!seen_z[z])
      bfs({false, z});
  for (std::uint32_t s = 0; s < inst.sensors.size(); ++s)
    if (!seen_s[s])
      bfs({true, s});
  return order;
}

std::string_view variant_name(Variant v) {
  switch (v) {
  case Variant::quickpup:
    return "quickpup";
  case Variant::quickpup_star:
    return "quickpup-star";
  case Variant::pred:
    return "pred";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::quickpup, Variant::quickpup_star, Variant::pred})
    if (variant_name(v) == name)
      return v;
  throw std::invalid_argument("unknown pup heuristic '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

PupDriver::PupDriver(Instance inst, Encoding enc, Variant variant, std::uint32_t root_zone)
    : inst_(std::move(inst)), enc_(enc), variant_(variant) {
  if (enc_.zones() != inst_.zones.size() || enc_.sensors() != inst_.sensors.size() ||
      enc_.units() != inst_.num_units)
    throw std::invalid_argument("encoding does not belong to this instance");
  if (root_zone > 0 && root_zone >= inst_.zones.size())
    throw std::invalid_argument("root zone out of range");
  order_ = bfs_order(inst_, root_zone);
  Adjacency adj = adjacency(inst_);
  zone_adj_ = std::move(adj.zone);
  sensor_adj_ = std::move(adj.sensor);
}

void PupDriver::on_event(const Event &e) {
  if (const auto *s = std::get_if<event::Search>(&e)) {
    mirror_.reset(s->num_atoms);
    stack_.clear();
    excluded_.clear();
    fell_back_ = false;
  } else if (const auto *u = std::get_if<event::UnrollLit>(&e)) {
    mirror_.on_unroll(u->literal);
    if (!stack_.empty() && stack_.back().literal == u->literal)
      stack_.pop_back();
  }
}

std::vector<Literal> PupDriver::placements() const {
  std::vector<Literal> out;
  for (const auto &p : stack_)
    out.push_back(p.literal);
  return out;
}

std::optional<std::uint32_t> PupDriver::unit_of(Vertex v) const {
  for (std::uint32_t u = 0; u < enc_.units(); ++u)
    if (mirror_.value(enc_.at(v, u)) == Truth::True)
      return u;
  return std::nullopt;
}

std::vector<Vertex> PupDriver::near(Vertex v) const {
  std::vector<Vertex> out;
  const auto &one = v.sensor ? sensor_adj_[v.index] : zone_adj_[v.index];
  for (std::uint32_t w : one) {
    out.push_back({!v.sensor, w});
    const auto &two = v.sensor ? zone_adj_[w] : sensor_adj_[w];
    for (std::uint32_t x : two)
      if (x != v.index)
        out.push_back({v.sensor, x});
  }
  return out;
}

std::vector<std::uint32_t> PupDriver::trial_sequence(Vertex v) const {
  const std::size_t depth = stack_.size();
  auto allowed = [&](std::uint32_t u) {
    if (mirror_.value(enc_.at(v, u)) == Truth::False)
      return false;
    return std::none_of(excluded_.begin(), excluded_.end(), [&](const Excluded &x) {
      return x.depth == depth && x.vertex == v && x.unit == u;
    });
  };
  // Units in the order they received their first vertex on the trail.
  std::vector<std::uint32_t> used;
  std::vector<bool> is_used(enc_.units(), false);
  for (Literal l : mirror_.literals()) {
    if (l.is_negative())
      continue;
    if (auto p = enc_.placement(l.atom()); p && !is_used[p->second]) {
      is_used[p->second] = true;
      used.push_back(p->second);
    }
  }
  std::optional<std::uint32_t> fresh;
  for (std::uint32_t u = 0; u < enc_.units() && !fresh; ++u)
    if (!is_used[u] && allowed(u))
      fresh = u;

  std::vector<std::uint32_t> seq;
  switch (variant_) {
  case Variant::quickpup:
    if (fresh)
      seq.push_back(*fresh);
    seq.insert(seq.end(), used.rbegin(), used.rend());
    break;
  case Variant::quickpup_star:
    seq = used;
    if (fresh)
      seq.push_back(*fresh);
    break;
  case Variant::pred: {
    std::vector<bool> close(enc_.units(), false);
    for (Vertex w : near(v))
      if (auto u = unit_of(w))
        close[*u] = true;
    for (std::uint32_t u : used)
      if (close[u])
        seq.push_back(u);
    if (fresh)
      seq.push_back(*fresh);
    for (std::uint32_t u : used)
      if (!close[u])
        seq.push_back(u);
    break;
  }
  }
  std::erase_if(seq, [&](std::uint32_t u) { return !allowed(u); });
  return seq;
}

Response PupDriver::choose() {
  while (!stack_.empty() && mirror_.value(stack_.back().literal) != Truth::True)
    stack_.pop_back();
  std::erase_if(excluded_, [&](const Excluded &x) { return x.depth > stack_.size(); });

  auto next = std::find_if(order_.begin(), order_.end(), [&](Vertex v) { return !unit_of(v); });
  if (next == order_.end())
    return response::Fallback{1, {}, {}, {}}; // everything placed; the rest is bookkeeping
  const Vertex v = *next;
  const auto seq = trial_sequence(v);
  if (!seq.empty()) {
    const Atom a = enc_.at(v, seq.front());
    stack_.push_back({v, seq.front(), Literal::positive(a)});
    return response::Choice{{{a, Sign::p}}};
  }
  if (stack_.empty()) {
    fell_back_ = true;
    return response::Fallback{};
  }
  const Placed top = stack_.back();
  excluded_.push_back({stack_.size() - 1, top.vertex, top.unit});
  ++unrolls_;
  return response::Unroll{top.literal};
}

Response PupDriver::answer(const Request &r) {
  if (std::holds_alternative<request::GetAtomsToBeFrozen>(r)) {
    response::Freeze f;
    for (Atom a = 1; a <= enc_.last_partner(); ++a)
      f.atoms.push_back(a);
    return f;
  }
  mirror_.sync(*std::get<request::GetChoice>(r).interpretation);
  return choose();
}

// ---------------------------------------------------------------------------

std::string_view family_name(Family f) {
  switch (f) {
  case Family::double_chain:
    return "double";
  case Family::triple_chain:
    return "triple";
  case Family::grid:
    return "grid";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::double_chain, Family::triple_chain, Family::grid})
    if (family_name(f) == name)
      return f;
  throw std::invalid_argument("unknown instance family '" + std::string(name) + "'");
}

namespace {

template <class T> void shuffle_in_place(std::vector<T> &xs, std::mt19937_64 &rng) {
  for (std::size_t i = xs.size(); i > 1; --i)
    std::swap(xs[i - 1], xs[rng() % i]);
}

} // namespace

Instance layout(Family f, std::uint32_t size, std::uint64_t seed, std::uint32_t units) {
  if (size < 1)
    throw std::invalid_argument("size must be at least 1");
  std::uint32_t zones = 0;
  std::uint32_t sensors = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  switch (f) {
  case Family::double_chain: // z_i = {s_i, s_i+1}
    zones = size;
    sensors = size + 1;
    for (std::uint32_t i = 0; i < size; ++i)
      edges.insert(edges.end(), {{i, i}, {i, i + 1}});
    break;
  case Family::triple_chain: // z_i = {s_2i, s_2i+1, s_2i+2}
    zones = size;
    sensors = 2 * size + 1;
    for (std::uint32_t i = 0; i < size; ++i)
      edges.insert(edges.end(), {{i, 2 * i}, {i, 2 * i + 1}, {i, 2 * i + 2}});
    break;
  case Family::grid: { // faces are zones, lattice edges are sensors
    const std::uint32_t n = size;
    zones = n * n;
    const std::uint32_t horizontal = (n + 1) * n;
    sensors = horizontal + n * (n + 1);
    auto h = [&](std::uint32_t r, std::uint32_t c) { return r * n + c; };
    auto v = [&](std::uint32_t r, std::uint32_t c) { return horizontal + r * (n + 1) + c; };
    for (std::uint32_t r = 0; r < n; ++r)
      for (std::uint32_t c = 0; c < n; ++c)
        edges.insert(edges.end(), {{r * n + c, h(r, c)}, {r * n + c, v(r, c)}, {r * n + c, v(r, c + 1)},
                                   {r * n + c, h(r + 1, c)}});
    break;
  }
  }
  // Shuffle the input order; names stay with their vertices.
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> zperm(zones);
  std::vector<std::uint32_t> sperm(sensors);
  for (std::uint32_t i = 0; i < zones; ++i)
    zperm[i] = i;
  for (std::uint32_t i = 0; i < sensors; ++i)
    sperm[i] = i;
  shuffle_in_place(zperm, rng);
  shuffle_in_place(sperm, rng);
  std::vector<std::uint32_t> zpos(zones);
  std::vector<std::uint32_t> spos(sensors);
  Instance inst;
  for (std::uint32_t i = 0; i < zones; ++i) {
    zpos[zperm[i]] = i;
    inst.zones.push_back("z" + std::to_string(zperm[i] + 1));
  }
  for (std::uint32_t i = 0; i < sensors; ++i) {
    spos[sperm[i]] = i;
    inst.sensors.push_back("s" + std::to_string(sperm[i] + 1));
  }
  for (auto [z, s] : edges)
    inst.edges.emplace_back(zpos[z], spos[s]);
  shuffle_in_place(inst.edges, rng);
  inst.ucap = 2;
  // Lattices need four partners per unit: from grid(3) on, no placement the
  // solver could find respects two.
  inst.iucap = f == Family::grid ? 4 : 2;
  inst.num_units = units == 0 ? inst.capacity_bound() : units;
  return inst;
}

Instance generate(Family f, std::uint32_t size, std::uint64_t seed) {
  Instance inst = layout(f, size, seed, 0);
  const std::uint32_t lower = inst.num_units;
  const auto upper = static_cast<std::uint32_t>(inst.zones.size() + inst.sensors.size());
  SolverConfig cfg;
  cfg.seed = seed;
  cfg.conflict_budget = 20000;
  for (std::uint32_t k = lower; k <= upper; ++k) {
    inst.num_units = k;
    Encoded e = encode(inst);
    if (solve(e.formula, nullptr, cfg).status == SolveStatus::satisfiable)
      return inst;
    PupDriver pred(inst, e.encoding, Variant::pred);
    if (solve(e.formula, &pred, cfg).status == SolveStatus::satisfiable)
      return inst;
  }
  throw std::runtime_error("no feasible unit count found for " + std::string(family_name(f)) + "(" +
                           std::to_string(size) + ")");
}

Instance railway_example() {
  // s1 -z1- s2 -z2- s3 -z3- s5, and z2 also reaches s4 -z4- s6 (a switch)
  Instance inst;
  inst.zones = {"z1", "z2", "z3", "z4"};
  inst.sensors = {"s1", "s2", "s3", "s4", "s5", "s6"};
  inst.edges = {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 4}, {3, 3}, {3, 5}};
  inst.num_units = 3;
  inst.ucap = 2;
  inst.iucap = 2;
  return inst;
}

Solution railway_example_solution() {
  Solution sol;
  sol.zone_unit = {0, 0, 1, 2};
  sol.sensor_unit = {0, 0, 1, 2, 1, 2};
  sol.partners = {{0, 1}, {0, 2}};
  return sol;
}

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void bad_line(std::size_t no, const std::string &line, const std::string &why) {
  throw std::invalid_argument("line " + std::to_string(no) + " '" + line + "': " + why);
}

std::uint32_t index_of(const std::map<std::string, std::uint32_t> &ids, const std::string &id, std::size_t no,
                       const std::string &line) {
  auto it = ids.find(id);
  if (it == ids.end())
    bad_line(no, line, "unknown id '" + id + "'");
  return it->second;
}

std::uint32_t read_unit(std::istringstream &ss, std::size_t no, const std::string &line) {
  long long u = 0;
  if (!(ss >> u) || u < 1)
    bad_line(no, line, "expected a unit number (1-based)");
  return static_cast<std::uint32_t>(u - 1);
}

} // namespace

Instance read_instance(std::istream &in) {
  Instance inst;
  std::map<std::string, std::uint32_t> zid;
  std::map<std::string, std::uint32_t> sid;
  bool have_param = false;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ss(line);
    std::string head;
    if (!(ss >> head))
      continue;
    std::string a;
    std::string b;
    if (head == "zone" || head == "sensor") {
      if (!(ss >> a))
        bad_line(no, line, "missing id");
      auto &ids = head == "zone" ? zid : sid;
      auto &names = head == "zone" ? inst.zones : inst.sensors;
      if (!ids.emplace(a, static_cast<std::uint32_t>(names.size())).second)
        bad_line(no, line, "duplicate id");
      names.push_back(a);
    } else if (head == "edge") {
      if (!(ss >> a >> b))
        bad_line(no, line, "expected 'edge <zone> <sensor>'");
      inst.edges.emplace_back(index_of(zid, a, no, line), index_of(sid, b, no, line));
    } else if (head == "param") {
      std::string k1, k2, k3;
      long long n = -1, uc = -1, iu = -1;
      if (!(ss >> k1 >> n >> k2 >> uc >> k3 >> iu) || k1 != "units" || k2 != "ucap" || k3 != "iucap" || n < 0 ||
          uc < 0 || iu < 0)
        bad_line(no, line, "expected 'param units <n> ucap <k> iucap <k>'");
      inst.num_units = static_cast<std::uint32_t>(n);
      inst.ucap = static_cast<std::uint32_t>(uc);
      inst.iucap = static_cast<std::uint32_t>(iu);
      have_param = true;
    } else {
      bad_line(no, line, "unknown record");
    }
    std::string extra;
    if (ss >> extra)
      bad_line(no, line, "trailing text");
  }
  if (!have_param)
    throw std::invalid_argument("missing 'param' line");
  inst.check();
  return inst;
}

void write_instance(std::ostream &out, const Instance &inst) {
  for (const auto &z : inst.zones)
    out << "zone " << z << '\n';
  for (const auto &s : inst.sensors)
    out << "sensor " << s << '\n';
  for (auto [z, s] : inst.edges)
    out << "edge " << inst.zones[z] << ' ' << inst.sensors[s] << '\n';
  out << "param units " << inst.num_units << " ucap " << inst.ucap << " iucap " << inst.iucap << '\n';
}

Solution read_solution(std::istream &in, const Instance &inst) {
  std::map<std::string, std::uint32_t> zid;
  std::map<std::string, std::uint32_t> sid;
  for (std::uint32_t i = 0; i < inst.zones.size(); ++i)
    zid[inst.zones[i]] = i;
  for (std::uint32_t i = 0; i < inst.sensors.size(); ++i)
    sid[inst.sensors[i]] = i;
  constexpr std::uint32_t kUnset = 0xFFFFFFFFU;
  Solution sol;
  sol.zone_unit.assign(inst.zones.size(), kUnset);
  sol.sensor_unit.assign(inst.sensors.size(), kUnset);
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ss(line);
    std::string head;
    if (!(ss >> head))
      continue;
    if (head == "s" || head == "c")
      continue; // solver status and statistics, as printed by `pup solve`
    std::string id;
    if (head == "zone" || head == "sensor") {
      ss >> id;
      const bool zone = head == "zone";
      const std::uint32_t i = index_of(zone ? zid : sid, id, no, line);
      auto &slot = (zone ? sol.zone_unit : sol.sensor_unit)[i];
      if (slot != kUnset)
        bad_line(no, line, "placed twice");
      slot = read_unit(ss, no, line);
    } else if (head == "partner") {
      const std::uint32_t u = read_unit(ss, no, line);
      const std::uint32_t v = read_unit(ss, no, line);
      sol.partners.emplace_back(std::min(u, v), std::max(u, v));
    } else {
      bad_line(no, line, "unknown record");
    }
  }
  for (std::size_t i = 0; i < sol.zone_unit.size(); ++i)
    if (sol.zone_unit[i] == kUnset)
      throw std::invalid_argument("zone " + inst.zones[i] + " is not placed");
  for (std::size_t i = 0; i < sol.sensor_unit.size(); ++i)
    if (sol.sensor_unit[i] == kUnset)
      throw std::invalid_argument("sensor " + inst.sensors[i] + " is not placed");
  return sol;
}

void write_solution(std::ostream &out, const Instance &inst, const Solution &sol) {
  for (std::size_t z = 0; z < sol.zone_unit.size(); ++z)
    out << "zone " << inst.zones[z] << ' ' << sol.zone_unit[z] + 1 << '\n';
  for (std::size_t s = 0; s < sol.sensor_unit.size(); ++s)
    out << "sensor " << inst.sensors[s] << ' ' << sol.sensor_unit[s] + 1 << '\n';
  for (auto [u, v] : sol.partners)
    out << "partner " << u + 1 << ' ' << v + 1 << '\n';
}

bool brute_force_feasible(const Instance &inst) {
  const auto Z = static_cast<std::uint32_t>(inst.zones.size());
  const auto S = static_cast<std::uint32_t>(inst.sensors.size());
  const std::uint32_t U = inst.num_units;
  std::vector<std::uint32_t> unit(Z + S, 0);
  std::vector<std::uint32_t> zl(U, 0);
  std::vector<std::uint32_t> sl(U, 0);
  // Placements complete; the cheapest partner relation is the set of needed links.
  auto links_ok = [&] {
    std::set<std::pair<std::uint32_t, std::uint32_t>> links;
    for (auto [z, s] : inst.edges)
      if (unit[z] != unit[Z + s])
        links.insert(std::minmax(unit[z], unit[Z + s]));
    std::vector<std::uint32_t> deg(U, 0);
    for (auto [u, v] : links)
      if (++deg[u] > inst.iucap || ++deg[v] > inst.iucap)
        return false;
    return true;
  };
  std::function<bool(std::uint32_t)> place = [&](std::uint32_t i) {
    if (i == Z + S)
      return links_ok();
    auto &load = i < Z ? zl : sl;
    for (std::uint32_t u = 0; u < U; ++u) {
      if (load[u] == inst.ucap)
        continue;
      ++load[u];
      unit[i] = u;
      const bool ok = place(i + 1);
      --load[u];
      if (ok)
        return true;
    }
    return false;
  };
  return place(0);
}

} // namespace drivesat::pup
