#include "drivesat/simplify.hpp"

#include <algorithm>

namespace drivesat {

std::vector<Atom> SimplifiedFormula::active_atoms() const {
  std::vector<Atom> out;
  for (Atom a = 1; a < status.size(); ++a)
    if (status[a] == AtomStatus::active)
      out.push_back(a);
  return out;
}

std::vector<Atom> SimplifiedFormula::eliminated_atoms() const {
  std::vector<Atom> out;
  for (Atom a = 1; a < status.size(); ++a)
    if (status[a] == AtomStatus::eliminated)
      out.push_back(a);
  return out;
}

void SimplifiedFormula::extend_model(Model &m) const {
  for (Atom a = 1; a < status.size(); ++a) {
    if (status[a] == AtomStatus::fixed_true)
      m.set(a, true);
    else if (status[a] == AtomStatus::fixed_false)
      m.set(a, false);
  }
  for (auto it = eliminations.rbegin(); it != eliminations.rend(); ++it) {
    m.set(it->atom, false);
    for (const auto &c : it->clauses) {
      bool sat = std::any_of(c.literals.begin(), c.literals.end(), [&](Literal l) { return m.satisfies(l); });
      if (!sat) {
        m.set(it->atom, true);
        break;
      }
    }
  }
}

namespace {

class UnitPropagator {
public:
  UnitPropagator(std::uint32_t num_atoms, std::vector<std::vector<Literal>> &clauses)
      : clauses_(clauses), value_(num_atoms + 1, 0), start_(2 * (num_atoms + 1) + 1, 0), open_(clauses.size(), 0),
        sat_(clauses.size(), 0) {
    // Flat occurrence lists: one count pass, one fill pass.
    std::size_t total = 0;
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      open_[i] = static_cast<std::uint32_t>(clauses_[i].size());
      total += clauses_[i].size();
      for (Literal l : clauses_[i])
        ++start_[l.code() + 1];
    }
    for (std::size_t k = 1; k < start_.size(); ++k)
      start_[k] += start_[k - 1];
    occ_.resize(total);
    std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < clauses_.size(); ++i)
      for (Literal l : clauses_[i])
        occ_[fill[l.code()]++] = static_cast<std::uint32_t>(i);
  }

  /// Returns false on a top-level conflict.
  bool run() {
    for (const auto &c : clauses_) {
      if (c.empty())
        return false;
      if (c.size() == 1 && !assign(c[0]))
        return false;
    }
    while (head_ < queue_.size()) {
      Literal l = queue_[head_++];
      for (std::uint32_t k = start_[l.code()]; k < start_[l.code() + 1]; ++k)
        sat_[occ_[k]] = 1;
      for (std::uint32_t k = start_[(~l).code()]; k < start_[(~l).code() + 1]; ++k) {
        const std::uint32_t ci = occ_[k];
        if (sat_[ci])
          continue;
        if (--open_[ci] == 0)
          return false;
        if (open_[ci] == 1) {
          for (Literal x : clauses_[ci]) {
            if (value(x) == 0) {
              if (!assign(x))
                return false;
              break;
            }
          }
        }
      }
    }
    return true;
  }

  [[nodiscard]] int value(Literal l) const {
    int v = value_[l.atom()];
    return l.is_negative() ? -v : v;
  }
  [[nodiscard]] int atom_value(Atom a) const { return value_[a]; }
  [[nodiscard]] bool satisfied(std::size_t ci) const { return sat_[ci] != 0; }

private:
  bool assign(Literal l) {
    int v = value(l);
    if (v > 0)
      return true;
    if (v < 0)
      return false;
    value_[l.atom()] = l.is_negative() ? -1 : 1;
    queue_.push_back(l);
    return true;
  }

  std::vector<std::vector<Literal>> &clauses_;
  std::vector<int> value_;
  std::vector<std::uint32_t> start_;
  std::vector<std::uint32_t> occ_;
  std::vector<std::uint32_t> open_;
  std::vector<std::uint8_t> sat_;
  std::vector<Literal> queue_;
  std::size_t head_ = 0;
};

/// Resolves on `pivot` (positive in `pos`, negative in `neg`). Returns false
/// for a tautological resolvent.
bool resolve(const std::vector<Literal> &pos, const std::vector<Literal> &neg, Atom pivot,
             std::vector<Literal> &out) {
  out.clear();
  for (Literal l : pos)
    if (l.atom() != pivot)
      out.push_back(l);
  for (Literal l : neg)
    if (l.atom() != pivot)
      out.push_back(l);
  return normalize_literals(out);
}

} // namespace

SimplifiedFormula simplify(const Formula &f, std::span<const Atom> frozen, const SimplifyOptions &opts) {
  const std::uint32_t n = f.num_atoms;
  SimplifiedFormula out;
  out.formula.num_atoms = n;
  out.status.assign(n + 1, AtomStatus::active);

  std::vector<std::vector<Literal>> clauses;
  clauses.reserve(f.clauses.size());
  for (const auto &c : f.clauses) {
    std::vector<Literal> lits = c.literals;
    if (normalize_literals(lits))
      clauses.push_back(std::move(lits));
  }

  std::vector<std::vector<Literal>> live;
  // Without unit or empty clauses there is nothing to propagate.
  const bool propagate = std::any_of(clauses.begin(), clauses.end(), [](const auto &c) { return c.size() <= 1; });
  if (!propagate) {
    live = std::move(clauses);
  } else {
    UnitPropagator up(n, clauses);
    if (!up.run()) {
      out.inconsistent = true;
      return out;
    }
    for (Atom a = 1; a <= n; ++a) {
      if (up.atom_value(a) > 0)
        out.status[a] = AtomStatus::fixed_true;
      else if (up.atom_value(a) < 0)
        out.status[a] = AtomStatus::fixed_false;
    }
    live.reserve(clauses.size());
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      if (up.satisfied(i))
        continue;
      auto &lits = clauses[i];
      lits.erase(std::remove_if(lits.begin(), lits.end(), [&](Literal l) { return up.value(l) != 0; }), lits.end());
      live.push_back(std::move(lits));
    }
  }

  std::vector<std::uint8_t> is_frozen(n + 1, 0);
  for (Atom a : frozen)
    if (a >= 1 && a <= n)
      is_frozen[a] = 1;
  bool candidates = false;
  for (Atom a = 1; a <= n && !candidates; ++a)
    candidates = !is_frozen[a] && out.status[a] == AtomStatus::active;

  out.formula.clauses.reserve(live.size());
  if (opts.eliminate && candidates) {
    std::vector<std::uint8_t> alive(live.size(), 1);
    std::vector<std::vector<std::size_t>> occ(2 * (n + 1));
    for (std::size_t i = 0; i < live.size(); ++i)
      for (Literal l : live[i])
        occ[l.code()].push_back(i);

    auto collect = [&](Literal l) {
      std::vector<std::size_t> ids;
      for (std::size_t ci : occ[l.code()])
        if (alive[ci])
          ids.push_back(ci);
      return ids;
    };

    std::vector<Literal> scratch;
    for (Atom a = 1; a <= n; ++a) {
      if (is_frozen[a] || out.status[a] != AtomStatus::active)
        continue;
      auto pos = collect(Literal::positive(a));
      auto neg = collect(Literal::negative(a));
      if (pos.size() > opts.max_occurrences || neg.size() > opts.max_occurrences)
        continue;

      std::vector<std::vector<Literal>> resolvents;
      bool rejected = false;
      const std::size_t budget = pos.size() + neg.size();
      for (std::size_t pi : pos) {
        for (std::size_t ni : neg) {
          if (!resolve(live[pi], live[ni], a, scratch))
            continue;
          if (scratch.size() > opts.max_resolvent_size || resolvents.size() + 1 > budget) {
            rejected = true;
            break;
          }
          resolvents.push_back(scratch);
        }
        if (rejected)
          break;
      }
      if (rejected)
        continue;

      EliminationRecord rec;
      rec.atom = a;
      for (std::size_t ci : pos) {
        rec.clauses.emplace_back(live[ci]);
        alive[ci] = 0;
      }
      for (std::size_t ci : neg) {
        rec.clauses.emplace_back(live[ci]);
        alive[ci] = 0;
      }
      out.eliminations.push_back(std::move(rec));
      out.status[a] = AtomStatus::eliminated;

      for (auto &r : resolvents) {
        if (r.empty()) {
          out.inconsistent = true;
          return out;
        }
        std::size_t id = live.size();
        for (Literal l : r)
          occ[l.code()].push_back(id);
        live.push_back(std::move(r));
        alive.push_back(1);
      }
    }

    for (std::size_t i = 0; i < live.size(); ++i)
      if (alive[i])
        out.formula.clauses.emplace_back(std::move(live[i]), ClauseKind::input);
  } else {
    for (auto &lits : live)
      out.formula.clauses.emplace_back(std::move(lits), ClauseKind::input);
  }
  return out;
}

} // namespace drivesat
