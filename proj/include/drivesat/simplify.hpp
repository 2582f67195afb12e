#ifndef DRIVESAT_SIMPLIFY_HPP
#define DRIVESAT_SIMPLIFY_HPP

#include "drivesat/formula.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace drivesat {

enum class AtomStatus : std::uint8_t { active, eliminated, fixed_true, fixed_false };

struct EliminationRecord {
  Atom atom = 0;
  /// Every clause that mentioned `atom` when it was eliminated.
  std::vector<Clause> clauses;
};

struct SimplifyOptions {
  bool eliminate = true;
  /// Atoms with more occurrences of either sign are not considered.
  std::size_t max_occurrences = 16;
  std::size_t max_resolvent_size = 24;
};

struct SimplifiedFormula {
  Formula formula;
  std::vector<AtomStatus> status; // indexed by atom, slot 0 unused
  std::vector<EliminationRecord> eliminations;
  bool inconsistent = false;

  [[nodiscard]] std::vector<Atom> active_atoms() const;
  [[nodiscard]] std::vector<Atom> eliminated_atoms() const;
  /// Fills fixed atoms and replays eliminations in reverse. Values of active
  /// atoms must already be set.
  void extend_model(Model &m) const;
};

/// Top-level unit propagation followed by bounded variable elimination of
/// non-frozen atoms. An elimination is kept only if it does not increase the
/// clause count.
SimplifiedFormula simplify(const Formula &f, std::span<const Atom> frozen, const SimplifyOptions &opts = {});

} // namespace drivesat

#endif
