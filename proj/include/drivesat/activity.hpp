#ifndef DRIVESAT_ACTIVITY_HPP
#define DRIVESAT_ACTIVITY_HPP

#include "drivesat/driver.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace drivesat {

struct ActivityConfig {
  /// `inc` is multiplied by this after every learned clause.
  double decay_factor = 1.0 / 0.95;
  double rescale_limit = 1e100;
  double rescale_factor = 1e-100;
  /// Also bump atoms reported through LitInConflict (VSIDS-style variants).
  bool bump_on_lit_in_conflict = false;
  /// Seed activities from clause occurrences in the Search event instead of 0.
  bool init_from_search = false;
};

/// Activity bookkeeping of the MiniSAT branching heuristic: per-atom activity,
/// the current bump increment, per-atom amplifying factors, sign preferences
/// and a max-priority order over atoms. Ties in activity are broken by a
/// seeded random rank, so the selected atom is a function of the seed.
class ActivityState {
public:
  ActivityState() = default;
  ActivityState(std::uint32_t num_atoms, std::uint64_t seed, ActivityConfig cfg = {});

  [[nodiscard]] std::uint32_t num_atoms() const { return num_atoms_; }
  [[nodiscard]] const ActivityConfig &config() const { return cfg_; }

  [[nodiscard]] double activity(Atom a) const { return activity_[a]; }
  [[nodiscard]] double inc() const { return inc_; }
  [[nodiscard]] double factor(Atom a) const { return factor_[a]; }
  [[nodiscard]] std::optional<Sign> sign_pref(Atom a) const;
  [[nodiscard]] std::uint32_t tie_rank(Atom a) const { return rank_[a]; }

  /// activity(a) += inc * factor(a), rescaling everything if it overflows.
  void bump(Atom a);
  void decay() { inc_ *= cfg_.decay_factor; }
  /// Bumps every atom of a learned clause, then decays.
  void on_learn(std::span<const Literal> clause);
  void rescale();

  /// Replaces the activity of `a`, keeping the order consistent.
  void set_activity(Atom a, double value);
  void set_factor(Atom a, double value) { factor_[a] = value; }
  void set_sign_pref(Atom a, Sign s) { sign_[a] = s; }

  // Order over candidate atoms.
  void insert(Atom a);
  [[nodiscard]] bool contains(Atom a) const { return pos_[a] >= 0; }
  [[nodiscard]] bool order_empty() const { return heap_.empty(); }
  /// Removes atoms failing `eligible` from the top of the order and returns the
  /// first eligible one, which is removed too. Empty when none is left.
  std::optional<Atom> pop_best(const std::function<bool(Atom)> &eligible);

private:
  [[nodiscard]] bool before(Atom x, Atom y) const {
    return activity_[x] > activity_[y] || (activity_[x] == activity_[y] && rank_[x] < rank_[y]);
  }
  void sift_up(std::size_t i);
  void sift_down(std::size_t i);
  Atom pop_top();

  std::uint32_t num_atoms_ = 0;
  ActivityConfig cfg_;
  double inc_ = 1.0;
  std::vector<double> activity_;
  std::vector<double> factor_;
  std::vector<Sign> sign_; // Sign::f means "no preference"
  std::vector<std::uint32_t> rank_;
  std::vector<Atom> heap_;
  std::vector<std::int64_t> pos_;
};

} // namespace drivesat

#endif
