#include "drivesat/activity.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace drivesat {

ActivityState::ActivityState(std::uint32_t num_atoms, std::uint64_t seed, ActivityConfig cfg)
    : num_atoms_(num_atoms), cfg_(cfg), activity_(num_atoms + 1, 0.0), factor_(num_atoms + 1, 1.0),
      sign_(num_atoms + 1, Sign::f), rank_(num_atoms + 1, 0), pos_(num_atoms + 1, -1) {
  std::vector<std::uint32_t> perm(num_atoms);
  std::iota(perm.begin(), perm.end(), 0U);
  std::mt19937_64 rng(seed);
  // Fisher-Yates written out: std::shuffle's draw sequence is library-specific.
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::uint64_t j = rng() % i;
    std::swap(perm[i - 1], perm[j]);
  }
  for (Atom a = 1; a <= num_atoms; ++a)
    rank_[a] = perm[a - 1];
  heap_.reserve(num_atoms);
}

std::optional<Sign> ActivityState::sign_pref(Atom a) const {
  if (sign_[a] == Sign::f)
    return std::nullopt;
  return sign_[a];
}

void ActivityState::bump(Atom a) {
  activity_[a] += inc_ * factor_[a];
  if (activity_[a] > cfg_.rescale_limit)
    rescale();
  if (contains(a))
    sift_up(static_cast<std::size_t>(pos_[a]));
}

void ActivityState::on_learn(std::span<const Literal> clause) {
  for (Literal l : clause)
    bump(l.atom());
  decay();
}

void ActivityState::rescale() {
  for (auto &v : activity_)
    v *= cfg_.rescale_factor;
  inc_ *= cfg_.rescale_factor;
}

void ActivityState::set_activity(Atom a, double value) {
  double old = activity_[a];
  activity_[a] = value;
  if (!contains(a))
    return;
  if (value >= old)
    sift_up(static_cast<std::size_t>(pos_[a]));
  else
    sift_down(static_cast<std::size_t>(pos_[a]));
}

void ActivityState::insert(Atom a) {
  if (contains(a))
    return;
  pos_[a] = static_cast<std::int64_t>(heap_.size());
  heap_.push_back(a);
  sift_up(heap_.size() - 1);
}

std::optional<Atom> ActivityState::pop_best(const std::function<bool(Atom)> &eligible) {
  while (!heap_.empty()) {
    Atom a = pop_top();
    if (eligible(a))
      return a;
  }
  return std::nullopt;
}

Atom ActivityState::pop_top() {
  Atom top = heap_.front();
  Atom last = heap_.back();
  heap_.pop_back();
  pos_[top] = -1;
  if (!heap_.empty()) {
    heap_[0] = last;
    pos_[last] = 0;
    sift_down(0);
  }
  return top;
}

void ActivityState::sift_up(std::size_t i) {
  Atom x = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!before(x, heap_[parent]))
      break;
    heap_[i] = heap_[parent];
    pos_[heap_[i]] = static_cast<std::int64_t>(i);
    i = parent;
  }
  heap_[i] = x;
  pos_[x] = static_cast<std::int64_t>(i);
}

void ActivityState::sift_down(std::size_t i) {
  Atom x = heap_[i];
  const std::size_t n = heap_.size();
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= n)
      break;
    if (child + 1 < n && before(heap_[child + 1], heap_[child]))
      ++child;
    if (!before(heap_[child], x))
      break;
    heap_[i] = heap_[child];
    pos_[heap_[i]] = static_cast<std::int64_t>(i);
    i = child;
  }
  heap_[i] = x;
  pos_[x] = static_cast<std::int64_t>(i);
}

} // namespace drivesat
