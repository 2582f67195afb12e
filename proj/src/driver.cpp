#include "drivesat/driver.hpp"

#include <algorithm>

namespace drivesat {

std::string_view event_name(EventKind kind) {
  switch (kind) {
  case EventKind::search: return "Search";
  case EventKind::inco_choice: return "IncoChoice";
  case EventKind::conflict: return "Conflict";
  case EventKind::learn_clause: return "LearnClause";
  case EventKind::lit_in_conflict: return "LitInConflict";
  case EventKind::deletion: return "Deletion";
  case EventKind::restart: return "Restart";
  case EventKind::unroll_lit: return "UnrollLit";
  }
  return "?";
}

std::string_view request_name(const Request &r) {
  return std::holds_alternative<request::GetAtomsToBeFrozen>(r) ? "GetAtomsToBeFrozen" : "GetChoice";
}

std::string_view response_name(const Response &r) {
  static constexpr std::string_view names[] = {"Freeze", "Choice", "Unroll", "Fallback", "AddClause"};
  return names[r.index()];
}

void check_pairing(const Request &req, const Response &rsp) {
  bool frozen_req = std::holds_alternative<request::GetAtomsToBeFrozen>(req);
  bool freeze_rsp = std::holds_alternative<response::Freeze>(rsp);
  if (frozen_req != freeze_rsp)
    throw ProtocolViolation("response " + std::string(response_name(rsp)) + " is not a legal reply to request " +
                            std::string(request_name(req)));
}

void TrailMirror::reset(std::uint32_t num_atoms) {
  values_.assign(num_atoms + 1, Truth::Undef);
  stack_.clear();
}

std::span<const Literal> TrailMirror::sync(const Interpretation &view) {
  if (values_.size() < view.num_atoms() + 1)
    values_.resize(view.num_atoms() + 1, Truth::Undef);
  auto trail = view.trail();
  std::size_t from = stack_.size();
  for (std::size_t i = from; i < trail.size(); ++i) {
    Literal l = trail[i];
    values_[l.atom()] = l.is_negative() ? Truth::False : Truth::True;
    stack_.push_back(l);
  }
  return std::span<const Literal>(stack_).subspan(std::min(from, stack_.size()));
}

bool TrailMirror::on_unroll(Literal l) {
  if (l.atom() >= values_.size() || values_[l.atom()] == Truth::Undef)
    return false;
  values_[l.atom()] = Truth::Undef;
  if (!stack_.empty() && stack_.back() == l) {
    stack_.pop_back();
  } else {
    auto it = std::find(stack_.begin(), stack_.end(), l);
    if (it != stack_.end())
      stack_.erase(it);
  }
  return true;
}

} // namespace drivesat
