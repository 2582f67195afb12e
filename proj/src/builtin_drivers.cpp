#include "drivesat/builtin_drivers.hpp"

#include <algorithm>
#include <stdexcept>

namespace drivesat {

Response minisat_choose(ActivityState &state, const Interpretation &view) {
  auto atom = state.pop_best([&](Atom a) { return view.is_undef(a) && !view.is_eliminated(a); });
  if (!atom)
    throw std::logic_error("minisat_choose: no undefined atom left");
  return response::Choice{{PlanEntry{*atom, state.sign_pref(*atom).value_or(Sign::n)}}};
}

MinisatDriver::MinisatDriver(std::uint64_t seed, ActivityConfig cfg) : seed_(seed), cfg_(cfg) {}

EventMask MinisatDriver::subscription() const {
  EventMask m{EventKind::search, EventKind::learn_clause, EventKind::unroll_lit};
  if (cfg_.bump_on_lit_in_conflict)
    m.set(EventKind::lit_in_conflict);
  return m;
}

void MinisatDriver::on_event(const Event &e) {
  if (const auto *s = std::get_if<event::Search>(&e)) {
    state_ = ActivityState(s->num_atoms, seed_, cfg_);
    if (cfg_.init_from_search) {
      std::vector<double> occ(s->num_atoms + 1, 0.0);
      for (const auto &c : s->clauses)
        for (Literal l : c.literals)
          occ[l.atom()] += 1.0;
      double top = *std::max_element(occ.begin(), occ.end());
      if (top > 0)
        for (Atom a = 1; a <= s->num_atoms; ++a)
          state_.set_activity(a, occ[a] / top);
    }
    for (Atom a = 1; a <= s->num_atoms; ++a)
      state_.insert(a);
  } else if (const auto *lc = std::get_if<event::LearnClause>(&e)) {
    state_.on_learn(lc->literals);
  } else if (const auto *lic = std::get_if<event::LitInConflict>(&e)) {
    if (cfg_.bump_on_lit_in_conflict)
      state_.bump(lic->literal.atom());
  } else if (const auto *u = std::get_if<event::UnrollLit>(&e)) {
    state_.insert(u->literal.atom());
  }
}

Response MinisatDriver::answer(const Request &r) {
  if (std::holds_alternative<request::GetAtomsToBeFrozen>(r))
    return response::Freeze{};
  return minisat_choose(state_, *std::get<request::GetChoice>(r).interpretation);
}

Response FallbackNowDriver::answer(const Request &r) {
  if (std::holds_alternative<request::GetAtomsToBeFrozen>(r))
    return response::Freeze{};
  return response::Fallback{};
}

// ---------------------------------------------------------------------------

std::optional<PigeonholeView> recognize_pigeonhole(std::span<const Clause> clauses, std::uint32_t num_atoms) {
  // Rows are the all-positive clauses; they fix the grid width.
  std::size_t row_count = 0;
  std::size_t width = 0;
  for (const auto &c : clauses) {
    bool all_pos = std::none_of(c.literals.begin(), c.literals.end(), [](Literal l) { return l.is_negative(); });
    if (!all_pos)
      continue;
    if (row_count == 0)
      width = c.size();
    else if (c.size() != width)
      return std::nullopt;
    ++row_count;
  }
  if (row_count == 0 || width == 0 || row_count * width != num_atoms)
    return std::nullopt;
  PigeonholeView v{static_cast<std::uint32_t>(row_count), static_cast<std::uint32_t>(width)};

  std::vector<std::uint8_t> row_seen(v.pigeons + 1, 0);
  // One bit per (hole, lower pigeon, upper pigeon).
  std::vector<std::uint8_t> pair_seen(static_cast<std::size_t>(v.holes) * v.pigeons * v.pigeons, 0);
  std::size_t distinct = 0;
  for (const auto &c : clauses) {
    const auto &ls = c.literals;
    bool all_pos = std::none_of(ls.begin(), ls.end(), [](Literal l) { return l.is_negative(); });
    if (all_pos) {
      std::vector<Atom> atoms;
      for (Literal l : ls)
        atoms.push_back(l.atom());
      std::sort(atoms.begin(), atoms.end());
      auto [pigeon, hole] = v.cell(atoms.front());
      if (hole != 1)
        return std::nullopt;
      for (std::uint32_t j = 0; j < v.holes; ++j)
        if (atoms[j] != v.var(pigeon, j + 1))
          return std::nullopt;
      row_seen[pigeon] = 1;
    } else if (ls.size() == 2 && ls[0].is_negative() && ls[1].is_negative()) {
      Atom a = std::min(ls[0].atom(), ls[1].atom());
      Atom b = std::max(ls[0].atom(), ls[1].atom());
      auto [pa, ha] = v.cell(a);
      auto [pb, hb] = v.cell(b);
      if (ha == hb && a != b) {
        auto &bit = pair_seen[(static_cast<std::size_t>(ha - 1) * v.pigeons + (pa - 1)) * v.pigeons + (pb - 1)];
        distinct += bit == 0 ? 1 : 0;
        bit = 1;
      }
    }
  }
  if (std::count(row_seen.begin() + 1, row_seen.end(), 1) != v.pigeons)
    return std::nullopt;
  const std::size_t needed = static_cast<std::size_t>(v.holes) * v.pigeons * (v.pigeons - 1) / 2;
  if (distinct != needed)
    return std::nullopt;
  return v;
}

Formula pigeonhole_formula(std::uint32_t pigeons, std::uint32_t holes) {
  PigeonholeView v{pigeons, holes};
  Formula f;
  f.num_atoms = pigeons * holes;
  for (std::uint32_t i = 1; i <= pigeons; ++i) {
    std::vector<Literal> row;
    for (std::uint32_t j = 1; j <= holes; ++j)
      row.push_back(Literal::positive(v.var(i, j)));
    f.add_clause(std::move(row));
  }
  for (std::uint32_t j = 1; j <= holes; ++j)
    for (std::uint32_t i = 1; i <= pigeons; ++i)
      for (std::uint32_t k = i + 1; k <= pigeons; ++k)
        f.add_clause({Literal::negative(v.var(i, j)), Literal::negative(v.var(k, j))});
  return f;
}

void PigeonholeDriver::on_event(const Event &e) {
  if (const auto *s = std::get_if<event::Search>(&e))
    view_ = recognize_pigeonhole(s->clauses, s->num_atoms);
}

Response PigeonholeDriver::answer(const Request &r) {
  if (const auto *fr = std::get_if<request::GetAtomsToBeFrozen>(&r))
    return response::Freeze{std::vector<Atom>(fr->atoms.begin(), fr->atoms.end())};
  if (view_ && view_->pigeons > view_->holes)
    return response::AddClause::bottom();
  return response::Fallback{};
}

Response PlanDriver::answer(const Request &r) {
  if (std::holds_alternative<request::GetAtomsToBeFrozen>(r)) {
    std::vector<Atom> atoms;
    for (const auto &e : plan_)
      atoms.push_back(e.atom);
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return response::Freeze{std::move(atoms)};
  }
  if (sent_)
    return response::Fallback{};
  sent_ = true;
  return response::Choice{plan_};
}

std::vector<PlanEntry> parse_plan(std::string_view text) {
  std::vector<PlanEntry> plan;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.size() < 2)
      throw std::invalid_argument("bad plan entry '" + std::string(item) + "'");
    char s = item.back();
    if (s != 'p' && s != 'n' && s != 'f')
      throw std::invalid_argument("bad plan sign in '" + std::string(item) + "'");
    std::string digits(item.substr(0, item.size() - 1));
    if (digits.find_first_not_of("0123456789") != std::string::npos || std::stoul(digits) == 0)
      throw std::invalid_argument("bad plan atom in '" + std::string(item) + "'");
    plan.push_back({static_cast<Atom>(std::stoul(digits)), s == 'p' ? Sign::p : s == 'n' ? Sign::n : Sign::f});
  }
  return plan;
}

void RandomDriver::on_event(const Event &) { ++events_; }

Response RandomDriver::answer(const Request &r) {
  if (const auto *fr = std::get_if<request::GetAtomsToBeFrozen>(&r))
    return response::Freeze{std::vector<Atom>(fr->atoms.begin(), fr->atoms.end())};
  const auto &v = *std::get<request::GetChoice>(r).interpretation;
  if (++requests_ > patience_)
    return response::Fallback{};
  const auto roll = rng_() % 10;
  if (roll == 0 && v.decision_level() > 0)
    return response::Unroll{};
  if (roll == 1 && v.decision_level() > 1) {
    std::vector<Literal> above;
    for (Literal l : v.trail())
      if (v.level(l.atom()) > 0)
        above.push_back(l);
    return response::Unroll{above[rng_() % above.size()]};
  }
  if (roll == 2)
    return response::Fallback{1, {}, {}, {}};
  std::vector<Atom> open;
  for (Atom a = 1; a <= v.num_atoms(); ++a)
    if (v.is_undef(a) && !v.is_eliminated(a))
      open.push_back(a);
  response::Choice c;
  const std::size_t k = 1 + rng_() % 3;
  for (std::size_t i = 0; i < k && !open.empty(); ++i)
    c.plan.push_back({open[rng_() % open.size()], static_cast<Sign>(rng_() % 3)});
  return c;
}

std::unique_ptr<Driver> make_builtin_driver(const std::string &name, std::uint64_t seed) {
  if (name == "default")
    return nullptr;
  if (name == "minisat")
    return std::make_unique<MinisatDriver>(seed);
  if (name == "pigeonhole")
    return std::make_unique<PigeonholeDriver>();
  if (name == "fallback")
    return std::make_unique<FallbackNowDriver>();
  if (name == "random")
    return std::make_unique<RandomDriver>(seed);
  if (name.rfind("plan:", 0) == 0)
    return std::make_unique<PlanDriver>(parse_plan(std::string_view(name).substr(5)));
  throw std::invalid_argument("unknown driver '" + name + "'");
}

} // namespace drivesat
