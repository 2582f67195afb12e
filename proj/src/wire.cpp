#include "drivesat/wire.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <fcntl.h>
#include <istream>
#include <ostream>
#include <poll.h>
#include <sstream>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

namespace drivesat::wire {

namespace {

constexpr std::string_view kTags[] = {"SEARCH", "INCOCHOICE", "CONFLICT", "LEARN",
                                      "LITCONFLICT", "DELETE", "RESTART", "UNROLLLIT"};

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
      ++j;
    if (j > i)
      out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T> bool to_int(std::string_view s, T &v) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

[[noreturn]] void malformed(std::string_view line, std::string_view why) {
  throw ProtocolViolation("malformed driver line '" + std::string(line) + "': " + std::string(why));
}

void append_lits(std::string &s, std::span<const Literal> lits) {
  for (Literal l : lits) {
    s += ' ';
    s += std::to_string(l.to_dimacs());
  }
  s += " 0";
}

char sign_char(Sign s) { return s == Sign::p ? 'p' : s == Sign::n ? 'n' : 'f'; }

std::optional<Sign> sign_from(std::string_view t) {
  if (t == "p")
    return Sign::p;
  if (t == "n")
    return Sign::n;
  if (t == "f")
    return Sign::f;
  return std::nullopt;
}

// Cursor over the tokens of one line.
struct Reader {
  std::string_view line;
  std::vector<std::string_view> toks;
  std::size_t pos = 0;

  template <class T> T num(std::string_view what) {
    if (pos >= toks.size())
      malformed(line, "missing " + std::string(what));
    T v{};
    if (!to_int(toks[pos], v))
      malformed(line, "bad " + std::string(what) + " '" + std::string(toks[pos]) + "'");
    ++pos;
    return v;
  }
  Atom atom() {
    auto a = num<std::int64_t>("atom");
    if (a <= 0 || a > std::numeric_limits<Atom>::max())
      malformed(line, "atom out of range");
    return static_cast<Atom>(a);
  }
  std::optional<Literal> lit_or_bottom() {
    auto v = num<std::int64_t>("literal");
    if (v == 0)
      return std::nullopt;
    if (v < -std::numeric_limits<int>::max() || v > std::numeric_limits<int>::max())
      malformed(line, "literal out of range");
    return Literal::from_dimacs(static_cast<int>(v));
  }
  Literal lit() {
    auto l = lit_or_bottom();
    if (!l)
      malformed(line, "literal 0 not allowed here");
    return *l;
  }
  std::vector<Literal> clause() {
    std::vector<Literal> out;
    for (;;) {
      auto l = lit_or_bottom();
      if (!l)
        return out;
      out.push_back(*l);
    }
  }
  std::size_t count() {
    auto k = num<std::int64_t>("count");
    if (k < 0 || static_cast<std::size_t>(k) > toks.size())
      malformed(line, "count out of range");
    return static_cast<std::size_t>(k);
  }
  Sign sign(bool allow_free) {
    if (pos >= toks.size())
      malformed(line, "missing sign");
    auto s = sign_from(toks[pos]);
    if (!s || (!allow_free && *s == Sign::f))
      malformed(line, "bad sign '" + std::string(toks[pos]) + "'");
    ++pos;
    return *s;
  }
  void done() {
    if (pos != toks.size())
      malformed(line, "unexpected trailing '" + std::string(toks[pos]) + "'");
  }
};

} // namespace

std::string_view event_tag(EventKind k) { return kTags[static_cast<std::size_t>(k)]; }

std::optional<EventKind> event_from_tag(std::string_view tag) {
  for (std::size_t i = 0; i < kNumEventKinds; ++i)
    if (kTags[i] == tag)
      return static_cast<EventKind>(i);
  return std::nullopt;
}

std::vector<std::string> encode_event(const Event &e) {
  std::vector<std::string> out;
  std::string s = "EVT ";
  s += event_tag(kind_of(e));
  std::visit(
      [&](const auto &ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, event::Search>) {
          s += ' ' + std::to_string(ev.num_atoms) + ' ' + std::to_string(ev.clauses.size());
          out.push_back(s);
          for (const auto &c : ev.clauses) {
            std::string cl = "CL";
            append_lits(cl, c.literals);
            out.push_back(std::move(cl));
          }
          return;
        } else if constexpr (std::is_same_v<T, event::IncoChoice> || std::is_same_v<T, event::LitInConflict> ||
                             std::is_same_v<T, event::UnrollLit>) {
          s += ' ' + std::to_string(ev.literal.to_dimacs());
        } else if constexpr (std::is_same_v<T, event::Conflict>) {
          s += ' ' + std::to_string(ev.decision ? ev.decision->to_dimacs() : 0);
        } else if constexpr (std::is_same_v<T, event::LearnClause> || std::is_same_v<T, event::Deletion>) {
          append_lits(s, ev.literals);
        }
        out.push_back(s);
      },
      e);
  return out;
}

std::string encode_response(const Response &r) {
  std::string s = "RSP ";
  std::visit(
      [&](const auto &rsp) {
        using T = std::decay_t<decltype(rsp)>;
        if constexpr (std::is_same_v<T, response::Freeze>) {
          s += "FREEZE " + std::to_string(rsp.atoms.size());
          for (Atom a : rsp.atoms)
            s += ' ' + std::to_string(a);
        } else if constexpr (std::is_same_v<T, response::Choice>) {
          s += "CHOICE " + std::to_string(rsp.plan.size());
          for (const auto &e : rsp.plan) {
            s += ' ' + std::to_string(e.atom) + ' ';
            s += sign_char(e.sign);
          }
        } else if constexpr (std::is_same_v<T, response::Unroll>) {
          s += "UNROLL " + std::to_string(rsp.target ? rsp.target->to_dimacs() : 0);
        } else if constexpr (std::is_same_v<T, response::Fallback>) {
          s += "FALLBACK " + std::to_string(rsp.n);
          for (const auto *m : {&rsp.initial_activity, &rsp.factor}) {
            s += ' ' + std::to_string(m->size());
            for (const auto &[a, v] : *m)
              s += ' ' + std::to_string(a) + ' ' + std::to_string(v);
          }
          s += ' ' + std::to_string(rsp.sign.size());
          for (const auto &[a, sg] : rsp.sign) {
            s += ' ' + std::to_string(a) + ' ';
            s += sign_char(sg);
          }
        } else {
          s += "ADDCLAUSE";
          append_lits(s, rsp.literals);
        }
      },
      r);
  return s;
}

Response decode_response(std::string_view line) {
  Reader rd{line, tokens(line)};
  if (rd.toks.size() < 2 || rd.toks[0] != "RSP")
    malformed(line, "expected an RSP record");
  std::string_view kind = rd.toks[1];
  rd.pos = 2;
  Response out;
  if (kind == "FREEZE") {
    response::Freeze f;
    for (std::size_t k = rd.count(); k > 0; --k)
      f.atoms.push_back(rd.atom());
    out = std::move(f);
  } else if (kind == "CHOICE") {
    response::Choice c;
    for (std::size_t k = rd.count(); k > 0; --k) {
      Atom a = rd.atom();
      c.plan.push_back({a, rd.sign(true)});
    }
    out = std::move(c);
  } else if (kind == "UNROLL") {
    out = response::Unroll{rd.lit_or_bottom()};
  } else if (kind == "FALLBACK") {
    response::Fallback fb;
    fb.n = rd.num<std::int64_t>("n");
    for (auto *m : {&fb.initial_activity, &fb.factor})
      for (std::size_t k = rd.count(); k > 0; --k) {
        Atom a = rd.atom();
        m->emplace_back(a, rd.num<std::uint64_t>("value"));
      }
    for (std::size_t k = rd.count(); k > 0; --k) {
      Atom a = rd.atom();
      fb.sign.emplace_back(a, rd.sign(false));
    }
    out = std::move(fb);
  } else if (kind == "ADDCLAUSE") {
    out = response::AddClause{rd.clause()};
  } else {
    malformed(line, "unknown response '" + std::string(kind) + "'");
  }
  rd.done();
  return out;
}

std::string encode_subscription(EventMask m) {
  std::string s = "SUB";
  for (std::size_t i = 0; i < kNumEventKinds; ++i)
    if (m.has(static_cast<EventKind>(i))) {
      s += ' ';
      s += kTags[i];
    }
  return s;
}

EventMask decode_subscription(std::string_view line) {
  auto toks = tokens(line);
  if (toks.empty() || toks[0] != "SUB")
    malformed(line, "expected SUB");
  EventMask m;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    auto k = event_from_tag(toks[i]);
    if (!k)
      malformed(line, "unknown event '" + std::string(toks[i]) + "'");
    m.set(*k);
  }
  return m;
}

std::uint64_t trail_checksum(std::span<const Literal> trail) {
  std::vector<int> v;
  v.reserve(trail.size());
  for (Literal l : trail)
    v.push_back(l.to_dimacs());
  std::sort(v.begin(), v.end());
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&](char c) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  };
  for (int x : v) {
    for (char c : std::to_string(x))
      mix(c);
    mix(' ');
  }
  return h;
}

std::chrono::milliseconds default_timeout() {
  if (const char *env = std::getenv("DRIVESAT_DRIVER_TIMEOUT")) {
    char *end = nullptr;
    double secs = std::strtod(env, &end);
    if (end != env && secs > 0)
      return std::chrono::milliseconds(static_cast<std::int64_t>(secs * 1000));
  }
  return std::chrono::seconds(60);
}

// ---------------------------------------------------------------------------

ExternalDriver::ExternalDriver(std::string command, ExternalOptions opts)
    : command_(std::move(command)), opts_(std::move(opts)) {
  std::signal(SIGPIPE, SIG_IGN); // a dead child must surface as EPIPE, not kill us
  int in[2];
  int out[2];
  if (pipe2(in, O_CLOEXEC) != 0)
    throw ProtocolViolation("cannot create pipe: " + std::string(std::strerror(errno)));
  if (pipe2(out, O_CLOEXEC) != 0) {
    close(in[0]);
    close(in[1]);
    throw ProtocolViolation("cannot create pipe: " + std::string(std::strerror(errno)));
  }
  pid_ = fork();
  if (pid_ < 0) {
    for (int fd : {in[0], in[1], out[0], out[1]})
      close(fd);
    throw ProtocolViolation("cannot start driver '" + command_ + "': " + std::strerror(errno));
  }
  if (pid_ == 0) {
    setpgid(0, 0); // so the whole shell pipeline can be killed at once
    dup2(in[0], STDIN_FILENO);
    dup2(out[1], STDOUT_FILENO);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }
  setpgid(pid_, pid_);
  group_ = pid_;
  close(in[0]);
  close(out[1]);
  to_child_ = in[1];
  from_child_ = out[0];

  try {
    send("HELLO " + std::to_string(kProtocolVersion));
    std::string ready = receive("HELLO");
    if (tokens(ready) != std::vector<std::string_view>{"READY"})
      malformed(ready, "expected READY");
    sub_ = decode_subscription(receive("HELLO"));
  } catch (...) {
    shutdown();
    throw;
  }
}

ExternalDriver::~ExternalDriver() { shutdown(); }

void ExternalDriver::shutdown() {
  if (pid_ <= 0)
    return;
  if (to_child_ >= 0) {
    try {
      send("BYE");
      flush();
    } catch (const ProtocolViolation &) {
      // the child is gone already
    }
    close(to_child_);
    to_child_ = -1;
  }
  // Give the child a moment to leave on its own.
  int status = 0;
  for (int i = 0; i < (unresponsive_ ? 0 : 400); ++i) {
    if (waitpid(pid_, &status, WNOHANG) != 0) {
      pid_ = -1;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  kill(-group_, SIGKILL); // leftovers of the shell command
  if (pid_ > 0) {
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
  if (from_child_ >= 0) {
    close(from_child_);
    from_child_ = -1;
  }
}

void ExternalDriver::send(const std::string &line) {
  if (opts_.tap)
    opts_.tap(true, line);
  outbuf_ += line;
  outbuf_ += '\n';
  if (outbuf_.size() >= (1U << 16))
    flush();
}

void ExternalDriver::flush() {
  std::size_t off = 0;
  while (off < outbuf_.size()) {
    ssize_t n = write(to_child_, outbuf_.data() + off, outbuf_.size() - off);
    if (n < 0) {
      if (errno == EINTR)
        continue;
      outbuf_.clear();
      throw ProtocolViolation("driver '" + command_ + "' stopped reading (" + std::strerror(errno) + ")");
    }
    off += static_cast<std::size_t>(n);
  }
  outbuf_.clear();
}

std::string ExternalDriver::receive(std::string_view expecting) {
  flush();
  const auto deadline = std::chrono::steady_clock::now() + opts_.timeout;
  for (;;) {
    auto nl = inbuf_.find('\n');
    if (nl != std::string::npos) {
      std::string line = inbuf_.substr(0, nl);
      inbuf_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (opts_.tap)
        opts_.tap(false, line);
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      unresponsive_ = true;
      throw ProtocolViolation("driver '" + command_ + "' did not reply to " + std::string(expecting) + " within " +
                              std::to_string(opts_.timeout.count()) + " ms");
    }
    pollfd p{from_child_, POLLIN, 0};
    int rc = poll(&p, 1, static_cast<int>(std::min<std::int64_t>(left.count(), 1 << 30)));
    if (rc < 0 && errno == EINTR)
      continue;
    if (rc <= 0)
      continue;
    char chunk[4096];
    ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR)
      continue;
    if (n <= 0) {
      std::string tail = inbuf_.empty() ? "" : " after partial line '" + inbuf_ + "'";
      throw ProtocolViolation("driver '" + command_ + "' exited while the solver waited for a reply to " +
                              std::string(expecting) + tail);
    }
    inbuf_.append(chunk, static_cast<std::size_t>(n));
  }
}

EventMask ExternalDriver::subscription() const {
  // UnrollLit is always needed to keep the child's trail mirror exact.
  return sub_ | EventMask{EventKind::unroll_lit};
}

void ExternalDriver::on_event(const Event &e) {
  EventKind k = kind_of(e);
  if (k == EventKind::unroll_lit) {
    bool mirrored = mirror_.on_unroll(std::get<event::UnrollLit>(e).literal);
    if (!mirrored && !sub_.has(k))
      return;
  } else if (!sub_.has(k)) {
    return;
  }
  for (const auto &line : encode_event(e))
    send(line);
}

Response ExternalDriver::answer(const Request &r) {
  if (const auto *fr = std::get_if<request::GetAtomsToBeFrozen>(&r)) {
    num_atoms_ = static_cast<std::uint32_t>(fr->atoms.size());
    mirror_.reset(num_atoms_);
    send("REQ FROZEN " + std::to_string(fr->atoms.size()));
    std::string line = receive("REQ FROZEN");
    Response rsp = decode_response(line);
    if (!std::holds_alternative<response::Freeze>(rsp))
      throw ProtocolViolation("driver answered REQ FROZEN with '" + line + "'");
    return rsp;
  }
  const Interpretation &view = *std::get<request::GetChoice>(r).interpretation;
  send("REQ CHOICE");
  for (Literal l : mirror_.sync(view))
    send("ASG " + std::to_string(l.to_dimacs()) + ' ' + std::to_string(view.level(l.atom())));
  if (opts_.checksum)
    send("CHK " + std::to_string(trail_checksum(view.trail())));
  send("END");
  std::string line = receive("REQ CHOICE");
  Response rsp = decode_response(line);
  if (std::holds_alternative<response::Freeze>(rsp))
    throw ProtocolViolation("driver answered REQ CHOICE with '" + line + "'");
  return rsp;
}

// ---------------------------------------------------------------------------

namespace {

// Child-side copy of the solver state, rebuilt from the line stream.
class Session {
public:
  Session(Driver &d, std::istream &in, std::ostream &out) : d_(d), in_(in), out_(out), mask_(d.subscription()) {}

  int run(std::ostream &err) {
    std::string line;
    try {
      while (std::getline(in_, line)) {
        if (!line.empty() && line.back() == '\r')
          line.pop_back();
        if (line.empty())
          continue;
        if (!step(line))
          return 0;
      }
      return 0;
    } catch (const std::exception &e) {
      err << "drivesat driver: " << e.what() << " (at line '" << line << "')\n";
      return 1;
    }
  }

private:
  bool step(std::string_view line) {
    Reader rd{line, tokens(line)};
    if (rd.toks.empty())
      return true;
    std::string_view head = rd.toks[0];
    rd.pos = 1;
    if (head == "HELLO") {
      if (rd.num<int>("version") != kProtocolVersion)
        malformed(line, "unsupported protocol version");
      out_ << "READY\n" << encode_subscription(mask_) << '\n' << std::flush;
    } else if (head == "EVT") {
      event(rd);
    } else if (head == "REQ") {
      request(rd);
    } else if (head == "BYE") {
      return false;
    } else {
      malformed(line, "unknown record");
    }
    return true;
  }

  void resize(std::uint32_t n) {
    if (n <= num_atoms_)
      return;
    num_atoms_ = n;
    values_.resize(n + 1, Truth::Undef);
    levels_.resize(n + 1, 0);
    eliminated_.resize(n + 1, 0);
    frozen_.resize(n + 1, 0);
  }

  void event(Reader &rd) {
    if (rd.pos >= rd.toks.size())
      malformed(rd.line, "missing event name");
    auto kind = event_from_tag(rd.toks[rd.pos++]);
    if (!kind)
      malformed(rd.line, "unknown event");
    const bool forward = mask_.has(*kind);
    switch (*kind) {
    case EventKind::search: {
      auto n = rd.num<std::uint32_t>("atom count");
      auto m = rd.num<std::size_t>("clause count");
      rd.done();
      resize(n);
      clauses_.clear();
      std::vector<std::uint8_t> used(n + 1, 0);
      std::string cl;
      for (std::size_t i = 0; i < m; ++i) {
        if (!std::getline(in_, cl))
          malformed(rd.line, "input ended inside the clause list");
        Reader c{cl, tokens(cl)};
        if (c.toks.empty() || c.toks[0] != "CL")
          malformed(cl, "expected CL");
        c.pos = 1;
        auto lits = c.clause();
        c.done();
        for (Literal l : lits) {
          if (l.atom() > n)
            malformed(cl, "atom beyond declared count");
          used[l.atom()] = 1;
        }
        clauses_.emplace_back(std::move(lits), ClauseKind::input);
      }
      // The engine keeps exactly the frozen atoms and the atoms still
      // occurring in clauses; everything else unassigned was eliminated.
      active_.clear();
      for (Atom a = 1; a <= n; ++a) {
        bool active = used[a] != 0 || frozen_[a] != 0;
        eliminated_[a] = (!active && values_[a] == Truth::Undef) ? 1 : 0;
        if (active)
          active_.push_back(a);
      }
      if (forward)
        d_.on_event(event::Search{clauses_, active_, n});
      return;
    }
    case EventKind::unroll_lit: {
      Literal l = rd.lit();
      rd.done();
      if (l.atom() <= num_atoms_ && values_[l.atom()] != Truth::Undef) {
        if (trail_.empty() || trail_.back() != l)
          throw std::runtime_error("UNROLLLIT " + std::to_string(l.to_dimacs()) + " is not the top of the mirror");
        trail_.pop_back();
        values_[l.atom()] = Truth::Undef;
      }
      if (forward)
        d_.on_event(event::UnrollLit{l});
      return;
    }
    case EventKind::inco_choice: {
      Literal l = rd.lit();
      rd.done();
      if (forward)
        d_.on_event(event::IncoChoice{l});
      return;
    }
    case EventKind::lit_in_conflict: {
      Literal l = rd.lit();
      rd.done();
      if (forward)
        d_.on_event(event::LitInConflict{l});
      return;
    }
    case EventKind::conflict: {
      auto l = rd.lit_or_bottom();
      rd.done();
      if (forward)
        d_.on_event(event::Conflict{l});
      return;
    }
    case EventKind::learn_clause:
    case EventKind::deletion: {
      auto lits = rd.clause();
      rd.done();
      if (!forward)
        return;
      if (*kind == EventKind::learn_clause)
        d_.on_event(event::LearnClause{lits});
      else
        d_.on_event(event::Deletion{lits});
      return;
    }
    case EventKind::restart:
      rd.done();
      if (forward)
        d_.on_event(event::Restart{});
      return;
    }
  }

  void request(Reader &rd) {
    if (rd.pos >= rd.toks.size())
      malformed(rd.line, "missing request name");
    std::string_view kind = rd.toks[rd.pos++];
    if (kind == "FROZEN") {
      auto n = rd.num<std::uint32_t>("atom count");
      rd.done();
      resize(n);
      std::vector<Atom> atoms(n);
      for (Atom a = 1; a <= n; ++a)
        atoms[a - 1] = a;
      Response rsp = d_.answer(request::GetAtomsToBeFrozen{atoms});
      if (const auto *f = std::get_if<response::Freeze>(&rsp))
        for (Atom a : f->atoms)
          if (a >= 1 && a <= n)
            frozen_[a] = 1;
      out_ << encode_response(rsp) << '\n' << std::flush;
      return;
    }
    if (kind != "CHOICE")
      malformed(rd.line, "unknown request");
    rd.done();
    std::string line;
    for (;;) {
      if (!std::getline(in_, line))
        throw std::runtime_error("input ended inside REQ CHOICE");
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      Reader r{line, tokens(line)};
      if (r.toks.empty())
        continue;
      r.pos = 1;
      if (r.toks[0] == "END") {
        r.done();
        break;
      }
      if (r.toks[0] == "ASG") {
        Literal l = r.lit();
        auto lv = r.num<std::uint32_t>("level");
        r.done();
        resize(l.atom());
        if (values_[l.atom()] != Truth::Undef)
          throw std::runtime_error("ASG for already assigned atom " + std::to_string(l.atom()));
        values_[l.atom()] = l.is_negative() ? Truth::False : Truth::True;
        levels_[l.atom()] = lv;
        eliminated_[l.atom()] = 0;
        trail_.push_back(l);
      } else if (r.toks[0] == "CHK") {
        auto want = r.num<std::uint64_t>("checksum");
        r.done();
        if (want != trail_checksum(trail_))
          throw std::runtime_error("trail mirror diverged from the solver (checksum mismatch)");
      } else {
        malformed(line, "unexpected record inside REQ CHOICE");
      }
    }
    std::uint32_t dl = trail_.empty() ? 0 : levels_[trail_.back().atom()];
    Interpretation view(values_, levels_, trail_, eliminated_, dl);
    Response rsp = d_.answer(request::GetChoice{&view});
    out_ << encode_response(rsp) << '\n' << std::flush;
  }

  Driver &d_;
  std::istream &in_;
  std::ostream &out_;
  EventMask mask_;
  std::uint32_t num_atoms_ = 0;
  std::vector<Truth> values_{Truth::Undef};
  std::vector<std::uint32_t> levels_{0};
  std::vector<std::uint8_t> eliminated_{0};
  std::vector<std::uint8_t> frozen_{0};
  std::vector<Literal> trail_;
  std::vector<Clause> clauses_;
  std::vector<Atom> active_;
};

} // namespace

int serve(Driver &driver, std::istream &in, std::ostream &out, std::ostream &err) {
  Session s(driver, in, out);
  return s.run(err);
}

} // namespace drivesat::wire
