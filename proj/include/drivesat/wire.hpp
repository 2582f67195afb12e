#ifndef DRIVESAT_WIRE_HPP
#define DRIVESAT_WIRE_HPP
// Line protocol for drivers running in a separate process.
//
//   solver -> driver                       driver -> solver
//   HELLO 1                                READY
//                                          SUB <event names...>
//   EVT SEARCH <natoms> <nclauses>
//     CL <lits...> 0   (nclauses times)
//   EVT <name> [args]
//   REQ FROZEN <natoms>                    RSP FREEZE <k> <atoms...>
//   REQ CHOICE
//     ASG <lit> <level>  (trail delta)
//     [CHK <fnv64>]
//   END                                    RSP CHOICE | UNROLL | FALLBACK | ADDCLAUSE ...
//   BYE
//
// Literals are signed DIMACS integers; 0 stands for bottom.

#include "drivesat/driver.hpp"

#include <chrono>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <sys/types.h>
#include <vector>

namespace drivesat::wire {

inline constexpr int kProtocolVersion = 1;

std::string_view event_tag(EventKind k);
std::optional<EventKind> event_from_tag(std::string_view tag);

/// One line per event, except SEARCH which is followed by its CL lines.
std::vector<std::string> encode_event(const Event &e);
std::string encode_response(const Response &r);
/// Throws ProtocolViolation quoting the line when it is not a well-formed
/// RSP record.
Response decode_response(std::string_view line);

std::string encode_subscription(EventMask m);
EventMask decode_subscription(std::string_view line);

/// FNV-1a (64 bit) over the assigned literals sorted by DIMACS value, each
/// written in decimal followed by one space.
std::uint64_t trail_checksum(std::span<const Literal> trail);

/// Response timeout: DRIVESAT_DRIVER_TIMEOUT (seconds) if set, else 60 s.
std::chrono::milliseconds default_timeout();

struct ExternalOptions {
  std::chrono::milliseconds timeout = default_timeout();
  /// Send a CHK line with every REQ CHOICE.
  bool checksum = false;
  /// Sees every line crossing the pipe; `outgoing` is true for solver->driver.
  std::function<void(bool outgoing, std::string_view line)> tap;
};

/// Runs `command` through /bin/sh and talks to it over its stdin/stdout.
/// The handshake happens in the constructor. Every transport problem
/// (spawn failure, early exit, timeout, malformed line) is reported as a
/// ProtocolViolation.
class ExternalDriver : public Driver {
public:
  explicit ExternalDriver(std::string command, ExternalOptions opts = {});
  ~ExternalDriver() override;
  ExternalDriver(const ExternalDriver &) = delete;
  ExternalDriver &operator=(const ExternalDriver &) = delete;

  [[nodiscard]] EventMask subscription() const override;
  void on_event(const Event &e) override;
  Response answer(const Request &r) override;
  [[nodiscard]] std::string name() const override { return "extern:" + command_; }

  /// Events the child asked for in its SUB line.
  [[nodiscard]] EventMask child_subscription() const { return sub_; }

private:
  void send(const std::string &line);
  void flush();
  std::string receive(std::string_view expecting);
  void shutdown();

  std::string command_;
  ExternalOptions opts_;
  pid_t pid_ = -1;
  pid_t group_ = -1;
  bool unresponsive_ = false;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string inbuf_;
  std::string outbuf_;
  EventMask sub_;
  TrailMirror mirror_;
  std::uint32_t num_atoms_ = 0;
};

/// Child side: serves `driver` over the line protocol until BYE or end of
/// input. The driver sees the same events and requests it would see in
/// process. Returns 0 on a clean end, 1 on a malformed message or a
/// checksum mismatch (diagnostic on `err`).
int serve(Driver &driver, std::istream &in, std::ostream &out, std::ostream &err);

} // namespace drivesat::wire

#endif
