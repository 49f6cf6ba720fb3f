// REST facade over the rules engine and solver.
//
//   POST   /games                   {source_kind: "instance"|"qdimacs", payload}
//   GET    /games/{id}
//   GET    /games/{id}/moves
//   POST   /games/{id}/moves        {to, expected_ply?}
//   GET    /games/{id}/analysis?budget=N
//   DELETE /games/{id}
//
// Requests on one session are serialized by a per-session mutex; the store
// itself is only locked long enough to look a session up, and analysis runs
// on a snapshot so a long search never blocks other requests.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace slimetrail::service {

struct Response {
  int status = 200;
  std::string body;  // JSON, or empty for 204
};

struct ServiceOptions {
  std::uint64_t default_budget = 10'000'000;
  // Append-only log of creates, moves and deletes, replayed on construction.
  std::optional<std::string> journal_path;
};

class GameService {
 public:
  explicit GameService(ServiceOptions options = {});
  ~GameService();
  GameService(const GameService&) = delete;
  GameService& operator=(const GameService&) = delete;

  Response handle(std::string_view method, std::string_view path,
                  const std::map<std::string, std::string>& query, std::string_view body);

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Serves `service` over HTTP/1.1 until the process is stopped. Returns false
// if the socket could not be bound.
bool serve(GameService& service, const std::string& host, int port);

}  // namespace slimetrail::service
