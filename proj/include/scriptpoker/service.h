// Copyright 2026 The scriptpoker Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SCRIPTPOKER_SERVICE_H_
#define SCRIPTPOKER_SERVICE_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scriptpoker/engine.h"
#include "scriptpoker/errors.h"
#include "scriptpoker/evalharness.h"
#include "scriptpoker/script.h"

namespace httplib {
class Server;
}

namespace scriptpoker {

// Failure with an HTTP status and a machine-readable error name.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string name, const std::string& message)
      : Error(message), status_(status), name_(std::move(name)) {}
  int status() const { return status_; }
  const std::string& name() const { return name_; }
  nlohmann::json ToJson() const;

 private:
  int status_;
  std::string name_;
};

struct SessionConfig {
  std::string script;  // structured, natural or rephrased text
  std::uint64_t seed = 0;
  std::vector<std::int64_t> stacks;  // one per player; empty means 1000 each
  std::vector<int> bots;             // seats played by the random agent
  int rounds = 1;
  bool carry_stacks = false;  // later rounds start from the previous stacks

  nlohmann::json ToJson() const;
  static SessionConfig FromJson(const nlohmann::json& j);
};

// One logged transition. Event 0 is the setup state, with no input.
struct SessionEvent {
  int index = 0;
  int round = 0;
  std::string time;  // UTC, ISO 8601
  std::optional<PlayerInput> input;
  std::string state;  // full state text

  nlohmann::json ToJson() const;
  static SessionEvent FromJson(const nlohmann::json& j);
};

class Session {
 public:
  // Validates the config and advances to the first human decision.
  Session(std::string id, SessionConfig config, std::map<std::string, int> tokens);

  const std::string& id() const { return id_; }
  const SessionConfig& config() const { return config_; }
  const GameScript& script() const { return script_; }
  bool finished() const { return finished_; }
  int version() const { return static_cast<int>(events_.size()); }
  const GameState& state() const { return state_; }
  const std::vector<SessionEvent>& events() const { return events_; }
  const std::map<std::string, int>& tokens() const { return tokens_; }

  // Seat of a token; -1 for the spectator. Throws ServiceError(403).
  int Seat(const std::string& token) const;
  nlohmann::json View(int seat) const;
  // Redacted events with index >= since.
  nlohmann::json EventsSince(int seat, int since) const;
  nlohmann::json Submit(int seat, const std::string& action_text,
                        const std::string& idempotency_key);
  std::vector<Transcript> ExportTranscripts() const;
  std::vector<nlohmann::json> ExportSamples() const;

  // Rebuilds a session from its persisted records, replaying every
  // transition through the engine. Throws Error when the log disagrees.
  static std::unique_ptr<Session> Replay(const std::vector<nlohmann::json>& records);

  // Records appended since the last call, for persistence.
  std::vector<nlohmann::json> TakePending();

 private:
  void StartRound(std::uint64_t seed, const std::vector<std::int64_t>& stacks);
  void Append(const std::optional<PlayerInput>& input, GameState next);
  void Advance();

  std::string id_;
  SessionConfig config_;
  GameScript script_;
  std::map<std::string, int> tokens_;
  std::map<std::string, nlohmann::json> acks_;
  GameState state_;
  int round_ = 0;
  bool finished_ = false;
  std::vector<SessionEvent> events_;
  std::vector<GameState> round_start_;  // setup state of each round
  std::unique_ptr<RandomAgent> bot_;
  std::vector<nlohmann::json> pending_;
  bool replaying_ = false;
};

// Thread-safe registry with an append-only JSONL log per session.
class SessionManager {
 public:
  // data_dir may be empty for an in-memory manager. Existing logs in
  // data_dir are replayed.
  explicit SessionManager(std::string data_dir = "");

  // {"session", "tokens": {"p1": ...}, "spectator"}.
  nlohmann::json Create(const SessionConfig& config);
  nlohmann::json View(const std::string& id, const std::string& token);
  nlohmann::json Submit(const std::string& id, const std::string& token,
                        const std::string& action, const std::string& idempotency_key);
  // Waits up to timeout for events past since, then returns what exists.
  nlohmann::json Events(const std::string& id, const std::string& token, int since,
                        std::chrono::milliseconds timeout);
  nlohmann::json Transcript(const std::string& id);
  std::vector<std::string> Ids();

 private:
  struct Entry {
    std::mutex mu;
    std::condition_variable changed;
    std::unique_ptr<Session> session;
  };
  std::shared_ptr<Entry> Find(const std::string& id);
  void Persist(Entry& entry);

  std::string data_dir_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

// Registers the HTTP endpoints on server.
void RegisterRoutes(httplib::Server& server, SessionManager& manager);

// Host and port from SCRIPTPOKER_BIND ("host:port", default
// 127.0.0.1:8080) and the data directory from SCRIPTPOKER_DATA_DIR.
struct ServiceEnv {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;

  static ServiceEnv FromEnvironment();
};

// Blocks serving requests until the server is stopped.
void Serve(const ServiceEnv& env);

}  // namespace scriptpoker

#endif  // SCRIPTPOKER_SERVICE_H_
