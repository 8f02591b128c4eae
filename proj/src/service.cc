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

#include "scriptpoker/service.h"

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "httplib.h"
#include "scriptpoker/datagen.h"
#include "scriptpoker/errors.h"
#include "scriptpoker/statelang.h"

namespace scriptpoker {
namespace {

using nlohmann::json;

constexpr std::int64_t kDefaultStack = 1000;
constexpr std::uint64_t kBotSalt = 0xB07B07B07ull;

std::string NowUtc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()) % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0')
      << ms.count() << 'Z';
  return out.str();
}

std::string RandomHex(int bytes) {
  static std::mutex mu;
  static std::random_device device;
  std::lock_guard<std::mutex> lock(mu);
  std::ostringstream out;
  for (int i = 0; i < bytes; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << (device() & 0xFF);
  }
  return out.str();
}

std::uint64_t RoundSeed(std::uint64_t seed, int round) {
  if (round == 0) return seed;
  Rng rng(seed ^ (static_cast<std::uint64_t>(round) * 0x9E3779B97F4A7C15ull));
  return rng.Next();
}

std::string ViewerName(int seat) { return seat < 0 ? "all" : PlayerName(seat); }

// Switched-out cards stay private to the player who switched them.
std::string RedactInput(const PlayerInput& input, int viewer) {
  if (input.action.kind != ActionKind::kSwitch || input.seat == viewer) return FormatInput(input);
  return "|message|" + PlayerName(input.seat) + "|engine|Switch " +
         std::to_string(input.action.cards.size()) + " cards.";
}

json LegalJson(const LegalActions& legal) {
  json j = json::object();
  if (legal.empty()) return j;
  j["check"] = legal.check;
  j["call"] = legal.call;
  j["fold"] = legal.fold;
  j["all_in"] = legal.all_in;
  if (legal.raise_min) j["raise"] = {{"min", *legal.raise_min}, {"max", *legal.raise_max}};
  if (legal.phase == PhaseKind::kSwitch) {
    j["switch"] = {{"cards", JoinCards(legal.switchable)}, {"max", legal.max_switch}};
  }
  return j;
}

}  // namespace

json ServiceError::ToJson() const { return json{{"error", name_}, {"message", what()}}; }

json SessionConfig::ToJson() const {
  json names = json::array();
  for (int b : bots) names.push_back(PlayerName(b));
  return json{{"script", script}, {"seed", seed},     {"stacks", stacks},
              {"bots", names},    {"rounds", rounds}, {"carry_stacks", carry_stacks}};
}

SessionConfig SessionConfig::FromJson(const json& j) {
  if (!j.is_object()) throw ServiceError(400, "BadRequest", "expected a JSON object");
  SessionConfig c;
  try {
    c.script = j.at("script").get<std::string>();
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("stacks")) c.stacks = j["stacks"].get<std::vector<std::int64_t>>();
    if (j.contains("bots")) {
      for (const auto& b : j["bots"]) {
        if (b.is_number_integer()) {
          c.bots.push_back(b.get<int>() - 1);
        } else {
          auto seat = ParsePlayerName(b.get<std::string>());
          if (!seat) throw ServiceError(400, "BadRequest", "bad bot seat " + b.dump());
          c.bots.push_back(*seat);
        }
      }
    }
    c.rounds = j.value("rounds", 1);
    c.carry_stacks = j.value("carry_stacks", false);
    if (j.contains("stack")) c.stacks.assign(1, j["stack"].get<std::int64_t>());
  } catch (const json::exception& e) {
    throw ServiceError(400, "BadRequest", e.what());
  }
  return c;
}

json SessionEvent::ToJson() const {
  return json{{"index", index},
              {"round", round},
              {"time", time},
              {"input", input ? json(FormatInput(*input)) : json()},
              {"state", state}};
}

SessionEvent SessionEvent::FromJson(const json& j) {
  SessionEvent e;
  e.index = j.at("index").get<int>();
  e.round = j.at("round").get<int>();
  e.time = j.value("time", "");
  if (!j["input"].is_null()) e.input = ParseInput(j["input"].get<std::string>());
  e.state = j.at("state").get<std::string>();
  return e;
}

// ---- Session -------------------------------------------------------------------

Session::Session(std::string id, SessionConfig config, std::map<std::string, int> tokens)
    : id_(std::move(id)), config_(std::move(config)), tokens_(std::move(tokens)) {
  try {
    script_ = ParseRephrased(config_.script);
    ValidateScript(script_);
  } catch (const Error& e) {
    throw ServiceError(400, "InvalidScript", e.what());
  }
  const int n = script_.num_players;
  if (config_.rounds < 1) throw ServiceError(400, "BadRequest", "rounds must be at least 1");
  std::vector<std::int64_t> stacks = config_.stacks;
  if (stacks.empty()) stacks.assign(n, kDefaultStack);
  if (stacks.size() == 1) stacks.assign(n, stacks[0]);
  if (static_cast<int>(stacks.size()) != n) {
    throw ServiceError(400, "BadRequest", "need one stack per player");
  }
  for (int b : config_.bots) {
    if (b < 0 || b >= n) throw ServiceError(400, "BadRequest", "bot seat out of range");
  }
  bot_ = std::make_unique<RandomAgent>(config_.seed ^ kBotSalt);
  pending_.push_back(
      json{{"type", "create"}, {"id", id_}, {"config", config_.ToJson()}, {"tokens", tokens_}});
  try {
    StartRound(config_.seed, stacks);
  } catch (const ValidationError& e) {
    throw ServiceError(400, "InvalidScript", e.what());
  }
}

void Session::StartRound(std::uint64_t seed, const std::vector<std::int64_t>& stacks) {
  GameState setup = SetupState(script_, seed, stacks);
  round_start_.push_back(setup);
  Append(std::nullopt, std::move(setup));
  Advance();
}

void Session::Append(const std::optional<PlayerInput>& input, GameState next) {
  SessionEvent e{static_cast<int>(events_.size()), round_, NowUtc(), input,
                 SerializeState(next)};
  pending_.push_back(json{{"type", "event"}, {"event", e.ToJson()}});
  events_.push_back(std::move(e));
  state_ = std::move(next);
}

void Session::Advance() {
  while (true) {
    if (RoundOver(state_)) {
      if (round_ + 1 >= config_.rounds) {
        finished_ = true;
        return;
      }
      std::vector<std::int64_t> stacks;
      for (std::size_t i = 0; i < state_.chips.size(); ++i) {
        stacks.push_back(config_.carry_stacks ? state_.chips[i].stack
                                              : round_start_.front().chips[i].stack);
      }
      if (std::any_of(stacks.begin(), stacks.end(),
                      [&](std::int64_t s) { return s < script_.min_bet; })) {
        finished_ = true;
        return;
      }
      ++round_;
      GameState setup = SetupState(script_, RoundSeed(config_.seed, round_), stacks);
      round_start_.push_back(setup);
      Append(std::nullopt, std::move(setup));
      continue;
    }
    std::optional<int> prompted = PromptedSeat(state_);
    if (prompted) {
      if (std::find(config_.bots.begin(), config_.bots.end(), *prompted) == config_.bots.end()) {
        return;
      }
      LegalActions legal = GetLegalActions(state_, script_);
      PlayerInput input{*prompted, bot_->Act(state_, script_, legal)};
      GameState next = NextState(state_, script_, input);
      Append(input, std::move(next));
      continue;
    }
    try {
      GameState next = NextState(state_, script_);
      Append(std::nullopt, std::move(next));
    } catch (const DeckExhausted& e) {
      finished_ = true;
      pending_.push_back(json{{"type", "error"}, {"message", e.what()}});
      return;
    }
  }
}

int Session::Seat(const std::string& token) const {
  auto it = tokens_.find(token);
  if (it == tokens_.end()) throw ServiceError(403, "Forbidden", "unknown token");
  return it->second;
}

json Session::View(int seat) const {
  json j;
  j["session"] = id_;
  j["viewer"] = ViewerName(seat);
  j["round"] = round_ + 1;
  j["rounds"] = config_.rounds;
  j["version"] = version();
  j["status"] = finished_ ? "finished" : "awaiting-player";
  j["state"] = RedactState(state_, ViewerName(seat));
  const int prompted = finished_ ? -1 : PromptedSeat(state_).value_or(-1);
  j["prompt"] = prompted >= 0 ? json(PlayerName(prompted)) : json();
  json actions = json::array();
  json legal = json::object();
  if (prompted >= 0 && prompted == seat) {
    LegalActions la = GetLegalActions(state_, script_);
    for (const auto& a : la.Enumerate()) actions.push_back(a.Text());
    legal = LegalJson(la);
  }
  j["legal_actions"] = actions;
  j["legal"] = legal;
  if (RoundOver(state_) && state_.message) j["winners"] = state_.message->text;
  return j;
}

json Session::EventsSince(int seat, int since) const {
  json events = json::array();
  const std::string viewer = ViewerName(seat);
  for (std::size_t i = static_cast<std::size_t>(std::max(since, 0)); i < events_.size(); ++i) {
    const SessionEvent& e = events_[i];
    events.push_back({{"index", e.index},
                      {"round", e.round + 1},
                      {"time", e.time},
                      {"input", e.input ? json(RedactInput(*e.input, seat)) : json()},
                      {"state", Redact(e.state, viewer)}});
  }
  return json{{"session", id_},
              {"version", version()},
              {"status", finished_ ? "finished" : "awaiting-player"},
              {"events", events}};
}

json Session::Submit(int seat, const std::string& action_text, const std::string& key) {
  if (!key.empty()) {
    if (auto it = acks_.find(key); it != acks_.end()) return it->second;
  }
  if (seat < 0) throw ServiceError(403, "Forbidden", "spectators cannot act");
  if (finished_) throw ServiceError(409, "SessionFinished", "the session is over");
  std::optional<int> prompted = PromptedSeat(state_);
  if (!prompted || *prompted != seat) {
    throw ServiceError(403, "NotYourTurn",
                       PlayerName(seat) + " is not the prompted player");
  }
  std::optional<PlayerAction> action = ParseAction(action_text);
  if (!action) throw ServiceError(400, "BadAction", "cannot parse action '" + action_text + "'");
  PlayerInput input{seat, *action};
  GameState next;
  try {
    next = NextState(state_, script_, input);
  } catch (const IllegalAction& e) {
    throw ServiceError(409, "IllegalAction", e.what());
  }
  const int event = version();
  Append(input, std::move(next));
  Advance();
  json ack{{"accepted", true},
           {"session", id_},
           {"input", FormatInput(input)},
           {"event", event},
           {"version", version()},
           {"status", finished_ ? "finished" : "awaiting-player"}};
  if (!key.empty()) {
    acks_[key] = ack;
    pending_.push_back(json{{"type", "ack"}, {"key", key}, {"response", ack}});
  }
  return ack;
}

std::vector<Transcript> Session::ExportTranscripts() const {
  std::vector<Transcript> out;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const SessionEvent& e = events_[i];
    if (i == 0 || e.round != events_[i - 1].round) {
      out.push_back({id_ + "/" + std::to_string(e.round + 1), "session", config_.script, {}});
      continue;
    }
    out.back().steps.push_back({events_[i - 1].state,
                                e.input ? FormatInput(*e.input) : std::string(), e.state});
  }
  return out;
}

std::vector<json> Session::ExportSamples() const {
  std::vector<json> out;
  const std::string form = IsStructuredScript(config_.script) ? "structured" : "natural";
  for (std::size_t i = 1; i < events_.size(); ++i) {
    const SessionEvent& e = events_[i];
    if (e.round != events_[i - 1].round) continue;
    std::size_t last = i;
    while (last + 1 < events_.size() && events_[last + 1].round == e.round) ++last;
    GameState final_state = ParseState(events_[last].state, script_);
    GameState prev = ParseState(events_[i - 1].state, script_);
    GameState next = ParseState(e.state, script_);
    NspSample s;
    s.script = config_.script;
    s.prev_state = events_[i - 1].state;
    if (e.input) s.player_input = FormatInput(*e.input);
    s.next_state = e.state;
    s.variant = "session";
    s.function = TransitionFunction(prev, next, script_);
    s.category = RoundOver(final_state) ? RoundCategory(final_state, script_) : "";
    s.seed = RoundSeed(config_.seed, e.round);
    s.round = e.round;
    int first = static_cast<int>(i);
    while (first > 0 && events_[first - 1].round == e.round) --first;
    s.step = static_cast<int>(i) - first - 1;
    s.form = form;
    s.stage = id_;
    out.push_back(s.ToJson());
  }
  return out;
}

std::vector<json> Session::TakePending() {
  std::vector<json> out;
  out.swap(pending_);
  return out;
}

std::unique_ptr<Session> Session::Replay(const std::vector<json>& records) {
  if (records.empty() || records[0].value("type", "") != "create") {
    throw Error("session log must start with a create record");
  }
  const json& create = records[0];
  auto session = std::make_unique<Session>(create.at("id").get<std::string>(),
                                           SessionConfig::FromJson(create.at("config")),
                                           create.at("tokens").get<std::map<std::string, int>>());
  std::vector<SessionEvent> logged;
  for (const auto& r : records) {
    const std::string type = r.value("type", "");
    if (type == "event") logged.push_back(SessionEvent::FromJson(r.at("event")));
    if (type == "ack") session->acks_[r.at("key").get<std::string>()] = r.at("response");
  }
  auto check = [&] {
    for (std::size_t i = 0; i < session->events_.size() && i < logged.size(); ++i) {
      if (session->events_[i].state != logged[i].state ||
          session->events_[i].input != logged[i].input) {
        throw Error("session " + session->id_ + " log diverges at event " + std::to_string(i));
      }
      session->events_[i].time = logged[i].time;
    }
  };
  check();
  while (session->events_.size() < logged.size()) {
    const SessionEvent& e = logged[session->events_.size()];
    if (!e.input) throw Error("session log has an engine event where a player must act");
    session->Submit(e.input->seat, e.input->action.Text(), "");
    check();
  }
  if (session->events_.size() != logged.size()) {
    throw Error("session " + session->id_ + " log is shorter than its replay");
  }
  session->pending_.clear();
  return session;
}

// ---- SessionManager ----------------------------------------------------------------

SessionManager::SessionManager(std::string data_dir) : data_dir_(std::move(data_dir)) {
  if (data_dir_.empty()) return;
  std::filesystem::create_directories(data_dir_);
  for (const auto& file : std::filesystem::directory_iterator(data_dir_)) {
    if (file.path().extension() != ".jsonl") continue;
    auto entry = std::make_shared<Entry>();
    entry->session = Session::Replay(ReadJsonl(file.path().string()));
    sessions_[entry->session->id()] = entry;
  }
}

std::shared_ptr<SessionManager::Entry> SessionManager::Find(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "NotFound", "unknown session " + id);
  return it->second;
}

void SessionManager::Persist(Entry& entry) {
  auto records = entry.session->TakePending();
  if (data_dir_.empty() || records.empty()) return;
  std::ofstream out(data_dir_ + "/" + entry.session->id() + ".jsonl", std::ios::app);
  if (!out) throw Error("cannot write session log in " + data_dir_);
  for (const auto& r : records) out << r.dump() << "\n";
  out.flush();
}

json SessionManager::Create(const SessionConfig& config) {
  const std::string id = RandomHex(8);
  std::map<std::string, int> tokens;
  json player_tokens = json::object();
  GameScript script;
  try {
    script = ParseRephrased(config.script);
  } catch (const Error& e) {
    throw ServiceError(400, "InvalidScript", e.what());
  }
  for (int seat = 0; seat < script.num_players; ++seat) {
    if (std::find(config.bots.begin(), config.bots.end(), seat) != config.bots.end()) continue;
    std::string token = RandomHex(16);
    tokens[token] = seat;
    player_tokens[PlayerName(seat)] = token;
  }
  std::string spectator = RandomHex(16);
  tokens[spectator] = -1;
  auto entry = std::make_shared<Entry>();
  entry->session = std::make_unique<Session>(id, config, tokens);
  {
    std::lock_guard<std::mutex> lock(entry->mu);
    Persist(*entry);
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    sessions_[id] = entry;
  }
  json bots = json::array();
  for (int b : config.bots) bots.push_back(PlayerName(b));
  return json{{"session", id},
              {"players", script.num_players},
              {"tokens", player_tokens},
              {"spectator", spectator},
              {"bots", bots}};
}

json SessionManager::View(const std::string& id, const std::string& token) {
  auto entry = Find(id);
  std::lock_guard<std::mutex> lock(entry->mu);
  return entry->session->View(entry->session->Seat(token));
}

json SessionManager::Submit(const std::string& id, const std::string& token,
                            const std::string& action, const std::string& key) {
  auto entry = Find(id);
  json ack;
  {
    std::lock_guard<std::mutex> lock(entry->mu);
    ack = entry->session->Submit(entry->session->Seat(token), action, key);
    Persist(*entry);
  }
  entry->changed.notify_all();
  return ack;
}

json SessionManager::Events(const std::string& id, const std::string& token, int since,
                            std::chrono::milliseconds timeout) {
  auto entry = Find(id);
  std::unique_lock<std::mutex> lock(entry->mu);
  int seat = entry->session->Seat(token);
  entry->changed.wait_for(lock, timeout, [&] {
    return entry->session->version() > since || entry->session->finished();
  });
  return entry->session->EventsSince(seat, since);
}

json SessionManager::Transcript(const std::string& id) {
  auto entry = Find(id);
  std::lock_guard<std::mutex> lock(entry->mu);
  json transcripts = json::array();
  for (const auto& t : entry->session->ExportTranscripts()) transcripts.push_back(t.ToJson());
  return json{{"session", id},
              {"finished", entry->session->finished()},
              {"transcripts", transcripts},
              {"samples", entry->session->ExportSamples()}};
}

std::vector<std::string> SessionManager::Ids() {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, e] : sessions_) out.push_back(id);
  return out;
}

// ---- HTTP ----------------------------------------------------------------------------

namespace {

std::string TokenOf(const httplib::Request& req) {
  std::string auth = req.get_header_value("Authorization");
  const std::string bearer = "Bearer ";
  if (auth.rfind(bearer, 0) == 0) return auth.substr(bearer.size());
  if (req.has_param("token")) return req.get_param_value("token");
  return "";
}

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename F>
void Guard(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    Reply(res, e.status(), e.ToJson());
  } catch (const json::exception& e) {
    Reply(res, 400, json{{"error", "BadRequest"}, {"message", e.what()}});
  } catch (const Error& e) {
    Reply(res, 400, json{{"error", "BadRequest"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    Reply(res, 500, json{{"error", "Internal"}, {"message", e.what()}});
  }
}

int IntParam(const httplib::Request& req, const std::string& name, int fallback) {
  if (!req.has_param(name)) return fallback;
  try {
    return std::stoi(req.get_param_value(name));
  } catch (const std::exception&) {
    throw ServiceError(400, "BadRequest", "bad " + name);
  }
}

}  // namespace

void RegisterRoutes(httplib::Server& server, SessionManager& manager) {
  server.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
    Guard(res, [&] { Reply(res, 201, manager.Create(SessionConfig::FromJson(json::parse(req.body)))); });
  });
  server.Get("/sessions/:id/view", [&](const httplib::Request& req, httplib::Response& res) {
    Guard(res, [&] { Reply(res, 200, manager.View(req.path_params.at("id"), TokenOf(req))); });
  });
  server.Post("/sessions/:id/actions", [&](const httplib::Request& req, httplib::Response& res) {
    Guard(res, [&] {
      json body = json::parse(req.body);
      std::string token = TokenOf(req);
      if (token.empty()) token = body.value("token", "");
      std::string key = req.get_header_value("Idempotency-Key");
      if (key.empty()) key = body.value("idempotency_key", "");
      Reply(res, 200,
            manager.Submit(req.path_params.at("id"), token, body.at("action").get<std::string>(),
                           key));
    });
  });
  server.Get("/sessions/:id/transcript", [&](const httplib::Request& req, httplib::Response& res) {
    Guard(res, [&] {
      json t = manager.Transcript(req.path_params.at("id"));
      if (req.get_param_value("format") == "jsonl") {
        std::string body;
        for (const auto& s : t["samples"]) body += s.dump() + "\n";
        res.set_content(body, "application/x-ndjson");
        return;
      }
      Reply(res, 200, t);
    });
  });
  server.Get("/sessions/:id/events", [&](const httplib::Request& req, httplib::Response& res) {
    Guard(res, [&] {
      const std::string id = req.path_params.at("id");
      const std::string token = TokenOf(req);
      int since = IntParam(req, "since", 0);
      const int timeout_ms = std::clamp(IntParam(req, "timeout_ms", 25000), 0, 60000);
      // Validate before committing to a stream.
      manager.View(id, token);
      bool sse = req.get_header_value("Accept").find("text/event-stream") != std::string::npos ||
                 req.get_param_value("stream") == "sse";
      if (!sse) {
        Reply(res, 200, manager.Events(id, token, since, std::chrono::milliseconds(timeout_ms)));
        return;
      }
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider(
          "text/event-stream", [&manager, id, token, since](std::size_t, httplib::DataSink& sink) mutable {
            json batch = manager.Events(id, token, since, std::chrono::seconds(15));
            for (const auto& e : batch["events"]) {
              std::string chunk = "id: " + std::to_string(e["index"].get<int>()) +
                                  "\nevent: state\ndata: " + e.dump() + "\n\n";
              if (!sink.write(chunk.data(), chunk.size())) return false;
            }
            since = batch["version"].get<int>();
            if (batch["events"].empty()) {
              static const std::string ping = ": ping\n\n";
              if (!sink.write(ping.data(), ping.size())) return false;
            }
            if (batch["status"] == "finished" && batch["events"].empty()) sink.done();
            return true;
          });
    });
  });
}

ServiceEnv ServiceEnv::FromEnvironment() {
  ServiceEnv env;
  if (const char* bind = std::getenv("SCRIPTPOKER_BIND")) {
    std::string s = bind;
    std::size_t colon = s.rfind(':');
    if (colon == std::string::npos) throw ValidationError("SCRIPTPOKER_BIND must be host:port");
    env.host = s.substr(0, colon);
    env.port = std::stoi(s.substr(colon + 1));
  }
  if (const char* dir = std::getenv("SCRIPTPOKER_DATA_DIR")) env.data_dir = dir;
  return env;
}

void Serve(const ServiceEnv& env) {
  SessionManager manager(env.data_dir);
  httplib::Server server;
  RegisterRoutes(server, manager);
  if (!server.listen(env.host, env.port)) {
    throw Error("cannot listen on " + env.host + ":" + std::to_string(env.port));
  }
}

}  // namespace scriptpoker
