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

#ifndef SCRIPTPOKER_ENGINE_H_
#define SCRIPTPOKER_ENGINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scriptpoker/cards.h"
#include "scriptpoker/script.h"

namespace scriptpoker {

struct PlayerChips {
  std::int64_t bet = 0;    // committed this round
  std::int64_t stack = 0;  // remaining
  bool all_in = false;
  bool folded = false;

  bool operator==(const PlayerChips&) const = default;
};

struct Message {
  std::string from;
  std::string to;
  std::string text;

  bool operator==(const Message&) const = default;
};

// One frame of a round. Everything the next transition needs is here, so
// the state text alone determines the successor.
struct GameState {
  int num_players = 0;
  int button = 0;  // seat index
  std::vector<PlayerChips> chips;
  Deck deck;
  std::vector<Card> discards;  // burned, folded, and switched-out cards
  std::vector<std::vector<Card>> hole;
  std::vector<Card> community;
  std::vector<std::string> trace;  // completed phase labels
  std::optional<Message> message;

  std::int64_t Pot() const;
  bool operator==(const GameState&) const = default;
};

enum class ActionKind { kCheck, kCall, kRaiseTo, kFold, kAllIn, kSwitch };

struct PlayerAction {
  ActionKind kind = ActionKind::kCheck;
  std::int64_t amount = 0;  // kRaiseTo
  std::vector<Card> cards;  // kSwitch

  // "Check.", "Raise to 40.", "Switch H8 D1.", "Switch 0.", ...
  std::string Text() const;
  bool operator==(const PlayerAction&) const = default;
};

// Accepts the canonical text with or without the final period.
std::optional<PlayerAction> ParseAction(std::string_view text);

struct PlayerInput {
  int seat = 0;
  PlayerAction action;

  bool operator==(const PlayerInput&) const = default;
};

// "p1" for seat 0. ParsePlayerName returns nullopt for other text.
std::string PlayerName(int seat);
std::optional<int> ParsePlayerName(std::string_view name);

inline constexpr std::string_view kBetPrompt = "It's your turn to bet.";
inline constexpr std::string_view kSwitchPrompt = "It's your turn to switch.";

int SmallBlindSeat(const GameState& state);
int BigBlindSeat(const GameState& state);

// Seat prompted by the pending message, if any.
std::optional<int> PromptedSeat(const GameState& state);
bool RoundOver(const GameState& state);

// Actions open to the prompted player. Empty when nobody is prompted.
struct LegalActions {
  int seat = -1;
  PhaseKind phase = PhaseKind::kBet;
  bool check = false;
  bool call = false;
  bool fold = false;
  bool all_in = false;
  std::optional<std::int64_t> raise_min;
  std::optional<std::int64_t> raise_max;
  std::vector<Card> switchable;  // switch phase: the player's hole cards
  int max_switch = 0;            // bounded by the cards left in the deck

  bool empty() const { return seat < 0; }
  bool Contains(const PlayerAction& action) const;
  // Every kind of action, with the raise range represented by its two
  // ends and every switch subset listed.
  std::vector<PlayerAction> Enumerate() const;
};

LegalActions GetLegalActions(const GameState& state, const GameScript& script);

// Round setup before the start transition: seats p1..pn with the button on
// p_n, a deck shuffled from seed, no cards dealt, empty trace. Throws
// ValidationError for a bad script or stacks smaller than the min bet.
GameState SetupState(const GameScript& script, std::uint64_t seed,
                     const std::vector<std::int64_t>& stacks);
GameState SetupState(const GameScript& script, std::uint64_t seed, std::int64_t stack);

// The state after the start transition.
GameState InitRound(const GameScript& script, std::uint64_t seed,
                    const std::vector<std::int64_t>& stacks);
GameState InitRound(const GameScript& script, std::uint64_t seed, std::int64_t stack);

// One transition. input is required exactly when a player is prompted.
// Throws IllegalAction without touching the state, and DeckExhausted when
// the flow needs more cards than remain.
GameState NextState(const GameState& state, const GameScript& script,
                    const std::optional<PlayerInput>& input = std::nullopt);

class Agent {
 public:
  virtual ~Agent() = default;
  virtual PlayerAction Act(const GameState& state, const GameScript& script,
                           const LegalActions& legal) = 0;
};

// Picks an action kind uniformly from the legal ones, then a uniform raise
// amount or a uniform subset of cards to switch.
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}
  PlayerAction Act(const GameState& state, const GameScript& script,
                   const LegalActions& legal) override;

 private:
  Rng rng_;
};

struct RoundLog {
  std::vector<GameState> states;                   // s_0 (setup) .. s_T (prize)
  std::vector<std::optional<PlayerInput>> inputs;  // inputs[t] leads s_t -> s_t+1
};

// agents[i] plays seat i; a single agent plays every seat.
RoundLog RunRound(const GameScript& script, std::uint64_t seed,
                  const std::vector<std::int64_t>& stacks, const std::vector<Agent*>& agents);
RoundLog RunRandomRound(const GameScript& script, std::uint64_t seed, std::int64_t stack,
                        std::uint64_t agent_seed);

}  // namespace scriptpoker

#endif  // SCRIPTPOKER_ENGINE_H_
