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

#ifndef SCRIPTPOKER_STATELANG_H_
#define SCRIPTPOKER_STATELANG_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scriptpoker/engine.h"
#include "scriptpoker/script.h"

namespace scriptpoker {

// Pipe-delimited state text. Lines, in order:
//   |order|p1|p2|p3 (button)|p4 (small blind)|p5 (big blind)
//   |chip|p1: 10/990|p2: 1000/0 (all-in)|p3: 0/1000 (fold)
//   |stack|C12|S1|...            remaining deck, top first
//   |hole|p1|H8|D1|p2|S6|C5      players holding cards
//   |community|H2|H3|H4          when non-empty
//   |start|blind|deal2           completed phases, when any
//   |message|engine|p2|It's your turn to bet.
// Lines are joined by LF with no trailing newline.
std::string SerializeState(const GameState& state);

// Discards are not part of the text; they come back as every card of the
// script's deck that is not visible, in deck-building order.
GameState ParseState(std::string_view text, const GameScript& script);

// Equality that ignores the order of the discard pile.
bool SameState(const GameState& a, const GameState& b);

// "|message|p2|engine|All-in."
std::string FormatInput(const PlayerInput& input);
PlayerInput ParseInput(std::string_view text);

std::string FormatMessage(const Message& message);

// Individual entries of the state text, for building and checking lines.
std::string FormatChipEntry(int seat, const PlayerChips& chips);
PlayerChips ParseChipEntry(std::string_view entry, int line, int* seat);

struct LineDiff {
  std::string key;  // "order", "chip", ..., "trace", "message"
  std::string expected;
  std::string actual;

  bool operator==(const LineDiff&) const = default;
};

// Position-wise line comparison; empty iff the texts are byte-equal.
std::vector<LineDiff> DiffStates(std::string_view expected, std::string_view actual);

// Key of one state line as used by DiffStates.
std::string LineKey(std::string_view line);

// What one seat (or "all" for a spectator) may see: the stack line is
// dropped and hole cards of other players are removed until a showdown
// reveals them. Applying it twice changes nothing. Throws UnknownPlayer.
std::string Redact(std::string_view state_text, std::string_view viewer);
std::string RedactState(const GameState& state, std::string_view viewer);

}  // namespace scriptpoker

#endif  // SCRIPTPOKER_STATELANG_H_
