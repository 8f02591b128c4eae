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

#ifndef SCRIPTPOKER_SCRIPT_H_
#define SCRIPTPOKER_SCRIPT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scriptpoker/cards.h"

namespace scriptpoker {

enum class PhaseKind {
  kStart,
  kShuffle,
  kBlind,
  kDeal,
  kBet,
  kFlop,
  kSwitch,
  kShow,
  kPrize,
};

struct PhaseSpec {
  PhaseKind kind = PhaseKind::kStart;
  int count = 0;  // cards per player for deal, cards revealed for flop

  // Trace label, e.g. "deal2", "flop3", "bet".
  std::string Label() const;
  bool operator==(const PhaseSpec&) const = default;
};

std::optional<PhaseSpec> ParsePhaseLabel(std::string_view label);

// How a combination is recognised inside a hand.
enum class Detector {
  kHighCard,
  kGroups,     // rank groups of the given sizes, distinct ranks
  kRun,        // consecutive ranks
  kSuited,     // cards of one suit
  kSuitedRun,  // consecutive ranks of one suit
  kWrapRun,    // run where the top rank plays below the bottom rank
};

struct Combination {
  std::string name;
  Detector detector = Detector::kHighCard;
  std::vector<int> groups;  // kGroups: sizes, largest first
  int length = 0;           // run/suited length; 0 means the hand size

  bool operator==(const Combination&) const = default;
};

// Built-in combination by canonical name or accepted alias
// ("3 of a Kind" for "Three of a Kind", ...).
std::optional<Combination> BuiltinCombination(std::string_view name);
inline constexpr std::string_view kSmallStraight = "Small Straight";

enum class RuleKind {
  kLowWins,
  kHighLowSplit,
  kLowBadugiSplit,
  kBadugiRanking,
  kOmahaConstraint,
  kSmallStraight,
  kHandSize,
  kNewCombination,
  kAllInAllowed,
};

struct RulePredicate {
  RuleKind kind = RuleKind::kLowWins;
  int holes = 0;      // kOmahaConstraint
  int community = 0;  // kOmahaConstraint
  int hand_size = 0;  // kHandSize
  Combination combination;  // kNewCombination

  bool operator==(const RulePredicate&) const = default;
};

// One poker variant: the structured elements plus specific-rule predicates.
struct GameScript {
  std::string name;  // optional display name, e.g. "Texas hold'em"
  int num_players = 0;
  std::vector<char> suits;
  std::vector<int> rank_order;          // low to high
  std::vector<std::string> hand_rank;   // combination names, low to high
  std::int64_t min_bet = 0;
  std::int64_t max_bet = 0;
  std::vector<PhaseSpec> flow;
  std::vector<RulePredicate> rules;

  bool Has(RuleKind kind) const;
  const RulePredicate* Find(RuleKind kind) const;

  // Cards per evaluated hand: HandSize(k) when present, otherwise 5 capped
  // by the cards a player can reach (hole plus community).
  int HandSize() const;
  int HoleCardsDealt() const;
  int CommunityCardsDealt() const;

  // Resolved combination lattice, low to high. Small Straight is inserted
  // directly below Straight when the predicate is present.
  std::vector<Combination> Lattice() const;

  bool operator==(const GameScript&) const = default;
};

Deck BuildDeck(const GameScript& script);

// Throws ValidationError describing the first violated invariant.
void ValidateScript(const GameScript& script);

// Canonical line-oriented form. Throws ScriptSyntaxError, UnknownPredicate,
// ValidationError.
GameScript ParseScript(std::string_view text);
std::string SerializeScript(const GameScript& script);

// Canonical sentence for one specific rule, and its inverse.
std::string RuleSentence(const RulePredicate& rule);
std::optional<RulePredicate> ParseRuleSentence(std::string_view sentence);

struct RephraseConfig {
  std::uint64_t seed = 0;
  double element_probability = 0.5;
  double whole_script_probability = 0.02;  // at most 0.05
};

// Replaces a seeded selection of structured lines with natural-language
// sentences from the template bank. Every sentence preserves the element's
// full information.
std::string RephraseScript(const GameScript& script, const RephraseConfig& cfg);

// Fully natural rendering: every element rephrased, template chosen by seed.
std::string NaturalScript(const GameScript& script, std::uint64_t seed);

// Inverse of RephraseScript; also accepts plain canonical text. Throws
// UnrecognizedTemplate for sentences outside the bank.
GameScript ParseRephrased(std::string_view text);

// Version tag of the embedded template bank.
int TemplateBankVersion();

}  // namespace scriptpoker

#endif  // SCRIPTPOKER_SCRIPT_H_
