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

#ifndef SCRIPTPOKER_EVALUATOR_H_
#define SCRIPTPOKER_EVALUATOR_H_

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scriptpoker/cards.h"
#include "scriptpoker/script.h"

namespace scriptpoker {

// Strength of one evaluated hand. Ordered by lattice index, then by the
// tiebreak ordinals (combination cards first, then kickers, each
// descending). Index -1 means no lattice entry matched.
struct HandValue {
  int combination = -1;
  std::vector<int> tiebreak;

  auto operator<=>(const HandValue&) const = default;
};

struct ScoredHand {
  HandValue value;
  std::vector<Card> cards;  // combination cards first, then kickers
};

// A Badugi: pairwise suit-distinct, rank-distinct cards. More cards is
// better; equal counts compare the ascending ordinal vectors and the
// smaller one wins.
struct BadugiValue {
  int count = 0;
  std::vector<int> ordinals;  // ascending

  bool operator==(const BadugiValue&) const = default;
};

// Returns >0 when a is the better Badugi, <0 when b is, 0 on a tie.
int CompareBadugi(const BadugiValue& a, const BadugiValue& b);

struct BadugiHand {
  BadugiValue value;
  std::vector<Card> cards;  // ascending by ordinal
};

// Winner sets at showdown. Player indices are 0-based seats.
struct Showdown {
  enum class Kind {
    kWalkover,   // one player left, no evaluation
    kSingle,     // best (or lowest under LowWins) hand takes the pot
    kBadugi,     // best Badugi takes the pot
    kHighLow,    // first = high winners, second = low winners
    kLowBadugi,  // first = low winners, second = Badugi winners
  };
  Kind kind = Kind::kSingle;
  std::vector<int> first;
  std::vector<int> second;

  bool split() const { return kind == Kind::kHighLow || kind == Kind::kLowBadugi; }
};

class Evaluator {
 public:
  explicit Evaluator(const GameScript& script);

  const GameScript& script() const { return script_; }
  const std::vector<Combination>& lattice() const { return lattice_; }
  int hand_size() const { return hand_size_; }

  // Position of a rank label in the script's rank order, or -1.
  int Ordinal(int rank) const;

  // Highest instance of the combination among the cards, or nullopt. Run
  // and suited lengths of 0 resolve to the script's hand size.
  std::optional<std::vector<Card>> Detect(const Combination& combination,
                                          std::span<const Card> cards) const;
  // Looks the name up among built-ins, Small Straight, and the script's
  // own combinations. Throws ValidationError for unknown names.
  std::optional<std::vector<Card>> Detect(std::string_view name,
                                          std::span<const Card> cards) const;

  // Scores exactly the given cards as one hand.
  ScoredHand Score(std::span<const Card> hand) const;

  // Best hand over all hand-size subsets (hole/community constrained when
  // the script says so). With low = true the minimal HandValue is chosen.
  // Throws InsufficientCards.
  ScoredHand BestHand(std::span<const Card> hole, std::span<const Card> community,
                      bool low) const;
  // Direction from the script: low when LowWins is present.
  ScoredHand BestHand(std::span<const Card> hole, std::span<const Card> community) const;

  // >0 when a beats b under the script (LowWins inverts), 0 on a tie.
  int Compare(const HandValue& a, const HandValue& b) const;

  BadugiHand BadugiSelect(std::span<const Card> cards) const;

  // holes[i] empty or active[i] false marks a player out of the showdown.
  Showdown Winners(const std::vector<std::vector<Card>>& holes,
                   const std::vector<bool>& active,
                   std::span<const Card> community) const;

  // Name of a lattice entry; "None" for -1.
  std::string CombinationName(int index) const;

 private:
  struct Instance {
    std::vector<Card> cards;
    std::vector<int> ordinals;
  };

  std::optional<Instance> Find(const Combination& c, const std::vector<Card>& sorted,
                               int default_length) const;
  std::vector<Card> SortDescending(std::span<const Card> cards) const;
  int SuitIndex(char suit) const;

  GameScript script_;
  std::vector<Combination> lattice_;
  std::vector<int> ordinal_;  // indexed by rank label
  int hand_size_ = 0;
  bool low_wins_ = false;
};

}  // namespace scriptpoker

#endif  // SCRIPTPOKER_EVALUATOR_H_
