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

// Evaluator-versus-oracle sweep shared by the unit tests and the
// acceptance binary.

#ifndef SCRIPTPOKER_TESTS_EQUIVALENCE_H_
#define SCRIPTPOKER_TESTS_EQUIVALENCE_H_

#include <string>
#include <vector>

#include "oracle.h"
#include "scriptpoker/evaluator.h"
#include "scriptpoker/script.h"

namespace scriptpoker::testing {

struct EquivalenceCase {
  std::string label;
  GameScript script;
  int players = 1;
  int hole = 0;
  int community = 0;
};

inline GameScript ReducedScript(std::vector<char> suits, std::vector<int> ranks,
                                std::vector<std::string> hand_rank, int hole, int community,
                                std::vector<RulePredicate> rules) {
  GameScript s;
  s.num_players = 4;
  s.suits = std::move(suits);
  s.rank_order = std::move(ranks);
  s.hand_rank = std::move(hand_rank);
  s.min_bet = 2;
  s.max_bet = 100;
  s.flow = {{PhaseKind::kStart}, {PhaseKind::kDeal, hole}, {PhaseKind::kBet}};
  if (community > 0) s.flow.push_back({PhaseKind::kFlop, community});
  s.flow.push_back({PhaseKind::kShow});
  s.flow.push_back({PhaseKind::kPrize});
  s.rules = std::move(rules);
  ValidateScript(s);
  return s;
}

inline std::vector<EquivalenceCase> EquivalenceCases() {
  const std::vector<char> hdcs = {'H', 'D', 'C', 'S'};
  const std::vector<int> eight = {2, 3, 4, 5, 6, 7, 8, 1};
  const std::vector<std::string> standard = {"High Card", "Pair", "Two Pair",
                                             "Three of a Kind", "Straight", "Flush",
                                             "Full House", "Four of a Kind", "Straight Flush"};
  const std::vector<std::string> low_lattice = {"High Card", "Pair", "Two Pair",
                                                "Three of a Kind", "Full House",
                                                "Four of a Kind"};
  RulePredicate omaha{RuleKind::kOmahaConstraint};
  omaha.holes = 2;
  omaha.community = 3;
  RulePredicate six{RuleKind::kHandSize};
  six.hand_size = 6;
  RulePredicate three_pair{RuleKind::kNewCombination};
  three_pair.combination = {"Three Pair", Detector::kGroups, {2, 2, 2}, 0};
  RulePredicate big_house{RuleKind::kNewCombination};
  big_house.combination = {"Big House", Detector::kGroups, {3, 3}, 0};

  std::vector<EquivalenceCase> cases;
  cases.push_back({"hold'em", ReducedScript(hdcs, eight, standard, 2, 5, {}), 3, 2, 5});
  cases.push_back({"omaha", ReducedScript(hdcs, eight, standard, 4, 5, {omaha}), 3, 4, 5});
  cases.push_back({"low wins",
                   ReducedScript(hdcs, eight, standard, 5, 0, {{RuleKind::kLowWins}}), 3, 5, 0});
  cases.push_back({"small straight",
                   ReducedScript({'H', 'D', 'C'}, {6, 7, 8, 9, 10, 1},
                                 {"High Card", "Pair", "Two Pair", "Three of a Kind", "Flush",
                                  "Straight", "Four of a Kind", "Straight Flush"},
                                 2, 4, {{RuleKind::kSmallStraight}}),
                   3, 2, 4});
  cases.push_back({"high-low split",
                   ReducedScript(hdcs, eight, standard, 2, 4, {{RuleKind::kHighLowSplit}}), 3, 2,
                   4});
  cases.push_back({"badugi",
                   ReducedScript(hdcs, {1, 2, 3, 4, 5, 6, 7, 8}, {}, 4, 0,
                                 {{RuleKind::kBadugiRanking}}),
                   4, 4, 0});
  cases.push_back({"low/badugi split",
                   ReducedScript(hdcs, eight, low_lattice, 5, 0,
                                 {{RuleKind::kBadugiRanking}, {RuleKind::kLowBadugiSplit}}),
                   3, 5, 0});
  cases.push_back({"three pair / big house",
                   ReducedScript(hdcs, {2, 3, 4, 5, 6, 1},
                                 {"High Card", "Pair", "Three of a Kind", "Straight", "Flush",
                                  "Full House", "Three Pair", "Big House", "Straight Flush"},
                                 6, 0, {six, three_pair, big_house}),
                   2, 6, 0});
  return cases;
}

struct EquivalenceResult {
  int hands = 0;
  int mismatches = 0;
  std::vector<std::string> failures;  // first few mismatch descriptions
};

// Deals `hands` random hands spread over every case and compares best-hand
// values (both directions), Badugi selections, and winner sets.
inline EquivalenceResult RunEquivalence(int hands, std::uint64_t seed) {
  EquivalenceResult result;
  auto cases = EquivalenceCases();
  Rng rng(seed);
  for (int i = 0; i < hands; ++i) {
    const EquivalenceCase& c = cases[i % cases.size()];
    Evaluator eval(c.script);
    Oracle oracle(c.script);
    Deck deck = Shuffled(BuildDeck(c.script), rng);
    std::vector<std::vector<Card>> holes;
    for (int p = 0; p < c.players; ++p) holes.push_back(deck.Draw(c.hole));
    std::vector<Card> community = deck.Draw(c.community);
    ++result.hands;

    bool ok = true;
    auto note = [&](const std::string& what) {
      ok = false;
      if (result.failures.size() < 10) {
        result.failures.push_back(c.label + ": " + what + " on " + JoinCards(holes[0]) +
                                  " | " + JoinCards(community));
      }
    };
    if (!c.script.hand_rank.empty()) {
      for (bool low : {false, true}) {
        HandValue mine = eval.BestHand(holes[0], community, low).value;
        HandValue theirs = oracle.Best(holes[0], community, low);
        if (!(mine == theirs)) note(low ? "low best hand" : "high best hand");
      }
    }
    if (c.script.Has(RuleKind::kBadugiRanking)) {
      std::vector<Card> cards = holes[0];
      cards.insert(cards.end(), community.begin(), community.end());
      BadugiValue mine = eval.BadugiSelect(cards).value;
      auto theirs = oracle.Badugi(cards);
      if (mine.count != theirs.first || mine.ordinals != theirs.second) note("badugi");
    }
    std::vector<bool> active(c.players, true);
    Showdown sd = eval.Winners(holes, active, community);
    auto expected = oracle.Winners(holes, community);
    if (c.players > 1 && (sd.first != expected.first || sd.second != expected.second)) {
      note("winners");
    }
    if (!ok) ++result.mismatches;
  }
  return result;
}

}  // namespace scriptpoker::testing

#endif  // SCRIPTPOKER_TESTS_EQUIVALENCE_H_
