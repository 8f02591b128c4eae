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

// Random valid-script generator shared by property tests.

#ifndef SCRIPTPOKER_TESTS_GENERATORS_H_
#define SCRIPTPOKER_TESTS_GENERATORS_H_

#include <algorithm>
#include <string>
#include <vector>

#include "scriptpoker/cards.h"
#include "scriptpoker/errors.h"
#include "scriptpoker/script.h"

namespace scriptpoker::testing {

inline std::vector<std::string> BuiltinNames() {
  return {"High Card", "Pair",  "Two Pair",   "Three of a Kind", "Straight",
          "Flush",     "Full House", "Four of a Kind", "Straight Flush"};
}

inline GameScript RandomScriptCandidate(Rng& rng) {
  GameScript s;
  static const char* kNames[] = {"", "Texas hold'em", "Test game", "Omaha"};
  s.name = kNames[rng.Bounded(4)];
  s.num_players = 2 + static_cast<int>(rng.Bounded(5));

  std::string letters = "HDCSROGXYZ";
  int n_suits = 1 + static_cast<int>(rng.Bounded(5));
  for (int i = 0; i < n_suits; ++i) {
    std::size_t j = i + rng.Bounded(letters.size() - i);
    std::swap(letters[i], letters[j]);
    s.suits.push_back(letters[i]);
  }
  std::vector<int> labels;
  for (int r = 1; r <= 20; ++r) labels.push_back(r);
  int n_ranks = 2 + static_cast<int>(rng.Bounded(12));
  for (int i = 0; i < n_ranks; ++i) {
    std::size_t j = i + rng.Bounded(labels.size() - i);
    std::swap(labels[i], labels[j]);
    s.rank_order.push_back(labels[i]);
  }
  s.min_bet = 2 * (1 + static_cast<int>(rng.Bounded(10)));
  s.max_bet = s.min_bet + static_cast<int>(rng.Bounded(1000));

  s.flow.push_back({PhaseKind::kStart, 0});
  if (rng.Bounded(4) == 0) s.flow.push_back({PhaseKind::kShuffle, 0});
  if (rng.Bounded(4) != 0) s.flow.push_back({PhaseKind::kBlind, 0});
  s.flow.push_back({PhaseKind::kDeal, 1 + static_cast<int>(rng.Bounded(4))});
  s.flow.push_back({PhaseKind::kBet, 0});
  int extra = static_cast<int>(rng.Bounded(5));
  for (int i = 0; i < extra; ++i) {
    switch (rng.Bounded(4)) {
      case 0: s.flow.push_back({PhaseKind::kFlop, 1 + static_cast<int>(rng.Bounded(3))}); break;
      case 1: s.flow.push_back({PhaseKind::kDeal, 1 + static_cast<int>(rng.Bounded(2))}); break;
      case 2: s.flow.push_back({PhaseKind::kSwitch, 0}); break;
      default: s.flow.push_back({PhaseKind::kBet, 0}); break;
    }
  }
  s.flow.push_back({PhaseKind::kShow, 0});
  s.flow.push_back({PhaseKind::kPrize, 0});

  const int available = s.HoleCardsDealt() + s.CommunityCardsDealt();
  bool badugi = rng.Bounded(8) == 0;
  if (badugi) s.rules.push_back({RuleKind::kBadugiRanking});

  std::vector<std::string> names = BuiltinNames();
  for (std::size_t i = names.size(); i > 1; --i) {
    std::swap(names[i - 1], names[rng.Bounded(i)]);
  }
  std::size_t n_hand = badugi && rng.Bounded(2) == 0 ? 0 : 1 + rng.Bounded(names.size());
  names.resize(n_hand);
  s.hand_rank = names;

  if (rng.Bounded(3) == 0) {
    RulePredicate r{RuleKind::kNewCombination};
    r.combination.name = "Custom " + std::to_string(rng.Bounded(100));
    switch (rng.Bounded(4)) {
      case 0:
        r.combination.detector = Detector::kGroups;
        r.combination.groups = {3, 3};
        if (rng.Bounded(2)) r.combination.groups = {2, 2, 2};
        if (rng.Bounded(3) == 0) r.combination.groups = {4, 2, 1};
        break;
      case 1:
        r.combination.detector = Detector::kRun;
        r.combination.length = 1 + static_cast<int>(rng.Bounded(4));
        break;
      case 2:
        r.combination.detector = Detector::kSuited;
        r.combination.length = 1 + static_cast<int>(rng.Bounded(4));
        break;
      default:
        r.combination.detector = Detector::kSuitedRun;
        r.combination.length = 1 + static_cast<int>(rng.Bounded(4));
        break;
    }
    s.rules.push_back(r);
    if (!s.hand_rank.empty() || !badugi) {
      s.hand_rank.insert(s.hand_rank.begin() + rng.Bounded(s.hand_rank.size() + 1),
                         r.combination.name);
    }
  }
  if (!badugi) {
    switch (rng.Bounded(4)) {
      case 0: s.rules.push_back({RuleKind::kLowWins}); break;
      case 1: s.rules.push_back({RuleKind::kHighLowSplit}); break;
      default: break;
    }
  } else if (!s.hand_rank.empty() && rng.Bounded(2)) {
    s.rules.push_back({RuleKind::kLowBadugiSplit});
  }
  if (rng.Bounded(3) == 0) {
    RulePredicate r{RuleKind::kHandSize};
    r.hand_size = 1 + static_cast<int>(rng.Bounded(available));
    s.rules.push_back(r);
  } else if (s.HoleCardsDealt() >= 2 && s.CommunityCardsDealt() >= 3 && rng.Bounded(2)) {
    RulePredicate r{RuleKind::kOmahaConstraint};
    r.holes = 2;
    r.community = 3;
    s.rules.push_back(r);
  }
  if (std::find(s.hand_rank.begin(), s.hand_rank.end(), "Straight") != s.hand_rank.end() &&
      rng.Bounded(3) == 0) {
    s.rules.push_back({RuleKind::kSmallStraight});
  }
  if (rng.Bounded(3) == 0) s.rules.push_back({RuleKind::kAllInAllowed});
  for (std::size_t i = s.rules.size(); i > 1; --i) {
    std::swap(s.rules[i - 1], s.rules[rng.Bounded(i)]);
  }
  return s;
}

// Draws candidates until one validates.
inline GameScript RandomScript(Rng& rng) {
  while (true) {
    GameScript s = RandomScriptCandidate(rng);
    try {
      ValidateScript(s);
      return s;
    } catch (const ValidationError&) {
    }
  }
}

}  // namespace scriptpoker::testing

#endif  // SCRIPTPOKER_TESTS_GENERATORS_H_
