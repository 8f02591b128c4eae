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

#include "scriptpoker/evaluator.h"

#include <algorithm>

#include "scriptpoker/errors.h"

namespace scriptpoker {
namespace {

// Calls fn with every size-k index subset of [0, n), in lexicographic order.
template <typename Fn>
void ForEachSubset(int n, int k, Fn&& fn) {
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

int CompareBadugi(const BadugiValue& a, const BadugiValue& b) {
  if (a.count != b.count) return a.count > b.count ? 1 : -1;
  if (a.ordinals == b.ordinals) return 0;
  return a.ordinals < b.ordinals ? 1 : -1;
}

Evaluator::Evaluator(const GameScript& script)
    : script_(script),
      lattice_(script.Lattice()),
      hand_size_(script.HandSize()),
      low_wins_(script.Has(RuleKind::kLowWins)) {
  int max_label = *std::max_element(script.rank_order.begin(), script.rank_order.end());
  ordinal_.assign(max_label + 1, -1);
  for (std::size_t i = 0; i < script.rank_order.size(); ++i) {
    ordinal_[script.rank_order[i]] = static_cast<int>(i);
  }
}

int Evaluator::Ordinal(int rank) const {
  if (rank < 0 || rank >= static_cast<int>(ordinal_.size())) return -1;
  return ordinal_[rank];
}

int Evaluator::SuitIndex(char suit) const {
  auto it = std::find(script_.suits.begin(), script_.suits.end(), suit);
  return static_cast<int>(it - script_.suits.begin());
}

std::vector<Card> Evaluator::SortDescending(std::span<const Card> cards) const {
  std::vector<Card> sorted(cards.begin(), cards.end());
  std::stable_sort(sorted.begin(), sorted.end(), [this](const Card& a, const Card& b) {
    int oa = Ordinal(a.rank), ob = Ordinal(b.rank);
    if (oa != ob) return oa > ob;
    return SuitIndex(a.suit) < SuitIndex(b.suit);
  });
  return sorted;
}

std::optional<Evaluator::Instance> Evaluator::Find(const Combination& c,
                                                   const std::vector<Card>& sorted,
                                                   int default_length) const {
  const int n = static_cast<int>(script_.rank_order.size());
  const int length = c.length > 0 ? c.length : default_length;
  Instance inst;

  // First card (in sorted order) of each ordinal within `cards`.
  auto first_by_ordinal = [&](const std::vector<Card>& cards) {
    std::vector<std::optional<Card>> first(n);
    for (const Card& card : cards) {
      int o = Ordinal(card.rank);
      if (o >= 0 && !first[o]) first[o] = card;
    }
    return first;
  };
  auto run_in = [&](const std::vector<Card>& cards) -> std::optional<Instance> {
    if (length < 1 || length > n) return std::nullopt;
    auto first = first_by_ordinal(cards);
    for (int top = n - 1; top >= length - 1; --top) {
      bool ok = true;
      for (int o = top; o > top - length && ok; --o) ok = first[o].has_value();
      if (!ok) continue;
      Instance run;
      for (int o = top; o > top - length; --o) {
        run.cards.push_back(*first[o]);
        run.ordinals.push_back(o);
      }
      return run;
    }
    return std::nullopt;
  };

  switch (c.detector) {
    case Detector::kHighCard:
      return inst;
    case Detector::kGroups: {
      std::vector<std::vector<Card>> by_ordinal(n);
      for (const Card& card : sorted) by_ordinal[Ordinal(card.rank)].push_back(card);
      std::vector<bool> used(n, false);
      for (int size : c.groups) {
        bool found = false;
        for (int o = n - 1; o >= 0 && !found; --o) {
          if (used[o] || static_cast<int>(by_ordinal[o].size()) < size) continue;
          used[o] = true;
          found = true;
          for (int i = 0; i < size; ++i) {
            inst.cards.push_back(by_ordinal[o][i]);
            inst.ordinals.push_back(o);
          }
        }
        if (!found) return std::nullopt;
      }
      return inst;
    }
    case Detector::kRun:
      return run_in(sorted);
    case Detector::kWrapRun: {
      // The top rank plays below the bottom one: top, 0, 1, ..., length-2.
      if (length < 2 || length > n) return std::nullopt;
      auto first = first_by_ordinal(sorted);
      if (!first[n - 1]) return std::nullopt;
      for (int o = length - 2; o >= 0; --o) {
        if (!first[o]) return std::nullopt;
        inst.cards.push_back(*first[o]);
        inst.ordinals.push_back(o);
      }
      inst.cards.push_back(*first[n - 1]);
      inst.ordinals.push_back(-1);
      return inst;
    }
    case Detector::kSuited:
    case Detector::kSuitedRun: {
      std::optional<Instance> best;
      for (char suit : script_.suits) {
        std::vector<Card> suited;
        for (const Card& card : sorted) {
          if (card.suit == suit) suited.push_back(card);
        }
        std::optional<Instance> candidate;
        if (c.detector == Detector::kSuitedRun) {
          candidate = run_in(suited);
        } else if (length >= 1 && static_cast<int>(suited.size()) >= length) {
          candidate = Instance{};
          for (int i = 0; i < length; ++i) {
            candidate->cards.push_back(suited[i]);
            candidate->ordinals.push_back(Ordinal(suited[i].rank));
          }
        }
        if (candidate && (!best || candidate->ordinals > best->ordinals)) best = candidate;
      }
      return best;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Card>> Evaluator::Detect(const Combination& combination,
                                                   std::span<const Card> cards) const {
  auto inst = Find(combination, SortDescending(cards), hand_size_);
  if (!inst) return std::nullopt;
  if (combination.detector == Detector::kHighCard) {
    auto sorted = SortDescending(cards);
    if (sorted.empty()) return std::nullopt;
    return std::vector<Card>{sorted.front()};
  }
  return inst->cards;
}

std::optional<std::vector<Card>> Evaluator::Detect(std::string_view name,
                                                   std::span<const Card> cards) const {
  if (auto builtin = BuiltinCombination(name)) return Detect(*builtin, cards);
  if (name == kSmallStraight) {
    return Detect(Combination{std::string(kSmallStraight), Detector::kWrapRun, {}, 0}, cards);
  }
  for (const auto& r : script_.rules) {
    if (r.kind == RuleKind::kNewCombination && r.combination.name == name) {
      return Detect(r.combination, cards);
    }
  }
  throw ValidationError("unknown combination: " + std::string(name));
}

ScoredHand Evaluator::Score(std::span<const Card> hand) const {
  std::vector<Card> sorted = SortDescending(hand);
  const int k = static_cast<int>(hand.size());
  ScoredHand out;
  std::optional<Instance> inst;
  for (int i = static_cast<int>(lattice_.size()) - 1; i >= 0 && !inst; --i) {
    inst = Find(lattice_[i], sorted, k);
    if (inst) out.value.combination = i;
  }
  if (!inst) inst = Instance{};
  out.cards = inst->cards;
  out.value.tiebreak = inst->ordinals;
  for (const Card& card : sorted) {
    if (std::find(inst->cards.begin(), inst->cards.end(), card) != inst->cards.end()) continue;
    out.cards.push_back(card);
    out.value.tiebreak.push_back(Ordinal(card.rank));
  }
  return out;
}

ScoredHand Evaluator::BestHand(std::span<const Card> hole, std::span<const Card> community,
                               bool low) const {
  std::optional<ScoredHand> best;
  auto consider = [&](std::vector<Card> hand) {
    ScoredHand scored = Score(hand);
    if (!best || (low ? scored.value < best->value : scored.value > best->value)) {
      best = std::move(scored);
    }
  };
  const int h = static_cast<int>(hole.size());
  const int c = static_cast<int>(community.size());
  if (const auto* omaha = script_.Find(RuleKind::kOmahaConstraint)) {
    if (h < omaha->holes || c < omaha->community) {
      throw InsufficientCards("need " + std::to_string(omaha->holes) + " hole and " +
                              std::to_string(omaha->community) + " community cards");
    }
    ForEachSubset(h, omaha->holes, [&](const std::vector<int>& hi) {
      ForEachSubset(c, omaha->community, [&](const std::vector<int>& ci) {
        std::vector<Card> hand;
        for (int i : hi) hand.push_back(hole[i]);
        for (int i : ci) hand.push_back(community[i]);
        consider(std::move(hand));
      });
    });
    return *best;
  }
  if (h + c < hand_size_) {
    throw InsufficientCards("need " + std::to_string(hand_size_) + " cards, have " +
                            std::to_string(h + c));
  }
  std::vector<Card> all(hole.begin(), hole.end());
  all.insert(all.end(), community.begin(), community.end());
  ForEachSubset(h + c, hand_size_, [&](const std::vector<int>& idx) {
    std::vector<Card> hand;
    for (int i : idx) hand.push_back(all[i]);
    consider(std::move(hand));
  });
  return *best;
}

ScoredHand Evaluator::BestHand(std::span<const Card> hole,
                               std::span<const Card> community) const {
  return BestHand(hole, community, low_wins_);
}

int Evaluator::Compare(const HandValue& a, const HandValue& b) const {
  auto order = a <=> b;
  int raw = order < 0 ? -1 : (order > 0 ? 1 : 0);
  return low_wins_ ? -raw : raw;
}

BadugiHand Evaluator::BadugiSelect(std::span<const Card> cards) const {
  std::vector<Card> asc = SortDescending(cards);
  std::reverse(asc.begin(), asc.end());
  BadugiHand best;
  std::vector<Card> chosen;
  std::vector<char> suits;
  std::vector<int> ordinals;
  auto dfs = [&](auto&& self, std::size_t i) -> void {
    if (i == asc.size()) {
      BadugiValue value{static_cast<int>(chosen.size()), ordinals};
      if (CompareBadugi(value, best.value) > 0) {
        best.value = value;
        best.cards = chosen;
      }
      return;
    }
    const Card& card = asc[i];
    int o = Ordinal(card.rank);
    bool clash = std::find(suits.begin(), suits.end(), card.suit) != suits.end() ||
                 std::find(ordinals.begin(), ordinals.end(), o) != ordinals.end();
    if (!clash) {
      chosen.push_back(card);
      suits.push_back(card.suit);
      ordinals.push_back(o);
      self(self, i + 1);
      chosen.pop_back();
      suits.pop_back();
      ordinals.pop_back();
    }
    self(self, i + 1);
  };
  dfs(dfs, 0);
  return best;
}

Showdown Evaluator::Winners(const std::vector<std::vector<Card>>& holes,
                            const std::vector<bool>& active,
                            std::span<const Card> community) const {
  std::vector<int> players;
  for (std::size_t i = 0; i < holes.size(); ++i) {
    if (active[i]) players.push_back(static_cast<int>(i));
  }
  Showdown out;
  if (players.size() == 1) {
    out.kind = Showdown::Kind::kWalkover;
    out.first = players;
    return out;
  }

  auto lattice_winners = [&](bool low) {
    std::vector<int> winners;
    std::optional<HandValue> best;
    for (int p : players) {
      HandValue v = BestHand(holes[p], community, low).value;
      bool better = !best || (low ? v < *best : v > *best);
      if (better) {
        best = v;
        winners = {p};
      } else if (v == *best) {
        winners.push_back(p);
      }
    }
    return winners;
  };
  auto badugi_winners = [&]() {
    std::vector<int> winners;
    std::optional<BadugiValue> best;
    for (int p : players) {
      std::vector<Card> cards = holes[p];
      cards.insert(cards.end(), community.begin(), community.end());
      BadugiValue v = BadugiSelect(cards).value;
      int cmp = best ? CompareBadugi(v, *best) : 1;
      if (cmp > 0) {
        best = v;
        winners = {p};
      } else if (cmp == 0) {
        winners.push_back(p);
      }
    }
    return winners;
  };

  if (script_.Has(RuleKind::kLowBadugiSplit)) {
    out.kind = Showdown::Kind::kLowBadugi;
    out.first = lattice_winners(true);
    out.second = badugi_winners();
  } else if (script_.Has(RuleKind::kBadugiRanking)) {
    out.kind = Showdown::Kind::kBadugi;
    out.first = badugi_winners();
  } else if (script_.Has(RuleKind::kHighLowSplit)) {
    out.kind = Showdown::Kind::kHighLow;
    out.first = lattice_winners(false);
    out.second = lattice_winners(true);
  } else {
    out.kind = Showdown::Kind::kSingle;
    out.first = lattice_winners(low_wins_);
  }
  return out;
}

std::string Evaluator::CombinationName(int index) const {
  if (index < 0 || index >= static_cast<int>(lattice_.size())) return "None";
  return lattice_[index].name;
}

}  // namespace scriptpoker
