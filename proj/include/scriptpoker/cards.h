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

#ifndef SCRIPTPOKER_CARDS_H_
#define SCRIPTPOKER_CARDS_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scriptpoker {

// A card is a suit letter plus an integer rank label. The label carries no
// ordering of its own; ordering always comes from a script's rank order.
struct Card {
  char suit = 'H';
  int rank = 1;

  std::string ToString() const;
  auto operator<=>(const Card&) const = default;
};

// Parses "<suit-letter><rank-label>", e.g. "H8" or "D12".
std::optional<Card> ParseCard(std::string_view text);

// Space-separated card list, e.g. "H8 D1". Empty input gives "".
std::string JoinCards(std::span<const Card> cards, std::string_view sep = " ");

// splitmix64. The constants and the output mixing are fixed so that a seed
// produces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next();

  // Uniform in [0, bound) via a 128-bit multiply-shift. bound must be > 0.
  std::uint64_t Bounded(std::uint64_t bound);

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform();

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Ordered pile of cards; the top of the deck is the front.
class Deck {
 public:
  Deck() = default;
  explicit Deck(std::vector<Card> cards) : cards_(std::move(cards)) {}

  std::span<const Card> cards() const { return cards_; }
  std::size_t size() const { return cards_.size(); }
  bool empty() const { return cards_.empty(); }

  // Fisher-Yates from the last index downward.
  void Shuffle(Rng& rng);

  // Removes and returns the first n cards. Throws DeckExhausted.
  std::vector<Card> Draw(std::size_t n);

  bool operator==(const Deck&) const = default;

 private:
  std::vector<Card> cards_;
};

// Every (suit, rank) pair once, suit-major, ranks in the given order.
Deck BuildDeck(std::span<const char> suits, std::span<const int> ranks);

// Returns a shuffled copy; rng is advanced.
Deck Shuffled(Deck deck, Rng& rng);

}  // namespace scriptpoker

#endif  // SCRIPTPOKER_CARDS_H_
