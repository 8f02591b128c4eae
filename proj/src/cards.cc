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

#include "scriptpoker/cards.h"

#include <charconv>
#include <utility>

#include "scriptpoker/errors.h"

namespace scriptpoker {

std::string Card::ToString() const {
  return std::string(1, suit) + std::to_string(rank);
}

std::optional<Card> ParseCard(std::string_view text) {
  if (text.size() < 2) return std::nullopt;
  char suit = text.front();
  if (suit < 'A' || suit > 'Z') return std::nullopt;
  std::string_view digits = text.substr(1);
  if (digits.front() == '0' || digits.front() == '+') return std::nullopt;
  int rank = 0;
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), rank);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || rank <= 0) {
    return std::nullopt;
  }
  return Card{suit, rank};
}

std::string JoinCards(std::span<const Card> cards, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < cards.size(); ++i) {
    if (i > 0) out += sep;
    out += cards[i].ToString();
  }
  return out;
}

std::uint64_t Rng::Next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::Bounded(std::uint64_t bound) {
  unsigned __int128 product =
      static_cast<unsigned __int128>(Next()) * static_cast<unsigned __int128>(bound);
  return static_cast<std::uint64_t>(product >> 64);
}

double Rng::Uniform() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

void Deck::Shuffle(Rng& rng) {
  for (std::size_t i = cards_.size(); i > 1; --i) {
    std::size_t j = rng.Bounded(i);
    std::swap(cards_[i - 1], cards_[j]);
  }
}

std::vector<Card> Deck::Draw(std::size_t n) {
  if (n > cards_.size()) throw DeckExhausted(n, cards_.size());
  std::vector<Card> out(cards_.begin(), cards_.begin() + n);
  cards_.erase(cards_.begin(), cards_.begin() + n);
  return out;
}

Deck BuildDeck(std::span<const char> suits, std::span<const int> ranks) {
  std::vector<Card> cards;
  cards.reserve(suits.size() * ranks.size());
  for (char s : suits) {
    for (int r : ranks) cards.push_back(Card{s, r});
  }
  return Deck(std::move(cards));
}

Deck Shuffled(Deck deck, Rng& rng) {
  deck.Shuffle(rng);
  return deck;
}

}  // namespace scriptpoker
