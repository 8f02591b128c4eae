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

#include "scriptpoker/script.h"

#include "doctest.h"
#include "generators.h"
#include "scriptpoker/errors.h"
#include "test_util.h"

namespace scriptpoker {
namespace {

using testing::LoadScript;
using testing::ReadData;

constexpr const char* kMinimal =
    "Number of players: 2\n"
    "Suit: H\n"
    "Card Rank: 1<2\n"
    "Hand Rank: High Card\n"
    "Min / Max bet: 2 / 2\n"
    "Flow: start->blind->deal1->bet->show->prize\n";

std::vector<std::string> Labels(const GameScript& s) {
  std::vector<std::string> out;
  for (const auto& p : s.flow) out.push_back(p.Label());
  return out;
}

TEST_CASE("phase labels") {
  CHECK(ParsePhaseLabel("deal2") == PhaseSpec{PhaseKind::kDeal, 2});
  CHECK(ParsePhaseLabel("flop3") == PhaseSpec{PhaseKind::kFlop, 3});
  CHECK(ParsePhaseLabel("bet") == PhaseSpec{PhaseKind::kBet, 0});
  CHECK(ParsePhaseLabel("shuffle") == PhaseSpec{PhaseKind::kShuffle, 0});
  CHECK_FALSE(ParsePhaseLabel("deal").has_value());
  CHECK_FALSE(ParsePhaseLabel("deal0").has_value());
  CHECK_FALSE(ParsePhaseLabel("bet2").has_value());
  CHECK_FALSE(ParsePhaseLabel("dea5").has_value());
  CHECK(PhaseSpec{PhaseKind::kFlop, 1}.Label() == "flop1");
}

TEST_CASE("hold'em flow parses exactly as written") {
  GameScript s = LoadScript("holdem");
  CHECK(Labels(s) == std::vector<std::string>{"start", "blind", "deal2", "bet", "flop3",
                                              "bet", "flop1", "bet", "show", "prize"});
  CHECK(s.suits == std::vector<char>{'H', 'D', 'C', 'S'});
  CHECK(s.rank_order.size() == 13);
  CHECK(s.rank_order.back() == 1);
  CHECK(s.hand_rank.size() == 8);
  CHECK(s.HandSize() == 5);
  CHECK(s.rules.empty());
}

TEST_CASE("minimal script is valid") {
  GameScript s = ParseScript(kMinimal);
  CHECK(s.num_players == 2);
  CHECK(s.HandSize() == 1);
  CHECK(ParseScript(SerializeScript(s)) == s);
}

TEST_CASE("bet limits") {
  std::string text = kMinimal;
  text.replace(text.find("2 / 2"), 5, "10 / 5000");
  GameScript s = ParseScript(text);
  CHECK(s.min_bet == 10);
  CHECK(s.max_bet == 5000);
}

TEST_CASE("keys are case-insensitive and blank lines ignored") {
  GameScript s = ParseScript(
      "\nnumber of players: 3\n\nSUIT: H D\ncard rank: 1 < 2 < 3\nhand rank: High Card<Pair\n"
      "min / max bet: 4 / 40\nflow: start -> deal1 -> bet -> show -> prize\n");
  CHECK(s.num_players == 3);
  CHECK(s.suits == std::vector<char>{'H', 'D'});
  CHECK(s.rank_order == std::vector<int>{1, 2, 3});
}

TEST_CASE("combination aliases normalise") {
  GameScript s = ParseScript(ReadData("fixtures/golden_script.txt"));
  CHECK(s.hand_rank[3] == "Three of a Kind");
  std::string text = ReadData("fixtures/golden_script.txt");
  text.replace(text.find("Three of a Kind"), 15, "3 of a Kind");
  text.replace(text.find("Four of a Kind"), 14, "4 of a Kind");
  CHECK(ParseScript(text) == s);
}

TEST_CASE("every shipped script parses, validates, and is canonical") {
  std::vector<std::string> names = testing::VariantNames();
  names.insert(names.end(), testing::OodNames().begin(), testing::OodNames().end());
  for (const auto& name : names) {
    CAPTURE(name);
    std::string text = ReadData("scripts/" + name + ".txt");
    GameScript s = ParseScript(text);
    CHECK_NOTHROW(ValidateScript(s));
    CHECK(SerializeScript(s) == text);
    CHECK(ParseScript(SerializeScript(s)) == s);
  }
  std::string golden = ReadData("fixtures/golden_script.txt");
  CHECK(SerializeScript(ParseScript(golden)) == golden);
}

TEST_CASE("variant predicates") {
  CHECK(LoadScript("short_deck_holdem").Has(RuleKind::kSmallStraight));
  GameScript omaha_script = LoadScript("omaha");
  const auto* omaha = omaha_script.Find(RuleKind::kOmahaConstraint);
  REQUIRE(omaha != nullptr);
  CHECK(omaha->holes == 2);
  CHECK(omaha->community == 3);
  CHECK(LoadScript("two_to_seven_triple_draw").Has(RuleKind::kLowWins));
  GameScript badugi = LoadScript("badugi");
  CHECK(badugi.Has(RuleKind::kBadugiRanking));
  CHECK(badugi.hand_rank.empty());
  CHECK(badugi.HandSize() == 4);
  CHECK(LoadScript("badeucey").Has(RuleKind::kLowBadugiSplit));
  CHECK(LoadScript("ood_script3_all_in").Has(RuleKind::kAllInAllowed));

  GameScript s1 = LoadScript("ood_script1_reverse_ranking");
  CHECK(s1.suits == std::vector<char>{'D', 'O', 'G'});
  CHECK(s1.rank_order.front() == 1);
  CHECK(s1.rank_order.back() == 2);
  CHECK(BuildDeck(s1).size() == 39);

  GameScript s4 = LoadScript("ood_script4_three_card_draw");
  CHECK(s4.HandSize() == 3);
  CHECK(BuildDeck(s4).size() == 39);

  GameScript s5 = LoadScript("ood_script5_six_card_draw");
  CHECK(s5.HandSize() == 6);
  CHECK(BuildDeck(s5).size() == 65);
  auto lattice = s5.Lattice();
  REQUIRE(lattice.size() == 9);
  CHECK(lattice[6].name == "Three Pair");
  CHECK(lattice[6].groups == std::vector<int>{2, 2, 2});
  CHECK(lattice[7].name == "Big House");
  CHECK(lattice[7].groups == std::vector<int>{3, 3});

  GameScript s2 = LoadScript("ood_script2_extra_deal");
  CHECK(s2.HoleCardsDealt() == 3);
}

TEST_CASE("small straight sits directly below straight") {
  auto lattice = LoadScript("short_deck_holdem").Lattice();
  std::vector<std::string> names;
  for (const auto& c : lattice) names.push_back(c.name);
  CHECK(names == std::vector<std::string>{"High Card", "Pair", "Two Pair", "Three of a Kind",
                                          "Flush", "Small Straight", "Straight",
                                          "Four of a Kind", "Straight Flush"});
}

TEST_CASE("random scripts round-trip through the canonical form") {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    GameScript s = testing::RandomScript(rng);
    std::string text = SerializeScript(s);
    CAPTURE(text);
    REQUIRE(ParseScript(text) == s);
  }
}

GameScript MinimalScript() { return ParseScript(kMinimal); }

TEST_CASE("validation rejects broken scripts") {
  GameScript s = MinimalScript();
  s.flow = {{PhaseKind::kStart}, {PhaseKind::kDeal, 1}, {PhaseKind::kBet},
            {PhaseKind::kPrize}, {PhaseKind::kShow}};
  CHECK_THROWS_AS(ValidateScript(s), ValidationError);
  s.flow = {{PhaseKind::kStart}, {PhaseKind::kDeal, 1}, {PhaseKind::kBet}, {PhaseKind::kPrize}};
  CHECK_THROWS_AS(ValidateScript(s), ValidationError);

  s = MinimalScript();
  s.suits = {'H', 'H'};
  CHECK_THROWS_AS(ValidateScript(s), ValidationError);

  s = MinimalScript();
  s.min_bet = 10;
  s.max_bet = 4;
  CHECK_THROWS_AS(ValidateScript(s), ValidationError);

  s = MinimalScript();
  s.min_bet = 3;
  s.max_bet = 9;
  CHECK_THROWS_AS(ValidateScript(s), ValidationError);

  s = MinimalScript();
  RulePredicate hand{RuleKind::kHandSize};
  hand.hand_size = 2;
  s.rules.push_back(hand);
  CHECK_THROWS_AS(ValidateScript(s), ValidationError);

  s = MinimalScript();
  s.num_players = 1;
  CHECK_THROWS_AS(ValidateScript(s), ValidationError);

  s = MinimalScript();
  s.hand_rank = {"Royal Thing"};
  CHECK_THROWS_AS(ValidateScript(s), ValidationError);

  s = MinimalScript();
  s.rules.push_back({RuleKind::kSmallStraight});
  CHECK_THROWS_AS(ValidateScript(s), ValidationError);

  s = MinimalScript();
  s.rules.push_back({RuleKind::kLowWins});
  s.rules.push_back({RuleKind::kHighLowSplit});
  CHECK_THROWS_AS(ValidateScript(s), ValidationError);

  s = MinimalScript();
  s.flow.insert(s.flow.begin() + 3, PhaseSpec{PhaseKind::kBlind});
  s.flow.insert(s.flow.begin() + 1, PhaseSpec{PhaseKind::kBet});
  CHECK_THROWS_AS(ValidateScript(s), ValidationError);
}

TEST_CASE("parser diagnostics") {
  std::string bad = std::string(kMinimal) + "Colour: red\n";
  try {
    ParseScript(bad);
    FAIL("expected ScriptSyntaxError");
  } catch (const ScriptSyntaxError& e) {
    CHECK(e.line() == 7);
  }
  CHECK_THROWS_AS(ParseScript(std::string(kMinimal) + "Specific Rules:\nPlayers may sing.\n"),
                  UnknownPredicate);
  std::string broken = kMinimal;
  broken.replace(broken.find("deal1"), 5, "dea5");
  CHECK_THROWS_AS(ParseScript(broken), ScriptSyntaxError);
  CHECK_THROWS_AS(ParseScript("Number of players: 2\n"), ValidationError);
  CHECK_THROWS_AS(ParseScript(std::string(kMinimal) + "Number of players: 3\n"),
                  ScriptSyntaxError);
}

TEST_CASE("rule sentences round-trip") {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    GameScript s = testing::RandomScript(rng);
    for (const auto& rule : s.rules) {
      auto parsed = ParseRuleSentence(RuleSentence(rule));
      REQUIRE(parsed.has_value());
      CHECK(*parsed == rule);
    }
  }
}

TEST_CASE("rephrasing with probability zero is the canonical form") {
  for (const auto& name : testing::VariantNames()) {
    GameScript s = LoadScript(name);
    RephraseConfig cfg{7, 0.0, 0.0};
    CHECK(RephraseScript(s, cfg) == SerializeScript(s));
  }
}

TEST_CASE("named player sentence") {
  GameScript s = LoadScript("holdem");
  s.num_players = 3;
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 200 && !seen; ++seed) {
    std::string text = RephraseScript(s, {seed, 1.0, 0.0});
    seen = text.find("In this game of Texas hold'em, there are three players.\n") !=
           std::string::npos;
  }
  CHECK(seen);
}

TEST_CASE("narrative flow sentence") {
  GameScript s = LoadScript("holdem");
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 200 && !seen; ++seed) {
    std::string text = NaturalScript(s, seed);
    seen = text.find("The game begins with placing the blinds, followed by dealing 2 cards") !=
           std::string::npos;
  }
  CHECK(seen);
}

TEST_CASE("rephrasing is deterministic and information preserving") {
  for (const auto& name : testing::VariantNames()) {
    GameScript s = LoadScript(name);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      RephraseConfig cfg{seed, 0.5, 0.05};
      std::string text = RephraseScript(s, cfg);
      CAPTURE(text);
      CHECK(text == RephraseScript(s, cfg));
      CHECK(ParseRephrased(text) == s);
      CHECK(ParseRephrased(NaturalScript(s, seed)) == s);
    }
  }
}

TEST_CASE("natural rendering replaces every element") {
  GameScript s = LoadScript("badeucey");
  std::string text = NaturalScript(s, 3);
  for (const char* key : {"Number of players:", "Suit:", "Card Rank:", "Hand Rank:",
                          "Min / Max bet:", "Flow:"}) {
    CHECK(text.find(key) == std::string::npos);
  }
  CHECK(text.find("Specific Rules:") != std::string::npos);
}

TEST_CASE("random scripts survive rephrasing") {
  Rng rng(77);
  for (int i = 0; i < 300; ++i) {
    GameScript s = testing::RandomScript(rng);
    std::string text = NaturalScript(s, i);
    CAPTURE(text);
    REQUIRE(ParseRephrased(text) == s);
  }
}

TEST_CASE("parse_rephrased on plain DSL matches parse_script") {
  for (const auto& name : testing::VariantNames()) {
    std::string text = ReadData("scripts/" + name + ".txt");
    CHECK(ParseRephrased(text) == ParseScript(text));
  }
}

TEST_CASE("unknown sentences are rejected") {
  std::string text = SerializeScript(LoadScript("holdem"));
  text.insert(0, "Everyone wears a hat.\n");
  CHECK_THROWS_AS(ParseRephrased(text), UnrecognizedTemplate);
}

TEST_CASE("whole-script probability is bounded") {
  GameScript s = LoadScript("holdem");
  CHECK_THROWS_AS(RephraseScript(s, {1, 0.5, 0.06}), ValidationError);
  CHECK_THROWS_AS(RephraseScript(s, {1, 1.5, 0.0}), ValidationError);
}

TEST_CASE("template bank version") { CHECK(TemplateBankVersion() == 1); }

}  // namespace
}  // namespace scriptpoker
