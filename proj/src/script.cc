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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "scriptpoker/errors.h"
#include "template_bank.h"

namespace scriptpoker {
namespace {

using internal::SlotValues;
using internal::TemplateBank;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> Split(std::string_view text, std::string_view sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(Trim(text.substr(start)));
      return out;
    }
    out.emplace_back(Trim(text.substr(start, pos - start)));
    start = pos + sep.size();
  }
}

std::vector<std::string> Lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::optional<long long> ParseInt(std::string_view s) {
  s = Trim(s);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Collapses runs of spaces so "Min / Max  bet" and "Min / Max bet" agree.
std::string NormalizeKey(std::string_view s) {
  std::string out;
  for (char c : Trim(s)) {
    if (c == ' ' && !out.empty() && out.back() == ' ') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

const std::map<char, std::string>& SuitNames() {
  static const auto* names = new std::map<char, std::string>{
      {'H', "Hearts"}, {'D', "Diamonds"}, {'C', "Clubs"}, {'S', "Spades"}};
  return *names;
}

constexpr const char* kPhaseNames[] = {"start", "shuffle", "blind", "deal", "bet",
                                       "flop",  "switch",  "show",  "prize"};

bool PhaseTakesCount(PhaseKind kind) {
  return kind == PhaseKind::kDeal || kind == PhaseKind::kFlop;
}

std::string Join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

// Element values shared by the strict parser and the rephrased parser.
struct ScriptBuilder {
  GameScript script;
  bool has_players = false;
  bool has_suits = false;
  bool has_ranks = false;
  bool has_hand = false;
  bool has_bets = false;
  bool has_flow = false;

  void Mark(bool& flag, int line, const char* element) {
    if (flag) {
      throw ScriptSyntaxError(line, std::string("duplicate ") + element);
    }
    flag = true;
  }

  GameScript Finish() {
    if (!has_players) throw ValidationError("missing number of players");
    if (!has_suits) throw ValidationError("missing suits");
    if (!has_ranks) throw ValidationError("missing card rank");
    if (!has_bets) throw ValidationError("missing min / max bet");
    if (!has_flow) throw ValidationError("missing flow");
    ValidateScript(script);
    return script;
  }
};

std::vector<char> ParseSuits(std::string_view value, int line) {
  std::vector<std::string> entries;
  if (value.find(',') != std::string_view::npos) {
    entries = Split(value, ",");
  } else {
    // "H D C S" is accepted as well as the comma form.
    for (auto& e : Split(value, " ")) {
      if (!e.empty()) entries.push_back(e);
    }
    if (entries.size() > 1 && entries[1].front() == '(') {
      entries = {std::string(Trim(value))};
    }
  }
  std::vector<char> suits;
  for (const auto& entry : entries) {
    std::string_view e = entry;
    std::size_t open = e.find('(');
    if (open != std::string_view::npos) {
      if (e.back() != ')') throw ScriptSyntaxError(line, "bad suit entry: " + entry);
      e = Trim(e.substr(open + 1, e.size() - open - 2));
    }
    if (e.size() != 1 || !std::isupper(static_cast<unsigned char>(e[0]))) {
      throw ScriptSyntaxError(line, "bad suit entry: " + entry);
    }
    suits.push_back(e[0]);
  }
  return suits;
}

std::vector<int> ParseRanks(std::string_view value, int line) {
  std::vector<int> ranks;
  for (const auto& item : Split(value, "<")) {
    auto v = ParseInt(item);
    if (!v || *v <= 0 || *v > 1000000) {
      throw ScriptSyntaxError(line, "bad card rank: " + item);
    }
    ranks.push_back(static_cast<int>(*v));
  }
  return ranks;
}

std::vector<std::string> ParseHandRank(std::string_view value) {
  std::vector<std::string> names;
  for (const auto& item : Split(value, "<")) {
    auto builtin = BuiltinCombination(item);
    names.push_back(builtin ? builtin->name : item);
  }
  return names;
}

std::vector<PhaseSpec> ParseFlow(std::string_view value, int line) {
  std::vector<PhaseSpec> flow;
  for (const auto& item : Split(value, "->")) {
    auto phase = ParsePhaseLabel(item);
    if (!phase) throw ScriptSyntaxError(line, "unknown flow step: " + item);
    flow.push_back(*phase);
  }
  return flow;
}

std::string FlowText(const std::vector<PhaseSpec>& flow) {
  std::vector<std::string> labels;
  for (const auto& p : flow) labels.push_back(p.Label());
  return Join(labels, "->");
}

// Suit names are written only when every letter is a standard French suit;
// in a deck like D, O, G the letter D does not mean Diamonds.
std::string SuitText(const std::vector<char>& suits) {
  bool standard = std::all_of(suits.begin(), suits.end(),
                              [](char s) { return SuitNames().count(s) > 0; });
  std::vector<std::string> items;
  for (char s : suits) {
    items.push_back(standard ? SuitNames().at(s) + " (" + std::string(1, s) + ")"
                             : std::string(1, s));
  }
  return Join(items, ", ");
}

std::string RankText(const std::vector<int>& ranks) {
  std::vector<std::string> items;
  for (int r : ranks) items.push_back(std::to_string(r));
  return Join(items, "<");
}

// Applies one "Key: value" line. Returns false when the key is unknown.
bool ApplyKeyLine(ScriptBuilder& b, std::string_view line, int line_no) {
  std::size_t colon = line.find(':');
  if (colon == std::string_view::npos) return false;
  std::string key = NormalizeKey(line.substr(0, colon));
  std::string_view value = Trim(line.substr(colon + 1));
  if (key == "game") {
    if (!b.script.name.empty()) throw ScriptSyntaxError(line_no, "duplicate game name");
    b.script.name = std::string(value);
  } else if (key == "number of players") {
    b.Mark(b.has_players, line_no, "number of players");
    auto v = ParseInt(value);
    if (!v || *v < 0 || *v > 1000) {
      throw ScriptSyntaxError(line_no, "bad number of players");
    }
    b.script.num_players = static_cast<int>(*v);
  } else if (key == "suit" || key == "suits") {
    b.Mark(b.has_suits, line_no, "suit");
    b.script.suits = ParseSuits(value, line_no);
  } else if (key == "card rank") {
    b.Mark(b.has_ranks, line_no, "card rank");
    b.script.rank_order = ParseRanks(value, line_no);
  } else if (key == "hand rank") {
    b.Mark(b.has_hand, line_no, "hand rank");
    b.script.hand_rank = ParseHandRank(value);
  } else if (key == "min / max bet") {
    b.Mark(b.has_bets, line_no, "min / max bet");
    auto parts = Split(value, "/");
    if (parts.size() != 2) throw ScriptSyntaxError(line_no, "bad min / max bet");
    auto lo = ParseInt(parts[0]);
    auto hi = ParseInt(parts[1]);
    if (!lo || !hi) throw ScriptSyntaxError(line_no, "bad min / max bet");
    b.script.min_bet = *lo;
    b.script.max_bet = *hi;
  } else if (key == "flow") {
    b.Mark(b.has_flow, line_no, "flow");
    b.script.flow = ParseFlow(value, line_no);
  } else {
    return false;
  }
  return true;
}

bool IsRulesHeader(std::string_view line) {
  return NormalizeKey(line).rfind("specific rules:", 0) == 0;
}

std::string StripNumbering(std::string_view s) {
  s = Trim(s);
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0 && i + 1 < s.size() && s[i] == '.' && s[i + 1] == ' ') {
    return std::string(Trim(s.substr(i + 2)));
  }
  return std::string(s);
}

void AddRule(ScriptBuilder& b, std::string_view sentence) {
  std::string s = StripNumbering(sentence);
  if (s.empty()) return;
  auto rule = ParseRuleSentence(s);
  if (!rule) throw UnknownPredicate(s);
  b.script.rules.push_back(*rule);
}

std::optional<SlotValues> ElementValues(const GameScript& s,
                                        const std::string& element) {
  SlotValues v;
  if (element == "players") {
    v["players"] = {std::to_string(s.num_players)};
    if (!s.name.empty()) v["name"] = {s.name};
  } else if (element == "suits") {
    for (char c : s.suits) v["suits"].push_back(std::string(1, c));
    v["suit_count"] = {std::to_string(s.suits.size())};
  } else if (element == "card_rank") {
    for (int r : s.rank_order) v["ranks"].push_back(std::to_string(r));
  } else if (element == "hand_rank") {
    if (s.hand_rank.empty()) return std::nullopt;
    v["hand"] = s.hand_rank;
  } else if (element == "bets") {
    v["min"] = {std::to_string(s.min_bet)};
    v["max"] = {std::to_string(s.max_bet)};
  } else if (element == "flow") {
    for (const auto& p : s.flow) v["flow"].push_back(p.Label());
  }
  return v;
}

std::string ElementDslLine(const GameScript& s, const std::string& element) {
  if (element == "players") return "Number of players: " + std::to_string(s.num_players);
  if (element == "suits") return "Suit: " + SuitText(s.suits);
  if (element == "card_rank") return "Card Rank: " + RankText(s.rank_order);
  if (element == "hand_rank") return "Hand Rank: " + Join(s.hand_rank, "<");
  if (element == "bets") {
    return "Min / Max bet: " + std::to_string(s.min_bet) + " / " +
           std::to_string(s.max_bet);
  }
  return "Flow: " + FlowText(s.flow);
}

void ApplyElement(ScriptBuilder& b, const std::string& element,
                  const SlotValues& v, int line_no, std::string_view line) {
  auto one = [&](const char* slot) -> long long {
    return std::stoll(v.at(slot).front());
  };
  if (element == "players") {
    b.Mark(b.has_players, line_no, "number of players");
    b.script.num_players = static_cast<int>(one("players"));
    if (auto it = v.find("name"); it != v.end()) {
      if (!b.script.name.empty() && b.script.name != it->second.front()) {
        throw ScriptSyntaxError(line_no, "game name disagrees with Game line");
      }
      b.script.name = it->second.front();
    }
  } else if (element == "suits") {
    b.Mark(b.has_suits, line_no, "suit");
    b.script.suits.clear();
    for (const auto& l : v.at("suits")) b.script.suits.push_back(l[0]);
    if (auto it = v.find("suit_count");
        it != v.end() &&
        std::stoul(it->second.front()) != b.script.suits.size()) {
      throw UnrecognizedTemplate(std::string(line));
    }
  } else if (element == "card_rank") {
    b.Mark(b.has_ranks, line_no, "card rank");
    b.script.rank_order.clear();
    for (const auto& r : v.at("ranks")) b.script.rank_order.push_back(std::stoi(r));
  } else if (element == "hand_rank") {
    b.Mark(b.has_hand, line_no, "hand rank");
    b.script.hand_rank = v.at("hand");
  } else if (element == "bets") {
    b.Mark(b.has_bets, line_no, "min / max bet");
    b.script.min_bet = one("min");
    b.script.max_bet = one("max");
  } else if (element == "flow") {
    b.Mark(b.has_flow, line_no, "flow");
    b.script.flow.clear();
    for (const auto& label : v.at("flow")) {
      b.script.flow.push_back(*ParsePhaseLabel(label));
    }
  }
}

const char* RuleTemplateId(const RulePredicate& r) {
  switch (r.kind) {
    case RuleKind::kLowWins: return "low_wins";
    case RuleKind::kHighLowSplit: return "high_low_split";
    case RuleKind::kLowBadugiSplit: return "low_badugi_split";
    case RuleKind::kBadugiRanking: return "badugi";
    case RuleKind::kOmahaConstraint: return "omaha";
    case RuleKind::kSmallStraight: return "small_straight";
    case RuleKind::kHandSize: return "hand_size";
    case RuleKind::kAllInAllowed: return "all_in";
    case RuleKind::kNewCombination: {
      const Combination& c = r.combination;
      switch (c.detector) {
        case Detector::kGroups: {
          bool all_two = std::all_of(c.groups.begin(), c.groups.end(),
                                     [](int g) { return g == 2; });
          bool all_three = std::all_of(c.groups.begin(), c.groups.end(),
                                       [](int g) { return g == 3; });
          if (c.groups.size() >= 2 && all_two) return "new_pairs";
          if (c.groups.size() >= 2 && all_three) return "new_triples";
          return "new_groups";
        }
        case Detector::kRun: return "new_run";
        case Detector::kSuited: return "new_suited";
        case Detector::kSuitedRun: return "new_suited_run";
        default: return nullptr;
      }
    }
  }
  return nullptr;
}

}  // namespace

std::string PhaseSpec::Label() const {
  std::string label = kPhaseNames[static_cast<int>(kind)];
  if (PhaseTakesCount(kind)) label += std::to_string(count);
  return label;
}

std::optional<PhaseSpec> ParsePhaseLabel(std::string_view label) {
  label = Trim(label);
  std::size_t i = 0;
  while (i < label.size() && std::isalpha(static_cast<unsigned char>(label[i]))) ++i;
  std::string name = Lower(label.substr(0, i));
  std::string_view digits = label.substr(i);
  for (int k = 0; k < 9; ++k) {
    if (name != kPhaseNames[k]) continue;
    PhaseSpec spec{static_cast<PhaseKind>(k), 0};
    if (PhaseTakesCount(spec.kind)) {
      if (digits.empty() || digits.front() == '0') return std::nullopt;
      auto v = ParseInt(digits);
      if (!v || *v < 1 || *v > 1000) return std::nullopt;
      spec.count = static_cast<int>(*v);
    } else if (!digits.empty()) {
      return std::nullopt;
    }
    return spec;
  }
  return std::nullopt;
}

std::optional<Combination> BuiltinCombination(std::string_view raw) {
  std::string name = NormalizeKey(raw);
  if (name == "high card") return Combination{"High Card", Detector::kHighCard, {}, 0};
  if (name == "pair") return Combination{"Pair", Detector::kGroups, {2}, 0};
  if (name == "two pair") return Combination{"Two Pair", Detector::kGroups, {2, 2}, 0};
  if (name == "three of a kind" || name == "3 of a kind") {
    return Combination{"Three of a Kind", Detector::kGroups, {3}, 0};
  }
  if (name == "straight") return Combination{"Straight", Detector::kRun, {}, 0};
  if (name == "flush") return Combination{"Flush", Detector::kSuited, {}, 0};
  if (name == "full house") return Combination{"Full House", Detector::kGroups, {3, 2}, 0};
  if (name == "four of a kind" || name == "4 of a kind") {
    return Combination{"Four of a Kind", Detector::kGroups, {4}, 0};
  }
  if (name == "straight flush") {
    return Combination{"Straight Flush", Detector::kSuitedRun, {}, 0};
  }
  return std::nullopt;
}

bool GameScript::Has(RuleKind kind) const { return Find(kind) != nullptr; }

const RulePredicate* GameScript::Find(RuleKind kind) const {
  for (const auto& r : rules) {
    if (r.kind == kind) return &r;
  }
  return nullptr;
}

int GameScript::HoleCardsDealt() const {
  int total = 0;
  for (const auto& p : flow) {
    if (p.kind == PhaseKind::kDeal) total += p.count;
  }
  return total;
}

int GameScript::CommunityCardsDealt() const {
  int total = 0;
  for (const auto& p : flow) {
    if (p.kind == PhaseKind::kFlop) total += p.count;
  }
  return total;
}

int GameScript::HandSize() const {
  if (const auto* r = Find(RuleKind::kHandSize)) return r->hand_size;
  if (const auto* r = Find(RuleKind::kOmahaConstraint)) return r->holes + r->community;
  return std::min(5, HoleCardsDealt() + CommunityCardsDealt());
}

std::vector<Combination> GameScript::Lattice() const {
  std::vector<Combination> lattice;
  bool small = Has(RuleKind::kSmallStraight);
  for (const auto& name : hand_rank) {
    std::optional<Combination> combo = BuiltinCombination(name);
    if (!combo) {
      for (const auto& r : rules) {
        if (r.kind == RuleKind::kNewCombination && r.combination.name == name) {
          combo = r.combination;
        }
      }
    }
    if (!combo) throw ValidationError("undefined combination: " + name);
    if (small && combo->name == "Straight") {
      lattice.push_back(Combination{std::string(kSmallStraight), Detector::kWrapRun, {}, 0});
    }
    lattice.push_back(*combo);
  }
  return lattice;
}

Deck BuildDeck(const GameScript& script) {
  return BuildDeck(script.suits, script.rank_order);
}

void ValidateScript(const GameScript& s) {
  if (s.num_players < 2) throw ValidationError("at least 2 players are required");
  if (s.suits.empty()) throw ValidationError("at least one suit is required");
  std::set<char> suit_set;
  for (char c : s.suits) {
    if (!std::isupper(static_cast<unsigned char>(c))) {
      throw ValidationError("suits must be single capital letters");
    }
    if (!suit_set.insert(c).second) {
      throw ValidationError(std::string("duplicate suit: ") + c);
    }
  }
  if (s.rank_order.size() < 2) throw ValidationError("at least 2 ranks are required");
  std::set<int> rank_set;
  for (int r : s.rank_order) {
    if (r <= 0) throw ValidationError("rank labels must be positive");
    if (!rank_set.insert(r).second) {
      throw ValidationError("duplicate rank: " + std::to_string(r));
    }
  }
  if (s.min_bet < 2 || s.min_bet % 2 != 0) {
    throw ValidationError("min bet must be an even number of at least 2");
  }
  if (s.min_bet > s.max_bet) throw ValidationError("min bet exceeds max bet");

  const auto& f = s.flow;
  if (f.empty() || f.front().kind != PhaseKind::kStart) {
    throw ValidationError("flow must begin with start");
  }
  if (f.back().kind != PhaseKind::kPrize) throw ValidationError("flow must end with prize");
  int shows = 0, blinds = 0, deals = 0;
  bool seen_bet = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const PhaseSpec& p = f[i];
    if (PhaseTakesCount(p.kind) && p.count < 1) {
      throw ValidationError("deal and flop need at least one card");
    }
    if (p.kind == PhaseKind::kStart && i != 0) throw ValidationError("start may only open the flow");
    if (p.kind == PhaseKind::kPrize && i + 1 != f.size()) {
      throw ValidationError("prize may only close the flow");
    }
    if (p.kind == PhaseKind::kShow) ++shows;
    if (p.kind == PhaseKind::kDeal) ++deals;
    if (p.kind == PhaseKind::kBet) seen_bet = true;
    if (p.kind == PhaseKind::kBlind) {
      ++blinds;
      if (seen_bet) throw ValidationError("blind must come before the first bet");
    }
  }
  if (shows != 1 || f.size() < 2 || f[f.size() - 2].kind != PhaseKind::kShow) {
    throw ValidationError("flow must have one show directly before prize");
  }
  if (blinds > 1) throw ValidationError("at most one blind phase");
  if (deals == 0) throw ValidationError("flow must deal cards to players");

  std::set<RuleKind> kinds;
  std::set<std::string> new_names;
  for (const auto& r : s.rules) {
    if (r.kind == RuleKind::kNewCombination) {
      const Combination& c = r.combination;
      if (c.name.empty() || BuiltinCombination(c.name) || c.name == kSmallStraight) {
        throw ValidationError("new combination may not reuse a built-in name: " + c.name);
      }
      if (!new_names.insert(c.name).second) {
        throw ValidationError("duplicate combination: " + c.name);
      }
      if (c.detector == Detector::kGroups) {
        if (c.groups.empty()) throw ValidationError("empty group shape");
        for (int g : c.groups) {
          if (g < 1) throw ValidationError("group sizes must be positive");
        }
        if (!std::is_sorted(c.groups.rbegin(), c.groups.rend())) {
          throw ValidationError("group sizes must be listed largest first");
        }
      } else if (c.detector == Detector::kRun || c.detector == Detector::kSuited ||
                 c.detector == Detector::kSuitedRun) {
        if (c.length < 1) throw ValidationError("combination length must be positive");
      } else {
        throw ValidationError("unsupported detector for " + c.name);
      }
      continue;
    }
    if (!kinds.insert(r.kind).second) throw ValidationError("duplicate specific rule");
  }

  const int available = s.HoleCardsDealt() + s.CommunityCardsDealt();
  if (const auto* r = s.Find(RuleKind::kHandSize)) {
    if (r->hand_size < 1) throw ValidationError("hand size must be positive");
    if (r->hand_size > available) {
      throw ValidationError("hand size " + std::to_string(r->hand_size) +
                            " exceeds the " + std::to_string(available) +
                            " cards a player receives");
    }
  }
  if (const auto* r = s.Find(RuleKind::kOmahaConstraint)) {
    if (r->holes < 1 || r->community < 1 || r->holes > s.HoleCardsDealt() ||
        r->community > s.CommunityCardsDealt()) {
      throw ValidationError("hole/community constraint exceeds dealt cards");
    }
    if (s.HandSize() != r->holes + r->community) {
      throw ValidationError("hole/community constraint disagrees with hand size");
    }
  }

  const bool badugi = s.Has(RuleKind::kBadugiRanking);
  if (s.hand_rank.empty() && !badugi) throw ValidationError("missing hand rank");
  std::set<std::string> hand_names;
  for (const auto& name : s.hand_rank) {
    if (!hand_names.insert(name).second) {
      throw ValidationError("duplicate combination in hand rank: " + name);
    }
  }
  s.Lattice();  // throws on undefined names
  if (s.Has(RuleKind::kSmallStraight) && !hand_names.count("Straight")) {
    throw ValidationError("Small Straight needs Straight in the hand rank");
  }
  if (s.Has(RuleKind::kLowWins) && s.Has(RuleKind::kHighLowSplit)) {
    throw ValidationError("low-wins and high-low split are exclusive");
  }
  if (s.Has(RuleKind::kLowBadugiSplit) && (!badugi || s.hand_rank.empty())) {
    throw ValidationError("low/Badugi split needs Badugi ranking and a hand rank");
  }
  if (badugi && s.Has(RuleKind::kHighLowSplit)) {
    throw ValidationError("high-low split cannot combine with Badugi ranking");
  }
  if (s.HandSize() < 1) throw ValidationError("players receive no cards");
}

std::string RuleSentence(const RulePredicate& rule) {
  const char* id = RuleTemplateId(rule);
  if (id == nullptr) throw ValidationError("rule has no sentence form");
  SlotValues v;
  v["holes"] = {std::to_string(rule.holes)};
  v["community"] = {std::to_string(rule.community)};
  v["k"] = {std::to_string(rule.hand_size)};
  const Combination& c = rule.combination;
  v["name"] = {c.name};
  v["count"] = {std::to_string(c.groups.size())};
  for (int g : c.groups) v["sizes"].push_back(std::to_string(g));
  v["length"] = {std::to_string(c.length)};
  auto text = TemplateBank::Get().rule(id).Render(v);
  if (!text) throw ValidationError("cannot render rule sentence");
  return *text;
}

std::optional<RulePredicate> ParseRuleSentence(std::string_view sentence) {
  std::string s(Trim(sentence));
  for (const auto& t : TemplateBank::Get().rules()) {
    auto v = t.Match(s);
    if (!v) continue;
    auto num = [&](const char* slot) { return std::stoi(v->at(slot).front()); };
    const std::string& id = t.id();
    RulePredicate r;
    if (id == "low_wins") r.kind = RuleKind::kLowWins;
    else if (id == "high_low_split") r.kind = RuleKind::kHighLowSplit;
    else if (id == "low_badugi_split") r.kind = RuleKind::kLowBadugiSplit;
    else if (id == "badugi") r.kind = RuleKind::kBadugiRanking;
    else if (id == "small_straight") r.kind = RuleKind::kSmallStraight;
    else if (id == "all_in") r.kind = RuleKind::kAllInAllowed;
    else if (id == "omaha") {
      r.kind = RuleKind::kOmahaConstraint;
      r.holes = num("holes");
      r.community = num("community");
    } else if (id == "hand_size") {
      r.kind = RuleKind::kHandSize;
      r.hand_size = num("k");
    } else {
      r.kind = RuleKind::kNewCombination;
      r.combination.name = v->at("name").front();
      if (id == "new_pairs" || id == "new_triples") {
        r.combination.detector = Detector::kGroups;
        r.combination.groups.assign(num("count"), id == "new_pairs" ? 2 : 3);
      } else if (id == "new_groups") {
        r.combination.detector = Detector::kGroups;
        for (const auto& g : v->at("sizes")) r.combination.groups.push_back(std::stoi(g));
      } else {
        r.combination.detector = id == "new_run"      ? Detector::kRun
                                 : id == "new_suited" ? Detector::kSuited
                                                      : Detector::kSuitedRun;
        r.combination.length = num("length");
      }
    }
    return r;
  }
  return std::nullopt;
}

GameScript ParseScript(std::string_view text) {
  ScriptBuilder b;
  bool in_rules = false;
  auto lines = Lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    std::string_view line = Trim(lines[i]);
    if (line.empty()) continue;
    if (in_rules) {
      AddRule(b, line);
      continue;
    }
    if (IsRulesHeader(line)) {
      in_rules = true;
      AddRule(b, line.substr(line.find(':') + 1));
      continue;
    }
    if (!ApplyKeyLine(b, line, line_no)) {
      throw ScriptSyntaxError(line_no, "expected 'Key: value', got: " + std::string(line));
    }
  }
  return b.Finish();
}

std::string SerializeScript(const GameScript& s) {
  std::string out;
  if (!s.name.empty()) out += "Game: " + s.name + "\n";
  for (const auto& element : TemplateBank::Get().element_ids()) {
    if (element == "hand_rank" && s.hand_rank.empty()) continue;
    out += ElementDslLine(s, element) + "\n";
  }
  if (!s.rules.empty()) {
    out += "Specific Rules:\n";
    for (std::size_t i = 0; i < s.rules.size(); ++i) {
      if (s.rules.size() > 1) out += std::to_string(i + 1) + ". ";
      out += RuleSentence(s.rules[i]) + "\n";
    }
  }
  return out;
}

namespace {

std::string Rephrase(const GameScript& s, Rng& rng, double element_probability,
                     bool whole) {
  const auto& bank = TemplateBank::Get();
  std::string out;
  if (!s.name.empty()) out += "Game: " + s.name + "\n";
  for (const auto& element : bank.element_ids()) {
    auto values = ElementValues(s, element);
    if (!values) continue;
    bool selected = whole || rng.Uniform() < element_probability;
    if (!selected) {
      out += ElementDslLine(s, element) + "\n";
      continue;
    }
    std::vector<std::string> renderings;
    for (const auto& t : bank.element(element)) {
      if (auto r = t.Render(*values)) renderings.push_back(std::move(*r));
    }
    if (renderings.empty()) {
      out += ElementDslLine(s, element) + "\n";
      continue;
    }
    out += renderings[rng.Bounded(renderings.size())] + "\n";
  }
  if (!s.rules.empty()) {
    out += "Specific Rules:\n";
    for (std::size_t i = 0; i < s.rules.size(); ++i) {
      if (s.rules.size() > 1) out += std::to_string(i + 1) + ". ";
      out += RuleSentence(s.rules[i]) + "\n";
    }
  }
  return out;
}

}  // namespace

std::string RephraseScript(const GameScript& script, const RephraseConfig& cfg) {
  if (cfg.element_probability < 0.0 || cfg.element_probability > 1.0 ||
      cfg.whole_script_probability < 0.0 || cfg.whole_script_probability > 0.05) {
    throw ValidationError("rephrase probabilities out of range");
  }
  Rng rng(cfg.seed);
  bool whole = rng.Uniform() < cfg.whole_script_probability;
  return Rephrase(script, rng, cfg.element_probability, whole);
}

std::string NaturalScript(const GameScript& script, std::uint64_t seed) {
  Rng rng(seed);
  return Rephrase(script, rng, 1.0, true);
}

GameScript ParseRephrased(std::string_view text) {
  const auto& bank = TemplateBank::Get();
  ScriptBuilder b;
  bool in_rules = false;
  auto lines = Lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    std::string_view line = Trim(lines[i]);
    if (line.empty()) continue;
    if (in_rules) {
      AddRule(b, line);
      continue;
    }
    if (IsRulesHeader(line)) {
      in_rules = true;
      AddRule(b, line.substr(line.find(':') + 1));
      continue;
    }
    if (ApplyKeyLine(b, line, line_no)) continue;
    bool matched = false;
    for (const auto& element : bank.element_ids()) {
      for (const auto& t : bank.element(element)) {
        if (auto v = t.Match(line)) {
          ApplyElement(b, element, *v, line_no, line);
          matched = true;
          break;
        }
      }
      if (matched) break;
    }
    if (!matched) throw UnrecognizedTemplate(std::string(line));
  }
  return b.Finish();
}

int TemplateBankVersion() { return TemplateBank::Get().version(); }

}  // namespace scriptpoker
