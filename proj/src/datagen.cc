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

#include "scriptpoker/datagen.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "core_functions_data.h"
#include "scriptpoker/errors.h"
#include "scriptpoker/evaluator.h"
#include "scriptpoker/statelang.h"

namespace scriptpoker {
namespace {

using nlohmann::json;
using Scripts = std::vector<std::pair<std::string, GameScript>>;

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index) {
  Rng rng(seed ^ (index * 0xD1B54A32D192ED03ull));
  rng.Next();
  return rng.Next();
}

bool FlowHas(const GameScript& s, PhaseKind kind) {
  return std::any_of(s.flow.begin(), s.flow.end(),
                     [&](const PhaseSpec& p) { return p.kind == kind; });
}

int Flops(const GameScript& s) {
  return static_cast<int>(std::count_if(s.flow.begin(), s.flow.end(), [](const PhaseSpec& p) {
    return p.kind == PhaseKind::kFlop;
  }));
}

bool FitsDeck(const GameScript& s) {
  std::size_t need = static_cast<std::size_t>(s.num_players) * s.HoleCardsDealt() +
                     s.CommunityCardsDealt() + Flops(s);
  return need <= BuildDeck(s).size();
}

std::string Collapse(const std::string& label) {
  if (label.rfind("deal", 0) == 0) return "deal";
  if (label.rfind("flop", 0) == 0) return "flop";
  return label;
}

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) out += (i ? "\n" : "") + lines[i];
  return out;
}

std::vector<std::string> Fields(const std::string& line) {
  std::vector<std::string> out;
  if (line.empty() || line[0] != '|') return out;
  std::size_t start = 1;
  while (true) {
    std::size_t end = line.find('|', start);
    if (end == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

std::string PipeCards(const std::string& key, std::span<const Card> cards) {
  std::string out = "|" + key;
  for (const Card& c : cards) out += "|" + c.ToString();
  return out;
}

std::vector<Card> ParseCardsLine(const std::string& text, const std::string& key) {
  auto f = Fields(text);
  if (f.empty() || f[0] != key) throw ParseError(1, "expected |" + key + " line");
  std::vector<Card> out;
  for (std::size_t i = 1; i < f.size(); ++i) {
    auto c = ParseCard(f[i]);
    if (!c) throw ParseError(1, "bad card '" + f[i] + "'");
    out.push_back(*c);
  }
  return out;
}

std::int64_t ToInt(const std::string& s) {
  std::size_t used = 0;
  long long v = std::stoll(s, &used);
  if (used != s.size()) throw ParseError(1, "bad number '" + s + "'");
  return v;
}

std::string Fill(std::string text, const std::map<std::string, std::string>& slots) {
  for (const auto& [key, value] : slots) {
    const std::string slot = "{" + key + "}";
    for (std::size_t pos = text.find(slot); pos != std::string::npos;
         pos = text.find(slot, pos + value.size())) {
      text.replace(pos, slot.size(), value);
    }
  }
  return text;
}

// ---- Core functions -------------------------------------------------------

const std::map<std::string, std::string>& GetNames() {
  static const std::map<std::string, std::string> names = {
      {"get straight", "Straight"},          {"get pair", "Pair"},
      {"get two pair", "Two Pair"},          {"get 3 of a kind", "Three of a Kind"},
      {"get 4 of a kind", "Four of a Kind"}, {"get flush", "Flush"},
      {"get full house", "Full House"}};
  return names;
}

// Engine transitions whose input is a state and whose output is the next
// state, with the flow function they must exercise.
const std::map<std::string, std::string>& EngineFunctions() {
  static const std::map<std::string, std::string> fns = {
      {"blind", "blind"},           {"dealx", "deal"},
      {"flopx", "flop"},            {"show", "show"},
      {"prize", "prize"},           {"show low", "show"},
      {"show high", "show"},        {"show high low", "show"},
      {"prize high low", "prize"},  {"show high x", "show"},
      {"show low x", "show"},       {"switch", "switch"},
      {"bet check", "bet"},         {"bet call", "bet"},
      {"bet raise to x", "bet"},    {"bet fold", "bet"}};
  return fns;
}

bool TakesPlayerInput(const std::string& fn) {
  return fn == "switch" || fn.rfind("bet ", 0) == 0;
}

// Input order is kept among cards of equal rank.
std::vector<Card> SortByRank(const Evaluator& eval, std::vector<Card> cards, bool high_first) {
  std::stable_sort(cards.begin(), cards.end(), [&](const Card& a, const Card& b) {
    int x = eval.Ordinal(a.rank), y = eval.Ordinal(b.rank);
    return high_first ? x > y : x < y;
  });
  return cards;
}

std::string CardOutput(const std::optional<std::vector<Card>>& cards) {
  if (!cards || cards->empty()) return "None";
  return PipeCards("cards", *cards);
}

std::string ComputeCards(const std::string& fn, const GameScript& script,
                         const std::map<std::string, std::string>& slots,
                         const std::vector<Card>& cards) {
  Evaluator eval(script);
  if (auto it = GetNames().find(fn); it != GetNames().end()) {
    return CardOutput(eval.Detect(it->second, cards));
  }
  if (fn == "rank low high") return PipeCards("cards", SortByRank(eval, cards, false));
  if (fn == "rank high low") return PipeCards("cards", SortByRank(eval, cards, true));
  if (fn == "low suit" || fn == "high suit") {
    std::vector<Card> out;
    for (char suit : script.suits) {
      std::optional<Card> pick;
      for (const Card& c : cards) {
        if (c.suit != suit) continue;
        int o = eval.Ordinal(c.rank);
        if (!pick || (fn == "low suit" ? o < eval.Ordinal(pick->rank)
                                       : o > eval.Ordinal(pick->rank))) {
          pick = c;
        }
      }
      if (pick) out.push_back(*pick);
    }
    return PipeCards("cards", out);
  }
  if (fn == "highest x" || fn == "lowest x") {
    auto sorted = SortByRank(eval, cards, fn == "highest x");
    std::size_t x = static_cast<std::size_t>(ToInt(slots.at("x")));
    sorted.resize(std::min(x, sorted.size()));
    return PipeCards("cards", sorted);
  }
  if (fn == "highest no pair" || fn == "lowest no pair") {
    std::optional<Card> pick;
    for (const Card& c : cards) {
      int same = static_cast<int>(std::count_if(
          cards.begin(), cards.end(), [&](const Card& d) { return d.rank == c.rank; }));
      if (same != 1) continue;
      int o = eval.Ordinal(c.rank);
      if (!pick || (fn == "highest no pair" ? o > eval.Ordinal(pick->rank)
                                            : o < eval.Ordinal(pick->rank))) {
        pick = c;
      }
    }
    if (!pick) return "None";
    return PipeCards("cards", std::vector<Card>{*pick});
  }
  if (fn == "group suits") {
    std::vector<std::string> lines;
    for (char suit : script.suits) {
      std::vector<Card> group;
      for (const Card& c : cards) {
        if (c.suit == suit) group.push_back(c);
      }
      if (!group.empty()) lines.push_back(PipeCards(std::string(1, suit), group));
    }
    return JoinLines(lines);
  }
  if (fn == "rank") {
    std::string out = "|rank";
    for (const Card& c : cards) {
      out += "|" + c.ToString() + ": " + std::to_string(eval.Ordinal(c.rank) + 1);
    }
    return out;
  }
  if (fn == "get all") {
    std::vector<std::string> lines;
    for (const Combination& c : eval.lattice()) {
      if (auto found = eval.Detect(c, cards)) lines.push_back(PipeCards(c.name, *found));
    }
    return lines.empty() ? "None" : JoinLines(lines);
  }
  if (fn == "len") return std::to_string(cards.size());
  throw Error("unknown core function: " + fn);
}

std::string ComputeChips(const std::string& fn, const std::map<std::string, std::string>& slots,
                         const std::string& input) {
  auto f = Fields(input);
  if (f.empty() || f[0] != "chip") throw ParseError(1, "expected |chip line");
  std::vector<PlayerChips> chips;
  for (std::size_t i = 1; i < f.size(); ++i) {
    int seat = 0;
    chips.push_back(ParseChipEntry(f[i], 1, &seat));
    if (seat != static_cast<int>(i) - 1) throw ParseError(1, "players out of order");
  }
  if (fn == "total bonus") {
    std::int64_t pot = 0;
    for (const auto& c : chips) pot += c.bet;
    return std::to_string(pot);
  }
  const std::int64_t x = ToInt(slots.at("x"));
  const int seat = static_cast<int>(ToInt(slots.at("a"))) - 1;
  if (seat < 0 || seat >= static_cast<int>(chips.size())) throw UnknownPlayer(slots.at("a"));
  PlayerChips& c = chips[seat];
  if (fn == "add x chips") {
    if (x > c.stack) throw IllegalAction("not enough chips");
    c.bet += x;
    c.stack -= x;
  } else {
    if (x > c.bet) throw IllegalAction("bet is smaller");
    c.bet -= x;
    c.stack += x;
  }
  std::string out = "|chip";
  for (std::size_t i = 0; i < chips.size(); ++i) {
    out += "|" + FormatChipEntry(static_cast<int>(i), chips[i]);
  }
  return out;
}

// ---- Core sample generation ------------------------------------------------

struct Transition {
  GameScript script;
  GameState prev;
  std::optional<PlayerInput> input;
  GameState next;
};

using TransitionFilter =
    std::function<bool(const GameState&, const std::optional<PlayerInput>&, const GameState&,
                       const GameScript&)>;

Transition FindTransition(const GameScript& base, Rng& rng, const TransitionFilter& keep) {
  for (int attempt = 0; attempt < 400; ++attempt) {
    RoundRecord r = SimulateRound("", base, rng.Next(), 1000, true);
    std::vector<std::size_t> hits;
    for (std::size_t t = 0; t + 1 < r.log.states.size(); ++t) {
      if (keep(r.log.states[t], r.log.inputs[t], r.log.states[t + 1], r.script)) {
        hits.push_back(t);
      }
    }
    if (hits.empty()) continue;
    std::size_t t = hits[rng.Bounded(hits.size())];
    return Transition{r.script, r.log.states[t], r.log.inputs[t], r.log.states[t + 1]};
  }
  throw Error("no suitable transition found for " + SerializeScript(base));
}

bool IsPlainHigh(const GameScript& s) {
  return !s.Has(RuleKind::kLowWins) && !s.Has(RuleKind::kHighLowSplit) &&
         !s.Has(RuleKind::kLowBadugiSplit) && !s.Has(RuleKind::kBadugiRanking) &&
         !s.hand_rank.empty();
}

const GameScript& Pick(const std::vector<const GameScript*>& pool, Rng& rng) {
  if (pool.empty()) throw Error("no script suits this core function");
  return *pool[rng.Bounded(pool.size())];
}

GameScript WithoutRule(GameScript s, RuleKind kind) {
  s.rules.erase(std::remove_if(s.rules.begin(), s.rules.end(),
                               [&](const RulePredicate& r) { return r.kind == kind; }),
                s.rules.end());
  return s;
}

RulePredicate Rule(RuleKind kind, int holes = 0, int community = 0) {
  RulePredicate r;
  r.kind = kind;
  r.holes = holes;
  r.community = community;
  return r;
}

GameScript WithRule(GameScript s, RulePredicate rule) {
  s = WithoutRule(std::move(s), rule.kind);
  s.rules.push_back(rule);
  return s;
}

std::string LabelOf(const GameState& prev, const GameState& next) {
  return next.trace.size() > prev.trace.size() ? next.trace.back() : "";
}

CoreSample MakeCore(const CoreFunction& fn, const Scripts& scripts, Rng& rng) {
  CoreSample sample;
  sample.function = fn.id;
  std::vector<const GameScript*> all, high, low, omaha, blind, flop, draw;
  for (const auto& [id, s] : scripts) {
    all.push_back(&s);
    if (IsPlainHigh(s)) high.push_back(&s);
    if (s.Has(RuleKind::kLowWins) && !s.Has(RuleKind::kBadugiRanking)) low.push_back(&s);
    if (s.Has(RuleKind::kOmahaConstraint)) omaha.push_back(&s);
    if (FlowHas(s, PhaseKind::kBlind)) blind.push_back(&s);
    if (FlowHas(s, PhaseKind::kFlop)) flop.push_back(&s);
    if (FlowHas(s, PhaseKind::kSwitch)) draw.push_back(&s);
  }
  auto by_label = [](std::string want) -> TransitionFilter {
    return [want](const GameState& a, const std::optional<PlayerInput>&, const GameState& b,
                  const GameScript&) { return Collapse(LabelOf(a, b)) == want; };
  };
  auto by_action = [](ActionKind kind) -> TransitionFilter {
    return [kind](const GameState&, const std::optional<PlayerInput>& in, const GameState&,
                  const GameScript&) { return in && in->action.kind == kind; };
  };
  // Showdowns with at least two players, so that there is something to pick.
  auto contested = [](std::string want) -> TransitionFilter {
    return [want](const GameState& a, const std::optional<PlayerInput>&, const GameState& b,
                  const GameScript&) {
      if (LabelOf(a, b) != want) return false;
      return std::find(b.trace.begin(), b.trace.end(), "show") != b.trace.end();
    };
  };

  const std::string& id = fn.id;
  std::optional<Transition> tr;
  if (id == "shuffle") {
    sample.script = SerializeScript(JitterScript(Pick(all, rng), rng));
    sample.input = "|seed|" + std::to_string(rng.Bounded(1000000));
  } else if (id == "blind") {
    tr = FindTransition(Pick(blind, rng), rng, by_label("blind"));
  } else if (id == "dealx") {
    tr = FindTransition(Pick(all, rng), rng, by_label("deal"));
    sample.slots["x"] = LabelOf(tr->prev, tr->next).substr(4);
  } else if (id == "flopx") {
    tr = FindTransition(Pick(flop, rng), rng, by_label("flop"));
    sample.slots["x"] = LabelOf(tr->prev, tr->next).substr(4);
  } else if (id == "switch") {
    tr = FindTransition(Pick(draw, rng), rng, by_action(ActionKind::kSwitch));
  } else if (id == "show") {
    tr = FindTransition(Pick(all, rng), rng, contested("show"));
  } else if (id == "prize") {
    tr = FindTransition(Pick(all, rng), rng, by_label("prize"));
  } else if (id == "show low") {
    tr = FindTransition(Pick(low, rng), rng, contested("show"));
  } else if (id == "show high") {
    tr = FindTransition(Pick(high, rng), rng, contested("show"));
  } else if (id == "show high low" || id == "prize high low") {
    GameScript s = WithRule(Pick(high, rng), Rule(RuleKind::kHighLowSplit));
    tr = FindTransition(s, rng, contested(id == "show high low" ? "show" : "prize"));
  } else if (id == "show high x" || id == "show low x") {
    GameScript s = WithoutRule(Pick(omaha, rng), RuleKind::kLowWins);
    int x = 1 + static_cast<int>(rng.Bounded(3));
    s = WithRule(s, Rule(RuleKind::kOmahaConstraint, x, 5 - x));
    if (id == "show low x") s = WithRule(s, Rule(RuleKind::kLowWins));
    tr = FindTransition(s, rng, contested("show"));
    sample.slots["x"] = std::to_string(x);
  } else if (id == "bet check") {
    tr = FindTransition(Pick(all, rng), rng, by_action(ActionKind::kCheck));
  } else if (id == "bet call") {
    tr = FindTransition(Pick(all, rng), rng, by_action(ActionKind::kCall));
  } else if (id == "bet raise to x") {
    tr = FindTransition(Pick(all, rng), rng, by_action(ActionKind::kRaiseTo));
    sample.slots["x"] = std::to_string(tr->input->action.amount);
  } else if (id == "bet fold") {
    tr = FindTransition(Pick(all, rng), rng, by_action(ActionKind::kFold));
  } else if (id == "total bonus" || id == "add x chips" || id == "drop x chips") {
    auto t = FindTransition(Pick(blind, rng), rng, by_label("bet"));
    sample.script = SerializeScript(t.script);
    const GameState& s = t.prev;
    std::string line = "|chip";
    for (int i = 0; i < s.num_players; ++i) line += "|" + FormatChipEntry(i, s.chips[i]);
    sample.input = line;
    if (id != "total bonus") {
      std::vector<int> seats;
      for (int i = 0; i < s.num_players; ++i) {
        if (id == "add x chips" ? s.chips[i].stack > 0 : s.chips[i].bet > 0) seats.push_back(i);
      }
      int seat = seats[rng.Bounded(seats.size())];
      std::int64_t limit = id == "add x chips" ? s.chips[seat].stack : s.chips[seat].bet;
      sample.slots["a"] = std::to_string(seat + 1);
      sample.slots["x"] = std::to_string(1 + static_cast<std::int64_t>(rng.Bounded(
                                                 static_cast<std::uint64_t>(limit))));
    }
  } else if (id == "bonus for x") {
    const GameScript& s = Pick(all, rng);
    sample.script = SerializeScript(s);
    std::int64_t x = 1 + static_cast<std::int64_t>(rng.Bounded(s.num_players));
    std::int64_t share = s.min_bet * (1 + static_cast<std::int64_t>(rng.Bounded(100)));
    sample.slots["x"] = std::to_string(x);
    sample.input = "|pot|" + std::to_string(share * x);
  } else {
    // Card functions work on a random hand from a variant's deck.
    const GameScript& s = Pick(high.empty() ? all : high, rng);
    sample.script = SerializeScript(s);
    Deck deck = Shuffled(BuildDeck(s), rng);
    std::size_t k = 5 + rng.Bounded(4);
    auto cards = deck.Draw(std::min(k, deck.size()));
    if (id == "highest x" || id == "lowest x") {
      sample.slots["x"] = std::to_string(1 + rng.Bounded(cards.size()));
    }
    sample.input = PipeCards("cards", cards);
  }

  if (tr) {
    sample.script = SerializeScript(tr->script);
    sample.input = SerializeState(tr->prev);
    if (tr->input) {
      sample.input += "\n" + FormatInput(*tr->input);
      sample.slots["a"] = std::to_string(tr->input->seat + 1);
      if (id == "switch") {
        sample.slots["x"] =
            tr->input->action.cards.empty() ? "0" : JoinCards(tr->input->action.cards);
      }
    }
  }
  sample.instruction = Fill(fn.instruction, sample.slots);
  sample.output = ComputeCore(id, sample.script, sample.slots, sample.input);
  return sample;
}

json ScriptStatsOf(const std::string& text) {
  try {
    GameScript s = ParseRephrased(text);
    return json{{"players", s.num_players}, {"min", s.min_bet}, {"max", s.max_bet}};
  } catch (const Error&) {
    return json();
  }
}

}  // namespace

// ---- Samples -----------------------------------------------------------------

json NspSample::ToJson() const {
  return json{{"kind", "nsp"},           {"stage", stage},
              {"variant", variant},      {"function", function},
              {"category", category},    {"seed", seed},
              {"round", round},          {"step", step},
              {"form", form},            {"script", script},
              {"prev_state", prev_state}, {"player_input", player_input},
              {"next_state", next_state}};
}

NspSample NspSample::FromJson(const json& j) {
  NspSample s;
  s.script = j.at("script").get<std::string>();
  s.prev_state = j.at("prev_state").get<std::string>();
  s.player_input = j.value("player_input", "");
  s.next_state = j.at("next_state").get<std::string>();
  s.variant = j.value("variant", "");
  s.function = j.value("function", "");
  s.category = j.value("category", "");
  s.seed = j.value("seed", std::uint64_t{0});
  s.round = j.value("round", 0);
  s.step = j.value("step", 0);
  s.form = j.value("form", "structured");
  s.stage = j.value("stage", "");
  return s;
}

json CoreSample::ToJson() const {
  return json{{"kind", "core"},   {"stage", stage},   {"function", function},
              {"instruction", instruction}, {"slots", slots}, {"script", script},
              {"input", input},   {"output", output}};
}

CoreSample CoreSample::FromJson(const json& j) {
  CoreSample s;
  s.function = j.at("function").get<std::string>();
  s.instruction = j.at("instruction").get<std::string>();
  s.slots = j.value("slots", std::map<std::string, std::string>{});
  s.script = j.at("script").get<std::string>();
  s.input = j.at("input").get<std::string>();
  s.output = j.at("output").get<std::string>();
  s.stage = j.value("stage", "");
  return s;
}

std::string TransitionFunction(const GameState& prev, const GameState& next,
                               const GameScript& script) {
  if (next.trace.size() > prev.trace.size()) return Collapse(next.trace.back());
  if (prev.trace.size() < script.flow.size()) {
    return Collapse(script.flow[prev.trace.size()].Label());
  }
  return "prize";
}

std::vector<std::string> ScriptCategories(const GameScript& script) {
  std::vector<std::string> out;
  if (script.Has(RuleKind::kBadugiRanking) && !script.Has(RuleKind::kLowBadugiSplit)) {
    for (int i = 1; i <= static_cast<int>(script.suits.size()); ++i) {
      out.push_back("Badugi " + std::to_string(i));
    }
    return out;
  }
  Evaluator eval(script);
  bool always = false;
  for (const auto& c : eval.lattice()) always = always || c.detector == Detector::kHighCard;
  if (!always) out.push_back(eval.CombinationName(-1));
  for (const auto& c : eval.lattice()) out.push_back(c.name);
  return out;
}

std::string RoundCategory(const GameState& s, const GameScript& script) {
  if (std::find(s.trace.begin(), s.trace.end(), "show") == s.trace.end()) {
    return std::string(kNoShowdown);
  }
  Evaluator eval(script);
  std::vector<bool> active;
  for (const auto& c : s.chips) active.push_back(!c.folded);
  Showdown sd = eval.Winners(s.hole, active, s.community);
  if (sd.first.empty()) return std::string(kNoShowdown);
  if (sd.kind == Showdown::Kind::kBadugi) {
    std::vector<Card> cards = s.hole[sd.first[0]];
    cards.insert(cards.end(), s.community.begin(), s.community.end());
    return "Badugi " + std::to_string(eval.BadugiSelect(cards).value.count);
  }
  bool low = sd.kind == Showdown::Kind::kLowBadugi || script.Has(RuleKind::kLowWins);
  int best = -2;
  for (int seat : sd.first) {
    best = std::max(best, eval.BestHand(s.hole[seat], s.community, low).value.combination);
  }
  return eval.CombinationName(best);
}

GameScript JitterScript(const GameScript& script, Rng& rng) {
  static const std::int64_t kMinBets[] = {2, 4, 6, 10, 20};
  for (int attempt = 0; attempt < 100; ++attempt) {
    GameScript s = script;
    s.num_players = 2 + static_cast<int>(rng.Bounded(7));
    s.min_bet = kMinBets[rng.Bounded(5)];
    std::int64_t lo = std::max<std::int64_t>(s.min_bet * 10, 100) / 10;
    s.max_bet = 10 * (lo + static_cast<std::int64_t>(rng.Bounded(200 - lo + 1)));
    if (FitsDeck(s)) return s;
  }
  return script;
}

RoundRecord SimulateRound(const std::string& variant, const GameScript& script,
                          std::uint64_t seed, std::int64_t stack, bool jitter) {
  RoundRecord r;
  r.variant = variant;
  r.seed = seed;
  Rng rng(seed);
  r.script = jitter ? JitterScript(script, rng) : script;
  RandomAgent agent(rng.Next());
  r.log = RunRound(r.script, rng.Next(),
                   std::vector<std::int64_t>(r.script.num_players,
                                             std::max(stack, r.script.min_bet)),
                   {&agent});
  r.category = RoundCategory(r.log.states.back(), r.script);
  return r;
}

std::vector<RoundRecord> GenerateRounds(const CorpusConfig& config) {
  if (config.scripts.empty()) throw ValidationError("no scripts");
  if (config.rounds < 1) throw ValidationError("rounds must be at least 1");
  const std::size_t k = config.scripts.size();
  auto candidate = [&](std::uint64_t i) {
    const auto& [variant, script] = config.scripts[i % k];
    return SimulateRound(variant, script, DeriveSeed(config.seed, i), config.stack,
                         config.jitter);
  };
  std::vector<RoundRecord> out;
  if (!config.balance.enabled) {
    for (int i = 0; i < config.rounds; ++i) out.push_back(candidate(i));
    return out;
  }

  const BalanceSpec& b = config.balance;
  std::map<std::string, double> weights = b.weights;
  if (weights.empty()) {
    for (const auto& c : ScriptCategories(config.scripts[0].second)) weights[c] = 1.0;
  }
  std::set<std::string> possible;
  for (const auto& [variant, script] : config.scripts) {
    for (const auto& c : ScriptCategories(script)) possible.insert(c);
  }
  double total_weight = 0;
  for (const auto& [c, w] : weights) {
    if (w <= 0) throw ValidationError("balance weights must be positive");
    if (!possible.count(c)) throw QuotaUnreachable(c);
    total_weight += w;
  }
  const int no_showdown = static_cast<int>(std::lround(config.rounds * b.no_showdown_share));
  const int showdown = config.rounds - no_showdown;
  std::map<std::string, int> quota;
  int assigned = 0;
  for (const auto& [c, w] : weights) {
    quota[c] = static_cast<int>(std::floor(showdown * w / total_weight));
    assigned += quota[c];
  }
  for (auto it = quota.begin(); assigned < showdown; ++it, ++assigned) {
    if (it == quota.end()) it = quota.begin();
    ++it->second;
  }
  quota[std::string(kNoShowdown)] += no_showdown;

  std::map<std::string, std::vector<std::size_t>> accepted;
  int filled = 0;
  const std::uint64_t budget =
      static_cast<std::uint64_t>(config.rounds) * std::max(1, b.candidates_per_round);
  for (std::uint64_t i = 0; i < budget && filled < config.rounds; ++i) {
    RoundRecord r = candidate(i);
    auto q = quota.find(r.category);
    if (q == quota.end()) continue;
    auto& bucket = accepted[r.category];
    if (static_cast<int>(bucket.size()) >= q->second) continue;
    bucket.push_back(out.size());
    out.push_back(std::move(r));
    ++filled;
  }
  // Up-sample what the candidate budget could not fill.
  for (const auto& [c, want] : quota) {
    auto& bucket = accepted[c];
    if (want > 0 && bucket.empty()) throw QuotaUnreachable(c);
    const std::size_t distinct = bucket.size();
    for (std::size_t j = 0; static_cast<int>(bucket.size()) < want; ++j) {
      bucket.push_back(out.size());
      out.push_back(out[bucket[j % distinct]]);
    }
  }
  return out;
}

std::vector<NspSample> RoundSamples(const RoundRecord& round, int round_index) {
  std::vector<NspSample> out;
  const std::string script = SerializeScript(round.script);
  const auto& states = round.log.states;
  std::string prev = SerializeState(states[0]);
  for (std::size_t t = 0; t + 1 < states.size(); ++t) {
    NspSample s;
    s.script = script;
    s.prev_state = prev;
    if (round.log.inputs[t]) s.player_input = FormatInput(*round.log.inputs[t]);
    s.next_state = SerializeState(states[t + 1]);
    s.variant = round.variant;
    s.function = TransitionFunction(states[t], states[t + 1], round.script);
    s.category = round.category;
    s.seed = round.seed;
    s.round = round_index;
    s.step = static_cast<int>(t);
    prev = s.next_state;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<NspSample> GenerateCorpus(const CorpusConfig& config) {
  std::vector<NspSample> out;
  auto rounds = GenerateRounds(config);
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    auto samples = RoundSamples(rounds[i], static_cast<int>(i));
    out.insert(out.end(), std::make_move_iterator(samples.begin()),
               std::make_move_iterator(samples.end()));
  }
  return out;
}

// ---- Core set ----------------------------------------------------------------

const std::vector<CoreFunction>& CoreFunctions() {
  static const std::vector<CoreFunction> fns = [] {
    std::vector<CoreFunction> out;
    json j = json::parse(internal::kCoreFunctionsJson);
    for (const auto& f : j.at("functions")) {
      out.push_back({f.at("id").get<std::string>(), f.at("instruction").get<std::string>()});
    }
    return out;
  }();
  return fns;
}

std::vector<CoreSample> GenerateCoreSet(const Scripts& scripts, int per_function,
                                        std::uint64_t seed) {
  if (per_function < 1) throw ValidationError("per_function must be at least 1");
  std::vector<CoreSample> out;
  const auto& fns = CoreFunctions();
  for (int i = 0; i < per_function; ++i) {
    for (std::size_t f = 0; f < fns.size(); ++f) {
      Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(i) * fns.size() + f));
      out.push_back(MakeCore(fns[f], scripts, rng));
    }
  }
  return out;
}

std::string ComputeCore(const std::string& function, const std::string& script_text,
                        const std::map<std::string, std::string>& slots,
                        const std::string& input) {
  GameScript script = ParseScript(script_text);
  if (function == "shuffle") {
    auto f = Fields(input);
    if (f.size() != 2 || f[0] != "seed") throw ParseError(1, "expected |seed|<n>");
    Rng rng(static_cast<std::uint64_t>(ToInt(f[1])));
    Deck deck = Shuffled(BuildDeck(script), rng);
    return PipeCards("stack", deck.cards());
  }
  if (auto it = EngineFunctions().find(function); it != EngineFunctions().end()) {
    std::vector<std::string> lines = SplitLines(input);
    std::optional<PlayerInput> in;
    if (TakesPlayerInput(function)) {
      if (lines.empty()) throw ParseError(0, "missing player input");
      in = ParseInput(lines.back());
      lines.pop_back();
    }
    GameState prev = ParseState(JoinLines(lines), script);
    GameState next = NextState(prev, script, in);
    if (TransitionFunction(prev, next, script) != it->second) {
      throw IllegalAction("input does not lead to a " + it->second + " transition");
    }
    return SerializeState(next);
  }
  if (function == "total bonus" || function == "add x chips" || function == "drop x chips") {
    return ComputeChips(function, slots, input);
  }
  if (function == "bonus for x") {
    auto f = Fields(input);
    if (f.size() != 2 || f[0] != "pot") throw ParseError(1, "expected |pot|<n>");
    std::int64_t x = ToInt(slots.at("x"));
    if (x < 1) throw ParseError(1, "need at least one winner");
    return std::to_string(ToInt(f[1]) / x);
  }
  return ComputeCards(function, script, slots, ParseCardsLine(input, "cards"));
}

std::string VerifyCore(const CoreSample& sample) {
  auto it = std::find_if(CoreFunctions().begin(), CoreFunctions().end(),
                         [&](const CoreFunction& f) { return f.id == sample.function; });
  if (it == CoreFunctions().end()) return "unknown function " + sample.function;
  if (Fill(it->instruction, sample.slots) != sample.instruction) return "instruction mismatch";
  try {
    std::string out = ComputeCore(sample.function, sample.script, sample.slots, sample.input);
    if (out != sample.output) return "output mismatch";
  } catch (const std::exception& e) {
    return std::string("error: ") + e.what();
  }
  return "";
}

std::string VerifyNsp(const NspSample& sample) {
  try {
    GameScript script = ParseRephrased(sample.script);
    GameState prev = ParseState(sample.prev_state, script);
    std::optional<PlayerInput> in;
    if (!sample.player_input.empty()) in = ParseInput(sample.player_input);
    GameState next = NextState(prev, script, in);
    if (SerializeState(next) != sample.next_state) return "next state mismatch";
    if (!sample.function.empty() &&
        TransitionFunction(prev, next, script) != sample.function) {
      return "function label mismatch";
    }
  } catch (const std::exception& e) {
    return std::string("error: ") + e.what();
  }
  return "";
}

std::string VerifyRecord(const json& record) {
  try {
    std::string kind = record.value("kind", "nsp");
    if (kind == "core") return VerifyCore(CoreSample::FromJson(record));
    if (kind == "nsp") return VerifyNsp(NspSample::FromJson(record));
    return "unknown record kind " + kind;
  } catch (const json::exception& e) {
    return std::string("bad record: ") + e.what();
  }
}

// ---- Curriculum ----------------------------------------------------------------

namespace {

// NSP samples from fresh rounds until exactly n are collected.
std::vector<NspSample> CollectSamples(const Scripts& scripts, std::uint64_t seed, int n,
                                      std::int64_t stack, int* next_round) {
  std::vector<NspSample> out;
  for (std::uint64_t i = 0; static_cast<int>(out.size()) < n; ++i) {
    const auto& [variant, script] = scripts[i % scripts.size()];
    RoundRecord r = SimulateRound(variant, script, DeriveSeed(seed, i), stack, true);
    for (auto& s : RoundSamples(r, (*next_round))) {
      if (static_cast<int>(out.size()) == n) break;
      out.push_back(std::move(s));
    }
    ++*next_round;
  }
  return out;
}

void RenderForms(std::vector<NspSample>& samples, std::uint64_t seed, double natural_share) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Rng rng(DeriveSeed(seed, i));
    if (rng.Uniform() < natural_share) {
      samples[i].script = NaturalScript(ParseScript(samples[i].script), rng.Next());
      samples[i].form = "natural";
    }
  }
}

}  // namespace

CurriculumFiles EmitCurriculum(const CurriculumConfig& config, const std::string& dir) {
  if (config.scripts.empty()) throw ValidationError("no scripts");
  CurriculumFiles files{dir + "/warmup.jsonl", dir + "/standard.jsonl", dir + "/diverse.jsonl"};

  std::vector<json> warmup;
  if (config.warmup > 0) {
    const int n = static_cast<int>(CoreFunctions().size());
    auto core = GenerateCoreSet(config.scripts, (config.warmup + n - 1) / n,
                                DeriveSeed(config.seed, 1));
    core.resize(config.warmup);
    for (auto& c : core) {
      c.stage = "warmup";
      warmup.push_back(c.ToJson());
    }
  }
  WriteJsonl(files.warmup, warmup);

  int round = 0;
  std::vector<json> standard;
  auto std_samples =
      CollectSamples(config.scripts, DeriveSeed(config.seed, 2), config.standard, config.stack,
                     &round);
  RenderForms(std_samples, DeriveSeed(config.seed, 3), config.natural_share);
  for (auto& s : std_samples) {
    s.stage = "standard";
    standard.push_back(s.ToJson());
  }
  WriteJsonl(files.standard, standard);

  std::vector<json> diverse;
  auto rephrased = CollectSamples(config.scripts, DeriveSeed(config.seed, 4),
                                  config.diverse_rephrased, config.stack, &round);
  for (std::size_t i = 0; i < rephrased.size(); ++i) {
    RephraseConfig rc;
    rc.seed = DeriveSeed(config.seed ^ 0x5EED, i);
    rephrased[i].script = RephraseScript(ParseScript(rephrased[i].script), rc);
    rephrased[i].form = "rephrased";
    rephrased[i].stage = "diverse";
    diverse.push_back(rephrased[i].ToJson());
  }
  auto more = CollectSamples(config.scripts, DeriveSeed(config.seed, 5),
                             config.diverse_standard, config.stack, &round);
  RenderForms(more, DeriveSeed(config.seed, 6), config.natural_share);
  for (auto& s : more) {
    s.stage = "diverse";
    diverse.push_back(s.ToJson());
  }
  WriteJsonl(files.diverse, diverse);
  return files;
}

// ---- Stats and files -----------------------------------------------------------

bool IsStructuredScript(const std::string& text) {
  try {
    ParseScript(text);
    return true;
  } catch (const Error&) {
    return false;
  }
}

json CorpusStats::ToJson() const {
  return json{{"samples", samples},
              {"rounds", rounds},
              {"core_samples", core_samples},
              {"natural_scripts", natural_scripts},
              {"structured_scripts", structured_scripts},
              {"variants", variants},
              {"functions", functions},
              {"categories", categories},
              {"mean_script_length", mean_script_length},
              {"mean_state_length", mean_state_length},
              {"mean_states_per_round", mean_states_per_round},
              {"mean_players", mean_players},
              {"mean_min_bet", mean_min_bet},
              {"mean_max_bet", mean_max_bet},
              {"vocabulary", vocabulary}};
}

CorpusStats ComputeStats(const std::vector<json>& records) {
  CorpusStats st;
  std::map<std::tuple<std::string, std::string, std::uint64_t, int>, std::size_t> rounds;
  std::map<std::tuple<std::string, std::string, std::uint64_t, int>, std::string> round_cat;
  std::map<std::string, json> script_info;
  std::set<std::string> vocab;
  double script_len = 0, state_len = 0, players = 0, min_bet = 0, max_bet = 0;
  std::size_t described = 0;
  auto add_tokens = [&](const std::string& text) {
    std::istringstream in(text);
    std::string token;
    while (in >> token) vocab.insert(token);
  };
  for (const auto& r : records) {
    if (r.value("kind", "nsp") == "core") {
      ++st.core_samples;
      continue;
    }
    NspSample s = NspSample::FromJson(r);
    ++st.samples;
    ++st.variants[s.variant];
    ++st.functions[s.function];
    script_len += static_cast<double>(s.script.size());
    state_len += static_cast<double>(s.next_state.size());
    bool structured = s.form == "structured";
    (structured ? st.structured_scripts : st.natural_scripts) += 1;
    auto key = std::make_tuple(s.stage, s.variant, s.seed, s.round);
    ++rounds[key];
    round_cat[key] = s.category;
    auto it = script_info.find(s.script);
    if (it == script_info.end()) it = script_info.emplace(s.script, ScriptStatsOf(s.script)).first;
    if (!it->second.is_null()) {
      ++described;
      players += it->second["players"].get<double>();
      min_bet += it->second["min"].get<double>();
      max_bet += it->second["max"].get<double>();
    }
    add_tokens(s.script);
    add_tokens(s.prev_state);
    add_tokens(s.player_input);
    add_tokens(s.next_state);
  }
  st.rounds = rounds.size();
  for (const auto& [key, cat] : round_cat) ++st.categories[cat];
  if (st.samples > 0) {
    const double n = static_cast<double>(st.samples);
    st.mean_script_length = script_len / n;
    st.mean_state_length = state_len / n;
    double states = 0;
    for (const auto& [key, count] : rounds) states += static_cast<double>(count + 1);
    st.mean_states_per_round = states / static_cast<double>(rounds.size());
  }
  if (described > 0) {
    st.mean_players = players / static_cast<double>(described);
    st.mean_min_bet = min_bet / static_cast<double>(described);
    st.mean_max_bet = max_bet / static_cast<double>(described);
  }
  st.vocabulary = vocab.size();
  return st;
}

std::vector<json> ReadJsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<json> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(n, std::string("bad JSON: ") + e.what());
    }
  }
  return out;
}

void WriteJsonl(const std::string& path, const std::vector<json>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  for (const auto& r : records) out << r.dump() << "\n";
}

}  // namespace scriptpoker
