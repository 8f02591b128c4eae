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

#include "scriptpoker/engine.h"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "scriptpoker/errors.h"
#include "scriptpoker/evaluator.h"

namespace scriptpoker {
namespace {

// Rounds never get near this many transitions; it only guards agents that
// keep a round alive forever.
constexpr int kMaxTransitions = 100000;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t HighBet(const GameState& s) {
  std::int64_t high = 0;
  for (const auto& c : s.chips) high = std::max(high, c.bet);
  return high;
}

bool Eligible(const GameState& s, int seat) {
  return !s.chips[seat].folded && !s.chips[seat].all_in;
}

int ActiveCount(const GameState& s) {
  int n = 0;
  for (const auto& c : s.chips) n += c.folded ? 0 : 1;
  return n;
}

int Lap(int seat, int start, int n) { return (seat - start + n) % n; }

bool FlowHasBlind(const GameScript& script) {
  return std::any_of(script.flow.begin(), script.flow.end(),
                     [](const PhaseSpec& p) { return p.kind == PhaseKind::kBlind; });
}

// The first betting phase after the blinds starts left of the big blind
// with the blinds counting as the opening bet.
bool IsPreflop(const GameScript& script, std::size_t phase) {
  bool blind = false;
  for (std::size_t i = 0; i < phase; ++i) {
    if (script.flow[i].kind == PhaseKind::kBet) return false;
    if (script.flow[i].kind == PhaseKind::kBlind) blind = true;
  }
  return blind;
}

int BetStartSeat(const GameState& s, const GameScript& script, std::size_t phase) {
  if (IsPreflop(script, phase)) return (BigBlindSeat(s) + 1) % s.num_players;
  return (s.button + 1) % s.num_players;
}

int SwitchStartSeat(const GameState& s) { return (s.button + 1) % s.num_players; }

const PhaseSpec* CurrentPhase(const GameState& s, const GameScript& script) {
  if (s.trace.size() >= script.flow.size()) return nullptr;
  return &script.flow[s.trace.size()];
}

// Seat that opens the current bet/switch phase, or nullopt when nobody has
// to act in it.
std::optional<int> FirstActor(const GameState& s, const GameScript& script) {
  if (RoundOver(s) || ActiveCount(s) <= 1) return std::nullopt;
  const PhaseSpec* phase = CurrentPhase(s, script);
  if (phase == nullptr) return std::nullopt;
  const int n = s.num_players;
  if (phase->kind == PhaseKind::kSwitch) {
    int start = SwitchStartSeat(s);
    for (int k = 0; k < n; ++k) {
      int seat = (start + k) % n;
      if (!s.chips[seat].folded) return seat;
    }
    return std::nullopt;
  }
  if (phase->kind != PhaseKind::kBet) return std::nullopt;
  const std::int64_t high = HighBet(s);
  std::vector<int> eligible;
  for (int i = 0; i < n; ++i) {
    if (Eligible(s, i)) eligible.push_back(i);
  }
  if (eligible.empty()) return std::nullopt;
  if (eligible.size() == 1 && s.chips[eligible[0]].bet == high) return std::nullopt;
  int start = BetStartSeat(s, script, s.trace.size());
  for (int k = 0; k < n; ++k) {
    int seat = (start + k) % n;
    if (Eligible(s, seat)) return seat;
  }
  return std::nullopt;
}

void Prompt(GameState& s, int seat, std::string_view text) {
  s.message = Message{"engine", PlayerName(seat), std::string(text)};
}

// Leaves any announcement in place unless the next phase needs a player.
void PromptNextPhase(GameState& s, const GameScript& script) {
  auto actor = FirstActor(s, script);
  if (!actor) return;
  const PhaseSpec* phase = CurrentPhase(s, script);
  Prompt(s, *actor, phase->kind == PhaseKind::kSwitch ? kSwitchPrompt : kBetPrompt);
}

std::string JoinSeats(const std::vector<int>& seats) {
  std::string out;
  for (std::size_t i = 0; i < seats.size(); ++i) {
    if (i > 0) out += ", ";
    out += PlayerName(seats[i]);
  }
  return out;
}

std::string ShowText(const Showdown& sd) {
  switch (sd.kind) {
    case Showdown::Kind::kHighLow:
      return "High winners: " + JoinSeats(sd.first) + ". Low winners: " +
             JoinSeats(sd.second) + ".";
    case Showdown::Kind::kLowBadugi:
      return "Low winners: " + JoinSeats(sd.first) + ". Badugi winners: " +
             JoinSeats(sd.second) + ".";
    default:
      return "Winners: " + JoinSeats(sd.first) + ".";
  }
}

Showdown ComputeShowdown(const GameState& s, const GameScript& script) {
  std::vector<bool> active;
  for (const auto& c : s.chips) active.push_back(!c.folded);
  return Evaluator(script).Winners(s.hole, active, s.community);
}

// Equal shares; the indivisible remainder goes to the winner seated
// earliest after the button.
void SharePortion(const GameState& s, std::int64_t portion, std::vector<int> winners,
                  std::vector<std::int64_t>& payout) {
  if (winners.empty()) return;
  const std::int64_t w = static_cast<std::int64_t>(winners.size());
  for (int seat : winners) payout[seat] += portion / w;
  const int n = s.num_players;
  std::sort(winners.begin(), winners.end(), [&](int a, int b) {
    return Lap(a, (s.button + 1) % n, n) < Lap(b, (s.button + 1) % n, n);
  });
  payout[winners.front()] += portion % w;
}

void DoPrize(GameState& s, const GameScript& script) {
  Showdown sd = ComputeShowdown(s, script);
  const std::int64_t pot = s.Pot();
  std::vector<std::int64_t> payout(s.num_players, 0);
  std::vector<bool> winner(s.num_players, false);
  if (sd.split()) {
    SharePortion(s, pot - pot / 2, sd.first, payout);
    SharePortion(s, pot / 2, sd.second, payout);
  } else {
    SharePortion(s, pot, sd.first, payout);
  }
  for (int seat : sd.first) winner[seat] = true;
  for (int seat : sd.second) winner[seat] = true;
  std::string text = "Prize: ";
  bool first = true;
  for (int i = 0; i < s.num_players; ++i) {
    s.chips[i].stack += payout[i];
    s.chips[i].bet = 0;
    s.chips[i].all_in = false;
    if (!winner[i]) continue;
    if (!first) text += ", ";
    first = false;
    text += PlayerName(i) + " +" + std::to_string(payout[i]);
  }
  s.message = Message{"engine", "all", text + "."};
  s.trace.push_back("prize");
}

void DoBlind(GameState& s, const GameScript& script) {
  auto post = [&](int seat, std::int64_t amount) {
    PlayerChips& c = s.chips[seat];
    amount = std::min(amount, c.stack);
    c.stack -= amount;
    c.bet += amount;
    if (c.stack == 0) c.all_in = true;
  };
  post(SmallBlindSeat(s), script.min_bet / 2);
  post(BigBlindSeat(s), script.min_bet);
}

void DoDeal(GameState& s, int count) {
  const int n = s.num_players;
  std::vector<int> order;
  int start = SmallBlindSeat(s);
  for (int k = 0; k < n; ++k) {
    int seat = (start + k) % n;
    if (!s.chips[seat].folded) order.push_back(seat);
  }
  const std::size_t need = static_cast<std::size_t>(count) * order.size();
  if (need > s.deck.size()) throw DeckExhausted(need, s.deck.size());
  for (int r = 0; r < count; ++r) {
    for (int seat : order) s.hole[seat].push_back(s.deck.Draw(1).front());
  }
}

void DoFlop(GameState& s, int count) {
  const std::size_t need = static_cast<std::size_t>(count) + 1;
  if (need > s.deck.size()) throw DeckExhausted(need, s.deck.size());
  s.discards.push_back(s.deck.Draw(1).front());
  for (const Card& c : s.deck.Draw(count)) s.community.push_back(c);
}

void ApplyBet(GameState& s, const GameScript& script, int x, const PlayerAction& a) {
  const int n = s.num_players;
  const std::int64_t high_before = HighBet(s);
  const std::size_t phase = s.trace.size();
  const bool preflop = IsPreflop(script, phase);
  bool unmatched_before = false;
  for (int i = 0; i < n; ++i) {
    if (Eligible(s, i) && s.chips[i].bet < high_before) unmatched_before = true;
  }

  PlayerChips& c = s.chips[x];
  switch (a.kind) {
    case ActionKind::kCheck:
      break;
    case ActionKind::kCall: {
      std::int64_t pay = std::min(high_before - c.bet, c.stack);
      c.bet += pay;
      c.stack -= pay;
      break;
    }
    case ActionKind::kRaiseTo:
      c.stack -= a.amount - c.bet;
      c.bet = a.amount;
      break;
    case ActionKind::kAllIn:
      c.bet += c.stack;
      c.stack = 0;
      break;
    case ActionKind::kFold:
      c.folded = true;
      for (const Card& card : s.hole[x]) s.discards.push_back(card);
      s.hole[x].clear();
      break;
    case ActionKind::kSwitch:
      throw IllegalAction("cannot switch during a betting phase");
  }
  if (!c.folded && c.stack == 0 && a.kind != ActionKind::kCheck) c.all_in = true;

  s.message.reset();
  if (ActiveCount(s) == 1) {
    s.trace.push_back("bet");
    return;
  }
  const std::int64_t high = HighBet(s);
  const bool raised =
      (preflop ? high_before > script.min_bet : unmatched_before) || high > high_before;
  const int start = BetStartSeat(s, script, phase);
  auto acted = [&](int y) { return raised || y == x || Lap(y, start, n) < Lap(x, start, n); };
  auto settled = [&](int y) { return s.chips[y].bet == high && acted(y); };
  for (int k = 1; k <= n; ++k) {
    int y = (x + k) % n;
    if (Eligible(s, y) && !settled(y)) {
      Prompt(s, y, kBetPrompt);
      return;
    }
  }
  s.trace.push_back("bet");
  PromptNextPhase(s, script);
}

void ApplySwitch(GameState& s, const GameScript& script, int x, const PlayerAction& a) {
  std::vector<Card>& hand = s.hole[x];
  if (a.cards.size() > s.deck.size()) throw DeckExhausted(a.cards.size(), s.deck.size());
  for (const Card& card : a.cards) {
    auto it = std::find(hand.begin(), hand.end(), card);
    s.discards.push_back(card);
    *it = s.deck.Draw(1).front();
  }
  s.message.reset();
  const int n = s.num_players;
  const int start = SwitchStartSeat(s);
  for (int k = 1; k < n; ++k) {
    int y = (x + k) % n;
    if (Lap(y, start, n) <= Lap(x, start, n)) break;
    if (!s.chips[y].folded) {
      Prompt(s, y, kSwitchPrompt);
      return;
    }
  }
  s.trace.push_back("switch");
  PromptNextPhase(s, script);
}

}  // namespace

std::int64_t GameState::Pot() const {
  std::int64_t pot = 0;
  for (const auto& c : chips) pot += c.bet;
  return pot;
}

std::string PlayerAction::Text() const {
  switch (kind) {
    case ActionKind::kCheck: return "Check.";
    case ActionKind::kCall: return "Call.";
    case ActionKind::kRaiseTo: return "Raise to " + std::to_string(amount) + ".";
    case ActionKind::kFold: return "Fold.";
    case ActionKind::kAllIn: return "All-in.";
    case ActionKind::kSwitch:
      return cards.empty() ? "Switch 0." : "Switch " + JoinCards(cards) + ".";
  }
  return "";
}

std::optional<PlayerAction> ParseAction(std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.back() == '.') text.remove_suffix(1);
  std::string lower = Lower(text);
  if (lower == "check") return PlayerAction{ActionKind::kCheck};
  if (lower == "call") return PlayerAction{ActionKind::kCall};
  if (lower == "fold") return PlayerAction{ActionKind::kFold};
  if (lower == "all-in" || lower == "all in" || lower == "allin") {
    return PlayerAction{ActionKind::kAllIn};
  }
  if (lower.rfind("raise to ", 0) == 0) {
    std::string_view digits = Trim(text.substr(9));
    std::int64_t amount = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), amount);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
      return std::nullopt;
    }
    return PlayerAction{ActionKind::kRaiseTo, amount};
  }
  if (lower.rfind("switch", 0) == 0) {
    std::string_view rest = Trim(text.substr(6));
    PlayerAction a{ActionKind::kSwitch};
    if (rest == "0" || rest.empty()) return a;
    std::size_t start = 0;
    while (start < rest.size()) {
      std::size_t end = rest.find_first_of(" ,", start);
      if (end == std::string_view::npos) end = rest.size();
      if (end > start) {
        auto card = ParseCard(rest.substr(start, end - start));
        if (!card) return std::nullopt;
        a.cards.push_back(*card);
      }
      start = end + 1;
    }
    return a;
  }
  return std::nullopt;
}

std::string PlayerName(int seat) { return "p" + std::to_string(seat + 1); }

std::optional<int> ParsePlayerName(std::string_view name) {
  if (name.size() < 2 || name[0] != 'p' || name[1] == '0') return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), v);
  if (ec != std::errc() || ptr != name.data() + name.size() || v < 1) return std::nullopt;
  return v - 1;
}

int SmallBlindSeat(const GameState& s) {
  return s.num_players == 2 ? s.button : (s.button + 1) % s.num_players;
}

int BigBlindSeat(const GameState& s) { return (SmallBlindSeat(s) + 1) % s.num_players; }

std::optional<int> PromptedSeat(const GameState& s) {
  if (!s.message || s.message->from != "engine") return std::nullopt;
  if (s.message->text != kBetPrompt && s.message->text != kSwitchPrompt) return std::nullopt;
  auto seat = ParsePlayerName(s.message->to);
  if (!seat || *seat >= s.num_players) return std::nullopt;
  return seat;
}

bool RoundOver(const GameState& s) { return !s.trace.empty() && s.trace.back() == "prize"; }

bool LegalActions::Contains(const PlayerAction& a) const {
  if (empty()) return false;
  if (phase == PhaseKind::kSwitch) {
    if (a.kind != ActionKind::kSwitch) return false;
    if (static_cast<int>(a.cards.size()) > max_switch) return false;
    for (std::size_t i = 0; i < a.cards.size(); ++i) {
      if (std::find(switchable.begin(), switchable.end(), a.cards[i]) == switchable.end()) {
        return false;
      }
      if (std::find(a.cards.begin(), a.cards.begin() + i, a.cards[i]) != a.cards.begin() + i) {
        return false;
      }
    }
    return true;
  }
  switch (a.kind) {
    case ActionKind::kCheck: return check;
    case ActionKind::kCall: return call;
    case ActionKind::kFold: return fold;
    case ActionKind::kAllIn: return all_in;
    case ActionKind::kRaiseTo:
      return raise_min && a.amount >= *raise_min && a.amount <= *raise_max;
    case ActionKind::kSwitch: return false;
  }
  return false;
}

std::vector<PlayerAction> LegalActions::Enumerate() const {
  std::vector<PlayerAction> out;
  if (empty()) return out;
  if (phase == PhaseKind::kSwitch) {
    const int m = static_cast<int>(switchable.size());
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      if (__builtin_popcount(mask) > max_switch) continue;
      PlayerAction a{ActionKind::kSwitch};
      for (int i = 0; i < m; ++i) {
        if ((mask >> i) & 1) a.cards.push_back(switchable[i]);
      }
      out.push_back(a);
    }
    return out;
  }
  if (check) out.push_back({ActionKind::kCheck});
  if (call) out.push_back({ActionKind::kCall});
  if (fold) out.push_back({ActionKind::kFold});
  if (raise_min) {
    out.push_back({ActionKind::kRaiseTo, *raise_min});
    if (*raise_max != *raise_min) out.push_back({ActionKind::kRaiseTo, *raise_max});
  }
  if (all_in) out.push_back({ActionKind::kAllIn});
  return out;
}

LegalActions GetLegalActions(const GameState& s, const GameScript& script) {
  LegalActions legal;
  auto seat = PromptedSeat(s);
  if (!seat) return legal;
  legal.seat = *seat;
  const PlayerChips& c = s.chips[*seat];
  if (s.message->text == kSwitchPrompt) {
    legal.phase = PhaseKind::kSwitch;
    legal.switchable = s.hole[*seat];
    legal.max_switch = static_cast<int>(std::min(s.hole[*seat].size(), s.deck.size()));
    return legal;
  }
  legal.phase = PhaseKind::kBet;
  const std::int64_t high = HighBet(s);
  legal.check = c.bet == high;
  legal.call = c.bet < high;
  legal.fold = c.bet < high;
  const std::int64_t lo = high + script.min_bet;
  const std::int64_t hi = std::min(script.max_bet, c.bet + c.stack);
  if (lo <= hi) {
    legal.raise_min = lo;
    legal.raise_max = hi;
  }
  legal.all_in = script.Has(RuleKind::kAllInAllowed) && c.stack > 0;
  return legal;
}

GameState SetupState(const GameScript& script, std::uint64_t seed,
                     const std::vector<std::int64_t>& stacks) {
  ValidateScript(script);
  if (static_cast<int>(stacks.size()) != script.num_players) {
    throw ValidationError("need one stack per player");
  }
  for (std::int64_t stack : stacks) {
    if (stack < script.min_bet) throw ValidationError("stacks must cover the min bet");
  }
  GameState s;
  s.num_players = script.num_players;
  s.button = script.num_players - 1;
  for (std::int64_t stack : stacks) s.chips.push_back(PlayerChips{0, stack, false, false});
  Rng rng(seed);
  s.deck = Shuffled(BuildDeck(script), rng);
  s.hole.assign(script.num_players, {});
  return s;
}

GameState SetupState(const GameScript& script, std::uint64_t seed, std::int64_t stack) {
  return SetupState(script, seed, std::vector<std::int64_t>(script.num_players, stack));
}

GameState InitRound(const GameScript& script, std::uint64_t seed,
                    const std::vector<std::int64_t>& stacks) {
  return NextState(SetupState(script, seed, stacks), script);
}

GameState InitRound(const GameScript& script, std::uint64_t seed, std::int64_t stack) {
  return NextState(SetupState(script, seed, stack), script);
}

GameState NextState(const GameState& state, const GameScript& script,
                    const std::optional<PlayerInput>& input) {
  if (RoundOver(state)) throw IllegalAction("the round is over");
  GameState s = state;
  auto prompted = PromptedSeat(state);
  if (prompted) {
    if (!input) throw IllegalAction(PlayerName(*prompted) + " must act first");
    if (input->seat != *prompted) {
      throw IllegalAction("it is " + PlayerName(*prompted) + "'s turn, not " +
                          PlayerName(input->seat) + "'s");
    }
    LegalActions legal = GetLegalActions(state, script);
    if (!legal.Contains(input->action)) {
      throw IllegalAction(input->action.Text() + " is not allowed for " +
                          PlayerName(input->seat) + " now");
    }
    if (legal.phase == PhaseKind::kSwitch) {
      ApplySwitch(s, script, *prompted, input->action);
    } else {
      ApplyBet(s, script, *prompted, input->action);
    }
    return s;
  }
  if (input) throw IllegalAction("no player is waiting to act");

  s.message.reset();
  if (s.trace.empty()) {
    s.trace.push_back("start");
    PromptNextPhase(s, script);
    return s;
  }
  if (ActiveCount(s) == 1) {
    DoPrize(s, script);
    return s;
  }
  const PhaseSpec* phase = CurrentPhase(s, script);
  if (phase == nullptr) throw IllegalAction("the flow is exhausted");
  switch (phase->kind) {
    case PhaseKind::kStart:
    case PhaseKind::kShuffle:
      break;
    case PhaseKind::kBlind:
      DoBlind(s, script);
      break;
    case PhaseKind::kDeal:
      DoDeal(s, phase->count);
      break;
    case PhaseKind::kFlop:
      DoFlop(s, phase->count);
      break;
    case PhaseKind::kBet:
    case PhaseKind::kSwitch:
      // Reached only when nobody has to act in this phase.
      break;
    case PhaseKind::kShow:
      s.message = Message{"engine", "all", ShowText(ComputeShowdown(s, script))};
      break;
    case PhaseKind::kPrize:
      DoPrize(s, script);
      return s;
  }
  s.trace.push_back(phase->Label());
  PromptNextPhase(s, script);
  return s;
}

PlayerAction RandomAgent::Act(const GameState&, const GameScript&, const LegalActions& legal) {
  if (legal.phase == PhaseKind::kSwitch) {
    PlayerAction a{ActionKind::kSwitch};
    for (const Card& c : legal.switchable) {
      if (static_cast<int>(a.cards.size()) < legal.max_switch && rng_.Bounded(2) == 1) {
        a.cards.push_back(c);
      }
    }
    return a;
  }
  std::vector<PlayerAction> options = legal.Enumerate();
  PlayerAction a = options[rng_.Bounded(options.size())];
  if (a.kind == ActionKind::kRaiseTo) {
    a.amount = *legal.raise_min +
               static_cast<std::int64_t>(rng_.Bounded(*legal.raise_max - *legal.raise_min + 1));
  }
  return a;
}

RoundLog RunRound(const GameScript& script, std::uint64_t seed,
                  const std::vector<std::int64_t>& stacks, const std::vector<Agent*>& agents) {
  if (agents.empty()) throw ValidationError("no agents");
  RoundLog log;
  log.states.push_back(SetupState(script, seed, stacks));
  while (!RoundOver(log.states.back())) {
    if (static_cast<int>(log.states.size()) > kMaxTransitions) {
      throw Error("round did not finish");
    }
    const GameState& s = log.states.back();
    std::optional<PlayerInput> input;
    LegalActions legal = GetLegalActions(s, script);
    if (!legal.empty()) {
      Agent* agent = agents.size() == 1 ? agents[0] : agents.at(legal.seat);
      input = PlayerInput{legal.seat, agent->Act(s, script, legal)};
    }
    GameState next = NextState(s, script, input);
    log.inputs.push_back(input);
    log.states.push_back(std::move(next));
  }
  return log;
}

RoundLog RunRandomRound(const GameScript& script, std::uint64_t seed, std::int64_t stack,
                        std::uint64_t agent_seed) {
  RandomAgent agent(agent_seed);
  return RunRound(script, seed, std::vector<std::int64_t>(script.num_players, stack),
                  {&agent});
}

}  // namespace scriptpoker
