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

#include "scriptpoker/statelang.h"

#include <algorithm>
#include <charconv>
#include <map>

#include "scriptpoker/errors.h"

namespace scriptpoker {
namespace {

constexpr std::string_view kAllIn = " (all-in)";
constexpr std::string_view kFold = " (fold)";

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

// Fields of "|a|b|c" -> {"a", "b", "c"}.
std::vector<std::string_view> Fields(std::string_view line) {
  std::vector<std::string_view> out;
  if (line.empty() || line.front() != '|') return out;
  line.remove_prefix(1);
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find('|', start);
    if (end == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

std::int64_t ParseAmount(std::string_view s, int line, std::string_view what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw ParseError(line, "bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

Card ParseCardField(std::string_view s, int line) {
  auto card = ParseCard(s);
  if (!card) throw ParseError(line, "bad card '" + std::string(s) + "'");
  return *card;
}

int ParseSeat(std::string_view s, int line, int num_players) {
  auto seat = ParsePlayerName(s);
  if (!seat || (num_players > 0 && *seat >= num_players)) {
    throw ParseError(line, "unknown player '" + std::string(s) + "'");
  }
  return *seat;
}

bool IsTraceLabel(std::string_view s) { return ParsePhaseLabel(s).has_value(); }

std::string OrderLine(const GameState& s) {
  std::string out = "|order";
  const bool annotate = !s.trace.empty();
  // Blinds are named once they are, or will be, posted.
  bool blinds = false;
  if (annotate) {
    for (const auto& label : s.trace) blinds = blinds || label == "blind";
  }
  for (int i = 0; i < s.num_players; ++i) {
    out += "|" + PlayerName(i);
    std::vector<std::string> notes;
    if (annotate && i == s.button) notes.push_back("button");
    if (blinds && i == SmallBlindSeat(s)) notes.push_back("small blind");
    if (blinds && i == BigBlindSeat(s)) notes.push_back("big blind");
    if (notes.empty()) continue;
    out += " (";
    for (std::size_t k = 0; k < notes.size(); ++k) out += (k ? ", " : "") + notes[k];
    out += ")";
  }
  return out;
}

std::string CardFields(std::span<const Card> cards) {
  std::string out;
  for (const Card& c : cards) out += "|" + c.ToString();
  return out;
}

bool ShowReached(const std::vector<std::string_view>& lines) {
  for (std::string_view line : lines) {
    if (LineKey(line) != "trace") continue;
    auto f = Fields(line);
    return std::find(f.begin(), f.end(), "show") != f.end();
  }
  return false;
}

}  // namespace

std::string FormatChipEntry(int seat, const PlayerChips& c) {
  std::string out = PlayerName(seat) + ": " + std::to_string(c.bet) + "/" +
                    std::to_string(c.stack);
  if (c.all_in) out += kAllIn;
  if (c.folded) out += kFold;
  return out;
}

PlayerChips ParseChipEntry(std::string_view entry, int line, int* seat) {
  PlayerChips c;
  if (entry.size() > kFold.size() && entry.substr(entry.size() - kFold.size()) == kFold) {
    c.folded = true;
    entry.remove_suffix(kFold.size());
  }
  if (entry.size() > kAllIn.size() && entry.substr(entry.size() - kAllIn.size()) == kAllIn) {
    c.all_in = true;
    entry.remove_suffix(kAllIn.size());
  }
  std::size_t colon = entry.find(": ");
  std::size_t slash = entry.find('/');
  if (colon == std::string_view::npos || slash == std::string_view::npos || slash < colon) {
    throw ParseError(line, "bad chip entry '" + std::string(entry) + "'");
  }
  *seat = ParseSeat(entry.substr(0, colon), line, 0);
  c.bet = ParseAmount(entry.substr(colon + 2, slash - colon - 2), line, "bet");
  c.stack = ParseAmount(entry.substr(slash + 1), line, "stack");
  return c;
}

std::string FormatMessage(const Message& m) {
  return "|message|" + m.from + "|" + m.to + "|" + m.text;
}

std::string SerializeState(const GameState& s) {
  std::vector<std::string> lines;
  lines.push_back(OrderLine(s));
  std::string chip = "|chip";
  for (int i = 0; i < s.num_players; ++i) chip += "|" + FormatChipEntry(i, s.chips[i]);
  lines.push_back(chip);
  lines.push_back("|stack" + CardFields(s.deck.cards()));
  std::string hole = "|hole";
  bool any = false;
  for (int i = 0; i < s.num_players; ++i) {
    if (s.hole[i].empty()) continue;
    any = true;
    hole += "|" + PlayerName(i) + CardFields(s.hole[i]);
  }
  if (any) lines.push_back(hole);
  if (!s.community.empty()) lines.push_back("|community" + CardFields(s.community));
  if (!s.trace.empty()) {
    std::string trace;
    for (const auto& label : s.trace) trace += "|" + label;
    lines.push_back(trace);
  }
  if (s.message) lines.push_back(FormatMessage(*s.message));
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out += "\n";
    out += lines[i];
  }
  return out;
}

GameState ParseState(std::string_view text, const GameScript& script) {
  auto lines = SplitLines(text);
  GameState s;
  // Expected order of keys; each appears at most once.
  static const std::vector<std::string> kOrder = {"order", "chip",  "stack",  "hole",
                                                  "community", "trace", "message"};
  std::size_t next_key = 0;
  bool have_order = false, have_chip = false, have_stack = false, annotated = false;
  int button = -1;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int ln = static_cast<int>(li) + 1;
    std::string key = LineKey(lines[li]);
    auto pos = std::find(kOrder.begin() + next_key, kOrder.end(), key);
    if (pos == kOrder.end()) {
      if (std::find(kOrder.begin(), kOrder.end(), key) != kOrder.end()) {
        throw ParseError(ln, "line '" + key + "' is out of order");
      }
      throw ParseError(ln, "unknown line '" + key + "'");
    }
    next_key = static_cast<std::size_t>(pos - kOrder.begin()) + 1;
    auto f = Fields(lines[li]);
    if (key == "order") {
      have_order = true;
      for (std::size_t k = 1; k < f.size(); ++k) {
        std::string_view entry = f[k];
        std::size_t paren = entry.find(" (");
        std::string_view name = entry.substr(0, paren);
        int seat = ParseSeat(name, ln, 0);
        if (seat != static_cast<int>(k) - 1) throw ParseError(ln, "players out of order");
        if (paren != std::string_view::npos) {
          annotated = true;
          if (entry.substr(paren).find("button") != std::string_view::npos) button = seat;
        }
      }
      s.num_players = static_cast<int>(f.size()) - 1;
      if (s.num_players < 1) throw ParseError(ln, "no players");
    } else if (key == "chip") {
      have_chip = true;
      s.chips.assign(s.num_players, PlayerChips{});
      std::vector<bool> seen(s.num_players, false);
      for (std::size_t k = 1; k < f.size(); ++k) {
        int seat = 0;
        PlayerChips c = ParseChipEntry(f[k], ln, &seat);
        if (seat >= s.num_players || seen[seat]) {
          throw ParseError(ln, "bad chip entry '" + std::string(f[k]) + "'");
        }
        seen[seat] = true;
        s.chips[seat] = c;
      }
      if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw ParseError(ln, "chip line must list every player");
      }
    } else if (key == "stack") {
      have_stack = true;
      std::vector<Card> cards;
      for (std::size_t k = 1; k < f.size(); ++k) cards.push_back(ParseCardField(f[k], ln));
      s.deck = Deck(std::move(cards));
    } else if (key == "hole") {
      s.hole.assign(s.num_players, {});
      int current = -1;
      for (std::size_t k = 1; k < f.size(); ++k) {
        if (!f[k].empty() && f[k][0] == 'p') {
          int seat = ParseSeat(f[k], ln, s.num_players);
          if (seat <= current) throw ParseError(ln, "hole entries out of order");
          current = seat;
          continue;
        }
        if (current < 0) throw ParseError(ln, "card before any player");
        s.hole[current].push_back(ParseCardField(f[k], ln));
      }
    } else if (key == "community") {
      for (std::size_t k = 1; k < f.size(); ++k) s.community.push_back(ParseCardField(f[k], ln));
    } else if (key == "trace") {
      for (std::string_view label : f) {
        if (!IsTraceLabel(label)) throw ParseError(ln, "bad phase '" + std::string(label) + "'");
        s.trace.emplace_back(label);
      }
    } else if (key == "message") {
      if (f.size() < 4) throw ParseError(ln, "message needs sender, receiver and text");
      std::string rest;
      for (std::size_t k = 3; k < f.size(); ++k) rest += (k > 3 ? "|" : "") + std::string(f[k]);
      s.message = Message{std::string(f[1]), std::string(f[2]), rest};
    }
  }
  if (!have_order) throw ParseError(0, "missing order line");
  if (!have_chip) throw ParseError(0, "missing chip line");
  if (!have_stack) throw ParseError(0, "missing stack line");
  if (s.hole.empty()) s.hole.assign(s.num_players, {});
  if (annotated && button < 0) throw ParseError(1, "no button marked");
  s.button = annotated ? button : s.num_players - 1;

  std::vector<Card> visible(s.deck.cards().begin(), s.deck.cards().end());
  for (const auto& h : s.hole) visible.insert(visible.end(), h.begin(), h.end());
  visible.insert(visible.end(), s.community.begin(), s.community.end());
  std::sort(visible.begin(), visible.end());
  if (std::adjacent_find(visible.begin(), visible.end()) != visible.end()) {
    throw ParseError(0, "a card appears twice");
  }
  const Deck full = BuildDeck(script);
  for (const Card& c : full.cards()) {
    if (!std::binary_search(visible.begin(), visible.end(), c)) s.discards.push_back(c);
  }
  if (visible.size() + s.discards.size() != full.size()) {
    throw ParseError(0, "cards outside the script's deck");
  }
  return s;
}

bool SameState(const GameState& a, const GameState& b) {
  GameState x = a, y = b;
  std::sort(x.discards.begin(), x.discards.end());
  std::sort(y.discards.begin(), y.discards.end());
  return x == y;
}

std::string FormatInput(const PlayerInput& input) {
  return FormatMessage(Message{PlayerName(input.seat), "engine", input.action.Text()});
}

PlayerInput ParseInput(std::string_view text) {
  auto lines = SplitLines(text);
  if (lines.size() != 1) throw ParseError(0, "player input is one message line");
  auto f = Fields(lines[0]);
  if (f.size() != 4 || f[0] != "message" || f[2] != "engine") {
    throw ParseError(1, "expected |message|<player>|engine|<action>");
  }
  PlayerInput input;
  input.seat = ParseSeat(f[1], 1, 0);
  auto action = ParseAction(f[3]);
  if (!action) throw ParseError(1, "unknown action '" + std::string(f[3]) + "'");
  input.action = *action;
  return input;
}

std::string LineKey(std::string_view line) {
  auto f = Fields(line);
  if (f.empty()) return "";
  if (IsTraceLabel(f[0])) return "trace";
  return std::string(f[0]);
}

std::vector<LineDiff> DiffStates(std::string_view expected, std::string_view actual) {
  std::vector<LineDiff> out;
  if (expected == actual) return out;
  auto e = SplitLines(expected);
  auto a = SplitLines(actual);
  const std::size_t n = std::max(e.size(), a.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::string_view el = i < e.size() ? e[i] : std::string_view();
    std::string_view al = i < a.size() ? a[i] : std::string_view();
    if (el == al) continue;
    std::string key = LineKey(el.empty() ? al : el);
    out.push_back(LineDiff{key, std::string(el), std::string(al)});
  }
  // Texts that differ only in blank lines or line endings.
  if (out.empty()) out.push_back(LineDiff{"text", std::string(expected), std::string(actual)});
  return out;
}

std::string Redact(std::string_view state_text, std::string_view viewer) {
  auto lines = SplitLines(state_text);
  int num_players = 0;
  for (std::string_view line : lines) {
    if (LineKey(line) == "order") num_players = static_cast<int>(Fields(line).size()) - 1;
  }
  int seat = -1;
  if (viewer != "all") {
    auto parsed = ParsePlayerName(viewer);
    if (!parsed || *parsed >= num_players) {
      throw UnknownPlayer("unknown player '" + std::string(viewer) + "'");
    }
    seat = *parsed;
  }
  const bool revealed = ShowReached(lines);
  std::string out;
  for (std::string_view line : lines) {
    std::string key = LineKey(line);
    if (key == "stack") continue;
    std::string kept(line);
    if (key == "hole" && !revealed) {
      auto f = Fields(line);
      kept = "|hole";
      bool mine = false;
      for (std::size_t k = 1; k < f.size(); ++k) {
        if (!f[k].empty() && f[k][0] == 'p') mine = ParsePlayerName(f[k]) == seat;
        if (mine) kept += "|" + std::string(f[k]);
      }
      if (kept == "|hole") continue;
    }
    if (!out.empty()) out += "\n";
    out += kept;
  }
  return out;
}

std::string RedactState(const GameState& state, std::string_view viewer) {
  return Redact(SerializeState(state), viewer);
}

}  // namespace scriptpoker
