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

#include "scriptpoker/evalharness.h"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <set>
#include <sstream>

#include "scriptpoker/errors.h"

namespace scriptpoker {
namespace {

using nlohmann::json;

std::string Normalize(std::string text) {
  text.erase(std::remove(text.begin(), text.end(), '\r'), text.end());
  while (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) out += (i ? "\n" : "") + lines[i];
  return out;
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 1;
  while (true) {
    std::size_t end = line.find('|', start);
    out.push_back(line.substr(start, end == std::string::npos ? end : end - start));
    if (end == std::string::npos) return out;
    start = end + 1;
  }
}

std::string JoinFields(const std::vector<std::string>& fields) {
  std::string out;
  for (const auto& f : fields) out += "|" + f;
  return out;
}

bool IsCardToken(const std::string& f) {
  return f.size() >= 2 && std::isupper(static_cast<unsigned char>(f[0])) &&
         std::all_of(f.begin() + 1, f.end(), [](char c) { return std::isdigit(c); });
}

// Indices of (line, field) pairs holding cards on hole and community lines.
std::vector<std::pair<std::size_t, std::size_t>> VisibleCards(
    const std::vector<std::vector<std::string>>& lines) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || (lines[i][0] != "hole" && lines[i][0] != "community")) continue;
    for (std::size_t j = 1; j < lines[i].size(); ++j) {
      if (IsCardToken(lines[i][j])) out.emplace_back(i, j);
    }
  }
  return out;
}

const std::set<std::string>& TargetFunctions(MutationKind kind) {
  static const std::set<std::string> cards = {"deal", "flop", "switch"};
  static const std::set<std::string> chips = {"blind", "bet", "prize"};
  static const std::set<std::string> messages = {"bet"};
  switch (kind) {
    case MutationKind::kCardHallucination:
    case MutationKind::kCardOmission:
      return cards;
    case MutationKind::kChipOffByOne:
      return chips;
    case MutationKind::kMessageMisaddress:
      return messages;
  }
  return chips;
}

std::string FormatDouble(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << v;
  return out.str();
}

json CellJson(const Cell& c) {
  json j{{"correct", c.correct}, {"total", c.total}};
  j["accuracy"] = c.total ? json(c.Accuracy()) : json();
  return j;
}

void Add(Cell& cell, bool ok) {
  ++cell.total;
  if (ok) ++cell.correct;
}

}  // namespace

json Transcript::ToJson() const {
  json steps_json = json::array();
  for (const auto& s : steps) {
    steps_json.push_back(
        {{"prev_state", s.prev_state}, {"player_input", s.player_input}, {"predicted", s.predicted}});
  }
  return json{{"id", id}, {"variant", variant}, {"script", script}, {"steps", steps_json}};
}

Transcript Transcript::FromJson(const json& j) {
  Transcript t;
  t.id = j.value("id", "");
  t.variant = j.value("variant", "");
  t.script = j.at("script").get<std::string>();
  for (const auto& s : j.at("steps")) {
    t.steps.push_back({s.at("prev_state").get<std::string>(), s.value("player_input", ""),
                       s.at("predicted").get<std::string>()});
  }
  return t;
}

namespace {

std::string RoundId(const json& r) {
  return r.value("stage", "") + "/" + r.value("variant", "") + "/" +
         std::to_string(r.value("seed", std::uint64_t{0})) + "/" +
         std::to_string(r.value("round", 0));
}

}  // namespace

std::string RecordKey(const json& record) {
  return RoundId(record) + "#" + std::to_string(record.value("step", 0));
}

std::vector<Transcript> TranscriptsFromRecords(const std::vector<json>& records) {
  std::vector<Transcript> out;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::vector<std::pair<int, TranscriptStep>>> steps;
  for (const auto& r : records) {
    if (r.value("kind", "nsp") != "nsp") continue;
    const std::string id = RoundId(r);
    if (!index.count(id)) {
      index[id] = out.size();
      out.push_back({id, r.value("variant", ""), r.at("script").get<std::string>(), {}});
    }
    std::string predicted = r.contains("predicted_state")
                                ? r["predicted_state"].get<std::string>()
                                : r.at("next_state").get<std::string>();
    steps[id].emplace_back(r.value("step", 0),
                           TranscriptStep{r.at("prev_state").get<std::string>(),
                                          r.value("player_input", ""), predicted});
  }
  for (auto& t : out) {
    auto& s = steps[t.id];
    std::stable_sort(s.begin(), s.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [step, st] : s) t.steps.push_back(std::move(st));
  }
  return out;
}

std::vector<Transcript> JoinPredictions(const std::vector<json>& gold,
                                        const std::vector<json>& predictions) {
  std::map<std::string, std::string> predicted;
  for (const auto& p : predictions) {
    std::string text;
    if (p.contains("predicted_state")) {
      text = p["predicted_state"].get<std::string>();
    } else if (p.contains("next_state")) {
      text = p["next_state"].get<std::string>();
    } else {
      continue;
    }
    predicted[RecordKey(p)] = text;
  }
  std::vector<json> joined;
  for (const auto& g : gold) {
    if (g.value("kind", "nsp") != "nsp") continue;
    json r = g;
    auto it = predicted.find(RecordKey(g));
    r["predicted_state"] = it == predicted.end() ? "" : it->second;
    joined.push_back(std::move(r));
  }
  return TranscriptsFromRecords(joined);
}

std::string AttributeFunction(const GameState& prev, const GameState& next,
                              const GameScript& script) {
  return TransitionFunction(prev, next, script);
}

const std::vector<std::string>& ReportFunctions() {
  static const std::vector<std::string> fns = {"start", "blind", "deal", "flop",
                                               "switch", "bet", "show", "prize"};
  return fns;
}

double Cell::Accuracy() const {
  return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

double EvalReport::MacroAverage() const {
  double sum = 0;
  int n = 0;
  for (const auto& [fn, c] : functions) {
    if (c.total == 0) continue;
    sum += c.Accuracy();
    ++n;
  }
  return n ? sum / n : 0.0;
}

void EvalReport::Merge(const EvalReport& other) {
  for (const auto& [fn, c] : other.functions) {
    functions[fn].correct += c.correct;
    functions[fn].total += c.total;
  }
  for (const auto& [v, c] : other.variants) {
    variants[v].correct += c.correct;
    variants[v].total += c.total;
  }
  rounds.correct += other.rounds.correct;
  rounds.total += other.rounds.total;
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

json EvalReport::ToJson() const {
  json fns = json::object();
  for (const auto& fn : ReportFunctions()) {
    auto it = functions.find(fn);
    fns[fn] = CellJson(it == functions.end() ? Cell{} : it->second);
  }
  for (const auto& [fn, c] : functions) {
    if (!fns.contains(fn)) fns[fn] = CellJson(c);
  }
  json vars = json::object();
  for (const auto& [v, c] : variants) vars[v] = CellJson(c);
  auto sorted = failures;
  std::sort(sorted.begin(), sorted.end(), [](const StateFailure& a, const StateFailure& b) {
    return std::tie(a.transcript, a.step) < std::tie(b.transcript, b.step);
  });
  json fails = json::array();
  for (const auto& f : sorted) {
    fails.push_back({{"transcript", f.transcript}, {"step", f.step}, {"function", f.function}});
  }
  return json{{"functions", fns},
              {"macro_average", MacroAverage()},
              {"rounds", CellJson(rounds)},
              {"variants", vars},
              {"failures", fails}};
}

std::string EvalReport::ToTable() const {
  std::ostringstream out;
  auto row = [&](const std::string& name, const Cell& c) {
    out << std::left << std::setw(34) << name << std::right << std::setw(8) << c.correct << " / "
        << std::left << std::setw(8) << c.total
        << (c.total ? FormatDouble(100.0 * c.Accuracy()) + "%" : "-") << "\n";
  };
  out << "function                           correct / total    accuracy\n";
  std::set<std::string> shown;
  for (const auto& fn : ReportFunctions()) {
    auto it = functions.find(fn);
    row(fn, it == functions.end() ? Cell{} : it->second);
    shown.insert(fn);
  }
  for (const auto& [fn, c] : functions) {
    if (!shown.count(fn)) row(fn, c);
  }
  out << "macro average                      " << FormatDouble(100.0 * MacroAverage()) << "%\n";
  row("rounds", rounds);
  for (const auto& [v, c] : variants) row("rounds " + v, c);
  return out.str();
}

std::string EvalReport::DiffDump() const {
  auto sorted = failures;
  std::sort(sorted.begin(), sorted.end(), [](const StateFailure& a, const StateFailure& b) {
    return std::tie(a.transcript, a.step) < std::tie(b.transcript, b.step);
  });
  std::ostringstream out;
  for (const auto& f : sorted) {
    out << "== " << f.transcript << " step " << f.step << " (" << f.function << ")\n";
    for (const auto& d : DiffStates(f.expected, f.predicted)) {
      out << "  [" << d.key << "]\n";
      out << "  - " << (d.expected.empty() ? "(missing)" : d.expected) << "\n";
      out << "  + " << (d.actual.empty() ? "(missing)" : d.actual) << "\n";
    }
  }
  return out.str();
}

EvalReport Score(const std::vector<Transcript>& transcripts, ScoreMode mode) {
  EvalReport report;
  for (const Transcript& t : transcripts) {
    GameScript script = ParseRephrased(t.script);
    bool all = !t.steps.empty();
    std::optional<GameState> oracle;
    if (mode == ScoreMode::kFreeRunning && !t.steps.empty()) {
      oracle = ParseState(t.steps[0].prev_state, script);
    }
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      const TranscriptStep& step = t.steps[i];
      std::optional<PlayerInput> input;
      if (!step.player_input.empty()) input = ParseInput(step.player_input);
      std::string expected, function;
      if (mode == ScoreMode::kTeacherForced) {
        GameState prev = ParseState(step.prev_state, script);
        GameState next = NextState(prev, script, input);
        expected = SerializeState(next);
        function = AttributeFunction(prev, next, script);
      } else if (oracle) {
        // The replay can fail once the model has steered into a state where
        // the recorded input is illegal; the rest of the round is then wrong.
        try {
          GameState next = NextState(*oracle, script, input);
          expected = SerializeState(next);
          function = AttributeFunction(*oracle, next, script);
          oracle = std::move(next);
        } catch (const Error&) {
          function = AttributeFunction(*oracle, *oracle, script);
          oracle.reset();
        }
      } else {
        function = input ? "bet" : "prize";
      }
      bool ok = !expected.empty() && Normalize(step.predicted) == expected;
      Add(report.functions[function], ok);
      if (!ok) {
        all = false;
        report.failures.push_back(
            {t.id, static_cast<int>(i), function, expected, Normalize(step.predicted)});
      }
    }
    Add(report.rounds, all);
    Add(report.variants[t.variant], all);
  }
  return report;
}

std::string MutationName(MutationKind kind) {
  switch (kind) {
    case MutationKind::kCardHallucination:
      return "card-hallucination";
    case MutationKind::kCardOmission:
      return "card-omission";
    case MutationKind::kChipOffByOne:
      return "chip-off-by-one";
    case MutationKind::kMessageMisaddress:
      return "message-misaddress";
  }
  return "";
}

MutationKind ParseMutationKind(const std::string& name) {
  for (MutationKind k : AllMutationKinds()) {
    if (MutationName(k) == name) return k;
  }
  throw ValidationError("unknown mutation kind: " + name);
}

const std::vector<MutationKind>& AllMutationKinds() {
  static const std::vector<MutationKind> kinds = {
      MutationKind::kCardHallucination, MutationKind::kCardOmission,
      MutationKind::kChipOffByOne, MutationKind::kMessageMisaddress};
  return kinds;
}

json Defect::ToJson() const {
  return json{{"transcript", transcript}, {"step", step}, {"kind", MutationName(kind)},
              {"function", function}};
}

bool MutateState(std::string* text, MutationKind kind, Rng& rng) {
  std::vector<std::vector<std::string>> lines;
  for (const auto& line : SplitLines(*text)) lines.push_back(SplitFields(line));
  auto find = [&](const std::string& key) -> std::vector<std::string>* {
    for (auto& l : lines) {
      if (!l.empty() && l[0] == key) return &l;
    }
    return nullptr;
  };
  switch (kind) {
    case MutationKind::kCardHallucination: {
      auto cards = VisibleCards(lines);
      if (cards.empty()) return false;
      auto [li, fi] = cards[rng.Bounded(cards.size())];
      std::string& card = lines[li][fi];
      auto* stack = find("stack");
      if (stack && stack->size() > 1) {
        card = (*stack)[1 + rng.Bounded(stack->size() - 1)];
      } else {
        card = card.substr(0, 1) + std::to_string(std::stoi(card.substr(1)) % 13 + 1);
      }
      break;
    }
    case MutationKind::kCardOmission: {
      auto cards = VisibleCards(lines);
      if (cards.empty()) return false;
      auto [li, fi] = cards[rng.Bounded(cards.size())];
      lines[li].erase(lines[li].begin() + static_cast<std::ptrdiff_t>(fi));
      break;
    }
    case MutationKind::kChipOffByOne: {
      auto* chip = find("chip");
      if (!chip || chip->size() < 2) return false;
      std::size_t i = 1 + rng.Bounded(chip->size() - 1);
      int seat = 0;
      PlayerChips c = ParseChipEntry((*chip)[i], 0, &seat);
      std::int64_t delta = rng.Bounded(2) ? 1 : -1;
      if (c.stack + delta < 0) delta = 1;
      c.stack += delta;
      (*chip)[i] = FormatChipEntry(seat, c);
      break;
    }
    case MutationKind::kMessageMisaddress: {
      auto* msg = find("message");
      if (!msg || msg->size() < 4) return false;
      auto* order = find("order");
      int players = order ? static_cast<int>(order->size()) - 1 : 2;
      if (players < 2) return false;
      std::string& to = (*msg)[2];
      std::string other;
      do {
        other = PlayerName(static_cast<int>(rng.Bounded(players)));
      } while (other == to);
      to = other;
      break;
    }
  }
  std::vector<std::string> out;
  for (const auto& l : lines) out.push_back(JoinFields(l));
  std::string mutated = JoinLines(out);
  if (mutated == *text) return false;
  *text = std::move(mutated);
  return true;
}

MutationSuite MakeMutationSuite(const std::vector<Transcript>& oracle,
                                const std::vector<MutationKind>& kinds, int per_round,
                                std::uint64_t seed) {
  if (per_round < 0) throw ValidationError("mutations per round must be non-negative");
  if (per_round > 0 && kinds.empty()) throw ValidationError("no mutation kinds");
  MutationSuite suite;
  Rng rng(seed);
  for (const Transcript& t : oracle) {
    Transcript m = t;
    GameScript script = ParseRephrased(t.script);
    std::vector<std::string> functions;
    for (const auto& step : t.steps) {
      GameState prev = ParseState(step.prev_state, script);
      GameState next = ParseState(step.predicted, script);
      functions.push_back(AttributeFunction(prev, next, script));
    }
    std::set<std::size_t> used;
    for (int d = 0; d < per_round; ++d) {
      std::size_t first = rng.Bounded(kinds.size());
      bool placed = false;
      for (std::size_t k = 0; k < kinds.size() && !placed; ++k) {
        MutationKind kind = kinds[(first + k) % kinds.size()];
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < functions.size(); ++i) {
          if (!used.count(i) && TargetFunctions(kind).count(functions[i])) candidates.push_back(i);
        }
        while (!candidates.empty() && !placed) {
          std::size_t pick = rng.Bounded(candidates.size());
          std::size_t i = candidates[pick];
          if (MutateState(&m.steps[i].predicted, kind, rng)) {
            used.insert(i);
            suite.defects.push_back({t.id, static_cast<int>(i), kind, functions[i]});
            placed = true;
          } else {
            candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
          }
        }
      }
    }
    suite.transcripts.push_back(std::move(m));
  }
  return suite;
}

}  // namespace scriptpoker
