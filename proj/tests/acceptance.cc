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

// Exit gate: one PASS/FAIL line per primary acceptance criterion.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "equivalence.h"
#include "invariants.h"
#include "scriptpoker/datagen.h"
#include "scriptpoker/engine.h"
#include "scriptpoker/evalharness.h"
#include "scriptpoker/statelang.h"
#include "test_util.h"

namespace scriptpoker {
namespace {

using nlohmann::json;
using testing::ConservationProblem;
using testing::LoadScript;
using testing::OodNames;
using testing::ReadData;
using testing::ReadFile;
using testing::TotalChips;
using testing::VariantNames;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome Check(bool ok, std::string detail) { return {ok, std::move(detail)}; }

std::vector<std::pair<std::string, GameScript>> Variants() {
  std::vector<std::pair<std::string, GameScript>> out;
  for (const auto& name : VariantNames()) out.emplace_back(name, LoadScript(name));
  return out;
}

std::string Trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

// Plays rounds with the random agent, checking conservation at every state.
// Returns the number of rounds with a problem and accumulates states.
int PlayChecked(const GameScript& script, int rounds, std::uint64_t seed, double* states,
                std::string* first_problem) {
  int bad = 0;
  for (int r = 0; r < rounds; ++r) {
    try {
      RoundLog log = RunRandomRound(script, seed + r, 1000, seed * 31 + r);
      const std::int64_t chips = TotalChips(log.states[0]);
      std::string problem;
      for (const auto& s : log.states) {
        problem = ConservationProblem(s, script, chips);
        if (!problem.empty()) break;
      }
      if (problem.empty() && !RoundOver(log.states.back())) problem = "round did not finish";
      if (!problem.empty()) {
        ++bad;
        if (first_problem->empty()) *first_problem = problem;
      }
      if (states) *states += static_cast<double>(log.states.size());
    } catch (const std::exception& e) {
      ++bad;
      if (first_problem->empty()) *first_problem = e.what();
    }
  }
  return bad;
}

Outcome Golden() {
  GameScript script = ParseRephrased(ReadData("fixtures/golden_script.txt"));
  GameState prev = ParseState(Trim(ReadData("fixtures/golden_input.txt")), script);
  PlayerInput input = ParseInput(Trim(ReadData("fixtures/golden_player_input.txt")));
  std::string got = SerializeState(NextState(prev, script, input));
  std::string want = Trim(ReadData("fixtures/golden_response.txt"));
  if (got == want) return Check(true, "byte-exact");
  std::ostringstream detail;
  auto diffs = DiffStates(want, got);
  detail << diffs.size() << " differing line(s):";
  for (const auto& d : diffs) detail << " [" << d.key << "]";
  return Check(false, detail.str());
}

Outcome TenVariants() {
  int bad = 0;
  std::string problem;
  for (const auto& [name, script] : Variants()) {
    ValidateScript(script);
    bad += PlayChecked(script, 50, 1000, nullptr, &problem);
  }
  return Check(bad == 0, "500 rounds, " + std::to_string(bad) + " with errors" +
                             (problem.empty() ? "" : " (" + problem + ")"));
}

Outcome Equivalence() {
  auto r = testing::RunEquivalence(10000, 20260101);
  return Check(r.mismatches == 0 && r.hands == 10000,
               std::to_string(r.hands) + " hands, " + std::to_string(r.mismatches) +
                   " mismatches");
}

Outcome Harness() {
  CorpusConfig config;
  config.scripts = Variants();
  config.rounds = 200;
  config.seed = 7;
  std::vector<json> records;
  for (const auto& s : GenerateCorpus(config)) records.push_back(s.ToJson());
  auto transcripts = TranscriptsFromRecords(records);
  EvalReport clean = Score(transcripts);
  bool ok = clean.rounds.correct == clean.rounds.total && clean.rounds.total == 200;
  for (const auto& fn : ReportFunctions()) {
    auto it = clean.functions.find(fn);
    ok = ok && it != clean.functions.end() && it->second.total > 0 &&
         it->second.correct == it->second.total;
  }
  auto suite = MakeMutationSuite(transcripts, AllMutationKinds(), 1, 11);
  EvalReport mutated = Score(suite.transcripts);
  std::set<std::string> targeted, dropped;
  for (const auto& d : suite.defects) targeted.insert(d.function);
  for (const auto& [fn, c] : mutated.functions) {
    if (c.correct < c.total) dropped.insert(fn);
  }
  ok = ok && suite.defects.size() == 200 && mutated.rounds.correct == 0 && dropped == targeted;
  std::ostringstream detail;
  detail << "clean " << clean.rounds.correct << "/" << clean.rounds.total
         << " rounds; mutated " << mutated.rounds.correct << "/" << mutated.rounds.total
         << " rounds, dropped cells";
  for (const auto& fn : dropped) detail << " " << fn;
  return Check(ok, detail.str());
}

double CategoryRatio(const std::vector<RoundRecord>& rounds, const GameScript& script) {
  std::map<std::string, int> counts;
  for (const auto& c : ScriptCategories(script)) counts[c] = 0;
  for (const auto& r : rounds) {
    if (r.category != kNoShowdown) ++counts[r.category];
  }
  int lo = INT32_MAX, hi = 0;
  for (const auto& [c, n] : counts) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  return lo == 0 ? INFINITY : static_cast<double>(hi) / lo;
}

Outcome Balancing() {
  GameScript holdem = LoadScript("holdem");
  CorpusConfig config;
  config.scripts = {{"holdem", holdem}};
  config.rounds = 5000;
  config.seed = 2024;
  double raw = CategoryRatio(GenerateRounds(config), holdem);
  config.balance.enabled = true;
  auto balanced = GenerateRounds(config);
  double ratio = CategoryRatio(balanced, holdem);
  std::ostringstream detail;
  detail << std::setprecision(4) << "balanced ratio " << ratio << ", unbalanced " << raw;
  return Check(balanced.size() == 5000 && ratio <= 2.0 && raw >= 10.0, detail.str());
}

Outcome Curriculum() {
  CurriculumConfig config;
  config.scripts = Variants();
  config.seed = 4242;
  config.warmup = 1000;
  config.standard = 10000;
  config.diverse_rephrased = 1000;
  config.diverse_standard = 1000;
  auto base = std::filesystem::temp_directory_path() / "scriptpoker_acceptance";
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base / "a");
  std::filesystem::create_directories(base / "b");
  auto a = EmitCurriculum(config, (base / "a").string());
  auto b = EmitCurriculum(config, (base / "b").string());
  bool identical = ReadFile(a.warmup) == ReadFile(b.warmup) &&
                   ReadFile(a.standard) == ReadFile(b.standard) &&
                   ReadFile(a.diverse) == ReadFile(b.diverse);
  auto warmup = ReadJsonl(a.warmup);
  auto standard = ReadJsonl(a.standard);
  auto diverse = ReadJsonl(a.diverse);
  std::size_t failures = 0;
  for (const auto* file : {&warmup, &standard, &diverse}) {
    for (const auto& r : *file) failures += !VerifyRecord(r).empty();
  }
  CorpusStats stats = ComputeStats(standard);
  double share = static_cast<double>(stats.natural_scripts) / static_cast<double>(stats.samples);
  bool sizes = warmup.size() == 1000 && standard.size() == 10000 && diverse.size() == 2000;
  std::ostringstream detail;
  detail << "sizes " << warmup.size() << "/" << standard.size() << "/" << diverse.size()
         << ", identical " << (identical ? "yes" : "no") << ", " << failures
         << " verification failures, natural share " << std::setprecision(4) << share;
  std::filesystem::remove_all(base);
  return Check(identical && sizes && failures == 0 && std::abs(share - 0.5) <= 0.05,
               detail.str());
}

Outcome CoreSet() {
  auto samples = GenerateCoreSet(Variants(), 5, 99);
  std::map<std::string, int> verified;
  int failures = 0;
  for (const auto& s : samples) {
    if (VerifyCore(s).empty()) {
      ++verified[s.function];
    } else {
      ++failures;
    }
  }
  int covered = 0;
  for (const auto& f : CoreFunctions()) covered += verified[f.id] >= 5;
  return Check(covered == 40 && CoreFunctions().size() == 40 && failures == 0,
               std::to_string(covered) + "/40 functions with >= 5 verified samples, " +
                   std::to_string(failures) + " failures");
}

Outcome OodScripts() {
  int bad = 0;
  std::string problem;
  for (const auto& name : OodNames()) {
    GameScript script = LoadScript(name);
    ValidateScript(script);
    bad += PlayChecked(script, 10, 500, nullptr, &problem);
  }
  return Check(bad == 0, "50 rounds, " + std::to_string(bad) + " with errors" +
                             (problem.empty() ? "" : " (" + problem + ")"));
}

Outcome StatesPerRound() {
  double states = 0;
  int rounds = 0, bad = 0;
  std::string problem;
  for (const auto& [name, script] : Variants()) {
    bad += PlayChecked(script, 100, 3000, &states, &problem);
    rounds += 100;
  }
  double mean = states / rounds;
  std::ostringstream detail;
  detail << std::setprecision(4) << "mean " << mean << " states over " << rounds << " rounds";
  return Check(bad == 0 && mean >= 20 && mean <= 60, detail.str());
}

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace scriptpoker

int main() {
  using namespace scriptpoker;
  const std::vector<Criterion> criteria = {
      {"golden fixture", 1, Golden},
      {"ten variants, 50 rounds each, conservation", 30, TenVariants},
      {"evaluator oracle equivalence", 60, Equivalence},
      {"harness self-consistency and mutation suite", 0, Harness},
      {"balancing ratio", 300, Balancing},
      {"curriculum emission", 0, Curriculum},
      {"core set", 0, CoreSet},
      {"out-of-domain scripts", 0, OodScripts},
      {"mean states per round", 0, StatesPerRound},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the time budget";
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << o.detail << " ("
              << std::fixed << std::setprecision(2) << seconds << " s)" << std::endl;
    std::cout.unsetf(std::ios::fixed);
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
