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
#include <filesystem>
#include <map>
#include <set>

#include "doctest.h"
#include "scriptpoker/engine.h"
#include "scriptpoker/errors.h"
#include "scriptpoker/statelang.h"
#include "test_util.h"

namespace scriptpoker {
namespace {

using testing::LoadScript;
using testing::ReadFile;
using testing::VariantNames;

std::vector<std::pair<std::string, GameScript>> AllVariants() {
  std::vector<std::pair<std::string, GameScript>> out;
  for (const auto& name : VariantNames()) out.emplace_back(name, LoadScript(name));
  return out;
}

std::vector<std::pair<std::string, GameScript>> Holdem() {
  return {{"holdem", LoadScript("holdem")}};
}

double Ratio(const std::map<std::string, int>& counts) {
  int lo = INT32_MAX, hi = 0;
  for (const auto& [c, n] : counts) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  return static_cast<double>(hi) / std::max(lo, 1);
}

std::map<std::string, int> ShowdownCounts(const std::vector<RoundRecord>& rounds,
                                          const GameScript& script) {
  std::map<std::string, int> counts;
  for (const auto& c : ScriptCategories(script)) counts[c] = 0;
  for (const auto& r : rounds) {
    if (r.category != kNoShowdown) ++counts[r.category];
  }
  return counts;
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("scriptpoker_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

TEST_CASE("one round yields one sample per transition") {
  CorpusConfig config;
  config.scripts = Holdem();
  config.seed = 11;
  auto rounds = GenerateRounds(config);
  REQUIRE(rounds.size() == 1);
  auto samples = GenerateCorpus(config);
  CHECK(samples.size() == rounds[0].log.states.size() - 1);
  CHECK(samples.front().function == "start");
  CHECK(samples.back().function == "prize");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(samples[i].step == static_cast<int>(i));
    CHECK(VerifyNsp(samples[i]) == "");
    if (i > 0) CHECK(samples[i].prev_state == samples[i - 1].next_state);
  }
}

TEST_CASE("samples are oracle consistent across variants") {
  CorpusConfig config;
  config.scripts = AllVariants();
  config.rounds = 40;
  config.seed = 3;
  for (const auto& s : GenerateCorpus(config)) {
    INFO(s.variant, " step ", s.step);
    REQUIRE(VerifyNsp(s) == "");
    CHECK(VerifyRecord(s.ToJson()) == "");
    CHECK(NspSample::FromJson(s.ToJson()) == s);
  }
}

TEST_CASE("tampered samples fail verification") {
  CorpusConfig config;
  config.scripts = Holdem();
  config.seed = 5;
  auto samples = GenerateCorpus(config);
  NspSample s = samples[3];
  s.next_state += " ";
  CHECK(VerifyNsp(s) != "");
  s = samples[3];
  s.function = "show";
  CHECK(VerifyNsp(s) == "function label mismatch");
  s = samples[3];
  s.prev_state = "garbage";
  CHECK(VerifyNsp(s).rfind("error", 0) == 0);
}

TEST_CASE("transition function labels") {
  GameScript script = LoadScript("holdem");
  RandomAgent agent(1);
  RoundLog log = RunRound(script, 9, std::vector<std::int64_t>(script.num_players, 1000),
                          {&agent});
  std::set<std::string> seen;
  for (std::size_t t = 0; t + 1 < log.states.size(); ++t) {
    std::string fn = TransitionFunction(log.states[t], log.states[t + 1], script);
    seen.insert(fn);
    if (log.inputs[t]) CHECK(fn == "bet");
  }
  CHECK(seen.count("start"));
  CHECK(seen.count("blind"));
  CHECK(seen.count("deal"));
  CHECK(seen.count("prize"));
}

TEST_CASE("jitter keeps scripts valid and varied") {
  Rng rng(4);
  std::set<std::tuple<int, std::int64_t, std::int64_t>> configs;
  for (const auto& [name, script] : AllVariants()) {
    for (int i = 0; i < 20; ++i) {
      GameScript s = JitterScript(script, rng);
      CHECK_NOTHROW(ValidateScript(s));
      CHECK(s.min_bet < s.max_bet);
      CHECK(s.flow == script.flow);
      configs.emplace(s.num_players, s.min_bet, s.max_bet);
    }
  }
  CHECK(configs.size() > 100);
}

TEST_CASE("categories come from the lattice") {
  GameScript holdem = LoadScript("holdem");
  auto cats = ScriptCategories(holdem);
  CHECK(cats.size() == 8);
  CHECK(std::find(cats.begin(), cats.end(), "Pair") != cats.end());
  auto badugi = ScriptCategories(LoadScript("badugi"));
  CHECK(badugi == std::vector<std::string>{"Badugi 1", "Badugi 2", "Badugi 3", "Badugi 4"});
}

TEST_CASE("balanced hold'em corpus is near uniform") {
  GameScript holdem = LoadScript("holdem");
  CorpusConfig config;
  config.scripts = Holdem();
  config.rounds = 5000;
  config.seed = 2024;
  auto plain = GenerateRounds(config);
  auto raw = ShowdownCounts(plain, holdem);
  int showdowns = 0;
  for (const auto& [c, n] : raw) showdowns += n;
  CHECK(raw["Pair"] + raw["High Card"] > showdowns / 2);
  CHECK(Ratio(raw) >= 10.0);

  config.balance.enabled = true;
  auto balanced = GenerateRounds(config);
  CHECK(balanced.size() == 5000);
  auto counts = ShowdownCounts(balanced, holdem);
  MESSAGE("balanced ratio ", Ratio(counts), " unbalanced ratio ", Ratio(raw));
  CHECK(Ratio(counts) <= 2.0);
  int walkovers = static_cast<int>(std::count_if(
      balanced.begin(), balanced.end(), [](const RoundRecord& r) { return r.category == kNoShowdown; }));
  CHECK(walkovers == 500);
}

TEST_CASE("balancing is deterministic and keeps rounds whole") {
  CorpusConfig config;
  config.scripts = Holdem();
  config.rounds = 200;
  config.seed = 8;
  config.balance.enabled = true;
  auto a = GenerateCorpus(config);
  auto b = GenerateCorpus(config);
  CHECK(a == b);
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i].round == a[i - 1].round) CHECK(a[i].prev_state == a[i - 1].next_state);
  }
}

TEST_CASE("unreachable quota throws") {
  CorpusConfig config;
  config.scripts = Holdem();
  config.rounds = 10;
  config.balance.enabled = true;
  config.balance.weights = {{"Pair", 1.0}, {"Three Pair", 1.0}};
  CHECK_THROWS_AS(GenerateRounds(config), QuotaUnreachable);

  GameScript script = LoadScript("holdem");
  script.hand_rank.erase(std::remove(script.hand_rank.begin(), script.hand_rank.end(),
                                     "Straight Flush"),
                         script.hand_rank.end());
  config.scripts = {{"holdem", script}};
  config.balance.weights = {{"Straight Flush", 1.0}};
  CHECK_THROWS_AS(GenerateRounds(config), QuotaUnreachable);
}

TEST_CASE("core set covers every function and verifies") {
  auto fns = CoreFunctions();
  REQUIRE(fns.size() == 40);
  auto samples = GenerateCoreSet(AllVariants(), 5, 17);
  std::map<std::string, int> per;
  for (const auto& s : samples) {
    INFO(s.function, "\n", s.input);
    CHECK(VerifyCore(s) == "");
    CHECK(s.instruction.find('{') == std::string::npos);
    CHECK(CoreSample::FromJson(s.ToJson()) == s);
    ++per[s.function];
  }
  CHECK(per.size() == 40);
  for (const auto& [fn, n] : per) CHECK(n == 5);
  CHECK(GenerateCoreSet(AllVariants(), 5, 17) == samples);
}

TEST_CASE("core function examples") {
  const std::string holdem = SerializeScript(LoadScript("holdem"));
  CHECK(ComputeCore("len", holdem, {}, "|cards|H8|D1|S2|C3|H4|H5|H6") == "7");
  CHECK(ComputeCore("bonus for x", holdem, {{"x", "3"}}, "|pot|900") == "300");
  CHECK(ComputeCore("total bonus", holdem, {}, "|chip|p1: 5/995|p2: 10/990|p3: 0/1000") == "15");
  CHECK(ComputeCore("add x chips", holdem, {{"x", "20"}, {"a", "2"}},
                    "|chip|p1: 5/995|p2: 10/990") == "|chip|p1: 5/995|p2: 30/970");
  CHECK(ComputeCore("drop x chips", holdem, {{"x", "5"}, {"a", "1"}},
                    "|chip|p1: 5/995|p2: 10/990") == "|chip|p1: 0/1000|p2: 10/990");
  CHECK(ComputeCore("get pair", holdem, {}, "|cards|H8|D8|S2|C2|H4") == "|cards|H8|D8");
  CHECK(ComputeCore("get flush", holdem, {}, "|cards|H8|D8|S2|C2|H4") == "None");
  CHECK(ComputeCore("highest x", holdem, {{"x", "2"}}, "|cards|H8|D1|S2") == "|cards|D1|H8");
  CHECK(ComputeCore("lowest no pair", holdem, {}, "|cards|H8|D8|S2|C3") == "|cards|S2");
  CHECK(ComputeCore("rank low high", holdem, {}, "|cards|H13|S2|D10") == "|cards|S2|D10|H13");

  // The small blind posts half the minimum bet.
  GameScript script = LoadScript("holdem");
  script.min_bet = 10;
  GameState setup = SetupState(script, 1, std::vector<std::int64_t>(script.num_players, 1000));
  GameState start = NextState(setup, script, std::nullopt);
  std::string out = ComputeCore("blind", SerializeScript(script), {}, SerializeState(start));
  GameState after = ParseState(out, script);
  CHECK(after.chips[SmallBlindSeat(after)].bet == 5);
  CHECK(after.chips[BigBlindSeat(after)].bet == 10);
}

TEST_CASE("core samples reject wrong outputs") {
  auto samples = GenerateCoreSet(AllVariants(), 1, 3);
  for (auto s : samples) {
    s.output += "x";
    CHECK(VerifyCore(s) != "");
  }
  CoreSample s = samples[0];
  s.instruction += ".";
  CHECK(VerifyCore(s) == "instruction mismatch");
}

TEST_CASE("curriculum emission") {
  CurriculumConfig config;
  config.scripts = AllVariants();
  config.seed = 99;
  config.warmup = 100;
  config.standard = 1000;
  config.diverse_rephrased = 100;
  config.diverse_standard = 100;
  auto dir_a = TempDir("curriculum_a");
  auto dir_b = TempDir("curriculum_b");
  auto a = EmitCurriculum(config, dir_a.string());
  auto b = EmitCurriculum(config, dir_b.string());
  CHECK(ReadFile(a.warmup) == ReadFile(b.warmup));
  CHECK(ReadFile(a.standard) == ReadFile(b.standard));
  CHECK(ReadFile(a.diverse) == ReadFile(b.diverse));

  auto warmup = ReadJsonl(a.warmup);
  auto standard = ReadJsonl(a.standard);
  auto diverse = ReadJsonl(a.diverse);
  CHECK(warmup.size() == 100);
  CHECK(standard.size() == 1000);
  CHECK(diverse.size() == 200);
  for (const auto& r : warmup) CHECK(r["stage"] == "warmup");
  for (const auto& r : standard) CHECK(r["stage"] == "standard");
  int rephrased = 0;
  for (const auto& r : diverse) {
    CHECK(r["stage"] == "diverse");
    CHECK_NOTHROW(ValidateScript(ParseRephrased(r["script"].get<std::string>())));
    rephrased += r["form"] == "rephrased";
  }
  CHECK(rephrased == 100);
  for (const auto* file : {&warmup, &standard, &diverse}) {
    for (const auto& r : *file) CHECK(VerifyRecord(r) == "");
  }
  auto stats = ComputeStats(standard);
  double share = static_cast<double>(stats.natural_scripts) / stats.samples;
  CHECK(share == doctest::Approx(0.5).epsilon(0.1));
  std::size_t structured = 0;
  for (const auto& r : standard) structured += IsStructuredScript(r["script"]);
  CHECK(structured == stats.structured_scripts);
}

TEST_CASE("stats agree with the engine") {
  CHECK(ComputeStats({}).samples == 0);
  CHECK(ComputeStats({}).mean_states_per_round == 0);

  CorpusConfig config;
  config.scripts = Holdem();
  config.rounds = 1000;
  config.seed = 77;
  auto rounds = GenerateRounds(config);
  double states = 0;
  std::map<std::string, std::size_t> categories;
  std::vector<nlohmann::json> records;
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    states += static_cast<double>(rounds[i].log.states.size());
    ++categories[rounds[i].category];
    for (const auto& s : RoundSamples(rounds[i], static_cast<int>(i))) records.push_back(s.ToJson());
  }
  auto stats = ComputeStats(records);
  CHECK(stats.rounds == 1000);
  CHECK(stats.mean_states_per_round == doctest::Approx(states / 1000).epsilon(1e-12));
  CHECK(stats.categories == categories);
  CHECK(stats.variants.at("holdem") == records.size());
  CHECK(stats.mean_players >= 2);
  CHECK(stats.vocabulary > 50);
}

TEST_CASE("jsonl round trip") {
  auto dir = TempDir("jsonl");
  std::vector<nlohmann::json> records = {{{"a", 1}}, {{"b", "x\ny"}}};
  WriteJsonl((dir / "r.jsonl").string(), records);
  CHECK(ReadJsonl((dir / "r.jsonl").string()) == records);
  CHECK_THROWS_AS(ReadJsonl((dir / "missing.jsonl").string()), Error);
}

}  // namespace
}  // namespace scriptpoker
