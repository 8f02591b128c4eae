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

#ifndef SCRIPTPOKER_DATAGEN_H_
#define SCRIPTPOKER_DATAGEN_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scriptpoker/engine.h"
#include "scriptpoker/script.h"

namespace scriptpoker {

// Category of a round without a showdown.
inline constexpr std::string_view kNoShowdown = "No Showdown";

// One next-state prediction sample: script, previous state, optional
// player input and the oracle's next state, all as raw text blocks.
struct NspSample {
  std::string script;
  std::string prev_state;
  std::string player_input;  // empty when no player acts
  std::string next_state;
  std::string variant;
  std::string function;  // start, shuffle, blind, deal, flop, bet, switch, show, prize
  std::string category;  // showdown category of the whole round
  std::uint64_t seed = 0;
  int round = 0;
  int step = 0;
  std::string form = "structured";  // structured, natural or rephrased script text
  std::string stage;  // curriculum stage, empty outside a curriculum

  nlohmann::json ToJson() const;
  static NspSample FromJson(const nlohmann::json& j);
  bool operator==(const NspSample&) const = default;
};

// One instruction-following sample for a core function.
struct CoreSample {
  std::string function;
  std::string instruction;  // template with slots filled
  std::map<std::string, std::string> slots;
  std::string script;
  std::string input;
  std::string output;
  std::string stage;

  nlohmann::json ToJson() const;
  static CoreSample FromJson(const nlohmann::json& j);
  bool operator==(const CoreSample&) const = default;
};

// Flow function of a transition: the label it appended, with deal/flop
// counts dropped, or the phase being played when it appended none.
std::string TransitionFunction(const GameState& prev, const GameState& next,
                               const GameScript& script);

// Highest combination among the round's (first) showdown winners, e.g.
// "Pair", "Badugi 3", or kNoShowdown for a walkover.
std::string RoundCategory(const GameState& final_state, const GameScript& script);

// Categories a script can produce at showdown, low to high.
std::vector<std::string> ScriptCategories(const GameScript& script);

// Random variation of the table settings (players, bet limits) that keeps
// the rules and the flow. Retries until the round fits the deck.
GameScript JitterScript(const GameScript& script, Rng& rng);

struct BalanceSpec {
  bool enabled = false;
  // Target share per showdown category; empty means uniform over the
  // categories of the first script.
  std::map<std::string, double> weights;
  // Share of the corpus reserved for rounds without a showdown.
  double no_showdown_share = 0.1;
  // Candidate rounds simulated per requested round before rare
  // categories are filled by repeating rounds already accepted.
  int candidates_per_round = 40;
};

struct CorpusConfig {
  std::vector<std::pair<std::string, GameScript>> scripts;  // (variant id, script)
  int rounds = 1;
  std::uint64_t seed = 0;
  std::int64_t stack = 1000;
  bool jitter = true;
  BalanceSpec balance;
};

struct RoundRecord {
  std::string variant;
  GameScript script;
  std::uint64_t seed = 0;
  RoundLog log;
  std::string category;
};

// Simulates one round of a (possibly jittered) script.
RoundRecord SimulateRound(const std::string& variant, const GameScript& script,
                          std::uint64_t seed, std::int64_t stack, bool jitter);

// Rounds of the corpus, in output order. Throws QuotaUnreachable.
std::vector<RoundRecord> GenerateRounds(const CorpusConfig& config);

// Samples of one round: one per transition.
std::vector<NspSample> RoundSamples(const RoundRecord& round, int round_index);

std::vector<NspSample> GenerateCorpus(const CorpusConfig& config);

// Core functions, in table order.
struct CoreFunction {
  std::string id;
  std::string instruction;  // with {x}/{a} slots
};
const std::vector<CoreFunction>& CoreFunctions();

// Samples drawn from the given scripts, interleaved across functions
// (function 1..40, then again). Throws Error when a function finds no
// suitable transition.
std::vector<CoreSample> GenerateCoreSet(
    const std::vector<std::pair<std::string, GameScript>>& scripts, int per_function,
    std::uint64_t seed);

// Output of a core function recomputed from its script, slots and input.
std::string ComputeCore(const std::string& function, const std::string& script_text,
                        const std::map<std::string, std::string>& slots,
                        const std::string& input);

// Empty when the sample is oracle-consistent; otherwise the reason.
std::string VerifyCore(const CoreSample& sample);
std::string VerifyNsp(const NspSample& sample);
// Dispatches on the record kind ("nsp" or "core").
std::string VerifyRecord(const nlohmann::json& record);

struct CurriculumConfig {
  std::vector<std::pair<std::string, GameScript>> scripts;
  std::uint64_t seed = 0;
  int warmup = 1000;           // core samples
  int standard = 10000;        // NSP samples
  int diverse_rephrased = 1000;
  int diverse_standard = 1000;
  double natural_share = 0.5;  // standard-stage scripts rendered in natural language
  std::int64_t stack = 1000;
};

struct CurriculumFiles {
  std::string warmup;
  std::string standard;
  std::string diverse;
};

// Writes warmup.jsonl, standard.jsonl and diverse.jsonl into dir.
CurriculumFiles EmitCurriculum(const CurriculumConfig& config, const std::string& dir);

struct CorpusStats {
  std::size_t samples = 0;
  std::size_t rounds = 0;
  std::size_t core_samples = 0;
  std::size_t natural_scripts = 0;
  std::size_t structured_scripts = 0;
  std::map<std::string, std::size_t> variants;   // samples per variant
  std::map<std::string, std::size_t> functions;  // samples per function
  std::map<std::string, std::size_t> categories; // rounds per category
  double mean_script_length = 0;  // characters
  double mean_state_length = 0;   // characters of next_state
  double mean_states_per_round = 0;
  double mean_players = 0;
  double mean_min_bet = 0;
  double mean_max_bet = 0;
  std::size_t vocabulary = 0;  // distinct whitespace tokens

  nlohmann::json ToJson() const;
};

CorpusStats ComputeStats(const std::vector<nlohmann::json>& records);

// Whether a script text is the canonical structured form.
bool IsStructuredScript(const std::string& text);

std::vector<nlohmann::json> ReadJsonl(const std::string& path);
void WriteJsonl(const std::string& path, const std::vector<nlohmann::json>& records);

}  // namespace scriptpoker

#endif  // SCRIPTPOKER_DATAGEN_H_
