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


#ifndef SCRIPTPOKER_EVALHARNESS_H_
#define SCRIPTPOKER_EVALHARNESS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "scriptpoker/datagen.h"
#include "scriptpoker/statelang.h"

namespace scriptpoker {

// One predicted transition. prev_state is what the model was shown.
struct TranscriptStep {
  std::string prev_state;
  std::string player_input;
  std::string predicted;
};

// One round as played against a model.
struct Transcript {
  std::string id;
  std::string variant;
  std::string script;
  std::vector<TranscriptStep> steps;

  nlohmann::json ToJson() const;
  static Transcript FromJson(const nlohmann::json& j);
};

// Groups NSP records into rounds, in step order. A record's predicted
// state is its "predicted_state" field, or its next_state when absent.
std::vector<Transcript> TranscriptsFromRecords(const std::vector<nlohmann::json>& records);

// Joins a gold corpus with a prediction file by (stage, variant, seed,
// round, step). Missing predictions become empty, hence wrong, states.
std::vector<Transcript> JoinPredictions(const std::vector<nlohmann::json>& gold,
                                        const std::vector<nlohmann::json>& predictions);

// Key under which JoinPredictions matches records.
std::string RecordKey(const nlohmann::json& record);

// Flow function that produced next from prev: start, shuffle, blind, deal,
// flop, switch, bet, show or prize.
std::string AttributeFunction(const GameState& prev, const GameState& next,
                              const GameScript& script);

// Columns always present in a report, in display order.
const std::vector<std::string>& ReportFunctions();

struct Cell {
  std::size_t correct = 0;
  std::size_t total = 0;

  double Accuracy() const;
  bool operator==(const Cell&) const = default;
};

struct StateFailure {
  std::string transcript;
  int step = 0;
  std::string function;
  std::string expected;
  std::string predicted;

  bool operator==(const StateFailure&) const = default;
};

struct EvalReport {
  std::map<std::string, Cell> functions;
  std::map<std::string, Cell> variants;  // round success per variant
  Cell rounds;
  std::vector<StateFailure> failures;

  double MacroAverage() const;
  // Reduction of two reports; associative, and order-independent up to the
  // order of failures, which ToJson sorts.
  void Merge(const EvalReport& other);
  nlohmann::json ToJson() const;
  std::string ToTable() const;
  // Line-level diff of every failed state.
  std::string DiffDump() const;
};

enum class ScoreMode { kTeacherForced, kFreeRunning };

// Teacher forced: every predicted state is compared with the oracle's
// successor of the prev_state shown at that step. Free running: the oracle
// replays the inputs from the first prev_state and each prediction is
// compared with that trajectory.
EvalReport Score(const std::vector<Transcript>& transcripts,
                 ScoreMode mode = ScoreMode::kTeacherForced);

enum class MutationKind { kCardHallucination, kCardOmission, kChipOffByOne, kMessageMisaddress };

std::string MutationName(MutationKind kind);
MutationKind ParseMutationKind(const std::string& name);
const std::vector<MutationKind>& AllMutationKinds();

struct Defect {
  std::string transcript;
  int step = 0;
  MutationKind kind = MutationKind::kChipOffByOne;
  std::string function;

  nlohmann::json ToJson() const;
};

struct MutationSuite {
  std::vector<Transcript> transcripts;
  std::vector<Defect> defects;
};

// Rewrites state text with one defect of the given kind, or returns false
// when the state has nothing to mutate.
bool MutateState(std::string* text, MutationKind kind, Rng& rng);

// Injects per_round defects into each oracle transcript, at distinct steps.
// Card defects target deal, flop and switch states; chip defects blind, bet
// and prize states; misaddressed messages target bet states.
MutationSuite MakeMutationSuite(const std::vector<Transcript>& oracle,
                                const std::vector<MutationKind>& kinds, int per_round,
                                std::uint64_t seed);

}  // namespace scriptpoker

#endif  // SCRIPTPOKER_EVALHARNESS_H_
