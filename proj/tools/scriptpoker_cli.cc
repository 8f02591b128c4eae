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

// Command-line front end: corpus generation, verification, scoring and the
// game server.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scriptpoker/datagen.h"
#include "scriptpoker/errors.h"
#include "scriptpoker/evalharness.h"
#include "scriptpoker/service.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace scriptpoker {
namespace {

using Scripts = std::vector<std::pair<std::string, GameScript>>;

std::string DefaultScriptDir() {
  if (const char* env = std::getenv("SCRIPTPOKER_DATA")) return std::string(env) + "/scripts";
  return std::string(SCRIPTPOKER_SOURCE_DATA) + "/scripts";
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Each argument is a script file or a directory of .txt scripts. With no
// arguments the ten built-in variants are used.
Scripts LoadScripts(const std::vector<std::string>& args) {
  std::vector<fs::path> files;
  if (args.empty()) {
    for (const auto& e : fs::directory_iterator(DefaultScriptDir())) {
      if (e.path().extension() == ".txt" && e.path().stem().string().rfind("ood_", 0) != 0) {
        files.push_back(e.path());
      }
    }
  }
  for (const auto& a : args) {
    if (fs::is_directory(a)) {
      for (const auto& e : fs::directory_iterator(a)) {
        if (e.path().extension() == ".txt") files.push_back(e.path());
      }
    } else {
      files.emplace_back(a);
    }
  }
  std::sort(files.begin(), files.end());
  Scripts out;
  for (const auto& f : files) {
    GameScript s = ParseRephrased(Slurp(f));
    ValidateScript(s);
    out.emplace_back(f.stem().string(), std::move(s));
  }
  if (out.empty()) throw ValidationError("no scripts found");
  return out;
}

std::map<std::string, double> ParseWeights(const std::string& spec) {
  std::map<std::string, double> out;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("weights are Name=value pairs");
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return out;
}

std::vector<json> ReadAll(const std::vector<std::string>& paths) {
  std::vector<json> out;
  for (const auto& p : paths) {
    auto records = ReadJsonl(p);
    out.insert(out.end(), records.begin(), records.end());
  }
  return out;
}

int Verify(const std::vector<std::string>& paths, bool quiet) {
  std::size_t total = 0, failed = 0;
  for (const auto& p : paths) {
    auto records = ReadJsonl(p);
    for (std::size_t i = 0; i < records.size(); ++i) {
      ++total;
      std::string problem = VerifyRecord(records[i]);
      if (problem.empty()) continue;
      ++failed;
      if (!quiet) std::cerr << p << ":" << i + 1 << ": " << problem << "\n";
    }
  }
  std::cout << json{{"records", total}, {"failures", failed}}.dump() << "\n";
  return failed == 0 ? 0 : 1;
}

// Generated files are re-verified before the command reports success.
int VerifyWritten(const std::vector<std::string>& paths) {
  for (const auto& p : paths) {
    for (const auto& r : ReadJsonl(p)) {
      if (!VerifyRecord(r).empty()) {
        std::cerr << "oracle-consistency failure in " << p << "\n";
        return 1;
      }
    }
  }
  return 0;
}

int Run(int argc, char** argv) {
  CLI::App app{"scriptpoker: scripted poker engine, corpus tools and game server"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Simulate rounds into NSP samples");
  std::vector<std::string> gen_scripts;
  int rounds = 100;
  std::uint64_t seed = 0;
  bool balance = false, no_jitter = false;
  std::string weights, out;
  std::int64_t stack = 1000;
  gen->add_option("--scripts", gen_scripts, "Script files or directories");
  gen->add_option("--rounds", rounds, "Rounds to keep")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Seed");
  gen->add_flag("--balance", balance, "Balance showdown categories");
  gen->add_option("--weights", weights, "Category weights, e.g. Pair=1,Flush=2");
  gen->add_flag("--no-jitter", no_jitter, "Keep every script's own configuration");
  gen->add_option("--stack", stack, "Starting stack");
  gen->add_option("--out", out, "Output JSONL")->required();

  auto* core = app.add_subcommand("coreset", "Core-function instruction samples");
  std::vector<std::string> core_scripts;
  int per_function = 5;
  core->add_option("--scripts", core_scripts, "Script files or directories");
  core->add_option("--per-function", per_function, "Samples per function")
      ->check(CLI::PositiveNumber);
  core->add_option("--seed", seed, "Seed");
  core->add_option("--out", out, "Output JSONL")->required();

  auto* cur = app.add_subcommand("curriculum", "Warmup, standard and diverse stages");
  std::vector<std::string> cur_scripts;
  CurriculumConfig cc;
  std::string out_dir;
  cur->add_option("--scripts", cur_scripts, "Script files or directories");
  cur->add_option("--seed", cc.seed, "Seed");
  cur->add_option("--warmup", cc.warmup, "Core samples");
  cur->add_option("--standard", cc.standard, "Standard NSP samples");
  cur->add_option("--diverse-rephrased", cc.diverse_rephrased, "Rephrased NSP samples");
  cur->add_option("--diverse-standard", cc.diverse_standard, "Standard samples in the last stage");
  cur->add_option("--natural-share", cc.natural_share, "Share of natural-language scripts")
      ->check(CLI::Range(0.0, 1.0));
  cur->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* stats = app.add_subcommand("stats", "Corpus statistics as JSON");
  std::vector<std::string> inputs;
  stats->add_option("inputs", inputs, "JSONL files")->required();

  auto* verify = app.add_subcommand("verify", "Re-check every record against the engine");
  bool quiet = false;
  verify->add_option("inputs", inputs, "JSONL files")->required();
  verify->add_flag("--quiet", quiet, "Only print the summary");

  auto* score = app.add_subcommand("score", "Score predictions against a gold corpus");
  std::string gold, pred, report = "table", diffs;
  bool free_running = false;
  score->add_option("--gold", gold, "Gold NSP corpus")->required();
  score->add_option("--pred", pred, "Predictions JSONL (defaults to the gold states)");
  score->add_option("--report", report, "json or table")
      ->check(CLI::IsMember({"json", "table"}));
  score->add_flag("--free-running", free_running, "Score against the replayed trajectory");
  score->add_option("--diffs", diffs, "Write a line diff of every failed state");

  auto* mutate = app.add_subcommand("mutate", "Inject defects into oracle predictions");
  std::vector<std::string> kinds;
  int per_round = 1;
  std::string defects;
  mutate->add_option("--gold", gold, "Gold NSP corpus")->required();
  mutate->add_option("--kinds", kinds, "Mutation kinds (default all)")
      ->check(CLI::IsMember({"card-hallucination", "card-omission", "chip-off-by-one",
                             "message-misaddress"}));
  mutate->add_option("--per-round", per_round, "Defects per round")->check(CLI::NonNegativeNumber);
  mutate->add_option("--seed", seed, "Seed");
  mutate->add_option("--out", out, "Prediction JSONL")->required();
  mutate->add_option("--defects", defects, "Defect positions JSONL");

  auto* serve = app.add_subcommand("serve", "Run the game server");
  std::string bind, data_dir;
  serve->add_option("--bind", bind, "host:port (default $SCRIPTPOKER_BIND or 127.0.0.1:8080)");
  serve->add_option("--data-dir", data_dir, "Session logs (default $SCRIPTPOKER_DATA_DIR)");

  CLI11_PARSE(app, argc, argv);

  if (*gen) {
    CorpusConfig config;
    config.scripts = LoadScripts(gen_scripts);
    config.rounds = rounds;
    config.seed = seed;
    config.stack = stack;
    config.jitter = !no_jitter;
    config.balance.enabled = balance;
    if (!weights.empty()) config.balance.weights = ParseWeights(weights);
    std::vector<json> records;
    for (const auto& s : GenerateCorpus(config)) records.push_back(s.ToJson());
    WriteJsonl(out, records);
    std::cerr << records.size() << " samples written to " << out << "\n";
    return VerifyWritten({out});
  }
  if (*core) {
    std::vector<json> records;
    for (const auto& s : GenerateCoreSet(LoadScripts(core_scripts), per_function, seed)) {
      records.push_back(s.ToJson());
    }
    WriteJsonl(out, records);
    std::cerr << records.size() << " samples written to " << out << "\n";
    return VerifyWritten({out});
  }
  if (*cur) {
    cc.scripts = LoadScripts(cur_scripts);
    fs::create_directories(out_dir);
    CurriculumFiles files = EmitCurriculum(cc, out_dir);
    std::cerr << "wrote " << files.warmup << ", " << files.standard << ", " << files.diverse
              << "\n";
    return VerifyWritten({files.warmup, files.standard, files.diverse});
  }
  if (*stats) {
    std::cout << ComputeStats(ReadAll(inputs)).ToJson().dump(2) << "\n";
    return 0;
  }
  if (*verify) return Verify(inputs, quiet);
  if (*score) {
    auto gold_records = ReadJsonl(gold);
    auto transcripts = pred.empty() ? TranscriptsFromRecords(gold_records)
                                    : JoinPredictions(gold_records, ReadJsonl(pred));
    EvalReport r =
        Score(transcripts, free_running ? ScoreMode::kFreeRunning : ScoreMode::kTeacherForced);
    if (report == "json") {
      std::cout << r.ToJson().dump(2) << "\n";
    } else {
      std::cout << r.ToTable();
    }
    if (!diffs.empty()) {
      std::ofstream d(diffs);
      d << r.DiffDump();
    }
    return 0;
  }
  if (*mutate) {
    auto gold_records = ReadJsonl(gold);
    std::vector<MutationKind> ks;
    for (const auto& k : kinds) ks.push_back(ParseMutationKind(k));
    if (ks.empty()) ks = AllMutationKinds();
    MutationSuite suite =
        MakeMutationSuite(TranscriptsFromRecords(gold_records), ks, per_round, seed);
    std::map<std::string, const Transcript*> by_id;
    for (const auto& t : suite.transcripts) by_id[t.id] = &t;
    std::vector<json> records;
    for (auto r : gold_records) {
      if (r.value("kind", "nsp") != "nsp") continue;
      std::string key = RecordKey(r);
      std::string id = key.substr(0, key.rfind('#'));
      r["predicted_state"] = by_id.at(id)->steps.at(r.value("step", 0)).predicted;
      records.push_back(std::move(r));
    }
    WriteJsonl(out, records);
    if (!defects.empty()) {
      std::vector<json> d;
      for (const auto& x : suite.defects) d.push_back(x.ToJson());
      WriteJsonl(defects, d);
    }
    std::cerr << suite.defects.size() << " defects injected\n";
    return 0;
  }
  if (*serve) {
    ServiceEnv env = ServiceEnv::FromEnvironment();
    if (!bind.empty()) {
      std::size_t colon = bind.rfind(':');
      if (colon == std::string::npos) throw ValidationError("--bind must be host:port");
      env.host = bind.substr(0, colon);
      env.port = std::stoi(bind.substr(colon + 1));
    }
    if (!data_dir.empty()) env.data_dir = data_dir;
    std::cerr << "listening on " << env.host << ":" << env.port << "\n";
    Serve(env);
    return 0;
  }
  return 0;
}

}  // namespace
}  // namespace scriptpoker

int main(int argc, char** argv) {
  try {
    return scriptpoker::Run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
