// Copyright 2026 The sense-align Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// sense-align: gloss alignment, pair generation, head training and WSD
// evaluation from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <omp.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "manifest.h"
#include "sense_align/alignment.h"
#include "sense_align/embedding.h"
#include "sense_align/error.h"
#include "sense_align/head.h"
#include "sense_align/inventory.h"
#include "sense_align/jsonl.h"
#include "sense_align/pairgen.h"
#include "sense_align/wsdeval.h"

namespace fs = std::filesystem;

namespace sense_align::tools {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  uint64_t seed = 17;
  int threads = 1;
  std::string log_level = "info";
  bool seed_given = false;
};

struct IngestOptions {
  std::string inventory;
  std::string name;
  bool lenient = false;
  bool stats = false;
  std::string out;
};

struct EmbedOptions {
  std::vector<std::string> inventories;
  std::vector<std::string> names;
  std::string test;
  uint32_t dim = 256;
  std::string out;
};

struct AlignCliOptions {
  std::string inv_a, inv_b, name_a, name_b;
  std::string embeddings;
  double threshold = kDefaultAlignThreshold;
  std::string out;
};

struct PairsOptions {
  std::string mode;
  std::vector<std::string> inventories;
  std::vector<std::string> names;
  std::string links;
  std::string out;
  bool stats = false;
  std::vector<double> split;
};

struct TrainOptions {
  std::vector<std::string> pairs;
  std::string embeddings;
  std::string config;
  std::string init;
  std::string out;
};

struct WsdOptions {
  std::string model;
  std::string embeddings;
  std::string test;
  std::string out;
  bool mfs = false;
  std::string train_counts;
};

struct EvalOptions {
  std::string preds;
  std::string test;
  std::string train_counts;
  std::vector<size_t> buckets{0, 2, 5, 10};
  std::string out;
};

struct JudgeOptions {
  std::string links;
  std::string judgments;
  std::string out;
};

std::string StemName(const std::string& path) {
  return fs::path(path).stem().string();
}

// Pairs each inventory path with its --name, defaulting to the file stem.
std::vector<std::pair<std::string, std::string>> NamedPaths(
    const std::vector<std::string>& paths, const std::vector<std::string>& names) {
  if (!names.empty() && names.size() != paths.size()) {
    throw UsageError(fmt::format("{} --name values for {} inventories",
                                 names.size(), paths.size()));
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (size_t i = 0; i < paths.size(); ++i) {
    out.emplace_back(paths[i], names.empty() ? StemName(paths[i]) : names[i]);
  }
  return out;
}

std::vector<Inventory> LoadInventories(
    const std::vector<std::pair<std::string, std::string>>& specs,
    RunManifest& manifest) {
  std::vector<Inventory> out;
  for (const auto& [path, name] : specs) {
    out.push_back(LoadInventory(path, name));
    manifest.AddInput(path);
  }
  return out;
}

int RunIngest(const IngestOptions& o, RunManifest& manifest) {
  const std::string name = o.name.empty() ? StemName(o.inventory) : o.name;
  Inventory inv = LoadInventory(o.inventory, name, o.lenient);
  manifest.AddInput(o.inventory);
  spdlog::info("loaded inventory '{}' with {} entries", name, inv.entries().size());
  if (o.stats) {
    std::cout << "Inventory\tWords\tGlosses\tES\tGls/W\tES/W\n"
              << FormatStatsRow(name, ComputeStats(inv)) << "\n";
  }
  if (!o.out.empty()) {
    WriteInventory(inv, o.out);
    manifest.WriteFor(o.out);
  }
  return 0;
}

int RunEmbed(const EmbedOptions& o, const GlobalOptions& g, RunManifest& manifest) {
  EmbeddingStore store(o.dim);
  for (const Inventory& inv : LoadInventories(NamedPaths(o.inventories, o.names), manifest)) {
    const BaselineReport r = AddBaselineEmbeddings(inv, g.seed, store, g.threads);
    spdlog::info("{}: {} gloss and {} context vectors", inv.name(), r.glosses,
                 r.contexts);
    if (r.fallback_contexts > 0) {
      spdlog::warn("{}: {} examples do not contain their lemma; used the "
                   "sentence vector",
                   inv.name(), r.fallback_contexts);
    }
    if (r.zero_vectors > 0) {
      spdlog::warn("{}: {} texts produced no tokens (zero vectors)", inv.name(),
                   r.zero_vectors);
    }
  }
  if (!o.test.empty()) {
    manifest.AddInput(o.test);
    for (const WsdInstance& inst : LoadWsdInstances(o.test)) {
      store.Add(InstanceKey(inst.id),
                BaselineEmbedTarget(ExampleSentence{inst.context, inst.span},
                                    inst.lemma, o.dim, g.seed));
    }
  }
  WriteStore(store, o.out);
  manifest.WriteFor(o.out);
  spdlog::info("wrote {} records to {}", store.size(), o.out);
  return 0;
}

int RunAlign(const AlignCliOptions& o, const GlobalOptions& g, RunManifest& manifest) {
  const Inventory a = LoadInventory(o.inv_a, o.name_a.empty() ? StemName(o.inv_a) : o.name_a);
  const Inventory b = LoadInventory(o.inv_b, o.name_b.empty() ? StemName(o.inv_b) : o.name_b);
  if (a.name() == b.name()) {
    throw UsageError("both inventories are named '" + a.name() + "'; pass --name-a/--name-b");
  }
  const EmbeddingStore store = LoadStore(o.embeddings);
  manifest.AddInput(o.inv_a);
  manifest.AddInput(o.inv_b);
  manifest.AddInput(o.embeddings);
  const auto links = AlignInventories(a, b, store, {o.threshold, g.threads});
  spdlog::info("{} common words, {} links at threshold {}",
               CommonKeys(a, b).size(), links.size(), o.threshold);
  WriteLinks(links, o.out);
  manifest.WriteFor(o.out);
  return 0;
}

int RunPairs(const PairsOptions& o, const GlobalOptions& g, RunManifest& manifest) {
  const auto inventories = LoadInventories(NamedPaths(o.inventories, o.names), manifest);
  std::vector<AlignmentLink> links;
  if (!o.links.empty()) {
    links = LoadLinks(o.links);
    manifest.AddInput(o.links);
  }
  std::vector<PairInstance> pairs;
  if (o.mode == "within") {
    for (const Inventory& inv : inventories) {
      auto more = GenerateWithinInventory(inv);
      pairs.insert(pairs.end(), more.begin(), more.end());
    }
  } else if (o.mode == "cross") {
    if (o.links.empty()) throw UsageError("--mode cross needs --links");
    if (inventories.size() < 2) throw UsageError("--mode cross needs two or more --inv");
    for (size_t i = 0; i < inventories.size(); ++i) {
      for (size_t j = i + 1; j < inventories.size(); ++j) {
        const std::string& na = inventories[i].name();
        const std::string& nb = inventories[j].name();
        std::vector<AlignmentLink> between;
        for (const AlignmentLink& l : links) {
          if ((l.gloss_a.inventory == na && l.gloss_b.inventory == nb) ||
              (l.gloss_a.inventory == nb && l.gloss_b.inventory == na)) {
            between.push_back(l);
          }
        }
        auto more = GenerateCrossInventory(between, inventories[i], inventories[j]);
        pairs.insert(pairs.end(), more.begin(), more.end());
      }
    }
  } else if (o.mode == "context") {
    pairs = GenerateContextContext(inventories, links);
  } else {
    throw UsageError("--mode must be cross, within or context");
  }

  WritePairs(pairs, o.out);
  manifest.WriteFor(o.out);
  if (o.stats) {
    const PairCounts c = CountLabels(pairs);
    std::cout << fmt::format("mode\t{}\npositive\t{}\nnegative\t{}\ntotal\t{}\n",
                             o.mode, c.positive, c.negative, pairs.size());
  }
  if (!o.split.empty()) {
    if (o.split.size() != 2) throw UsageError("--split takes train,dev ratios");
    const PairSplit split = SplitAndShuffle(pairs, g.seed, o.split[0], o.split[1]);
    const fs::path out(o.out);
    const std::string ext = out.extension().string();
    for (const auto& [part, items] :
         {std::pair{"train", &split.train}, {"dev", &split.dev}, {"test", &split.test}}) {
      fs::path p = out;
      p.replace_extension(std::string(".") + part + ext);
      WritePairs(*items, p);
      manifest.WriteFor(p);
      spdlog::info("{}: {} pairs -> {}", part, items->size(), p.string());
    }
  }
  return 0;
}

int RunTrain(const TrainOptions& o, const GlobalOptions& g, RunManifest& manifest) {
  TrainConfig cfg;
  if (!o.config.empty()) {
    cfg = ParseTrainConfig(ReadFile(o.config));
    manifest.AddInput(o.config);
  }
  if (g.seed_given || o.config.empty()) cfg.seed = g.seed;
  const EmbeddingStore store = LoadStore(o.embeddings);
  manifest.AddInput(o.embeddings);
  std::vector<PairInstance> pairs;
  for (const std::string& path : o.pairs) {
    auto more = LoadPairs(path);
    manifest.AddInput(path);
    pairs.insert(pairs.end(), more.begin(), more.end());
  }
  std::optional<HeadModel> init;
  if (!o.init.empty()) {
    init = LoadModel(o.init, store.dim());
    manifest.AddInput(o.init);
  }
  spdlog::info("training on {} pairs (n = {}, lr = {}, epochs = {})", pairs.size(),
               store.dim(), cfg.learning_rate, cfg.epochs);
  TrainResult result = Train(pairs, store, cfg, init);
  for (size_t e = 0; e < result.epoch_loss.size(); ++e) {
    spdlog::debug("epoch {}: loss {:.6f}", e + 1, result.epoch_loss[e]);
  }
  auto& prov = result.model.provenance();
  prov["tool_version"] = SENSE_ALIGN_VERSION;
  prov["stage"] = init ? "continued" : "from-scratch";
  for (size_t i = 0; i < manifest.inputs().size(); ++i) {
    prov[fmt::format("input_{}", i)] = manifest.inputs()[i].second;
  }
  SaveModel(result.model, o.out);
  manifest.WriteFor(o.out);
  return 0;
}

int RunWsd(const WsdOptions& o, const GlobalOptions& g, RunManifest& manifest) {
  const auto instances = LoadWsdInstances(o.test);
  manifest.AddInput(o.test);
  std::vector<WsdPrediction> preds;
  if (o.mfs) {
    if (o.train_counts.empty()) throw UsageError("--mfs needs --train-counts");
    const SenseCounts counts = ParseSenseCounts(ReadFile(o.train_counts), o.train_counts);
    manifest.AddInput(o.train_counts);
    for (const WsdInstance& inst : instances) {
      preds.push_back({inst.id, MostFrequentSense(counts, inst), {}});
    }
  } else {
    if (o.model.empty() || o.embeddings.empty()) {
      throw UsageError("wsd needs --model and --embeddings (or --mfs)");
    }
    const EmbeddingStore store = LoadStore(o.embeddings);
    const HeadModel model = LoadModel(o.model, store.dim());
    manifest.AddInput(o.model);
    manifest.AddInput(o.embeddings);
    preds = WsdPredictAll(model, store, instances, g.threads);
  }
  WriteFile(o.out, SerializePredictions(preds));
  manifest.WriteFor(o.out);
  spdlog::info("wrote {} predictions", preds.size());
  return 0;
}

int RunEval(const EvalOptions& o, RunManifest& manifest) {
  const auto instances = LoadWsdInstances(o.test);
  const auto preds = ParsePredictions(ReadFile(o.preds), o.preds);
  manifest.AddInput(o.test);
  manifest.AddInput(o.preds);
  std::optional<SenseCounts> counts;
  if (!o.train_counts.empty()) {
    counts = ParseSenseCounts(ReadFile(o.train_counts), o.train_counts);
    manifest.AddInput(o.train_counts);
  }
  const EvalReport report = Score(preds, instances, counts ? &*counts : nullptr,
                                  ShotBucketing(o.buckets));
  const std::string json = ReportToJson(report);
  if (o.out.empty()) {
    std::cout << json;
  } else {
    WriteFile(o.out, json);
    manifest.WriteFor(o.out);
  }
  return 0;
}

int RunJudge(const JudgeOptions& o, RunManifest& manifest) {
  const auto links = LoadLinks(o.links);
  const auto judgments = ParseJudgments(ReadFile(o.judgments), o.judgments);
  manifest.AddInput(o.links);
  manifest.AddInput(o.judgments);
  const std::string json = AccuracyToJson(ScoreAlignmentJudgments(links, judgments));
  if (o.out.empty()) {
    std::cout << json;
  } else {
    WriteFile(o.out, json);
    manifest.WriteFor(o.out);
  }
  return 0;
}

void ConfigureLogging(const std::string& flag_level) {
  auto logger = spdlog::stderr_color_mt("sense-align");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  std::string level = flag_level;
  if (const char* env = std::getenv("SENSE_ALIGN_LOG"); env && *env) level = env;
  const auto parsed = spdlog::level::from_str(level);
  if (parsed == spdlog::level::off && level != "off") {
    throw UsageError("unknown log level '" + level + "'");
  }
  spdlog::set_level(parsed);
}

int Main(int argc, char** argv) {
  CLI::App app{"Align word-sense glosses across inventories, generate "
               "equivalence pairs, train the head, and evaluate WSD."};
  app.set_version_flag("--version", SENSE_ALIGN_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--log-level", g.log_level,
                 "trace|debug|info|warn|err|critical|off (SENSE_ALIGN_LOG overrides)")
      ->capture_default_str();

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Validate an inventory and report statistics");
  c_ingest->add_option("--inventory", ingest.inventory)->required()->check(CLI::ExistingFile);
  c_ingest->add_option("--name", ingest.name, "Inventory id (default: file stem)");
  c_ingest->add_flag("--lenient", ingest.lenient, "Map unknown POS tags to 'other'");
  c_ingest->add_flag("--stats", ingest.stats, "Print the statistics row");
  c_ingest->add_option("--out", ingest.out, "Write the normalized inventory");

  EmbedOptions embed;
  auto* c_embed = app.add_subcommand("embed-baseline",
                                     "Hashed bag-of-words vectors for glosses and examples");
  c_embed->add_option("--inventory", embed.inventories)->required()->check(CLI::ExistingFile);
  c_embed->add_option("--name", embed.names, "Inventory ids, one per --inventory");
  c_embed->add_option("--test", embed.test, "Also embed WSD test contexts (x: keys)")
      ->check(CLI::ExistingFile);
  c_embed->add_option("--dim", embed.dim)->capture_default_str()->check(CLI::Range(8u, 1u << 20));
  c_embed->add_option("--out", embed.out)->required();

  AlignCliOptions align;
  auto* c_align = app.add_subcommand("align", "Align the glosses of two inventories");
  c_align->add_option("--inv-a", align.inv_a)->required()->check(CLI::ExistingFile);
  c_align->add_option("--inv-b", align.inv_b)->required()->check(CLI::ExistingFile);
  c_align->add_option("--name-a", align.name_a);
  c_align->add_option("--name-b", align.name_b);
  c_align->add_option("--embeddings", align.embeddings)->required()->check(CLI::ExistingFile);
  c_align->add_option("--threshold", align.threshold)->capture_default_str()->check(CLI::Range(-1.0, 1.0));
  c_align->add_option("--out", align.out)->required();

  PairsOptions pairs;
  auto* c_pairs = app.add_subcommand("pairs", "Generate labeled training pairs");
  c_pairs->add_option("--mode", pairs.mode)->required()->check(
      CLI::IsMember({"cross", "within", "context"}));
  c_pairs->add_option("--inv", pairs.inventories)->required()->check(CLI::ExistingFile);
  c_pairs->add_option("--name", pairs.names, "Inventory ids, one per --inv");
  c_pairs->add_option("--links", pairs.links)->check(CLI::ExistingFile);
  c_pairs->add_option("--out", pairs.out)->required();
  c_pairs->add_flag("--stats", pairs.stats, "Print positive/negative counts");
  c_pairs->add_option("--split", pairs.split, "train,dev ratios; writes .train/.dev/.test files")
      ->delimiter(',');

  TrainOptions train;
  auto* c_train = app.add_subcommand("train", "Train the equivalence head");
  c_train->add_option("--pairs", train.pairs)->required()->delimiter(',')->check(CLI::ExistingFile);
  c_train->add_option("--embeddings", train.embeddings)->required()->check(CLI::ExistingFile);
  c_train->add_option("--config", train.config, "JSON training config")->check(CLI::ExistingFile);
  c_train->add_option("--init", train.init, "Continue from this model")->check(CLI::ExistingFile);
  c_train->add_option("--out", train.out)->required();

  WsdOptions wsd;
  auto* c_wsd = app.add_subcommand("wsd", "Predict senses for a test file");
  c_wsd->add_option("--model", wsd.model)->check(CLI::ExistingFile);
  c_wsd->add_option("--embeddings", wsd.embeddings)->check(CLI::ExistingFile);
  c_wsd->add_option("--test", wsd.test)->required()->check(CLI::ExistingFile);
  c_wsd->add_option("--out", wsd.out)->required();
  c_wsd->add_flag("--mfs", wsd.mfs, "Most-frequent-sense baseline instead of a model");
  c_wsd->add_option("--train-counts", wsd.train_counts)->check(CLI::ExistingFile);

  EvalOptions eval;
  auto* c_eval = app.add_subcommand("eval", "Score predictions");
  c_eval->add_option("--preds", eval.preds)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--test", eval.test)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--train-counts", eval.train_counts)->check(CLI::ExistingFile);
  c_eval->add_option("--buckets", eval.buckets, "Inclusive bucket upper bounds")
      ->delimiter(',')
      ->capture_default_str();
  c_eval->add_option("--out", eval.out, "Write the report here instead of stdout");

  JudgeOptions judge;
  auto* c_judge = app.add_subcommand("judge", "Alignment accuracy from human judgments");
  c_judge->add_option("--links", judge.links)->required()->check(CLI::ExistingFile);
  c_judge->add_option("--judgments", judge.judgments)->required()->check(CLI::ExistingFile);
  c_judge->add_option("--out", judge.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    g.seed_given = seed_opt->count() > 0;
    ConfigureLogging(g.log_level);
    omp_set_num_threads(g.threads);
    CLI::App* cmd = app.get_subcommands().front();
    RunManifest manifest(cmd->get_name(), std::vector<std::string>(argv + 1, argv + argc),
                         g.seed);
    if (cmd == c_ingest) return RunIngest(ingest, manifest);
    if (cmd == c_embed) return RunEmbed(embed, g, manifest);
    if (cmd == c_align) return RunAlign(align, g, manifest);
    if (cmd == c_pairs) return RunPairs(pairs, g, manifest);
    if (cmd == c_train) return RunTrain(train, g, manifest);
    if (cmd == c_wsd) return RunWsd(wsd, g, manifest);
    if (cmd == c_eval) return RunEval(eval, manifest);
    if (cmd == c_judge) return RunJudge(judge, manifest);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace
}  // namespace sense_align::tools

int main(int argc, char** argv) { return sense_align::tools::Main(argc, argv); }
