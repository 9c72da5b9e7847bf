// Command-line front end: prepare, train, eval, extract, inspect-tags and
// bench subcommands over the span extraction library. Every run writes one
// manifest recording its inputs, configuration and outputs.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relspan/checkpoint.hpp"
#include "relspan/config.hpp"
#include "relspan/corpus.hpp"
#include "relspan/evaluator.hpp"
#include "relspan/tagset.hpp"
#include "relspan/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace relspan;

namespace {

// FNV-1a over the file bytes; platform-independent corpus fingerprint.
std::string file_fingerprint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::uint64_t h = 14695981039346656037ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  char out[32];
  std::snprintf(out, sizeof out, "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return out;
}

struct ManifestWriter {
  std::string subcommand;
  fs::path path;
  json config = json::object();
  json fingerprints = json::object();
  std::vector<std::string> artifacts;
  std::uint64_t seed = 0;
  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();

  void fingerprint(const fs::path& corpus) {
    fingerprints[corpus.string()] = file_fingerprint(corpus);
  }

  void write() const {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count();
    const json j = {
        {"subcommand", subcommand}, {"config", config},
        {"seed", seed},             {"corpus_fingerprints", fingerprints},
        {"artifacts", artifacts},   {"duration_seconds", secs},
    };
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
  }
};

// Rows padded per column so every row aligns under the token row.
void print_aligned(const std::vector<std::vector<std::string>>& rows,
                   std::ostream& out) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c] << std::string(width[c] - row[c].size(), ' ');
      if (c + 1 < row.size()) out << "  ";
    }
    out << '\n';
  }
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// ---------------------------------------------------------------- prepare

int run_prepare(const std::string& input, const std::string& format,
                const std::string& out_dir, std::string manifest_path) {
  ManifestWriter mw;
  mw.subcommand = "prepare";
  mw.path = manifest_path.empty() ? fs::path(out_dir) / "run_manifest.json"
                                  : fs::path(manifest_path);
  mw.config = {{"input", input}, {"format", format}, {"out", out_dir}};
  mw.fingerprint(input);

  LoadStats stats;
  const auto data = load_dataset(input, parse_dataset_format(format), &stats);
  const Vocabularies vocabs = build_vocabularies(data);

  fs::create_directories(out_dir);
  const fs::path corpus = fs::path(out_dir) / "corpus.jsonl";
  save_dataset(corpus, data);
  vocabs.save(out_dir);

  std::size_t triplets = 0;
  std::map<std::string, int> categories;
  for (const auto& s : data) {
    triplets += s.triplets.size();
    if (!s.triplets.empty())
      ++categories[overlap_category_name(categorize_sentence(s))];
  }
  std::cout << "sentences = " << data.size() << '\n'
            << "triplets = " << triplets << '\n';
  for (const auto& [name, n] : categories)
    std::cout << "category." << name << " = " << n << '\n';
  std::cout << "duplicate_triplets_dropped = "
            << stats.duplicate_triplets_dropped << '\n'
            << "unresolved_mentions_dropped = "
            << stats.unresolved_mentions_dropped << '\n'
            << "entity_types = " << vocabs.tags.entity_types.size() << '\n'
            << "relation_types = " << vocabs.tags.relation_types.size()
            << '\n';

  mw.artifacts = {corpus.string()};
  mw.write();
  return 0;
}

// ------------------------------------------------------------------ train

int run_train(const std::string& config_path, const std::string& train_path,
              const std::string& dev_path, const std::string& out_dir,
              int seeds_flag, std::string manifest_path) {
  TrainSettings settings = load_train_settings(config_path);
  if (seeds_flag > 0) settings.seeds = seeds_flag;

  const auto train_data = load_dataset(train_path, DatasetFormat::kNative);
  const auto dev_data = load_dataset(dev_path, DatasetFormat::kNative);
  const Vocabularies vocabs =
      build_vocabularies(train_data, settings.min_token_freq);

  ManifestWriter mw;
  mw.subcommand = "train";
  mw.path = manifest_path.empty() ? fs::path(out_dir) / "run_manifest.json"
                                  : fs::path(manifest_path);
  mw.config = {{"train", train_config_to_json(settings.train)},
               {"model", model_config_to_json(settings.model)},
               {"seeds", settings.seeds},
               {"pretrained_vectors", settings.pretrained_vectors},
               {"min_token_freq", settings.min_token_freq}};
  mw.seed = settings.train.seed;
  mw.fingerprint(train_path);
  mw.fingerprint(dev_path);

  std::vector<double> best_f1;
  for (int run = 0; run < settings.seeds; ++run) {
    TrainConfig cfg = settings.train;
    cfg.seed = settings.train.seed + static_cast<std::uint64_t>(run);
    const fs::path ckpt = settings.seeds == 1
                              ? fs::path(out_dir)
                              : fs::path(out_dir) /
                                    ("seed_" + std::to_string(cfg.seed));

    JointModel model(settings.model, vocabs, cfg.seed);
    if (!settings.pretrained_vectors.empty()) {
      const std::size_t n = model.encoder().load_pretrained_vectors(
          settings.pretrained_vectors, model.vocabs());
      std::cout << "pretrained_vectors_loaded = " << n << '\n';
    }
    Trainer trainer(model, cfg);
    trainer.epoch_callback = [&](int epoch, double loss, double f1) {
      std::cout << "seed " << cfg.seed << " epoch " << epoch << " loss "
                << fixed3(loss) << " dev_f1 " << fixed3(f1) << std::endl;
    };
    const FitResult r = trainer.fit(train_data, dev_data, ckpt);
    std::cout << "seed " << cfg.seed << " best_dev_f1 = " << fixed3(r.best_dev_f1)
              << " (epoch " << r.best_epoch << ", " << r.epochs_run
              << " epochs run)\n";
    best_f1.push_back(r.best_dev_f1);
    mw.artifacts.push_back(ckpt.string());
  }

  double mean = 0.0;
  for (double v : best_f1) mean += v;
  mean /= static_cast<double>(best_f1.size());
  double var = 0.0;
  for (double v : best_f1) var += (v - mean) * (v - mean);
  const double stdev =
      best_f1.size() > 1
          ? std::sqrt(var / static_cast<double>(best_f1.size() - 1))
          : 0.0;
  std::cout << "dev_f1_mean = " << fixed3(mean) << '\n'
            << "dev_f1_stdev = " << fixed3(stdev) << '\n';

  mw.write();
  return 0;
}

// ------------------------------------------------------------------- eval

void print_report_lines(const std::string& prefix, const ScoreReport& r) {
  std::cout << prefix << "precision = " << fixed3(r.precision) << '\n'
            << prefix << "recall = " << fixed3(r.recall) << '\n'
            << prefix << "f1 = " << fixed3(r.f1) << '\n'
            << prefix << "gold = " << r.gold << '\n'
            << prefix << "predicted = " << r.predicted << '\n'
            << prefix << "correct = " << r.correct << '\n';
}

std::vector<std::string> report_row(const std::string& name,
                                    const ScoreReport& r) {
  return {name,
          fixed3(r.precision),
          fixed3(r.recall),
          fixed3(r.f1),
          std::to_string(r.gold),
          std::to_string(r.predicted),
          std::to_string(r.correct)};
}

int run_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& by, std::string manifest_path) {
  ManifestWriter mw;
  mw.subcommand = "eval";
  mw.path =
      manifest_path.empty() ? fs::path("run_manifest.json")
                              : fs::path(manifest_path);
  mw.config = {{"gold", gold_path}, {"pred", pred_path}, {"by", by}};
  mw.fingerprint(gold_path);
  mw.fingerprint(pred_path);

  const auto gold = load_dataset(gold_path, DatasetFormat::kNative);
  const auto pred = load_dataset(pred_path, DatasetFormat::kNative);
  const ScoreReport overall = score(gold, pred);

  std::cout << "# exact span match; duplicate predictions counted once\n";
  print_report_lines("", overall);

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"", "P", "R", "F1", "gold", "pred", "correct"});
  rows.push_back(report_row("overall", overall));
  if (by == "category") {
    for (const auto& [cat, r] : score_by_category(gold, pred)) {
      const std::string name = overlap_category_name(cat);
      print_report_lines(name + ".", r);
      rows.push_back(report_row(name, r));
    }
  } else if (by == "count") {
    for (const auto& [bucket, r] : score_by_count(gold, pred)) {
      const std::string name = "triplets_" + bucket_label(bucket);
      print_report_lines(name + ".", r);
      rows.push_back(report_row(name, r));
    }
  }
  std::cout << '\n';
  print_aligned(rows, std::cout);

  mw.write();
  return 0;
}

// ---------------------------------------------------------------- extract

int run_extract(const std::string& model_dir, const std::string& input,
                const std::string& out_path, std::string manifest_path) {
  ManifestWriter mw;
  mw.subcommand = "extract";
  mw.path = manifest_path.empty() ? fs::path(out_path + ".manifest.json")
                                  : fs::path(manifest_path);
  mw.config = {{"model", model_dir}, {"input", input}, {"out", out_path}};
  mw.fingerprint(input);

  const LoadedCheckpoint ckpt = load_checkpoint(model_dir);
  mw.seed = ckpt.meta.train.seed;
  const auto data = load_dataset(input, DatasetFormat::kNative);
  const auto pred = predict_corpus(*ckpt.model, data);
  if (fs::path(out_path).has_parent_path())
    fs::create_directories(fs::path(out_path).parent_path());
  save_dataset(out_path, pred);

  std::size_t triplets = 0;
  for (const auto& s : pred) triplets += s.triplets.size();
  std::cout << "sentences = " << pred.size() << '\n'
            << "predicted_triplets = " << triplets << '\n';

  mw.artifacts = {out_path};
  mw.write();
  return 0;
}

// ------------------------------------------------------------ inspect-tags

std::vector<std::string> tag_row(const std::string& label,
                                 const std::vector<int>& tags,
                                 const StringVocab& names) {
  std::vector<std::string> row = {label};
  for (int t : tags) row.push_back(names.label(t));
  return row;
}

int run_inspect(const std::string& input, int sentence_id,
                std::string manifest_path) {
  ManifestWriter mw;
  mw.subcommand = "inspect-tags";
  mw.path =
      manifest_path.empty() ? fs::path("run_manifest.json")
                              : fs::path(manifest_path);
  mw.config = {{"input", input}, {"sentence_id", sentence_id}};
  mw.fingerprint(input);

  const auto data = load_dataset(input, DatasetFormat::kNative);
  if (sentence_id < 0 || sentence_id >= static_cast<int>(data.size())) {
    throw std::runtime_error("sentence id " + std::to_string(sentence_id) +
                             " out of range; corpus has " +
                             std::to_string(data.size()) + " sentences");
  }
  const AnnotatedSentence& s = data[sentence_id];
  const Vocabularies vocabs = build_vocabularies(data);

  std::cout << "sentence " << sentence_id << ": " << s.triplets.size()
            << " triplets";
  if (!s.triplets.empty())
    std::cout << " (" << overlap_category_name(categorize_sentence(s)) << ")";
  std::cout << '\n';

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> tokens = {"tokens"};
  tokens.insert(tokens.end(), s.sentence.tokens.begin(),
                s.sentence.tokens.end());
  rows.push_back(tokens);
  const BoundaryTagging he = encode_he(s, vocabs.tags);
  rows.push_back(tag_row("HE start", he.start_tags, vocabs.tags.entity_types));
  rows.push_back(tag_row("HE end", he.end_tags, vocabs.tags.entity_types));
  print_aligned(rows, std::cout);

  for (const EntitySpan& head : head_spans(s)) {
    std::cout << "head [" << head.start << "," << head.end << "] ";
    for (int i = head.start; i <= head.end; ++i) {
      if (i > head.start) std::cout << ' ';
      std::cout << s.sentence.tokens[i];
    }
    std::cout << ":\n";
    const BoundaryTagging ter = encode_ter(s, head, vocabs.tags);
    std::vector<std::vector<std::string>> trows;
    trows.push_back(tokens);
    trows.push_back(
        tag_row("TER start", ter.start_tags, vocabs.tags.relation_types));
    trows.push_back(
        tag_row("TER end", ter.end_tags, vocabs.tags.relation_types));
    print_aligned(trows, std::cout);
  }

  mw.write();
  return 0;
}

// ------------------------------------------------------------------ bench

int run_bench(const std::string& model_dir, const std::string& input,
              int batch_size, std::string manifest_path) {
  ManifestWriter mw;
  mw.subcommand = "bench";
  mw.path =
      manifest_path.empty() ? fs::path("run_manifest.json")
                              : fs::path(manifest_path);
  mw.config = {{"model", model_dir},
               {"input", input},
               {"batch_size", batch_size}};
  mw.fingerprint(input);

  const LoadedCheckpoint ckpt = load_checkpoint(model_dir);
  const auto data = load_dataset(input, DatasetFormat::kNative);
  const double bps = measure_throughput(*ckpt.model, data, batch_size);
  std::cout << "sentences = " << data.size() << '\n'
            << "batch_size = " << batch_size << '\n'
            << "batches_per_second = " << fixed3(bps) << '\n';

  mw.write();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint span-based entity and relation extraction"};
  app.require_subcommand(1);

  std::string input, format = "native", out, config, train_path, dev_path;
  std::string gold, pred, by, model_dir, manifest;
  int sentence_id = 0, seeds = 0, batch_size = 32;

  CLI::App* prepare = app.add_subcommand("prepare", "Convert a dataset");
  prepare->add_option("--input", input, "source dataset")->required();
  prepare->add_option("--format", format, "native, nyt or webnlg")
      ->check(CLI::IsMember({"native", "nyt", "webnlg"}));
  prepare->add_option("--out", out, "output directory")->required();
  prepare->add_option("--manifest", manifest, "manifest path override");

  CLI::App* train = app.add_subcommand("train", "Train a model");
  train->add_option("--config", config, "key = value settings file")
      ->required();
  train->add_option("--train", train_path, "training corpus")->required();
  train->add_option("--dev", dev_path, "development corpus")->required();
  train->add_option("--out", out, "checkpoint directory")->required();
  train->add_option("--seeds", seeds, "independent runs (overrides config)")
      ->check(CLI::Range(1, 1'000'000));
  train->add_option("--manifest", manifest, "manifest path override");

  CLI::App* eval = app.add_subcommand("eval", "Score predictions");
  eval->add_option("--gold", gold, "gold corpus")->required();
  eval->add_option("--pred", pred, "predictions")->required();
  eval->add_option("--by", by, "breakdown: category or count")
      ->check(CLI::IsMember({"category", "count"}));
  eval->add_option("--manifest", manifest, "manifest path override");

  CLI::App* extract = app.add_subcommand("extract", "Run extraction");
  extract->add_option("--model", model_dir, "checkpoint directory")
      ->required();
  extract->add_option("--input", input, "corpus to tag")->required();
  extract->add_option("--out", out, "predictions file")->required();
  extract->add_option("--manifest", manifest, "manifest path override");

  CLI::App* inspect = app.add_subcommand(
      "inspect-tags", "Show gold boundary taggings for one sentence");
  inspect->add_option("--input", input, "prepared corpus")->required();
  inspect->add_option("--sentence-id", sentence_id, "record index")
      ->required();
  inspect->add_option("--manifest", manifest, "manifest path override");

  CLI::App* bench = app.add_subcommand("bench", "Measure throughput");
  bench->add_option("--model", model_dir, "checkpoint directory")->required();
  bench->add_option("--input", input, "corpus")->required();
  bench->add_option("--batch-size", batch_size, "sentences per batch");
  bench->add_option("--manifest", manifest, "manifest path override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (prepare->parsed()) return run_prepare(input, format, out, manifest);
    if (train->parsed())
      return run_train(config, train_path, dev_path, out, seeds, manifest);
    if (eval->parsed()) return run_eval(gold, pred, by, manifest);
    if (extract->parsed())
      return run_extract(model_dir, input, out, manifest);
    if (inspect->parsed()) return run_inspect(input, sentence_id, manifest);
    if (bench->parsed())
      return run_bench(model_dir, input, batch_size, manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
