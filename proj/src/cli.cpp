// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include "datascore/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "datascore/analysis.hpp"
#include "datascore/corpus.hpp"
#include "datascore/error.hpp"
#include "datascore/manifest.hpp"
#include "datascore/score_io.hpp"
#include "datascore/scoring.hpp"
#include "datascore/similarity.hpp"
#include "datascore/wood.hpp"

namespace datascore {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Writes text to path, or to out when path is empty. Returns true when a file
// was written.
bool emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return false;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError(path + ": cannot write output");
  f << text;
  f.close();
  if (!f) throw ValidationError(path + ": write failed");
  return true;
}

void emit_with_manifest(const std::string& path, const std::string& text,
                        const RunManifest& manifest, std::ostream& out) {
  if (emit(path, text, out)) write_manifest(manifest, path);
}

std::string dump_json(json j, const RunManifest& manifest) {
  j["manifest_digest"] = manifest.digest();
  return j.dump(2) + "\n";
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

// ---------------------------------------------------------------------------
// Shared flag groups.

struct CorpusFlags {
  std::string train;
  std::string test;
  std::string backend;
  std::string embeddings_train;
  std::string embeddings_test;
  double a = 1.0;
  int chunks = 3;
  std::string normalization = "minmax";
  std::optional<std::size_t> threads;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--train", train, "Training corpus (JSONL)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd.add_option("--test", test, "Test corpus (JSONL)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd.add_option("--backend", backend, "Similarity backend")
        ->required()
        ->check(CLI::IsMember({"jaccard", "tfidf", "tfidf-cosine", "embed",
                               "embed-cosine"}));
    cmd.add_option("--embeddings-train", embeddings_train,
                   "Vector file for training samples (embed backend)")
        ->check(CLI::ExistingFile);
    cmd.add_option("--embeddings-test", embeddings_test,
                   "Vector file for test samples (embed backend)")
        ->check(CLI::ExistingFile);
    cmd.add_option("-a,--scale", a, "Numerator a of p = a / top-b sum")
        ->capture_default_str();
    cmd.add_option("--chunks", chunks, "Number of sample chunks")
        ->capture_default_str();
    cmd.add_option("--normalization", normalization, "Hardness normalisation")
        ->check(CLI::IsMember({"minmax", "affine", "rank"}))
        ->capture_default_str();
    cmd.add_option("--threads", threads,
                   "Worker threads (default: $DATASCORE_THREADS or all cores)");
  }

  BackendKind kind() const { return parse_backend_kind(backend); }

  void validate() const {
    const bool embed = kind() == BackendKind::embed_cosine;
    const bool have_emb = !embeddings_train.empty() || !embeddings_test.empty();
    if (embed && (embeddings_train.empty() || embeddings_test.empty())) {
      throw ValidationError(
          "--embeddings-train and --embeddings-test are required for the embed "
          "backend");
    }
    if (!embed && have_emb) {
      throw ValidationError("embedding files are only used by the embed backend");
    }
  }

  std::unique_ptr<SimilarityBackend> build(const Corpus& train_corpus,
                                           const Corpus& test_corpus) const {
    switch (kind()) {
      case BackendKind::jaccard:
        return make_jaccard();
      case BackendKind::tfidf_cosine:
        return fit_tfidf(train_corpus, test_corpus);
      case BackendKind::embed_cosine:
        return make_embed_cosine(
            std::make_shared<const EmbeddingTable>(load_embeddings(embeddings_train)),
            std::make_shared<const EmbeddingTable>(load_embeddings(embeddings_test)));
    }
    throw ValidationError("unknown backend");
  }

  RunManifest manifest(std::string command) const {
    RunManifest m;
    m.command = std::move(command);
    m.add_input("train", train);
    m.add_input("test", test);
    if (!embeddings_train.empty()) m.add_input("embeddings-train", embeddings_train);
    if (!embeddings_test.empty()) m.add_input("embeddings-test", embeddings_test);
    m.backend = std::string(to_string(kind()));
    m.a = a;
    m.chunk_count = chunks;
    m.normalization = normalization;
    return m;
  }
};

std::string model_name_for(const std::string& path) {
  return fs::path(path).stem().string();
}

std::unordered_map<std::string, std::string> gold_labels_from(const std::string& test_path) {
  std::unordered_map<std::string, std::string> gold;
  if (test_path.empty()) return gold;
  const Corpus test = load_corpus(test_path, Role::test);
  for (const Sample& s : test.samples()) {
    if (s.label) gold.emplace(s.id, *s.label);
  }
  return gold;
}

std::vector<std::string> ids_of(std::span<const SampleScore> scores) {
  std::vector<std::string> ids;
  ids.reserve(scores.size());
  for (const auto& s : scores) ids.push_back(s.id);
  return ids;
}

ScoreProvenance provenance_of(const std::string& scores_path) {
  ScoreProvenance p;
  if (auto m = read_manifest_for(scores_path)) {
    p.backend = m->backend;
    if (const auto* train = m->input("train")) p.train_digest = train->sha256;
    p.b = m->b;
  }
  return p;
}

json chunk_json(const ChunkStats& st) {
  return {{"chunk", st.chunk_index},
          {"size", st.size},
          {"weight", st.weight},
          {"n_correct", st.n_correct},
          {"rate", st.correct_rate()},
          {"mean_sts", st.mean_sts},
          {"error_rate", st.error_rate},
          {"mean_conf_correct", optional_json(st.mean_conf_correct)},
          {"mean_conf_incorrect", optional_json(st.mean_conf_incorrect)}};
}

std::string sweep_file_name(const std::string& prefix, double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "_b%g.csv", b * 100.0);
  return prefix + buf;
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns a body run after parsing succeeds.

using Runner = std::function<void(std::ostream& out, std::ostream& err)>;

Runner add_score(CLI::App& app) {
  auto cmd = app.add_subcommand("score", "Score test samples by train similarity");
  auto flags = std::make_shared<CorpusFlags>();
  auto b = std::make_shared<double>(0.1);
  auto out_path = std::make_shared<std::string>();
  flags->add_to(*cmd);
  cmd->add_option("-b,--top-fraction", *b, "Fraction of train samples in the top set")
      ->capture_default_str();
  cmd->add_option("--out", *out_path, "Scores CSV (default: stdout)");
  return [cmd, flags, b, out_path](std::ostream& out, std::ostream& err) {
    if (!cmd->parsed()) return;
    flags->validate();
    const Corpus train = load_corpus(flags->train, Role::train);
    const Corpus test = load_corpus(flags->test, Role::test);
    const auto backend = flags->build(train, test);
    ScoringConfig cfg{flags->a, *b, flags->chunks,
                      parse_normalization(flags->normalization)};
    const auto scores = score_samples(train, test, *backend, cfg, flags->threads);
    if (auto absent = count_absent_p_raw(scores)) {
      err << "warning: " << absent
          << " sample(s) have zero top-b similarity; p_raw left empty\n";
    }
    std::ostringstream csv;
    write_scores_csv(csv, scores);
    auto manifest = flags->manifest("score");
    manifest.b = *b;
    emit_with_manifest(*out_path, csv.str(), manifest, out);
  };
}

Runner add_sweep(CLI::App& app) {
  auto cmd = app.add_subcommand("sweep", "Score test samples for several top-b fractions");
  auto flags = std::make_shared<CorpusFlags>();
  auto b_values = std::make_shared<std::vector<double>>(kDefaultSweep.begin(),
                                                        kDefaultSweep.end());
  auto prefix = std::make_shared<std::string>();
  flags->add_to(*cmd);
  cmd->add_option("--b-values", *b_values, "Fractions to evaluate")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--out-prefix", *prefix, "Writes <prefix>_b<percent>.csv")
      ->required();
  return [cmd, flags, b_values, prefix](std::ostream& out, std::ostream& err) {
    if (!cmd->parsed()) return;
    flags->validate();
    const Corpus train = load_corpus(flags->train, Role::train);
    const Corpus test = load_corpus(flags->test, Role::test);
    const auto backend = flags->build(train, test);
    const auto entries =
        sweep_b(train, test, *backend, flags->a, *b_values, flags->chunks,
                parse_normalization(flags->normalization), flags->threads);
    for (const auto& entry : entries) {
      if (auto absent = count_absent_p_raw(entry.scores)) {
        err << "warning: b=" << entry.b << ": " << absent
            << " sample(s) have zero top-b similarity; p_raw left empty\n";
      }
      std::ostringstream csv;
      write_scores_csv(csv, entry.scores);
      auto manifest = flags->manifest("sweep");
      manifest.b = entry.b;
      const auto path = sweep_file_name(*prefix, entry.b);
      emit(path, csv.str(), out);
      write_manifest(manifest, path);
      out << path << '\n';
    }
  };
}

Runner add_wood(CLI::App& app) {
  auto cmd = app.add_subcommand("wood", "Compute WOOD scores for model predictions");
  struct Flags {
    std::string scores;
    std::vector<std::string> predictions;
    std::vector<std::string> names;
    std::string test;
    double reward = 1.0;
    double penalty = -1.0;
    std::string weights = "chunk";
    std::optional<int> chunks;
    std::string out;
    std::string chunk_csv;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--scores", f->scores, "Scores CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--predictions", f->predictions, "Prediction file(s) (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--model-name", f->names, "Model name per predictions file");
  cmd->add_option("--test", f->test, "Test corpus supplying gold labels")
      ->check(CLI::ExistingFile);
  cmd->add_option("--reward", f->reward, "Reward for a correct answer")->capture_default_str();
  cmd->add_option("--penalty", f->penalty, "Score for an incorrect answer")
      ->capture_default_str();
  cmd->add_option("--weights", f->weights, "Weight scheme")
      ->check(CLI::IsMember({"chunk", "chunk-integer", "p", "p-raw"}))
      ->capture_default_str();
  cmd->add_option("--chunks", f->chunks, "Re-chunk the scores before weighting");
  cmd->add_option("--out", f->out, "WOOD report JSON (default: stdout)");
  cmd->add_option("--chunk-csv", f->chunk_csv, "Per-chunk table CSV");
  return [cmd, f](std::ostream& out, std::ostream&) {
    if (!cmd->parsed()) return;
    if (!f->names.empty() && f->names.size() != f->predictions.size()) {
      throw ValidationError("--model-name must be given once per --predictions file");
    }
    auto scores = read_scores_csv(f->scores);
    if (f->chunks) scores = rank_and_chunk(std::move(scores), *f->chunks);
    const EvalConfig cfg{f->reward, f->penalty, parse_weight_scheme(f->weights)};
    cfg.validate();
    const auto gold = gold_labels_from(f->test);
    const auto ids = ids_of(scores);

    std::vector<WoodResult> results;
    for (std::size_t i = 0; i < f->predictions.size(); ++i) {
      const auto preds = load_predictions(f->predictions[i], ids, gold);
      const std::string name =
          f->names.empty() ? model_name_for(f->predictions[i]) : f->names[i];
      results.push_back(wood_score(scores, preds, cfg, name));
    }

    RunManifest manifest;
    manifest.command = "wood";
    manifest.add_input("scores", f->scores);
    for (const auto& p : f->predictions) manifest.add_input("predictions", p);
    if (!f->test.empty()) manifest.add_input("test", f->test);
    manifest.chunk_count = results.front().chunk_count;
    manifest.options = {{"reward", format_real(cfg.reward_correct)},
                        {"penalty", format_real(cfg.penalty_incorrect)},
                        {"weights", std::string(to_string(cfg.weight_scheme))}};

    json report;
    report["weight_scheme"] = to_string(cfg.weight_scheme);
    report["reward_correct"] = cfg.reward_correct;
    report["penalty_incorrect"] = cfg.penalty_incorrect;
    report["models"] = json::array();
    for (const auto& r : results) {
      json model;
      model["model_name"] = r.model_name;
      model["W"] = r.W;
      model["W_rescaled"] = r.W_rescaled;
      model["accuracy"] = r.accuracy;
      json weights = json::array();
      json chunks = json::array();
      for (const auto& st : r.per_chunk) {
        weights.push_back(st.weight);
        chunks.push_back({{"chunk", st.chunk_index},
                          {"size", st.size},
                          {"weight", st.weight},
                          {"n_correct", st.n_correct},
                          {"rate", st.correct_rate()}});
      }
      model["weights_used"] = {{"scheme", to_string(r.weight_scheme)},
                               {"chunk_count", r.chunk_count},
                               {"per_chunk_weight", weights}};
      model["chunks"] = chunks;
      report["models"].push_back(model);
    }
    if (results.size() >= 2) {
      const auto cmp = compare_rankings(results);
      report["comparison"] = {{"by_accuracy", cmp.by_accuracy},
                              {"by_wood", cmp.by_wood},
                              {"rank_changes", cmp.rank_changes},
                              {"kendall_tau_distance", cmp.kendall_tau_distance}};
    }
    emit_with_manifest(f->out, dump_json(report, manifest), manifest, out);
    if (!f->chunk_csv.empty()) {
      std::ostringstream csv;
      write_wood_chunk_csv(csv, results);
      emit_with_manifest(f->chunk_csv, csv.str(), manifest, out);
    }
  };
}

Runner add_analyze(CLI::App& app) {
  auto cmd = app.add_subcommand("analyze", "Chunk curves, monotonicity and IID/OOD boundary");
  struct Flags {
    std::string scores;
    std::string predictions;
    std::string test;
    std::string ood_scores;
    int chunks = kAnalysisChunks;
    std::string out;
    std::string chunk_csv;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--scores", f->scores, "Scores CSV (the IID side for --ood-scores)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--predictions", f->predictions, "Prediction file (JSONL)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--test", f->test, "Test corpus supplying gold labels")
      ->check(CLI::ExistingFile);
  cmd->add_option("--ood-scores", f->ood_scores, "Scores CSV of an OOD test set")
      ->check(CLI::ExistingFile);
  cmd->add_option("--chunks", f->chunks, "Number of chunks")->capture_default_str();
  cmd->add_option("--out", f->out, "Analysis report JSON (default: stdout)");
  cmd->add_option("--chunk-csv", f->chunk_csv, "Per-chunk rows for plotting");
  return [cmd, f](std::ostream& out, std::ostream&) {
    if (!cmd->parsed()) return;
    if (f->predictions.empty() && f->ood_scores.empty()) {
      throw ValidationError("analyze needs --predictions and/or --ood-scores");
    }
    if (!f->chunk_csv.empty() && f->predictions.empty()) {
      throw ValidationError("--chunk-csv needs --predictions");
    }
    const auto scores = read_scores_csv(f->scores);

    RunManifest manifest;
    manifest.command = "analyze";
    manifest.add_input("scores", f->scores);
    if (!f->predictions.empty()) manifest.add_input("predictions", f->predictions);
    if (!f->test.empty()) manifest.add_input("test", f->test);
    if (!f->ood_scores.empty()) manifest.add_input("ood-scores", f->ood_scores);
    manifest.chunk_count = f->chunks;

    json report;
    report["chunk_count"] = f->chunks;
    std::vector<ChunkStats> curve;
    if (!f->predictions.empty()) {
      const auto preds =
          load_predictions(f->predictions, ids_of(scores), gold_labels_from(f->test));
      curve = chunk_error_curve(scores, preds, f->chunks);
      json chunks = json::array();
      for (const auto& st : curve) chunks.push_back(chunk_json(st));
      report["chunks"] = chunks;

      json mono;
      for (auto field : {ChunkField::error_rate, ChunkField::mean_sts,
                         ChunkField::mean_conf_correct}) {
        std::size_t present = 0;
        for (const auto& st : curve) {
          const bool has = st.size > 0 && (field != ChunkField::mean_conf_correct ||
                                           st.mean_conf_correct.has_value());
          if (has) ++present;
        }
        mono[std::string(to_string(field))] =
            present >= 3 ? json(monotonicity(curve, field)) : json(nullptr);
      }
      report["monotonicity"] = mono;
      const bool all_conf = std::all_of(preds.begin(), preds.end(), [](const auto& p) {
        return p.confidence.has_value();
      });
      report["sts_maxprob_correlation"] =
          all_conf ? json(sts_maxprob_correlation(scores, preds)) : json(nullptr);
    }
    if (!f->ood_scores.empty()) {
      const auto ood = read_scores_csv(f->ood_scores);
      const auto b = iid_ood_boundary(scores, ood, f->chunks, provenance_of(f->scores),
                                      provenance_of(f->ood_scores));
      json chunks = json::array();
      for (const auto& c : b.chunks) {
        chunks.push_back({{"chunk", c.chunk_index},
                          {"iid_mean_sts", c.iid_mean_sts},
                          {"ood_mean_sts", c.ood_mean_sts}});
      }
      report["boundary"] = {{"chunks", chunks},
                            {"iid_mean", b.iid_mean},
                            {"ood_mean", b.ood_mean},
                            {"gap", b.iid_mean - b.ood_mean},
                            {"iid_exceeds", b.iid_exceeds},
                            {"boundary", b.boundary}};
    }
    emit_with_manifest(f->out, dump_json(report, manifest), manifest, out);
    if (!f->chunk_csv.empty()) {
      std::ostringstream csv;
      write_chunk_curve_csv(csv, curve);
      emit_with_manifest(f->chunk_csv, csv.str(), manifest, out);
    }
  };
}

Runner add_testbed(CLI::App& app) {
  auto cmd = app.add_subcommand("testbed", "Export difficulty bins as corpus files");
  struct Flags {
    std::string scores;
    std::string test;
    int bins = kAnalysisChunks;
    std::vector<double> edges;
    std::string prefix;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--scores", f->scores, "Scores CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--test", f->test, "Test corpus whose records are exported")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--bins", f->bins, "Number of equal-width bins")->capture_default_str();
  cmd->add_option("--edges", f->edges, "Explicit increasing bin edges")->delimiter(',');
  cmd->add_option("--prefix", f->prefix, "Writes <prefix>_B<k> per bin")->required();
  return [cmd, f](std::ostream& out, std::ostream&) {
    if (!cmd->parsed()) return;
    const auto scores = read_scores_csv(f->scores);
    const Corpus test = load_corpus(f->test, Role::test);
    if (scores.size() != test.size()) {
      throw ValidationError("scores and test corpus differ in size");
    }
    for (const auto& s : scores) {
      if (!test.find(s.id)) {
        throw ValidationError("scored id '" + s.id + "' not in the test corpus");
      }
    }
    std::optional<std::vector<double>> edges;
    if (!f->edges.empty()) edges = f->edges;
    const auto bins = sts_bins(scores, f->bins, edges);

    RunManifest manifest;
    manifest.command = "testbed";
    manifest.add_input("scores", f->scores);
    manifest.add_input("test", f->test);
    manifest.options = {{"bins", std::to_string(bins.size())}};

    std::unordered_map<std::string, std::string> label_of;
    for (const auto& bin : bins) {
      for (const auto& id : bin.sample_ids) label_of[id] = bin.label;
    }
    json summary = json::array();
    for (const auto& bin : bins) {
      std::ostringstream body;
      for (const Sample& s : test.samples()) {
        if (label_of[s.id] == bin.label) body << sample_to_record(s) << '\n';
      }
      const std::string path = f->prefix + "_" + bin.label;
      emit(path, body.str(), out);
      write_manifest(manifest, path);
      out << path << '\n';
      summary.push_back({{"label", bin.label},
                         {"lower_edge", bin.lower_edge},
                         {"upper_edge", bin.upper_edge},
                         {"count", bin.sample_ids.size()},
                         {"share", bin.share}});
    }
    const std::string summary_path = f->prefix + "_bins.json";
    emit_with_manifest(summary_path, dump_json({{"bins", summary}}, manifest),
                       manifest, out);
    out << summary_path << '\n';
  };
}

Runner add_annotate(CLI::App& app) {
  auto cmd = app.add_subcommand("annotate", "Select low-similarity samples for annotation");
  struct Flags {
    std::string scores;
    double threshold = kAnnotateThreshold;
    double create_threshold = kCreateThreshold;
    std::optional<std::size_t> target;
    std::string out;
    std::string report;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--scores", f->scores, "Scores CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--threshold", f->threshold, "Annotate samples below this similarity")
      ->capture_default_str();
  cmd->add_option("--create-threshold", f->create_threshold,
                  "Similarity below which samples count as hard")
      ->capture_default_str();
  cmd->add_option("--target", f->target, "Desired number of hard samples");
  cmd->add_option("--out", f->out, "Id list, one per line (default: stdout)");
  cmd->add_option("--report", f->report, "Plan summary JSON");
  return [cmd, f](std::ostream& out, std::ostream&) {
    if (!cmd->parsed()) return;
    const auto scores = read_scores_csv(f->scores);
    std::optional<ValueRange> range;
    if (auto m = read_manifest_for(f->scores); m && m->backend) {
      range = default_range(parse_backend_kind(*m->backend));
    }
    const auto plan =
        annotation_plan(scores, f->threshold, f->create_threshold, f->target, range);

    RunManifest manifest;
    manifest.command = "annotate";
    manifest.add_input("scores", f->scores);
    manifest.options = {{"annotate_threshold", format_real(plan.annotate_threshold)},
                        {"create_threshold", format_real(plan.create_threshold)}};
    if (f->target) manifest.options["target"] = std::to_string(*f->target);

    std::string ids;
    for (const auto& id : plan.annotate_ids) ids += id + "\n";
    emit_with_manifest(f->out, ids, manifest, out);
    if (!f->report.empty()) {
      json j = {{"annotate_threshold", plan.annotate_threshold},
                {"create_threshold", plan.create_threshold},
                {"annotate_count", plan.annotate_ids.size()},
                {"below_create", plan.below_create},
                {"target_hard_count", f->target ? json(*f->target) : json(nullptr)},
                {"create_deficit", plan.create_deficit}};
      emit_with_manifest(f->report, dump_json(j, manifest), manifest, out);
    }
  };
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Similarity-based hardness scoring and WOOD evaluation", "datascore"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::vector<Runner> runners = {add_score(app),   add_sweep(app),   add_wood(app),
                                 add_analyze(app), add_testbed(app), add_annotate(app)};

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("datascore");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto& run : runners) run(out, err);
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace datascore
