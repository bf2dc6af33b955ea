// Copyright 2026 The foundtts Authors.
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

// foundtts command line: corpus building, pooling, splits, reports,
// language ranking, evaluation and the review service.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration error,
// 3 data error.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "foundtts/corpus/build.hpp"
#include "foundtts/corpus/manifest.hpp"
#include "foundtts/corpus/pool.hpp"
#include "foundtts/corpus/split.hpp"
#include "foundtts/corpus/stats.hpp"
#include "foundtts/csv.hpp"
#include "foundtts/eval/edits.hpp"
#include "foundtts/eval/mcd.hpp"
#include "foundtts/eval/mos.hpp"
#include "foundtts/langsel/embedding.hpp"
#include "foundtts/langsel/projection.hpp"
#include "foundtts/langsel/ranking.hpp"
#include "foundtts/review/server.hpp"
#include "foundtts/text/inventory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace foundtts::cli {

/// Config files for every subcommand except `build` are a JSON object whose
/// keys are the long option names with '-' replaced by '_'. Flags given on
/// the command line win over the file.
json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    auto j = json::parse(in);
    if (!j.is_object()) throw ConfigError(path + ": config must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

template <class T>
void fill(const json& cfg, const char* key, T& target, const CLI::Option* flag) {
  if (flag && flag->count() > 0) return;
  if (!cfg.contains(key)) return;
  try {
    target = cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open " + p.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

// "label=path" pairs; a bare path takes its file stem as the label.
std::pair<std::string, fs::path> labelled(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) return {fs::path(arg).stem().string(), arg};
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

// ---- build -----------------------------------------------------------------

struct BuildArgs {
  std::string config, input, output, language, speaker, transcripts;
  double snr = 0, max_chunk = 0;
  unsigned threads = 0;
  CLI::Option *snr_opt{}, *chunk_opt{}, *threads_opt{};
};

int run_build(const BuildArgs& a) {
  BuildConfig c;
  if (!a.config.empty()) c = BuildConfig::load(a.config);
  if (!a.input.empty()) c.input_dir = a.input;
  if (!a.output.empty()) c.output_dir = a.output;
  if (!a.language.empty()) c.language = a.language;
  if (!a.speaker.empty()) c.speaker = a.speaker;
  if (!a.transcripts.empty()) c.transcripts = a.transcripts;
  if (a.snr_opt->count()) c.gate.snr_threshold_db = a.snr;
  if (a.chunk_opt->count()) c.segment.max_chunk_s = a.max_chunk;
  if (a.threads_opt->count()) c.threads = a.threads;
  c.validate();
  if (c.output_dir.empty()) throw ConfigError("build: output_dir is required");
  fs::create_directories(c.output_dir);
  const auto audit_path = c.output_dir / "audit.jsonl";
  try {
    auto res = build_corpus(c);
    write_text_file(audit_path, render_audit_jsonl(res.audit));
    write_manifest_pair(c.output_dir / "manifest", res.manifest);
    std::size_t accepted = 0;
    for (const auto& r : res.audit) accepted += r.decision == "accepted";
    std::printf("%zu files scanned, %zu accepted, %zu chunks, %.2f min\n", res.audit.size(), accepted,
                res.manifest.records.size(), res.manifest.total_seconds() / 60.0);
    std::printf("manifest: %s\naudit: %s\n", (c.output_dir / "manifest.jsonl").string().c_str(),
                audit_path.string().c_str());
  } catch (const NoAcceptedRecordsError& e) {
    write_text_file(audit_path, render_audit_jsonl(e.audit()));
    std::fprintf(stderr, "audit: %s\n", audit_path.string().c_str());
    throw;
  }
  return 0;
}

// ---- pool ------------------------------------------------------------------

struct PoolArgs {
  std::string config, out;
  std::vector<std::string> manifests;
  double budget = 0;
  bool redistribute = false;
  CLI::Option *budget_opt{}, *redistribute_opt{}, *manifests_opt{};
};

int run_pool(PoolArgs a) {
  const auto cfg = load_config(a.config);
  fill(cfg, "budget_minutes", a.budget, a.budget_opt);
  fill(cfg, "redistribute", a.redistribute, a.redistribute_opt);
  fill(cfg, "manifest", a.manifests, a.manifests_opt);
  if (a.manifests.empty()) throw ConfigError("pool: at least one --manifest is required");
  std::vector<std::pair<std::string, Manifest>> langs;
  for (const auto& arg : a.manifests) {
    auto [label, path] = labelled(arg);
    langs.emplace_back(label, read_manifest(path));
  }
  const auto plan = pool_languages(langs, a.budget, a.redistribute);
  std::cout << render_pooling_plan(plan);
  if (!a.out.empty()) {
    auto pooled = plan.pooled();
    pooled.provenance = {"", kToolVersion, utc_timestamp()};
    write_manifest_pair(a.out, pooled);
  }
  return 0;
}

// ---- split -----------------------------------------------------------------

struct SplitArgs {
  std::string config, manifest, out_dir;
  std::size_t train = 0, dev = 0, test = 0;
  std::uint64_t seed = 0;
  CLI::Option *train_opt{}, *dev_opt{}, *test_opt{}, *seed_opt{}, *manifest_opt{}, *out_dir_opt{};
};

int run_split(SplitArgs a) {
  const auto cfg = load_config(a.config);
  fill(cfg, "train", a.train, a.train_opt);
  fill(cfg, "dev", a.dev, a.dev_opt);
  fill(cfg, "test", a.test, a.test_opt);
  fill(cfg, "seed", a.seed, a.seed_opt);
  fill(cfg, "manifest", a.manifest, a.manifest_opt);
  fill(cfg, "out_dir", a.out_dir, a.out_dir_opt);
  if (a.manifest.empty()) throw ConfigError("split: a manifest is required (--manifest or config key 'manifest')");
  const auto m = read_manifest(a.manifest);
  const auto r = split_manifest(m, {a.train, a.dev, a.test}, a.seed);
  const fs::path dir = a.out_dir.empty() ? fs::path(a.manifest).parent_path() : fs::path(a.out_dir);
  write_manifest_pair(dir / "train", r.train);
  write_manifest_pair(dir / "dev", r.dev);
  write_manifest_pair(dir / "test", r.test);
  std::printf("train %zu | dev %zu | test %zu\n", r.train.records.size(), r.dev.records.size(),
              r.test.records.size());
  return 0;
}

// ---- stats -----------------------------------------------------------------

int run_stats(const std::vector<std::string>& manifests, const std::string& csv) {
  CorpusStats total;
  for (const auto& p : manifests) total += corpus_stats(read_manifest(p));
  std::cout << render_stats_table(total);
  if (!csv.empty()) write_text_file(csv, render_stats_csv(total));
  return 0;
}

// ---- inventory -------------------------------------------------------------

int run_inventory(const std::vector<std::string>& texts, const std::vector<std::string>& manifests, bool diacritics,
                  std::size_t columns, const std::string& csv) {
  std::vector<std::string> corpus;
  for (const auto& p : texts)
    for (auto& l : read_lines(p)) corpus.push_back(std::move(l));
  for (const auto& p : manifests)
    for (const auto& r : read_manifest(p).records) corpus.push_back(r.normalized_text);
  if (corpus.empty()) throw ConfigError("inventory: give --text or --manifest input");
  const auto rep = grapheme_inventory(corpus, GraphemeVocabulary::darija(), {diacritics});
  std::cout << render_inventory_table(rep, columns);
  std::printf("total %zu tokens, %zu distinct\n", rep.total(), rep.rows.size());
  if (!csv.empty()) write_text_file(csv, render_inventory_csv(rep));
  return 0;
}

// ---- rank-languages --------------------------------------------------------

struct RankArgs {
  std::string config, target, target_file, json_out, log_csv, distance = "cosine";
  std::vector<std::string> embeddings;
  std::vector<std::size_t> layers = TrainingConfig{}.layers;
  std::size_t k = 3, epochs = TrainingConfig{}.epochs;
  double margin = TrainingConfig{}.margin, lr = TrainingConfig{}.learning_rate;
  std::uint64_t seed = 0;
  CLI::Option *k_opt{}, *epochs_opt{}, *margin_opt{}, *lr_opt{}, *seed_opt{}, *layers_opt{}, *distance_opt{};
};

int run_rank(RankArgs a) {
  const auto cfg = load_config(a.config);
  TrainingConfig tc;
  fill(cfg, "k", a.k, a.k_opt);
  fill(cfg, "epochs", a.epochs, a.epochs_opt);
  fill(cfg, "margin", a.margin, a.margin_opt);
  fill(cfg, "learning_rate", a.lr, a.lr_opt);
  fill(cfg, "seed", a.seed, a.seed_opt);
  fill(cfg, "layers", a.layers, a.layers_opt);
  fill(cfg, "distance", a.distance, a.distance_opt);
  if (cfg.contains("triplets_per_epoch")) tc.triplets_per_epoch = cfg["triplets_per_epoch"].get<std::size_t>();
  if (cfg.contains("heldout_triplets")) tc.heldout_triplets = cfg["heldout_triplets"].get<std::size_t>();
  tc.epochs = a.epochs;
  tc.margin = a.margin;
  tc.learning_rate = a.lr;
  tc.seed = a.seed;
  tc.layers = a.layers;
  if (a.distance == "cosine")
    tc.distance = DistanceKind::kCosine;
  else if (a.distance == "euclidean")
    tc.distance = DistanceKind::kSquaredEuclidean;
  else
    throw ConfigError("rank-languages: --distance must be cosine or euclidean");

  std::vector<fs::path> files(a.embeddings.begin(), a.embeddings.end());
  auto ls = load_language_set(files);
  std::vector<UtteranceEmbedding> target_utts;
  if (!a.target_file.empty()) {
    target_utts = read_embeddings(a.target_file);
  } else {
    auto it = ls.languages.find(a.target);
    if (it == ls.languages.end()) throw ConfigError("rank-languages: no embeddings for target '" + a.target + "'");
    target_utts = it->second;
  }
  // The projection is trained on the candidate languages only.
  LanguageSet candidates = ls;
  candidates.languages.erase(a.target);
  const auto trained = train_projection(candidates, tc);
  const auto ranking = rank_sources(trained.model, a.target, target_utts, candidates, a.k);
  std::cout << render_ranking_table(ranking);
  std::printf("best epoch %zu, held-out loss %.6f\n", trained.best_epoch,
              trained.log[trained.best_epoch].heldout_loss);
  if (!a.json_out.empty()) write_text_file(a.json_out, ranking_json(ranking).dump(2) + "\n");
  if (!a.log_csv.empty()) write_text_file(a.log_csv, render_training_log_csv(trained.log));
  return 0;
}

// ---- eval ------------------------------------------------------------------

int run_eval_mcd(const std::vector<std::string>& refs, const std::vector<std::string>& hyps, bool strict,
                 const std::string& csv) {
  if (refs.size() != hyps.size() || refs.empty())
    throw ConfigError("eval mcd: give the same non-zero number of --ref and --hyp files");
  std::vector<MelCepstrum> rc, hc;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto r = read_wav(refs[i]);
    auto h = read_wav(hyps[i]);
    if (h.sample_rate != r.sample_rate) h = resample(h, r.sample_rate);
    AnalysisConfig ac;
    ac.sample_rate = r.sample_rate;
    rc.push_back(mel_cepstrum(r, ac));
    hc.push_back(mel_cepstrum(h, ac));
  }
  const auto s = mcd_batch(rc, hc, strict ? McdMode::kStrict : McdMode::kDtw);
  std::string out = "ref,hyp,mcd_db\n";
  char buf[64];
  for (std::size_t i = 0; i < refs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.4f", s.values[i]);
    out += csv::escape(refs[i]) + "," + csv::escape(hyps[i]) + "," + buf + "\n";
  }
  if (!csv.empty()) write_text_file(csv, out);
  std::printf("MCD (dB) over %zu pairs: %s\n", s.values.size(), s.render().c_str());
  return 0;
}

int run_eval_edits(const std::string& ref, const std::string& hyp, const std::string& csv) {
  const auto r = read_lines(ref), h = read_lines(hyp);
  if (r.size() != h.size()) throw InputError("eval edits: reference and hypothesis line counts differ");
  std::size_t S = 0, I = 0, D = 0, N = 0;
  std::string out = "line,ref_words,substitutions,insertions,deletions\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto rw = split_words(r[i]);
    const auto e = edit_alignment(rw, split_words(h[i]));
    S += e.substitutions, I += e.insertions, D += e.deletions, N += rw.size();
    out += std::to_string(i + 1) + "," + std::to_string(rw.size()) + "," + std::to_string(e.substitutions) + "," +
           std::to_string(e.insertions) + "," + std::to_string(e.deletions) + "\n";
  }
  if (!csv.empty()) write_text_file(csv, out);
  std::printf("words | S | I | D | WER\n%zu | %zu | %zu | %zu | %.2f%%\n", N, S, I, D,
              N ? 100.0 * static_cast<double>(S + I + D) / static_cast<double>(N) : 0.0);
  return 0;
}

int run_eval_mos(const std::vector<std::string>& files, bool ci, const std::string& csv) {
  std::vector<Rating> all;
  for (const auto& f : files) {
    auto r = read_ratings(f);
    all.insert(all.end(), r.begin(), r.end());
  }
  const auto s = mos_aggregate(all);
  std::cout << render_mos_table(s, ci);
  if (!csv.empty()) write_text_file(csv, render_mos_csv(s));
  return 0;
}

// ---- serve-review ----------------------------------------------------------

ReviewServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const std::string& manifest, std::string log, const std::string& host, int port,
              const std::string& token, std::string audio_root, std::string source_root) {
  const fs::path mpath(manifest);
  if (log.empty()) log = (mpath.parent_path() / "review_events.jsonl").string();
  if (audio_root.empty()) audio_root = mpath.parent_path().string();
  if (source_root.empty()) source_root = audio_root;
  ReviewStore store(read_manifest(mpath), log);
  ReviewServer server(store, {audio_root, source_root, token});
  const int bound = server.bind(host, port);
  std::printf("review service on http://%s:%d (%zu tasks, log %s)\n", host.c_str(), bound, store.size(),
              log.c_str());
  std::fflush(stdout);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.serve();
  g_server = nullptr;
  return 0;
}

}  // namespace foundtts::cli

int main(int argc, char** argv) {
  using namespace foundtts;
  using namespace foundtts::cli;

  CLI::App app{"foundtts: speech corpus and evaluation toolkit"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  BuildArgs ba;
  auto* build = app.add_subcommand("build", "Gate, segment and transcribe a directory of WAV files");
  build->add_option("-c,--config", ba.config, "Build config (JSON)")->check(CLI::ExistingFile);
  build->add_option("-i,--input", ba.input, "Input directory (overrides input_dir)");
  build->add_option("-o,--output", ba.output, "Output directory (overrides output_dir)");
  build->add_option("--language", ba.language, "Language label");
  build->add_option("--speaker", ba.speaker, "Speaker label");
  build->add_option("--transcripts", ba.transcripts, "Transcript TSV: chunk id <tab> text");
  ba.snr_opt = build->add_option("--snr-threshold", ba.snr, "Minimum WADA-SNR in dB");
  ba.chunk_opt = build->add_option("--max-chunk", ba.max_chunk, "Maximum chunk length in seconds");
  ba.threads_opt = build->add_option("--threads", ba.threads, "Worker threads (0: all cores)");

  PoolArgs pa;
  auto* pool = app.add_subcommand("pool", "Equal-share multilingual pooling plan");
  pool->add_option("-c,--config", pa.config, "Pool config (JSON)")->check(CLI::ExistingFile);
  pa.manifests_opt = pool->add_option("-m,--manifest", pa.manifests, "Per-language manifest, label=path");
  pa.budget_opt = pool->add_option("--budget-minutes", pa.budget, "Total budget in minutes");
  pa.redistribute_opt = pool->add_flag("--redistribute", pa.redistribute, "Move shortfall to other languages");
  pool->add_option("-o,--out", pa.out, "Write the pooled manifest to <out>.jsonl and <out>.txt");

  SplitArgs sa;
  auto* split = app.add_subcommand("split", "Seeded train/dev/test split of a manifest");
  split->add_option("-c,--config", sa.config, "Split config (JSON)")->check(CLI::ExistingFile);
  sa.manifest_opt = split->add_option("-m,--manifest", sa.manifest, "Manifest (JSONL)");
  sa.train_opt = split->add_option("--train", sa.train, "Minimum train utterances");
  sa.dev_opt = split->add_option("--dev", sa.dev, "Dev utterances");
  sa.test_opt = split->add_option("--test", sa.test, "Test utterances");
  sa.seed_opt = split->add_option("--seed", sa.seed, "Shuffle seed");
  sa.out_dir_opt = split->add_option("-o,--out-dir", sa.out_dir, "Output directory (default: next to the manifest)");

  std::vector<std::string> stats_in;
  std::string stats_csv;
  auto* stats = app.add_subcommand("stats", "Duration, utterance and speaker counts per language");
  stats->add_option("manifests", stats_in, "Manifests (JSONL)")->required()->check(CLI::ExistingFile);
  stats->add_option("--csv", stats_csv, "Also write CSV");

  std::vector<std::string> inv_text, inv_manifest;
  bool inv_diacritics = false;
  std::size_t inv_columns = 3;
  std::string inv_csv;
  auto* inventory = app.add_subcommand("inventory", "Grapheme frequency table");
  inventory->add_option("-t,--text", inv_text, "Text file, one utterance per line")->check(CLI::ExistingFile);
  inventory->add_option("-m,--manifest", inv_manifest, "Manifest; uses normalized_text")->check(CLI::ExistingFile);
  inventory->add_flag("--include-diacritics", inv_diacritics, "Count diacritics as graphemes");
  inventory->add_option("--columns", inv_columns, "Table column groups");
  inventory->add_option("--csv", inv_csv, "Also write CSV");

  RankArgs ra;
  auto* rank = app.add_subcommand("rank-languages", "Rank source languages by similarity to a target");
  rank->add_option("-c,--config", ra.config, "Training config (JSON)")->check(CLI::ExistingFile);
  rank->add_option("-e,--embeddings", ra.embeddings, "Embedding files, one per language")
      ->required()
      ->check(CLI::ExistingFile);
  rank->add_option("--target", ra.target, "Target language label")->required();
  rank->add_option("--target-embeddings", ra.target_file, "Target utterance embeddings (if not among -e)");
  ra.k_opt = rank->add_option("-k", ra.k, "Number of languages to select");
  ra.epochs_opt = rank->add_option("--epochs", ra.epochs, "Training epochs");
  ra.margin_opt = rank->add_option("--margin", ra.margin, "Triplet margin");
  ra.lr_opt = rank->add_option("--learning-rate", ra.lr, "Adam learning rate");
  ra.layers_opt = rank->add_option("--layers", ra.layers, "Layer widths after the input");
  ra.distance_opt = rank->add_option("--distance", ra.distance, "cosine or euclidean");
  ra.seed_opt = rank->add_option("--seed", ra.seed, "Training seed");
  rank->add_option("--json", ra.json_out, "Write the ranking as JSON");
  rank->add_option("--log-csv", ra.log_csv, "Write per-epoch losses as CSV");

  auto* eval = app.add_subcommand("eval", "Objective and subjective evaluation");
  eval->require_subcommand(1);
  std::vector<std::string> mcd_ref, mcd_hyp;
  bool mcd_strict = false;
  std::string mcd_csv;
  auto* mcd_cmd = eval->add_subcommand("mcd", "Mel cepstral distortion between paired WAV files");
  mcd_cmd->add_option("--ref", mcd_ref, "Reference WAVs")->required()->check(CLI::ExistingFile);
  mcd_cmd->add_option("--hyp", mcd_hyp, "Synthesized WAVs, same order")->required()->check(CLI::ExistingFile);
  mcd_cmd->add_flag("--strict", mcd_strict, "Require equal frame counts instead of DTW");
  mcd_cmd->add_option("--csv", mcd_csv, "Per-pair CSV");
  std::string ed_ref, ed_hyp, ed_csv;
  auto* edits = eval->add_subcommand("edits", "Word substitutions, insertions and deletions");
  edits->add_option("--ref", ed_ref, "Reference text, one utterance per line")->required()->check(CLI::ExistingFile);
  edits->add_option("--hyp", ed_hyp, "Hypothesis text, same lines")->required()->check(CLI::ExistingFile);
  edits->add_option("--csv", ed_csv, "Per-line CSV");
  std::vector<std::string> mos_in;
  bool mos_ci = false;
  std::string mos_csv;
  auto* mos = eval->add_subcommand("mos", "Mean opinion scores from rating CSVs");
  mos->add_option("ratings", mos_in, "Rating CSVs")->required()->check(CLI::ExistingFile);
  mos->add_flag("--ci", mos_ci, "Show the 95% interval instead of the std");
  mos->add_option("--csv", mos_csv, "Also write CSV");

  std::string sv_manifest, sv_log, sv_host = "127.0.0.1", sv_token, sv_audio, sv_source;
  int sv_port = 8080;
  auto* serve = app.add_subcommand("serve-review", "HTTP service for transcript review");
  serve->add_option("-m,--manifest", sv_manifest, "Manifest (JSONL)")->required()->check(CLI::ExistingFile);
  serve->add_option("--log", sv_log, "Event log (default: review_events.jsonl next to the manifest)");
  serve->add_option("--host", sv_host, "Bind address");
  serve->add_option("--port", sv_port, "Port (0 picks a free one)");
  serve->add_option("--token", sv_token, "Shared token required on every request");
  serve->add_option("--audio-root", sv_audio, "Base directory of chunk audio paths");
  serve->add_option("--source-root", sv_source, "Base directory of source recordings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*build) return run_build(ba);
    if (*pool) return run_pool(pa);
    if (*split) return run_split(sa);
    if (*stats) return run_stats(stats_in, stats_csv);
    if (*inventory) return run_inventory(inv_text, inv_manifest, inv_diacritics, inv_columns, inv_csv);
    if (*rank) return run_rank(ra);
    if (*mcd_cmd) return run_eval_mcd(mcd_ref, mcd_hyp, mcd_strict, mcd_csv);
    if (*edits) return run_eval_edits(ed_ref, ed_hyp, ed_csv);
    if (*mos) return run_eval_mos(mos_in, mos_ci, mos_csv);
    if (*serve) return run_serve(sv_manifest, sv_log, sv_host, sv_port, sv_token, sv_audio, sv_source);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
