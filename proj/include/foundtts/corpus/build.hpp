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

#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "foundtts/corpus/manifest.hpp"
#include "foundtts/dsp/resample.hpp"
#include "foundtts/dsp/wav_io.hpp"
#include "foundtts/error.hpp"
#include "foundtts/quality/audit.hpp"
#include "foundtts/quality/gate.hpp"
#include "foundtts/quality/segment.hpp"
#include "foundtts/text/normalize.hpp"

namespace foundtts {

/// Corpus build settings. Read from a JSON object; every key is optional
/// except input_dir:
///
///   {
///     "input_dir": "raw/", "output_dir": "corpus/",
///     "language": "darija", "speaker": "spk0",
///     "transcripts": "transcripts.tsv", "lexicon": "numbers.tsv",
///     "keep_diacritics": true, "strip": "ـ",
///     "gate": {"snr_threshold_db": 20, "min_sample_rate": 22050, "snr_stage": "raw"},
///     "segment": {"max_chunk_s": 10, "vad_frame_ms": 25,
///                 "energy_threshold_db": 30, "min_silence_ms": 200},
///     "target_sample_rate": 22050, "write_chunks": true, "threads": 0
///   }
struct BuildConfig {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  std::string language = "darija";
  std::string speaker = "spk0";
  std::filesystem::path transcripts;  // TSV: chunk id <tab> text
  std::filesystem::path lexicon;      // TSV: digits <tab> written form
  bool keep_diacritics = true;
  std::string strip;                  // characters removed during normalization
  GateConfig gate;
  SnrStage snr_stage = SnrStage::kRaw;
  SegmentSpec segment;
  int target_sample_rate = 22050;
  bool write_chunks = true;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (input_dir.empty()) throw ConfigError("build: input_dir is required");
    if (target_sample_rate <= 0) throw ConfigError("build: target_sample_rate must be positive");
    if (write_chunks && output_dir.empty()) throw ConfigError("build: write_chunks needs output_dir");
    segment.validate();
  }

  nlohmann::json to_json() const {
    return {{"input_dir", input_dir.generic_string()},
            {"output_dir", output_dir.generic_string()},
            {"language", language},
            {"speaker", speaker},
            {"transcripts", transcripts.generic_string()},
            {"lexicon", lexicon.generic_string()},
            {"keep_diacritics", keep_diacritics},
            {"strip", strip},
            {"gate",
             {{"snr_threshold_db", gate.snr_threshold_db},
              {"min_sample_rate", gate.min_sample_rate},
              {"snr_stage", stage_name(snr_stage)}}},
            {"segment",
             {{"max_chunk_s", segment.max_chunk_s},
              {"vad_frame_ms", segment.vad_frame_ms},
              {"energy_threshold_db", segment.energy_threshold_db},
              {"min_silence_ms", segment.min_silence_ms}}},
            {"target_sample_rate", target_sample_rate},
            {"write_chunks", write_chunks}};
  }

  /// FNV-1a of the canonical JSON (thread count excluded; it does not affect output).
  std::string digest() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : to_json().dump()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  static BuildConfig from_json(const nlohmann::json& j) {
    BuildConfig c;
    try {
      if (!j.is_object()) throw ConfigError("build config must be a JSON object");
      static const std::set<std::string> known = {"input_dir",  "output_dir",      "language",     "speaker",
                                                  "transcripts", "lexicon",        "keep_diacritics", "strip",
                                                  "gate",       "segment",         "target_sample_rate",
                                                  "write_chunks", "threads"};
      for (const auto& [k, _] : j.items())
        if (!known.count(k)) throw ConfigError("build config: unknown key '" + k + "'");
      c.input_dir = j.value("input_dir", "");
      c.output_dir = j.value("output_dir", "");
      c.language = j.value("language", c.language);
      c.speaker = j.value("speaker", c.speaker);
      c.transcripts = j.value("transcripts", "");
      c.lexicon = j.value("lexicon", "");
      c.keep_diacritics = j.value("keep_diacritics", c.keep_diacritics);
      c.strip = j.value("strip", "");
      if (j.contains("gate")) {
        const auto& g = j["gate"];
        c.gate.snr_threshold_db = g.value("snr_threshold_db", c.gate.snr_threshold_db);
        c.gate.min_sample_rate = g.value("min_sample_rate", c.gate.min_sample_rate);
        const std::string st = g.value("snr_stage", "raw");
        if (st != "raw" && st != "denoised") throw ConfigError("build config: snr_stage must be raw or denoised");
        c.snr_stage = st == "raw" ? SnrStage::kRaw : SnrStage::kDenoised;
      }
      if (j.contains("segment")) {
        const auto& s = j["segment"];
        c.segment.max_chunk_s = s.value("max_chunk_s", c.segment.max_chunk_s);
        c.segment.vad_frame_ms = s.value("vad_frame_ms", c.segment.vad_frame_ms);
        c.segment.energy_threshold_db = s.value("energy_threshold_db", c.segment.energy_threshold_db);
        c.segment.min_silence_ms = s.value("min_silence_ms", c.segment.min_silence_ms);
      }
      c.target_sample_rate = j.value("target_sample_rate", c.target_sample_rate);
      c.write_chunks = j.value("write_chunks", c.write_chunks);
      c.threads = j.value("threads", 0u);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("build config: ") + e.what());
    }
    return c;
  }

  static BuildConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    auto c = from_json(j);
    // Relative paths in the file are relative to the file.
    const auto base = path.parent_path();
    for (auto* p : {&c.input_dir, &c.output_dir, &c.transcripts, &c.lexicon})
      if (!p->empty() && p->is_relative()) *p = base / *p;
    return c;
  }
};

inline std::map<std::string, std::string> read_transcripts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open transcripts " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  long n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw InputError(path.string() + ":" + std::to_string(n) + ": expected '<chunk id>\\t<text>'");
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

/// Run-level failure: no input file produced an accepted chunk. Carries the
/// audit so callers can still write it.
class NoAcceptedRecordsError : public DataError {
 public:
  explicit NoAcceptedRecordsError(std::vector<AuditRecord> audit)
      : DataError("no input file passed the quality gate (" + std::to_string(audit.size()) + " files scanned)"),
        audit_(std::move(audit)) {}
  const std::vector<AuditRecord>& audit() const { return audit_; }

 private:
  std::vector<AuditRecord> audit_;
};

struct BuildResult {
  Manifest manifest;
  std::vector<AuditRecord> audit;  // one per input file, path order
};

inline std::vector<std::filesystem::path> list_wavs(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("input_dir " + dir.string() + " is not a directory");
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".wav") out.push_back(std::filesystem::relative(e.path(), dir));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.generic_string() < b.generic_string(); });
  return out;
}

/// Chunk ids derive from the input-relative path: "sub/story.wav" -> "sub_story_0003".
inline std::string chunk_id(const std::filesystem::path& rel, std::size_t index) {
  std::string stem = rel.parent_path().generic_string();
  if (!stem.empty()) stem += "_";
  stem += rel.stem().string();
  for (char& c : stem)
    if (c == '/' || c == '|' || c == ' ') c = '_';
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%04zu", index);
  return stem + buf;
}

namespace detail {

struct FileOutcome {
  AuditRecord audit;
  std::vector<UtteranceRecord> records;
};

inline FileOutcome process_file(const BuildConfig& cfg, const std::filesystem::path& rel,
                                const std::map<std::string, std::string>& transcripts,
                                const NormalizationRules& rules) {
  const std::string rel_s = rel.generic_string();
  FileOutcome out;
  Waveform w;
  GateDecision d;
  try {
    w = read_wav(cfg.input_dir / rel);
    require_valid(w, "build");
    d = gate_audio(w, cfg.gate);
  } catch (const DataError& e) {
    out.audit = audit_error(rel_s, e.what());
    return out;
  }
  if (!d.accepted) {
    out.audit = audit_from(rel_s, w, d, {}, cfg.snr_stage);
    return out;
  }
  const auto segs = segment(w, cfg.segment);
  out.audit = audit_from(rel_s, w, d, segs, cfg.snr_stage);
  for (std::size_t k = 0; k < segs.size(); ++k) {
    UtteranceRecord r;
    r.id = chunk_id(rel, k);
    r.source_path = rel_s;
    r.start_sample = segs[k].start;
    r.end_sample = segs[k].end;
    r.sample_rate = w.sample_rate;
    r.duration_s = static_cast<double>(segs[k].length()) / w.sample_rate;
    r.language = cfg.language;
    r.speaker = cfg.speaker;
    r.status = ReviewStatus::kPending;
    r.snr_db = d.snr->value_db;
    r.audio_path = rel_s;
    if (auto it = transcripts.find(r.id); it != transcripts.end()) {
      r.raw_text = it->second;
      try {
        r.normalized_text = normalize_text(r.raw_text, rules);
      } catch (const InputError& e) {
        out.audit.warnings.push_back(r.id + ": " + e.what());
      }
    }
    if (cfg.write_chunks) {
      Waveform chunk{std::vector<double>(w.samples.begin() + static_cast<long>(segs[k].start),
                                         w.samples.begin() + static_cast<long>(segs[k].end)),
                     w.sample_rate};
      chunk = resample(chunk, cfg.target_sample_rate);
      r.audio_path = "wavs/" + r.id + ".wav";
      write_wav(cfg.output_dir / r.audio_path, chunk);
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

/// Scans input_dir for WAV files, gates and segments each one, attaches
/// transcripts and writes chunk WAVs. Files are processed in parallel and
/// merged in path order; unreadable files are recorded in the audit.
inline BuildResult build_corpus(const BuildConfig& cfg) {
  cfg.validate();
  const auto files = list_wavs(cfg.input_dir);
  const auto transcripts = cfg.transcripts.empty() ? std::map<std::string, std::string>{}
                                                   : read_transcripts(cfg.transcripts);
  NormalizationRules rules;
  if (!cfg.lexicon.empty()) rules.number_lexicon = read_lexicon(cfg.lexicon);
  rules.keep_diacritics = cfg.keep_diacritics;
  for (char32_t cp : utf8::decode(cfg.strip)) rules.strip_set.insert(cp);
  rules.validate();
  if (cfg.write_chunks) std::filesystem::create_directories(cfg.output_dir / "wavs");

  std::vector<detail::FileOutcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < files.size();)
      outcomes[i] = detail::process_file(cfg, files[i], transcripts, rules);
  };
  unsigned n = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(files.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BuildResult res;
  res.manifest.provenance = {cfg.digest(), kToolVersion, utc_timestamp()};
  for (auto& o : outcomes) {
    res.audit.push_back(std::move(o.audit));
    for (auto& r : o.records) res.manifest.records.push_back(std::move(r));
  }
  if (res.manifest.records.empty()) throw NoAcceptedRecordsError(std::move(res.audit));
  res.manifest.validate();
  return res;
}

inline std::string render_audit_jsonl(const std::vector<AuditRecord>& audit) {
  std::string out;
  for (const auto& a : audit) out += a.to_json().dump() + "\n";
  return out;
}

}  // namespace foundtts
