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

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "foundtts/error.hpp"

namespace foundtts {

inline constexpr const char* kToolVersion = "foundtts 0.3.0";

enum class ReviewStatus { kPending, kApproved, kRejected };

inline const char* status_name(ReviewStatus s) {
  switch (s) {
    case ReviewStatus::kPending: return "pending";
    case ReviewStatus::kApproved: return "approved";
    case ReviewStatus::kRejected: return "rejected";
  }
  return "?";
}

inline ReviewStatus parse_status(const std::string& s) {
  if (s == "pending") return ReviewStatus::kPending;
  if (s == "approved") return ReviewStatus::kApproved;
  if (s == "rejected") return ReviewStatus::kRejected;
  throw InputError("unknown review status '" + s + "'");
}

struct UtteranceRecord {
  std::string id;
  std::string audio_path;   // chunk WAV, or the source file when chunks are not written
  std::string source_path;  // original recording
  std::size_t start_sample = 0;
  std::size_t end_sample = 0;
  int sample_rate = 0;      // of the source recording
  double duration_s = 0.0;
  std::string raw_text;
  std::string normalized_text;
  std::string language;
  std::string speaker;
  ReviewStatus status = ReviewStatus::kPending;
  std::optional<double> snr_db;

  friend bool operator==(const UtteranceRecord&, const UtteranceRecord&) = default;
};

struct Provenance {
  std::string config_digest;
  std::string tool_version = kToolVersion;
  std::string created_at;  // ISO 8601 UTC
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Manifest {
  std::vector<UtteranceRecord> records;
  Provenance provenance;

  double total_seconds() const {
    double s = 0.0;
    for (const auto& r : records) s += r.duration_s;
    return s;
  }

  void validate() const {
    std::set<std::string> seen;
    for (const auto& r : records) {
      if (r.id.empty()) throw InputError("manifest: record with empty id");
      if (!seen.insert(r.id).second) throw InputError("manifest: duplicate id '" + r.id + "'");
      if (r.id.find('|') != std::string::npos) throw InputError("manifest: id '" + r.id + "' contains '|'");
    }
  }
};

inline nlohmann::json to_json(const UtteranceRecord& r) {
  return {{"id", r.id},
          {"audio_path", r.audio_path},
          {"source_path", r.source_path},
          {"start_sample", r.start_sample},
          {"end_sample", r.end_sample},
          {"sample_rate", r.sample_rate},
          {"duration_s", r.duration_s},
          {"raw_text", r.raw_text},
          {"normalized_text", r.normalized_text},
          {"language", r.language},
          {"speaker", r.speaker},
          {"status", status_name(r.status)},
          {"snr_db", r.snr_db ? nlohmann::json(*r.snr_db) : nlohmann::json(nullptr)}};
}

inline UtteranceRecord record_from_json(const nlohmann::json& j) {
  try {
    UtteranceRecord r;
    r.id = j.at("id").get<std::string>();
    r.audio_path = j.value("audio_path", "");
    r.source_path = j.value("source_path", "");
    r.start_sample = j.value("start_sample", std::size_t{0});
    r.end_sample = j.value("end_sample", std::size_t{0});
    r.sample_rate = j.value("sample_rate", 0);
    r.duration_s = j.at("duration_s").get<double>();
    r.raw_text = j.value("raw_text", "");
    r.normalized_text = j.value("normalized_text", "");
    r.language = j.value("language", "");
    r.speaker = j.value("speaker", "");
    r.status = parse_status(j.value("status", "pending"));
    if (j.contains("snr_db") && !j["snr_db"].is_null()) r.snr_db = j["snr_db"].get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("manifest record: ") + e.what());
  }
}

inline nlohmann::json to_json(const Provenance& p) {
  return {{"config_digest", p.config_digest}, {"tool_version", p.tool_version}, {"created_at", p.created_at}};
}

/// JSONL: the first line is {"provenance": {...}}, then one record per line.
inline std::string render_jsonl(const Manifest& m) {
  std::string out = nlohmann::json{{"provenance", to_json(m.provenance)}}.dump() + "\n";
  for (const auto& r : m.records) out += to_json(r).dump() + "\n";
  return out;
}

inline Manifest parse_jsonl(std::istream& in, const std::string& source = "manifest") {
  Manifest m;
  std::string line;
  long n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(source + ":" + std::to_string(n) + ": " + e.what());
    }
    if (j.contains("provenance")) {
      const auto& p = j["provenance"];
      m.provenance = {p.value("config_digest", ""), p.value("tool_version", ""), p.value("created_at", "")};
      continue;
    }
    try {
      m.records.push_back(record_from_json(j));
    } catch (const InputError& e) {
      throw InputError(source + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  m.validate();
  return m;
}

/// "id|raw_text|normalized_text" per line.
inline std::string render_pipe(const Manifest& m) {
  std::string out;
  for (const auto& r : m.records) out += r.id + "|" + r.raw_text + "|" + r.normalized_text + "\n";
  return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

inline void write_manifest(const std::filesystem::path& jsonl_path, const Manifest& m) {
  write_text_file(jsonl_path, render_jsonl(m));
}

/// Writes <stem>.jsonl and <stem>.txt (pipe form) side by side.
inline void write_manifest_pair(const std::filesystem::path& stem, const Manifest& m) {
  write_text_file(stem.string() + ".jsonl", render_jsonl(m));
  write_text_file(stem.string() + ".txt", render_pipe(m));
}

inline Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_jsonl(in, path.string());
}

}  // namespace foundtts
