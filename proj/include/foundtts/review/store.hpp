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
#include <filesystem>
#include <fstream>
#include <iterator>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "foundtts/corpus/manifest.hpp"
#include "foundtts/error.hpp"
#include "foundtts/text/vocabulary.hpp"

namespace foundtts {

struct ReviewTask {
  UtteranceRecord record;
  std::string last_editor;
  std::string edited_at;
  friend bool operator==(const ReviewTask&, const ReviewTask&) = default;
};

inline nlohmann::json to_json(const ReviewTask& t) {
  auto j = to_json(t.record);
  j["last_editor"] = t.last_editor;
  j["edited_at"] = t.edited_at;
  return j;
}

struct CorrectionEvent {
  std::string event_id;      // client-chosen idempotency key; empty means always apply
  std::string utterance_id;
  std::optional<std::string> text;      // new normalized text
  std::optional<std::string> raw_text;  // new raw transcript
  ReviewStatus status = ReviewStatus::kPending;
  std::string editor;
  std::string timestamp;

  nlohmann::json to_json() const {
    nlohmann::json j{{"event_id", event_id},
                     {"utterance_id", utterance_id},
                     {"status", status_name(status)},
                     {"editor", editor},
                     {"timestamp", timestamp}};
    if (text) j["text"] = *text;
    if (raw_text) j["raw_text"] = *raw_text;
    return j;
  }

  static CorrectionEvent from_json(const nlohmann::json& j) {
    CorrectionEvent e;
    e.event_id = j.value("event_id", "");
    e.utterance_id = j.at("utterance_id").get<std::string>();
    if (j.contains("text") && !j["text"].is_null()) e.text = j["text"].get<std::string>();
    if (j.contains("raw_text") && !j["raw_text"].is_null()) e.raw_text = j["raw_text"].get<std::string>();
    e.status = parse_status(j.at("status").get<std::string>());
    e.editor = j.value("editor", "");
    e.timestamp = j.value("timestamp", "");
    return e;
  }
};

class NotFoundError : public InputError {
 public:
  using InputError::InputError;
};

class TransitionError : public InputError {
 public:
  using InputError::InputError;
};

/// Approval rejected because the text contains out-of-vocabulary graphemes.
class ValidationError : public InputError {
 public:
  ValidationError(const std::string& what, std::vector<char32_t> cps)
      : InputError(what), code_points_(std::move(cps)) {}
  const std::vector<char32_t>& code_points() const { return code_points_; }

 private:
  std::vector<char32_t> code_points_;
};

/// Allowed status changes: pending -> pending (text edit), pending ->
/// approved, pending -> rejected, approved -> pending (reopen).
inline bool transition_allowed(ReviewStatus from, ReviewStatus to) {
  if (from == ReviewStatus::kPending) return true;
  return from == ReviewStatus::kApproved && to == ReviewStatus::kPending;
}

/// Review state: a base manifest plus an append-only JSONL log of correction
/// events. Current state is a fold of the log over the manifest; the log is
/// replayed on construction. Writers are serialized; readers take an
/// immutable snapshot without locking.
class ReviewStore {
 public:
  struct State {
    std::vector<std::string> order;  // manifest order
    std::map<std::string, ReviewTask> tasks;
    std::set<std::string> applied_events;
    std::size_t event_count = 0;
  };

  ReviewStore(Manifest base, std::filesystem::path log_path, GraphemeVocabulary vocab = GraphemeVocabulary::darija(),
              std::function<std::string()> clock = utc_timestamp)
      : provenance_(base.provenance), log_path_(std::move(log_path)), vocab_(std::move(vocab)),
        clock_(std::move(clock)) {
    base.validate();
    auto st = std::make_shared<State>();
    for (auto& r : base.records) {
      st->order.push_back(r.id);
      const std::string id = r.id;
      st->tasks.emplace(id, ReviewTask{std::move(r), "", ""});
    }
    if (!log_path_.empty() && std::filesystem::exists(log_path_)) replay(*st);
    std::atomic_store(&state_, std::shared_ptr<const State>(std::move(st)));
    if (!log_path_.empty()) {
      if (log_path_.has_parent_path()) std::filesystem::create_directories(log_path_.parent_path());
      log_.open(log_path_, std::ios::app | std::ios::binary);
      if (!log_) throw InputError("cannot open event log " + log_path_.string());
    }
  }

  std::shared_ptr<const State> snapshot() const { return std::atomic_load(&state_); }

  std::optional<ReviewTask> get(const std::string& id) const {
    auto s = snapshot();
    auto it = s->tasks.find(id);
    if (it == s->tasks.end()) return std::nullopt;
    return it->second;
  }

  /// Tasks with the given status, ordered by id, 1-based pages.
  std::vector<ReviewTask> list(ReviewStatus status, std::size_t page, std::size_t page_size,
                               std::size_t* total = nullptr) const {
    if (page < 1 || page_size < 1) throw InputError("page and page_size must be >= 1");
    auto s = snapshot();
    std::vector<const ReviewTask*> match;
    for (const auto& [id, t] : s->tasks)
      if (t.record.status == status) match.push_back(&t);
    if (total) *total = match.size();
    std::vector<ReviewTask> out;
    const std::size_t from = (page - 1) * page_size;
    for (std::size_t i = from; i < match.size() && i < from + page_size; ++i) out.push_back(*match[i]);
    return out;
  }

  std::vector<ReviewTask> list_pending(std::size_t page, std::size_t page_size, std::size_t* total = nullptr) const {
    return list(ReviewStatus::kPending, page, page_size, total);
  }

  /// Validates and applies one correction, appending it to the log first. A
  /// repeated event_id is acknowledged without being applied again.
  ReviewTask submit(CorrectionEvent ev) {
    std::lock_guard<std::mutex> lock(write_mu_);
    auto cur = snapshot();
    auto it = cur->tasks.find(ev.utterance_id);
    if (it == cur->tasks.end()) throw NotFoundError("no utterance with id '" + ev.utterance_id + "'");
    if (!ev.event_id.empty() && cur->applied_events.count(ev.event_id)) return it->second;
    check(it->second, ev);
    if (ev.timestamp.empty()) ev.timestamp = clock_();
    if (log_.is_open()) {
      log_ << ev.to_json().dump() << '\n';
      log_.flush();
      if (!log_) throw InputError("failed to append to event log " + log_path_.string());
    }
    auto next = std::make_shared<State>(*cur);
    apply(*next, ev);
    ReviewTask result = next->tasks.at(ev.utterance_id);
    std::atomic_store(&state_, std::shared_ptr<const State>(std::move(next)));
    return result;
  }

  /// Records whose status is in `statuses`, in manifest order, corrections applied.
  Manifest export_manifest(const std::set<ReviewStatus>& statuses) const {
    auto s = snapshot();
    Manifest m;
    m.provenance = provenance_;
    for (const auto& id : s->order) {
      const auto& rec = s->tasks.at(id).record;
      if (!statuses.count(rec.status)) continue;
      if (rec.status == ReviewStatus::kApproved) {
        try {
          grapheme_tokenize(rec.normalized_text, vocab_);
        } catch (const OovError& e) {
          throw DataError("approved record '" + id + "' fails vocabulary check: " + e.what());
        }
      }
      m.records.push_back(rec);
    }
    return m;
  }

  std::size_t size() const { return snapshot()->tasks.size(); }
  const GraphemeVocabulary& vocabulary() const { return vocab_; }
  const std::filesystem::path& log_path() const { return log_path_; }

 private:
  void check(const ReviewTask& t, const CorrectionEvent& ev) const {
    if (!transition_allowed(t.record.status, ev.status))
      throw TransitionError(std::string("cannot move '") + ev.utterance_id + "' from " +
                            status_name(t.record.status) + " to " + status_name(ev.status));
    if (ev.status == ReviewStatus::kApproved) {
      const std::string& text = ev.text ? *ev.text : t.record.normalized_text;
      if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw ValidationError("cannot approve '" + ev.utterance_id + "' with empty text", {});
      try {
        grapheme_tokenize(text, vocab_);
      } catch (const OovError& e) {
        throw ValidationError(e.what(), e.code_points());
      }
    }
  }

  static void apply(State& s, const CorrectionEvent& ev) {
    auto& t = s.tasks.at(ev.utterance_id);
    if (ev.text) t.record.normalized_text = *ev.text;
    if (ev.raw_text) t.record.raw_text = *ev.raw_text;
    t.record.status = ev.status;
    t.last_editor = ev.editor;
    t.edited_at = ev.timestamp;
    if (!ev.event_id.empty()) s.applied_events.insert(ev.event_id);
    ++s.event_count;
  }

  void replay(State& s) {
    std::string content;
    {
      std::ifstream in(log_path_, std::ios::binary);
      content.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    // An append interrupted mid-line leaves an unterminated tail; drop it so
    // the next append starts on a fresh line.
    const std::size_t complete = content.rfind('\n') == std::string::npos ? 0 : content.rfind('\n') + 1;
    if (complete != content.size()) {
      content.resize(complete);
      std::filesystem::resize_file(log_path_, complete);
    }
    std::istringstream in(content);
    std::string line;
    long n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      CorrectionEvent ev;
      try {
        ev = CorrectionEvent::from_json(nlohmann::json::parse(line));
      } catch (const std::exception& e) {
        throw DataError(log_path_.string() + ":" + std::to_string(n) + ": " + e.what());
      }
      if (!s.tasks.count(ev.utterance_id))
        throw DataError(log_path_.string() + ":" + std::to_string(n) + ": unknown utterance '" + ev.utterance_id + "'");
      if (!ev.event_id.empty() && s.applied_events.count(ev.event_id)) continue;
      apply(s, ev);
    }
  }

  Provenance provenance_;
  std::filesystem::path log_path_;
  GraphemeVocabulary vocab_;
  std::function<std::string()> clock_;
  std::shared_ptr<const State> state_;
  std::mutex write_mu_;
  std::ofstream log_;
};

}  // namespace foundtts
