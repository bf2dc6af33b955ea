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


#include <gtest/gtest.h>

#include <atomic>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "foundtts/review/server.hpp"
#include "foundtts/review/store.hpp"
#include "test_support.hpp"

using namespace foundtts;
using foundtts::testing::TempDir;

namespace {

Manifest base_manifest(std::size_t n) {
  Manifest m;
  m.provenance = {"digest0", kToolVersion, "2026-01-01T00:00:00Z"};
  for (std::size_t i = 0; i < n; ++i) {
    UtteranceRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "utt_%04zu", i);
    r.id = id;
    r.audio_path = std::string("wavs/") + id + ".wav";
    r.source_path = "raw.wav";
    r.sample_rate = 22050;
    r.duration_s = 1.0;
    r.raw_text = "سلام";
    r.normalized_text = "سلام";
    r.language = "darija";
    r.speaker = "spk0";
    m.records.push_back(r);
  }
  return m;
}

CorrectionEvent event(const std::string& id, ReviewStatus status, std::optional<std::string> text = std::nullopt,
                      const std::string& event_id = "") {
  CorrectionEvent e;
  e.utterance_id = id;
  e.status = status;
  e.text = std::move(text);
  e.editor = "tester";
  e.event_id = event_id;
  return e;
}

std::string fixed_clock() { return "2026-02-02T10:00:00Z"; }

}  // namespace

TEST(ReviewStore, PaginationPartitionsPendingTasks) {
  ReviewStore store(base_manifest(103), "");
  std::set<std::string> seen;
  std::size_t total = 0;
  for (std::size_t page = 1;; ++page) {
    const auto tasks = store.list_pending(page, 10, &total);
    if (tasks.empty()) break;
    EXPECT_LE(tasks.size(), 10u);
    for (const auto& t : tasks) EXPECT_TRUE(seen.insert(t.record.id).second);
  }
  EXPECT_EQ(total, 103u);
  EXPECT_EQ(seen.size(), 103u);
  EXPECT_EQ(store.list_pending(11, 10).size(), 3u);
  EXPECT_THROW(store.list_pending(0, 10), InputError);
}

TEST(ReviewStore, CorrectionsAndTransitions) {
  ReviewStore store(base_manifest(3), "", GraphemeVocabulary::darija(), fixed_clock);
  const auto t = store.submit(event("utt_0000", ReviewStatus::kApproved, "بغيت نمشي"));
  EXPECT_EQ(t.record.status, ReviewStatus::kApproved);
  EXPECT_EQ(t.record.normalized_text, "بغيت نمشي");
  EXPECT_EQ(t.last_editor, "tester");
  EXPECT_EQ(t.edited_at, "2026-02-02T10:00:00Z");
  EXPECT_EQ(store.get("utt_0000")->record.normalized_text, "بغيت نمشي");
  // Reopen, then reject; rejected is terminal.
  store.submit(event("utt_0000", ReviewStatus::kPending));
  store.submit(event("utt_0000", ReviewStatus::kRejected));
  EXPECT_THROW(store.submit(event("utt_0000", ReviewStatus::kPending)), TransitionError);
  EXPECT_THROW(store.submit(event("utt_0000", ReviewStatus::kApproved)), TransitionError);
  store.submit(event("utt_0001", ReviewStatus::kApproved));
  EXPECT_THROW(store.submit(event("utt_0001", ReviewStatus::kRejected)), TransitionError);
  EXPECT_THROW(store.submit(event("nope", ReviewStatus::kApproved)), NotFoundError);
  EXPECT_FALSE(store.get("nope").has_value());
}

TEST(ReviewStore, ApprovalRejectsOutOfVocabularyText) {
  ReviewStore store(base_manifest(2), "");
  try {
    store.submit(event("utt_0000", ReviewStatus::kApproved, "سلام hello"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_FALSE(e.code_points().empty());
    EXPECT_NE(std::find(e.code_points().begin(), e.code_points().end(), U'h'), e.code_points().end());
  }
  EXPECT_EQ(store.get("utt_0000")->record.status, ReviewStatus::kPending);
  EXPECT_THROW(store.submit(event("utt_0000", ReviewStatus::kApproved, "   ")), ValidationError);
  // Pending edits may hold anything; only approval is checked.
  EXPECT_NO_THROW(store.submit(event("utt_0001", ReviewStatus::kPending, "draft with latin")));
}

TEST(ReviewStore, ReplayRestoresState) {
  TempDir dir("replay");
  const auto log = dir / "events.jsonl";
  {
    ReviewStore store(base_manifest(5), log);
    store.submit(event("utt_0001", ReviewStatus::kApproved, "واحد"));
    store.submit(event("utt_0002", ReviewStatus::kRejected));
    store.submit(event("utt_0003", ReviewStatus::kPending, "مسودة"));
  }
  ReviewStore again(base_manifest(5), log);
  EXPECT_EQ(again.get("utt_0001")->record.status, ReviewStatus::kApproved);
  EXPECT_EQ(again.get("utt_0001")->record.normalized_text, "واحد");
  EXPECT_EQ(again.get("utt_0002")->record.status, ReviewStatus::kRejected);
  EXPECT_EQ(again.get("utt_0003")->record.normalized_text, "مسودة");
  EXPECT_EQ(again.snapshot()->event_count, 3u);
}

TEST(ReviewStore, TornTailIsDiscarded) {
  TempDir dir("torn");
  const auto log = dir / "events.jsonl";
  {
    ReviewStore store(base_manifest(3), log);
    store.submit(event("utt_0000", ReviewStatus::kApproved, "واحد"));
  }
  {
    // A crash mid-append leaves half a line.
    std::ofstream out(log, std::ios::app);
    out << R"({"utterance_id": "utt_0001", "status": "appr)";
  }
  {
    ReviewStore store(base_manifest(3), log);
    EXPECT_EQ(store.snapshot()->event_count, 1u);
    EXPECT_EQ(store.get("utt_0001")->record.status, ReviewStatus::kPending);
    store.submit(event("utt_0002", ReviewStatus::kRejected));
  }
  ReviewStore store(base_manifest(3), log);
  EXPECT_EQ(store.snapshot()->event_count, 2u);
  EXPECT_EQ(store.get("utt_0002")->record.status, ReviewStatus::kRejected);
}

TEST(ReviewStore, CorruptLogLineIsAnError) {
  TempDir dir("corrupt");
  write_text_file(dir / "events.jsonl", "{not json}\n");
  EXPECT_THROW(ReviewStore(base_manifest(1), dir / "events.jsonl"), DataError);
  write_text_file(dir / "events.jsonl", R"({"utterance_id": "ghost", "status": "approved"})" "\n");
  EXPECT_THROW(ReviewStore(base_manifest(1), dir / "events.jsonl"), DataError);
}

TEST(ReviewStore, RepeatedEventIdAppliesOnce) {
  TempDir dir("idem");
  ReviewStore store(base_manifest(2), dir / "events.jsonl");
  store.submit(event("utt_0000", ReviewStatus::kApproved, "واحد", "ev-1"));
  // A retry of an approval that would now be an illegal transition is still acknowledged.
  const auto t = store.submit(event("utt_0000", ReviewStatus::kApproved, "واحد", "ev-1"));
  EXPECT_EQ(t.record.status, ReviewStatus::kApproved);
  EXPECT_EQ(store.snapshot()->event_count, 1u);
  ReviewStore again(base_manifest(2), dir / "events.jsonl");
  EXPECT_EQ(again.snapshot()->event_count, 1u);
}

TEST(ReviewStore, ConcurrentSubmissionsAllLand) {
  TempDir dir("concurrent");
  const std::size_t n = 400;
  ReviewStore store(base_manifest(n), dir / "events.jsonl");
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> reads{0};
  std::thread reader([&] {
    while (!stop) {
      const auto s = store.snapshot();
      std::size_t approved = 0;
      for (const auto& [_, t] : s->tasks) approved += t.record.status == ReviewStatus::kApproved;
      EXPECT_EQ(approved, s->event_count);
      ++reads;
    }
  });
  std::vector<std::thread> writers;
  for (std::size_t w = 0; w < 4; ++w)
    writers.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += 4) {
        char id[32];
        std::snprintf(id, sizeof id, "utt_%04zu", i);
        store.submit(event(id, ReviewStatus::kApproved, "سلام", "ev-" + std::to_string(i)));
      }
    });
  for (auto& t : writers) t.join();
  stop = true;
  reader.join();
  EXPECT_GT(reads.load(), 0u);
  EXPECT_EQ(store.snapshot()->event_count, n);
  ReviewStore again(base_manifest(n), dir / "events.jsonl");
  EXPECT_EQ(again.list(ReviewStatus::kApproved, 1, 1000).size(), n);
}

TEST(ReviewStore, ExportImportExportIsAFixedPoint) {
  ReviewStore store(base_manifest(6), "", GraphemeVocabulary::darija(), fixed_clock);
  store.submit(event("utt_0001", ReviewStatus::kApproved, "واحد"));
  store.submit(event("utt_0004", ReviewStatus::kApproved));
  store.submit(event("utt_0002", ReviewStatus::kRejected));
  const auto first = store.export_manifest({ReviewStatus::kApproved});
  ASSERT_EQ(first.records.size(), 2u);
  EXPECT_EQ(first.records[0].id, "utt_0001");
  EXPECT_EQ(first.provenance.config_digest, "digest0");
  std::istringstream in(render_jsonl(first));
  ReviewStore imported(parse_jsonl(in), "");
  EXPECT_EQ(render_jsonl(imported.export_manifest({ReviewStatus::kApproved})), render_jsonl(first));
  EXPECT_EQ(store.export_manifest({ReviewStatus::kPending, ReviewStatus::kApproved}).records.size(), 5u);
}

namespace {

struct LiveServer {
  TempDir dir{"server"};
  std::unique_ptr<ReviewStore> store;
  std::unique_ptr<ReviewServer> server;
  std::thread thread;
  int port = 0;

  explicit LiveServer(std::string token = "") {
    auto m = base_manifest(4);
    std::filesystem::create_directories(dir / "wavs");
    write_wav(dir / "wavs" / "utt_0000.wav", foundtts::testing::sine(440, 0.25, 22050));
    write_wav(dir / "raw.wav", foundtts::testing::sine(220, 1.0, 22050));
    m.records[1].audio_path = "raw.wav";
    m.records[1].start_sample = 100;
    m.records[1].end_sample = 1100;
    store = std::make_unique<ReviewStore>(m, dir / "events.jsonl");
    server = std::make_unique<ReviewServer>(*store, ReviewServerOptions{dir.path(), dir.path(), token});
    port = server->bind();
    thread = std::thread([this] { server->serve(); });
    server->wait_until_ready();
  }
  ~LiveServer() {
    server->stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

nlohmann::json body(const httplib::Result& r) { return nlohmann::json::parse(r->body); }

}  // namespace

TEST(ReviewServer, ListsAndFetchesTasks) {
  LiveServer s;
  auto c = s.client();
  auto r = c.Get("/tasks?page=1&page_size=3");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(body(r)["total"], 4);
  EXPECT_EQ(body(r)["tasks"].size(), 3u);
  r = c.Get("/tasks?page=2&page_size=3");
  EXPECT_EQ(body(r)["tasks"].size(), 1u);
  r = c.Get("/tasks/utt_0002");
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(body(r)["id"], "utt_0002");
  r = c.Get("/tasks/missing");
  EXPECT_EQ(r->status, 404);
  EXPECT_EQ(body(r)["code"], "not_found");
  EXPECT_EQ(c.Get("/tasks?page=0")->status, 400);
  EXPECT_EQ(c.Get("/tasks?page_size=100000")->status, 400);
}

TEST(ReviewServer, CorrectionFlow) {
  LiveServer s;
  auto c = s.client();
  auto post = [&](const std::string& id, const nlohmann::json& j) {
    return c.Post(("/tasks/" + id + "/correction").c_str(), j.dump(), "application/json");
  };
  auto r = post("utt_0000", {{"status", "approved"}, {"text", "واحد"}, {"editor", "amal"}});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(body(r)["status"], "approved");
  EXPECT_EQ(body(r)["last_editor"], "amal");
  r = post("utt_0000", {{"status", "rejected"}});
  EXPECT_EQ(r->status, 409);
  EXPECT_EQ(body(r)["code"], "invalid_transition");
  r = post("utt_0001", {{"status", "approved"}, {"text", "سلام abc"}});
  EXPECT_EQ(r->status, 422);
  EXPECT_EQ(body(r)["code"], "validation_error");
  EXPECT_EQ(body(r)["details"]["offending"].size(), 3u);
  EXPECT_EQ(body(r)["details"]["offending"][0]["code_point"], "U+0061");
  EXPECT_EQ(post("ghost", {{"status", "approved"}})->status, 404);
  EXPECT_EQ(c.Post("/tasks/utt_0001/correction", "{bad", "application/json")->status, 400);
  EXPECT_EQ(post("utt_0001", {{"status", "done"}})->status, 400);
  EXPECT_EQ(post("utt_0001", {{"text", "x"}})->status, 400);

  r = c.Get("/export");
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(body(r)["records"].size(), 1u);
  EXPECT_EQ(body(r)["provenance"]["config_digest"], "digest0");
  r = c.Get("/export?status=approved,pending&format=jsonl");
  EXPECT_EQ(r->status, 200);
  std::istringstream in(r->body);
  EXPECT_EQ(parse_jsonl(in).records.size(), 4u);
}

TEST(ReviewServer, AudioWithRanges) {
  LiveServer s;
  auto c = s.client();
  auto r = c.Get("/audio/utt_0000");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Content-Type"), "audio/wav");
  const auto full = r->body;
  EXPECT_EQ(full, read_file_bytes(s.dir / "wavs" / "utt_0000.wav"));
  r = c.Get("/audio/utt_0000", {{"Range", "bytes=0-11"}});
  EXPECT_EQ(r->status, 206);
  EXPECT_EQ(r->body, full.substr(0, 12));
  EXPECT_EQ(r->body.substr(0, 4), "RIFF");
  // No chunk file on disk: the span is cut from the source recording.
  r = c.Get("/audio/utt_0001");
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(decode_wav(r->body).samples.size(), 1000u);
  EXPECT_EQ(c.Get("/audio/ghost")->status, 404);
}

TEST(ReviewServer, TokenIsEnforced) {
  LiveServer s("sekret");
  auto c = s.client();
  auto r = c.Get("/tasks");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 401);
  EXPECT_EQ(body(r)["code"], "unauthorized");
  EXPECT_EQ(c.Get("/tasks", {{"Authorization", "Bearer wrong"}})->status, 401);
  EXPECT_EQ(c.Get("/tasks", {{"Authorization", "Bearer sekret"}})->status, 200);
  EXPECT_EQ(c.Get("/export", {{"X-Review-Token", "sekret"}})->status, 200);
}
