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

#include <charconv>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "foundtts/dsp/wav_io.hpp"
#include "foundtts/review/store.hpp"

namespace foundtts {

struct ReviewServerOptions {
  std::filesystem::path audio_root;   // base for record audio_path
  std::filesystem::path source_root;  // base for record source_path (fallback)
  std::string token;                  // empty: no authentication
  std::size_t max_page_size = 1000;
};

/// HTTP/JSON front end for a ReviewStore.
///
///   GET  /tasks?status=pending&page=1&page_size=50
///   GET  /tasks/{id}
///   GET  /audio/{id}                 WAV bytes, Range requests honored
///   POST /tasks/{id}/correction      {"text", "raw_text", "status", "editor", "event_id"}
///   GET  /export?status=approved,pending[&format=jsonl]
///
/// Errors are {"code", "message", "details"}.
class ReviewServer {
 public:
  ReviewServer(ReviewStore& store, ReviewServerOptions opt) : store_(store), opt_(std::move(opt)) { routes(); }

  /// Binds to host:port (port 0 picks a free one) and returns the port.
  int bind(const std::string& host = "127.0.0.1", int port = 0) {
    if (port == 0) return server_.bind_to_any_port(host);
    if (!server_.bind_to_port(host, port)) throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
    return port;
  }
  /// Blocks until stop().
  void serve() { server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  static void send_error(httplib::Response& res, int http, const std::string& code, const std::string& message,
                         nlohmann::json details = nlohmann::json::object()) {
    res.status = http;
    res.set_content(nlohmann::json{{"code", code}, {"message", message}, {"details", details}}.dump(),
                    "application/json; charset=utf-8");
  }

  static void send_json(httplib::Response& res, const nlohmann::json& j) {
    res.set_content(j.dump(), "application/json; charset=utf-8");
  }

  static std::optional<std::size_t> parse_count(const std::string& s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
  }

  bool authorized(const httplib::Request& req, httplib::Response& res) const {
    if (opt_.token.empty()) return true;
    const auto bearer = req.get_header_value("Authorization");
    if (bearer == "Bearer " + opt_.token || req.get_header_value("X-Review-Token") == opt_.token) return true;
    send_error(res, 401, "unauthorized", "missing or invalid review token");
    return false;
  }

  std::set<ReviewStatus> parse_statuses(const std::string& csv_list) const {
    std::set<ReviewStatus> out;
    std::stringstream ss(csv_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "all") return {ReviewStatus::kPending, ReviewStatus::kApproved, ReviewStatus::kRejected};
      if (!item.empty()) out.insert(parse_status(item));
    }
    return out;
  }

  std::string audio_bytes(const ReviewTask& t) const {
    const auto& r = t.record;
    const auto chunk = opt_.audio_root / r.audio_path;
    if (!r.audio_path.empty() && r.audio_path != r.source_path && std::filesystem::is_regular_file(chunk))
      return read_file_bytes(chunk);
    // No chunk file: cut the span out of the source recording.
    const auto src = read_wav(opt_.source_root / r.source_path);
    if (r.end_sample > src.samples.size() || r.start_sample >= r.end_sample)
      throw DataError("record '" + r.id + "' span lies outside its source recording");
    Waveform w{std::vector<double>(src.samples.begin() + static_cast<long>(r.start_sample),
                                   src.samples.begin() + static_cast<long>(r.end_sample)),
               src.sample_rate};
    return encode_wav(w);
  }

  template <class F>
  void guarded(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const NotFoundError& e) {
      send_error(res, 404, "not_found", e.what());
    } catch (const ValidationError& e) {
      nlohmann::json bad = nlohmann::json::array();
      for (char32_t cp : e.code_points())
        bad.push_back({{"code_point", utf8::code_point_label(cp)}, {"char", utf8::encode(cp)}});
      send_error(res, 422, "validation_error", e.what(), {{"offending", bad}});
    } catch (const TransitionError& e) {
      send_error(res, 409, "invalid_transition", e.what());
    } catch (const InputError& e) {
      send_error(res, 400, "bad_request", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  }

  void routes() {
    server_.Get("/tasks", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      guarded(res, [&] {
        const auto page = parse_count(req.has_param("page") ? req.get_param_value("page") : "1");
        const auto size = parse_count(req.has_param("page_size") ? req.get_param_value("page_size") : "50");
        if (!page || !size || *page < 1 || *size < 1 || *size > opt_.max_page_size)
          return send_error(res, 400, "bad_request", "page must be >= 1 and page_size in 1.." +
                                                         std::to_string(opt_.max_page_size));
        const auto status = parse_status(req.has_param("status") ? req.get_param_value("status") : "pending");
        std::size_t total = 0;
        auto tasks = store_.list(status, *page, *size, &total);
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : tasks) arr.push_back(to_json(t));
        send_json(res, {{"page", *page}, {"page_size", *size}, {"total", total}, {"tasks", arr}});
      });
    });

    server_.Get(R"(/tasks/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      guarded(res, [&] {
        auto t = store_.get(req.matches[1]);
        if (!t) throw NotFoundError("no utterance with id '" + std::string(req.matches[1]) + "'");
        send_json(res, to_json(*t));
      });
    });

    server_.Get(R"(/audio/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      guarded(res, [&] {
        auto t = store_.get(req.matches[1]);
        if (!t) throw NotFoundError("no utterance with id '" + std::string(req.matches[1]) + "'");
        res.set_header("Accept-Ranges", "bytes");
        res.set_content(audio_bytes(*t), "audio/wav");
      });
    });

    server_.Post(R"(/tasks/([^/]+)/correction)", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      guarded(res, [&] {
        nlohmann::json body;
        try {
          body = nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception& e) {
          throw InputError(std::string("request body is not JSON: ") + e.what());
        }
        if (!body.is_object() || !body.contains("status") || !body["status"].is_string())
          throw InputError("body needs a string 'status'");
        CorrectionEvent ev;
        ev.utterance_id = req.matches[1];
        ev.status = parse_status(body["status"].get<std::string>());
        auto str = [&](const char* key) -> std::optional<std::string> {
          if (!body.contains(key) || body[key].is_null()) return std::nullopt;
          if (!body[key].is_string()) throw InputError(std::string("'") + key + "' must be a string");
          return body[key].get<std::string>();
        };
        ev.text = str("text");
        ev.raw_text = str("raw_text");
        ev.editor = str("editor").value_or("");
        ev.event_id = str("event_id").value_or("");
        send_json(res, to_json(store_.submit(std::move(ev))));
      });
    });

    server_.Get("/export", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      guarded(res, [&] {
        const auto statuses = parse_statuses(req.has_param("status") ? req.get_param_value("status") : "approved");
        const auto m = store_.export_manifest(statuses);
        if (req.has_param("format") && req.get_param_value("format") == "jsonl") {
          res.set_content(render_jsonl(m), "application/x-ndjson; charset=utf-8");
          return;
        }
        nlohmann::json recs = nlohmann::json::array();
        for (const auto& r : m.records) recs.push_back(to_json(r));
        send_json(res, {{"provenance", to_json(m.provenance)}, {"records", recs}});
      });
    });
  }

  ReviewStore& store_;
  ReviewServerOptions opt_;
  httplib::Server server_;
};

}  // namespace foundtts
