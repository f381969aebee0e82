// Copyright 2026 The nlifoundry Authors.
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

// HTTP/JSON front end for a Campaign.
//
//   GET  /api/tasks/next?annotator=ID   200 {task_id, premise, hypothesis} | 204
//   POST /api/tasks/{task_id}/label     body {annotator, label} -> 200 | 400 | 404 | 409
//   GET  /api/progress                  {open, complete, discarded}
//   GET  /api/agreement[?group=G]       agreement over complete items
//   GET  /api/export                    JSONL {pair_id, final_label}
//   GET  /api/guidelines                annotator instructions (markdown)

#pragma once

#include <map>
#include <set>
#include <string>

#include <httplib.h>

#include "nlifoundry/annotate/campaign.hpp"
#include "nlifoundry/core/jsonl.hpp"

namespace nlif::annotate {

inline const char* default_guidelines() {
  return R"(# Annotation guidelines

You will see two sentences, shown one above the other. They come from the
same text; the second one originally followed the first. Read both and pick
the single label that best describes how the second sentence relates to the
first.

1. **Contrastive**: the second sentence goes against the first, for example
   it states an opposing fact, an exception or a contradiction.
2. **Reasoning**: one sentence gives a cause, reason or premise and the other
   gives its effect or conclusion.
3. **Entailment**: the second sentence says the same thing as the first in
   other words, restates it or summarizes it.
4. **Neutral**: none of the above; the sentences are related only by topic,
   or not at all.

Judge only what the two sentences say. Do not look up the source article.
If more than one label seems possible, choose the one that fits best.
)";
}

struct ServerOptions {
  std::string guidelines = default_guidelines();
  std::string static_dir;  // optional UI bundle, served at /
  // Named subsets of pair ids for /api/agreement?group=NAME.
  std::map<std::string, std::set<std::string>> groups;
};

class AnnotateServer {
 public:
  AnnotateServer(Campaign& campaign, ServerOptions opt = {})
      : campaign_(campaign), opt_(std::move(opt)) {
    routes();
  }

  int bind_any(const std::string& host = "127.0.0.1") { return svr_.bind_to_any_port(host); }
  bool bind(const std::string& host, int port) { return svr_.bind_to_port(host, port); }
  bool listen_after_bind() { return svr_.listen_after_bind(); }
  bool listen(const std::string& host, int port) { return svr_.listen(host, port); }
  void wait_until_ready() { svr_.wait_until_ready(); }
  void stop() { svr_.stop(); }

 private:
  static void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(dump_compact(body), "application/json");
  }

  static void send_error(httplib::Response& res, int status, const std::string& msg) {
    send_json(res, status, json{{"error", msg}});
  }

  void routes() {
    svr_.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                  std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const NotFoundError& e) {
        send_error(res, 404, e.what());
      } catch (const ConflictError& e) {
        send_error(res, 409, e.what());
      } catch (const DomainError& e) {
        send_error(res, 400, e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      }
    });

    svr_.Get("/api/tasks/next", [this](const httplib::Request& req, httplib::Response& res) {
      const auto annotator = req.get_param_value("annotator");
      if (annotator.empty()) return send_error(res, 400, "missing annotator parameter");
      const auto t = campaign_.next_task(annotator);
      if (!t) {
        res.status = 204;
        return;
      }
      send_json(res, 200, task_view(*t));
    });

    svr_.Post(R"(/api/tasks/([^/]+)/label)",
              [this](const httplib::Request& req, httplib::Response& res) {
                const std::string task_id = req.matches[1];
                json body;
                try {
                  body = json::parse(req.body);
                } catch (const json::parse_error&) {
                  return send_error(res, 400, "body is not JSON");
                }
                if (!body.is_object() || !body.contains("annotator") ||
                    !body["annotator"].is_string() || !body.contains("label") ||
                    !body["label"].is_string())
                  return send_error(res, 400, "expected {\"annotator\": ..., \"label\": ...}");
                const auto label = parse_relation(body["label"].get<std::string>());
                if (!label) return send_error(res, 400, "unknown label");
                const auto t =
                    campaign_.submit_label(task_id, body["annotator"].get<std::string>(), *label);
                json out{{"task_id", t.task_id}, {"status", std::string(to_string(t.status))}};
                send_json(res, 200, out);
              });

    svr_.Get("/api/progress", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, to_json(campaign_.progress()));
    });

    svr_.Get("/api/agreement", [this](const httplib::Request& req, httplib::Response& res) {
      if (req.has_param("group")) {
        const auto g = req.get_param_value("group");
        const auto it = opt_.groups.find(g);
        if (it == opt_.groups.end()) return send_error(res, 404, "unknown group " + g);
        auto j = to_json(campaign_.agreement(&it->second));
        j["group"] = g;
        return send_json(res, 200, j);
      }
      send_json(res, 200, to_json(campaign_.agreement()));
    });

    svr_.Get("/api/export", [this](const httplib::Request&, httplib::Response& res) {
      std::string out;
      for (const auto& [id, label] : campaign_.final_labels())
        out += dump_compact(json{{"pair_id", id}, {"final_label", std::string(to_string(label))}}) +
               "\n";
      res.set_content(out, "application/x-ndjson");
    });

    svr_.Get("/api/guidelines", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(opt_.guidelines, "text/markdown; charset=utf-8");
    });

    if (!opt_.static_dir.empty() && !svr_.set_mount_point("/", opt_.static_dir))
      throw IoError("cannot serve static files from " + opt_.static_dir);
  }

  Campaign& campaign_;
  ServerOptions opt_;
  httplib::Server svr_;
};

}  // namespace nlif::annotate
