#include "service.h"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <fstream>

#include "mls/serialization.h"

namespace mls::service {
namespace {

using nlohmann::json;

Response Error(int status, std::string_view message) {
  return {status, json{{"error", message}}.dump()};
}

std::optional<double> ParseReal(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::optional<double> ParseCompression(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = ParseReal(s.substr(0, slash));
    const auto den = ParseReal(s.substr(slash + 1));
    if (!num || !den || *den == 0.0) return std::nullopt;
    return *num / *den;
  }
  return ParseReal(s);
}

SummaryService::SummaryService(const EmbeddingTable& table, StopwordSet stopwords,
                               ServiceOptions options)
    : table_(&table), stopwords_(std::move(stopwords)), options_(std::move(options)) {
  ValidateWeights(options_.config.weights);
  if (options_.persist_dir) {
    std::filesystem::create_directories(*options_.persist_dir);
    LoadPersisted();
  }
}

void SummaryService::LoadPersisted() {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(*options_.persist_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    try {
      const json j = json::parse(ReadFile(path));
      const std::string id = j.at("doc_id").get<std::string>();
      auto entry = std::make_shared<Entry>();
      entry->prepared = std::make_unique<PreparedDocument>(
          MakeDocument(id, j.at("text").get<std::string>()), MultiplexFromJson(j.at("multiplex")),
          *table_, stopwords_, options_.config);
      docs_[id] = std::move(entry);
      if (id.size() > 1 && id[0] == 'd') {
        if (const auto n = ParseReal(std::string_view(id).substr(1))) {
          next_id_ = std::max(next_id_, static_cast<std::size_t>(*n) + 1);
        }
      }
    } catch (const std::exception& e) {
      spdlog::warn("skipping persisted document {}: {}", path.string(), e.what());
    }
  }
  if (!docs_.empty()) spdlog::info("restored {} documents from {}", docs_.size(), options_.persist_dir->string());
}

Response SummaryService::Ingest(std::string_view body) {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error&) {
    return Error(400, "request body must be JSON");
  }
  if (!request.is_object() || !request.contains("text") || !request["text"].is_string()) {
    return Error(400, "field 'text' (string) is required");
  }
  std::string text = request["text"].get<std::string>();

  std::string id;
  {
    std::unique_lock lock(mutex_);
    id = "d" + std::to_string(next_id_++);
  }
  auto entry = std::make_shared<Entry>();
  try {
    Document doc = MakeDocument(id, text);
    if (doc.empty()) return Error(400, "text contains no sentences");
    entry->prepared = std::make_unique<PreparedDocument>(std::move(doc), *table_, stopwords_, options_.config);
  } catch (const std::invalid_argument& e) {
    return Error(400, e.what());
  }

  if (options_.persist_dir) {
    const json stored{{"doc_id", id}, {"text", text}, {"multiplex", ToJson(entry->prepared->multiplex())}};
    std::ofstream out(*options_.persist_dir / (id + ".json"));
    out << stored.dump();
    if (!out) spdlog::warn("could not persist document {}", id);
  }
  {
    std::unique_lock lock(mutex_);
    docs_[id] = std::move(entry);
  }
  return {201, json{{"doc_id", id}}.dump()};
}

std::shared_ptr<SummaryService::Entry> SummaryService::Find(const std::string& doc_id) const {
  std::shared_lock lock(mutex_);
  auto it = docs_.find(doc_id);
  return it == docs_.end() ? nullptr : it->second;
}

Response SummaryService::Render(Entry& entry, double compression) {
  std::lock_guard lock(entry.cache_mutex);
  auto it = entry.cache.find(compression);
  if (it == entry.cache.end()) {
    const PreparedDocument& prepared = *entry.prepared;
    const SummaryResult result = prepared.Summarize(compression);
    json j = ToJson(prepared.doc(), result);
    j["compression"] = compression;
    j["expand_cap"] = options_.expand_cap;
    j["attention"] = AttentionJson(prepared, result);
    it = entry.cache.emplace(compression, j.dump()).first;
  }
  return {200, it->second};
}

Response SummaryService::Summary(const std::string& doc_id, const std::optional<std::string>& c) {
  auto entry = Find(doc_id);
  if (!entry) return Error(404, "unknown document id");
  const auto compression = c ? ParseCompression(*c) : std::nullopt;
  if (!compression || !(*compression > 0.0 && *compression <= 1.0)) {
    return Error(400, "query parameter c must be a number in (0, 1]");
  }
  return Render(*entry, *compression);
}

Response SummaryService::Expand(const std::string& doc_id, const std::optional<std::string>& from) {
  auto entry = Find(doc_id);
  if (!entry) return Error(404, "unknown document id");
  const auto c = from ? ParseCompression(*from) : std::nullopt;
  if (!c || !(*c > 0.0 && *c <= 1.0)) {
    return Error(400, "query parameter from must be a number in (0, 1]");
  }
  return Render(*entry, std::min(2.0 * *c, options_.expand_cap));
}

Response SummaryService::Health() const { return {200, json{{"status", "ok"}}.dump()}; }

std::size_t SummaryService::size() const {
  std::shared_lock lock(mutex_);
  return docs_.size();
}

void SummaryService::Register(httplib::Server& server) {
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  };
  auto param = [](const httplib::Request& req, const char* name) -> std::optional<std::string> {
    if (!req.has_param(name)) return std::nullopt;
    return req.get_param_value(name);
  };
  server.Post("/v1/documents", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, Ingest(req.body));
  });
  server.Get(R"(/v1/documents/([^/]+)/summary)",
             [this, send, param](const httplib::Request& req, httplib::Response& res) {
               send(res, Summary(req.matches[1], param(req, "c")));
             });
  server.Get(R"(/v1/documents/([^/]+)/expand)",
             [this, send, param](const httplib::Request& req, httplib::Response& res) {
               send(res, Expand(req.matches[1], param(req, "from")));
             });
  server.Get("/v1/health", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, Health());
  });
  server.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    send(res, Error(500, what));
  });
}

}  // namespace mls::service
