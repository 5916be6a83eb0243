#ifndef MLS_TOOLS_SERVICE_H_
#define MLS_TOOLS_SERVICE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "mls/pipeline.h"

namespace httplib {
class Server;
}

namespace mls::service {

struct Response {
  int status = 200;
  std::string body;
};

struct ServiceOptions {
  PipelineConfig config;
  // When set, every ingested document is written there as <doc_id>.json and
  // reloaded on startup.
  std::optional<std::filesystem::path> persist_dir;
  // Upper bound of the budget-doubling endpoint.
  double expand_cap = 0.5;
};

// Parses "0.25" or "1/4". Returns nullopt for anything else.
std::optional<double> ParseCompression(std::string_view s);

// Document store behind the HTTP API. Ingested documents are immutable;
// summary bodies are cached per (doc, compression) so repeated requests are
// byte-identical.
class SummaryService {
 public:
  SummaryService(const EmbeddingTable& table, StopwordSet stopwords, ServiceOptions options);

  Response Ingest(std::string_view body);
  Response Summary(const std::string& doc_id, const std::optional<std::string>& c);
  Response Expand(const std::string& doc_id, const std::optional<std::string>& from);
  Response Health() const;

  std::size_t size() const;

  // Routes /v1/... on `server`.
  void Register(httplib::Server& server);

 private:
  struct Entry {
    std::unique_ptr<PreparedDocument> prepared;
    std::mutex cache_mutex;
    std::map<double, std::string> cache;
  };

  std::shared_ptr<Entry> Find(const std::string& doc_id) const;
  Response Render(Entry& entry, double compression);
  void LoadPersisted();

  const EmbeddingTable* table_;
  StopwordSet stopwords_;
  ServiceOptions options_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> docs_;
  std::size_t next_id_ = 1;
};

}  // namespace mls::service

#endif  // MLS_TOOLS_SERVICE_H_
