#ifndef MLS_SERIALIZATION_H_
#define MLS_SERIALIZATION_H_

#include <filesystem>

#include <nlohmann/json.hpp>

#include "mls/decoder.h"
#include "mls/kernels.h"
#include "mls/pipeline.h"
#include "mls/weight_search.h"

namespace mls {

nlohmann::json ToJson(const Kernel& kernel);
nlohmann::json ToJson(const Multiplex& multiplex);
// Throw FormatError on missing fields or invalid kernels.
Kernel KernelFromJson(const nlohmann::json& j);
Multiplex MultiplexFromJson(const nlohmann::json& j);

// {w1, w2, w3, rouge1, step, c_eval}
nlohmann::json ToJson(const WeightSearchResult& result);
// Reads w1..w3 from a weights file; throws FormatError when absent or invalid.
Weights WeightsFromJson(const nlohmann::json& j);
Weights LoadWeights(const std::filesystem::path& path);

struct SummaryJsonOptions {
  bool trace = false;
  bool text = true;
};

// Items with provenance and text, budget accounting, and the initial and
// final attention over the prototype.
nlohmann::json ToJson(const Document& doc, const SummaryResult& result,
                      const SummaryJsonOptions& options = {});

// Prototype sentences with their global attention A* and the three per-head
// local attentions, plus the weights.
nlohmann::json AttentionJson(const PreparedDocument& prepared, const SummaryResult& result);

}  // namespace mls

#endif  // MLS_SERIALIZATION_H_
