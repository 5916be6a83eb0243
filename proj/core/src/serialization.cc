#include "mls/serialization.h"

#include <stdexcept>

#include "mls/attention.h"

namespace mls {
namespace {

using nlohmann::json;

const json& Require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

json Step(const DecodeStep& s) {
  json j{{"position", s.position},
         {"attention", s.attention},
         {"p_copy", s.p_copy},
         {"alpha", s.alpha},
         {"p_out", s.p_out},
         {"op", ToString(s.op)},
         {"span", {s.span_start, s.span_end}}};
  j["p_expand"] = s.p_expand ? json(*s.p_expand) : json(nullptr);
  return j;
}

}  // namespace

json ToJson(const Kernel& kernel) {
  return {{"property", ToString(kernel.property)},
          {"metric", ToString(kernel.metric)},
          {"weight", kernel.weight},
          {"labels", kernel.labels},
          {"matrix", kernel.matrix}};
}

json ToJson(const Multiplex& multiplex) {
  json heads = json::array();
  for (std::size_t h = 0; h < Multiplex::kHeads; ++h) heads.push_back(ToJson(multiplex.head(h)));
  return {{"heads", heads}};
}

Kernel KernelFromJson(const json& j) {
  Kernel k;
  try {
    k.property = ParseProperty(Require(j, "property").get<std::string>());
    k.metric = ParseMetric(Require(j, "metric").get<std::string>());
    k.weight = Require(j, "weight").get<double>();
    k.labels = Require(j, "labels").get<std::vector<std::string>>();
    k.matrix = Require(j, "matrix").get<std::vector<Vector>>();
    ValidateKernel(k);
  } catch (const json::exception& e) {
    throw FormatError(std::string("kernel: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("kernel: ") + e.what());
  }
  return k;
}

Multiplex MultiplexFromJson(const json& j) {
  const json& heads = Require(j, "heads");
  if (!heads.is_array() || heads.size() != Multiplex::kHeads) {
    throw FormatError("multiplex: expected 3 heads");
  }
  Multiplex m(KernelFromJson(heads[0]), KernelFromJson(heads[1]), KernelFromJson(heads[2]));
  if (m.topic().property != Property::kTopicCoverage ||
      m.keyword().property != Property::kKeywordCoverage ||
      m.redundancy().property != Property::kRedundancy) {
    throw FormatError("multiplex: heads must be topic, keyword, redundancy in that order");
  }
  return m;
}

json ToJson(const WeightSearchResult& result) {
  return {{"w1", result.weights[0]}, {"w2", result.weights[1]}, {"w3", result.weights[2]},
          {"rouge1", result.rouge1},  {"step", result.step},     {"c_eval", result.c_eval}};
}

Weights WeightsFromJson(const json& j) {
  Weights w{};
  try {
    w = {Require(j, "w1").get<double>(), Require(j, "w2").get<double>(),
         Require(j, "w3").get<double>()};
    ValidateWeights(w);
  } catch (const json::exception& e) {
    throw FormatError(std::string("weights: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("weights: ") + e.what());
  }
  return w;
}

Weights LoadWeights(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return WeightsFromJson(j);
}

json ToJson(const Document& doc, const SummaryResult& result, const SummaryJsonOptions& options) {
  json items = json::array();
  for (const auto& item : result.items) {
    json ji{{"provenance", ToString(item.source)},
            {"prototype_index", item.prototype_index},
            {"span", {item.span_start, item.span_end}},
            {"token_count", item.tokens.size()}};
    if (options.text) {
      std::string text;
      for (std::size_t k = item.span_start; k < item.span_end; ++k) {
        if (!text.empty()) text.push_back(' ');
        text.append(doc.SentenceText(k));
      }
      ji["text"] = std::move(text);
    }
    items.push_back(std::move(ji));
  }
  json j{{"doc_id", doc.id},
         {"document_tokens", doc.token_count},
         {"budget", result.budget},
         {"token_count", result.token_count},
         {"expansion_enabled", result.expansion_enabled},
         {"budget_infeasible", result.budget_infeasible},
         {"stop_reason", ToString(result.stop_reason)},
         {"items", std::move(items)},
         {"initial_attention", result.initial_attention},
         {"final_attention", result.final_attention}};
  if (options.text) j["summary"] = SummaryText(doc, result);
  if (options.trace) {
    json trace = json::array();
    for (const auto& s : result.trace) trace.push_back(Step(s));
    j["trace"] = std::move(trace);
  }
  return j;
}

json AttentionJson(const PreparedDocument& prepared, const SummaryResult& result) {
  const auto& proto = prepared.prototype();
  const auto& locals = prepared.context().locals();
  const Weights w = prepared.config().weights;
  const Vector mixed = MixHeads(w, locals);
  std::vector<bool> consumed(proto.size(), false);
  for (const auto& item : result.items) consumed[item.prototype_index] = true;

  json sentences = json::array();
  for (std::size_t pos = 0; pos < proto.size(); ++pos) {
    sentences.push_back(json{{"position", pos},
                         {"doc_index", proto.sentences[pos].doc_index},
                         {"text", prepared.doc().SentenceText(proto.sentences[pos].doc_index)},
                         {"attention", result.initial_attention.at(pos)},
                         {"heads", json::array({locals[0][pos], locals[1][pos], locals[2][pos]})},
                         {"mixed", mixed[pos]},
                         {"consumed", static_cast<bool>(consumed[pos])}});
  }
  return {{"weights", w},
          {"head_names",
           {ToString(Property::kTopicCoverage), ToString(Property::kKeywordCoverage),
            ToString(Property::kRedundancy)}},
          {"prototype", std::move(sentences)}};
}

}  // namespace mls
