#include "mls/evaluation.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "mls/baselines.h"
#include "mls/metrics.h"

namespace mls {
namespace {

constexpr std::array<std::string_view, kNumMetrics> kMetricNames{
    "rouge1", "rouge2", "rougeL", "meteor", "topic_kl", "sentiment_kl", "delta_coherence",
    "abstractiveness"};

std::string FormatCompression(double c) {
  // The standard budgets print as fractions.
  for (double denom : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    if (std::abs(c * denom - 1.0) < 1e-12) return fmt::format("1/{}", static_cast<int>(denom));
  }
  return fmt::format("{:g}", c);
}

MetricValues Score(const PreparedDocument& prepared, const SummaryResult& result,
                   const std::vector<std::string>& gold, const StopwordSet& stopwords,
                   const EmbeddingTable& table, const resources::ValenceLexicon& lexicon,
                   double doc_coherence, const std::vector<std::string>& doc_tokens) {
  const Document& doc = prepared.doc();
  const auto indices = result.SentenceIndices();
  const Document summary = MakeDocumentFromSentences(doc.id + "#summary", doc, indices);
  const auto cand = MetricTokens(summary);

  MetricValues v{};
  v[0] = RougeN(cand, gold, 1).f1;
  v[1] = RougeN(cand, gold, 2).f1;
  v[2] = RougeL(cand, gold);
  v[3] = MeteorSimple(cand, gold);
  v[4] = TopicDivergence(TopicKernelForMetric(summary, stopwords, prepared.config().kernels),
                         prepared.multiplex().topic());
  v[5] = SentimentDivergence(cand, doc_tokens, lexicon);
  v[6] = std::abs(Coherence(summary, table) - doc_coherence);
  v[7] = Abstractiveness(summary, doc);
  return v;
}

}  // namespace

std::string_view ToString(Method m) {
  switch (m) {
    case Method::kMls: return "mls";
    case Method::kA1: return "a1";
    case Method::kA2: return "a2";
  }
  return "unknown";
}

Method ParseMethod(std::string_view s) {
  if (s == "mls") return Method::kMls;
  if (s == "a1") return Method::kA1;
  if (s == "a2") return Method::kA2;
  throw std::invalid_argument(fmt::format("unknown method '{}'", s));
}

std::string_view ToString(MetricId m) { return kMetricNames[static_cast<std::size_t>(m)]; }

MetricId ParseMetricId(std::string_view s) {
  for (std::size_t i = 0; i < kNumMetrics; ++i) {
    if (kMetricNames[i] == s) return kAllMetrics[i];
  }
  throw std::invalid_argument(fmt::format("unknown metric '{}'", s));
}

EvalReport EvaluateCorpus(std::span<const CorpusPair> corpus, const EmbeddingTable& table,
                          const StopwordSet& stopwords, const PipelineConfig& config,
                          const EvalOptions& options, const resources::ValenceLexicon& lexicon) {
  EvalReport report;
  if (options.methods.empty() || options.compressions.empty() || corpus.empty()) return report;
  for (double c : options.compressions) {
    if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("compression must be in (0, 1]");
  }

  const std::size_t per_doc = options.methods.size() * options.compressions.size();
  std::vector<std::vector<EvalRow>> rows(corpus.size());
  ParallelFor(corpus.size(), options.threads, [&](std::size_t i) {
    const PreparedDocument prepared(corpus[i].document, table, stopwords, config);
    const Document& doc = prepared.doc();
    const auto gold = MetricTokens(corpus[i].gold_summary);
    const auto doc_tokens = MetricTokens(doc);
    const double doc_coherence = Coherence(doc, table);
    rows[i].reserve(per_doc);
    for (Method m : options.methods) {
      for (double c : options.compressions) {
        const std::size_t budget = BudgetTokens(doc, c);
        SummaryResult result;
        switch (m) {
          case Method::kMls: result = prepared.SummarizeTokens(budget); break;
          case Method::kA1: result = BaselineA1(doc, budget, options.a1_stride, options.a1_seed); break;
          case Method::kA2: result = BaselineA2(doc, budget, table, config.pagerank); break;
        }
        EvalRow row;
        row.doc_id = doc.id;
        row.method = m;
        row.compression = c;
        row.budget = budget;
        row.token_count = result.token_count;
        row.values = Score(prepared, result, gold, stopwords, table, lexicon, doc_coherence, doc_tokens);
        rows[i].push_back(std::move(row));
      }
    }
  });

  for (auto& doc_rows : rows) {
    for (auto& row : doc_rows) report.rows.push_back(std::move(row));
  }
  for (std::size_t mi = 0; mi < options.methods.size(); ++mi) {
    for (std::size_t ci = 0; ci < options.compressions.size(); ++ci) {
      EvalCell cell;
      cell.method = options.methods[mi];
      cell.compression = options.compressions[ci];
      const std::size_t offset = mi * options.compressions.size() + ci;
      for (std::size_t d = 0; d < corpus.size(); ++d) {
        const auto& row = report.rows[d * per_doc + offset];
        for (std::size_t k = 0; k < kNumMetrics; ++k) cell.means[k] += row.values[k];
        ++cell.documents;
      }
      for (double& x : cell.means) x /= static_cast<double>(cell.documents);
      report.cells.push_back(cell);
    }
  }
  return report;
}

void WriteCsv(const EvalReport& report, std::ostream& out) {
  out << "doc_id,method,compression,budget,token_count";
  for (auto name : kMetricNames) out << ',' << name;
  out << '\n';
  for (const auto& row : report.rows) {
    std::string id = row.doc_id;
    if (id.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : id) {
        if (ch == '"') quoted.push_back('"');
        quoted.push_back(ch);
      }
      id = quoted + "\"";
    }
    out << id << ',' << ToString(row.method) << ',' << fmt::format("{:.17g}", row.compression)
        << ',' << row.budget << ',' << row.token_count;
    for (double v : row.values) out << ',' << fmt::format("{:.6f}", v);
    out << '\n';
  }
}

std::string FormatTable(const EvalReport& report) {
  std::vector<Method> methods;
  std::vector<double> compressions;
  for (const auto& cell : report.cells) {
    if (std::find(methods.begin(), methods.end(), cell.method) == methods.end()) methods.push_back(cell.method);
    if (std::find(compressions.begin(), compressions.end(), cell.compression) == compressions.end()) {
      compressions.push_back(cell.compression);
    }
  }
  auto find = [&](Method m, double c) -> const EvalCell* {
    for (const auto& cell : report.cells) {
      if (cell.method == m && cell.compression == c) return &cell;
    }
    return nullptr;
  };

  std::string out;
  for (std::size_t k = 0; k < kNumMetrics; ++k) {
    out += fmt::format("{:<16}", kMetricNames[k]);
    for (double c : compressions) out += fmt::format("{:>10}", FormatCompression(c));
    out += '\n';
    for (Method m : methods) {
      out += fmt::format("  {:<14}", ToString(m));
      for (double c : compressions) {
        const EvalCell* cell = find(m, c);
        out += cell ? fmt::format("{:>10.2f}", cell->means[k]) : fmt::format("{:>10}", "-");
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

std::string PlotSvg(const EvalReport& report, MetricId metric) {
  constexpr double kWidth = 640, kHeight = 400, kLeft = 60, kRight = 120, kTop = 30, kBottom = 50;
  constexpr std::array<std::string_view, 3> kColors{"#1f77b4", "#d62728", "#2ca02c"};
  const std::size_t k = static_cast<std::size_t>(metric);

  double x_min = 1.0, x_max = 0.0, y_max = 0.0;
  for (const auto& cell : report.cells) {
    x_min = std::min(x_min, cell.compression);
    x_max = std::max(x_max, cell.compression);
    y_max = std::max(y_max, cell.means[k]);
  }
  if (report.cells.empty()) x_min = x_max = 0.5;
  if (y_max <= 0.0) y_max = 1.0;
  // log2 x axis, so the doubling budgets are evenly spaced.
  const double lx_min = std::log2(x_min), lx_max = std::log2(x_max);
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](double c) {
    return lx_max > lx_min ? kLeft + (std::log2(c) - lx_min) / (lx_max - lx_min) * plot_w
                           : kLeft + plot_w / 2.0;
  };
  auto py = [&](double v) { return kTop + plot_h - v / y_max * plot_h; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n",
      kWidth, kHeight);
  svg += fmt::format("<text x=\"{}\" y=\"18\">{} vs. compression</text>\n", kLeft, kMetricNames[k]);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kLeft,
                     kTop + plot_h, kLeft + plot_w);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft,
                     kTop, kTop + plot_h);
  svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.2f}</text>\n", kLeft - 6, kTop + 4,
                     y_max);
  svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">0</text>\n", kLeft - 6,
                     kTop + plot_h + 4);

  std::vector<Method> methods;
  std::vector<double> ticks;
  for (const auto& cell : report.cells) {
    if (std::find(methods.begin(), methods.end(), cell.method) == methods.end()) methods.push_back(cell.method);
    if (std::find(ticks.begin(), ticks.end(), cell.compression) == ticks.end()) ticks.push_back(cell.compression);
  }
  for (double c : ticks) {
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", px(c),
                       kTop + plot_h + 18, FormatCompression(c));
  }
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    std::vector<const EvalCell*> line;
    for (const auto& cell : report.cells) {
      if (cell.method == methods[mi]) line.push_back(&cell);
    }
    std::sort(line.begin(), line.end(),
              [](const EvalCell* a, const EvalCell* b) { return a->compression < b->compression; });
    const auto color = kColors[static_cast<std::size_t>(methods[mi]) % kColors.size()];
    std::string points;
    for (const EvalCell* cell : line) {
      points += fmt::format("{:.1f},{:.1f} ", px(cell->compression), py(cell->means[k]));
    }
    svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color,
                       points);
    for (const EvalCell* cell : line) {
      svg += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"{}\"/>\n", px(cell->compression),
                         py(cell->means[k]), color);
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", kLeft + plot_w + 10,
                       kTop + 16 + 16 * static_cast<int>(mi), color, ToString(methods[mi]));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace mls
