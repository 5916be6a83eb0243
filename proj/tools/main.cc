// mls: budgeted summarization from the command line, plus the HTTP service.
//
// Exit codes: 0 success, 1 error, 2 budget too small for any sentence.
// Every option can also be set through an environment variable named
// MLS_<OPTION> (upper case, dashes as underscores), e.g. MLS_EMBEDDINGS.

#include <CLI11.hpp>
#include <httplib.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "mls/evaluation.h"
#include "mls/resources.h"
#include "mls/serialization.h"
#include "mls/weight_search.h"
#include "service.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

std::string EnvName(std::string_view flag) {
  std::string env = "MLS_";
  for (char c : flag) env.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return env;
}

template <typename T>
CLI::Option* Flag(CLI::App* app, std::string_view name, T& target, std::string_view help) {
  return app->add_option("--" + std::string(name), target, std::string(help))->envname(EnvName(name));
}

struct Common {
  std::string embeddings;
  std::string stopwords;
  std::string prototype = "textrank";
  double prototype_ratio = mls::kDefaultPrototypeRatio;
  std::string weights;
  std::uint64_t seed = 1;
  std::size_t lda_iterations = 1000;
  std::size_t beam_width = 4;
};

void AddCommon(CLI::App* app, Common& c, bool needs_embeddings = true) {
  auto* emb = Flag(app, "embeddings", c.embeddings, "word vectors, one `token v1 ... vd` per line");
  if (needs_embeddings) emb->required();
  Flag(app, "stopwords", c.stopwords, "stop-word list (one per line); bundled list by default");
  Flag(app, "prototype", c.prototype, "prototype builder: textrank or greedy")
      ->check(CLI::IsMember({"textrank", "greedy"}));
  Flag(app, "prototype-ratio", c.prototype_ratio, "prototype length as a fraction of the document")
      ->check(CLI::Range(0.0, 1.0));
  Flag(app, "weights", c.weights, "weights JSON written by train-weights");
  Flag(app, "seed", c.seed, "random seed for LDA and baseline A1");
  Flag(app, "lda-iterations", c.lda_iterations, "Gibbs sweeps for the topic model");
  Flag(app, "beam-width", c.beam_width, "expansion candidates kept before re-ranking");
}

mls::PipelineConfig MakeConfig(const Common& c) {
  mls::PipelineConfig config;
  config.prototype = mls::ParsePrototypeStrategy(c.prototype);
  config.prototype_ratio = c.prototype_ratio;
  config.kernels.lda.seed = c.seed;
  config.kernels.lda.iterations = c.lda_iterations;
  config.decode.beam_width = c.beam_width;
  if (!c.weights.empty()) config.weights = mls::LoadWeights(c.weights);
  return config;
}

mls::StopwordSet Stopwords(const Common& c) {
  return c.stopwords.empty() ? mls::resources::DefaultStopwords() : mls::LoadStopwords(c.stopwords);
}

mls::EmbeddingTable Embeddings(const Common& c) {
  if (!fs::exists(c.embeddings)) throw std::runtime_error("embeddings file not found: " + c.embeddings);
  return mls::LoadEmbeddings(c.embeddings);
}

std::string ReadInput(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  if (!fs::exists(path)) throw std::runtime_error("input file not found: " + path);
  return mls::ReadFile(path);
}

void Emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + out_path);
}

struct SummarizeArgs {
  Common common;
  std::string text;
  std::optional<double> budget;
  std::optional<std::size_t> tokens;
  std::string kernels;
  bool trace = false;
  std::string format = "json";
  std::string out;
};

int Summarize(const SummarizeArgs& a) {
  const auto config = MakeConfig(a.common);
  const auto table = Embeddings(a.common);
  const auto stopwords = Stopwords(a.common);
  mls::Document doc = mls::MakeDocument("input", ReadInput(a.text));
  if (doc.empty()) throw std::runtime_error("input contains no sentences");

  std::unique_ptr<mls::PreparedDocument> prepared;
  if (a.kernels.empty()) {
    prepared = std::make_unique<mls::PreparedDocument>(std::move(doc), table, stopwords, config);
  } else {
    const auto multiplex = mls::MultiplexFromJson(json::parse(mls::ReadFile(a.kernels)));
    prepared = std::make_unique<mls::PreparedDocument>(std::move(doc), multiplex, table, stopwords, config);
  }
  const mls::SummaryResult result =
      a.tokens ? prepared->SummarizeTokens(*a.tokens) : prepared->Summarize(*a.budget);

  if (a.format == "text") {
    Emit(a.out, mls::SummaryText(prepared->doc(), result));
  } else {
    json j = mls::ToJson(prepared->doc(), result, {.trace = a.trace, .text = true});
    if (a.budget) j["compression"] = *a.budget;
    j["weights"] = config.weights;
    if (a.trace) j["attention"] = mls::AttentionJson(*prepared, result);
    Emit(a.out, j.dump(2));
  }
  if (result.budget_infeasible) {
    spdlog::error("budget of {} tokens is below every candidate sentence", result.budget);
    return kExitInfeasible;
  }
  return 0;
}

struct BuildKernelsArgs {
  Common common;
  std::string text;
  std::string out;
};

int BuildKernels(const BuildKernelsArgs& a) {
  const auto config = MakeConfig(a.common);
  const auto table = Embeddings(a.common);
  const auto stopwords = Stopwords(a.common);
  const mls::Document doc = mls::MakeDocument("input", ReadInput(a.text));
  if (doc.empty()) throw std::runtime_error("input contains no sentences");
  const auto multiplex = mls::BuildMultiplex(doc, stopwords, table, config.weights, config.kernels);
  Emit(a.out, mls::ToJson(multiplex).dump());
  return 0;
}

struct TrainArgs {
  Common common;
  std::string corpus;
  double step = 0.1;
  double c_eval = mls::kDefaultEvalCompression;
  unsigned threads = 0;
  std::string out;
};

int TrainWeights(const TrainArgs& a) {
  const auto config = MakeConfig(a.common);
  const auto table = Embeddings(a.common);
  const auto stopwords = Stopwords(a.common);
  const auto corpus = mls::LoadCorpus(a.corpus);
  mls::WeightGrid grid;
  grid.step = a.step;
  const std::size_t points = grid.Points().size();
  spdlog::info("grid of {} weight points over {} validation documents", points, corpus.size());
  const auto result = mls::GridSearchWeights(corpus, table, stopwords, config, a.c_eval, grid, a.threads);
  std::cerr << "grid points: " << points << "\nbest rouge1: " << result.rouge1 << " at ("
            << result.weights[0] << ", " << result.weights[1] << ", " << result.weights[2] << ")\n";
  Emit(a.out, mls::ToJson(result).dump(2));
  return 0;
}

struct EvaluateArgs {
  Common common;
  std::string corpus;
  std::string out = ".";
  std::vector<std::string> methods{"mls", "a1", "a2"};
  std::vector<double> compressions{mls::kStandardCompressions.begin(), mls::kStandardCompressions.end()};
  bool plot = false;
  std::string plot_metric = "rouge1";
  unsigned threads = 0;
};

int Evaluate(const EvaluateArgs& a) {
  const auto config = MakeConfig(a.common);
  const auto table = Embeddings(a.common);
  const auto stopwords = Stopwords(a.common);
  const auto corpus = mls::LoadCorpus(a.corpus);
  mls::EvalOptions options;
  options.methods.clear();
  for (const auto& m : a.methods) options.methods.push_back(mls::ParseMethod(m));
  options.compressions = a.compressions;
  options.a1_seed = a.common.seed;
  options.threads = a.threads;
  const auto report = mls::EvaluateCorpus(corpus, table, stopwords, config, options);

  fs::create_directories(a.out);
  {
    std::ofstream csv(fs::path(a.out) / "evaluation.csv");
    mls::WriteCsv(report, csv);
  }
  const std::string table_text = mls::FormatTable(report);
  Emit((fs::path(a.out) / "evaluation.txt").string(), table_text);
  std::cout << table_text;
  if (a.plot) {
    const auto metric = mls::ParseMetricId(a.plot_metric);
    Emit((fs::path(a.out) / ("evaluation_" + a.plot_metric + ".svg")).string(), mls::PlotSvg(report, metric));
  }
  return 0;
}

struct ServeArgs {
  Common common;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string persist;
};

int Serve(const ServeArgs& a) {
  const auto table = Embeddings(a.common);
  mls::service::ServiceOptions options;
  options.config = MakeConfig(a.common);
  if (!a.persist.empty()) options.persist_dir = a.persist;
  mls::service::SummaryService service(table, Stopwords(a.common), options);
  httplib::Server server;
  service.Register(server);
  spdlog::info("listening on {}:{}", a.host, a.port);
  if (!server.listen(a.host, a.port)) throw std::runtime_error("cannot listen on port " + std::to_string(a.port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("mls"));

  CLI::App app{"Length-budgeted extract-then-expand summarization"};
  app.require_subcommand(1);

  SummarizeArgs summarize;
  auto* sum_cmd = app.add_subcommand("summarize", "summarize one document at a budget");
  AddCommon(sum_cmd, summarize.common);
  Flag(sum_cmd, "text", summarize.text, "input text file, - for stdin")->required();
  auto* budget = Flag(sum_cmd, "budget", summarize.budget, "compression c in (0, 1]")
                     ->check(CLI::Range(0.0, 1.0));
  auto* tokens = Flag(sum_cmd, "tokens", summarize.tokens, "absolute budget in tokens");
  budget->excludes(tokens);
  tokens->excludes(budget);
  Flag(sum_cmd, "kernels", summarize.kernels, "precomputed kernels from build-kernels");
  sum_cmd->add_flag("--trace", summarize.trace, "include the per-step decoding trace")->envname("MLS_TRACE");
  Flag(sum_cmd, "format", summarize.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  Flag(sum_cmd, "out", summarize.out, "output file (stdout by default)");

  BuildKernelsArgs build;
  auto* build_cmd = app.add_subcommand("build-kernels", "compute the three kernels of a document");
  AddCommon(build_cmd, build.common);
  Flag(build_cmd, "text", build.text, "input text file, - for stdin")->required();
  Flag(build_cmd, "out", build.out, "output JSON file (stdout by default)");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train-weights", "grid-search the head weights on a corpus");
  AddCommon(train_cmd, train.common);
  Flag(train_cmd, "corpus", train.corpus, "JSONL corpus with id, text, summary")->required();
  Flag(train_cmd, "step", train.step, "lattice step for w1 and w2")->check(CLI::PositiveNumber);
  Flag(train_cmd, "c-eval", train.c_eval, "compression used to score each grid point")
      ->check(CLI::Range(0.0, 1.0));
  Flag(train_cmd, "threads", train.threads, "worker threads (0 = all cores)");
  Flag(train_cmd, "out", train.out, "weights JSON file (stdout by default)");

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "metrics for MLS and the baselines on a corpus");
  AddCommon(eval_cmd, eval.common);
  Flag(eval_cmd, "corpus", eval.corpus, "JSONL corpus with id, text, summary")->required();
  Flag(eval_cmd, "out", eval.out, "output directory");
  Flag(eval_cmd, "methods", eval.methods, "subset of mls, a1, a2")->delimiter(',');
  Flag(eval_cmd, "compressions", eval.compressions, "budgets to evaluate")->delimiter(',');
  eval_cmd->add_flag("--plot", eval.plot, "write an SVG of score vs. compression")->envname("MLS_PLOT");
  Flag(eval_cmd, "plot-metric", eval.plot_metric, "metric to plot");
  Flag(eval_cmd, "threads", eval.threads, "worker threads (0 = all cores)");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP API");
  AddCommon(serve_cmd, serve.common);
  Flag(serve_cmd, "host", serve.host, "bind address");
  Flag(serve_cmd, "port", serve.port, "TCP port")->check(CLI::Range(0, 65535));
  Flag(serve_cmd, "persist", serve.persist, "directory for ingested documents");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*sum_cmd) {
      if (!summarize.budget && !summarize.tokens) throw std::runtime_error("one of --budget or --tokens is required");
      return Summarize(summarize);
    }
    if (*build_cmd) return BuildKernels(build);
    if (*train_cmd) return TrainWeights(train);
    if (*eval_cmd) return Evaluate(eval);
    if (*serve_cmd) return Serve(serve);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  }
  return kExitError;
}
