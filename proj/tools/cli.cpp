#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "comptra/corpus.hpp"
#include "comptra/decompose.hpp"
#include "comptra/error.hpp"
#include "comptra/language.hpp"
#include "comptra/llm_client.hpp"
#include "comptra/metrics.hpp"
#include "comptra/pipeline.hpp"
#include "comptra/prompts.hpp"
#include "comptra/retrieval.hpp"

namespace comptra::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kSentenceError = 2;

enum class OptType { Str, Int, Real };

struct OptDef {
  std::string key;
  OptType type;
  json fallback;
  std::string help;
};

std::string flag_of(const std::string& key) {
  std::string flag = "--" + key;
  for (auto& c : flag)
    if (c == '_') c = '-';
  return flag;
}

/// Flags of one subcommand, resolved against defaults and an optional JSON
/// config file into a single flat object.
class OptionSet {
 public:
  OptionSet(CLI::App* app, std::vector<OptDef> defs, bool with_config) : defs_(std::move(defs)) {
    for (const auto& s : defs_) {
      auto* opt = app->add_option(flag_of(s.key), raw_[s.key], s.help)
                      ->type_name(s.type == OptType::Int ? "INT" : s.type == OptType::Real ? "FLOAT" : "TEXT");
      if (!s.fallback.is_null()) opt->default_str(s.fallback.is_string() ? s.fallback.get<std::string>()
                                                                          : s.fallback.dump());
      options_[s.key] = opt;
    }
    if (with_config) app->add_option("--config", config_path_, "JSON config file (flags take precedence)");
  }

  json resolve() const {
    json merged = json::object();
    for (const auto& s : defs_) merged[s.key] = s.fallback;
    if (!config_path_.empty()) merge_config(merged);
    for (const auto& s : defs_)
      if (options_.at(s.key)->count() > 0) merged[s.key] = convert(s, raw_.at(s.key));
    return merged;
  }

 private:
  void merge_config(json& merged) const {
    std::ifstream in(config_path_);
    if (!in) throw Error(ErrorKind::MissingFile, "--config: " + config_path_);
    json file;
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidConfig, "--config: " + std::string(e.what()));
    }
    // A run manifest is accepted as a config: its "config" block is the run.
    if (file.is_object() && file.contains("tool_version") && file.contains("config")) file = file["config"];
    if (!file.is_object()) throw Error(ErrorKind::InvalidConfig, "--config: top level must be an object");
    for (const auto& [key, value] : file.items()) {
      const OptDef* def = find(key);
      if (def == nullptr) throw Error(ErrorKind::InvalidConfig, "--config: unknown key '" + key + "'");
      if (value.is_null()) {
        merged[key] = nullptr;
        continue;
      }
      const bool ok = (def->type == OptType::Str && value.is_string()) ||
                      (def->type == OptType::Int && value.is_number_integer()) ||
                      (def->type == OptType::Real && value.is_number());
      if (!ok) throw Error(ErrorKind::InvalidConfig, "--config: key '" + key + "' has the wrong type");
      merged[key] = value;
    }
  }

  const OptDef* find(const std::string& key) const {
    for (const auto& s : defs_)
      if (s.key == key) return &s;
    return nullptr;
  }

  static json convert(const OptDef& def, const std::string& text) {
    try {
      std::size_t used = 0;
      switch (def.type) {
        case OptType::Str: return text;
        case OptType::Int: {
          long long v = std::stoll(text, &used);
          if (used == text.size()) return v;
          break;
        }
        case OptType::Real: {
          double v = std::stod(text, &used);
          if (used == text.size()) return v;
          break;
        }
      }
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidConfig, flag_of(def.key) + ": invalid value '" + text + "'");
  }

  std::vector<OptDef> defs_;
  std::map<std::string, std::string> raw_;
  std::map<std::string, CLI::Option*> options_;
  std::string config_path_;
};

std::string str(const json& cfg, const std::string& key) {
  const auto& v = cfg.at(key);
  return v.is_null() ? std::string() : v.get<std::string>();
}

long long integer(const json& cfg, const std::string& key) { return cfg.at(key).get<long long>(); }

double real(const json& cfg, const std::string& key) { return cfg.at(key).get<double>(); }

/// Re-raises any library error with the responsible flag in front.
template <typename F>
auto for_flag(const std::string& key, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::string message = e.what();
    const auto prefix = std::string(to_string(e.kind())) + ": ";
    if (message.starts_with(prefix)) message.erase(0, prefix.size());
    throw Error(e.kind(), flag_of(key) + ": " + message);
  }
}

LanguageTag language(const json& cfg, const std::string& key) {
  const auto code = str(cfg, key);
  if (code.empty()) throw Error(ErrorKind::InvalidConfig, flag_of(key) + " is required");
  return for_flag(key, [&] { return LanguageTag::from_code(code); });
}

void require(const json& cfg, const std::string& key) {
  if (str(cfg, key).empty()) throw Error(ErrorKind::InvalidConfig, flag_of(key) + " is required");
}

CorpusFormat corpus_format(const std::string& path, const std::string& name) {
  if (name != "auto") return corpus_format_from_string(name);
  const auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".tsv") return CorpusFormat::Tsv;
  if (ext == ".jsonl") return CorpusFormat::Jsonl;
  return CorpusFormat::AlignedText;
}

/// Loads `<prefix>` (+ `<prefix>_target` for aligned text). Without a target
/// file an aligned corpus gets empty targets.
ParallelCorpus load_corpus(const json& cfg, const std::string& prefix, const LanguageTag& src,
                           const LanguageTag& tgt, bool need_targets) {
  require(cfg, prefix);
  const auto path = str(cfg, prefix);
  const auto format = for_flag(prefix + "_format", [&] { return corpus_format(path, str(cfg, prefix + "_format")); });
  auto target = str(cfg, prefix + "_target");
  if (format == CorpusFormat::AlignedText && target.empty()) {
    if (need_targets)
      throw Error(ErrorKind::InvalidConfig, flag_of(prefix + "_target") + " is required for aligned text");
    auto corpus = for_flag(prefix, [&] { return load_parallel_corpus(path, path, format, src, tgt); });
    for (auto& p : corpus.pairs) p.target.clear();
    return corpus;
  }
  return for_flag(prefix, [&] { return load_parallel_corpus(path, target, format, src, tgt); });
}

std::vector<OptDef> corpus_options(const std::string& prefix, const std::string& what) {
  return {
      {prefix, OptType::Str, nullptr, what + " (.tsv, .jsonl, or one sentence per line)"},
      {prefix + "_target", OptType::Str, nullptr, "target side of an aligned-text " + what},
      {prefix + "_format", OptType::Str, "auto", "auto|text|tsv|jsonl"},
  };
}

std::vector<OptDef> backend_options() {
  return {
      {"backend", OptType::Str, "mock", "http|mock|cassette"},
      {"endpoint", OptType::Str, nullptr, "chat endpoint base URL (http backend)"},
      {"model", OptType::Str, nullptr, "model name sent to the endpoint"},
      {"auth_env", OptType::Str, "LLM_API_KEY", "environment variable holding the bearer token"},
      {"cassette", OptType::Str, nullptr, "cassette to replay (cassette backend)"},
      {"mock_script", OptType::Str, nullptr, "JSON rule file (mock backend)"},
      {"record", OptType::Str, nullptr, "append every exchange to this cassette"},
      {"timeout", OptType::Real, 120.0, "per-request timeout in seconds"},
      {"max_retries", OptType::Int, 3, "retries on 429/5xx/transport errors"},
      {"backoff_base", OptType::Real, 1.0, "first retry delay in seconds"},
      {"max_concurrency", OptType::Int, 8, "in-flight request bound"},
      {"prompt_dir", OptType::Str, nullptr, "directory overriding the prompt templates"},
  };
}

BackendConfig backend_config(const json& cfg) {
  BackendConfig b;
  b.kind = for_flag("backend", [&] { return backend_kind_from_string(str(cfg, "backend")); });
  b.endpoint_url = str(cfg, "endpoint");
  b.model_name = str(cfg, "model");
  b.auth_env_var = str(cfg, "auth_env");
  b.timeout_s = real(cfg, "timeout");
  b.max_retries = static_cast<int>(integer(cfg, "max_retries"));
  b.backoff_base_s = real(cfg, "backoff_base");
  b.max_concurrency = static_cast<int>(integer(cfg, "max_concurrency"));
  b.mock_script_path = str(cfg, "mock_script");
  if (b.kind == BackendKind::Cassette) {
    if (!str(cfg, "record").empty())
      throw Error(ErrorKind::InvalidConfig, "--record cannot be combined with --backend cassette");
    b.cassette_path = str(cfg, "cassette");
  } else {
    b.cassette_path = str(cfg, "record");
  }
  b.validate();
  return b;
}

PromptSet prompt_set(const json& cfg) {
  const auto dir = str(cfg, "prompt_dir");
  if (dir.empty()) return PromptSet::builtin();
  return for_flag("prompt_dir", [&] { return PromptSet::from_directory(dir); });
}

std::vector<OptDef> strategy_options() {
  return {
      {"strategy", OptType::Str, "llm", "llm|words|repeat|paraphrase|structure"},
      {"repeat_count", OptType::Int, 4, "copies for the repeat strategy"},
      {"trees", OptType::Str, nullptr, "CoNLL-U trees for the structure strategy"},
      {"stopwords", OptType::Str, nullptr, "stop-word list for the words strategy"},
  };
}

DecompositionStrategy strategy(const json& cfg) {
  DecompositionStrategy s;
  s.kind = for_flag("strategy", [&] { return strategy_kind_from_string(str(cfg, "strategy")); });
  s.repeat_count = static_cast<int>(integer(cfg, "repeat_count"));
  if (s.repeat_count < 1) throw Error(ErrorKind::InvalidConfig, "--repeat-count must be >= 1");
  if (s.kind == DecompositionStrategy::Kind::Structure && str(cfg, "trees").empty())
    throw Error(ErrorKind::InvalidConfig, "--trees is required for the structure strategy");
  return s;
}

std::map<std::size_t, DependencyTree> trees(const json& cfg) {
  const auto path = str(cfg, "trees");
  if (path.empty()) return {};
  return for_flag("trees", [&] { return load_dependency_trees(path); });
}

StopWords stopwords(const json& cfg) {
  const auto path = str(cfg, "stopwords");
  if (path.empty()) return builtin_stopwords();
  return for_flag("stopwords", [&] { return load_stopwords(path); });
}

std::vector<OptDef> retriever_options() {
  return {
      {"retriever", OptType::Str, "bm25", "bm25|lcs|cosine"},
      {"k", OptType::Int, 5, "demonstrations per prompt"},
      {"embeddings", OptType::Str, nullptr, "pool embedding matrix (cosine retriever)"},
      {"embed_endpoint", OptType::Str, nullptr, "embedding endpoint for queries (cosine retriever)"},
  };
}

struct RetrieverBundle {
  std::unique_ptr<Embedder> embedder;
  std::unique_ptr<Retriever> retriever;
};

RetrieverBundle make_retriever(const json& cfg, const ParallelCorpus& pool) {
  RetrieverBundle bundle;
  const auto kind = for_flag("retriever", [&] { return retriever_kind_from_string(str(cfg, "retriever")); });
  switch (kind) {
    case RetrieverKind::Bm25: bundle.retriever = make_bm25_retriever(pool); break;
    case RetrieverKind::Lcs: bundle.retriever = make_lcs_retriever(pool); break;
    case RetrieverKind::Cosine: {
      require(cfg, "embeddings");
      require(cfg, "embed_endpoint");
      auto matrix = for_flag("embeddings", [&] { return load_embedding_matrix(str(cfg, "embeddings")); });
      bundle.embedder = make_http_embedder(str(cfg, "embed_endpoint"), real(cfg, "timeout"));
      bundle.retriever = for_flag("embeddings", [&] {
        return make_cosine_retriever(pool, std::move(matrix), *bundle.embedder);
      });
      break;
    }
  }
  return bundle;
}

json candidates_json(const std::vector<ScoredCandidate>& ranked, const ParallelCorpus& pool) {
  json arr = json::array();
  for (const auto& c : ranked)
    arr.push_back({{"pool_id", c.pool_id}, {"score", c.score}, {"source", pool[c.pool_id].source}});
  return arr;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json_file(const std::string& path, const json& value) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::MissingFile, path);
  out << value.dump(2) << '\n';
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

/// Plain text gives one hypothesis per line; a .jsonl trace gives each
/// record's "final" field.
std::vector<std::string> read_hypotheses(const std::string& path) {
  auto lines = read_lines(path);
  if (std::filesystem::path(path).extension() != ".jsonl") return lines;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      auto rec = json::parse(lines[i]);
      out.push_back(rec.at("final").get<std::string>());
    } catch (const json::exception&) {
      throw Error(ErrorKind::MalformedRecord, path + ":" + std::to_string(i + 1) + ": no \"final\" string");
    }
  }
  return out;
}

std::vector<OptDef> metric_options() {
  return {
      {"metric", OptType::Str, "chrfpp", "chrfpp|bleu"},
      {"bleu_tokenizer", OptType::Str, "whitespace_punct", "whitespace_punct|none"},
  };
}

MetricConfig metric_config(const json& cfg) {
  MetricConfig m;
  m.metric = for_flag("metric", [&] { return metric_kind_from_string(str(cfg, "metric")); });
  const auto tok = str(cfg, "bleu_tokenizer");
  if (tok == "whitespace_punct") {
    m.bleu.tokenizer = BleuTokenizer::WhitespacePunct;
  } else if (tok == "none") {
    m.bleu.tokenizer = BleuTokenizer::External;
  } else {
    throw Error(ErrorKind::InvalidConfig, "--bleu-tokenizer: unknown tokenizer '" + tok + "'");
  }
  m.validate();
  return m;
}

// --- subcommands -------------------------------------------------------------

int cmd_translate(const json& cfg, std::ostream& out) {
  const auto src = language(cfg, "src");
  const auto tgt = language(cfg, "tgt");
  require(cfg, "out");
  const auto mode = for_flag("mode", [&] { return translation_mode_from_string(str(cfg, "mode")); });

  PipelineConfig pc;
  pc.strategy = strategy(cfg);
  pc.retriever = for_flag("retriever", [&] { return retriever_kind_from_string(str(cfg, "retriever")); });
  pc.k = static_cast<int>(integer(cfg, "k"));
  pc.translate_max_tokens = static_cast<int>(integer(cfg, "translate_max_tokens"));
  pc.merge_max_tokens = static_cast<int>(integer(cfg, "merge_max_tokens"));
  pc.phrase_translator =
      for_flag("phrase_translator", [&] { return phrase_translator_from_string(str(cfg, "phrase_translator")); });
  pc.external_mt_endpoint = str(cfg, "mt_endpoint");
  pc.parallelism = static_cast<int>(integer(cfg, "parallelism"));
  pc.validate();

  const auto pool = load_corpus(cfg, "pool", src, tgt, true);
  const auto eval = load_corpus(cfg, "eval", src, tgt, false);
  if (pool.empty() && pc.k > 0) throw Error(ErrorKind::EmptyPool, "--pool has no sentences");
  const auto prompts = prompt_set(cfg);
  const auto stops = stopwords(cfg);
  const auto tree_map = trees(cfg);
  auto bundle = make_retriever(cfg, pool);
  LlmClient llm(backend_config(cfg));

  const auto profiles_path = str(cfg, "script_profiles");
  const auto profiles = profiles_path.empty()
                            ? ScriptProfileTable::builtin()
                            : for_flag("script_profiles", [&] { return ScriptProfileTable::load(profiles_path); });

  std::unique_ptr<QualityScorer> scorer;
  const auto scorer_name = str(cfg, "scorer");
  if (scorer_name == "lexical") {
    scorer = make_lexical_overlap_scorer();
  } else if (scorer_name == "constant") {
    scorer = make_constant_scorer(0.0);
  } else if (scorer_name == "http") {
    require(cfg, "scorer_url");
    scorer = make_http_scorer(str(cfg, "scorer_url"), real(cfg, "timeout"));
  } else {
    throw Error(ErrorKind::InvalidConfig, "--scorer: unknown scorer '" + scorer_name + "'");
  }

  PipelineResources res;
  res.pool = &pool;
  res.retriever = bundle.retriever.get();
  res.llm = &llm;
  res.prompts = &prompts;
  res.stopwords = &stops;
  res.trees = &tree_map;
  res.target_profile = profiles.lookup(tgt.code);
  res.scorer = scorer.get();
  Pipeline pipeline({src, tgt}, pc, res);

  const auto out_path = str(cfg, "out");
  write_json_file(out_path + ".manifest.json",
                  json{{"config", cfg}, {"tool_version", COMPTRA_VERSION}, {"timestamp", utc_timestamp()}});
  const auto summary = run_corpus(eval, pipeline, mode, out_path);
  out << json{{"n", summary.n},
              {"n_fallbacks", summary.n_fallbacks},
              {"n_errors", summary.n_errors},
              {"total_llm_calls", summary.total_llm_calls},
              {"trace", out_path}}
             .dump()
      << '\n';
  return summary.n_errors > 0 ? kSentenceError : kOk;
}

int cmd_evaluate(const json& cfg, std::ostream& out) {
  require(cfg, "hyp");
  require(cfg, "ref");
  const auto metric = metric_config(cfg);
  const auto hyps = for_flag("hyp", [&] { return read_hypotheses(str(cfg, "hyp")); });
  const auto refs = for_flag("ref", [&] { return read_lines(str(cfg, "ref")); });
  json report{{"metric", std::string(to_string(metric.metric))}, {"n", hyps.size()}};
  if (metric.metric == MetricKind::Bleu) {
    const auto detail = bleu_corpus_detail(hyps, refs, metric.bleu);
    report["score"] = detail.score;
    report["brevity_penalty"] = detail.brevity_penalty;
    report["precisions"] = detail.precisions;
    report["sys_len"] = detail.sys_len;
    report["ref_len"] = detail.ref_len;
  } else {
    report["score"] = chrfpp_corpus(hyps, refs, metric.chrf);
  }
  out << report.dump() << '\n';
  return kOk;
}

int cmd_compare(const json& cfg, std::ostream& out) {
  require(cfg, "hyp_a");
  require(cfg, "hyp_b");
  require(cfg, "ref");
  const auto metric = metric_config(cfg);
  BootstrapOptions opts;
  const auto n_samples = integer(cfg, "n_samples");
  const auto sample_size = integer(cfg, "sample_size");
  if (n_samples < 1 || sample_size < 1)
    throw Error(ErrorKind::InvalidConfig, "--n-samples and --sample-size must be positive");
  opts.n_samples = static_cast<std::size_t>(n_samples);
  opts.sample_size = static_cast<std::size_t>(sample_size);
  opts.alpha = real(cfg, "alpha");
  opts.seed = static_cast<std::uint64_t>(integer(cfg, "seed"));
  const auto a = for_flag("hyp_a", [&] { return read_hypotheses(str(cfg, "hyp_a")); });
  const auto b = for_flag("hyp_b", [&] { return read_hypotheses(str(cfg, "hyp_b")); });
  const auto refs = for_flag("ref", [&] { return read_lines(str(cfg, "ref")); });
  const auto r = paired_bootstrap(a, b, refs, metric, opts);
  out << json{{"metric", std::string(to_string(metric.metric))},
              {"n", refs.size()},
              {"seed", opts.seed},
              {"sample_size", opts.sample_size},
              {"alpha", opts.alpha},
              {"score_a", r.score_a},
              {"score_b", r.score_b},
              {"wins_a", r.wins_a},
              {"wins_b", r.wins_b},
              {"ties", r.ties},
              {"n_samples", r.n_samples},
              {"p_value", r.p_value},
              {"significant", r.significant}}
             .dump()
      << '\n';
  return kOk;
}

int cmd_decompose(const json& cfg, std::ostream& out) {
  require(cfg, "sentence");
  const auto strat = strategy(cfg);
  const auto prompts = prompt_set(cfg);
  const auto stops = stopwords(cfg);
  const auto tree_map = trees(cfg);
  std::unique_ptr<LlmClient> llm;
  if (strat.calls_llm()) llm = std::make_unique<LlmClient>(backend_config(cfg));

  DecomposeContext ctx;
  ctx.llm = llm.get();
  ctx.trees = &tree_map;
  ctx.stopwords = &stops;
  ctx.prompts = &prompts;
  ctx.sentence_id = static_cast<std::size_t>(integer(cfg, "sentence_id"));
  ctx.max_new_tokens = static_cast<int>(integer(cfg, "max_tokens"));
  const auto d = decompose(str(cfg, "sentence"), strat, ctx);
  out << json{{"original", d.phrase_set.original},
              {"phrases", d.phrase_set.phrases},
              {"strategy", std::string(to_string(strat.kind))},
              {"flags", d.flags},
              {"llm_calls", d.llm_calls}}
             .dump()
      << '\n';
  return kOk;
}

int cmd_retrieve(const json& cfg, std::ostream& out) {
  const auto src = language(cfg, "src");
  const auto tgt = language(cfg, "tgt");
  require(cfg, "query");
  const auto k = integer(cfg, "k");
  if (k < 0) throw Error(ErrorKind::InvalidConfig, "--k must be >= 0");
  const auto pool = load_corpus(cfg, "pool", src, tgt, true);
  auto bundle = make_retriever(cfg, pool);
  const auto ranked = bundle.retriever->top_k(str(cfg, "query"), static_cast<std::size_t>(k));
  out << candidates_json(ranked, pool).dump() << '\n';
  return kOk;
}

template <typename... Groups>
std::vector<OptDef> concat(Groups&&... groups) {
  std::vector<OptDef> all;
  (all.insert(all.end(), groups.begin(), groups.end()), ...);
  return all;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compositional translation with in-context LLMs"};
  app.set_version_flag("--version", std::string(COMPTRA_VERSION));
  app.require_subcommand(1);

  auto* translate = app.add_subcommand("translate", "translate an eval set and write a JSONL trace");
  OptionSet translate_opts(
      translate,
      concat(std::vector<OptDef>{{"mode", OptType::Str, "comptra", "zero|few|comptra|ensemble"},
                                  {"src", OptType::Str, nullptr, "source language code, e.g. eng_Latn"},
                                  {"tgt", OptType::Str, nullptr, "target language code, e.g. amh_Ethi"},
                                  {"out", OptType::Str, nullptr, "trace file; the manifest goes to <out>.manifest.json"},
                                  {"translate_max_tokens", OptType::Int, 500, "budget of translate and divide calls"},
                                  {"merge_max_tokens", OptType::Int, 2000, "budget of the merge call"},
                                  {"parallelism", OptType::Int, 1, "sentences and phrases in flight"},
                                  {"phrase_translator", OptType::Str, "llm", "llm|external"},
                                  {"mt_endpoint", OptType::Str, nullptr, "MT endpoint for --phrase-translator external"},
                                  {"script_profiles", OptType::Str, nullptr, "script profile table overriding the built-in one"},
                                  {"scorer", OptType::Str, "lexical", "lexical|constant|http (ensemble mode)"},
                                  {"scorer_url", OptType::Str, nullptr, "quality-estimation endpoint for --scorer http"},
                                  {"seed", OptType::Int, 13, "recorded in the manifest"}},
             corpus_options("pool", "selection pool"), corpus_options("eval", "evaluation set"), retriever_options(),
             strategy_options(), backend_options()),
      true);

  auto* evaluate = app.add_subcommand("evaluate", "score hypotheses against references");
  OptionSet evaluate_opts(evaluate,
                          concat(std::vector<OptDef>{{"hyp", OptType::Str, nullptr, "hypotheses (text or .jsonl trace)"},
                                                      {"ref", OptType::Str, nullptr, "references, one per line"}},
                                 metric_options()),
                          false);

  auto* compare = app.add_subcommand("compare", "paired bootstrap test of system A against system B");
  OptionSet compare_opts(compare,
                         concat(std::vector<OptDef>{{"hyp_a", OptType::Str, nullptr, "system A (text or .jsonl trace)"},
                                                     {"hyp_b", OptType::Str, nullptr, "system B (text or .jsonl trace)"},
                                                     {"ref", OptType::Str, nullptr, "references, one per line"},
                                                     {"seed", OptType::Int, 13, "bootstrap seed"},
                                                     {"n_samples", OptType::Int, 300, "bootstrap samples"},
                                                     {"sample_size", OptType::Int, 500, "sentences per sample"},
                                                     {"alpha", OptType::Real, 0.05, "significance level"}},
                                metric_options()),
                         false);

  auto* decompose_cmd = app.add_subcommand("decompose", "print the phrase set of one sentence");
  OptionSet decompose_opts(
      decompose_cmd,
      concat(std::vector<OptDef>{{"sentence", OptType::Str, nullptr, "sentence to decompose"},
                                  {"sentence_id", OptType::Int, 0, "tree binding for the structure strategy"},
                                  {"max_tokens", OptType::Int, 500, "budget of the divide call"}},
             strategy_options(), backend_options()),
      true);

  auto* retrieve = app.add_subcommand("retrieve", "print the top-k pool matches of a query");
  OptionSet retrieve_opts(retrieve,
                          concat(std::vector<OptDef>{{"query", OptType::Str, nullptr, "query sentence"},
                                                      {"src", OptType::Str, "eng_Latn", "pool source language"},
                                                      {"tgt", OptType::Str, "eng_Latn", "pool target language"},
                                                      {"timeout", OptType::Real, 120.0, "embedding request timeout"}},
                                 corpus_options("pool", "selection pool"), retriever_options()),
                          false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*translate) return cmd_translate(translate_opts.resolve(), out);
    if (*evaluate) return cmd_evaluate(evaluate_opts.resolve(), out);
    if (*compare) return cmd_compare(compare_opts.resolve(), out);
    if (*decompose_cmd) return cmd_decompose(decompose_opts.resolve(), out);
    if (*retrieve) return cmd_retrieve(retrieve_opts.resolve(), out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace comptra::cli
