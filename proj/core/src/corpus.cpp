#include "comptra/corpus.hpp"

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "comptra/error.hpp"
#include "comptra/text.hpp"

namespace comptra {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

void add_pair(ParallelCorpus& corpus, std::string source, std::string target, std::size_t line_no) {
  auto src = text::trim(source);
  if (src.empty())
    throw Error(ErrorKind::MalformedRecord, "line " + std::to_string(line_no) + ": empty source sentence");
  corpus.pairs.push_back({corpus.pairs.size(), std::move(src), text::trim(target)});
}

std::size_t parse_index(const std::string& s, std::size_t line_no) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorKind::MalformedConllu, "line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  return std::stoul(s);
}

}  // namespace

CorpusFormat corpus_format_from_string(const std::string& name) {
  if (name == "aligned_text" || name == "text") return CorpusFormat::AlignedText;
  if (name == "tsv") return CorpusFormat::Tsv;
  if (name == "jsonl") return CorpusFormat::Jsonl;
  throw Error(ErrorKind::InvalidConfig, "unknown corpus format '" + name + "'");
}

ParallelCorpus load_parallel_corpus(const std::string& source_path, const std::string& target_path,
                                    CorpusFormat format, const LanguageTag& src,
                                    const LanguageTag& tgt) {
  ParallelCorpus corpus;
  corpus.src = src;
  corpus.tgt = tgt;

  switch (format) {
    case CorpusFormat::AlignedText: {
      if (target_path.empty()) throw Error(ErrorKind::MissingFile, "aligned_text needs a target file");
      auto sources = read_lines(source_path);
      auto targets = read_lines(target_path);
      if (sources.size() != targets.size())
        throw Error(ErrorKind::LineCountMismatch,
                    std::to_string(sources.size()) + " source lines vs " + std::to_string(targets.size()) +
                        " target lines");
      for (std::size_t i = 0; i < sources.size(); ++i)
        add_pair(corpus, std::move(sources[i]), std::move(targets[i]), i + 1);
      break;
    }
    case CorpusFormat::Tsv: {
      auto lines = read_lines(source_path);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& line = lines[i];
        auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
          throw Error(ErrorKind::MalformedRecord,
                      "line " + std::to_string(i + 1) + ": expected exactly one tab");
        add_pair(corpus, line.substr(0, tab), line.substr(tab + 1), i + 1);
      }
      break;
    }
    case CorpusFormat::Jsonl: {
      auto lines = read_lines(source_path);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (text::trim(lines[i]).empty()) continue;
        nlohmann::json rec;
        try {
          rec = nlohmann::json::parse(lines[i]);
        } catch (const nlohmann::json::exception&) {
          throw Error(ErrorKind::MalformedRecord, "line " + std::to_string(i + 1) + ": invalid JSON");
        }
        if (!rec.is_object() || !rec.contains("source") || !rec.contains("target") ||
            !rec["source"].is_string() || !rec["target"].is_string())
          throw Error(ErrorKind::MalformedRecord,
                      "line " + std::to_string(i + 1) + ": needs string fields \"source\" and \"target\"");
        add_pair(corpus, rec["source"].get<std::string>(), rec["target"].get<std::string>(), i + 1);
      }
      break;
    }
  }
  return corpus;
}

void write_tsv(const ParallelCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::MissingFile, path);
  for (const auto& p : corpus.pairs) out << p.source << '\t' << p.target << '\n';
}

ValidationReport validate_corpus(const ParallelCorpus& corpus) {
  ValidationReport report;
  report.total = corpus.size();
  std::unordered_set<std::string> seen;
  for (const auto& p : corpus.pairs) {
    if (p.target.empty()) ++report.empty_targets;
    if (!seen.insert(p.source).second) ++report.duplicate_sources;
  }
  return report;
}

void check_tree(const DependencyTree& tree, std::size_t block_no) {
  std::size_t roots = 0;
  for (std::size_t i = 0; i < tree.tokens.size(); ++i) {
    const auto head = tree.tokens[i].head;
    if (head == 0) ++roots;
    if (head > tree.tokens.size())
      throw Error(ErrorKind::MalformedConllu,
                  "block " + std::to_string(block_no) + ": head " + std::to_string(head) + " out of range");
    if (head == i + 1)
      throw Error(ErrorKind::MalformedConllu,
                  "block " + std::to_string(block_no) + ": token " + std::to_string(i + 1) + " is its own head");
  }
  if (roots == 0) throw Error(ErrorKind::NoRoot, "block " + std::to_string(block_no));
  if (roots > 1)
    throw Error(ErrorKind::MultipleRoots, "block " + std::to_string(block_no) + " has " +
                                              std::to_string(roots) + " roots");
}

std::map<std::size_t, DependencyTree> parse_conllu(const std::string& content) {
  std::map<std::size_t, DependencyTree> trees;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  std::size_t block_no = 0;
  DependencyTree current;
  std::optional<std::size_t> bound_id;
  bool in_block = false;

  auto finish = [&] {
    if (!in_block) return;
    ++block_no;
    check_tree(current, block_no);
    std::size_t id = bound_id.value_or(block_no - 1);
    trees[id] = std::move(current);
    current = {};
    bound_id.reset();
    in_block = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) {
      finish();
      continue;
    }
    in_block = true;
    if (line[0] == '#') {
      auto body = text::trim(std::string_view(line).substr(1));
      if (body.rfind("sent_id", 0) == 0) {
        auto eq = body.find('=');
        if (eq != std::string::npos) {
          auto value = text::trim(std::string_view(body).substr(eq + 1));
          if (!value.empty() && value.find_first_not_of("0123456789") == std::string::npos)
            bound_id = std::stoul(value);
        }
      }
      continue;
    }
    std::vector<std::string> cols;
    {
      std::string cur;
      for (char c : line) {
        if (c == '\t') {
          cols.push_back(cur);
          cur.clear();
        } else {
          cur.push_back(c);
        }
      }
      cols.push_back(cur);
    }
    if (cols.size() < 8)
      throw Error(ErrorKind::MalformedConllu, "line " + std::to_string(line_no) + ": expected at least 8 columns");
    const auto& id = cols[0];
    // Multiword ranges ("3-4") and empty nodes ("5.1") carry no tree structure.
    if (id.find('-') != std::string::npos || id.find('.') != std::string::npos) continue;
    auto index = parse_index(id, line_no);
    if (index != current.tokens.size() + 1)
      throw Error(ErrorKind::MalformedConllu,
                  "line " + std::to_string(line_no) + ": token id " + id + " out of sequence");
    current.tokens.push_back({cols[1], parse_index(cols[6], line_no), cols[7]});
  }
  finish();
  return trees;
}

std::map<std::size_t, DependencyTree> load_dependency_trees(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_conllu(ss.str());
}

}  // namespace comptra
