#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "comptra/language.hpp"

namespace comptra {

struct SentencePair {
  std::size_t id = 0;
  std::string source;
  std::string target;

  bool operator==(const SentencePair&) const = default;
};

/// Immutable once loaded. Pair ids are positions: pairs[i].id == i.
struct ParallelCorpus {
  std::vector<SentencePair> pairs;
  LanguageTag src;
  LanguageTag tgt;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  const SentencePair& operator[](std::size_t i) const { return pairs[i]; }

  bool operator==(const ParallelCorpus&) const = default;
};

enum class CorpusFormat { AlignedText, Tsv, Jsonl };

CorpusFormat corpus_format_from_string(const std::string& name);

/// `target_path` is only read for AlignedText. Sentences are whitespace
/// trimmed; an empty source line is rejected with MalformedRecord(line).
ParallelCorpus load_parallel_corpus(const std::string& source_path,
                                    const std::string& target_path,
                                    CorpusFormat format,
                                    const LanguageTag& src,
                                    const LanguageTag& tgt);

/// `source<TAB>target` per line.
void write_tsv(const ParallelCorpus& corpus, const std::string& path);

struct ValidationReport {
  std::size_t total = 0;
  std::size_t empty_targets = 0;
  std::size_t duplicate_sources = 0;

  bool operator==(const ValidationReport&) const = default;
};

ValidationReport validate_corpus(const ParallelCorpus& corpus);

struct DependencyToken {
  std::string form;
  std::size_t head = 0;  // 0 = root, otherwise 1-based token index
  std::string deprel;
};

struct DependencyTree {
  std::vector<DependencyToken> tokens;

  std::size_t size() const { return tokens.size(); }
};

/// Throws MultipleRoots / NoRoot (block number is 1-based) or MalformedConllu
/// when a head is out of range or self-referential.
void check_tree(const DependencyTree& tree, std::size_t block_no);

/// Reads the ID, FORM, HEAD and DEPREL columns of a CoNLL-U file. A
/// "# sent_id = N" comment binds the block to corpus id N; otherwise blocks
/// bind by order.
std::map<std::size_t, DependencyTree> load_dependency_trees(const std::string& path);
std::map<std::size_t, DependencyTree> parse_conllu(const std::string& content);

}  // namespace comptra
