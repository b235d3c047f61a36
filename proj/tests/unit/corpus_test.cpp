#include <gtest/gtest.h>

#include <random>

#include "comptra/corpus.hpp"
#include "comptra/error.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace comptra {
namespace {

const LanguageTag kEng = LanguageTag::from_code("eng_Latn");
const LanguageTag kAmh = LanguageTag::from_code("amh_Ethi");

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorKind::PreconditionFailed;
}

TEST(LoadCorpus, AlignedTextAssignsPositionalIds) {
  oracle::TempDir dir;
  auto src = dir.write("s.txt", "one\n  two  \nthree\n");
  auto tgt = dir.write("t.txt", " አንድ\nሁለት\nሶስት\n");
  auto c = load_parallel_corpus(src, tgt, CorpusFormat::AlignedText, kEng, kAmh);
  ASSERT_EQ(c.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(c[i].id, i);
  EXPECT_EQ(c[1].source, "two");
  EXPECT_EQ(c[2].target, "ሶስት");
  EXPECT_EQ(c.src, kEng);
  EXPECT_EQ(c.tgt, kAmh);
}

TEST(LoadCorpus, LineCountMismatch) {
  oracle::TempDir dir;
  std::string src_lines, tgt_lines;
  for (int i = 0; i < 997; ++i) src_lines += "s" + std::to_string(i) + "\n";
  for (int i = 0; i < 996; ++i) tgt_lines += "t" + std::to_string(i) + "\n";
  auto src = dir.write("s.txt", src_lines);
  auto tgt = dir.write("t.txt", tgt_lines);
  try {
    load_parallel_corpus(src, tgt, CorpusFormat::AlignedText, kEng, kAmh);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LineCountMismatch);
    EXPECT_NE(std::string(e.what()).find("997"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("996"), std::string::npos);
  }
}

TEST(LoadCorpus, JsonlRecord) {
  oracle::TempDir dir;
  auto p = dir.write("c.jsonl", "{\"source\":\"Hi\",\"target\":\"Salut\"}\n\n");
  auto c = load_parallel_corpus(p, "", CorpusFormat::Jsonl, kEng, kAmh);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].source, "Hi");
  EXPECT_EQ(c[0].target, "Salut");
}

TEST(LoadCorpus, MalformedRecords) {
  oracle::TempDir dir;
  auto missing_key = dir.write("a.jsonl", "{\"source\":\"Hi\"}\n");
  EXPECT_EQ(kind_of([&] { load_parallel_corpus(missing_key, "", CorpusFormat::Jsonl, kEng, kAmh); }),
            ErrorKind::MalformedRecord);
  auto not_json = dir.write("b.jsonl", "{oops\n");
  EXPECT_EQ(kind_of([&] { load_parallel_corpus(not_json, "", CorpusFormat::Jsonl, kEng, kAmh); }),
            ErrorKind::MalformedRecord);
  auto no_tab = dir.write("c.tsv", "a\tb\nno tab\n");
  try {
    load_parallel_corpus(no_tab, "", CorpusFormat::Tsv, kEng, kAmh);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedRecord);
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
  auto empty_source = dir.write("d.tsv", "a\tb\n  \tc\n");
  EXPECT_EQ(kind_of([&] { load_parallel_corpus(empty_source, "", CorpusFormat::Tsv, kEng, kAmh); }),
            ErrorKind::MalformedRecord);
}

TEST(LoadCorpus, MissingFile) {
  EXPECT_EQ(kind_of([&] {
              load_parallel_corpus("/nonexistent/x.txt", "/nonexistent/y.txt", CorpusFormat::AlignedText, kEng,
                                   kAmh);
            }),
            ErrorKind::MissingFile);
}

TEST(LoadCorpus, EmptyTargetsAreAllowed) {
  oracle::TempDir dir;
  auto p = dir.write("c.tsv", "a\tx\nb\t\n");
  auto c = load_parallel_corpus(p, "", CorpusFormat::Tsv, kEng, kAmh);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[1].target, "");
}

TEST(ValidateCorpus, Counts) {
  ParallelCorpus c{{{0, "a", "x"}, {1, "b", "y"}}, kEng, kAmh};
  EXPECT_EQ(validate_corpus(c), (ValidationReport{2, 0, 0}));
  c.pairs[1].target = "";
  EXPECT_EQ(validate_corpus(c).empty_targets, 1u);
  ParallelCorpus d{{{0, "same", "x"}, {1, "same", "y"}}, kEng, kAmh};
  EXPECT_EQ(validate_corpus(d).duplicate_sources, 1u);
}

TEST(Corpus, TsvRoundTripProperty) {
  std::mt19937_64 rng(7);
  oracle::TempDir dir;
  for (int trial = 0; trial < 50; ++trial) {
    ParallelCorpus c{{}, kEng, kAmh};
    const std::size_t n = 1 + rng() % 12;
    for (std::size_t i = 0; i < n; ++i) {
      auto src = oracle::join(oracle::random_tokens(rng, 1 + rng() % 6, 16));
      auto tgt = rng() % 5 == 0 ? std::string() : oracle::join(oracle::random_tokens(rng, rng() % 6, 16));
      c.pairs.push_back({i, src, tgt});
    }
    const auto path = dir.file("rt" + std::to_string(trial) + ".tsv");
    write_tsv(c, path);
    EXPECT_EQ(load_parallel_corpus(path, "", CorpusFormat::Tsv, kEng, kAmh), c);
  }
}

TEST(Conllu, ParsesSimpleBlock) {
  auto trees = parse_conllu("1\tCats\t_\t_\t_\t_\t2\tnsubj\t_\t_\n2\tsleep\t_\t_\t_\t_\t0\troot\t_\t_\n");
  ASSERT_EQ(trees.size(), 1u);
  const auto& t = trees.at(0);
  ASSERT_EQ(t.tokens.size(), 2u);
  EXPECT_EQ(t.tokens[1].head, 0u);
  EXPECT_EQ(t.tokens[1].deprel, "root");
  EXPECT_EQ(t.tokens[0].form, "Cats");
  EXPECT_EQ(t.tokens[0].head, 2u);
}

TEST(Conllu, SkipsRangeAndEmptyNodesAndBindsSentId) {
  const std::string text =
      "# sent_id = 5\n"
      "1\tI\t_\t_\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tdo\t_\t_\t_\t_\t0\troot\t_\t_\n"
      "3-4\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "3\tdo\t_\t_\t_\t_\t2\taux\t_\t_\n"
      "3.1\tghost\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "4\tn't\t_\t_\t_\t_\t2\tadvmod\t_\t_\n"
      "\n"
      "1\tYes\t_\t_\t_\t_\t0\troot\t_\t_\n";
  auto trees = parse_conllu(text);
  ASSERT_EQ(trees.size(), 2u);
  ASSERT_TRUE(trees.contains(5));
  EXPECT_EQ(trees.at(5).tokens.size(), 4u);
  EXPECT_EQ(trees.at(5).tokens[3].form, "n't");
  EXPECT_TRUE(trees.contains(1));
}

TEST(Conllu, RootInvariantViolations) {
  EXPECT_EQ(kind_of([] { parse_conllu("1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n"); }),
            ErrorKind::MultipleRoots);
  EXPECT_EQ(kind_of([] { parse_conllu("1\ta\t_\t_\t_\t_\t2\tdep\t_\t_\n2\tb\t_\t_\t_\t_\t1\tdep\t_\t_\n"); }),
            ErrorKind::NoRoot);
  EXPECT_EQ(kind_of([] { parse_conllu("1\ta\t_\t_\t_\t_\t5\tdep\t_\t_\n"); }), ErrorKind::MalformedConllu);
  EXPECT_EQ(kind_of([] { parse_conllu("1\ta\t_\n"); }), ErrorKind::MalformedConllu);
  EXPECT_EQ(kind_of([] { parse_conllu("1\ta\t_\t_\t_\t_\tx\tdep\t_\t_\n"); }), ErrorKind::MalformedConllu);
}

TEST(Conllu, SelfHeadIsRejected) {
  EXPECT_THROW(parse_conllu("1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n2\tb\t_\t_\t_\t_\t2\tdep\t_\t_\n"), Error);
}

std::string to_conllu(const DependencyTree& t) {
  std::string out;
  for (std::size_t i = 0; i < t.tokens.size(); ++i)
    out += std::to_string(i + 1) + "\t" + t.tokens[i].form + "\t_\t_\t_\t_\t" + std::to_string(t.tokens[i].head) +
           "\t" + t.tokens[i].deprel + "\t_\t_\n";
  return out;
}

TEST(Conllu, CorruptedRootCountIsAlwaysRejected) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto tree = oracle::random_tree(rng, 2 + rng() % 15);
    ASSERT_NO_THROW(parse_conllu(to_conllu(tree)));
    auto corrupted = tree;
    std::size_t root = 0;
    while (corrupted.tokens[root].head != 0) ++root;
    if (trial % 2 == 0) {
      std::size_t other = (root + 1 + rng() % (tree.tokens.size() - 1)) % tree.tokens.size();
      corrupted.tokens[other].head = 0;
      EXPECT_EQ(kind_of([&] { parse_conllu(to_conllu(corrupted)); }), ErrorKind::MultipleRoots);
    } else {
      std::size_t other = (root + 1) % tree.tokens.size();
      corrupted.tokens[root].head = other + 1;
      EXPECT_EQ(kind_of([&] { parse_conllu(to_conllu(corrupted)); }), ErrorKind::NoRoot);
    }
  }
}

TEST(Conllu, LoadFromFile) {
  oracle::TempDir dir;
  auto p = dir.write("t.conllu", "1\tCats\t_\t_\t_\t_\t2\tnsubj\t_\t_\n2\tsleep\t_\t_\t_\t_\t0\troot\t_\t_\n");
  EXPECT_EQ(load_dependency_trees(p).size(), 1u);
  EXPECT_THROW(load_dependency_trees(dir.file("none.conllu")), Error);
}

}  // namespace
}  // namespace comptra
