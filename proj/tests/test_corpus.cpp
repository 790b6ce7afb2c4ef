#include <doctest.h>

#include <algorithm>
#include <map>

#include "callcost/corpus.hpp"
#include "helpers.hpp"

using namespace callcost;
using testutil::TempDir;

TEST_SUITE("corpus") {

TEST_CASE("tokenize: empty text yields no tokens") {
    CHECK(tokenize("", TokenFilterConfig::defaults()).empty());
    CHECK(tokenize("  \t\n ", TokenFilterConfig::defaults()).empty());
}

TEST_CASE("tokenize: lowercases, splits on punctuation, filters short and stop words") {
    const auto tokens = tokenize("The ROCKET, a rocket; engine!", TokenFilterConfig::defaults());
    CHECK(tokens == std::vector<std::string>{"rocket", "rocket", "engine"});
}

TEST_CASE("tokenize: pass-through filter keeps every token") {
    const auto tokens = tokenize("A b, c", TokenFilterConfig::none());
    CHECK(tokens == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("tokenize: n occurrences survive as n tokens") {
    for (int n : {1, 5, 40}) {
        std::string text;
        for (int i = 0; i < n; ++i) text += "rocket ";
        CHECK(tokenize(text, TokenFilterConfig::defaults()).size() == static_cast<std::size_t>(n));
    }
}

TEST_CASE("tokenize: bytes above ASCII act as separators") {
    CHECK(tokenize("caf\xc3\xa9", TokenFilterConfig::defaults()) ==
          std::vector<std::string>{"caf"});
    CHECK(tokenize("na\xc3\xafve", TokenFilterConfig::none()) ==
          std::vector<std::string>{"na", "ve"});
}

TEST_CASE("build_index: the worked posting example") {
    const IndexedCorpus corpus = build_index(testutil::rocket_docs());
    const PostingEntry* rocket = corpus.index.find("rocket");
    REQUIRE(rocket != nullptr);
    CHECK(rocket->df == 3);
    REQUIRE(rocket->postings.size() == 3);
    CHECK(rocket->postings[0] == Posting{"doc_11", 7});
    CHECK(rocket->postings[1] == Posting{"doc_15", 2});
    CHECK(rocket->postings[2] == Posting{"doc_67", 4});
    CHECK(corpus.stats.doc_count() == 3);
    CHECK(corpus.stats.avdl() == 100.0);
    CHECK(corpus.stats.dl_map().at("doc_11") == 120.0);
}

TEST_CASE("build_index: single document with a repeated word") {
    const IndexedCorpus corpus = build_index({Document{"d1", {"alpha", "alpha"}}});
    REQUIRE(corpus.index.entries.size() == 1);
    CHECK(corpus.index.entries[0].word == "alpha");
    CHECK(corpus.index.entries[0].df == 1);
    CHECK(corpus.index.entries[0].postings == std::vector<Posting>{{"d1", 2}});
    CHECK(corpus.stats.doc_count() == 1);
    CHECK(corpus.stats.avdl() == 2.0);
}

TEST_CASE("build_index: a word shared by two documents gets df 2") {
    const IndexedCorpus corpus =
        build_index({Document{"d1", {"beta", "solo"}}, Document{"d2", {"beta"}}});
    const PostingEntry* beta = corpus.index.find("beta");
    REQUIRE(beta != nullptr);
    CHECK(beta->df == 2);
    CHECK(beta->postings == std::vector<Posting>{{"d1", 1}, {"d2", 1}});
    CHECK(corpus.index.find("solo")->df == 1);
}

TEST_CASE("build_index: entry order follows first occurrence in the stream") {
    const IndexedCorpus corpus =
        build_index({Document{"d1", {"zzz", "mmm"}}, Document{"d2", {"aaa", "zzz"}}});
    REQUIRE(corpus.index.entries.size() == 3);
    CHECK(corpus.index.entries[0].word == "zzz");
    CHECK(corpus.index.entries[1].word == "mmm");
    CHECK(corpus.index.entries[2].word == "aaa");
}

TEST_CASE("build_index: invalid inputs are rejected") {
    CHECK_THROWS_AS(build_index({}), ConfigError);
    CHECK_THROWS_AS(build_index({Document{"d1", {"one"}}, Document{"d1", {"two"}}}), ConfigError);
    CHECK_THROWS_AS(build_index({Document{"d1", {}}}), ConfigError);
    CHECK_THROWS_AS(build_index({Document{"", {"one"}}}), ConfigError);
}

TEST_CASE("build_index: df and tf agree with a brute-force count") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto docs = generate_synthetic_corpus(40, 150, 25, seed);
        const IndexedCorpus corpus = build_index(docs);

        std::map<std::string, std::map<std::string, std::uint32_t>> expected;
        for (const Document& doc : docs)
            for (const std::string& word : doc.tokens) ++expected[word][doc.id];

        CHECK(corpus.index.entries.size() == expected.size());
        for (const PostingEntry& entry : corpus.index.entries) {
            const auto& by_doc = expected.at(entry.word);
            CHECK(entry.df == entry.postings.size());
            CHECK(entry.df == by_doc.size());
            for (const Posting& posting : entry.postings)
                CHECK(posting.tf == by_doc.at(posting.doc_id));
        }
    }
}

TEST_CASE("build_index: document order changes posting order, not content") {
    auto docs = generate_synthetic_corpus(20, 80, 15, 7);
    const IndexedCorpus forward = build_index(docs);
    std::reverse(docs.begin(), docs.end());
    const IndexedCorpus backward = build_index(docs);

    CHECK(forward.index.entries.size() == backward.index.entries.size());
    CHECK(forward.index.total_postings() == backward.index.total_postings());
    for (const PostingEntry& entry : forward.index.entries) {
        const PostingEntry* other = backward.index.find(entry.word);
        REQUIRE(other != nullptr);
        CHECK(entry.df == other->df);
        auto lhs = entry.postings;
        auto rhs = other->postings;
        auto by_doc = [](const Posting& a, const Posting& b) { return a.doc_id < b.doc_id; };
        std::sort(lhs.begin(), lhs.end(), by_doc);
        std::sort(rhs.begin(), rhs.end(), by_doc);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("generate_synthetic_corpus: degenerate single-word corpus is exact for any seed") {
    for (std::uint64_t seed : {0u, 1u, 99u}) {
        const auto docs = generate_synthetic_corpus(1, 1, 5, seed);
        REQUIRE(docs.size() == 1);
        CHECK(docs[0].id == "doc_0");
        CHECK(docs[0].tokens == std::vector<std::string>(5, "aaa"));
    }
}

TEST_CASE("generate_synthetic_corpus: identical arguments reproduce identical corpora") {
    const auto a = generate_synthetic_corpus(100, 500, 50, 42);
    const auto b = generate_synthetic_corpus(100, 500, 50, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].tokens == b[i].tokens);
    }

    const auto c = generate_synthetic_corpus(100, 500, 50, 43);
    bool any_difference = false;
    for (std::size_t i = 0; i < a.size() && !any_difference; ++i)
        any_difference = a[i].tokens != c[i].tokens;
    CHECK(any_difference);
}

TEST_CASE("generate_synthetic_corpus: document count and length spread") {
    const auto docs = generate_synthetic_corpus(33, 80, 10, 3);
    CHECK(docs.size() == 33);
    CHECK(docs[0].dl() == 10);  // first document sits exactly on the mean
    for (const Document& doc : docs) {
        CHECK(doc.dl() >= 1);
        CHECK(doc.dl() >= 5);   // mean - 50%
        CHECK(doc.dl() <= 15);  // mean + 50%
    }
}

TEST_CASE("generate_synthetic_corpus: zero-valued arguments are rejected") {
    CHECK_THROWS_AS(generate_synthetic_corpus(0, 10, 10, 1), ConfigError);
    CHECK_THROWS_AS(generate_synthetic_corpus(10, 0, 10, 1), ConfigError);
    CHECK_THROWS_AS(generate_synthetic_corpus(10, 10, 0, 1), ConfigError);
}

TEST_CASE("replicate_index: factor 1 is the identity") {
    const IndexedCorpus corpus = build_index(generate_synthetic_corpus(15, 60, 12, 4));
    CHECK(replicate_index(corpus.index, 1) == corpus.index);
}

TEST_CASE("replicate_index: factor n multiplies entries and postings") {
    const IndexedCorpus corpus = build_index(generate_synthetic_corpus(15, 60, 12, 4));
    const InvertedIndex tripled = replicate_index(corpus.index, 3);
    CHECK(tripled.entries.size() == corpus.index.entries.size() * 3);
    CHECK(tripled.total_postings() == corpus.index.total_postings() * 3);

    // First block is the original, later blocks carry the copy suffix.
    const std::size_t n = corpus.index.entries.size();
    for (std::size_t i = 0; i < n; ++i) CHECK(tripled.entries[i] == corpus.index.entries[i]);
    CHECK(tripled.entries[n].word == corpus.index.entries[0].word + "~2");
    CHECK(tripled.entries[n].df == corpus.index.entries[0].df);
    CHECK(tripled.entries[2 * n].word == corpus.index.entries[0].word + "~3");
    CHECK(tripled.entries[n].postings[0].doc_id ==
          corpus.index.entries[0].postings[0].doc_id + "~2");
    CHECK(tripled.entries[n].postings[0].tf == corpus.index.entries[0].postings[0].tf);
}

TEST_CASE("replicate_index: factor 0 is rejected") {
    const IndexedCorpus corpus = build_index({Document{"d1", {"one"}}});
    CHECK_THROWS_AS(replicate_index(corpus.index, 0), ConfigError);
}

TEST_CASE("replicate_stats: document count scales, avdl is preserved") {
    const IndexedCorpus corpus = build_index(generate_synthetic_corpus(15, 60, 12, 4));
    const CorpusStats tripled = replicate_stats(corpus.stats, 3);
    CHECK(tripled.doc_count() == corpus.stats.doc_count() * 3);
    CHECK(testutil::rel_close(tripled.avdl(), corpus.stats.avdl(), 1e-12));
    CHECK(tripled.dl_map().count("doc_0~2") == 1);
    CHECK(tripled.dl_map().at("doc_0~2") == corpus.stats.dl_map().at("doc_0"));
    CHECK_THROWS_AS(replicate_stats(corpus.stats, 0), ConfigError);
}

TEST_CASE("CorpusStats: construction guards") {
    CHECK_THROWS_AS(CorpusStats(std::vector<std::pair<std::string, std::uint32_t>>{}),
                    ConfigError);
    CHECK_THROWS_AS(CorpusStats({{"d1", 5}, {"d1", 6}}), ConfigError);
    CHECK_THROWS_AS(CorpusStats({{"d1", 0}}), ConfigError);
    CHECK_THROWS_AS(CorpusStats::from_parts(0, 10.0, {}), ConfigError);
    CHECK_THROWS_AS(CorpusStats::from_parts(5, 0.0, {}), ConfigError);
    CHECK_THROWS_AS(CorpusStats::from_parts(1, 10.0, {{"a", 5}, {"b", 5}}), ConfigError);

    const CorpusStats partial = CorpusStats::from_parts(4573, 100.0, {{"doc_11", 120}});
    CHECK(partial.doc_count() == 4573);
    CHECK(partial.avdl() == 100.0);
    CHECK(partial.dl_map().at("doc_11") == 120.0);
}

TEST_CASE("load_corpus_dir: reads *.txt files in name order") {
    TempDir dir("corpus_dir");
    testutil::write_file(dir.path() / "b_second.txt", "Thrust vector control");
    testutil::write_file(dir.path() / "a_first.txt", "Rocket engine nozzle");
    testutil::write_file(dir.path() / "ignored.dat", "not a corpus file");

    const auto docs = load_corpus_dir(dir.path(), TokenFilterConfig::defaults());
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].id == "a_first");
    CHECK(docs[0].tokens == std::vector<std::string>{"rocket", "engine", "nozzle"});
    CHECK(docs[1].id == "b_second");
    CHECK(docs[1].tokens == std::vector<std::string>{"thrust", "vector", "control"});
}

TEST_CASE("load_corpus_dir: error cases") {
    TempDir dir("corpus_dir_err");
    CHECK_THROWS_AS(load_corpus_dir(dir.path() / "missing", TokenFilterConfig::defaults()),
                    IoError);
    CHECK_THROWS_AS(load_corpus_dir(dir.path(), TokenFilterConfig::defaults()), ConfigError);
    testutil::write_file(dir.path() / "only_stopwords.txt", "the and for");
    CHECK_THROWS_AS(load_corpus_dir(dir.path(), TokenFilterConfig::defaults()), ConfigError);
}

TEST_CASE("load_corpus_jsonl: reads one document per line") {
    TempDir dir("corpus_jsonl");
    const auto path = dir.path() / "corpus.jsonl";
    testutil::write_file(path,
                         "{\"id\":\"doc_a\",\"text\":\"Rocket engine design\"}\n"
                         "\n"
                         "{\"id\":\"doc_b\",\"text\":\"Combustion chamber pressure\"}\n");
    const auto docs = load_corpus_jsonl(path, TokenFilterConfig::defaults());
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].id == "doc_a");
    CHECK(docs[0].tokens == std::vector<std::string>{"rocket", "engine", "design"});
    CHECK(docs[1].id == "doc_b");
}

TEST_CASE("load_corpus_jsonl: error cases") {
    TempDir dir("corpus_jsonl_err");
    CHECK_THROWS_AS(load_corpus_jsonl(dir.path() / "missing.jsonl", TokenFilterConfig::defaults()),
                    IoError);

    const auto bad_json = dir.path() / "bad.jsonl";
    testutil::write_file(bad_json, "{\"id\":\"doc_a\",\"text\":\"ok text here\"}\n{broken\n");
    try {
        load_corpus_jsonl(bad_json, TokenFilterConfig::defaults());
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    const auto bad_shape = dir.path() / "shape.jsonl";
    testutil::write_file(bad_shape, "{\"id\":\"doc_a\"}\n");
    CHECK_THROWS_AS(load_corpus_jsonl(bad_shape, TokenFilterConfig::defaults()), ParseError);

    const auto empty = dir.path() / "empty.jsonl";
    testutil::write_file(empty, "\n\n");
    CHECK_THROWS_AS(load_corpus_jsonl(empty, TokenFilterConfig::defaults()), ConfigError);
}

}  // TEST_SUITE
