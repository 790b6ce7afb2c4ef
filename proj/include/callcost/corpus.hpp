#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "callcost/errors.hpp"

namespace callcost {

// Controls which raw tokens survive normalization. Tokens are lowercased,
// split on every non-alphanumeric byte, then dropped if shorter than
// min_len or listed in stopwords.
struct TokenFilterConfig {
    std::size_t min_len = 3;
    std::unordered_set<std::string> stopwords;

    // Filter used for real text: length >= 3 plus a small stopword list.
    static TokenFilterConfig defaults();
    // Pass-through filter: keeps every token, however short.
    static TokenFilterConfig none();
};

std::vector<std::string> tokenize(std::string_view text, const TokenFilterConfig& filter);

struct Document {
    std::string id;
    std::vector<std::string> tokens;

    std::size_t dl() const noexcept { return tokens.size(); }
};

struct Posting {
    std::string doc_id;
    std::uint32_t tf = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct PostingEntry {
    std::string word;
    std::uint32_t df = 0;  // always equals postings.size()
    std::vector<Posting> postings;

    friend bool operator==(const PostingEntry&, const PostingEntry&) = default;
};

// Word -> posting list, stored in first-occurrence order so that rebuilding
// from the same corpus reproduces the same file byte for byte.
struct InvertedIndex {
    std::vector<PostingEntry> entries;

    std::size_t total_postings() const noexcept;
    const PostingEntry* find(std::string_view word) const noexcept;

    friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;
};

// Per-corpus constants the weighting models need: document count d, average
// document length avdl, and a per-document length table.
class CorpusStats {
public:
    CorpusStats() = default;

    // Derives d and avdl from the listed documents.
    explicit CorpusStats(std::vector<std::pair<std::string, std::uint32_t>> doc_lengths);

    // Assembles stats whose d/avdl were fixed elsewhere (loaded from a file,
    // or a fixture that lists only the documents a test touches).
    static CorpusStats from_parts(std::uint64_t d, double avdl,
                                  std::vector<std::pair<std::string, std::uint32_t>> doc_lengths);

    std::uint64_t doc_count() const noexcept { return d_; }
    double avdl() const noexcept { return avdl_; }
    const std::vector<std::pair<std::string, std::uint32_t>>& doc_lengths() const noexcept {
        return doc_lengths_;
    }
    // Lengths as double, keyed by document id, for the benchmark inner loops.
    const std::unordered_map<std::string, double>& dl_map() const noexcept { return dl_map_; }

    bool operator==(const CorpusStats& other) const noexcept;

private:
    std::uint64_t d_ = 0;
    double avdl_ = 0.0;
    std::vector<std::pair<std::string, std::uint32_t>> doc_lengths_;
    std::unordered_map<std::string, double> dl_map_;
};

struct IndexedCorpus {
    InvertedIndex index;
    CorpusStats stats;
};

// Builds the index by walking every document's token stream in order.
// Rejects an empty collection, duplicate document ids, and documents whose
// token list is empty.
IndexedCorpus build_index(const std::vector<Document>& docs);

// Deterministic synthetic corpus: Zipf-distributed draws from a fixed
// vocabulary, document lengths spread around mean_dl by a fixed pattern.
// Same arguments always produce the same documents.
std::vector<Document> generate_synthetic_corpus(std::uint64_t num_docs, std::uint64_t vocab_size,
                                                std::uint64_t mean_dl, std::uint64_t seed);

// Concatenates `copies` disjoint copies of the index; copy k >= 2 renames
// every word with a "~k" suffix so entry identities never collide. The
// result has copies * total_postings() postings with the same tf/df shape,
// which scales benchmark work without changing per-element cost.
InvertedIndex replicate_index(const InvertedIndex& index, std::uint32_t copies);

// Scales doc_lengths to match a replicated index (copy k >= 2 renames ids
// with the same "~k" suffix scheme); d and avdl scale accordingly.
CorpusStats replicate_stats(const CorpusStats& stats, std::uint32_t copies);

// Reads every *.txt file in dir as one document; the document id is the
// file name without its extension.
std::vector<Document> load_corpus_dir(const std::filesystem::path& dir,
                                      const TokenFilterConfig& filter);

// Reads one JSON object per line, each with "id" and "text" string fields.
std::vector<Document> load_corpus_jsonl(const std::filesystem::path& file,
                                        const TokenFilterConfig& filter);

// Serializes index + stats to a versioned JSON file (and back). load_index
// re-validates every structural invariant before returning.
void save_index(const InvertedIndex& index, const CorpusStats& stats,
                const std::filesystem::path& path);
IndexedCorpus load_index(const std::filesystem::path& path);

}  // namespace callcost
