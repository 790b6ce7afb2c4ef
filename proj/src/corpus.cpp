#include "callcost/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace callcost {

namespace {

// Words this short are almost always noise; three characters matches the
// shortest meaningful terms in technical text.
constexpr std::size_t kDefaultMinLen = 3;

// High-frequency English words that carry no weight worth measuring.
// Anything shorter than kDefaultMinLen is already dropped by the length
// rule, so only longer words are listed.
const char* const kDefaultStopwords[] = {
    "the", "and", "for", "are", "was", "with", "that", "this", "from",
    "have", "has", "had", "not", "but", "all", "can", "been", "were",
    "their", "which", "into", "its", "also", "such",
};

}  // namespace

TokenFilterConfig TokenFilterConfig::defaults() {
    TokenFilterConfig cfg;
    cfg.min_len = kDefaultMinLen;
    for (const char* word : kDefaultStopwords) cfg.stopwords.insert(word);
    return cfg;
}

TokenFilterConfig TokenFilterConfig::none() {
    TokenFilterConfig cfg;
    cfg.min_len = 1;
    return cfg;
}

std::vector<std::string> tokenize(std::string_view text, const TokenFilterConfig& filter) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.size() >= filter.min_len && filter.stopwords.count(current) == 0)
            tokens.push_back(current);
        current.clear();
    };
    // Split on everything that is not ASCII alphanumeric; multi-byte UTF-8
    // sequences therefore act as separators.
    for (unsigned char ch : text) {
        if (std::isalnum(ch))
            current.push_back(static_cast<char>(std::tolower(ch)));
        else
            flush();
    }
    flush();
    return tokens;
}

std::size_t InvertedIndex::total_postings() const noexcept {
    std::size_t n = 0;
    for (const PostingEntry& entry : entries) n += entry.postings.size();
    return n;
}

const PostingEntry* InvertedIndex::find(std::string_view word) const noexcept {
    for (const PostingEntry& entry : entries)
        if (entry.word == word) return &entry;
    return nullptr;
}

CorpusStats::CorpusStats(std::vector<std::pair<std::string, std::uint32_t>> doc_lengths)
    : doc_lengths_(std::move(doc_lengths)) {
    if (doc_lengths_.empty()) throw ConfigError("CorpusStats: document list is empty");
    std::uint64_t total = 0;
    for (const auto& [id, len] : doc_lengths_) {
        if (id.empty()) throw ConfigError("CorpusStats: document id is empty");
        if (len == 0) throw ConfigError("CorpusStats: document \"" + id + "\" has length 0");
        if (!dl_map_.emplace(id, static_cast<double>(len)).second)
            throw ConfigError("CorpusStats: duplicate document id \"" + id + "\"");
        total += len;
    }
    d_ = doc_lengths_.size();
    avdl_ = static_cast<double>(total) / static_cast<double>(d_);
}

CorpusStats CorpusStats::from_parts(std::uint64_t d, double avdl,
                                    std::vector<std::pair<std::string, std::uint32_t>> doc_lengths) {
    if (d == 0) throw ConfigError("CorpusStats: d must be >= 1");
    if (!(avdl > 0.0)) throw ConfigError("CorpusStats: avdl must be positive");
    if (doc_lengths.size() > d)
        throw ConfigError("CorpusStats: more document lengths than documents");
    CorpusStats stats;
    stats.d_ = d;
    stats.avdl_ = avdl;
    stats.doc_lengths_ = std::move(doc_lengths);
    for (const auto& [id, len] : stats.doc_lengths_) {
        if (id.empty()) throw ConfigError("CorpusStats: document id is empty");
        if (len == 0) throw ConfigError("CorpusStats: document \"" + id + "\" has length 0");
        if (!stats.dl_map_.emplace(id, static_cast<double>(len)).second)
            throw ConfigError("CorpusStats: duplicate document id \"" + id + "\"");
    }
    return stats;
}

bool CorpusStats::operator==(const CorpusStats& other) const noexcept {
    return d_ == other.d_ && avdl_ == other.avdl_ && doc_lengths_ == other.doc_lengths_;
}

IndexedCorpus build_index(const std::vector<Document>& docs) {
    if (docs.empty()) throw ConfigError("build_index: document collection is empty");
    std::vector<std::pair<std::string, std::uint32_t>> doc_lengths;
    doc_lengths.reserve(docs.size());
    std::unordered_set<std::string> seen_ids;
    seen_ids.reserve(docs.size());

    InvertedIndex index;
    std::unordered_map<std::string, std::size_t> slot_of;  // word -> entries position

    // Walking the token stream in document order makes entry order (first
    // occurrence) and posting order (document order) fully deterministic.
    for (const Document& doc : docs) {
        if (doc.id.empty()) throw ConfigError("build_index: document id is empty");
        if (!seen_ids.insert(doc.id).second)
            throw ConfigError("build_index: duplicate document id \"" + doc.id + "\"");
        if (doc.tokens.empty())
            throw ConfigError("build_index: document \"" + doc.id + "\" has no tokens");
        doc_lengths.emplace_back(doc.id, static_cast<std::uint32_t>(doc.tokens.size()));
        for (const std::string& word : doc.tokens) {
            auto [it, inserted] = slot_of.try_emplace(word, index.entries.size());
            if (inserted) index.entries.push_back(PostingEntry{word, 0, {}});
            PostingEntry& entry = index.entries[it->second];
            // Documents are processed one at a time, so a repeat within the
            // current document always sits at the back of the posting list.
            if (!entry.postings.empty() && entry.postings.back().doc_id == doc.id) {
                ++entry.postings.back().tf;
            } else {
                entry.postings.push_back(Posting{doc.id, 1});
                ++entry.df;
            }
        }
    }
    return IndexedCorpus{std::move(index), CorpusStats(std::move(doc_lengths))};
}

namespace {

// Vocabulary word for a zero-based rank: all-lowercase strings enumerated
// shortest first, starting at length 3 ("aaa", "aab", ...).
std::string vocab_word(std::uint64_t rank) {
    std::uint64_t len = 3;
    std::uint64_t count = 26 * 26 * 26;
    while (rank >= count) {
        rank -= count;
        ++len;
        count *= 26;
    }
    std::string word(len, 'a');
    for (std::size_t pos = len; pos-- > 0;) {
        word[pos] = static_cast<char>('a' + rank % 26);
        rank /= 26;
    }
    return word;
}

// Uniform double in [0, 1) with 53 random bits. Built by hand because the
// standard distributions are not bit-reproducible across library versions.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Deterministic spread of document lengths around the mean; the first
// document always has exactly mean_dl tokens.
constexpr double kLengthSpread[] = {0.0, 0.25, -0.25, 0.5, -0.5, 0.125, -0.125};

std::uint64_t doc_length_at(std::uint64_t position, std::uint64_t mean_dl) {
    const double spread = kLengthSpread[position % std::size(kLengthSpread)];
    const auto delta = std::llround(static_cast<double>(mean_dl) * spread);
    const auto len = static_cast<std::int64_t>(mean_dl) + delta;
    return len < 1 ? 1 : static_cast<std::uint64_t>(len);
}

}  // namespace

std::vector<Document> generate_synthetic_corpus(std::uint64_t num_docs, std::uint64_t vocab_size,
                                                std::uint64_t mean_dl, std::uint64_t seed) {
    if (num_docs == 0) throw ConfigError("generate_synthetic_corpus: num_docs must be >= 1");
    if (vocab_size == 0) throw ConfigError("generate_synthetic_corpus: vocab_size must be >= 1");
    if (mean_dl == 0) throw ConfigError("generate_synthetic_corpus: mean_dl must be >= 1");

    std::vector<std::string> vocab;
    vocab.reserve(vocab_size);
    for (std::uint64_t rank = 0; rank < vocab_size; ++rank) vocab.push_back(vocab_word(rank));

    // Zipf with exponent 1: P(rank r) proportional to 1/r, drawn through a
    // cumulative table. Word frequencies then fall off the way they do in
    // natural text, which keeps df spreads realistic.
    std::vector<double> cumulative(vocab_size);
    double total = 0.0;
    for (std::uint64_t r = 0; r < vocab_size; ++r) {
        total += 1.0 / static_cast<double>(r + 1);
        cumulative[r] = total;
    }
    for (double& c : cumulative) c /= total;
    cumulative.back() = 1.0;

    std::mt19937_64 rng(seed);
    std::vector<Document> docs;
    docs.reserve(num_docs);
    for (std::uint64_t j = 0; j < num_docs; ++j) {
        Document doc;
        doc.id = "doc_" + std::to_string(j);
        const std::uint64_t len = doc_length_at(j, mean_dl);
        doc.tokens.reserve(len);
        for (std::uint64_t t = 0; t < len; ++t) {
            const double u = uniform01(rng);
            const auto pick = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            const auto rank = static_cast<std::size_t>(pick - cumulative.begin());
            doc.tokens.push_back(vocab[rank < vocab_size ? rank : vocab_size - 1]);
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

namespace {

std::string replica_name(const std::string& base, std::uint32_t copy) {
    if (copy == 1) return base;
    return base + "~" + std::to_string(copy);
}

}  // namespace

InvertedIndex replicate_index(const InvertedIndex& index, std::uint32_t copies) {
    if (copies == 0) throw ConfigError("replicate_index: copies must be >= 1");
    InvertedIndex out;
    out.entries.reserve(index.entries.size() * copies);
    std::unordered_set<std::string> words;
    words.reserve(index.entries.size() * copies);
    for (std::uint32_t copy = 1; copy <= copies; ++copy) {
        for (const PostingEntry& entry : index.entries) {
            PostingEntry clone;
            clone.word = replica_name(entry.word, copy);
            clone.df = entry.df;
            clone.postings.reserve(entry.postings.size());
            for (const Posting& posting : entry.postings)
                clone.postings.push_back(Posting{replica_name(posting.doc_id, copy), posting.tf});
            if (!words.insert(clone.word).second)
                throw ConfigError("replicate_index: word collision on \"" + clone.word + "\"");
            out.entries.push_back(std::move(clone));
        }
    }
    return out;
}

CorpusStats replicate_stats(const CorpusStats& stats, std::uint32_t copies) {
    if (copies == 0) throw ConfigError("replicate_stats: copies must be >= 1");
    std::vector<std::pair<std::string, std::uint32_t>> lengths;
    lengths.reserve(stats.doc_lengths().size() * copies);
    for (std::uint32_t copy = 1; copy <= copies; ++copy)
        for (const auto& [id, len] : stats.doc_lengths())
            lengths.emplace_back(replica_name(id, copy), len);
    return CorpusStats(std::move(lengths));
}

std::vector<Document> load_corpus_dir(const std::filesystem::path& dir,
                                      const TokenFilterConfig& filter) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        throw IoError("corpus directory not found: " + dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    }
    if (files.empty())
        throw ConfigError("no *.txt documents found in " + dir.string());
    // Directory iteration order is unspecified; sort so ingestion is stable.
    std::sort(files.begin(), files.end());

    std::vector<Document> docs;
    docs.reserve(files.size());
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot read " + path.string());
        std::ostringstream buffer;
        buffer << in.rdbuf();
        Document doc;
        doc.id = path.stem().string();
        doc.tokens = tokenize(buffer.str(), filter);
        if (doc.tokens.empty())
            throw ConfigError("document " + path.string() + " has no tokens after filtering");
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<Document> load_corpus_jsonl(const std::filesystem::path& file,
                                        const TokenFilterConfig& filter) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot read " + file.string());

    std::vector<Document> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(file.string() + ": invalid JSON on line " +
                                 std::to_string(line_no) + ": " + e.what(),
                             line_no, e.byte);
        }
        if (!record.is_object() || !record.contains("id") || !record.contains("text") ||
            !record["id"].is_string() || !record["text"].is_string())
            throw ParseError(file.string() + ": line " + std::to_string(line_no) +
                                 " must be an object with string fields \"id\" and \"text\"",
                             line_no, 1);
        Document doc;
        doc.id = record["id"].get<std::string>();
        if (doc.id.empty())
            throw ParseError(file.string() + ": line " + std::to_string(line_no) +
                                 " has an empty \"id\"",
                             line_no, 1);
        doc.tokens = tokenize(record["text"].get<std::string>(), filter);
        if (doc.tokens.empty())
            throw ConfigError(file.string() + ": document \"" + doc.id +
                              "\" has no tokens after filtering");
        docs.push_back(std::move(doc));
    }
    if (docs.empty()) throw ConfigError(file.string() + " contains no documents");
    return docs;
}

}  // namespace callcost
