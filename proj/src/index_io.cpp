#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "callcost/corpus.hpp"

namespace callcost {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

// Structural rules every index file (and every index we are about to
// write) must satisfy.
void check_invariants(const InvertedIndex& index, const CorpusStats& stats) {
    if (index.entries.empty()) throw ParseError("index has no entries");
    if (stats.doc_count() == 0) throw ParseError("index has no documents");
    if (!(stats.avdl() > 0.0)) throw ParseError("avdl must be positive");
    std::unordered_set<std::string_view> words;
    words.reserve(index.entries.size());
    for (const PostingEntry& entry : index.entries) {
        if (entry.word.empty()) throw ParseError("entry with empty word");
        if (!words.insert(entry.word).second)
            throw ParseError("duplicate entry for word \"" + entry.word + "\"");
        if (entry.postings.empty())
            throw ParseError("word \"" + entry.word + "\" has no postings");
        if (entry.df != entry.postings.size())
            throw ParseError("word \"" + entry.word + "\": df is " + std::to_string(entry.df) +
                             " but there are " + std::to_string(entry.postings.size()) +
                             " postings");
        std::unordered_set<std::string_view> docs_seen;
        for (const Posting& posting : entry.postings) {
            if (posting.tf < 1)
                throw ParseError("word \"" + entry.word + "\": tf must be >= 1");
            if (!docs_seen.insert(posting.doc_id).second)
                throw ParseError("word \"" + entry.word + "\": duplicate posting for document \"" +
                                 posting.doc_id + "\"");
            if (stats.dl_map().find(posting.doc_id) == stats.dl_map().end())
                throw ParseError("word \"" + entry.word + "\" posts to unknown document \"" +
                                 posting.doc_id + "\"");
        }
    }
}

[[noreturn]] void reject(const std::filesystem::path& path, const std::string& why) {
    throw ParseError(path.string() + ": " + why);
}

std::uint64_t require_uint(const ordered_json& v, std::uint64_t max,
                          const std::filesystem::path& path, const std::string& what) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        reject(path, what + " must be a non-negative integer");
    const auto n = v.get<std::uint64_t>();
    if (n > max) reject(path, what + " is out of range");
    return n;
}

}  // namespace

void save_index(const InvertedIndex& index, const CorpusStats& stats,
                const std::filesystem::path& path) {
    try {
        check_invariants(index, stats);
    } catch (const ParseError& e) {
        // Refuse to produce a file that load_index would reject.
        throw ConfigError(std::string("save_index: ") + e.what());
    }

    ordered_json doc;
    doc["version"] = kFormatVersion;
    doc["d"] = stats.doc_count();
    doc["avdl"] = stats.avdl();
    ordered_json lengths = ordered_json::object();
    for (const auto& [id, len] : stats.doc_lengths()) lengths[id] = len;
    doc["doc_lengths"] = std::move(lengths);
    ordered_json entries = ordered_json::array();
    for (const PostingEntry& entry : index.entries) {
        ordered_json postings = ordered_json::array();
        for (const Posting& posting : entry.postings)
            postings.push_back(ordered_json::array({posting.doc_id, posting.tf}));
        entries.push_back(ordered_json::array({entry.word, entry.df, std::move(postings)}));
    }
    doc["entries"] = std::move(entries);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump() << '\n';
    out.flush();
    if (!out) throw IoError("failed while writing " + path.string());
}

IndexedCorpus load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed while reading " + path.string());

    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Translate the byte offset into a line/column position.
        std::size_t line = 1, last_newline = 0;
        const std::size_t stop = e.byte < text.size() ? e.byte : text.size();
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                last_newline = i + 1;
            }
        }
        const std::size_t column = stop - last_newline + 1;
        throw ParseError(path.string() + ": invalid JSON at line " + std::to_string(line) +
                             ", column " + std::to_string(column) + ": " + e.what(),
                         line, column);
    }

    if (!doc.is_object()) reject(path, "top level must be an object");
    for (const char* key : {"version", "d", "avdl", "doc_lengths", "entries"})
        if (!doc.contains(key)) reject(path, std::string("missing field \"") + key + "\"");

    const auto version = require_uint(doc["version"], std::numeric_limits<std::uint32_t>::max(),
                                      path, "\"version\"");
    if (version != kFormatVersion)
        reject(path, "unsupported format version " + std::to_string(version) + " (expected " +
                         std::to_string(kFormatVersion) + ")");

    const std::uint64_t d = require_uint(doc["d"], std::uint64_t{1} << 53, path, "\"d\"");
    if (d == 0) reject(path, "\"d\" must be >= 1");
    if (!doc["avdl"].is_number()) reject(path, "\"avdl\" must be a number");
    const double avdl = doc["avdl"].get<double>();
    if (!(avdl > 0.0)) reject(path, "\"avdl\" must be positive");

    if (!doc["doc_lengths"].is_object() || doc["doc_lengths"].empty())
        reject(path, "\"doc_lengths\" must be a non-empty object");
    std::vector<std::pair<std::string, std::uint32_t>> lengths;
    lengths.reserve(doc["doc_lengths"].size());
    std::uint64_t length_total = 0;
    for (const auto& [id, value] : doc["doc_lengths"].items()) {
        const auto len = require_uint(value, std::numeric_limits<std::uint32_t>::max(), path,
                                      "length of document \"" + id + "\"");
        if (len == 0) reject(path, "document \"" + id + "\" has length 0");
        lengths.emplace_back(id, static_cast<std::uint32_t>(len));
        length_total += len;
    }
    if (lengths.size() > d) reject(path, "more document lengths than \"d\" documents");
    if (lengths.size() == d) {
        // A full stats block must be self-consistent.
        const double mean =
            static_cast<double>(length_total) / static_cast<double>(lengths.size());
        if (std::abs(avdl - mean) > 1e-9 * std::max(1.0, std::abs(mean)))
            reject(path, "\"avdl\" disagrees with the mean of \"doc_lengths\"");
    }

    if (!doc["entries"].is_array() || doc["entries"].empty())
        reject(path, "\"entries\" must be a non-empty array");
    InvertedIndex index;
    index.entries.reserve(doc["entries"].size());
    for (const auto& raw : doc["entries"]) {
        if (!raw.is_array() || raw.size() != 3)
            reject(path, "each entry must be [word, df, postings]");
        if (!raw[0].is_string()) reject(path, "entry word must be a string");
        PostingEntry entry;
        entry.word = raw[0].get<std::string>();
        entry.df = static_cast<std::uint32_t>(require_uint(
            raw[1], std::numeric_limits<std::uint32_t>::max(), path,
            "df of word \"" + entry.word + "\""));
        if (!raw[2].is_array())
            reject(path, "postings of word \"" + entry.word + "\" must be an array");
        entry.postings.reserve(raw[2].size());
        for (const auto& rp : raw[2]) {
            if (!rp.is_array() || rp.size() != 2 || !rp[0].is_string())
                reject(path, "each posting of word \"" + entry.word + "\" must be [doc_id, tf]");
            Posting posting;
            posting.doc_id = rp[0].get<std::string>();
            posting.tf = static_cast<std::uint32_t>(require_uint(
                rp[1], std::numeric_limits<std::uint32_t>::max(), path,
                "tf of word \"" + entry.word + "\" in \"" + posting.doc_id + "\""));
            entry.postings.push_back(std::move(posting));
        }
        index.entries.push_back(std::move(entry));
    }

    CorpusStats stats;
    try {
        stats = CorpusStats::from_parts(d, avdl, std::move(lengths));
    } catch (const ConfigError& e) {
        reject(path, e.what());
    }
    try {
        check_invariants(index, stats);
    } catch (const ParseError& e) {
        reject(path, e.what());
    }
    return IndexedCorpus{std::move(index), std::move(stats)};
}

}  // namespace callcost
