#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "callcost/corpus.hpp"

namespace testutil {

// Relative closeness with an absolute fallback at zero; tighter and more
// explicit than framework-default approximations.
inline bool rel_close(double a, double b, double tol) {
    if (a == b) return true;
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= tol * scale;
}

// Self-cleaning scratch directory for tests that touch the filesystem.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() /
                ("callcost_" + tag + "_" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// The worked posting-list example used across suites: one word appearing in
// three documents with tf 7, 2 and 4. Documents are padded with unique
// filler so their lengths come out as 120, 80 and 100 tokens.
inline std::vector<callcost::Document> rocket_docs() {
    auto doc = [](std::string id, int rocket_tf, int filler, const std::string& tag) {
        callcost::Document d{std::move(id), {}};
        for (int i = 0; i < rocket_tf; ++i) d.tokens.push_back("rocket");
        for (int i = 0; i < filler; ++i) d.tokens.push_back(tag + std::to_string(i));
        return d;
    };
    return {doc("doc_11", 7, 113, "alpha"), doc("doc_15", 2, 78, "beta"),
            doc("doc_67", 4, 96, "gamma")};
}

// The same posting list as a directly assembled single-entry index, dropped
// into a 4573-document corpus averaging 100 tokens.
inline callcost::InvertedIndex rocket_index() {
    callcost::InvertedIndex index;
    index.entries.push_back(
        callcost::PostingEntry{"rocket", 3, {{"doc_11", 7}, {"doc_15", 2}, {"doc_67", 4}}});
    return index;
}

inline callcost::CorpusStats rocket_stats() {
    return callcost::CorpusStats::from_parts(
        4573, 100.0, {{"doc_11", 120}, {"doc_15", 80}, {"doc_67", 100}});
}

}  // namespace testutil
