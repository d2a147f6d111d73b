#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "styledisp/corpus.hpp"
#include "styledisp/matrix.hpp"
#include "styledisp/rng.hpp"

namespace testing_support {

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("styledisp-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline styledisp::Matrix random_matrix(styledisp::Rng& rng, std::size_t rows, std::size_t cols, double sd = 1.0) {
    styledisp::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal(0.0, sd);
    return m;
}

// k isotropic blobs of `per` points each, centres spaced `gap` apart along the axes.
inline styledisp::Matrix blobs(styledisp::Rng& rng, int k, std::size_t per, std::size_t dim, double gap, double sd,
                               std::vector<int>* labels = nullptr) {
    styledisp::Matrix m(k * per, dim);
    for (int c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < per; ++i) {
            const std::size_t row = c * per + i;
            for (std::size_t j = 0; j < dim; ++j) {
                const double centre = (j == static_cast<std::size_t>(c) % dim) ? gap * (1 + c / dim) : 0.0;
                m(row, j) = centre + rng.normal(0.0, sd);
            }
            if (labels) labels->push_back(c);
        }
    }
    return m;
}

inline styledisp::Document make_doc(const std::string& id, styledisp::CellId cell, const std::string& text,
                                    const std::string& topic, const std::string& style,
                                    const std::string& lang = "en") {
    styledisp::Document d;
    d.doc_id = id;
    d.language = lang;
    d.text = text;
    d.cell = cell;
    d.topic_key = topic;
    d.style_key = style;
    d.origin = (cell == styledisp::cells::kQueneauGen || cell == styledisp::cells::kFeneonGen)
                   ? styledisp::Origin::Generated
                   : styledisp::Origin::Reference;
    return d;
}

}  // namespace testing_support
