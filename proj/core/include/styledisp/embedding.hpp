#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "styledisp/corpus.hpp"
#include "styledisp/generation.hpp"
#include "styledisp/matrix.hpp"
#include "styledisp/retry.hpp"

namespace styledisp {

inline constexpr int kEmbeddingSchemaVersion = 1;

// Immutable set of equal-length, finite vectors keyed by doc_id.
class EmbeddingSet {
public:
    EmbeddingSet() = default;
    EmbeddingSet(std::string model_id, std::vector<std::string> doc_ids, Matrix vectors);

    const std::string& model_id() const { return model_id_; }
    std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
    std::size_t size() const { return doc_ids_.size(); }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    const Matrix& matrix() const { return vectors_; }
    std::span<const double> row(std::size_t i) const {
        return {vectors_.data() + i * dim(), dim()};
    }
    std::optional<std::size_t> index_of(std::string_view doc_id) const;

    // Rows reordered (and filtered) to follow `doc_ids`. Throws if any is missing.
    EmbeddingSet aligned_to(const std::vector<std::string>& doc_ids) const;

    bool operator==(const EmbeddingSet& other) const;

private:
    std::string model_id_;
    std::vector<std::string> doc_ids_;
    Matrix vectors_;
};

// Line-delimited JSON: a header {schema_version, kind, model_id, dim}, then
// one {doc_id, vector} record per row with 17 significant digits.
void write_embeddings(const EmbeddingSet& set, std::ostream& out);
EmbeddingSet read_embeddings(std::istream& in, std::string_view source_name = "<stream>");
void export_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);
EmbeddingSet import_embeddings(const std::filesystem::path& path);

struct ProviderSpec {
    std::string provider_name = "openai";
    std::string endpoint;
    std::string model_id;
    std::size_t batch_size = 32;
    std::size_t max_in_flight = 1;
    // 0 = unlimited. Longer inputs are rejected, never truncated.
    std::size_t max_input_chars = 0;

    void validate() const;
};

class EmbeddingClient {
public:
    virtual ~EmbeddingClient() = default;
    // One vector per text, in input order.
    virtual std::vector<std::vector<double>> embed(std::span<const std::string> texts,
                                                   const ProviderSpec& provider) = 0;
};

// Content-addressed vector cache: <dir>/<key[0:2]>/<key>.json. Writes are
// atomic (temp file + rename). Eviction is manual.
class EmbeddingCache {
public:
    explicit EmbeddingCache(std::filesystem::path dir);

    // SHA-256 over model_id, a 0x1F separator, and the NFC-normalized text.
    static std::string key(std::string_view model_id, std::string_view text);

    std::optional<std::vector<double>> get(const std::string& key) const;
    void put(const std::string& key, std::string_view model_id, std::span<const double> vector) const;

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path path_for(const std::string& key) const;

    std::filesystem::path dir_;
};

struct EmbedOptions {
    std::optional<std::filesystem::path> cache_dir;
    bool offline = false;  // cache misses become errors
    RetryPolicy retry;
    CallObserver observer;
};

// Fetches one vector per document in corpus order. The cache (if any) is
// consulted before the network and written after every successful batch.
EmbeddingSet embed_corpus(const ProviderSpec& provider, const Corpus& corpus, EmbeddingClient& client,
                          const EmbedOptions& options = {});

}  // namespace styledisp
