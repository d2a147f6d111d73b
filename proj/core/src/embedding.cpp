#include "styledisp/embedding.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "styledisp/error.hpp"
#include "styledisp/hash.hpp"
#include "styledisp/parallel.hpp"
#include "styledisp/text.hpp"

namespace styledisp {

using nlohmann::json;

namespace fs = std::filesystem;

EmbeddingSet::EmbeddingSet(std::string model_id, std::vector<std::string> doc_ids, Matrix vectors)
    : model_id_(std::move(model_id)), doc_ids_(std::move(doc_ids)), vectors_(std::move(vectors)) {
    if (model_id_.empty()) throw DataError("embedding set: empty model_id");
    if (static_cast<std::size_t>(vectors_.rows()) != doc_ids_.size()) {
        throw DataError("embedding set: " + std::to_string(doc_ids_.size()) + " doc_ids but " +
                        std::to_string(vectors_.rows()) + " vectors");
    }
    if (!doc_ids_.empty() && vectors_.cols() == 0) throw DataError("embedding set: dim must be positive");
    std::map<std::string_view, std::size_t> seen;
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
        if (!seen.emplace(doc_ids_[i], i).second) {
            throw DataError("embedding set: duplicate doc_id '" + doc_ids_[i] + "'");
        }
        for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
            if (!std::isfinite(vectors_(static_cast<Eigen::Index>(i), j))) {
                throw DataError("embedding set: non-finite component " + std::to_string(j) + " for doc_id '" +
                                doc_ids_[i] + "'");
            }
        }
    }
}

std::optional<std::size_t> EmbeddingSet::index_of(std::string_view doc_id) const {
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
        if (doc_ids_[i] == doc_id) return i;
    }
    return std::nullopt;
}

EmbeddingSet EmbeddingSet::aligned_to(const std::vector<std::string>& doc_ids) const {
    std::map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) index.emplace(doc_ids_[i], i);
    std::vector<std::size_t> rows;
    rows.reserve(doc_ids.size());
    for (const std::string& id : doc_ids) {
        const auto it = index.find(id);
        if (it == index.end()) {
            throw DataError("embedding set '" + model_id_ + "' has no vector for doc_id '" + id + "'");
        }
        rows.push_back(it->second);
    }
    return EmbeddingSet(model_id_, doc_ids, take_rows(vectors_, rows));
}

bool EmbeddingSet::operator==(const EmbeddingSet& other) const {
    return model_id_ == other.model_id_ && doc_ids_ == other.doc_ids_ &&
           vectors_.rows() == other.vectors_.rows() && vectors_.cols() == other.vectors_.cols() &&
           vectors_ == other.vectors_;
}

namespace {

void write_vector(std::ostream& out, std::span<const double> values) {
    out << '[';
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (j) out << ',';
        out << format_double(values[j]);
    }
    out << ']';
}

// Bare NaN/Infinity literals are not JSON. Replace them with null outside of
// strings so the record still parses and the offending doc_id can be named.
std::string neutralize_nonfinite(const std::string& line, bool& found) {
    static const char* const kTokens[] = {"-Infinity", "Infinity", "-inf", "inf", "NaN", "nan", "-nan"};
    std::string out;
    out.reserve(line.size());
    bool in_string = false;
    for (std::size_t i = 0; i < line.size();) {
        const char c = line[i];
        if (in_string) {
            out.push_back(c);
            if (c == '\\' && i + 1 < line.size()) {
                out.push_back(line[i + 1]);
                i += 2;
                continue;
            }
            if (c == '"') in_string = false;
            ++i;
            continue;
        }
        if (c == '"') {
            in_string = true;
            out.push_back(c);
            ++i;
            continue;
        }
        bool replaced = false;
        for (const char* token : kTokens) {
            const std::string_view tv(token);
            if (line.compare(i, tv.size(), tv) == 0) {
                out += "null";
                i += tv.size();
                found = true;
                replaced = true;
                break;
            }
        }
        if (!replaced) {
            out.push_back(c);
            ++i;
        }
    }
    return out;
}

std::vector<double> parse_vector(const json& value, const std::string& doc_id, const std::string& where) {
    if (!value.is_array()) throw DataError(where + ": \"vector\" must be an array for doc_id '" + doc_id + "'");
    std::vector<double> out;
    out.reserve(value.size());
    for (std::size_t j = 0; j < value.size(); ++j) {
        const json& v = value[j];
        if (!v.is_number()) {
            throw DataError(where + ": non-finite or non-numeric component " + std::to_string(j) +
                            " for doc_id '" + doc_id + "'");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw DataError(where + ": non-finite component " + std::to_string(j) + " for doc_id '" + doc_id + "'");
        }
        out.push_back(d);
    }
    return out;
}

}  // namespace

void write_embeddings(const EmbeddingSet& set, std::ostream& out) {
    json header = json::object();
    header["schema_version"] = kEmbeddingSchemaVersion;
    header["kind"] = "embeddings";
    header["model_id"] = set.model_id();
    header["dim"] = set.dim();
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < set.size(); ++i) {
        out << "{\"doc_id\":" << json(set.doc_ids()[i]).dump() << ",\"vector\":";
        write_vector(out, set.row(i));
        out << "}\n";
    }
}

EmbeddingSet read_embeddings(std::istream& in, std::string_view source_name) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<json> header;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
        bool nonfinite = false;
        const std::string cleaned = neutralize_nonfinite(line, nonfinite);
        json record;
        try {
            record = json::parse(cleaned);
        } catch (const json::parse_error& e) {
            throw DataError(where + ": malformed record: " + e.what());
        }
        if (!header) {
            if (!record.is_object() || !record.contains("schema_version")) {
                throw DataError(where + ": missing header record with schema_version");
            }
            if (!record["schema_version"].is_number_integer() ||
                record["schema_version"].get<int>() != kEmbeddingSchemaVersion) {
                throw DataError(where + ": unknown schema version " + record["schema_version"].dump());
            }
            if (!record.contains("model_id") || !record["model_id"].is_string()) {
                throw DataError(where + ": header lacks model_id");
            }
            if (!record.contains("dim") || !record["dim"].is_number_unsigned() || record["dim"].get<std::size_t>() == 0) {
                throw DataError(where + ": header dim must be a positive integer");
            }
            dim = record["dim"].get<std::size_t>();
            header = std::move(record);
            continue;
        }
        if (!record.is_object() || !record.contains("doc_id") || !record["doc_id"].is_string()) {
            throw DataError(where + ": record lacks doc_id");
        }
        const std::string doc_id = record["doc_id"].get<std::string>();
        if (!record.contains("vector")) throw DataError(where + ": record lacks vector for doc_id '" + doc_id + "'");
        std::vector<double> v = parse_vector(record["vector"], doc_id, where);
        if (v.size() != dim) {
            throw DataError(where + ": ragged vector for doc_id '" + doc_id + "' (" + std::to_string(v.size()) +
                            " components, expected " + std::to_string(dim) + ")");
        }
        ids.push_back(doc_id);
        rows.push_back(std::move(v));
    }
    if (!header) throw DataError(std::string(source_name) + ": empty embedding file");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < dim; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return EmbeddingSet((*header)["model_id"].get<std::string>(), std::move(ids), std::move(m));
}

void export_embeddings(const EmbeddingSet& set, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_embeddings(set, out);
}

EmbeddingSet import_embeddings(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return read_embeddings(in, path.string());
}

void ProviderSpec::validate() const {
    if (model_id.empty()) throw InvalidArgument("provider: model_id is empty");
    if (batch_size == 0) throw InvalidArgument("provider: batch_size must be >= 1");
    if (max_in_flight == 0) throw InvalidArgument("provider: max_in_flight must be >= 1");
}

EmbeddingCache::EmbeddingCache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

std::string EmbeddingCache::key(std::string_view model_id, std::string_view text) {
    std::string material(model_id);
    material.push_back('\x1f');
    material += text::nfc(text);
    return sha256_hex(material);
}

fs::path EmbeddingCache::path_for(const std::string& key) const {
    return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<std::vector<double>> EmbeddingCache::get(const std::string& key) const {
    const fs::path path = path_for(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    json record;
    try {
        record = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError("corrupt cache entry " + path.string() + ": " + e.what());
    }
    if (!record.contains("key") || record["key"] != key) {
        throw DataError("cache entry " + path.string() + " does not match its key");
    }
    return parse_vector(record["vector"], key, path.string());
}

void EmbeddingCache::put(const std::string& key, std::string_view model_id, std::span<const double> vector) const {
    static std::atomic<unsigned long> counter{0};
    const fs::path path = path_for(key);
    fs::create_directories(path.parent_path());
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    const fs::path tmp = path.parent_path() / ("." + key + "." + std::to_string(::getpid()) + "." +
                                               std::to_string(counter.fetch_add(1)) + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write cache entry " + tmp.string());
        out << "{\"key\":\"" << key << "\",\"model_id\":" << json(std::string(model_id)).dump()
            << ",\"created_at\":" << std::chrono::duration_cast<std::chrono::seconds>(now).count() << ",\"vector\":";
        write_vector(out, vector);
        out << "}\n";
        if (!out) throw DataError("failed writing cache entry " + tmp.string());
    }
    fs::rename(tmp, path);
}

EmbeddingSet embed_corpus(const ProviderSpec& provider, const Corpus& corpus, EmbeddingClient& client,
                          const EmbedOptions& options) {
    provider.validate();
    if (corpus.empty()) throw InvalidArgument("embed_corpus: empty corpus");

    const auto& docs = corpus.documents();
    std::optional<EmbeddingCache> cache;
    if (options.cache_dir) cache.emplace(*options.cache_dir);

    std::vector<std::string> keys(docs.size());
    std::vector<std::optional<std::vector<double>>> vectors(docs.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (provider.max_input_chars > 0 && text::decode_utf8(docs[i].text).size() > provider.max_input_chars) {
            throw InvalidArgument("embed_corpus: text of doc_id '" + docs[i].doc_id + "' exceeds the provider limit of " +
                                  std::to_string(provider.max_input_chars) + " characters");
        }
        keys[i] = EmbeddingCache::key(provider.model_id, docs[i].text);
        if (cache) vectors[i] = cache->get(keys[i]);
        if (!vectors[i]) missing.push_back(i);
    }
    if (!missing.empty() && options.offline) {
        throw ProviderError(ProviderError::Kind::Fatal, "offline mode: " + std::to_string(missing.size()) +
                                                            " cache misses, first doc_id '" +
                                                            docs[missing.front()].doc_id + "'");
    }

    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start < missing.size(); start += provider.batch_size) {
        const std::size_t stop = std::min(missing.size(), start + provider.batch_size);
        batches.emplace_back(missing.begin() + static_cast<std::ptrdiff_t>(start),
                             missing.begin() + static_cast<std::ptrdiff_t>(stop));
    }

    auto fetch = [&](std::size_t b) -> std::vector<std::vector<double>> {
        const auto& rows = batches[b];
        std::vector<std::string> texts;
        texts.reserve(rows.size());
        for (std::size_t r : rows) texts.push_back(docs[r].text);
        RetryPolicy policy = options.retry;
        policy.jitter_seed += b;
        auto result = with_retry(policy, [&](unsigned attempt) {
            CallRecord record;
            record.prompt_sha256 = keys[rows.front()];
            record.attempt = attempt;
            const auto start = std::chrono::steady_clock::now();
            try {
                auto out = client.embed(texts, provider);
                record.latency_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
                record.ok = true;
                if (options.observer) options.observer(record);
                return out;
            } catch (const std::exception& e) {
                record.error = e.what();
                if (options.observer) options.observer(record);
                throw;
            }
        });
        if (result.size() != rows.size()) {
            throw DataError("provider returned " + std::to_string(result.size()) + " vectors for a batch of " +
                            std::to_string(rows.size()));
        }
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (result[k].empty() || result[k].size() != result.front().size()) {
                throw DataError("dimension mismatch within a returned batch (doc_id '" + docs[rows[k]].doc_id + "')");
            }
            for (double v : result[k]) {
                if (!std::isfinite(v)) {
                    throw DataError("provider returned a non-finite component for doc_id '" + docs[rows[k]].doc_id + "'");
                }
            }
        }
        if (cache) {
            for (std::size_t k = 0; k < rows.size(); ++k) cache->put(keys[rows[k]], provider.model_id, result[k]);
        }
        return result;
    };

    auto fetched = ordered_parallel_map(batches.size(), provider.max_in_flight, fetch);
    for (std::size_t b = 0; b < batches.size(); ++b) {
        for (std::size_t k = 0; k < batches[b].size(); ++k) vectors[batches[b][k]] = std::move((*fetched[b])[k]);
    }

    const std::size_t dim = vectors.front()->size();
    Matrix m(static_cast<Eigen::Index>(docs.size()), static_cast<Eigen::Index>(dim));
    std::vector<std::string> ids;
    ids.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (vectors[i]->size() != dim) {
            throw DataError("dimension mismatch: doc_id '" + docs[i].doc_id + "' has " +
                            std::to_string(vectors[i]->size()) + " components, expected " + std::to_string(dim));
        }
        for (std::size_t j = 0; j < dim; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*vectors[i])[j];
        }
        ids.push_back(docs[i].doc_id);
    }
    return EmbeddingSet(provider.model_id, std::move(ids), std::move(m));
}

}  // namespace styledisp
