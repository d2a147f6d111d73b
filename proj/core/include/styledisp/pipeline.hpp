#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "styledisp/correlate.hpp"
#include "styledisp/embedding.hpp"
#include "styledisp/generation.hpp"
#include "styledisp/reducer.hpp"
#include "styledisp/stats.hpp"

namespace styledisp {

struct ModelConfig {
    enum class Source { File, Remote };

    std::string name;
    Source source = Source::File;
    std::filesystem::path path;  // File
    std::string endpoint;        // Remote
    std::string model_id;
    std::size_t batch_size = 32;
    std::size_t max_in_flight = 1;
    std::size_t max_input_chars = 0;
    std::string api_key_env = "STYLEDISP_EMBED_API_KEY";
    std::optional<std::filesystem::path> cache_dir;
};

struct GenerationConfig {
    bool enabled = false;
    std::string endpoint;  // falls back to STYLEDISP_CHAT_ENDPOINT
    std::string api_key_env = "STYLEDISP_CHAT_API_KEY";
    GenerationParams params;
};

struct RunConfig {
    std::filesystem::path config_path;
    std::string config_text;  // verbatim

    std::filesystem::path corpus_path;
    std::vector<std::string> languages;  // empty = every language in the corpus
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 0;
    bool offline = false;
    std::size_t threads = 1;

    GenerationConfig generation;
    std::vector<ModelConfig> models;

    std::vector<std::size_t> sweep_dims{2, 3, 5, 10, 0};
    int sweep_k = 4;
    int sweep_restarts = 10;

    UmapParams umap;
    std::size_t umap_dim = 2;
    std::vector<std::uint64_t> umap_seeds;  // offsets added to `seed`; default 0..29

    ReductionMethod dispersion_method = ReductionMethod::UMAP;
    std::size_t pca_dim = 2;
    stats::TTestKind test = stats::TTestKind::Welch;

    std::map<std::string, std::filesystem::path> annotations;     // by language
    std::map<std::string, std::filesystem::path> function_words;  // by language

    PairingMode pairing = PairingMode::Cartesian;

    // Effective UMAP seeds (offsets shifted by `seed`).
    std::vector<std::uint64_t> effective_seeds() const;
};

// INI dialect; relative paths resolve against the config file's directory.
// Unknown sections or keys are schema violations (ConfigError).
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

// "0-29", "1,2,5" or a mix.
std::vector<std::uint64_t> parse_seed_list(std::string_view spec);

enum class Stage { Ingest, Generate, Embed, ValidateClusters, Dispersion, Stylometry, Correlate, Report, RunAll };

std::string_view stage_name(Stage stage);
std::optional<Stage> parse_stage(std::string_view name);

// Test seams for the network-backed stages.
struct ProviderFactory {
    std::function<std::unique_ptr<ChatClient>(const GenerationConfig&, const std::string& api_key)> chat;
    std::function<std::unique_ptr<EmbeddingClient>(const ModelConfig&, const std::string& api_key)> embedding;
};

// Runs one stage (or all of them) against the config's output directory,
// which is locked for the duration. Throws styledisp::Error on failure.
void run_stage(Stage stage, const RunConfig& config, const ProviderFactory& providers = {});

}  // namespace styledisp
