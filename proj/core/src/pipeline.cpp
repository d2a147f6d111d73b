#include "styledisp/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "styledisp/error.hpp"

namespace styledisp {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

// Wraps one INI section: typed getters that name section and key in errors,
// and a check that every key was recognized.
class Section {
public:
    Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

    std::optional<std::string> raw(const std::string& key) {
        seen_.insert(key);
        for (const auto& [k, v] : tree_) {
            if (k == key) return trim(v.data());
        }
        return std::nullopt;
    }

    std::string str(const std::string& key, std::string fallback) {
        auto v = raw(key);
        return v ? *v : fallback;
    }

    template <typename T>
    T number(const std::string& key, T fallback) {
        const auto v = raw(key);
        if (!v) return fallback;
        return parse<T>(key, *v);
    }

    bool boolean(const std::string& key, bool fallback) {
        const auto v = raw(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "yes" || *v == "1" || *v == "on") return true;
        if (*v == "false" || *v == "no" || *v == "0" || *v == "off") return false;
        throw ConfigError(where(key) + ": expected a boolean, got \"" + *v + "\"");
    }

    template <typename T>
    T parse(const std::string& key, const std::string& text) const {
        T value{};
        if constexpr (std::is_floating_point_v<T>) {
            try {
                std::size_t used = 0;
                value = static_cast<T>(std::stod(text, &used));
                if (used != text.size()) throw std::invalid_argument(text);
            } catch (const std::exception&) {
                throw ConfigError(where(key) + ": expected a number, got \"" + text + "\"");
            }
        } else {
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc() || ptr != text.data() + text.size()) {
                throw ConfigError(where(key) + ": expected a non-negative integer, got \"" + text + "\"");
            }
        }
        return value;
    }

    // Keys of the form prefix.suffix, e.g. annotations.fr.
    std::map<std::string, std::string> prefixed(const std::string& prefix) {
        std::map<std::string, std::string> out;
        for (const auto& [k, v] : tree_) {
            if (k.rfind(prefix + ".", 0) == 0) {
                seen_.insert(k);
                out[k.substr(prefix.size() + 1)] = trim(v.data());
            }
        }
        return out;
    }

    void finish() const {
        for (const auto& [k, v] : tree_) {
            if (seen_.count(k) == 0) throw ConfigError("unknown key [" + name_ + "] " + k);
        }
    }

    std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

private:
    std::string name_;
    const pt::ptree& tree_;
    std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    const std::filesystem::path p(value);
    return p.is_absolute() ? p : (base / p).lexically_normal();
}

std::size_t parse_dim(const Section& s, const std::string& item) {
    if (item == "full" || item == "FullD") return 0;
    const auto d = s.parse<std::size_t>("dims", item);
    if (d == 0) throw ConfigError(s.where("dims") + ": dimension must be positive or \"full\"");
    return d;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view spec) {
    std::vector<std::uint64_t> out;
    auto number = [&](std::string_view text) {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw ConfigError("bad seed \"" + std::string(text) + "\"");
        }
        return v;
    };
    for (const std::string& item : split_list(spec)) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            out.push_back(number(item));
            continue;
        }
        const auto lo = number(trim(std::string_view(item).substr(0, dash)));
        const auto hi = number(trim(std::string_view(item).substr(dash + 1)));
        if (hi < lo) throw ConfigError("empty seed range \"" + item + "\"");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
    }
    if (out.empty()) throw ConfigError("seed list is empty");
    std::set<std::uint64_t> unique(out.begin(), out.end());
    if (unique.size() != out.size()) throw ConfigError("seed list has duplicates");
    return out;
}

std::vector<std::uint64_t> RunConfig::effective_seeds() const {
    std::vector<std::uint64_t> out;
    out.reserve(umap_seeds.size());
    for (auto s : umap_seeds) out.push_back(seed + s);
    return out;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    RunConfig c;
    c.config_text = std::string(text);
    for (std::uint64_t s = 0; s < 30; ++s) c.umap_seeds.push_back(s);

    bool has_run = false;
    std::set<std::string> model_names;
    for (const auto& [name, body] : tree) {
        if (!body.data().empty() && body.empty()) throw ConfigError("config: key \"" + name + "\" outside a section");
        Section s(name, body);
        if (name == "run") {
            has_run = true;
            const auto corpus = s.raw("corpus");
            if (!corpus) throw ConfigError("[run] corpus is required");
            c.corpus_path = resolve(base_dir, *corpus);
            if (auto langs = s.raw("languages")) c.languages = split_list(*langs);
            c.out_dir = resolve(base_dir, s.str("out", "out"));
            c.seed = s.number<std::uint64_t>("seed", 0);
            c.offline = s.boolean("offline", false);
            c.threads = s.number<std::size_t>("threads", 1);
        } else if (name == "generation") {
            c.generation.enabled = s.boolean("enabled", false);
            c.generation.endpoint = s.str("endpoint", "");
            c.generation.api_key_env = s.str("api_key_env", c.generation.api_key_env);
            auto& p = c.generation.params;
            p.model_name = s.str("model", p.model_name);
            p.temperature = s.number<double>("temperature", p.temperature);
            p.max_tokens = s.number<unsigned>("max_tokens", p.max_tokens);
            p.retry_budget = s.number<unsigned>("retry_budget", p.retry_budget);
            p.max_in_flight = s.number<std::size_t>("max_in_flight", p.max_in_flight);
            try {
                p.validate();
            } catch (const InvalidArgument& e) {
                throw ConfigError(std::string("[generation] ") + e.what());
            }
        } else if (name.rfind("model.", 0) == 0) {
            ModelConfig m;
            m.name = name.substr(6);
            if (m.name.empty() || m.name.find_first_of("/\\ ") != std::string::npos) {
                throw ConfigError("bad model section name [" + name + "]");
            }
            if (!model_names.insert(m.name).second) throw ConfigError("duplicate section [" + name + "]");
            const std::string source = s.str("source", "file");
            if (source == "file") {
                m.source = ModelConfig::Source::File;
                const auto path = s.raw("path");
                if (!path) throw ConfigError(s.where("path") + " is required for source = file");
                m.path = resolve(base_dir, *path);
            } else if (source == "remote") {
                m.source = ModelConfig::Source::Remote;
                m.endpoint = s.str("endpoint", "");
                if (m.endpoint.empty()) throw ConfigError(s.where("endpoint") + " is required for source = remote");
            } else {
                throw ConfigError(s.where("source") + ": expected file or remote, got \"" + source + "\"");
            }
            m.model_id = s.str("model_id", m.name);
            m.batch_size = s.number<std::size_t>("batch_size", m.batch_size);
            m.max_in_flight = s.number<std::size_t>("max_in_flight", m.max_in_flight);
            m.max_input_chars = s.number<std::size_t>("max_input_chars", m.max_input_chars);
            m.api_key_env = s.str("api_key_env", m.api_key_env);
            if (auto dir = s.raw("cache_dir")) m.cache_dir = resolve(base_dir, *dir);
            if (m.batch_size == 0 || m.max_in_flight == 0) {
                throw ConfigError("[" + name + "] batch_size and max_in_flight must be positive");
            }
            c.models.push_back(std::move(m));
        } else if (name == "sweep") {
            if (auto dims = s.raw("dims")) {
                c.sweep_dims.clear();
                for (const auto& item : split_list(*dims)) c.sweep_dims.push_back(parse_dim(s, item));
                if (c.sweep_dims.empty()) throw ConfigError("[sweep] dims is empty");
            }
            c.sweep_k = s.number<int>("k", c.sweep_k);
            c.sweep_restarts = s.number<int>("restarts", c.sweep_restarts);
            if (c.sweep_k < 1 || c.sweep_restarts < 1) throw ConfigError("[sweep] k and restarts must be positive");
        } else if (name == "umap") {
            c.umap.n_neighbors = s.number<std::size_t>("n_neighbors", c.umap.n_neighbors);
            c.umap.min_dist = s.number<double>("min_dist", c.umap.min_dist);
            c.umap.spread = s.number<double>("spread", c.umap.spread);
            c.umap.n_epochs = s.number<std::size_t>("n_epochs", c.umap.n_epochs);
            c.umap.negative_sample_rate = s.number<std::size_t>("negative_sample_rate", c.umap.negative_sample_rate);
            c.umap.learning_rate = s.number<double>("learning_rate", c.umap.learning_rate);
            c.umap_dim = s.number<std::size_t>("dim", c.umap_dim);
            if (auto seeds = s.raw("seeds")) c.umap_seeds = parse_seed_list(*seeds);
            try {
                c.umap.validate();
            } catch (const InvalidArgument& e) {
                throw ConfigError(std::string("[umap] ") + e.what());
            }
            if (c.umap_dim == 0) throw ConfigError("[umap] dim must be positive");
        } else if (name == "dispersion") {
            try {
                c.dispersion_method = parse_method(s.str("method", "umap"));
                c.test = stats::parse_ttest_kind(s.str("test", "welch"));
            } catch (const InvalidArgument& e) {
                throw ConfigError(std::string("[dispersion] ") + e.what());
            }
            c.pca_dim = s.number<std::size_t>("pca_dim", c.pca_dim);
        } else if (name == "stylometry") {
            for (const auto& [lang, path] : s.prefixed("annotations")) c.annotations[lang] = resolve(base_dir, path);
            for (const auto& [lang, path] : s.prefixed("function_words")) {
                c.function_words[lang] = resolve(base_dir, path);
            }
        } else if (name == "correlate") {
            try {
                c.pairing = parse_pairing(s.str("pairing", "cartesian"));
            } catch (const InvalidArgument& e) {
                throw ConfigError(std::string("[correlate] ") + e.what());
            }
        } else {
            throw ConfigError("unknown section [" + name + "]");
        }
        s.finish();
    }
    if (!has_run) throw ConfigError("config: [run] section is required");
    if (c.models.empty()) throw ConfigError("config: at least one [model.<name>] section is required");
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    RunConfig c = parse_config(buffer.str(), std::filesystem::absolute(path).parent_path());
    c.config_path = path;
    return c;
}

std::string_view stage_name(Stage stage) {
    switch (stage) {
        case Stage::Ingest: return "ingest";
        case Stage::Generate: return "generate";
        case Stage::Embed: return "embed";
        case Stage::ValidateClusters: return "validate-clusters";
        case Stage::Dispersion: return "dispersion";
        case Stage::Stylometry: return "stylometry";
        case Stage::Correlate: return "correlate";
        case Stage::Report: return "report";
        case Stage::RunAll: return "run-all";
    }
    return "?";
}

std::optional<Stage> parse_stage(std::string_view name) {
    for (Stage s : {Stage::Ingest, Stage::Generate, Stage::Embed, Stage::ValidateClusters, Stage::Dispersion,
                    Stage::Stylometry, Stage::Correlate, Stage::Report, Stage::RunAll}) {
        if (stage_name(s) == name) return s;
    }
    return std::nullopt;
}

}  // namespace styledisp
