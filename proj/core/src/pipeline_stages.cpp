#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "styledisp/cluster.hpp"
#include "styledisp/correlate.hpp"
#include "styledisp/csv.hpp"
#include "styledisp/dispersion.hpp"
#include "styledisp/error.hpp"
#include "styledisp/hash.hpp"
#include "styledisp/http_provider.hpp"
#include "styledisp/pipeline.hpp"
#include "styledisp/stylometry.hpp"
#include "styledisp/svg.hpp"

namespace styledisp {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const fs::path& path, std::string_view content) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

class OutputLock {
public:
    explicit OutputLock(const fs::path& dir) : path_(dir / ".lock") {
        fs::create_directories(dir);
        const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0) throw Error("output directory " + dir.string() + " is locked by another run (" + path_.string() + ")");
        const std::string pid = std::to_string(::getpid()) + "\n";
        [[maybe_unused]] const auto written = ::write(fd, pid.data(), pid.size());
        ::close(fd);
    }
    ~OutputLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    OutputLock(const OutputLock&) = delete;
    OutputLock& operator=(const OutputLock&) = delete;

private:
    fs::path path_;
};

class Journal {
public:
    explicit Journal(const fs::path& path) : out_(path, std::ios::app | std::ios::binary) {
        if (!out_) throw Error("cannot open journal " + path.string());
    }

    void append(ojson entry) {
        std::lock_guard<std::mutex> guard(mutex_);
        out_ << entry.dump() << '\n';
        out_.flush();
    }

private:
    std::mutex mutex_;
    std::ofstream out_;
};

struct Context {
    const RunConfig& config;
    const ProviderFactory& providers;
    Journal& journal;
    fs::path out;

    fs::path at(const std::string& rel) const { return out / rel; }
};

// Artifacts written by one stage, keyed by path relative to the output dir.
class StageRecord {
public:
    StageRecord(Context& ctx, Stage stage) : ctx_(ctx), stage_(stage), start_(std::chrono::steady_clock::now()) {}

    void input(const std::string& rel) {
        const fs::path p = ctx_.at(rel);
        if (!fs::exists(p)) {
            throw Error("missing upstream artifact " + p.string() + " (required by stage " +
                        std::string(stage_name(stage_)) + ")");
        }
        inputs_[rel] = sha256_file(p);
    }

    void external_input(const fs::path& path) { inputs_[path.string()] = sha256_file(path); }

    void write(const std::string& rel, std::string_view content) {
        write_text(ctx_.at(rel), content);
        artifacts_[rel] = sha256_hex(content);
    }

    void finish() {
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::string digest_input = ctx_.config.config_text;
        for (const auto& [rel, sha] : inputs_) digest_input += "\n" + rel + " " + sha;
        ojson entry = ojson::object();
        entry["event"] = "stage";
        entry["stage"] = std::string(stage_name(stage_));
        entry["seconds"] = seconds;
        entry["inputs_sha256"] = sha256_hex(digest_input);
        entry["inputs"] = inputs_;
        entry["artifacts"] = artifacts_;
        ctx_.journal.append(std::move(entry));
    }

private:
    Context& ctx_;
    Stage stage_;
    std::chrono::steady_clock::time_point start_;
    std::map<std::string, std::string> inputs_;
    std::map<std::string, std::string> artifacts_;
};

void note(Context& ctx, std::string_view stage, std::string_view key, const ojson& value) {
    ojson entry = ojson::object();
    entry["event"] = "note";
    entry["stage"] = std::string(stage);
    entry["key"] = std::string(key);
    entry["value"] = value;
    ctx.journal.append(std::move(entry));
}

CallObserver call_logger(Context& ctx, std::string provider) {
    return [&ctx, provider](const CallRecord& r) {
        ojson entry = ojson::object();
        entry["event"] = "provider_call";
        entry["provider"] = provider;
        entry["prompt_sha256"] = r.prompt_sha256;
        entry["attempt"] = r.attempt;
        entry["latency_ms"] = r.latency_ms;
        entry["prompt_tokens"] = r.prompt_tokens;
        entry["completion_tokens"] = r.completion_tokens;
        entry["ok"] = r.ok;
        if (!r.ok) entry["error"] = r.error;
        ctx.journal.append(std::move(entry));
    };
}

std::string env_or_empty(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    return v == nullptr ? std::string() : std::string(v);
}

const std::string kCorpusFile = "corpus/corpus.jsonl";

Corpus load_run_corpus(StageRecord& rec, Context& ctx) {
    rec.input(kCorpusFile);
    return load_manifest(ctx.at(kCorpusFile));
}

std::vector<std::string> run_languages(const Context& ctx, const Corpus& corpus) {
    if (ctx.config.languages.empty()) return {corpus.languages().begin(), corpus.languages().end()};
    for (const std::string& lang : ctx.config.languages) {
        if (corpus.languages().count(lang) == 0) throw ConfigError("language \"" + lang + "\" not present in corpus");
    }
    return ctx.config.languages;
}

std::vector<std::string> ids_of(const Corpus& corpus, const std::vector<std::size_t>& rows) {
    std::vector<std::string> ids;
    ids.reserve(rows.size());
    for (std::size_t r : rows) ids.push_back(corpus.documents()[r].doc_id);
    return ids;
}

std::string embeddings_file(const ModelConfig& m) { return "embeddings/" + m.name + ".jsonl"; }

EmbeddingSet load_model_embeddings(StageRecord& rec, Context& ctx, const ModelConfig& m,
                                   const std::vector<std::string>& ids) {
    rec.input(embeddings_file(m));
    const EmbeddingSet set = import_embeddings(ctx.at(embeddings_file(m))).aligned_to(ids);
    return EmbeddingSet(m.name, set.doc_ids(), set.matrix());
}

// ---------------------------------------------------------------- stages

void stage_ingest(Context& ctx) {
    StageRecord rec(ctx, Stage::Ingest);
    rec.external_input(ctx.config.corpus_path);
    const Corpus corpus = load_manifest(ctx.config.corpus_path);
    std::ostringstream manifest;
    write_manifest(corpus, manifest);
    rec.write(kCorpusFile, manifest.str());
    for (const std::string& lang : run_languages(ctx, corpus)) {
        const DesignReport report = validate_design(corpus, lang);
        ojson j = ojson::object();
        j["language"] = report.language;
        j["per_cell_counts"] = ojson::object();
        for (CellId cell : cells::kAll) {
            const auto it = report.per_cell_counts.find(cell);
            j["per_cell_counts"][std::string(cell_name(cell))] = it == report.per_cell_counts.end() ? 0 : it->second;
        }
        j["balanced"] = report.balanced;
        j["pairing_complete"] = report.pairing_complete;
        j["issues"] = report.issues;
        rec.write("corpus/design_" + lang + ".json", j.dump(2) + "\n");
        if (!report.issues.empty()) note(ctx, "ingest", "design_issues_" + lang, report.issues);
    }
    rec.finish();
}

void stage_generate(Context& ctx) {
    StageRecord rec(ctx, Stage::Generate);
    Corpus corpus = load_run_corpus(rec, ctx);
    const GenerationConfig& gen = ctx.config.generation;
    std::unique_ptr<ChatClient> client;
    GenerationOptions options;
    options.retry.jitter_seed = ctx.config.seed;
    options.observer = call_logger(ctx, "chat");
    bool changed = false;
    for (const std::string& lang : run_languages(ctx, corpus)) {
        for (CellId target : {cells::kQueneauGen, cells::kFeneonGen}) {
            if (!select_cell(corpus, target, lang).empty()) {
                note(ctx, "generate", "skipped_" + lang + "_" + std::string(cell_name(target)), "cell already present");
                continue;
            }
            if (ctx.config.offline) {
                throw ConfigError("cell " + std::string(cell_name(target)) + " (" + lang +
                                  ") must be generated but the run is offline");
            }
            if (!client) {
                const std::string key = env_or_empty(gen.api_key_env);
                if (ctx.providers.chat) {
                    client = ctx.providers.chat(gen, key);
                } else {
                    std::string endpoint = gen.endpoint.empty() ? env_or_empty("STYLEDISP_CHAT_ENDPOINT") : gen.endpoint;
                    if (endpoint.empty()) throw ConfigError("[generation] endpoint is not set");
                    client = std::make_unique<HttpChatClient>(endpoint, key);
                }
            }
            const std::vector<Document> docs = generate_cell(corpus, target, lang, *client, gen.params, options);
            std::ostringstream out;
            write_manifest(Corpus(docs), out);
            rec.write("generated/" + lang + "_" + std::string(cell_name(target)) + ".jsonl", out.str());
            corpus = with_documents(corpus, docs);
            changed = true;
        }
    }
    if (changed) {
        std::ostringstream manifest;
        write_manifest(corpus, manifest);
        rec.write(kCorpusFile, manifest.str());
    }
    rec.finish();
}

void stage_embed(Context& ctx) {
    StageRecord rec(ctx, Stage::Embed);
    const Corpus corpus = load_run_corpus(rec, ctx);
    std::vector<std::string> ids;
    for (const Document& d : corpus.documents()) ids.push_back(d.doc_id);
    for (const ModelConfig& m : ctx.config.models) {
        EmbeddingSet set;
        if (m.source == ModelConfig::Source::File) {
            rec.external_input(m.path);
            set = import_embeddings(m.path).aligned_to(ids);
        } else {
            ProviderSpec spec;
            spec.endpoint = m.endpoint;
            spec.model_id = m.model_id;
            spec.batch_size = m.batch_size;
            spec.max_in_flight = m.max_in_flight;
            spec.max_input_chars = m.max_input_chars;
            EmbedOptions options;
            options.cache_dir = m.cache_dir;
            options.offline = ctx.config.offline;
            options.retry.jitter_seed = ctx.config.seed;
            options.observer = call_logger(ctx, "embedding:" + m.name);
            const std::string key = env_or_empty(m.api_key_env);
            std::unique_ptr<EmbeddingClient> client =
                ctx.providers.embedding ? ctx.providers.embedding(m, key) : std::make_unique<HttpEmbeddingClient>(key);
            set = embed_corpus(spec, corpus, *client, options);
        }
        std::ostringstream out;
        write_embeddings(set, out);
        rec.write(embeddings_file(m), out.str());
    }
    rec.finish();
}

void stage_validate_clusters(Context& ctx) {
    StageRecord rec(ctx, Stage::ValidateClusters);
    const Corpus corpus = load_run_corpus(rec, ctx);
    for (const std::string& lang : run_languages(ctx, corpus)) {
        const auto rows = language_rows(corpus, lang);
        const auto ids = ids_of(corpus, rows);
        std::vector<int> truth;
        for (std::size_t r : rows) truth.push_back(class_index(corpus.documents()[r].cell));
        std::vector<EmbeddingSet> sets;
        for (const ModelConfig& m : ctx.config.models) sets.push_back(load_model_embeddings(rec, ctx, m, ids));
        SweepOptions options;
        options.dims = ctx.config.sweep_dims;
        options.k = ctx.config.sweep_k;
        options.seed = ctx.config.seed;
        options.restarts = ctx.config.sweep_restarts;
        const SweepTable table = sweep(sets, truth, options);
        rec.write("clusters/sweep_" + lang + ".csv", sweep_csv(table));
        rec.write("clusters/sweep_" + lang + ".json", sweep_json(table));
    }
    rec.finish();
}

void stage_dispersion(Context& ctx) {
    StageRecord rec(ctx, Stage::Dispersion);
    const Corpus corpus = load_run_corpus(rec, ctx);
    const RunConfig& cfg = ctx.config;
    note(ctx, "dispersion", "test", std::string(stats::to_string(cfg.test)) + " two-sided");
    note(ctx, "dispersion", "method", std::string(method_name(cfg.dispersion_method)));
    for (const std::string& lang : run_languages(ctx, corpus)) {
        const auto rows = language_rows(corpus, lang);
        const auto ids = ids_of(corpus, rows);
        std::vector<CellId> row_cells;
        for (std::size_t r : rows) row_cells.push_back(corpus.documents()[r].cell);
        std::vector<ModelVerdicts> verdicts;
        for (const ModelConfig& m : cfg.models) {
            const EmbeddingSet set = load_model_embeddings(rec, ctx, m, ids);
            std::vector<ReducedSet> reductions;
            switch (cfg.dispersion_method) {
                case ReductionMethod::UMAP: {
                    const auto seeds = cfg.effective_seeds();
                    reductions = multi_seed_reduce(set.matrix(), cfg.umap_dim, cfg.umap, seeds, cfg.threads);
                    break;
                }
                case ReductionMethod::PCA:
                    reductions.push_back(pca_reduce(set.matrix(), cfg.pca_dim));
                    break;
                case ReductionMethod::FullD:
                    reductions.push_back(full_dimension(set.matrix()));
                    break;
            }
            const DispersionTable table = compute_dispersion(reductions, row_cells, ids);
            const std::string stem = lang + "_" + m.name;
            rec.write("dispersion/" + stem + ".json", dispersion_json(table, m.name));
            verdicts.push_back({m.name, test_hypotheses(table, cfg.test)});

            const Matrix& last = reductions.back().coords;
            if (last.cols() >= 2) {
                const Matrix plane = last.leftCols(2);
                const PlotBounds bounds = bounds_of(plane);
                for (const CellDispersion& cell : table.cells) {
                    std::vector<std::size_t> members;
                    for (std::size_t i = 0; i < row_cells.size(); ++i) {
                        if (row_cells[i] == cell.cell) members.push_back(i);
                    }
                    const std::string name(cell_name(cell.cell));
                    rec.write("plots/" + stem + "_" + name + ".svg",
                              scatter_svg(take_rows(plane, members), lang + " " + m.name + " " + name, cell.mean,
                                          bounds));
                }
            }
        }
        rec.write("dispersion/hypotheses_" + lang + ".csv", hypotheses_csv(verdicts));
        rec.write("dispersion/hypotheses_" + lang + ".json", hypotheses_json(verdicts, cfg.test));
    }
    rec.finish();
}

void stage_stylometry(Context& ctx) {
    StageRecord rec(ctx, Stage::Stylometry);
    const Corpus corpus = load_run_corpus(rec, ctx);
    const RunConfig& cfg = ctx.config;
    for (const std::string& lang : run_languages(ctx, corpus)) {
        FunctionWords words;
        if (const auto it = cfg.function_words.find(lang); it != cfg.function_words.end()) {
            rec.external_input(it->second);
            words = FunctionWords::load(it->second);
        } else {
            words = FunctionWords::builtin(lang);
        }
        std::optional<AnnotationSource> annotations;
        if (const auto it = cfg.annotations.find(lang); it != cfg.annotations.end()) {
            rec.external_input(it->second);
            annotations = load_annotations(it->second);
        }
        const FeatureTable table =
            build_feature_table(corpus, lang, words, annotations ? &*annotations : nullptr);
        const bool heuristic = std::any_of(table.rows.begin(), table.rows.end(), [](const StyleFeatures& f) {
            return f.ner_low_confidence || f.tag_low_confidence;
        });
        if (heuristic) note(ctx, "stylometry", "low_confidence_" + lang, "ner/tag from built-in heuristics");
        const GroundFrequencyTable ground = ground_table(table, cfg.test);
        rec.write("stylometry/features_" + lang + ".csv", features_csv(table));
        rec.write("stylometry/ground_" + lang + ".csv", ground_csv(ground));
        rec.write("stylometry/ground_" + lang + ".json", ground_json(ground));
    }
    rec.finish();
}

void stage_correlate(Context& ctx) {
    StageRecord rec(ctx, Stage::Correlate);
    const Corpus corpus = load_run_corpus(rec, ctx);
    note(ctx, "correlate", "pairing", std::string(pairing_name(ctx.config.pairing)));
    for (const std::string& lang : run_languages(ctx, corpus)) {
        const std::string features_rel = "stylometry/features_" + lang + ".csv";
        const std::string ground_rel = "stylometry/ground_" + lang + ".json";
        rec.input(features_rel);
        rec.input(ground_rel);
        const FeatureTable features = parse_features_csv(read_text(ctx.at(features_rel)), lang);
        const GroundFrequencyTable ground = parse_ground_json(read_text(ctx.at(ground_rel)));
        for (const ModelConfig& m : ctx.config.models) {
            const std::string stem = lang + "_" + m.name;
            const std::string disp_rel = "dispersion/" + stem + ".json";
            rec.input(disp_rel);
            const DispersionTable dispersion = parse_dispersion_json(read_text(ctx.at(disp_rel)));
            std::vector<CorrelationMatrix> matrices;
            for (CellId x : {cells::kQueneauRef, cells::kFeneonRef}) {
                const DeltaSeries series = delta_series(x, cells::kQueneauGen, dispersion, features, ctx.config.pairing);
                matrices.push_back(correlation_matrix(series, ground));
            }
            rec.write("correlate/" + stem + ".csv", correlation_csv(matrices));
            rec.write("correlate/" + stem + ".json", correlation_json(matrices, m.name));
        }
    }
    rec.finish();
}

std::string glyph(const std::string& cell) {
    if (cell == "PASS") return "✓";
    if (cell == "FAIL") return "✗";
    if (cell == "up") return "↑";
    if (cell == "down") return "↓";
    return cell;
}

std::string markdown_table(const std::string& csv_text) {
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) return "(empty)\n";
    std::ostringstream out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out << '|';
        for (const std::string& cell : rows[r]) out << ' ' << (r == 0 ? cell : glyph(cell)) << " |";
        out << '\n';
        if (r == 0) {
            out << '|';
            for (std::size_t c = 0; c < rows[r].size(); ++c) out << " --- |";
            out << '\n';
        }
    }
    return out.str();
}

void stage_report(Context& ctx) {
    StageRecord rec(ctx, Stage::Report);
    const Corpus corpus = load_run_corpus(rec, ctx);
    const RunConfig& cfg = ctx.config;
    std::ostringstream md;
    md << "# styledisp report\n\n";
    md << "Seed " << cfg.seed << ", " << cfg.umap_seeds.size() << " UMAP seeds, dispersion on "
       << method_name(cfg.dispersion_method) << ", " << stats::to_string(cfg.test) << " two-sided t-tests, "
       << pairing_name(cfg.pairing) << " pairing.\n\n";
    auto section = [&](const std::string& title, const std::string& rel) {
        rec.input(rel);
        md << "### " << title << "\n\n" << markdown_table(read_text(ctx.at(rel))) << '\n';
    };
    for (const std::string& lang : run_languages(ctx, corpus)) {
        md << "## " << lang << "\n\n";
        section("Cluster validation (S-bar)", "clusters/sweep_" + lang + ".csv");
        section("Dispersion hypotheses", "dispersion/hypotheses_" + lang + ".csv");
        md << "### Cell dispersion\n\n| model |";
        for (CellId cell : cells::kAll) md << ' ' << cell_name(cell) << " |";
        md << "\n| --- |";
        for (std::size_t i = 0; i < cells::kAll.size(); ++i) md << " --- |";
        md << '\n';
        for (const ModelConfig& m : cfg.models) {
            const std::string rel = "dispersion/" + lang + "_" + m.name + ".json";
            rec.input(rel);
            const DispersionTable t = parse_dispersion_json(read_text(ctx.at(rel)));
            md << "| " << m.name << " |";
            for (CellId cell : cells::kAll) {
                char buffer[32];
                std::snprintf(buffer, sizeof buffer, "%.4f", t.has(cell) ? t.cell(cell).mean : 0.0);
                md << ' ' << (t.has(cell) ? buffer : "-") << " |";
            }
            md << '\n';
        }
        md << '\n';
        section("Ground frequencies", "stylometry/ground_" + lang + ".csv");
        for (const ModelConfig& m : cfg.models) {
            section("Correlations, " + m.name, "correlate/" + lang + "_" + m.name + ".csv");
        }
    }
    rec.write("report.md", md.str());

    ojson summary = ojson::object();
    summary["config_sha256"] = sha256_hex(cfg.config_text);
    summary["seed"] = cfg.seed;
    summary["umap_seeds"] = cfg.effective_seeds();
    summary["languages"] = run_languages(ctx, corpus);
    summary["models"] = ojson::array();
    for (const ModelConfig& m : cfg.models) summary["models"].push_back(m.name);
    summary["settings"] = {{"dispersion_method", std::string(method_name(cfg.dispersion_method))},
                           {"test", std::string(stats::to_string(cfg.test)) + " two-sided"},
                           {"pairing", std::string(pairing_name(cfg.pairing))},
                           {"group_aggregation", "corpus-level z-score mean for indexes and structural"},
                           {"letters", "letter code points over all code points"}};
    std::map<std::string, std::string> artifacts;
    for (const auto& entry : fs::recursive_directory_iterator(ctx.out)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), ctx.out).generic_string();
        if (rel == "journal.jsonl" || rel == ".lock" || rel == "summary.json") continue;
        artifacts[rel] = sha256_file(entry.path());
    }
    summary["artifacts"] = artifacts;
    rec.write("summary.json", summary.dump(2) + "\n");
    rec.finish();
}

void require_credentials(const RunConfig& cfg, Stage stage) {
    if (cfg.offline) return;
    const bool embed = stage == Stage::Embed || stage == Stage::RunAll;
    const bool generate = stage == Stage::Generate || (stage == Stage::RunAll && cfg.generation.enabled);
    if (embed) {
        for (const ModelConfig& m : cfg.models) {
            if (m.source == ModelConfig::Source::Remote && env_or_empty(m.api_key_env).empty()) {
                throw ConfigError("model " + m.name + " is remote but " + m.api_key_env +
                                  " is not set (use --offline to read from the cache only)");
            }
        }
    }
    if (generate && env_or_empty(cfg.generation.api_key_env).empty()) {
        throw ConfigError("generation needs credentials but " + cfg.generation.api_key_env + " is not set");
    }
}

void require_paths(const RunConfig& cfg, Stage stage) {
    auto need = [](const fs::path& p, const std::string& what) {
        if (!fs::exists(p)) throw ConfigError(what + " not found: " + p.string());
    };
    if (stage == Stage::Ingest || stage == Stage::RunAll) need(cfg.corpus_path, "corpus");
    if (stage == Stage::Embed || stage == Stage::RunAll) {
        for (const ModelConfig& m : cfg.models) {
            if (m.source == ModelConfig::Source::File) need(m.path, "embedding file for model " + m.name);
        }
    }
    if (stage == Stage::Stylometry || stage == Stage::RunAll) {
        for (const auto& [lang, p] : cfg.annotations) need(p, "annotations for " + lang);
        for (const auto& [lang, p] : cfg.function_words) need(p, "function words for " + lang);
    }
}

}  // namespace

void run_stage(Stage stage, const RunConfig& config, const ProviderFactory& providers) {
    require_paths(config, stage);
    require_credentials(config, stage);
    OutputLock lock(config.out_dir);
    Journal journal(config.out_dir / "journal.jsonl");
    Context ctx{config, providers, journal, config.out_dir};

    ojson start = ojson::object();
    start["event"] = "run_start";
    start["stage"] = std::string(stage_name(stage));
    start["config_path"] = config.config_path.string();
    start["config"] = config.config_text;
    start["offline"] = config.offline;
    start["seed"] = config.seed;
    journal.append(std::move(start));

    auto run_one = [&](Stage s) {
        switch (s) {
            case Stage::Ingest: stage_ingest(ctx); break;
            case Stage::Generate: stage_generate(ctx); break;
            case Stage::Embed: stage_embed(ctx); break;
            case Stage::ValidateClusters: stage_validate_clusters(ctx); break;
            case Stage::Dispersion: stage_dispersion(ctx); break;
            case Stage::Stylometry: stage_stylometry(ctx); break;
            case Stage::Correlate: stage_correlate(ctx); break;
            case Stage::Report: stage_report(ctx); break;
            case Stage::RunAll: break;
        }
    };
    try {
        if (stage == Stage::RunAll) {
            run_one(Stage::Ingest);
            if (config.generation.enabled) run_one(Stage::Generate);
            for (Stage s : {Stage::Embed, Stage::ValidateClusters, Stage::Dispersion, Stage::Stylometry,
                            Stage::Correlate, Stage::Report}) {
                run_one(s);
            }
        } else {
            run_one(stage);
        }
    } catch (const std::exception& e) {
        ojson failure = ojson::object();
        failure["event"] = "error";
        failure["message"] = e.what();
        journal.append(std::move(failure));
        throw;
    }
    ojson end = ojson::object();
    end["event"] = "run_end";
    end["status"] = "ok";
    journal.append(std::move(end));
}

}  // namespace styledisp
