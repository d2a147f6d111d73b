#include <gtest/gtest.h>

#include <cstdlib>
#include <map>

#include <nlohmann/json.hpp>

#include "styledisp/error.hpp"
#include "styledisp/hash.hpp"
#include "styledisp/pipeline.hpp"
#include "support.hpp"

using namespace styledisp;
using testing_support::make_doc;
using testing_support::TempDir;

namespace {

class HashEmbedder : public EmbeddingClient {
public:
    std::vector<std::vector<double>> embed(std::span<const std::string> texts, const ProviderSpec&) override {
        std::vector<std::vector<double>> out;
        for (const auto& t : texts) {
            const std::string h = sha256_hex(t);
            std::vector<double> v;
            for (int k = 0; k < 8; ++k) v.push_back(std::stoi(h.substr(k * 4, 4), nullptr, 16) / 65535.0);
            out.push_back(v);
        }
        return out;
    }
};

class EchoChat : public ChatClient {
public:
    ChatResponse complete(const std::string& prompt, const GenerationParams&) override {
        const auto nl = prompt.find('\n');
        return {"Rewritten, tersely: " + prompt.substr(nl + 1, prompt.find('\n', nl + 1) - nl - 1), 1, 1};
    }
};

const char* kTopics[] = {"A bus was full. A man with a long neck argued.",
                         "In Rouen, Mme Roux, 62, fell into the Seine.",
                         "The tram stopped; nobody moved! He sat down.",
                         "At Nancy, M. Blanc hanged himself in his barn.",
                         "Two hours later he was at the Gare Saint-Lazare.",
                         "A fire at Lyon destroyed 3 houses and a mill."};

// Reference cells only; generation fills the other two.
void write_reference_corpus(const std::filesystem::path& path) {
    std::vector<Document> docs;
    for (const char* lang : {"en"}) {
        for (int i = 0; i < 6; ++i) {
            const std::string s = std::to_string(i);
            docs.push_back(make_doc("qr" + s, cells::kQueneauRef,
                                    std::string("Style ") + s + ": " + kTopics[0] + " Variation " + s + ".", "bus",
                                    "style" + s, lang));
            docs.push_back(make_doc("fr" + s, cells::kFeneonRef, kTopics[i], "story" + s, "feneon", lang));
        }
    }
    export_manifest(Corpus(docs), path);
}

std::string mock_config(const std::string& out, bool generation, bool offline = false) {
    return "[run]\ncorpus = corpus.jsonl\nout = " + out + "\nseed = 3\noffline = " + (offline ? "true" : "false") +
           "\n\n[generation]\nenabled = " + (generation ? "true" : "false") +
           "\nendpoint = http://127.0.0.1:9/v1/chat/completions\n\n"
           "[model.mock]\nsource = remote\nendpoint = http://127.0.0.1:9/v1/embeddings\nbatch_size = 5\n\n"
           "[sweep]\ndims = 2, 3, full\nrestarts = 2\n\n"
           "[umap]\nn_neighbors = 5\nn_epochs = 20\nseeds = 0-2\n";
}

ProviderFactory mock_providers() {
    ProviderFactory f;
    f.chat = [](const GenerationConfig&, const std::string&) { return std::make_unique<EchoChat>(); };
    f.embedding = [](const ModelConfig&, const std::string&) { return std::make_unique<HashEmbedder>(); };
    return f;
}

std::map<std::string, std::string> artifacts(const std::filesystem::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const auto rel = std::filesystem::relative(e.path(), dir).generic_string();
        if (rel == "journal.jsonl") continue;
        out[rel] = testing_support::read_file(e.path());
    }
    return out;
}

struct EnvGuard {
    std::string name;
    EnvGuard(std::string n, const char* value) : name(std::move(n)) {
        if (value)
            ::setenv(name.c_str(), value, 1);
        else
            ::unsetenv(name.c_str());
    }
    ~EnvGuard() { ::unsetenv(name.c_str()); }
};

}  // namespace

TEST(Config, ParsesAllSections) {
    TempDir dir;
    const std::string text =
        "[run]\ncorpus = c.jsonl\nlanguages = fr, en\nout = results\nseed = 11\noffline = yes\nthreads = 2\n"
        "[generation]\nenabled = false\nmodel = gpt-4o\ntemperature = 0.7\nmax_tokens = 100\nretry_budget = 2\n"
        "[model.a]\nsource = file\npath = emb/a.jsonl\n"
        "[model.b]\nsource = remote\nendpoint = https://x/v1/embeddings\nmodel_id = text-emb\ncache_dir = cache\n"
        "[sweep]\ndims = 2, full\nk = 4\nrestarts = 3\n"
        "[umap]\nn_neighbors = 10\nmin_dist = 0.2\nseeds = 0-4, 10\n"
        "[dispersion]\nmethod = pca\npca_dim = 3\ntest = student\n"
        "[stylometry]\nannotations.fr = ann_fr.jsonl\nfunction_words.en = fw.txt\n"
        "[correlate]\npairing = indexed\n";
    auto c = parse_config(text, dir.path());
    EXPECT_EQ(c.corpus_path, dir.path() / "c.jsonl");
    EXPECT_EQ(c.languages, (std::vector<std::string>{"fr", "en"}));
    EXPECT_EQ(c.out_dir, dir.path() / "results");
    EXPECT_TRUE(c.offline);
    EXPECT_EQ(c.generation.params.temperature, 0.7);
    ASSERT_EQ(c.models.size(), 2u);
    EXPECT_EQ(c.models[0].path, dir.path() / "emb/a.jsonl");
    EXPECT_EQ(c.models[1].model_id, "text-emb");
    EXPECT_EQ(c.models[1].cache_dir, dir.path() / "cache");
    EXPECT_EQ(c.sweep_dims, (std::vector<std::size_t>{2, 0}));
    EXPECT_EQ(c.umap.n_neighbors, 10u);
    EXPECT_EQ(c.umap_seeds, (std::vector<std::uint64_t>{0, 1, 2, 3, 4, 10}));
    EXPECT_EQ(c.effective_seeds().front(), 11u);
    EXPECT_EQ(c.dispersion_method, ReductionMethod::PCA);
    EXPECT_EQ(c.test, stats::TTestKind::Student);
    EXPECT_EQ(c.annotations.at("fr"), dir.path() / "ann_fr.jsonl");
    EXPECT_EQ(c.pairing, PairingMode::Indexed);
    EXPECT_EQ(c.config_text, text);
}

TEST(Config, DefaultsAndSchemaErrors) {
    const std::string minimal = "[run]\ncorpus = c.jsonl\n[model.a]\npath = a.jsonl\n";
    auto c = parse_config(minimal, "/tmp");
    EXPECT_EQ(c.umap_seeds.size(), 30u);
    EXPECT_EQ(c.sweep_dims, (std::vector<std::size_t>{2, 3, 5, 10, 0}));
    EXPECT_EQ(c.test, stats::TTestKind::Welch);
    EXPECT_EQ(c.pairing, PairingMode::Cartesian);

    for (const std::string bad : {
             std::string("[run]\ncorpus = c\n"),
             std::string("[model.a]\npath = a\n"),
             minimal + "[bogus]\nx = 1\n",
             minimal + "[umap]\nneighbours = 3\n",
             minimal + "[umap]\nn_neighbors = many\n",
             minimal + "[umap]\nseeds = 3-1\n",
             minimal + "[umap]\nseeds = 1,1\n",
             minimal + "[dispersion]\ntest = paired\n",
             minimal + "[model.a]\npath = b\n",
             std::string("[run]\n[model.a]\npath = a\n"),
             minimal + "[model.r]\nsource = remote\n",
             minimal + "[generation]\ntemperature = -1\n",
         }) {
        EXPECT_THROW(parse_config(bad, "/tmp"), ConfigError) << bad;
    }
}

TEST(Config, SeedLists) {
    EXPECT_EQ(parse_seed_list("0-2,7"), (std::vector<std::uint64_t>{0, 1, 2, 7}));
    EXPECT_EQ(parse_seed_list("5"), std::vector<std::uint64_t>{5});
    EXPECT_THROW(parse_seed_list(""), ConfigError);
    EXPECT_THROW(parse_seed_list("x"), ConfigError);
}

TEST(Stages, Names) {
    for (Stage s : {Stage::Ingest, Stage::Generate, Stage::Embed, Stage::ValidateClusters, Stage::Dispersion,
                    Stage::Stylometry, Stage::Correlate, Stage::Report, Stage::RunAll})
        EXPECT_EQ(parse_stage(stage_name(s)), s);
    EXPECT_EQ(stage_name(Stage::ValidateClusters), "validate-clusters");
    EXPECT_FALSE(parse_stage("deploy"));
}

TEST(Pipeline, MissingCredentialsFailBeforeWork) {
    TempDir dir;
    write_reference_corpus(dir / "corpus.jsonl");
    EnvGuard embed("STYLEDISP_EMBED_API_KEY", nullptr);
    EnvGuard chat("STYLEDISP_CHAT_API_KEY", "k");
    auto c = parse_config(mock_config("out", false), dir.path());
    EXPECT_THROW(run_stage(Stage::RunAll, c, mock_providers()), ConfigError);
    EXPECT_FALSE(std::filesystem::exists(dir / "out" / "journal.jsonl"));
    // Offline runs skip the credential check.
    auto offline = parse_config(mock_config("out", false, true), dir.path());
    EXPECT_NO_THROW(run_stage(Stage::Ingest, offline, mock_providers()));
}

TEST(Pipeline, MissingGenerationCredentials) {
    TempDir dir;
    write_reference_corpus(dir / "corpus.jsonl");
    EnvGuard embed("STYLEDISP_EMBED_API_KEY", "k");
    EnvGuard chat("STYLEDISP_CHAT_API_KEY", nullptr);
    auto c = parse_config(mock_config("out", true), dir.path());
    EXPECT_THROW(run_stage(Stage::RunAll, c, mock_providers()), ConfigError);
}

TEST(Pipeline, RunAllWithMockProvidersIsDeterministic) {
    TempDir dir;
    write_reference_corpus(dir / "corpus.jsonl");
    EnvGuard embed("STYLEDISP_EMBED_API_KEY", "k");
    EnvGuard chat("STYLEDISP_CHAT_API_KEY", "k");
    auto a = parse_config(mock_config("run-a", true), dir.path());
    auto b = a;
    b.out_dir = dir / "run-b";
    run_stage(Stage::RunAll, a, mock_providers());
    run_stage(Stage::RunAll, b, mock_providers());

    auto fa = artifacts(dir / "run-a");
    auto fb = artifacts(dir / "run-b");
    EXPECT_EQ(fa.size(), fb.size());
    for (const auto& [rel, bytes] : fa) EXPECT_EQ(bytes, fb[rel]) << rel;
    for (const char* required :
         {"corpus/corpus.jsonl", "generated/en_QUENEAU_GEN.jsonl", "generated/en_FENEON_GEN.jsonl",
          "embeddings/mock.jsonl", "clusters/sweep_en.csv", "dispersion/hypotheses_en.csv", "dispersion/en_mock.json",
          "stylometry/features_en.csv", "stylometry/ground_en.csv", "correlate/en_mock.csv", "report.md",
          "summary.json", "plots/en_mock_QUENEAU_GEN.svg"}) {
        EXPECT_TRUE(fa.count(required)) << required;
    }

    // Summary checksums cover every other artifact.
    auto summary = nlohmann::json::parse(fa.at("summary.json"));
    for (const auto& [rel, content] : fa) {
        if (rel == "summary.json") continue;
        EXPECT_EQ(summary["artifacts"][rel], sha256_hex(content)) << rel;
    }

    // The journal records every provider call and each stage.
    const std::string journal = testing_support::read_file(dir / "run-a" / "journal.jsonl");
    EXPECT_NE(journal.find("\"provider_call\""), std::string::npos);
    EXPECT_NE(journal.find("\"stage\":\"correlate\""), std::string::npos);
    EXPECT_NE(journal.find("inputs_sha256"), std::string::npos);

    // Re-running a single stage from cached upstream artifacts reproduces it.
    const std::string before = fa.at("dispersion/hypotheses_en.csv");
    run_stage(Stage::Dispersion, a, mock_providers());
    EXPECT_EQ(testing_support::read_file(dir / "run-a" / "dispersion/hypotheses_en.csv"), before);
}

TEST(Pipeline, OutputDirectoryIsLocked) {
    TempDir dir;
    write_reference_corpus(dir / "corpus.jsonl");
    std::filesystem::create_directories(dir / "out");
    testing_support::write_file(dir / "out" / ".lock", "123\n");
    auto c = parse_config(mock_config("out", false, true), dir.path());
    EXPECT_THROW(run_stage(Stage::Ingest, c, mock_providers()), Error);
}

TEST(Pipeline, MissingUpstreamArtifact) {
    TempDir dir;
    write_reference_corpus(dir / "corpus.jsonl");
    auto c = parse_config(mock_config("out", false, true), dir.path());
    EXPECT_THROW(run_stage(Stage::Dispersion, c, mock_providers()), Error);
    std::filesystem::remove(dir / "corpus.jsonl");
    EXPECT_THROW(run_stage(Stage::Ingest, c, mock_providers()), ConfigError);
}
