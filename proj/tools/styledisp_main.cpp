#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "styledisp/error.hpp"
#include "styledisp/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kConfig = 3, kData = 4, kProvider = 5 };

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"styledisp: topic versus style dispersion of text embeddings"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string stage_flag;
    bool offline = false;
    std::uint64_t seed = 0;
    std::string out_dir;

    auto add_common = [&](CLI::App& cmd) {
        cmd.add_option("-c,--config", config_path, "Run configuration (INI)")->required()->check(CLI::ExistingFile);
        cmd.add_flag("--offline", offline, "Never contact remote providers; use cached vectors only");
        cmd.add_option("--seed", seed, "Global seed (overrides [run] seed)");
        cmd.add_option("--out", out_dir, "Output directory (overrides [run] out)");
    };

    add_common(app);
    app.add_option("--stage", stage_flag, "Stage to run, same names as the subcommands");
    for (const char* name : {"ingest", "generate", "embed", "validate-clusters", "dispersion", "stylometry",
                             "correlate", "report", "run-all"}) {
        CLI::App* sub = app.add_subcommand(name, std::string("Run the ") + name + " stage");
        sub->fallthrough();
    }
    // --config and friends may appear before or after the subcommand.
    app.get_option("--config")->required(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    std::string stage_text = stage_flag;
    for (CLI::App* sub : app.get_subcommands()) {
        if (!stage_text.empty() && stage_text != sub->get_name()) {
            std::cerr << "styledisp: conflicting stages \"" << stage_text << "\" and \"" << sub->get_name() << "\"\n";
            return kUsage;
        }
        stage_text = sub->get_name();
    }
    if (stage_text.empty()) {
        std::cerr << app.help();
        return kUsage;
    }
    const auto stage = styledisp::parse_stage(stage_text);
    if (!stage) {
        std::cerr << "styledisp: unknown stage \"" << stage_text << "\"\n";
        return kUsage;
    }
    if (config_path.empty()) {
        std::cerr << "styledisp: --config is required\n";
        return kUsage;
    }

    try {
        styledisp::RunConfig config = styledisp::load_config(config_path);
        if (offline) config.offline = true;
        if (app.count("--seed") > 0) config.seed = seed;
        if (!out_dir.empty()) config.out_dir = out_dir;
        styledisp::run_stage(*stage, config);
        std::cout << "styledisp: " << stage_text << " finished, artifacts in " << config.out_dir.string() << '\n';
        return kOk;
    } catch (const styledisp::ConfigError& e) {
        std::cerr << "styledisp: config error: " << e.what() << '\n';
        return kConfig;
    } catch (const styledisp::DataError& e) {
        std::cerr << "styledisp: data error: " << e.what() << '\n';
        return kData;
    } catch (const styledisp::ProviderError& e) {
        std::cerr << "styledisp: provider error: " << e.what() << '\n';
        return kProvider;
    } catch (const std::exception& e) {
        std::cerr << "styledisp: " << e.what() << '\n';
        return kFailure;
    }
}
