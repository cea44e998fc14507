// Command-line front end: build knowledge bases, run extraction campaigns
// and parameter sweeps against the local simulated RAG target.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ragleak/config.hpp"
#include "ragleak/report.hpp"

namespace fs = std::filesystem;
using namespace ragleak;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitBackendError = 3;

struct BuildKbArgs {
    std::string corpus_dir;
    std::string out_file;
    std::size_t max_words = 1500;
    std::size_t overlap = 300;
    bool sentence_preserving = false;
    std::size_t embedding_dim = 256;
    bool no_embeddings = false;
};

int run_build_kb(const BuildKbArgs& args) {
    ChunkingParams params;
    params.max_words = args.max_words;
    params.overlap_words = args.overlap;
    params.sentence_preserving = args.sentence_preserving;
    params.validate();

    const auto docs = load_corpus(args.corpus_dir);
    if (docs.empty()) throw IngestionError("corpus directory has no files: " + args.corpus_dir);
    const auto kb = kb_build(docs, params);

    if (args.no_embeddings) {
        save_kb(kb, args.out_file);
    } else {
        EmbeddingBackendSpec spec;
        spec.dimension = args.embedding_dim;
        const auto index = index_build(kb, make_embedding_backend(spec));
        save_kb(kb, args.out_file, &index);
    }
    std::cout << "chunks: " << kb.chunks.size() << "\n";
    std::cout << "wrote " << args.out_file << "\n";
    return kExitOk;
}

struct AttackArgs {
    std::string kb_file;
    std::string config_file;
    std::optional<std::size_t> rounds;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

CampaignConfig resolve_config(const AttackArgs& args) {
    auto config = args.config_file.empty() ? default_campaign_config()
                                           : load_campaign_config(args.config_file);
    // Flags override the file.
    if (args.seed) config.apply_seed(*args.seed);
    if (args.rounds) config.apply_rounds(*args.rounds);
    if (args.out_dir) config.output_dir = *args.out_dir;
    config.validate();
    return config;
}

int run_attack(const AttackArgs& args) {
    const auto config = resolve_config(args);
    auto stored = load_kb(args.kb_file);
    auto harness = build_harness(config, std::move(stored));
    try {
        const auto report = harness->run();
        write_campaign_outputs(report, config.output_dir);
        std::cout << "rounds: " << report.query_count << "\n";
        std::cout << "final_crr: " << format_double(report.final_crr) << "\n";
        std::cout << "wrote " << config.output_dir << "/report.json\n";
        return kExitOk;
    } catch (const CampaignAbort& abort) {
        write_campaign_outputs(abort.partial(), config.output_dir);
        std::cerr << "error: campaign aborted: " << abort.what() << "\n";
        std::cerr << "partial outputs flushed to " << config.output_dir << "\n";
        return kExitBackendError;
    }
}

struct SweepArgs {
    AttackArgs base;
    std::string vary;
};

int run_sweep(const SweepArgs& args) {
    const auto eq = args.vary.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= args.vary.size()) {
        throw ConfigError("sweep: --vary expects key=v1,v2,...");
    }
    const std::string key = args.vary.substr(0, eq);
    std::vector<std::string> values;
    std::string rest = args.vary.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        values.push_back(rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                     : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }

    const auto base_config = resolve_config(args.base);
    const auto stored = load_kb(args.base.kb_file);
    fs::create_directories(base_config.output_dir);

    std::string summary = "value,final_crr\n";
    int exit_code = kExitOk;
    for (const auto& value : values) {
        auto config = base_config;
        config.apply_sweep_value(key, value);
        config.output_dir =
            (fs::path(base_config.output_dir) / (key + "=" + value)).string();
        auto harness = build_harness(config, stored);
        try {
            const auto report = harness->run();
            write_campaign_outputs(report, config.output_dir);
            summary += value + "," + format_double(report.final_crr) + "\n";
            std::cout << key << "=" << value
                      << " final_crr: " << format_double(report.final_crr) << "\n";
        } catch (const CampaignAbort& abort) {
            write_campaign_outputs(abort.partial(), config.output_dir);
            summary += value + ",aborted\n";
            std::cerr << "error: campaign for " << key << "=" << value
                      << " aborted: " << abort.what() << "\n";
            exit_code = kExitBackendError;
        }
    }
    std::ofstream out(fs::path(base_config.output_dir) / "summary.csv", std::ios::binary);
    out << summary;
    std::cout << "wrote " << base_config.output_dir << "/summary.csv\n";
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ragleak - feedback-guided RAG knowledge-base extraction simulator"};
    app.require_subcommand(1);

    BuildKbArgs build_args;
    auto* build = app.add_subcommand("build-kb", "Chunk a corpus directory into a KB JSON file");
    build->add_option("--corpus", build_args.corpus_dir, "Directory of UTF-8 .txt files")
        ->required();
    build->add_option("--out", build_args.out_file, "Output KB JSON path")->required();
    build->add_option("--max-words", build_args.max_words, "Maximum words per chunk");
    build->add_option("--overlap", build_args.overlap, "Overlap words between adjacent chunks");
    build->add_flag("--sentence-preserving", build_args.sentence_preserving,
                    "Retract window edges to sentence boundaries");
    build->add_option("--embedding-dim", build_args.embedding_dim,
                      "Builtin embedding dimension stored with the KB");
    build->add_flag("--no-embeddings", build_args.no_embeddings, "Skip embedding vectors");

    AttackArgs attack_args;
    auto* attack = app.add_subcommand("attack", "Run one extraction campaign");
    attack->add_option("--kb", attack_args.kb_file, "KB JSON file")->required();
    attack->add_option("--config", attack_args.config_file, "Campaign config JSON");
    attack->add_option("--rounds", attack_args.rounds, "Attack rounds (overrides config)");
    attack->add_option("--seed", attack_args.seed, "Top-level seed (overrides config)");
    attack->add_option("--out", attack_args.out_dir, "Output directory (overrides config)");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Run one campaign per value of a config key");
    sweep->add_option("--kb", sweep_args.base.kb_file, "KB JSON file")->required();
    sweep->add_option("--config", sweep_args.base.config_file, "Campaign config JSON");
    sweep->add_option("--vary", sweep_args.vary, "key=v1,v2,... (retriever.k, "
                      "retriever.min_similarity, switch.explore_every, agent.tau)")
        ->required();
    sweep->add_option("--rounds", sweep_args.base.rounds, "Attack rounds (overrides config)");
    sweep->add_option("--seed", sweep_args.base.seed, "Shared seed for every campaign");
    sweep->add_option("--out", sweep_args.base.out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return run_build_kb(build_args);
        if (attack->parsed()) return run_attack(attack_args);
        if (sweep->parsed()) return run_sweep(sweep_args);
    } catch (const TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBackendError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}
