#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lmchunk/errors.hpp"
#include "lmchunk/merging.hpp"
#include "lmchunk/msp_chunking.hpp"
#include "lmchunk/pipeline.hpp"

namespace {

struct CliArgs {
    std::string input;
    std::string out_dir = "out";
    std::string strategy = "ppl";
    double theta = 0.0;
    long target_len = 178;
    std::string profile;
    std::string overlap = "none";
    std::string variant = "regular";
    std::string provider = "reference";
    std::string script;
    std::string reference_corpus;
    bool rewrite = false;
    bool summarize = false;
    bool append_summary = false;
    double accept_threshold = 6.0;
    int workers = 1;
    bool trace = false;
    std::string prompt_dir;
    int max_context_tokens = 4096;
    double evict_fraction = 0.5;
    int context_sentences = 0;
};

std::string profile_names() {
    std::string names;
    for (const auto& [name, len] : lmchunk::length_profiles()) {
        if (!names.empty()) names += ", ";
        names += name;
    }
    return names;
}

void add_common_options(CLI::App* cmd, CliArgs& args, bool with_input) {
    if (with_input) {
        cmd->add_option("input", args.input,
                        "input path: a .jsonl/.ndjson file of {id, text, language?} "
                        "objects, a plain-text file, or a directory of .txt files")
            ->required();
    }
    cmd->add_option("-o,--out", args.out_dir, "output directory")
        ->capture_default_str();
    cmd->add_option("--strategy", args.strategy, "boundary strategy: ppl or msp")
        ->capture_default_str();
    cmd->add_option("--theta", args.theta, "minima threshold (ppl strategy)")
        ->capture_default_str();
    auto* length = cmd->add_option("-L,--target-len", args.target_len,
                                   "chunk length budget in characters")
                       ->capture_default_str();
    cmd->add_option("--profile", args.profile, "length preset: " + profile_names())
        ->excludes(length);
    cmd->add_option("--overlap", args.overlap, "overlap mode: none, fixed:K, or dynamic")
        ->capture_default_str();
    cmd->add_option("--prompt-variant", args.variant,
                    "msp prompt wording: regular or precise")
        ->capture_default_str();
    cmd->add_option("--provider", args.provider,
                    "logprob/chat backend: reference, openai, or scripted")
        ->capture_default_str();
    cmd->add_option("--script", args.script, "margin fixture (JSON array) for --provider scripted");
    cmd->add_option("--reference-corpus", args.reference_corpus,
                    "train the reference model on this file instead of each document");
    cmd->add_option("--workers", args.workers, "concurrent documents")
        ->capture_default_str();
    cmd->add_flag("--trace", args.trace, "write per-document perplexity traces");
    cmd->add_option("--prompt-dir", args.prompt_dir,
                    "directory of stage prompt templates overriding the built-ins");
    cmd->add_option("--max-context-tokens", args.max_context_tokens,
                    "scoring context budget before eviction")
        ->capture_default_str();
    cmd->add_option("--evict-fraction", args.evict_fraction,
                    "fraction of the oldest context dropped on overflow")
        ->capture_default_str();
    cmd->add_option("--context-sentences", args.context_sentences,
                    "msp context sentences from the open chunk (0 = all)")
        ->capture_default_str();
    cmd->add_option("--accept-threshold", args.accept_threshold,
                    "minimum 0-10 score for a missing-information item")
        ->capture_default_str();
}

lmchunk::PipelineConfig build_config(const CliArgs& args) {
    lmchunk::PipelineConfig config;
    config.strategy = lmchunk::strategy_from_string(args.strategy);
    config.theta = args.theta;
    config.target_len = args.target_len;
    if (!args.profile.empty()) {
        const auto& profiles = lmchunk::length_profiles();
        auto it = profiles.find(args.profile);
        if (it == profiles.end()) {
            throw lmchunk::ConfigError("unknown profile: " + args.profile + " (want " +
                                       profile_names() + ")");
        }
        config.target_len = it->second;
    }
    config.overlap = lmchunk::OverlapSpec::parse(args.overlap);
    config.prompt_variant = lmchunk::prompt_variant_from_string(args.variant);
    config.provider = lmchunk::provider_kind_from_string(args.provider);
    config.script_path = args.script;
    config.reference_corpus_path = args.reference_corpus;
    config.rewrite = args.rewrite;
    config.summarize = args.summarize;
    config.append_summary = args.append_summary;
    config.accept_threshold = args.accept_threshold;
    config.workers = args.workers;
    config.trace = args.trace;
    config.prompt_dir = args.prompt_dir;
    config.out_dir = args.out_dir;
    config.window.max_context_tokens = args.max_context_tokens;
    config.window.evict_fraction = args.evict_fraction;
    config.context_sentences = args.context_sentences;
    return config;
}

int run_batch(const CliArgs& args) {
    const lmchunk::PipelineConfig config = build_config(args);
    const lmchunk::RunReport report = lmchunk::run(config, args.input);
    std::cout << "docs=" << report.docs_processed << " failed=" << report.docs_failed
              << " chunks=" << report.chunks_emitted
              << " mean_len=" << report.mean_chunk_char_len
              << " median_len=" << report.median_chunk_char_len
              << " wall_s=" << report.wall_seconds_total << "\n";
    if (report.docs_failed > 0) {
        std::cerr << "some documents failed; see " << args.out_dir << "/manifest.json\n";
        return 1;
    }
    return 0;
}

int run_validate(const CliArgs& args) {
    const lmchunk::PipelineConfig config = build_config(args);
    const auto diagnostics = lmchunk::validate_config(config);
    for (const auto& d : diagnostics) {
        std::cout << d.code << ": " << d.message << "\n";
    }
    if (diagnostics.empty()) {
        std::cout << "config ok\n";
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lmchunk: perplexity and margin-sampling text chunking"};
    app.require_subcommand(1);
    CliArgs args;

    auto* chunk = app.add_subcommand("chunk", "split documents into chunks");
    add_common_options(chunk, args, true);

    auto* rewrite = app.add_subcommand("rewrite", "chunk, then rewrite each chunk");
    add_common_options(rewrite, args, true);

    auto* summarize = app.add_subcommand("summarize", "chunk, then summarize each chunk");
    add_common_options(summarize, args, true);
    summarize->add_flag("--append-summary", args.append_summary,
                        "append the fused summary to each chunk's text");

    auto* pipeline = app.add_subcommand("pipeline", "full chunk/rewrite/summarize pipeline");
    add_common_options(pipeline, args, true);
    pipeline->add_flag("--rewrite", args.rewrite, "run missing-information rewriting");
    pipeline->add_flag("--summarize", args.summarize, "run summary generation");
    pipeline->add_flag("--append-summary", args.append_summary,
                       "append the fused summary to each chunk's text");

    auto* validate = app.add_subcommand("validate", "check a configuration and exit");
    add_common_options(validate, args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (chunk->parsed()) return run_batch(args);
        if (rewrite->parsed()) {
            args.rewrite = true;
            return run_batch(args);
        }
        if (summarize->parsed()) {
            args.summarize = true;
            return run_batch(args);
        }
        if (pipeline->parsed()) return run_batch(args);
        if (validate->parsed()) return run_validate(args);
    } catch (const lmchunk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lmchunk::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
