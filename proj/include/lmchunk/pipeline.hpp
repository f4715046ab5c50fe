#pragma once

#include <map>
#include <string>
#include <vector>

#include "lmchunk/completion.hpp"
#include "lmchunk/merging.hpp"
#include "lmchunk/msp_chunking.hpp"
#include "lmchunk/ppl_chunking.hpp"

namespace lmchunk {

enum class Strategy { ppl, msp };

Strategy strategy_from_string(const std::string& name);

enum class ProviderKind { reference, openai, scripted };

ProviderKind provider_kind_from_string(const std::string& name);

// Named target-length presets, in characters.
const std::map<std::string, long>& length_profiles();

struct PipelineConfig {
    Strategy strategy = Strategy::ppl;
    double theta = 0.0;
    long target_len = 178;
    OverlapSpec overlap;
    PromptVariant prompt_variant = PromptVariant::regular;
    ProviderKind provider = ProviderKind::reference;
    std::string script_path;            // margin fixture for scripted runs
    std::string reference_corpus_path;  // shared training text (default: each document)
    bool rewrite = false;
    bool summarize = false;
    bool append_summary = false;
    double accept_threshold = 6.0;
    int workers = 1;
    bool trace = false;
    std::string prompt_dir;
    std::string out_dir = ".";
    WindowPolicy window;
    int context_sentences = 0;
    long relevance_budget_chars = 8000;
    int top_m = 3;
    long summary_cap_chars = 120;
};

struct Diagnostic {
    std::string code;
    std::string message;
};

// Empty result means the config is runnable. Codes are stable: CFG_LEN,
// CFG_THETA, CFG_WORKERS, CFG_OVERLAP, CFG_PROVIDER.
std::vector<Diagnostic> validate_config(const PipelineConfig& config);

struct StageTimes {
    double segment = 0.0;
    double score = 0.0;
    double merge = 0.0;
    double rewrite = 0.0;
    double summarize = 0.0;
    double write = 0.0;
};

struct RunReport {
    int docs_processed = 0;
    int docs_failed = 0;
    long chunks_emitted = 0;
    double mean_chunk_char_len = 0.0;
    double median_chunk_char_len = 0.0;
    double wall_seconds_total = 0.0;
    StageTimes stage_seconds;  // worker-stage values are busy time / workers
};

// Batch entry point. Reads documents from input_path, writes chunks.jsonl,
// report.json, optional traces/ and provenance/ under config.out_dir, plus
// manifest.json when any document fails. Returns the aggregate report;
// per-document failures never abort the batch.
RunReport run(const PipelineConfig& config, const std::string& input_path);

}  // namespace lmchunk
