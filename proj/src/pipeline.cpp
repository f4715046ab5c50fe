#include "lmchunk/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <thread>
#include <utility>

#include <json.hpp>

#include "lmchunk/errors.hpp"
#include "lmchunk/hash_embedder.hpp"
#include "lmchunk/io.hpp"
#include "lmchunk/openai_client.hpp"
#include "lmchunk/reference_lm.hpp"
#include "lmchunk/scripted.hpp"
#include "lmchunk/segmentation.hpp"

namespace fs = std::filesystem;

namespace lmchunk {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct SideFile {
    std::string relative_path;
    std::string content;
};

struct DocOutput {
    bool ok = false;
    std::string error;
    std::string doc_id;
    int source_line = 0;
    std::vector<std::string> chunk_lines;
    std::vector<SideFile> side_files;
    std::vector<long> chunk_lens;
    StageTimes times;
};

// Everything shared read-only across workers.
struct RunContext {
    const PipelineConfig* config = nullptr;
    std::optional<ReferenceLm> shared_lm;
    std::string margin_script_text;
    std::optional<OpenAiConfig> logprob_config;
    std::optional<OpenAiConfig> chat_config;
    std::optional<OpenAiConfig> embed_config;
    PromptLibrary prompts;
};

nlohmann::ordered_json transcripts_json(const std::vector<StageTranscript>& transcripts) {
    auto stages = nlohmann::ordered_json::array();
    for (const auto& t : transcripts) {
        nlohmann::ordered_json stage;
        stage["stage"] = t.stage;
        stage["prompt"] = t.prompt;
        stage["response"] = t.response;
        stage["flags"] = t.flags;
        stages.push_back(std::move(stage));
    }
    return stages;
}

DocOutput process_document(const DocumentRecord& record, const RunContext& ctx) {
    const PipelineConfig& config = *ctx.config;
    DocOutput out;
    out.doc_id = record.doc.id;
    out.source_line = record.source_line;
    try {
        auto stage_start = Clock::now();
        std::vector<Sentence> sentences = split_sentences(record.doc);
        const Language lang = resolve_language(record.doc.text, record.doc.language);
        const std::string sep = sentence_separator(lang);
        const std::string canonical =
            join_sentences(sentences, 0, static_cast<int>(sentences.size()), sep);
        out.times.segment += seconds_since(stage_start);

        std::unique_ptr<ReferenceLm> own_lm;
        ReferenceLm* reference = nullptr;
        std::unique_ptr<OpenAiClient> remote_logprob;
        std::unique_ptr<OpenAiClient> remote_chat;
        std::unique_ptr<OpenAiClient> remote_embed;
        std::unique_ptr<ScriptedMarginProvider> scripted;
        std::unique_ptr<HashingEmbedder> hashing;

        LogprobProvider* scorer = nullptr;
        ChatProvider* chat = nullptr;
        EmbedProvider* embedder = nullptr;

        switch (config.provider) {
            case ProviderKind::reference:
                if (ctx.shared_lm) {
                    reference = const_cast<ReferenceLm*>(&*ctx.shared_lm);
                } else {
                    own_lm = std::make_unique<ReferenceLm>(canonical);
                    reference = own_lm.get();
                }
                scorer = reference;
                chat = reference;
                hashing = std::make_unique<HashingEmbedder>();
                embedder = hashing.get();
                break;
            case ProviderKind::openai:
                remote_logprob = std::make_unique<OpenAiClient>(*ctx.logprob_config);
                scorer = remote_logprob.get();
                if (ctx.chat_config) {
                    remote_chat = std::make_unique<OpenAiClient>(*ctx.chat_config);
                    chat = remote_chat.get();
                }
                if (ctx.embed_config) {
                    remote_embed = std::make_unique<OpenAiClient>(*ctx.embed_config);
                    embedder = remote_embed.get();
                }
                break;
            case ProviderKind::scripted:
                scripted = std::make_unique<ScriptedMarginProvider>(
                    ScriptedMarginProvider::from_json_text(ctx.margin_script_text));
                scorer = scripted.get();
                break;
        }

        stage_start = Clock::now();
        std::vector<MetaChunk> metas;
        PplTrace trace;
        bool have_trace = false;
        if (config.strategy == Strategy::ppl) {
            trace.values = sentence_ppl(sentences, *scorer, config.window, sep);
            trace.theta = config.theta;
            trace.minima = detect_minima(trace.values, config.theta);
            metas = metas_from_boundaries(sentences, trace.minima);
            have_trace = true;
        } else {
            MspOptions options;
            options.variant = config.prompt_variant;
            options.context_sentences = config.context_sentences;
            MspChunkResult result = msp_chunk_sentences(sentences, sep, *scorer, options);
            metas = std::move(result.metas);
        }
        out.times.score += seconds_since(stage_start);

        stage_start = Clock::now();
        std::vector<Chunk> chunks = dynamic_merge(metas, sentences, config.target_len, sep);
        chunks = apply_overlap(std::move(chunks), sentences, have_trace ? &trace : nullptr,
                               config.overlap, sep);
        out.times.merge += seconds_since(stage_start);

        const std::size_t n_chunks = chunks.size();
        std::vector<std::string> rewritten(n_chunks);
        std::vector<std::string> fused(n_chunks);
        std::vector<std::vector<StageTranscript>> transcripts(n_chunks);

        if (config.rewrite) {
            stage_start = Clock::now();
            CompletionOptions options;
            options.accept_threshold = config.accept_threshold;
            options.summary_cap_chars = config.summary_cap_chars;
            options.relevance_budget_chars = config.relevance_budget_chars;
            options.top_m = config.top_m;
            options.prompts = ctx.prompts;

            long doc_len = 0;
            for (const auto& chunk : chunks) doc_len += chunk.char_len;
            std::vector<std::vector<std::string>> related(n_chunks);
            if (doc_len <= config.relevance_budget_chars) {
                for (auto& r : related) r = {canonical};
            } else {
                const auto sets = relevance_preprocess(chunks, *embedder, config.top_m,
                                                       config.relevance_budget_chars);
                for (std::size_t i = 0; i < n_chunks; ++i) {
                    for (const auto& rel : sets[i].related) {
                        related[i].push_back(
                            chunks[static_cast<std::size_t>(rel.chunk_index)].body);
                    }
                }
            }
            for (std::size_t i = 0; i < n_chunks; ++i) {
                RewriteRecord rec = rewrite_chunk(chunks[i], related[i], *chat, options);
                rewritten[i] = std::move(rec.rewritten);
                transcripts[i] = std::move(rec.provenance);
            }
            out.times.rewrite += seconds_since(stage_start);
        }

        if (config.summarize) {
            stage_start = Clock::now();
            for (std::size_t i = 0; i < n_chunks; ++i) {
                const std::string& target = config.rewrite ? rewritten[i] : chunks[i].body;
                SummaryRecord rec =
                    summarize(target, canonical, *chat, ctx.prompts, config.summary_cap_chars);
                fused[i] = rec.summary.fused;
                for (auto& t : rec.transcripts) transcripts[i].push_back(std::move(t));
            }
            out.times.summarize += seconds_since(stage_start);
        }

        const std::string safe_id = sanitize_filename(record.doc.id);
        for (std::size_t i = 0; i < n_chunks; ++i) {
            nlohmann::ordered_json j;
            j["schema_version"] = 1;
            j["doc_id"] = record.doc.id;
            j["chunk_index"] = static_cast<int>(i);
            std::string text = chunks[i].text;
            if (config.append_summary && config.summarize && !fused[i].empty()) {
                text += "\n" + fused[i];
            }
            j["text"] = text;
            j["char_len"] = chunks[i].char_len;
            j["start_sentence"] = chunks[i].start;
            j["end_sentence"] = chunks[i].end;
            if (!chunks[i].overlap_prefix.empty()) {
                j["overlap_sentences"] = chunks[i].overlap_prefix;
            }
            if (config.rewrite) j["rewritten"] = rewritten[i];
            if (config.summarize) j["summary"] = fused[i];
            if (config.rewrite || config.summarize) {
                const std::string rel =
                    "provenance/" + safe_id + "/" + std::to_string(i) + ".json";
                nlohmann::ordered_json p;
                p["schema_version"] = 1;
                p["doc_id"] = record.doc.id;
                p["chunk_index"] = static_cast<int>(i);
                p["stages"] = transcripts_json(transcripts[i]);
                out.side_files.push_back({rel, p.dump(2) + "\n"});
                j["provenance_path"] = rel;
            }
            out.chunk_lines.push_back(j.dump());
            out.chunk_lens.push_back(chunks[i].char_len);
        }

        if (config.trace && have_trace) {
            nlohmann::ordered_json t;
            t["schema_version"] = 1;
            t["doc_id"] = record.doc.id;
            t["values"] = trace.values;
            t["theta"] = trace.theta;
            t["minima"] = trace.minima;
            out.side_files.push_back({"traces/" + safe_id + ".json", t.dump(2) + "\n"});
        }
        out.ok = true;
    } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
        out.chunk_lines.clear();
        out.side_files.clear();
        out.chunk_lens.clear();
    }
    return out;
}

}  // namespace

Strategy strategy_from_string(const std::string& name) {
    if (name == "ppl") return Strategy::ppl;
    if (name == "msp") return Strategy::msp;
    throw ConfigError("unknown strategy: " + name + " (want ppl or msp)");
}

ProviderKind provider_kind_from_string(const std::string& name) {
    if (name == "reference") return ProviderKind::reference;
    if (name == "openai") return ProviderKind::openai;
    if (name == "scripted") return ProviderKind::scripted;
    throw ConfigError("unknown provider: " + name + " (want reference, openai, or scripted)");
}

const std::map<std::string, long>& length_profiles() {
    static const std::map<std::string, long> profiles = {
        {"2wikimultihopqa", 122}, {"qasper", 120},        {"multifieldqa-en", 112},
        {"multifieldqa-zh", 178}, {"crud", 178},
    };
    return profiles;
}

std::vector<Diagnostic> validate_config(const PipelineConfig& config) {
    std::vector<Diagnostic> out;
    if (config.target_len < 1) {
        out.push_back({"CFG_LEN", "target length must be >= 1"});
    }
    if (config.summary_cap_chars < 1) {
        out.push_back({"CFG_LEN", "summary cap must be >= 1"});
    }
    if (config.theta < 0.0) {
        out.push_back({"CFG_THETA", "theta must be >= 0"});
    }
    if (config.workers < 1) {
        out.push_back({"CFG_WORKERS", "worker count must be >= 1"});
    }
    if (config.overlap.mode == OverlapSpec::Mode::dynamic && config.strategy == Strategy::msp) {
        out.push_back({"CFG_OVERLAP",
                       "dynamic overlap needs a perplexity trace; strategy msp produces none"});
    }
    if (config.window.max_context_tokens < 1) {
        out.push_back({"CFG_WINDOW", "context window must be >= 1 token"});
    }
    if (!(config.window.evict_fraction > 0.0 && config.window.evict_fraction <= 1.0)) {
        out.push_back({"CFG_WINDOW", "evict fraction must be in (0, 1]"});
    }
    if (config.provider == ProviderKind::scripted) {
        if (config.script_path.empty()) {
            out.push_back({"CFG_PROVIDER", "scripted provider needs --script"});
        }
        if (config.strategy == Strategy::ppl) {
            out.push_back(
                {"CFG_PROVIDER", "scripted provider serves margins only; use strategy msp"});
        }
        if (config.rewrite || config.summarize) {
            out.push_back({"CFG_PROVIDER", "scripted provider has no chat surface"});
        }
    }
    return out;
}

RunReport run(const PipelineConfig& config, const std::string& input_path) {
    {
        const auto diagnostics = validate_config(config);
        if (!diagnostics.empty()) {
            throw ConfigError(diagnostics.front().code + ": " + diagnostics.front().message);
        }
    }
    const auto run_start = Clock::now();
    LoadResult loaded = load_documents(input_path);

    RunContext ctx;
    ctx.config = &config;
    ctx.prompts =
        config.prompt_dir.empty() ? PromptLibrary() : PromptLibrary::from_directory(config.prompt_dir);
    if (config.provider == ProviderKind::reference && !config.reference_corpus_path.empty()) {
        ctx.shared_lm.emplace(read_text_file(config.reference_corpus_path));
    }
    if (config.provider == ProviderKind::scripted) {
        ctx.margin_script_text = read_text_file(config.script_path);
        ScriptedMarginProvider::from_json_text(ctx.margin_script_text);  // validate once
    }
    if (config.provider == ProviderKind::openai) {
        ctx.logprob_config = OpenAiClient::config_from_env("logprob");
        if (config.rewrite || config.summarize) {
            ctx.chat_config = OpenAiClient::config_from_env("chat");
        }
        if (config.rewrite) {
            ctx.embed_config = OpenAiClient::config_from_env("embed");
        }
    }

    std::vector<DocOutput> outputs(loaded.docs.size());
    const int workers =
        std::max(1, std::min(config.workers, static_cast<int>(loaded.docs.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= loaded.docs.size()) break;
            outputs[i] = process_document(loaded.docs[i], ctx);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    RunReport report;
    std::vector<long> lens;
    StageTimes busy;
    for (const auto& out : outputs) {
        if (out.ok) {
            ++report.docs_processed;
            lens.insert(lens.end(), out.chunk_lens.begin(), out.chunk_lens.end());
        } else {
            ++report.docs_failed;
        }
        busy.segment += out.times.segment;
        busy.score += out.times.score;
        busy.merge += out.times.merge;
        busy.rewrite += out.times.rewrite;
        busy.summarize += out.times.summarize;
    }
    report.docs_failed += static_cast<int>(loaded.failures.size());
    report.chunks_emitted = static_cast<long>(lens.size());
    if (!lens.empty()) {
        long total = 0;
        for (long len : lens) total += len;
        report.mean_chunk_char_len = static_cast<double>(total) / static_cast<double>(lens.size());
        std::sort(lens.begin(), lens.end());
        const std::size_t mid = lens.size() / 2;
        report.median_chunk_char_len =
            lens.size() % 2 == 1
                ? static_cast<double>(lens[mid])
                : (static_cast<double>(lens[mid - 1]) + static_cast<double>(lens[mid])) / 2.0;
    }
    const double scale = 1.0 / static_cast<double>(workers);
    report.stage_seconds.segment = busy.segment * scale;
    report.stage_seconds.score = busy.score * scale;
    report.stage_seconds.merge = busy.merge * scale;
    report.stage_seconds.rewrite = busy.rewrite * scale;
    report.stage_seconds.summarize = busy.summarize * scale;

    const auto write_start = Clock::now();
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + config.out_dir);
    const fs::path out_dir(config.out_dir);

    std::string blob;
    for (const auto& out : outputs) {
        for (const auto& line : out.chunk_lines) {
            blob += line;
            blob += '\n';
        }
    }
    write_text_file((out_dir / "chunks.jsonl").string(), blob);

    for (const auto& out : outputs) {
        for (const auto& side : out.side_files) {
            const fs::path path = out_dir / side.relative_path;
            fs::create_directories(path.parent_path(), ec);
            if (ec) throw IoError("cannot create " + path.parent_path().string());
            write_text_file(path.string(), side.content);
        }
    }

    const bool any_failures = report.docs_failed > 0;
    if (any_failures) {
        nlohmann::ordered_json manifest;
        manifest["schema_version"] = 1;
        manifest["docs_processed"] = report.docs_processed;
        manifest["docs_failed"] = report.docs_failed;
        auto failures = nlohmann::ordered_json::array();
        for (const auto& failure : loaded.failures) {
            nlohmann::ordered_json f;
            f["doc_id"] = failure.doc_id;
            f["source_line"] = failure.source_line;
            f["error"] = failure.message;
            failures.push_back(std::move(f));
        }
        for (const auto& out : outputs) {
            if (out.ok) continue;
            nlohmann::ordered_json f;
            f["doc_id"] = out.doc_id;
            f["source_line"] = out.source_line;
            f["error"] = out.error;
            failures.push_back(std::move(f));
        }
        manifest["failures"] = std::move(failures);
        write_text_file((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
    }
    report.stage_seconds.write = seconds_since(write_start);
    report.wall_seconds_total = seconds_since(run_start);

    nlohmann::ordered_json r;
    r["schema_version"] = 1;
    r["docs_processed"] = report.docs_processed;
    r["docs_failed"] = report.docs_failed;
    r["chunks_emitted"] = report.chunks_emitted;
    r["mean_chunk_char_len"] = report.mean_chunk_char_len;
    r["median_chunk_char_len"] = report.median_chunk_char_len;
    r["wall_seconds_total"] = report.wall_seconds_total;
    r["stage_seconds"] = {{"segment", report.stage_seconds.segment},
                          {"score", report.stage_seconds.score},
                          {"merge", report.stage_seconds.merge},
                          {"rewrite", report.stage_seconds.rewrite},
                          {"summarize", report.stage_seconds.summarize},
                          {"write", report.stage_seconds.write}};
    write_text_file((out_dir / "report.json").string(), r.dump(2) + "\n");
    return report;
}

}  // namespace lmchunk
