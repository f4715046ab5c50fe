#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "lmchunk/entropy.hpp"
#include "lmchunk/merging.hpp"
#include "lmchunk/msp_chunking.hpp"
#include "lmchunk/ppl_chunking.hpp"
#include "lmchunk/provider.hpp"
#include "lmchunk/reference_lm.hpp"
#include "lmchunk/segmentation.hpp"

namespace py = pybind11;

namespace {

lmchunk::Document make_document(const std::string& text, const std::string& language) {
    lmchunk::Document doc;
    doc.id = "py";
    doc.text = text;
    if (language == "zh") {
        doc.language = lmchunk::Language::zh;
    } else if (language == "en") {
        doc.language = lmchunk::Language::en;
    } else {
        doc.language = lmchunk::Language::auto_detect;
    }
    return doc;
}

std::vector<std::string> py_split_sentences(const std::string& text,
                                            const std::string& language) {
    std::vector<std::string> out;
    for (const auto& s : lmchunk::split_sentences(make_document(text, language))) {
        out.push_back(s.text);
    }
    return out;
}

// Self-contained chunking over the built-in reference model.
py::list py_chunk_text(const std::string& text, const std::string& strategy, double theta,
                       long target_len, const std::string& overlap,
                       const std::string& language) {
    const lmchunk::Document doc = make_document(text, language);
    std::vector<lmchunk::Sentence> sentences = lmchunk::split_sentences(doc);
    const lmchunk::Language lang = lmchunk::resolve_language(doc.text, doc.language);
    const std::string sep = lmchunk::sentence_separator(lang);
    lmchunk::ReferenceLm lm(
        lmchunk::join_sentences(sentences, 0, static_cast<int>(sentences.size()), sep));

    std::vector<lmchunk::MetaChunk> metas;
    lmchunk::PplTrace trace;
    bool have_trace = false;
    if (strategy == "ppl") {
        trace.values = lmchunk::sentence_ppl(sentences, lm, lmchunk::WindowPolicy{}, sep);
        trace.theta = theta;
        trace.minima = lmchunk::detect_minima(trace.values, theta);
        metas = lmchunk::metas_from_boundaries(sentences, trace.minima);
        have_trace = true;
    } else if (strategy == "msp") {
        auto result = lmchunk::msp_chunk_sentences(sentences, sep, lm, lmchunk::MspOptions{});
        metas = std::move(result.metas);
    } else {
        throw py::value_error("strategy must be 'ppl' or 'msp'");
    }

    auto chunks = lmchunk::dynamic_merge(metas, sentences, target_len, sep);
    chunks = lmchunk::apply_overlap(std::move(chunks), sentences,
                                    have_trace ? &trace : nullptr,
                                    lmchunk::OverlapSpec::parse(overlap), sep);

    py::list out;
    for (const auto& chunk : chunks) {
        py::dict d;
        d["text"] = chunk.text;
        d["body"] = chunk.body;
        d["char_len"] = chunk.char_len;
        d["start_sentence"] = chunk.start;
        d["end_sentence"] = chunk.end;
        d["overlap_sentences"] = chunk.overlap_prefix;
        out.append(std::move(d));
    }
    return out;
}

double py_g_k(const std::string& sequence, int k) {
    return lmchunk::g_k(lmchunk::EmpiricalDistribution(sequence), k);
}

bool py_check_monotonicity(const std::string& sequence) {
    return lmchunk::check_monotonicity(lmchunk::EmpiricalDistribution(sequence));
}

std::string py_build_prompt(const std::string& sentence2, const std::string& sentence1,
                            const std::string& variant) {
    return lmchunk::build_prompt(sentence2, sentence1,
                                 lmchunk::prompt_variant_from_string(variant));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "perplexity and margin-sampling text chunking";

    m.def("normalize_text", [](const std::string& text) { return lmchunk::normalize(text); },
          py::arg("text"), "collapse whitespace and strip control characters");

    m.def("split_sentences", &py_split_sentences, py::arg("text"), py::arg("language") = "auto",
          "split text into sentences; language is 'en', 'zh', or 'auto'");

    m.def("detect_minima",
          [](const std::vector<double>& values, double theta) {
              return lmchunk::detect_minima(values, theta);
          },
          py::arg("values"), py::arg("theta") = 0.0,
          "indices of perplexity minima usable as chunk boundaries");

    m.def("renormalized_margin", &lmchunk::renormalized_margin, py::arg("logprob_first"),
          py::arg("logprob_second"),
          "P(first) - P(second) with the pair renormalized to sum to 1");

    m.def("build_prompt", &py_build_prompt, py::arg("sentence"), py::arg("context"),
          py::arg("variant") = "regular", "fill the split/keep chunking prompt");

    m.def("chunk_text", &py_chunk_text, py::arg("text"), py::arg("strategy") = "ppl",
          py::arg("theta") = 0.0, py::arg("target_len") = 178, py::arg("overlap") = "none",
          py::arg("language") = "auto",
          "chunk text with the built-in reference model; returns a list of dicts");

    m.def("g_k", &py_g_k, py::arg("sequence"), py::arg("k"),
          "order-k conditional entropy of a symbol sequence, in bits");

    m.def("check_monotonicity", &py_check_monotonicity, py::arg("sequence"),
          "True iff G_1 >= G_2 >= G_3 for the sequence");
}
