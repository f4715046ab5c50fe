#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lmchunk/types.hpp"

namespace lmchunk {

// Collapses whitespace runs (including NBSP and its Unicode relatives) to a
// single space, strips BOM and control characters, trims the ends. All other
// code points pass through unchanged.
std::string normalize(std::string_view text);

// Resolves Language::auto_detect by majority script of code points.
Language resolve_language(std::string_view text, Language declared);

// Splits a document into ordered sentences. The document text is normalized
// first; byte offsets refer to the normalized text.
//
// Terminators: en = {. ! ? …} followed by optional closing quotes/brackets
// and then whitespace or end of text, with a small abbreviation guard for
// "."; zh = {。！？；…} effective immediately. Both sets are active for
// Chinese and mixed-script documents.
//
// Throws EmptyDocumentError when the text is whitespace-only.
std::vector<Sentence> split_sentences(const Document& doc);

// Separator used when joining sentences back into chunk bodies: " " for
// English documents, "" for Chinese.
std::string sentence_separator(Language resolved);

// Joins sentences[first, last) with the separator.
std::string join_sentences(const std::vector<Sentence>& sentences, int first, int last,
                           std::string_view separator);

}  // namespace lmchunk
