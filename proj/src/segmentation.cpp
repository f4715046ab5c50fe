#include "lmchunk/segmentation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string_view>

#include "lmchunk/errors.hpp"
#include "lmchunk/utf8.hpp"

namespace lmchunk {

namespace {

bool is_whitespace(char32_t cp) {
    switch (cp) {
        case U' ':
        case U'\t':
        case U'\n':
        case U'\v':
        case U'\f':
        case U'\r':
        case 0x00A0:  // NBSP
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202F:
        case 0x205F:
        case 0x3000:  // ideographic space
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_stripped_control(char32_t cp) {
    if (cp == 0xFEFF) return true;  // BOM / ZWNBSP
    if (cp == 0x7F) return true;
    if (cp >= 0x80 && cp <= 0x9F) return true;
    return cp < 0x20 && !is_whitespace(cp);
}

bool is_han(char32_t cp) {
    return (cp >= 0x3400 && cp <= 0x4DBF) || (cp >= 0x4E00 && cp <= 0x9FFF) ||
           (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x20000 && cp <= 0x2A6DF);
}

bool is_zh_signal(char32_t cp) {
    // Han ideographs plus CJK punctuation and fullwidth forms.
    return is_han(cp) || (cp >= 0x3001 && cp <= 0x303F) || (cp >= 0xFF00 && cp <= 0xFFEF);
}

bool is_latin_letter(char32_t cp) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

bool is_en_terminator(char32_t cp) {
    return cp == U'.' || cp == U'!' || cp == U'?' || cp == 0x2026;  // …
}

bool is_zh_terminator(char32_t cp) {
    return cp == 0x3002 || cp == 0xFF01 || cp == 0xFF1F || cp == 0xFF1B || cp == 0x2026;
    //       。              ！              ？              ；              …
}

bool is_closing_mark(char32_t cp) {
    switch (cp) {
        case U'"':
        case U'\'':
        case U')':
        case U']':
        case U'}':
        case 0x2019:  // ’
        case 0x201D:  // ”
        case 0x300D:  // 」
        case 0x300F:  // 』
        case 0x3009:  // 〉
        case 0x300B:  // 》
        case 0xFF09:  // ）
        case 0x3011:  // 】
            return true;
        default:
            return false;
    }
}

// Lowercased abbreviations that keep a following "." from ending a sentence.
constexpr std::array<std::string_view, 14> kAbbreviations = {
    "e.g.", "i.e.", "etc.", "vs.", "cf.", "al.", "dr.", "mr.",
    "mrs.", "ms.", "prof.", "fig.", "no.", "st.",
};

char32_t to_lower_ascii(char32_t cp) {
    return (cp >= U'A' && cp <= U'Z') ? cp + 32 : cp;
}

// True when text[..=dot] ends with a guarded abbreviation at a word boundary.
bool abbreviation_guarded(const std::u32string& text, std::size_t dot) {
    for (std::string_view abbr : kAbbreviations) {
        const std::u32string a32 = utf8::decode(abbr);
        if (dot + 1 < a32.size()) continue;
        const std::size_t start = dot + 1 - a32.size();
        bool match = true;
        for (std::size_t k = 0; k < a32.size(); ++k) {
            if (to_lower_ascii(text[start + k]) != a32[k]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        if (start == 0 || !is_latin_letter(text[start - 1])) return true;
    }
    return false;
}

std::size_t byte_length(char32_t cp) {
    if (cp < 0x80) return 1;
    if (cp < 0x800) return 2;
    if (cp < 0x10000) return 3;
    return 4;
}

}  // namespace

std::string normalize(std::string_view text) {
    const std::u32string cps = utf8::decode(text);
    std::u32string out;
    out.reserve(cps.size());
    bool pending_space = false;
    for (char32_t cp : cps) {
        if (is_stripped_control(cp)) continue;
        if (is_whitespace(cp)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(U' ');
            pending_space = false;
        }
        out.push_back(cp);
    }
    return utf8::encode(out);
}

Language resolve_language(std::string_view text, Language declared) {
    if (declared != Language::auto_detect) return declared;
    long zh = 0;
    long latin = 0;
    for (char32_t cp : utf8::decode(text)) {
        if (is_zh_signal(cp)) ++zh;
        else if (is_latin_letter(cp)) ++latin;
    }
    return zh > latin ? Language::zh : Language::en;
}

std::string sentence_separator(Language resolved) {
    return resolved == Language::zh ? std::string() : std::string(" ");
}

std::vector<Sentence> split_sentences(const Document& doc) {
    const std::string normalized = normalize(doc.text);
    if (normalized.empty()) {
        throw EmptyDocumentError("document '" + doc.id + "' is empty after normalization");
    }
    const std::u32string text = utf8::decode(normalized);
    const Language resolved = resolve_language(normalized, doc.language);

    bool zh_active = resolved == Language::zh;
    if (!zh_active) zh_active = std::any_of(text.begin(), text.end(), is_zh_signal);

    // Byte offset of every code point in the normalized text.
    std::vector<std::size_t> offsets(text.size() + 1, 0);
    for (std::size_t i = 0; i < text.size(); ++i) offsets[i + 1] = offsets[i] + byte_length(text[i]);

    std::vector<Sentence> sentences;
    const auto emit = [&](std::size_t first, std::size_t last) {
        while (first < last && is_whitespace(text[first])) ++first;
        while (last > first && is_whitespace(text[last - 1])) --last;
        if (first >= last) return;
        Sentence s;
        s.index = static_cast<int>(sentences.size());
        s.text = utf8::encode(std::u32string_view(text).substr(first, last - first));
        s.char_len = static_cast<long>(last - first);
        s.byte_offset = offsets[first];
        sentences.push_back(std::move(s));
    };

    std::size_t sentence_start = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        const char32_t cp = text[i];
        const bool zh_term = zh_active && is_zh_terminator(cp);
        const bool en_term = is_en_terminator(cp);
        if (!zh_term && !en_term) {
            ++i;
            continue;
        }
        // Maximal run of terminators, then trailing closing marks.
        std::size_t run_end = i;
        while (run_end < text.size() &&
               ((zh_active && is_zh_terminator(text[run_end])) || is_en_terminator(text[run_end]))) {
            ++run_end;
        }
        std::size_t close_end = run_end;
        while (close_end < text.size() && is_closing_mark(text[close_end])) ++close_end;

        bool boundary = false;
        if (zh_term) {
            boundary = true;
        } else {
            // en terminators require whitespace or end of text after the run.
            const bool at_break = close_end >= text.size() || is_whitespace(text[close_end]);
            boundary = at_break;
            if (boundary && cp == U'.' && run_end - i == 1 && abbreviation_guarded(text, i)) {
                boundary = false;
            }
        }
        if (boundary) {
            emit(sentence_start, close_end);
            sentence_start = close_end;
            i = close_end;
        } else {
            i = run_end;
        }
    }
    emit(sentence_start, text.size());

    if (sentences.empty()) {
        throw EmptyDocumentError("document '" + doc.id + "' has no sentences");
    }
    return sentences;
}

std::string join_sentences(const std::vector<Sentence>& sentences, int first, int last,
                           std::string_view separator) {
    std::string out;
    for (int i = first; i < last; ++i) {
        if (i > first) out += separator;
        out += sentences[static_cast<std::size_t>(i)].text;
    }
    return out;
}

}  // namespace lmchunk
