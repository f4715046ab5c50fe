#pragma once

#include <string>
#include <vector>

#include "lmchunk/types.hpp"

namespace lmchunk {

struct DocumentRecord {
    Document doc;
    int source_line = 0;  // 1-based JSONL line, 0 for whole-file inputs
};

struct InputFailure {
    std::string doc_id;  // empty when the line never parsed far enough
    int source_line = 0;
    std::string message;
};

struct LoadResult {
    std::vector<DocumentRecord> docs;
    std::vector<InputFailure> failures;
};

// Loads documents from a path: a directory reads every *.txt file inside
// (sorted by name), a .jsonl/.ndjson file reads one document object per line
// ({"id", "text", "language"?}), anything else is a single plain-text
// document named after the file. Malformed JSONL lines become failures, not
// errors. Throws IoError when the path itself is unreadable.
LoadResult load_documents(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Replaces anything outside [A-Za-z0-9._-] so an id can name a file.
std::string sanitize_filename(const std::string& id);

}  // namespace lmchunk
