#include "lmchunk/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lmchunk/errors.hpp"

namespace fs = std::filesystem;

namespace lmchunk {

namespace {

Language parse_language(const std::string& name) {
    if (name == "zh") return Language::zh;
    if (name == "en") return Language::en;
    if (name == "auto" || name.empty()) return Language::auto_detect;
    throw IoError("unknown language tag: " + name);
}

void load_jsonl(const std::string& path, LoadResult& result) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (!j.is_object()) throw IoError("line is not a JSON object");
            DocumentRecord record;
            record.source_line = line_no;
            record.doc.id = j.value("id", "line-" + std::to_string(line_no));
            if (!j.contains("text") || !j["text"].is_string()) {
                throw IoError("missing string field \"text\"");
            }
            record.doc.text = j["text"].get<std::string>();
            record.doc.language = parse_language(j.value("language", ""));
            result.docs.push_back(std::move(record));
        } catch (const std::exception& e) {
            InputFailure failure;
            failure.source_line = line_no;
            failure.message = e.what();
            result.failures.push_back(std::move(failure));
        }
    }
}

DocumentRecord load_plain(const fs::path& path) {
    DocumentRecord record;
    record.doc.id = path.stem().string();
    record.doc.text = read_text_file(path.string());
    return record;
}

}  // namespace

LoadResult load_documents(const std::string& path) {
    LoadResult result;
    fs::path p(path);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(p)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) result.docs.push_back(load_plain(file));
        return result;
    }
    if (!fs::exists(p, ec)) throw IoError("no such input: " + path);
    const auto ext = p.extension().string();
    if (ext == ".jsonl" || ext == ".ndjson") {
        load_jsonl(path, result);
    } else {
        result.docs.push_back(load_plain(p));
    }
    return result;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("short write to " + path);
}

std::string sanitize_filename(const std::string& id) {
    std::string out;
    out.reserve(id.size());
    for (char c : id) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        out += ok ? c : '_';
    }
    if (out.empty()) out = "doc";
    return out;
}

}  // namespace lmchunk
