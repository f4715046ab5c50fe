#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lmchunk/errors.hpp"
#include "lmchunk/io.hpp"

using namespace lmchunk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / fs::path("lmchunk_io_test")) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    fs::path write(const std::string& name, const std::string& content) const {
        const fs::path file = path / name;
        std::ofstream out(file, std::ios::binary);
        out << content;
        return file;
    }
};

}  // namespace

TEST_CASE("jsonl inputs load documents and collect per-line failures") {
    TempDir dir;
    const auto file = dir.write("docs.jsonl",
                                "{\"id\": \"a\", \"text\": \"Hello there.\"}\n"
                                "this line is broken\n"
                                "{\"text\": \"No id here.\"}\r\n"
                                "\n"
                                "{\"id\": \"zh\", \"text\": \"\xe4\xbd\xa0\xe5\xa5\xbd\xe3\x80\x82\", "
                                "\"language\": \"zh\"}\n"
                                "{\"id\": \"bad\", \"text\": 42}\n");
    auto result = load_documents(file.string());
    REQUIRE(result.docs.size() == 3);
    CHECK(result.docs[0].doc.id == "a");
    CHECK(result.docs[0].source_line == 1);
    CHECK(result.docs[1].doc.id == "line-3");
    CHECK(result.docs[1].doc.text == "No id here.");
    CHECK(result.docs[2].doc.id == "zh");
    CHECK(result.docs[2].doc.language == Language::zh);

    REQUIRE(result.failures.size() == 2);
    CHECK(result.failures[0].source_line == 2);
    CHECK(result.failures[1].source_line == 6);
    CHECK(result.failures[1].message.find("text") != std::string::npos);
}

TEST_CASE("unknown language tags fail the line, not the batch") {
    TempDir dir;
    const auto file = dir.write("docs.jsonl",
                                "{\"id\": \"a\", \"text\": \"x\", \"language\": \"fr\"}\n"
                                "{\"id\": \"b\", \"text\": \"y\", \"language\": \"auto\"}\n");
    auto result = load_documents(file.string());
    REQUIRE(result.docs.size() == 1);
    CHECK(result.docs[0].doc.id == "b");
    CHECK(result.docs[0].doc.language == Language::auto_detect);
    REQUIRE(result.failures.size() == 1);
    CHECK(result.failures[0].source_line == 1);
}

TEST_CASE("a plain text file becomes one document named after its stem") {
    TempDir dir;
    const auto file = dir.write("report.txt", "Some text. More text.");
    auto result = load_documents(file.string());
    REQUIRE(result.docs.size() == 1);
    CHECK(result.docs[0].doc.id == "report");
    CHECK(result.docs[0].doc.text == "Some text. More text.");
    CHECK(result.docs[0].source_line == 0);
}

TEST_CASE("a directory loads its txt files in sorted order") {
    TempDir dir;
    dir.write("b.txt", "Second.");
    dir.write("a.txt", "First.");
    dir.write("ignored.md", "Not text.");
    auto result = load_documents(dir.path.string());
    REQUIRE(result.docs.size() == 2);
    CHECK(result.docs[0].doc.id == "a");
    CHECK(result.docs[1].doc.id == "b");
}

TEST_CASE("a missing path is an IoError") {
    CHECK_THROWS_AS(load_documents("/no/such/path/anywhere.jsonl"), IoError);
    CHECK_THROWS_AS(read_text_file("/no/such/file.txt"), IoError);
}

TEST_CASE("text files round-trip bytes exactly") {
    TempDir dir;
    const std::string content = "line 1\nline 2\n\xe4\xbd\xa0\xe5\xa5\xbd";
    const auto file = dir.path / "roundtrip.txt";
    write_text_file(file.string(), content);
    CHECK(read_text_file(file.string()) == content);
}

TEST_CASE("sanitize_filename keeps safe characters and never returns empty") {
    CHECK(sanitize_filename("doc-1_a.B") == "doc-1_a.B");
    CHECK(sanitize_filename("a/b\\c d") == "a_b_c_d");
    CHECK(sanitize_filename("\xe4\xbd\xa0\xe5\xa5\xbd") == "______");
    CHECK(sanitize_filename("") == "doc");
}
