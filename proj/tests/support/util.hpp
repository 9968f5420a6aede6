#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testutil {

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& stem) {
        static std::mt19937_64 rng{std::random_device{}()};
        path = std::filesystem::temp_directory_path() / (stem + "-" + std::to_string(rng()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name) const { return path / name; }
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil

// Asserts that `expr` raises sdd::Error with the given code.
#define CHECK_RAISES(code_, expr)                     \
    do {                                              \
        try {                                         \
            (void)(expr);                             \
            FAIL_CHECK("expected " #code_);           \
        } catch (const sdd::Error& e) {               \
            CHECK(e.code() == sdd::ErrorCode::code_); \
        }                                             \
    } while (0)
