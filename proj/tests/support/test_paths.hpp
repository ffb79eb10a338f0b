#pragma once

#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>

// Compile definitions baked by tests/CMakeLists.txt:
//   SELCOT_TEST_DATA_DIR  — tests/data in the source tree
//   SELCOT_REPO_DIR       — repository root
//   SELCOT_CLI_PATH       — built CLI binary (acceptance only)

namespace testsupport {

inline std::string data_dir() { return SELCOT_TEST_DATA_DIR; }
inline std::string data_path(const std::string& rel) { return data_dir() + "/" + rel; }
inline std::string repo_dir() { return SELCOT_REPO_DIR; }

inline std::string cli_path() {
#ifdef SELCOT_CLI_PATH
    return SELCOT_CLI_PATH;
#else
    return std::string();
#endif
}

// Unique scratch directory, removed recursively on destruction.
class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        for (int i = 0; i < 100; ++i) {
            auto cand = base / ("selcot_test_" + std::to_string(rd()));
            std::error_code ec;
            if (std::filesystem::create_directory(cand, ec)) {
                path_ = std::move(cand);
                return;
            }
        }
        throw std::runtime_error("could not create a scratch directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& name = "") const {
        return name.empty() ? path_.string() : (path_ / name).string();
    }

private:
    std::filesystem::path path_;
};

}  // namespace testsupport
