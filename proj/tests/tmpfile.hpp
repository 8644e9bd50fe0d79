#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

// A file under the system temp directory, removed on destruction.
class TempFile {
public:
    explicit TempFile(const std::string& contents, const std::string& suffix = ".csv") {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("frrqr_test_" + std::to_string(rd()) + "_" + std::to_string(rd()) + suffix);
        std::ofstream(path_) << contents;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};
