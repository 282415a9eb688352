#ifndef LQKIT_TESTS_HELPERS_HPP
#define LQKIT_TESTS_HELPERS_HPP

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lqkit/scores.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(LQKIT_DATA_DIR) + "/" + name;
}

// Scratch directory removed when the object dies; names are unique per
// process so parallel test binaries do not collide.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        const auto base = std::filesystem::temp_directory_path();
        path_ = base / ("lqkit_test_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// The nine study languages, in the column order of the bundled grid file.
inline const std::vector<std::string>& study_languages() {
    static const std::vector<std::string> langs = {
        "English", "Arabic",  "Korean", "Vietnamese", "Tamil",
        "Chinese", "Japanese", "Coptic", "Hindi"};
    return langs;
}

inline lqkit::ScoreStore load_grid_store() {
    lqkit::ScoreStore store;
    lqkit::import_results(store, data_path("pixel_pos_crossgrid.tsv"));
    return store;
}

// One score row in the ingest schema.
inline std::string score_row(const std::string& model, const std::string& task,
                             const std::string& source, const std::string& target, int steps,
                             const std::string& metric, const std::string& value) {
    return model + "\t" + task + "\t" + source + "\t" + target + "\t" + std::to_string(steps) +
           "\t" + metric + "\t" + value + "\n";
}

inline const std::string kScoreHeaderLine =
    "model\ttask\tsource\ttarget\tsteps\tmetric\tscore\n";

}  // namespace testutil

#endif
