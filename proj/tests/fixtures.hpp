#pragma once

#include "bri/random.hpp"
#include "bri/types.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace fixtures {

inline bri::IndicatorVector vec(std::initializer_list<bri::Cell> cells) {
    return bri::IndicatorVector(std::vector<bri::Cell>(cells));
}

// four-country imputation scenario: c0 lacks its third indicator
inline bri::Dataset four_countries() {
    return {{"c0", vec({0.25, 0.30, std::nullopt})},
            {"c1", vec({0.17, 0.20, 0.20})},
            {"c2", vec({0.15, 0.18, 0.35})},
            {"c3", vec({0.28, 0.16, 0.30})}};
}

inline constexpr const char* kFourCountriesCsv =
    "country,i1,i2,i3\n"
    "c0,0.25,0.30,\n"
    "c1,0.17,0.20,0.20\n"
    "c2,0.15,0.18,0.35\n"
    "c3,0.28,0.16,0.30\n";

// declared [0,1] bounds so normalization leaves the values alone
inline constexpr const char* kFourCountriesSchema = R"([
  {"id": "i1", "display_name": "Indicator 1", "pillar": "Technology", "direction": "higher", "min": 0, "max": 1},
  {"id": "i2", "display_name": "Indicator 2", "pillar": "Industry", "direction": "higher", "min": 0, "max": 1},
  {"id": "i3", "display_name": "Indicator 3", "pillar": "User Engagement", "direction": "higher", "min": 0, "max": 1}
])";

/// Random dataset with values in [0,1]; each cell missing with prob. p_missing.
inline bri::Dataset random_dataset(bri::Rng& rng, std::size_t n, std::size_t dim, double p_missing) {
    bri::Dataset out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<bri::Cell> cells;
        for (std::size_t k = 0; k < dim; ++k) {
            if (rng.bernoulli(p_missing)) {
                cells.push_back(std::nullopt);
            } else {
                cells.push_back(rng.uniform());
            }
        }
        out.push_back({"e" + std::to_string(1000 + i), bri::IndicatorVector(std::move(cells))});
    }
    return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("bri_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string write(const std::string& name, const std::string& content) const {
        std::ofstream(file(name), std::ios::binary) << content;
        return file(name);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace fixtures
