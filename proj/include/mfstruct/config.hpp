#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mfstruct {

struct RunConfig {
    uint64_t N = 1000000;
    double T = 5.0;
    double A = 4.0;
    double K = 0.0;  // 0 = estimate from sieved checkpoints
    std::vector<uint64_t> checkpoints;  // empty = decades 10^3 .. N
    double grid_step = 0.01;
    std::string output_dir = "out";
    std::string cache_dir;  // empty = no cache; MFSTRUCT_CACHE overrides
    int workers = 1;

    std::vector<uint64_t> effective_checkpoints() const;
    void validate() const;
};

// key=value lines, '#' comments, unknown keys rejected.
RunConfig parse_config(const std::filesystem::path& path);

}  // namespace mfstruct
