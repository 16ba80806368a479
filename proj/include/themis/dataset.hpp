#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "themis/types.hpp"

namespace themis {

struct LoadResult {
    std::vector<Trajectory> trajectories;
    std::size_t skipped = 0;                 // malformed lines (non-strict mode)
    std::vector<std::string> skip_reasons;   // one per skipped line
};

/// Loads a line-delimited JSON dataset. In strict mode any malformed line
/// (or path-type screenshot that does not resolve on disk) is an error;
/// otherwise malformed lines are skipped and counted.
LoadResult load_dataset(const std::string& path, bool strict = false);

/// Appends one trajectory per line.
void save_dataset(const std::string& path, const std::vector<Trajectory>& trajectories);

std::string trajectory_to_line(const Trajectory& t);

/// Order-insensitive FNV-1a digest over (task_id, platform, label) triples;
/// lets comparison reports prove they ran on the identical dataset.
std::string dataset_hash(const std::vector<Trajectory>& trajectories);

/// Per-platform sample counts for the synthetic generator.
struct PlatformCounts {
    Platform platform = Platform::other;
    int positives = 0;
    int negatives = 0;
};

struct GeneratorSpec {
    std::vector<PlatformCounts> platforms;
    int min_steps = 4;
    int max_steps = 40;
    std::uint64_t seed = 1;

    /// The five-platform split used throughout the test fixtures
    /// (700 positive / 709 negative, 1409 total).
    static GeneratorSpec benchmark_split();
};

/// Deterministically generates labeled trajectories in the dataset record
/// format. Screenshots are inline placeholders; step text is synthetic.
std::vector<Trajectory> generate_synthetic_dataset(const GeneratorSpec& spec);

}  // namespace themis
