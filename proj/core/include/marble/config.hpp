#pragma once

#include <marble/clustering.hpp>
#include <marble/features.hpp>
#include <marble/quadtree.hpp>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace marble {

/// Input that fails validation: bad manifest, config or feature table.
/// The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kColourClasses = 6;
inline constexpr std::size_t kVeinClasses = 3;

struct SyntheticSpec {
    std::array<Rgb, kColourClasses> base_colours{{
        {235, 232, 225},  // white
        {225, 205, 165},  // cream
        {220, 165, 150},  // pink
        {165, 165, 172},  // grey
        {120, 160, 125},  // green
        {170, 95, 80},    // red-brown
    }};
    /// Inclusive stroke-count range per vein class (none, light, strong).
    std::array<std::pair<std::size_t, std::size_t>, kVeinClasses> stroke_counts{{{0, 1}, {4, 8}, {16, 32}}};
    std::size_t image_size = 128;
    double noise_sigma = 4.0;
    std::size_t replicates = 4;
    std::uint64_t seed = 1;
};

struct PipelineConfig {
    QuadtreeParams quadtree;
    MergeParams merge;
    MorphologyParams morphology;
    /// HF_B ships as colour-0 R, G, B and mean H, S, V; HF_C has no default.
    SubsetTable subsets{{FeatureSubsetId::HF_B, {3, 4, 5, 26, 27, 28}}};
    LvqConfig lvq;
    SaConfig sa;
    SyntheticSpec synth;
    std::uint64_t seed = 1;

    /// Propagates the global seed into the per-algorithm configs.
    void set_seed(std::uint64_t value);

    /// Flat key = value text with every key materialised.
    std::string to_text() const;
};

/// Parses `key = value` lines (`#` starts a comment). Unknown keys and bad
/// values raise DataError naming the line.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::string& path);

/// "3,4,5,26-28" -> {3,4,5,26,27,28}
std::vector<std::size_t> parse_index_list(std::string_view text);

}  // namespace marble
