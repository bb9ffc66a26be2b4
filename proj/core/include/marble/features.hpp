#pragma once

#include <marble/morphology.hpp>
#include <marble/raster.hpp>

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace marble {

inline constexpr std::size_t kColourFeatureCount = 54;
inline constexpr std::size_t kGranulometrySizes = 30;
inline constexpr std::size_t kMfLength = 594;

/// octils() of the R, G, B, H, S, V planes, concatenated in that order.
std::array<double, kColourFeatureCount> colour_features(const Raster& raster);

/// octils(open(p, r)) for r = 1..max_size, then octils(close(p, r)) for
/// r = 1..max_size. Every class is computed from the original plane.
std::vector<double> granulometric_features(const Plane& p, std::size_t max_size = kGranulometrySizes);

/// Opening and closing volumes for r = 1..max_size (index r - 1).
struct GranulometricVolumes {
    std::vector<std::uint64_t> opening;
    std::vector<std::uint64_t> closing;
};
GranulometricVolumes granulometric_volumes(const Plane& p, std::size_t max_size = kGranulometrySizes);

struct MorphologyParams {
    std::size_t max_size = kGranulometrySizes;
    Channel analysis_channel = Channel::V;
};

/// Morphological feature vector: 54 colour values, then the opening block,
/// then the closing block. 594 values with the default 30 sizes.
using MfVector = std::vector<double>;

MfVector assemble_mf(const Raster& raster, const MorphologyParams& params = {});

std::vector<std::string> mf_feature_names(std::size_t max_size = kGranulometrySizes);

enum class FeatureSubsetId { HF_A, HF_B, HF_C, MF_A, MF_B, MF_C };

enum class FeatureFamily { HF, MF };

std::optional<FeatureSubsetId> parse_subset_id(std::string_view text);
std::string to_string(FeatureSubsetId id);
FeatureFamily family_of(FeatureSubsetId id) noexcept;

/// Configured 1-based index lists for the subsets that have no fixed layout.
using SubsetTable = std::map<FeatureSubsetId, std::vector<std::size_t>>;

class MissingSubsetError : public std::runtime_error {
public:
    explicit MissingSubsetError(FeatureSubsetId id)
        : std::runtime_error("feature subset " + to_string(id) + " is not configured") {}
};

/// 1-based indices of a subset for a vector of the given length.
/// MF_B is the colour block plus the opening block, MF_C the closing block.
std::vector<std::size_t> subset_indices(FeatureSubsetId id, const SubsetTable& table,
                                        std::size_t vector_length);

std::vector<double> select_subset(std::span<const double> v, FeatureSubsetId id, const SubsetTable& table);

}  // namespace marble
