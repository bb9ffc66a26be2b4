#pragma once

#include <marble/raster.hpp>

#include <array>
#include <string>
#include <vector>

namespace marble {

/// One leaf of the quadtree decomposition.
struct QuadRegion {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t w = 0;
    std::size_t h = 0;
    bool homogeneous = false;
    /// Per-channel pixel mean (r, g, b).
    std::array<double, 3> mean_rgb{};

    std::size_t area() const noexcept { return w * h; }
};

/// Leaf regions of a decomposition ("marble signature"), in raster-scan
/// order of their origin. Leaves tile the source exactly.
struct Signature {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<QuadRegion> regions;
};

struct QuadtreeParams {
    std::size_t min_area = 64;
    double alpha = 0.05;
};

/// Regions with fewer pixels than this pass the homogeneity test unconditionally.
inline constexpr std::size_t kMinTestablePixels = 16;

/// Chi-square goodness-of-fit against a Gaussian with the sample mean and
/// variance, applied independently to R, G and B. True when no channel is
/// rejected at level `alpha`. Zero-variance channels pass.
bool gaussian_homogeneity_test(std::span<const Rgb> pixels, double alpha);

/// Upper-tail p-value of the per-channel Gaussian fit on 8-bit samples.
/// Returns 1 when the test has no degrees of freedom left.
double gaussian_fit_pvalue(std::span<const std::uint8_t> samples);

Signature quadtree_decompose(const Raster& raster, const QuadtreeParams& params);

enum class ColorMetric { Manhattan, Euclidean };

/// HSV distance with every component scaled to [0, 1]; hue uses the
/// circular difference divided by 180 degrees.
double color_distance(const HsvTriple& a, const HsvTriple& b, ColorMetric metric) noexcept;

struct ColorCluster {
    std::size_t rank = 0;
    /// Colour attributed to every member region (the seed's mean colour).
    Rgb rep_rgb;
    std::size_t total_area = 0;
    /// Connected components (4-connectivity) of the cluster's pixel mask.
    std::size_t fragment_count = 0;
    std::array<double, 3> hsv_mean{};
    std::array<double, 3> hsv_std{};
    /// Indices into Signature::regions.
    std::vector<std::size_t> members;
};

struct MergeParams {
    ColorMetric metric = ColorMetric::Euclidean;
    double threshold = 0.1;
};

class EmptySignatureError : public std::runtime_error {
public:
    EmptySignatureError() : std::runtime_error("signature has no homogeneous region") {}
};

/// Greedy area-ranked merge: the largest unassigned region seeds a cluster
/// and absorbs every unassigned region within `threshold` of the seed.
/// Returned clusters are ranked by total area, largest first.
std::vector<ColorCluster> merge_regions(const Signature& sig, const MergeParams& params);

inline constexpr std::size_t kHfColors = 5;
inline constexpr std::size_t kHfLength = 56;

/// Homogeneity feature vector. Layout (1-based):
///   1+5k .. 5+5k   area, fragments, R, G, B of colour k  (k = 0..4)
///   26+6k .. 31+6k mean H, S, V then std H, S, V of colour k
///   56             fragments of clusters ranked beyond the fifth
using HfVector = std::array<double, kHfLength>;

HfVector extract_hf(const std::vector<ColorCluster>& clusters);

std::vector<std::string> hf_feature_names();

/// Homogeneous leaves painted with their mean colour, others black.
Raster render_signature(const Signature& sig);

/// CSV table: x,y,w,h,homogeneous,mean_r,mean_g,mean_b
std::string signature_table(const Signature& sig);

}  // namespace marble
