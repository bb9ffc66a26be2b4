#include <marble/quadtree.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace marble {

namespace {

std::uint8_t round_channel(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

struct FragmentAccumulator {
    std::size_t pixels = 0;
    std::array<double, 3> rgb_sum{};
};

}  // namespace

std::vector<ColorCluster> merge_regions(const Signature& sig, const MergeParams& params) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < sig.regions.size(); ++i) {
        if (sig.regions[i].homogeneous) order.push_back(i);
    }
    if (order.empty()) throw EmptySignatureError();

    // Regions are stored in raster-scan order, so a stable sort breaks area ties by origin.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sig.regions[a].area() > sig.regions[b].area();
    });

    std::vector<HsvTriple> hsv(sig.regions.size());
    for (std::size_t i : order) {
        const auto& m = sig.regions[i].mean_rgb;
        hsv[i] = rgb_to_hsv(m[0], m[1], m[2]);
    }

    std::vector<ColorCluster> clusters;
    std::vector<bool> assigned(sig.regions.size(), false);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const std::size_t seed = order[pos];
        if (assigned[seed]) continue;
        assigned[seed] = true;

        ColorCluster cluster;
        const auto& m = sig.regions[seed].mean_rgb;
        cluster.rep_rgb = {round_channel(m[0]), round_channel(m[1]), round_channel(m[2])};
        cluster.members.push_back(seed);
        // Compare against the seed only; absorbed regions do not extend the reach.
        for (std::size_t later = pos + 1; later < order.size(); ++later) {
            const std::size_t cand = order[later];
            if (assigned[cand]) continue;
            if (color_distance(hsv[seed], hsv[cand], params.metric) <= params.threshold) {
                assigned[cand] = true;
                cluster.members.push_back(cand);
            }
        }
        for (std::size_t r : cluster.members) cluster.total_area += sig.regions[r].area();
        clusters.push_back(std::move(cluster));
    }

    // Pixel map of cluster membership; non-homogeneous leaves stay at -1.
    std::vector<std::int32_t> grid(sig.width * sig.height, -1);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (std::size_t r : clusters[c].members) {
            const auto& reg = sig.regions[r];
            for (std::size_t y = reg.y; y < reg.y + reg.h; ++y) {
                std::fill_n(grid.begin() + static_cast<std::ptrdiff_t>(y * sig.width + reg.x), reg.w,
                            static_cast<std::int32_t>(c));
            }
        }
    }
    std::vector<std::array<double, 3>> pixel_rgb(grid.size());
    for (const auto& reg : sig.regions) {
        for (std::size_t y = reg.y; y < reg.y + reg.h; ++y) {
            for (std::size_t x = reg.x; x < reg.x + reg.w; ++x) pixel_rgb[y * sig.width + x] = reg.mean_rgb;
        }
    }

    const LabelMap components = connected_components(grid, sig.width, sig.height, Connectivity::Four);
    std::vector<FragmentAccumulator> fragments(components.component_count);
    std::vector<std::int32_t> fragment_owner(components.component_count, -1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto label = components.labels[i];
        fragment_owner[label] = grid[i];
        auto& acc = fragments[label];
        ++acc.pixels;
        for (int c = 0; c < 3; ++c) acc.rgb_sum[c] += pixel_rgb[i][c];
    }

    // Fragment colours, grouped by cluster in first-encounter order.
    std::vector<std::vector<HsvTriple>> fragment_hsv(clusters.size());
    for (std::size_t f = 0; f < fragments.size(); ++f) {
        if (fragment_owner[f] < 0) continue;
        const double n = static_cast<double>(fragments[f].pixels);
        const auto& s = fragments[f].rgb_sum;
        fragment_hsv[static_cast<std::size_t>(fragment_owner[f])].push_back(
            rgb_to_hsv(s[0] / n, s[1] / n, s[2] / n));
    }

    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const auto& values = fragment_hsv[c];
        auto& cluster = clusters[c];
        cluster.fragment_count = values.size();
        const double n = static_cast<double>(values.size());
        std::array<double, 3> mean{}, var{};
        for (const auto& v : values) {
            mean[0] += v.h;
            mean[1] += v.s;
            mean[2] += v.v;
        }
        for (double& m : mean) m /= n;
        for (const auto& v : values) {
            var[0] += (v.h - mean[0]) * (v.h - mean[0]);
            var[1] += (v.s - mean[1]) * (v.s - mean[1]);
            var[2] += (v.v - mean[2]) * (v.v - mean[2]);
        }
        cluster.hsv_mean = mean;
        for (int k = 0; k < 3; ++k) cluster.hsv_std[k] = std::sqrt(var[k] / n);
    }

    std::stable_sort(clusters.begin(), clusters.end(), [](const ColorCluster& a, const ColorCluster& b) {
        return a.total_area > b.total_area;
    });
    for (std::size_t i = 0; i < clusters.size(); ++i) clusters[i].rank = i;
    return clusters;
}

HfVector extract_hf(const std::vector<ColorCluster>& clusters) {
    HfVector hf{};
    for (std::size_t k = 0; k < std::min(kHfColors, clusters.size()); ++k) {
        const auto& c = clusters[k];
        double* basic = &hf[5 * k];
        basic[0] = static_cast<double>(c.total_area);
        basic[1] = static_cast<double>(c.fragment_count);
        basic[2] = c.rep_rgb.r;
        basic[3] = c.rep_rgb.g;
        basic[4] = c.rep_rgb.b;
        double* stats = &hf[25 + 6 * k];
        for (int j = 0; j < 3; ++j) {
            stats[j] = c.hsv_mean[j];
            stats[3 + j] = c.hsv_std[j];
        }
    }
    double ranked_out = 0.0;
    for (std::size_t k = kHfColors; k < clusters.size(); ++k) {
        ranked_out += static_cast<double>(clusters[k].fragment_count);
    }
    hf[kHfLength - 1] = ranked_out;
    return hf;
}

std::vector<std::string> hf_feature_names() {
    std::vector<std::string> names(kHfLength);
    static constexpr const char* kBasic[] = {"area", "fragments", "r", "g", "b"};
    static constexpr const char* kStats[] = {"mean_h", "mean_s", "mean_v", "std_h", "std_s", "std_v"};
    for (std::size_t k = 0; k < kHfColors; ++k) {
        const std::string suffix = "_c" + std::to_string(k);
        for (std::size_t j = 0; j < 5; ++j) names[5 * k + j] = kBasic[j] + suffix;
        for (std::size_t j = 0; j < 6; ++j) names[25 + 6 * k + j] = kStats[j] + suffix;
    }
    names[kHfLength - 1] = "unclustered_fragments";
    return names;
}

}  // namespace marble
