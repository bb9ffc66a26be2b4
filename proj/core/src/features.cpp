#include <marble/features.hpp>

#include <algorithm>

namespace marble {

namespace {

constexpr Channel kColourChannels[] = {Channel::R, Channel::G, Channel::B,
                                       Channel::H, Channel::S, Channel::V};

// Calls visit(r, opened) for r = 1..max_size, reusing the r-fold erosion.
template <typename Visit>
void for_each_size(const Plane& p, std::size_t max_size, bool opening, Visit visit) {
    Plane first = p;
    for (std::size_t r = 1; r <= max_size; ++r) {
        first = opening ? erode_unit(first) : dilate_unit(first);
        Plane result = first;
        for (std::size_t i = 0; i < r; ++i) result = opening ? dilate_unit(result) : erode_unit(result);
        visit(r, result);
    }
}

}  // namespace

std::array<double, kColourFeatureCount> colour_features(const Raster& raster) {
    std::array<double, kColourFeatureCount> out{};
    std::size_t k = 0;
    for (Channel c : kColourChannels) {
        for (double v : octils(channel_plane(raster, c))) out[k++] = v;
    }
    return out;
}

std::vector<double> granulometric_features(const Plane& p, std::size_t max_size) {
    if (max_size < 1) throw std::invalid_argument("granulometric_features: max_size must be >= 1");
    std::vector<double> out;
    out.reserve(18 * max_size);
    auto append = [&out](std::size_t, const Plane& transformed) {
        for (double v : octils(transformed)) out.push_back(v);
    };
    for_each_size(p, max_size, true, append);
    for_each_size(p, max_size, false, append);
    return out;
}

GranulometricVolumes granulometric_volumes(const Plane& p, std::size_t max_size) {
    GranulometricVolumes out;
    for_each_size(p, max_size, true, [&](std::size_t, const Plane& t) { out.opening.push_back(volume(t)); });
    for_each_size(p, max_size, false, [&](std::size_t, const Plane& t) { out.closing.push_back(volume(t)); });
    return out;
}

MfVector assemble_mf(const Raster& raster, const MorphologyParams& params) {
    const auto colour = colour_features(raster);
    MfVector out(colour.begin(), colour.end());
    const auto granulometry = granulometric_features(channel_plane(raster, params.analysis_channel), params.max_size);
    out.insert(out.end(), granulometry.begin(), granulometry.end());
    return out;
}

std::vector<std::string> mf_feature_names(std::size_t max_size) {
    std::vector<std::string> names;
    auto add_summary = [&names](const std::string& prefix) {
        names.push_back(prefix + "_min");
        for (int k = 1; k <= 8; ++k) names.push_back(prefix + "_oct" + std::to_string(k));
    };
    for (Channel c : kColourChannels) add_summary(channel_name(c));
    for (const char* kind : {"open", "close"}) {
        for (std::size_t r = 1; r <= max_size; ++r) {
            add_summary(std::string(kind) + (r < 10 ? "0" : "") + std::to_string(r));
        }
    }
    return names;
}

std::optional<FeatureSubsetId> parse_subset_id(std::string_view text) {
    static const std::pair<std::string_view, FeatureSubsetId> kNames[] = {
        {"HF_A", FeatureSubsetId::HF_A}, {"HF_B", FeatureSubsetId::HF_B}, {"HF_C", FeatureSubsetId::HF_C},
        {"MF_A", FeatureSubsetId::MF_A}, {"MF_B", FeatureSubsetId::MF_B}, {"MF_C", FeatureSubsetId::MF_C},
    };
    for (auto [name, id] : kNames) {
        if (name == text) return id;
    }
    return std::nullopt;
}

std::string to_string(FeatureSubsetId id) {
    switch (id) {
        case FeatureSubsetId::HF_A: return "HF_A";
        case FeatureSubsetId::HF_B: return "HF_B";
        case FeatureSubsetId::HF_C: return "HF_C";
        case FeatureSubsetId::MF_A: return "MF_A";
        case FeatureSubsetId::MF_B: return "MF_B";
        case FeatureSubsetId::MF_C: return "MF_C";
    }
    return "?";
}

FeatureFamily family_of(FeatureSubsetId id) noexcept {
    switch (id) {
        case FeatureSubsetId::HF_A:
        case FeatureSubsetId::HF_B:
        case FeatureSubsetId::HF_C: return FeatureFamily::HF;
        default: return FeatureFamily::MF;
    }
}

std::vector<std::size_t> subset_indices(FeatureSubsetId id, const SubsetTable& table,
                                        std::size_t vector_length) {
    auto range = [](std::size_t first, std::size_t last) {
        std::vector<std::size_t> out;
        for (std::size_t i = first; i <= last; ++i) out.push_back(i);
        return out;
    };
    switch (id) {
        case FeatureSubsetId::HF_A:
        case FeatureSubsetId::MF_A:
            return range(1, vector_length);
        case FeatureSubsetId::MF_B:
        case FeatureSubsetId::MF_C: {
            if (vector_length <= kColourFeatureCount || (vector_length - kColourFeatureCount) % 18 != 0) {
                throw std::invalid_argument("vector of length " + std::to_string(vector_length) +
                                            " has no MF layout");
            }
            const std::size_t colour_and_openings = kColourFeatureCount + (vector_length - kColourFeatureCount) / 2;
            return id == FeatureSubsetId::MF_B ? range(1, colour_and_openings)
                                               : range(colour_and_openings + 1, vector_length);
        }
        case FeatureSubsetId::HF_B:
        case FeatureSubsetId::HF_C: {
            const auto it = table.find(id);
            if (it == table.end() || it->second.empty()) throw MissingSubsetError(id);
            for (std::size_t i : it->second) {
                if (i < 1 || i > vector_length) {
                    throw std::out_of_range(to_string(id) + " index " + std::to_string(i) + " outside 1.." +
                                            std::to_string(vector_length));
                }
            }
            return it->second;
        }
    }
    return {};
}

std::vector<double> select_subset(std::span<const double> v, FeatureSubsetId id, const SubsetTable& table) {
    std::vector<double> out;
    for (std::size_t i : subset_indices(id, table, v.size())) out.push_back(v[i - 1]);
    return out;
}

}  // namespace marble
