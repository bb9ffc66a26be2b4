#pragma once

#include <marble/corpus.hpp>

namespace marble {

/// Veins are painted at this fraction of the base colour.
inline constexpr double kVeinDarkening = 0.4;

struct SyntheticImage {
    std::string id;
    std::size_t colour_class = 1;  ///< 1..6
    std::size_t vein_class = 1;    ///< 1..3
    std::size_t replicate = 1;
    std::size_t strokes = 0;
    Raster raster{1, 1};
};

/// One synthetic marble: the class base colour plus Gaussian pixel noise,
/// crossed by dark random-walk strokes whose count is drawn from the vein
/// class range. Each image has its own seeded stream, so the result does
/// not depend on generation order.
SyntheticImage synth_image(const SyntheticSpec& spec, std::size_t colour_class, std::size_t vein_class,
                           std::size_t replicate);

/// Every (colour, vein, replicate) combination, colour-major.
std::vector<SyntheticImage> synth_corpus(const SyntheticSpec& spec);

/// Writes images/<id>.ppm and manifest.csv under `out_dir`.
CorpusManifest synth(const SyntheticSpec& spec, const std::string& out_dir);

}  // namespace marble
