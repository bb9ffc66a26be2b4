#include <marble/synth.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

namespace marble {

namespace fs = std::filesystem;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint8_t clamp_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

void paint_stroke(std::vector<bool>& mask, std::size_t size, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> wobble(0.0, 0.25);
    const double n = static_cast<double>(size);
    double x = unit(rng) * n;
    double y = unit(rng) * n;
    double angle = unit(rng) * 2.0 * std::numbers::pi;
    const auto steps = static_cast<std::size_t>(n * (0.5 + unit(rng)));
    for (std::size_t s = 0; s < steps; ++s) {
        const long cx = std::lround(x), cy = std::lround(y);
        for (long dy = -1; dy <= 1; ++dy) {
            for (long dx = -1; dx <= 1; ++dx) {
                const long px = cx + dx, py = cy + dy;
                if (px >= 0 && py >= 0 && px < static_cast<long>(size) && py < static_cast<long>(size)) {
                    mask[static_cast<std::size_t>(py) * size + static_cast<std::size_t>(px)] = true;
                }
            }
        }
        angle += wobble(rng);
        x += std::cos(angle);
        y += std::sin(angle);
        if (x < -1.0 || y < -1.0 || x > n || y > n) break;
    }
}

}  // namespace

SyntheticImage synth_image(const SyntheticSpec& spec, std::size_t colour_class, std::size_t vein_class,
                           std::size_t replicate) {
    if (colour_class < 1 || colour_class > kColourClasses || vein_class < 1 || vein_class > kVeinClasses) {
        throw std::out_of_range("synth_image: class out of range");
    }
    std::uint64_t stream = splitmix64(spec.seed);
    stream = splitmix64(stream ^ colour_class);
    stream = splitmix64(stream ^ (vein_class << 8));
    stream = splitmix64(stream ^ (replicate << 16));
    std::mt19937_64 rng(stream);

    SyntheticImage img;
    img.colour_class = colour_class;
    img.vein_class = vein_class;
    img.replicate = replicate;
    img.id = "c" + std::to_string(colour_class) + "v" + std::to_string(vein_class) + "r" + std::to_string(replicate);

    const auto [lo, hi] = spec.stroke_counts[vein_class - 1];
    img.strokes = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);

    const std::size_t size = spec.image_size;
    std::vector<bool> mask(size * size, false);
    for (std::size_t s = 0; s < img.strokes; ++s) paint_stroke(mask, size, rng);

    const Rgb base = spec.base_colours[colour_class - 1];
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    Raster raster(size, size);
    auto pixels = raster.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const double scale = mask[i] ? kVeinDarkening : 1.0;
        const double r = base.r * scale + noise(rng);
        const double g = base.g * scale + noise(rng);
        const double b = base.b * scale + noise(rng);
        pixels[i] = {clamp_byte(r), clamp_byte(g), clamp_byte(b)};
    }
    img.raster = std::move(raster);
    return img;
}

std::vector<SyntheticImage> synth_corpus(const SyntheticSpec& spec) {
    std::vector<SyntheticImage> out;
    for (std::size_t c = 1; c <= kColourClasses; ++c) {
        for (std::size_t v = 1; v <= kVeinClasses; ++v) {
            for (std::size_t r = 1; r <= spec.replicates; ++r) out.push_back(synth_image(spec, c, v, r));
        }
    }
    return out;
}

CorpusManifest synth(const SyntheticSpec& spec, const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "images", ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir + ": " + ec.message());

    CorpusManifest manifest;
    for (std::size_t c = 1; c <= kColourClasses; ++c) {
        for (std::size_t v = 1; v <= kVeinClasses; ++v) {
            for (std::size_t r = 1; r <= spec.replicates; ++r) {
                const auto img = synth_image(spec, c, v, r);
                ManifestEntry e;
                e.id = img.id;
                e.path = "images/" + img.id + ".ppm";
                e.resolved_path = (fs::path(out_dir) / e.path).string();
                e.colour_class = c;
                e.vein_class = v;
                write_ppm(e.resolved_path, img.raster);
                manifest.entries.push_back(std::move(e));
            }
        }
    }
    std::ofstream file(fs::path(out_dir) / "manifest.csv", std::ios::binary);
    if (!file) throw std::runtime_error("cannot write manifest in " + out_dir);
    file << manifest_text(manifest);
    return manifest;
}

}  // namespace marble
