#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace marble {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Hexcone HSV. Hue in degrees [0, 360), saturation and value in [0, 1].
struct HsvTriple {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

enum class Channel { R, G, B, H, S, V };

/// Row-major RGB image with 8 bits per channel.
class Raster {
public:
    Raster(std::size_t width, std::size_t height, Rgb fill = {});
    Raster(std::size_t width, std::size_t height, std::vector<Rgb> pixels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }

    const Rgb& at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
    Rgb& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }

    std::span<const Rgb> pixels() const noexcept { return pixels_; }
    std::span<Rgb> pixels() noexcept { return pixels_; }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<Rgb> pixels_;
};

/// Single-channel 8-bit grey-level function.
class Plane {
public:
    Plane(std::size_t width, std::size_t height, std::uint8_t fill = 0);
    Plane(std::size_t width, std::size_t height, std::vector<std::uint8_t> values);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::uint8_t at(std::size_t x, std::size_t y) const { return values_[y * width_ + x]; }
    std::uint8_t& at(std::size_t x, std::size_t y) { return values_[y * width_ + x]; }

    std::span<const std::uint8_t> values() const noexcept { return values_; }
    std::span<std::uint8_t> values() noexcept { return values_; }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> values_;
};

HsvTriple rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;
inline HsvTriple rgb_to_hsv(Rgb c) noexcept { return rgb_to_hsv(c.r, c.g, c.b); }

/// Same conversion on real-valued intensities in [0, 255] (region means).
HsvTriple rgb_to_hsv(double r, double g, double b) noexcept;

/// Inverse hexcone conversion, rounded to the nearest 8-bit value.
Rgb hsv_to_rgb(const HsvTriple& hsv) noexcept;

/// Extracts one channel; H, S and V are quantized to 8 bits.
Plane channel_plane(const Raster& raster, Channel channel);

const char* channel_name(Channel channel) noexcept;

// --- Netpbm I/O ---------------------------------------------------------

class DecodeError : public std::runtime_error {
public:
    DecodeError(const std::string& what, std::size_t offset);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Decodes P2/P3/P5/P6 streams. PGM input replicates grey into r=g=b.
Raster decode_image(std::span<const std::uint8_t> bytes);
Raster read_image(const std::string& path);

std::vector<std::uint8_t> encode_ppm(const Raster& raster);
std::vector<std::uint8_t> encode_pgm(const Plane& plane);
void write_ppm(const std::string& path, const Raster& raster);

// --- Connected components -----------------------------------------------

enum class Connectivity { Four = 4, Eight = 8 };

struct LabelMap {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint32_t> labels;
    std::size_t component_count = 0;
};

/// Labels maximal equal-valued connected sets. Labels are assigned in
/// first-encounter raster-scan order.
LabelMap connected_components(std::span<const std::int32_t> grid, std::size_t width,
                              std::size_t height, Connectivity connectivity);
LabelMap connected_components(const Plane& plane, Connectivity connectivity);

}  // namespace marble
