#include <marble/raster.hpp>

#include <algorithm>
#include <cmath>

namespace marble {

namespace {

void require_dimensions(std::size_t width, std::size_t height, std::size_t count) {
    if (width == 0 || height == 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    if (count != width * height) {
        throw std::invalid_argument("pixel count does not match width x height");
    }
}

std::uint8_t to_byte(double value) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
}

}  // namespace

Raster::Raster(std::size_t width, std::size_t height, Rgb fill)
    : Raster(width, height, std::vector<Rgb>(width * height, fill)) {}

Raster::Raster(std::size_t width, std::size_t height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    require_dimensions(width_, height_, pixels_.size());
}

Plane::Plane(std::size_t width, std::size_t height, std::uint8_t fill)
    : Plane(width, height, std::vector<std::uint8_t>(width * height, fill)) {}

Plane::Plane(std::size_t width, std::size_t height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
    require_dimensions(width_, height_, values_.size());
}

HsvTriple rgb_to_hsv(double r, double g, double b) noexcept {
    const double hi = std::max({r, g, b});
    const double lo = std::min({r, g, b});
    const double delta = hi - lo;

    HsvTriple out;
    out.v = hi / 255.0;
    out.s = hi > 0.0 ? delta / hi : 0.0;
    if (delta <= 0.0) {
        // achromatic: canonical hue
        out.h = 0.0;
        out.s = 0.0;
        return out;
    }
    double h;
    if (hi == r) {
        h = 60.0 * ((g - b) / delta);
    } else if (hi == g) {
        h = 60.0 * ((b - r) / delta + 2.0);
    } else {
        h = 60.0 * ((r - g) / delta + 4.0);
    }
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
    return out;
}

HsvTriple rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    return rgb_to_hsv(static_cast<double>(r), static_cast<double>(g), static_cast<double>(b));
}

Rgb hsv_to_rgb(const HsvTriple& hsv) noexcept {
    const double c = hsv.v * hsv.s;
    const double sector = std::fmod(hsv.h, 360.0) / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(sector, 2.0) - 1.0));
    const double m = hsv.v - c;

    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(sector)) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    return {to_byte((r + m) * 255.0), to_byte((g + m) * 255.0), to_byte((b + m) * 255.0)};
}

Plane channel_plane(const Raster& raster, Channel channel) {
    std::vector<std::uint8_t> values(raster.size());
    auto pixels = raster.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const Rgb p = pixels[i];
        switch (channel) {
            case Channel::R: values[i] = p.r; break;
            case Channel::G: values[i] = p.g; break;
            case Channel::B: values[i] = p.b; break;
            case Channel::H: values[i] = to_byte(rgb_to_hsv(p).h / 360.0 * 255.0); break;
            case Channel::S: values[i] = to_byte(rgb_to_hsv(p).s * 255.0); break;
            case Channel::V: values[i] = to_byte(rgb_to_hsv(p).v * 255.0); break;
        }
    }
    return Plane(raster.width(), raster.height(), std::move(values));
}

const char* channel_name(Channel channel) noexcept {
    switch (channel) {
        case Channel::R: return "R";
        case Channel::G: return "G";
        case Channel::B: return "B";
        case Channel::H: return "H";
        case Channel::S: return "S";
        case Channel::V: return "V";
    }
    return "?";
}

}  // namespace marble
