#include <marble/raster.hpp>

#include <cctype>
#include <fstream>
#include <iterator>

namespace marble {

DecodeError::DecodeError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}

namespace {

class Reader {
public:
    Reader(std::span<const std::uint8_t> bytes, std::size_t start) : bytes_(bytes), pos_(start) {}

    std::size_t offset() const { return pos_; }
    bool at_end() const { return pos_ >= bytes_.size(); }

    void skip_whitespace_and_comments() {
        while (!at_end()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (!at_end() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    unsigned long read_uint(const char* field) {
        skip_whitespace_and_comments();
        const std::size_t start = pos_;
        unsigned long value = 0;
        while (!at_end() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 0xFFFFFFFFul) throw DecodeError(std::string(field) + " overflows", start);
            ++pos_;
        }
        if (pos_ == start) {
            if (at_end()) throw DecodeError(std::string("truncated header reading ") + field, start);
            throw DecodeError(std::string("expected integer for ") + field, start);
        }
        return value;
    }

    std::uint8_t byte() {
        if (at_end()) throw DecodeError("truncated pixel data", pos_);
        return bytes_[pos_++];
    }

    void single_whitespace() {
        if (at_end()) throw DecodeError("truncated pixel data", pos_);
        if (!std::isspace(bytes_[pos_])) throw DecodeError("expected whitespace after header", pos_);
        ++pos_;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_;
};

}  // namespace

Raster decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] < '2' || bytes[1] > '6' || bytes[1] == '4') {
        throw DecodeError("malformed magic number", 0);
    }
    const char kind = static_cast<char>(bytes[1]);
    const bool grey = kind == '2' || kind == '5';
    const bool ascii = kind == '2' || kind == '3';

    Reader in(bytes, 2);

    in.skip_whitespace_and_comments();
    const std::size_t width_at = in.offset();
    const unsigned long width = in.read_uint("width");
    in.skip_whitespace_and_comments();
    const std::size_t height_at = in.offset();
    const unsigned long height = in.read_uint("height");
    in.skip_whitespace_and_comments();
    const std::size_t maxval_at = in.offset();
    const unsigned long maxval = in.read_uint("maxval");
    if (width == 0) throw DecodeError("zero width", width_at);
    if (height == 0) throw DecodeError("zero height", height_at);
    if (maxval == 0 || maxval > 65535) throw DecodeError("maxval out of range", maxval_at);

    auto scale = [maxval](unsigned long v) -> std::uint8_t {
        if (maxval == 255) return static_cast<std::uint8_t>(v);
        return static_cast<std::uint8_t>((v * 255 * 2 + maxval) / (2 * maxval));
    };

    const std::size_t samples_per_pixel = grey ? 1 : 3;
    const std::size_t sample_count = width * height * samples_per_pixel;
    // Every sample takes at least one byte in either encoding.
    if (sample_count > bytes.size()) throw DecodeError("truncated pixel data", bytes.size());
    std::vector<std::uint8_t> samples(sample_count);

    if (ascii) {
        for (auto& s : samples) {
            in.skip_whitespace_and_comments();
            const std::size_t at = in.offset();
            if (in.at_end()) throw DecodeError("truncated pixel data", at);
            const unsigned long v = in.read_uint("sample");
            if (v > maxval) throw DecodeError("sample exceeds maxval", at);
            s = scale(v);
        }
    } else {
        in.single_whitespace();
        for (auto& s : samples) {
            const std::size_t at = in.offset();
            unsigned long v = in.byte();
            if (maxval > 255) v = (v << 8) | in.byte();
            if (v > maxval) throw DecodeError("sample exceeds maxval", at);
            s = scale(v);
        }
    }

    std::vector<Rgb> pixels(width * height);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        if (grey) {
            pixels[i] = {samples[i], samples[i], samples[i]};
        } else {
            pixels[i] = {samples[3 * i], samples[3 * i + 1], samples[3 * i + 2]};
        }
    }
    return Raster(width, height, std::move(pixels));
}

Raster read_image(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open image " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                    std::istreambuf_iterator<char>());
    return decode_image(bytes);
}

namespace {

std::vector<std::uint8_t> header(char kind, std::size_t width, std::size_t height) {
    const std::string text = std::string("P") + kind + "\n" + std::to_string(width) + " " +
                             std::to_string(height) + "\n255\n";
    return {text.begin(), text.end()};
}

}  // namespace

std::vector<std::uint8_t> encode_ppm(const Raster& raster) {
    auto out = header('6', raster.width(), raster.height());
    out.reserve(out.size() + raster.size() * 3);
    for (const Rgb& p : raster.pixels()) {
        out.push_back(p.r);
        out.push_back(p.g);
        out.push_back(p.b);
    }
    return out;
}

std::vector<std::uint8_t> encode_pgm(const Plane& plane) {
    auto out = header('5', plane.width(), plane.height());
    out.insert(out.end(), plane.values().begin(), plane.values().end());
    return out;
}

void write_ppm(const std::string& path, const Raster& raster) {
    const auto bytes = encode_ppm(raster);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!file) throw std::runtime_error("write failed for " + path);
}

}  // namespace marble
