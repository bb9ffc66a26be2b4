#include <marble/morphology.hpp>

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace marble {

namespace {

bool is_odd(long y) { return (y % 2 + 2) % 2 == 1; }

// Six hexagonal neighbours of (x, y) under the odd-rows-shifted-right layout.
std::array<Offset, 6> hex_neighbours(bool odd_row) {
    const int shift = odd_row ? 0 : -1;
    return {{{-1, 0}, {1, 0}, {shift, -1}, {shift + 1, -1}, {shift, 1}, {shift + 1, 1}}};
}

std::vector<Offset> hex_ball(std::size_t r, bool origin_odd) {
    std::set<Offset> ball{{0, 0}};
    std::vector<Offset> frontier{{0, 0}};
    for (std::size_t step = 0; step < r; ++step) {
        std::vector<Offset> next;
        for (const Offset& o : frontier) {
            for (const Offset& n : hex_neighbours(is_odd(o.dy + (origin_odd ? 1 : 0)))) {
                const Offset q{o.dx + n.dx, o.dy + n.dy};
                if (ball.insert(q).second) next.push_back(q);
            }
        }
        frontier = std::move(next);
    }
    return {ball.begin(), ball.end()};
}

template <typename Pick>
Plane unit_pass(const Plane& p, Pick pick) {
    const std::size_t w = p.width(), h = p.height();
    Plane out(w, h);
    const std::uint8_t* src = p.values().data();
    std::uint8_t* dst = out.values().data();
    auto clamp_x = [w](long x) { return static_cast<std::size_t>(std::clamp<long>(x, 0, static_cast<long>(w) - 1)); };

    for (std::size_t y = 0; y < h; ++y) {
        const std::uint8_t* cur = src + y * w;
        const std::uint8_t* up = src + (y > 0 ? y - 1 : y) * w;
        const std::uint8_t* down = src + (y + 1 < h ? y + 1 : y) * w;
        const long shift = is_odd(static_cast<long>(y)) ? 0 : -1;
        for (std::size_t x = 0; x < w; ++x) {
            const long lx = static_cast<long>(x);
            const std::size_t xl = clamp_x(lx - 1), xr = clamp_x(lx + 1);
            const std::size_t a = clamp_x(lx + shift), b = clamp_x(lx + shift + 1);
            std::uint8_t v = cur[x];
            v = pick(v, cur[xl]);
            v = pick(v, cur[xr]);
            v = pick(v, up[a]);
            v = pick(v, up[b]);
            v = pick(v, down[a]);
            v = pick(v, down[b]);
            dst[x + y * w] = v;
        }
    }
    return out;
}

std::uint8_t take_min(std::uint8_t a, std::uint8_t b) { return a < b ? a : b; }
std::uint8_t take_max(std::uint8_t a, std::uint8_t b) { return a > b ? a : b; }

Plane repeat(Plane p, std::size_t times, Plane (*pass)(const Plane&)) {
    for (std::size_t i = 0; i < times; ++i) p = pass(p);
    return p;
}

}  // namespace

StructuringElement make_hexagon(std::size_t r) {
    if (r == 0) throw std::invalid_argument("make_hexagon: radius must be >= 1");
    StructuringElement se;
    se.size_ = r;
    se.even_ = hex_ball(r, false);
    se.odd_ = hex_ball(r, true);
    return se;
}

Plane erode_unit(const Plane& p) { return unit_pass(p, take_min); }
Plane dilate_unit(const Plane& p) { return unit_pass(p, take_max); }

Plane erode(const Plane& p, const StructuringElement& se) { return repeat(p, se.size(), erode_unit); }
Plane dilate(const Plane& p, const StructuringElement& se) { return repeat(p, se.size(), dilate_unit); }

Plane open(const Plane& p, std::size_t r) {
    if (r == 0) throw std::invalid_argument("open: size must be >= 1");
    return repeat(repeat(p, r, erode_unit), r, dilate_unit);
}

Plane close(const Plane& p, std::size_t r) {
    if (r == 0) throw std::invalid_argument("close: size must be >= 1");
    return repeat(repeat(p, r, dilate_unit), r, erode_unit);
}

std::uint64_t volume(const Plane& p) noexcept {
    return std::accumulate(p.values().begin(), p.values().end(), std::uint64_t{0});
}

std::array<double, 9> octils(std::span<const std::uint8_t> values) {
    if (values.empty()) throw std::invalid_argument("octils: empty plane");
    std::array<std::size_t, 256> histogram{};
    for (auto v : values) ++histogram[v];

    const std::size_t n = values.size();
    // Value at a given index of the sorted sequence, via the cumulative histogram.
    auto at_sorted = [&](std::size_t index) {
        std::size_t seen = 0;
        for (int v = 0; v < 256; ++v) {
            seen += histogram[v];
            if (seen > index) return static_cast<double>(v);
        }
        return 255.0;
    };

    std::array<double, 9> out{};
    out[0] = at_sorted(0);
    for (std::size_t k = 1; k <= 8; ++k) {
        const std::size_t rank = (k * n + 7) / 8;  // ceil(k*n/8)
        out[k] = at_sorted(rank - 1);
    }
    return out;
}

}  // namespace marble
