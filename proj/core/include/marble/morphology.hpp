#pragma once

#include <marble/raster.hpp>

#include <array>
#include <cstdint>
#include <vector>

namespace marble {

struct Offset {
    int dx = 0;
    int dy = 0;

    friend auto operator<=>(const Offset&, const Offset&) = default;
};

/// Digital hexagon of radius r on the square grid, emulated with the
/// row-parity ("odd rows shifted right") layout. The displacement set
/// depends on the parity of the origin row; the odd-row set is the point
/// reflection of the even-row set, so the hexagon is symmetric on the
/// underlying hexagonal lattice.
class StructuringElement {
public:
    std::size_t size() const noexcept { return size_; }

    /// Displacements for an origin on an even (`odd_row == false`) or odd row, sorted.
    const std::vector<Offset>& offsets(bool odd_row = false) const noexcept {
        return odd_row ? odd_ : even_;
    }

private:
    friend StructuringElement make_hexagon(std::size_t r);

    std::size_t size_ = 0;
    std::vector<Offset> even_;
    std::vector<Offset> odd_;
};

/// Hexagon of radius r (1 + 3r(r+1) cells). Throws on r == 0.
StructuringElement make_hexagon(std::size_t r);

// Flat grey-level morphology. A hexagon of radius r is applied as r passes of
// the unit hexagon, which equals the min/max over the radius-r offsets away
// from the border. At the border, values are edge-replicated on every pass,
// which keeps erosion and dilation an adjoint pair so openings and closings
// stay exactly idempotent and ordered by size.
Plane erode(const Plane& p, const StructuringElement& se);
Plane dilate(const Plane& p, const StructuringElement& se);
Plane erode_unit(const Plane& p);
Plane dilate_unit(const Plane& p);

Plane open(const Plane& p, std::size_t r);
Plane close(const Plane& p, std::size_t r);

std::uint64_t volume(const Plane& p) noexcept;

/// Minimum followed by the eight k/8 quantiles, quantile k taken at sorted
/// index ceil(k*N/8) - 1.
std::array<double, 9> octils(std::span<const std::uint8_t> values);
inline std::array<double, 9> octils(const Plane& p) { return octils(p.values()); }

}  // namespace marble
