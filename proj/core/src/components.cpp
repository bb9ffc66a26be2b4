#include <marble/raster.hpp>

#include <numeric>

namespace marble {

namespace {

// Union-find over provisional labels, smallest root wins.
class EquivalenceTable {
public:
    std::uint32_t make() {
        parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
        return parent_.back();
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a < b) parent_[b] = a;
        else if (b < a) parent_[a] = b;
    }

    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::uint32_t> parent_;
};

}  // namespace

LabelMap connected_components(std::span<const std::int32_t> grid, std::size_t width,
                              std::size_t height, Connectivity connectivity) {
    if (grid.size() != width * height) {
        throw std::invalid_argument("connected_components: grid size mismatch");
    }
    LabelMap out;
    out.width = width;
    out.height = height;
    out.labels.assign(grid.size(), 0);
    if (grid.empty()) return out;

    const bool eight = connectivity == Connectivity::Eight;
    EquivalenceTable table;
    auto& labels = out.labels;

    // First pass: provisional labels from the already-scanned neighbours.
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const std::size_t i = y * width + x;
            const std::int32_t v = grid[i];
            std::uint32_t label = UINT32_MAX;
            auto visit = [&](std::size_t j) {
                if (grid[j] != v) return;
                if (label == UINT32_MAX) {
                    label = labels[j];
                } else {
                    table.unite(label, labels[j]);
                }
            };
            if (x > 0) visit(i - 1);
            if (y > 0) {
                if (eight && x > 0) visit(i - width - 1);
                visit(i - width);
                if (eight && x + 1 < width) visit(i - width + 1);
            }
            labels[i] = label == UINT32_MAX ? table.make() : label;
        }
    }

    // Second pass: resolve roots and renumber in first-encounter order.
    std::vector<std::uint32_t> dense(table.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& l : labels) {
        const std::uint32_t root = table.find(l);
        if (dense[root] == UINT32_MAX) dense[root] = next++;
        l = dense[root];
    }
    out.component_count = next;
    return out;
}

LabelMap connected_components(const Plane& plane, Connectivity connectivity) {
    std::vector<std::int32_t> grid(plane.values().begin(), plane.values().end());
    return connected_components(grid, plane.width(), plane.height(), connectivity);
}

}  // namespace marble
