#include <marble/quadtree.hpp>
#include <marble/table.hpp>

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace marble {

namespace {

constexpr double kMinExpectedPerBin = 5.0;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double gaussian_fit_pvalue(std::span<const std::uint8_t> samples) {
    const std::size_t n = samples.size();
    if (n < 2) return 1.0;

    std::array<std::size_t, 256> observed{};
    double sum = 0.0;
    for (auto s : samples) {
        ++observed[s];
        sum += s;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (auto s : samples) ss += (s - mean) * (s - mean);
    const double variance = ss / static_cast<double>(n - 1);
    if (variance <= 0.0) return 1.0;
    const double sigma = std::sqrt(variance);

    // Expected count per 8-bit value: each integer owns [v - 0.5, v + 0.5),
    // the tails fold into 0 and 255.
    std::array<double, 256> expected{};
    double prev = 0.0;
    for (int v = 0; v < 256; ++v) {
        const double upper = v == 255 ? 1.0 : normal_cdf((v + 0.5 - mean) / sigma);
        expected[v] = (upper - prev) * static_cast<double>(n);
        prev = upper;
    }

    // Group consecutive values until every bin expects at least five.
    std::vector<std::pair<double, double>> bins;  // (observed, expected)
    double obs_acc = 0.0;
    double exp_acc = 0.0;
    for (int v = 0; v < 256; ++v) {
        obs_acc += static_cast<double>(observed[v]);
        exp_acc += expected[v];
        if (exp_acc >= kMinExpectedPerBin) {
            bins.emplace_back(obs_acc, exp_acc);
            obs_acc = exp_acc = 0.0;
        }
    }
    if (exp_acc > 0.0 || obs_acc > 0.0) {
        if (bins.empty()) {
            bins.emplace_back(obs_acc, exp_acc);
        } else {
            bins.back().first += obs_acc;
            bins.back().second += exp_acc;
        }
    }

    // Two parameters (mean, variance) were estimated from the data.
    const int dof = static_cast<int>(bins.size()) - 3;
    if (dof < 1) return 1.0;

    double statistic = 0.0;
    for (auto [o, e] : bins) statistic += (o - e) * (o - e) / e;
    return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

bool gaussian_homogeneity_test(std::span<const Rgb> pixels, double alpha) {
    if (pixels.size() < kMinTestablePixels) return true;
    std::vector<std::uint8_t> channel(pixels.size());
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < pixels.size(); ++i) {
            channel[i] = c == 0 ? pixels[i].r : c == 1 ? pixels[i].g : pixels[i].b;
        }
        if (gaussian_fit_pvalue(channel) < alpha) return false;
    }
    return true;
}

namespace {

struct Decomposer {
    const Raster& raster;
    const QuadtreeParams& params;
    std::vector<QuadRegion> leaves;
    std::vector<Rgb> scratch;

    void run(std::size_t x, std::size_t y, std::size_t w, std::size_t h) {
        scratch.clear();
        scratch.reserve(w * h);
        std::array<double, 3> sum{};
        for (std::size_t yy = y; yy < y + h; ++yy) {
            for (std::size_t xx = x; xx < x + w; ++xx) {
                const Rgb p = raster.at(xx, yy);
                scratch.push_back(p);
                sum[0] += p.r;
                sum[1] += p.g;
                sum[2] += p.b;
            }
        }
        const bool homogeneous = gaussian_homogeneity_test(scratch, params.alpha);

        const std::size_t w0 = w / 2, h0 = h / 2;
        const bool splittable = w0 * h0 >= params.min_area;
        if (homogeneous || !splittable) {
            QuadRegion leaf{x, y, w, h, homogeneous, {}};
            const double area = static_cast<double>(w * h);
            for (int c = 0; c < 3; ++c) leaf.mean_rgb[c] = sum[c] / area;
            leaves.push_back(leaf);
            return;
        }
        const std::size_t w1 = w - w0, h1 = h - h0;
        run(x, y, w0, h0);
        run(x + w0, y, w1, h0);
        run(x, y + h0, w0, h1);
        run(x + w0, y + h0, w1, h1);
    }
};

}  // namespace

Signature quadtree_decompose(const Raster& raster, const QuadtreeParams& params) {
    if (params.min_area < 1) throw std::invalid_argument("quadtree: min_area must be >= 1");
    Decomposer d{raster, params, {}, {}};
    d.run(0, 0, raster.width(), raster.height());
    std::sort(d.leaves.begin(), d.leaves.end(), [](const QuadRegion& a, const QuadRegion& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    return Signature{raster.width(), raster.height(), std::move(d.leaves)};
}

double color_distance(const HsvTriple& a, const HsvTriple& b, ColorMetric metric) noexcept {
    double dh = std::fabs(a.h - b.h);
    dh = std::min(dh, 360.0 - dh) / 180.0;
    const double ds = std::fabs(a.s - b.s);
    const double dv = std::fabs(a.v - b.v);
    if (metric == ColorMetric::Manhattan) return dh + ds + dv;
    return std::sqrt(dh * dh + ds * ds + dv * dv);
}

Raster render_signature(const Signature& sig) {
    Raster out(sig.width, sig.height);
    for (const auto& r : sig.regions) {
        Rgb colour{};
        if (r.homogeneous) {
            auto to8 = [](double v) {
                return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            };
            colour = {to8(r.mean_rgb[0]), to8(r.mean_rgb[1]), to8(r.mean_rgb[2])};
        }
        for (std::size_t y = r.y; y < r.y + r.h; ++y) {
            for (std::size_t x = r.x; x < r.x + r.w; ++x) out.at(x, y) = colour;
        }
    }
    return out;
}

std::string signature_table(const Signature& sig) {
    std::ostringstream out;
    out << "x,y,w,h,homogeneous,mean_r,mean_g,mean_b\n";
    for (const auto& r : sig.regions) {
        out << r.x << ',' << r.y << ',' << r.w << ',' << r.h << ',' << (r.homogeneous ? 1 : 0);
        for (double m : r.mean_rgb) out << ',' << format_number(m);
        out << '\n';
    }
    return out.str();
}

}  // namespace marble
