// Acceptance run: one PASS/FAIL line per criterion.
//
//   marble_acceptance          run every criterion
//   marble_acceptance 3 7      run the listed criteria only
//
// Exit status is 0 only when every selected criterion passes.

#include <marble/clustering.hpp>
#include <marble/pipeline.hpp>
#include <marble/synth.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace marble;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

Plane random_plane(std::size_t w, std::size_t h, std::mt19937_64& rng) {
    Plane p(w, h);
    for (auto& v : p.values()) v = static_cast<std::uint8_t>(rng());
    return p;
}

bool pointwise_le(const Plane& a, const Plane& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.values()[i] > b.values()[i]) return false;
    }
    return true;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome feature_counts() {
    SyntheticSpec spec;
    const PipelineConfig cfg;
    Outcome out;
    std::size_t images = 0;
    for (std::size_t i = 0; i < 10; ++i) {
        const auto img = synth_image(spec, 1 + i % kColourClasses, 1 + i % kVeinClasses, 1 + i / 6);
        const ImageFeatures f = extract_features(img.raster, cfg);
        if (f.hf.size() != 56 || f.mf.size() != 594) out.pass = false;
        ++images;
    }
    out.detail = std::to_string(images) + " images, HF 56 and MF 594 each";
    return out;
}

Outcome morphology_axioms() {
    std::mt19937_64 rng(2);
    std::size_t violations = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Plane p = random_plane(32, 32, rng);
        std::uint64_t open_prev = volume(p), close_prev = volume(p);
        for (std::size_t r = 1; r <= 30; ++r) {
            const Plane o = open(p, r), c = close(p, r);
            if (!(open(o, r) == o) || !(close(c, r) == c)) ++violations;
            if (!pointwise_le(o, p) || !pointwise_le(p, c)) ++violations;
            const std::uint64_t vo = volume(o), vc = volume(c);
            if (vo > open_prev || vc < close_prev) ++violations;
            open_prev = vo;
            close_prev = vc;
        }
        for (std::size_t r = 1; r <= 3; ++r) {
            for (std::size_t s = 1; s <= 3; ++s) {
                if (!(open(open(p, r), s) == open(p, std::max(r, s)))) ++violations;
                if (!(close(close(p, r), s) == close(p, std::max(r, s)))) ++violations;
            }
        }
    }
    return {violations == 0, "50 planes, r = 1..30, " + std::to_string(violations) + " violations"};
}

Outcome octil_oracle() {
    std::mt19937_64 rng(3);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const Plane p = random_plane(1 + rng() % 64, 1 + rng() % 64, rng);
        std::vector<std::uint8_t> sorted(p.values().begin(), p.values().end());
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        std::array<double, 9> expected{};
        expected[0] = sorted.front();
        for (std::size_t k = 1; k <= 8; ++k) expected[k] = sorted[(k * n + 7) / 8 - 1];
        if (octils(p) != expected) ++mismatches;
    }
    return {mismatches == 0, "500 planes, " + std::to_string(mismatches) + " mismatches"};
}

Outcome quadtree_tiling() {
    std::mt19937_64 rng(4);
    std::size_t bad = 0;
    auto tiles_exactly = [](const Signature& sig) {
        std::vector<int> cover(sig.width * sig.height, 0);
        for (const auto& reg : sig.regions) {
            if (reg.x + reg.w > sig.width || reg.y + reg.h > sig.height) return false;
            for (std::size_t y = reg.y; y < reg.y + reg.h; ++y) {
                for (std::size_t x = reg.x; x < reg.x + reg.w; ++x) ++cover[y * sig.width + x];
            }
        }
        return std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; });
    };
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t w = 16 + rng() % 80, h = 16 + rng() % 80;
        Raster r(w, h);
        if (trial % 2 == 0) {
            for (auto& p : r.pixels()) p = {std::uint8_t(rng()), std::uint8_t(rng()), std::uint8_t(rng())};
        } else {
            const std::size_t block = 4 + rng() % 12;
            std::vector<Rgb> palette(6);
            for (auto& c : palette) c = {std::uint8_t(rng()), std::uint8_t(rng()), std::uint8_t(rng())};
            for (std::size_t y = 0; y < h; ++y) {
                for (std::size_t x = 0; x < w; ++x) {
                    r.at(x, y) = palette[((x / block) * 7 + (y / block) * 3) % palette.size()];
                }
            }
        }
        if (!tiles_exactly(quadtree_decompose(r, {16 + 16 * (rng() % 4), 0.05}))) ++bad;
    }
    const std::size_t constant_regions = quadtree_decompose(Raster(64, 64, Rgb{120, 80, 40}), {}).regions.size();
    return {bad == 0 && constant_regions == 1,
            "100 images, " + std::to_string(bad) + " bad tilings; constant image " + std::to_string(constant_regions) +
                " region(s)"};
}

Outcome quality_identities() {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 5.0);
    double worst_ratio = 0, worst_scale = 0, worst_mean = 0, worst_var = 0;
    bool symmetric = true;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 6 + rng() % 40, cols = 1 + rng() % 12, k = 2 + rng() % 5;
        std::vector<double> values(rows * cols);
        for (auto& v : values) v = gauss(rng) + 10.0;
        std::vector<std::size_t> assignment(rows);
        for (std::size_t i = 0; i < rows; ++i) assignment[i] = i < k ? i : rng() % k;
        const FeatureMatrix m(rows, cols, values);
        const ClusterSet set(assignment, k);

        double intra = 0, inter = 0;
        for (std::size_t c = 0; c < k; ++c) {
            intra += intraset(m, set, c);
            for (std::size_t d = 0; d < k; ++d) {
                if (c == d) continue;
                const double cd = interset(m, set, c, d);
                if (cd != interset(m, set, d, c)) symmetric = false;
                inter += cd;
            }
        }
        const double comb = combined(m, set);
        worst_ratio = std::max(worst_ratio, std::abs(comb - intra / inter) / (intra / inter));

        const double scale = 0.5 + 4.0 * std::uniform_real_distribution<double>(0, 1)(rng);
        std::vector<double> scaled = values;
        for (auto& v : scaled) v *= scale;
        const FeatureMatrix ms(rows, cols, scaled);
        const QualityRow base = quality_row(m, set), big = quality_row(ms, set);
        worst_scale = std::max({worst_scale, std::abs(big.intra / (scale * scale * base.intra) - 1),
                                std::abs(big.inter / (scale * scale * base.inter) - 1),
                                std::abs(big.combined / base.combined - 1)});

        const Normalized z = znormalize(m);
        for (std::size_t c = 0; c < cols; ++c) {
            double mean = 0, var = 0;
            for (std::size_t r = 0; r < rows; ++r) mean += z.matrix.at(r, c);
            mean /= double(rows);
            for (std::size_t r = 0; r < rows; ++r) var += (z.matrix.at(r, c) - mean) * (z.matrix.at(r, c) - mean);
            var /= double(rows);
            worst_mean = std::max(worst_mean, std::abs(mean));
            worst_var = std::max(worst_var, std::abs(var - 1));
        }
    }
    const bool pass = worst_ratio <= 1e-12 && symmetric && worst_scale < 1e-9 && worst_mean < 1e-9 && worst_var < 1e-9;
    return {pass, "ratio err " + fmt(worst_ratio) + ", scaling err " + fmt(worst_scale) + ", |mean| " +
                      fmt(worst_mean) + ", |var-1| " + fmt(worst_var) + (symmetric ? ", symmetric" : ", ASYMMETRIC")};
}

Outcome quality_oracles() {
    const FeatureMatrix three(3, 2, {0, 0, 0, 2, 3, 0});
    const double inter = interset(three, ClusterSet({0, 0, 1}, 2), 0, 1);
    const FeatureMatrix pair(2, 2, {0, 0, 3, 4});
    const double intra = intraset(pair, ClusterSet({0, 0}, 1), 0);
    const FeatureMatrix four(4, 2, {0, 0, 0, 2, 3, 0, 3, 2});
    const double comb = combined(four, ClusterSet({0, 0, 1, 1}, 2));
    const bool pass = inter == 11.0 && intra == 25.0 && comb == 8.0 / 22.0;
    return {pass, "interset " + fmt(inter) + ", intraset " + fmt(intra) + ", combined " + fmt(comb) + " (8/22)"};
}

struct Blobs {
    FeatureMatrix m;
    std::vector<std::size_t> labels;
};

// Six unit-variance classes in 56 dimensions; centre k sits at spread * e_k,
// so any two centres are spread * sqrt(2) = 10 sigma apart.
Blobs six_blobs(std::uint64_t seed) {
    const std::size_t classes = 6, per_class = 10, dims = 56;
    const double spread = 10.0 / std::sqrt(2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Blobs b;
    std::vector<double> values;
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            for (std::size_t d = 0; d < dims; ++d) values.push_back(gauss(rng) + (d == c ? spread : 0.0));
            b.labels.push_back(c);
        }
    }
    b.m = FeatureMatrix(classes * per_class, dims, std::move(values));
    return b;
}

double rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::size_t agree = 0, pairs = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            agree += (a[i] == a[j]) == (b[i] == b[j]);
            ++pairs;
        }
    }
    return double(agree) / double(pairs);
}

Outcome lvq_blobs() {
    std::size_t perfect = 0;
    std::string accuracies;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Blobs b = six_blobs(seed);
        LvqConfig cfg;
        cfg.seed = seed;
        const PrototypeSet p = lvq_train(b.m, b.labels, cfg);
        std::vector<std::size_t> predicted;
        for (std::size_t i = 0; i < b.m.rows(); ++i) predicted.push_back(lvq_classify(p, b.m.row(i)));
        const ConfusionMatrix cm = confusion_matrix(b.labels, predicted, {"1", "2", "3", "4", "5", "6"});
        if (cm.trace() == cm.total()) ++perfect;
        accuracies += (accuracies.empty() ? "" : " ") + fmt(double(cm.trace()) / double(cm.total()));
    }
    return {perfect == 5, "accuracy per seed: " + accuracies};
}

Outcome sa_blobs() {
    std::size_t good = 0;
    bool traces_ok = true, occupied = true;
    std::size_t truth_worse = 0;
    std::string scores;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Blobs b = six_blobs(seed);
        SaConfig cfg;
        cfg.clusters = 6;
        cfg.seed = seed;
        const SaResult r = sa_cluster(b.m, cfg);
        const double ri = rand_index(b.labels, r.clusters.assignment);
        if (ri >= 0.95) ++good;
        for (std::size_t i = 1; i < r.best_trace.size(); ++i) {
            if (r.best_trace[i] > r.best_trace[i - 1]) traces_ok = false;
        }
        if (r.clusters.has_empty_cluster()) occupied = false;
        if (partition_energy(b.m, ClusterSet(b.labels, 6)) > r.best_energy) ++truth_worse;
        scores += (scores.empty() ? "" : " ") + fmt(ri);
    }
    return {good >= 9 && traces_ok && occupied,
            std::to_string(good) + "/10 seeds with Rand index >= 0.95 [" + scores + "]" +
                (traces_ok ? ", best-energy traces non-increasing" : ", TRACE INCREASED") +
                (occupied ? ", no empty clusters" : ", EMPTY CLUSTER") + "; true partition has higher energy than the result on " +
                std::to_string(truth_worse) + "/10 seeds"};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("marble_acceptance_" + name);
    fs::remove_all(dir);
    return dir;
}

Outcome subset_ordering() {
    const PipelineConfig cfg;
    const fs::path dir = scratch("table1");
    const CorpusManifest corpus = synth(cfg.synth, dir.string());
    const FeatureTables tables = featurize(corpus, cfg);
    const FeatureSources sources{std::nullopt, tables.mf};
    const QualityReport report = evaluate(sources, corpus, {FeatureSubsetId::MF_B, FeatureSubsetId::MF_C},
                                          {LabelKind::Colour, LabelKind::Vein}, cfg);
    fs::remove_all(dir);
    // Rows come out per label set, then per subset.
    const double colour_b = report.rows[0].combined, colour_c = report.rows[1].combined;
    const double vein_b = report.rows[2].combined, vein_c = report.rows[3].combined;
    const bool colour_ok = colour_b < colour_c, vein_ok = vein_c < vein_b;
    return {colour_ok && vein_ok, std::to_string(corpus.entries.size()) + " images; colour labels: MF_B " +
                                      fmt(colour_b) + (colour_ok ? " < " : " >= ") + "MF_C " + fmt(colour_c) +
                                      "; vein labels: MF_C " + fmt(vein_c) + (vein_ok ? " < " : " >= ") + "MF_B " +
                                      fmt(vein_b)};
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Synth, featurize, evaluate and both clusterings into `dir`; returns the artefact paths.
std::vector<fs::path> full_run(const fs::path& dir) {
    PipelineConfig cfg;
    cfg.set_seed(7);
    const CorpusManifest corpus = synth(cfg.synth, (dir / "corpus").string());
    const FeatureTables tables = featurize(corpus, cfg);
    std::vector<fs::path> files{dir / "corpus" / "manifest.csv", dir / "hf.csv", dir / "mf.csv", dir / "quality.csv"};
    write_text_file(files[1].string(), feature_csv(tables.hf));
    write_text_file(files[2].string(), feature_csv(tables.mf));

    // Analysis reads the persisted tables back, as the command-line flow does.
    const FeatureSources sources{read_feature_csv(files[1].string()), read_feature_csv(files[2].string())};
    const QualityReport report =
        evaluate(sources, corpus, default_subsets(cfg), {LabelKind::Colour, LabelKind::Vein}, cfg);
    write_text_file(files[3].string(), report.to_table());
    const auto names = class_labels(corpus, LabelKind::Colour).names;
    for (Algorithm a : {Algorithm::Lvq, Algorithm::Sa}) {
        const ClusterOutcome out = run_clustering(sources, corpus, a, FeatureSubsetId::MF_B, LabelKind::Colour, cfg);
        const std::string tag = a == Algorithm::Lvq ? "lvq" : "sa";
        files.push_back(dir / (tag + "_assignments.csv"));
        write_text_file(files.back().string(), out.assignments_csv(names));
        files.push_back(dir / (tag + "_confusion.csv"));
        write_text_file(files.back().string(), out.confusion.to_table());
    }
    for (const auto& e : corpus.entries) files.push_back(e.resolved_path);
    return files;
}

Outcome determinism() {
    const fs::path a = scratch("run_a"), b = scratch("run_b");
    const auto files_a = full_run(a);
    const auto files_b = full_run(b);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < files_a.size(); ++i) {
        if (read_bytes(files_a[i]) != read_bytes(files_b[i])) ++differing;
    }
    fs::remove_all(a);
    fs::remove_all(b);
    return {differing == 0 && files_a.size() == files_b.size(),
            std::to_string(files_a.size()) + " artefacts compared, " + std::to_string(differing) + " differ"};
}

Outcome granulometry_spot() {
    bool pass = true;
    std::string detail;
    for (std::size_t k = 1; k <= 3; ++k) {
        Plane spot(25, 25, 0);
        const std::size_t cx = 12, cy = 12;
        const auto se = make_hexagon(k);
        for (const Offset& o : se.offsets(cy % 2 == 1)) {
            spot.at(cx + o.dx, cy + o.dy) = 200;
        }
        const std::uint64_t at_k = volume(open(spot, k)), beyond = volume(open(spot, k + 1));
        if (at_k != volume(spot) || beyond != 0) pass = false;
        detail += (detail.empty() ? "" : "; ") + std::string("k=") + std::to_string(k) + ": volume " +
                  std::to_string(volume(spot)) + " -> " + std::to_string(at_k) + " at r=k, " + std::to_string(beyond) +
                  " at r=k+1";
    }
    return {pass, detail};
}

struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "feature counts", feature_counts},
        {2, "morphology axioms", morphology_axioms},
        {3, "octils match sort oracle", octil_oracle},
        {4, "quadtree tiling", quadtree_tiling},
        {5, "quality identities", quality_identities},
        {6, "quality hand oracles", quality_oracles},
        {7, "LVQ on separated blobs", lvq_blobs},
        {8, "SA on separated blobs", sa_blobs},
        {9, "feature subset ordering on synthetic corpus", subset_ordering},
        {10, "end-to-end determinism", determinism},
        {11, "opening removes spots larger than the element", granulometry_spot},
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.number) == selected.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %s  %s: %s (%.1f s)\n", c.number, out.pass ? "PASS" : "FAIL", c.name,
                    out.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
