#include <doctest.h>

#include <marble/quality.hpp>

#include <cmath>
#include <numeric>
#include <random>

using namespace marble;

namespace {

FeatureMatrix points(std::initializer_list<std::pair<double, double>> xy) {
    std::vector<double> values;
    for (auto [x, y] : xy) {
        values.push_back(x);
        values.push_back(y);
    }
    return FeatureMatrix(xy.size(), 2, std::move(values));
}

struct Instance {
    FeatureMatrix m;
    ClusterSet set;
};

Instance random_instance(std::mt19937_64& rng) {
    const std::size_t rows = 6 + rng() % 20, cols = 1 + rng() % 8, k = 2 + rng() % 4;
    std::normal_distribution<double> gauss(0.0, 3.0);
    std::vector<double> values(rows * cols);
    for (auto& v : values) v = gauss(rng);
    std::vector<std::size_t> assignment(rows);
    for (std::size_t i = 0; i < rows; ++i) assignment[i] = i < k ? i : rng() % k;
    return {FeatureMatrix(rows, cols, std::move(values)), ClusterSet(std::move(assignment), k)};
}

}  // namespace

TEST_SUITE("quality") {

TEST_CASE("feature matrix validation") {
    CHECK_THROWS(FeatureMatrix(2, 2, {1, 2, 3}));
    CHECK_THROWS(FeatureMatrix(1, 1, {1}, {"a", "b"}));
    CHECK_THROWS(FeatureMatrix(2, 1, {1, 2}, {"a", "a"}));
    const FeatureMatrix m(2, 3, {1, 2, 3, 4, 5, 6}, {"x", "y"}, {"a", "b", "c"});
    const std::size_t cols[] = {2, 0};
    const FeatureMatrix s = m.select_columns(cols);
    CHECK(s.values() == std::vector<double>{3, 1, 6, 4});
    CHECK(s.col_names() == std::vector<std::string>{"c", "a"});
    const std::size_t rows[] = {1};
    CHECK(m.select_rows(rows).row_ids() == std::vector<std::string>{"y"});
}

TEST_CASE("znormalize examples") {
    const Normalized a = znormalize(FeatureMatrix(2, 1, {-1, 1}));
    CHECK(a.matrix.values() == std::vector<double>{-1, 1});
    const Normalized b = znormalize(FeatureMatrix(2, 1, {0, 10}));
    CHECK(b.matrix.values() == std::vector<double>{-1, 1});
    const Normalized c = znormalize(FeatureMatrix(3, 2, {4, 1, 4, 2, 4, 3}));
    CHECK(c.zero_variance_columns == std::vector<std::size_t>{0});
    CHECK(c.matrix.at(0, 0) == 0);
    CHECK(c.matrix.at(2, 0) == 0);
    CHECK_THROWS(znormalize(FeatureMatrix(1, 1, {3})));
}

TEST_CASE("sq_distance") {
    const std::vector<double> x{0, 0}, y{3, 4}, y2{6, 8};
    CHECK(sq_distance(x, x) == 0);
    CHECK(sq_distance(x, y) == 25);
    CHECK(sq_distance(x, y2) == 100);
}

TEST_CASE("interset and intraset oracles") {
    const FeatureMatrix m = points({{0, 0}, {0, 2}, {3, 0}});
    const ClusterSet set({0, 0, 1}, 2);
    CHECK(interset(m, set, 0, 1) == 11);
    CHECK(interset(m, set, 1, 0) == 11);

    const FeatureMatrix pair = points({{0, 0}, {3, 4}, {9, 9}});
    const ClusterSet split({0, 0, 1}, 2);
    CHECK(intraset(pair, split, 0) == 25);
    CHECK(intraset(pair, split, 1) == 0);

    const FeatureMatrix dup = points({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
    const ClusterSet dup_set({0, 0, 1, 1}, 2);
    CHECK(interset(dup, dup_set, 0, 1) == 0);
    CHECK(intraset(dup, dup_set, 0) == 0);
    CHECK_THROWS_AS(combined(dup, dup_set), DegenerateClusteringError);
}

TEST_CASE("mean interset oracles") {
    // Three points at mutual squared distance 4.
    const double s = std::sqrt(2.0);
    const FeatureMatrix tri(3, 3, {s, 0, 0, 0, s, 0, 0, 0, s});
    CHECK(mean_interset(tri, ClusterSet({0, 1, 2}, 3)) == doctest::Approx(4.0));

    const FeatureMatrix m = points({{0, 0}, {0, 2}, {3, 0}, {3, 2}});
    const ClusterSet set({0, 0, 1, 1}, 2);
    CHECK(mean_interset(m, set) == interset(m, set, 0, 1));
    CHECK(mean_interset(m, ClusterSet({1, 1, 0, 0}, 2)) == mean_interset(m, set));
}

TEST_CASE("combined oracles") {
    const FeatureMatrix m = points({{0, 0}, {0, 2}, {3, 0}, {3, 2}});
    CHECK(combined(m, ClusterSet({0, 0, 1, 1}, 2)) == doctest::Approx(8.0 / 22.0).epsilon(1e-15));
    CHECK(combined(m, ClusterSet({0, 1, 2, 3}, 4)) == 0);
    CHECK_THROWS(combined(m, ClusterSet({0, 0, 0, 0}, 2)));
}

TEST_CASE("quality identities on random instances") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const auto [m, set] = random_instance(rng);
        double intra = 0, inter = 0;
        for (std::size_t c = 0; c < set.cluster_count; ++c) {
            intra += intraset(m, set, c);
            for (std::size_t d = 0; d < set.cluster_count; ++d) {
                if (c == d) continue;
                inter += interset(m, set, c, d);
                CHECK(interset(m, set, c, d) == interset(m, set, d, c));
            }
        }
        CHECK(std::abs(combined(m, set) - intra / inter) <= 1e-12 * (intra / inter));

        std::vector<double> scaled = m.values();
        for (double& v : scaled) v *= 3.5;
        const FeatureMatrix m2(m.rows(), m.cols(), scaled);
        CHECK(std::abs(combined(m2, set) / combined(m, set) - 1) < 1e-9);
        CHECK(std::abs(intraset(m2, set, 0) - 12.25 * intraset(m, set, 0)) <= 1e-9 * (1 + intraset(m2, set, 0)));

        const QualityRow row = quality_row(m, set);
        CHECK(row.combined == doctest::Approx(combined(m, set)).epsilon(1e-12));
        CHECK(row.inter == doctest::Approx(mean_interset(m, set)).epsilon(1e-12));
        CHECK(row.max_intra >= row.intra);
    }
}

TEST_CASE("measures are invariant under row permutation") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto [m, set] = random_instance(rng);
        std::vector<std::size_t> perm(m.rows());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::size_t> assignment;
        for (std::size_t i : perm) assignment.push_back(set.assignment[i]);
        const FeatureMatrix shuffled = m.select_rows(perm);
        CHECK(combined(shuffled, ClusterSet(assignment, set.cluster_count)) ==
              doctest::Approx(combined(m, set)).epsilon(1e-12));
    }
}

TEST_CASE("znormalize moments on random matrices") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> gauss(50.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 2 + rng() % 30, cols = 1 + rng() % 6;
        std::vector<double> values(rows * cols);
        for (auto& v : values) v = gauss(rng);
        const FeatureMatrix z = znormalize(FeatureMatrix(rows, cols, values)).matrix;
        for (std::size_t c = 0; c < cols; ++c) {
            double mean = 0, var = 0;
            for (std::size_t r = 0; r < rows; ++r) mean += z.at(r, c);
            mean /= double(rows);
            for (std::size_t r = 0; r < rows; ++r) var += (z.at(r, c) - mean) * (z.at(r, c) - mean);
            var /= double(rows);
            CHECK(std::abs(mean) < 1e-9);
            CHECK(std::abs(var - 1) < 1e-9);
        }
    }
}

TEST_CASE("quality table layout") {
    const FeatureMatrix m = points({{0, 0}, {0, 2}, {3, 0}, {3, 2}});
    const QualityReport report = quality_table(
        m, {{"x", {0}}, {"both", {0, 1}}},
        {{"colour", ClusterSet({0, 0, 1, 1}, 2)}, {"vein", ClusterSet({0, 1, 0, 1}, 2)}});
    REQUIRE(report.rows.size() == 4);
    const std::string table = report.to_table();
    CHECK(table.find("# labels=colour\nsubset,intra,inter,combined,max_intra,min_inter\n") == 0);
    CHECK(table.find("# labels=vein") != std::string::npos);
    CHECK(std::count(table.begin(), table.end(), '\n') == 8);
    CHECK(report.rows[1].combined == doctest::Approx(8.0 / 22.0));
}

}  // TEST_SUITE
