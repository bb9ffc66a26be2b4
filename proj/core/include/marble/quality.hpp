#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace marble {

/// Samples x features, row-major.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                  std::vector<std::string> row_ids = {}, std::vector<std::string> col_names = {});

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }
    const std::vector<std::string>& col_names() const noexcept { return col_names_; }

    /// Projection onto the given 0-based columns, order preserved.
    FeatureMatrix select_columns(std::span<const std::size_t> columns) const;
    /// Subset of rows, order preserved.
    FeatureMatrix select_rows(std::span<const std::size_t> rows) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
    std::vector<std::string> row_ids_;
    std::vector<std::string> col_names_;
};

/// Row i of the matrix belongs to cluster assignment[i].
struct ClusterSet {
    std::vector<std::size_t> assignment;
    std::size_t cluster_count = 0;

    ClusterSet() = default;
    ClusterSet(std::vector<std::size_t> assignment, std::size_t cluster_count);

    std::vector<std::size_t> members(std::size_t cluster) const;
    std::vector<std::size_t> sizes() const;
    bool has_empty_cluster() const;
};

class DegenerateClusteringError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Normalized {
    FeatureMatrix matrix;
    /// Columns that had zero variance and were mapped to all zeros.
    std::vector<std::size_t> zero_variance_columns;
};

/// Zero mean, unit population variance per column. Requires >= 2 rows.
Normalized znormalize(const FeatureMatrix& m);

double sq_distance(std::span<const double> x, std::span<const double> y);

/// Mean squared distance over the cross product of two clusters.
double interset(const FeatureMatrix& m, const ClusterSet& set, std::size_t c1, std::size_t c2);

/// Average of interset over ordered pairs of distinct clusters.
double mean_interset(const FeatureMatrix& m, const ClusterSet& set);

/// Mean squared distance over ordered pairs of distinct members; 0 for a
/// singleton. This is the within-cluster counterpart of interset().
double intraset(const FeatureMatrix& m, const ClusterSet& set, std::size_t c);

/// Sum of intraset over clusters divided by the sum of interset over
/// ordered pairs of distinct clusters. Lower is better.
double combined(const FeatureMatrix& m, const ClusterSet& set);

struct QualityRow {
    std::string subset;
    std::string label_set;
    double intra = 0;      ///< mean of per-cluster intraset
    double inter = 0;      ///< mean_interset
    double combined = 0;
    double max_intra = 0;  ///< largest per-cluster intraset
    double min_inter = 0;  ///< smallest pairwise interset
};

struct QualityReport {
    std::vector<QualityRow> rows;

    /// One block per label set: a "# labels=<name>" line, a header line,
    /// then subset,intra,inter,combined,max_intra,min_inter rows.
    std::string to_table() const;
};

struct NamedSubset {
    std::string name;
    std::vector<std::size_t> columns;  ///< 0-based
};

struct LabelSet {
    std::string name;
    ClusterSet clusters;
};

QualityRow quality_row(const FeatureMatrix& m, const ClusterSet& set);

QualityReport quality_table(const FeatureMatrix& m, const std::vector<NamedSubset>& subsets,
                            const std::vector<LabelSet>& label_sets);

}  // namespace marble
