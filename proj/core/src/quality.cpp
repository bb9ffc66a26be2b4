#include <marble/quality.hpp>
#include <marble/table.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace marble {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                             std::vector<std::string> row_ids, std::vector<std::string> col_names)
    : rows_(rows), cols_(cols), values_(std::move(values)), row_ids_(std::move(row_ids)),
      col_names_(std::move(col_names)) {
    if (values_.size() != rows_ * cols_) throw std::invalid_argument("FeatureMatrix: value count mismatch");
    if (!row_ids_.empty()) {
        if (row_ids_.size() != rows_) throw std::invalid_argument("FeatureMatrix: row id count mismatch");
        std::unordered_set<std::string> seen;
        for (const auto& id : row_ids_) {
            if (!seen.insert(id).second) throw std::invalid_argument("FeatureMatrix: duplicate row id " + id);
        }
    }
    if (!col_names_.empty() && col_names_.size() != cols_) {
        throw std::invalid_argument("FeatureMatrix: column name count mismatch");
    }
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::size_t> columns) const {
    std::vector<double> values;
    values.reserve(rows_ * columns.size());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c : columns) values.push_back(at(r, c));
    }
    std::vector<std::string> names;
    if (!col_names_.empty()) {
        for (std::size_t c : columns) names.push_back(col_names_.at(c));
    }
    return FeatureMatrix(rows_, columns.size(), std::move(values), row_ids_, std::move(names));
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
    std::vector<double> values;
    values.reserve(rows.size() * cols_);
    std::vector<std::string> ids;
    for (std::size_t r : rows) {
        auto src = row(r);
        values.insert(values.end(), src.begin(), src.end());
        if (!row_ids_.empty()) ids.push_back(row_ids_.at(r));
    }
    return FeatureMatrix(rows.size(), cols_, std::move(values), std::move(ids), col_names_);
}

ClusterSet::ClusterSet(std::vector<std::size_t> a, std::size_t k) : assignment(std::move(a)), cluster_count(k) {
    for (std::size_t c : assignment) {
        if (c >= cluster_count) throw std::out_of_range("ClusterSet: cluster index out of range");
    }
}

std::vector<std::size_t> ClusterSet::members(std::size_t cluster) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == cluster) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> ClusterSet::sizes() const {
    std::vector<std::size_t> out(cluster_count, 0);
    for (std::size_t c : assignment) ++out[c];
    return out;
}

bool ClusterSet::has_empty_cluster() const {
    const auto s = sizes();
    return std::find(s.begin(), s.end(), 0u) != s.end();
}

Normalized znormalize(const FeatureMatrix& m) {
    if (m.rows() < 2) throw std::invalid_argument("znormalize: need at least two rows");
    const double n = static_cast<double>(m.rows());
    std::vector<double> values(m.values());
    Normalized out;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) mean += m.at(r, c);
        mean /= n;
        double var = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) var += (m.at(r, c) - mean) * (m.at(r, c) - mean);
        var /= n;
        // Relative test so columns of large identical values still count as constant.
        const bool degenerate = var <= 1e-24 * std::max(1.0, mean * mean);
        if (degenerate) out.zero_variance_columns.push_back(c);
        const double sd = std::sqrt(var);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            values[r * m.cols() + c] = degenerate ? 0.0 : (m.at(r, c) - mean) / sd;
        }
    }
    out.matrix = FeatureMatrix(m.rows(), m.cols(), std::move(values), m.row_ids(), m.col_names());
    return out;
}

double sq_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("sq_distance: dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sum += d * d;
    }
    return sum;
}

namespace {

void check_assignment(const FeatureMatrix& m, const ClusterSet& set) {
    if (set.assignment.size() != m.rows()) {
        throw std::invalid_argument("cluster assignment does not cover the matrix rows");
    }
}

std::vector<std::vector<std::size_t>> all_members(const ClusterSet& set) {
    std::vector<std::vector<std::size_t>> out(set.cluster_count);
    for (std::size_t i = 0; i < set.assignment.size(); ++i) out[set.assignment[i]].push_back(i);
    return out;
}

double cross_mean(const FeatureMatrix& m, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    double sum = 0.0;
    for (std::size_t i : a) {
        for (std::size_t j : b) sum += sq_distance(m.row(i), m.row(j));
    }
    return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double within_mean(const FeatureMatrix& m, const std::vector<std::size_t>& a) {
    if (a.size() < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (i != j) sum += sq_distance(m.row(a[i]), m.row(a[j]));
        }
    }
    const double n = static_cast<double>(a.size());
    return sum / (n * (n - 1.0));
}

void require_non_empty(const std::vector<std::vector<std::size_t>>& members) {
    for (std::size_t c = 0; c < members.size(); ++c) {
        if (members[c].empty()) throw std::invalid_argument("cluster " + std::to_string(c) + " is empty");
    }
}

}  // namespace

double interset(const FeatureMatrix& m, const ClusterSet& set, std::size_t c1, std::size_t c2) {
    check_assignment(m, set);
    if (c1 == c2) throw std::invalid_argument("interset: clusters must differ");
    // Fixed summation order keeps the measure exactly symmetric.
    if (c1 > c2) std::swap(c1, c2);
    const auto a = set.members(c1);
    const auto b = set.members(c2);
    if (a.empty() || b.empty()) throw std::invalid_argument("interset: empty cluster");
    return cross_mean(m, a, b);
}

double mean_interset(const FeatureMatrix& m, const ClusterSet& set) {
    check_assignment(m, set);
    if (set.cluster_count < 2) throw std::invalid_argument("mean_interset: need at least two clusters");
    const auto members = all_members(set);
    require_non_empty(members);
    double sum = 0.0;
    for (std::size_t c1 = 0; c1 < members.size(); ++c1) {
        for (std::size_t c2 = 0; c2 < members.size(); ++c2) {
            if (c1 != c2) sum += cross_mean(m, members[c1], members[c2]);
        }
    }
    const double k = static_cast<double>(set.cluster_count);
    return sum / (k * (k - 1.0));
}

double intraset(const FeatureMatrix& m, const ClusterSet& set, std::size_t c) {
    check_assignment(m, set);
    const auto a = set.members(c);
    if (a.empty()) throw std::invalid_argument("intraset: empty cluster");
    return within_mean(m, a);
}

double combined(const FeatureMatrix& m, const ClusterSet& set) {
    check_assignment(m, set);
    if (set.cluster_count < 2) throw std::invalid_argument("combined: need at least two clusters");
    const auto members = all_members(set);
    require_non_empty(members);
    double intra_sum = 0.0;
    for (const auto& a : members) intra_sum += within_mean(m, a);
    double inter_sum = 0.0;
    for (std::size_t c1 = 0; c1 < members.size(); ++c1) {
        for (std::size_t c2 = 0; c2 < members.size(); ++c2) {
            if (c1 != c2) inter_sum += cross_mean(m, members[c1], members[c2]);
        }
    }
    if (!(inter_sum > 0.0)) throw DegenerateClusteringError("combined: all clusters coincide");
    return intra_sum / inter_sum;
}

QualityRow quality_row(const FeatureMatrix& m, const ClusterSet& set) {
    check_assignment(m, set);
    if (set.cluster_count < 2) throw std::invalid_argument("quality: need at least two clusters");
    const auto members = all_members(set);
    require_non_empty(members);

    QualityRow row;
    double intra_sum = 0.0;
    for (const auto& a : members) {
        const double v = within_mean(m, a);
        intra_sum += v;
        row.max_intra = std::max(row.max_intra, v);
    }
    double inter_sum = 0.0;
    row.min_inter = std::numeric_limits<double>::infinity();
    for (std::size_t c1 = 0; c1 < members.size(); ++c1) {
        for (std::size_t c2 = 0; c2 < members.size(); ++c2) {
            if (c1 == c2) continue;
            const double v = cross_mean(m, members[c1], members[c2]);
            inter_sum += v;
            row.min_inter = std::min(row.min_inter, v);
        }
    }
    if (!(inter_sum > 0.0)) throw DegenerateClusteringError("quality: all clusters coincide");
    const double k = static_cast<double>(set.cluster_count);
    row.intra = intra_sum / k;
    row.inter = inter_sum / (k * (k - 1.0));
    row.combined = intra_sum / inter_sum;
    return row;
}

QualityReport quality_table(const FeatureMatrix& m, const std::vector<NamedSubset>& subsets,
                            const std::vector<LabelSet>& label_sets) {
    QualityReport report;
    for (const auto& labels : label_sets) {
        for (const auto& subset : subsets) {
            QualityRow row = quality_row(m.select_columns(subset.columns), labels.clusters);
            row.subset = subset.name;
            row.label_set = labels.name;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

std::string QualityReport::to_table() const {
    std::ostringstream out;
    std::string current;
    bool first = true;
    for (const auto& row : rows) {
        if (first || row.label_set != current) {
            out << "# labels=" << row.label_set << '\n';
            out << "subset,intra,inter,combined,max_intra,min_inter\n";
            current = row.label_set;
            first = false;
        }
        out << row.subset << ',' << format_number(row.intra) << ',' << format_number(row.inter) << ','
            << format_number(row.combined) << ',' << format_number(row.max_intra) << ','
            << format_number(row.min_inter) << '\n';
    }
    return out.str();
}

}  // namespace marble
