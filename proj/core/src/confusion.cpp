#include <marble/clustering.hpp>

#include <numeric>
#include <sstream>

namespace marble {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> row_names, std::vector<std::string> col_names)
    : row_names_(std::move(row_names)), col_names_(std::move(col_names)),
      counts_(row_names_.size() * col_names_.size(), 0) {}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted) {
    if (truth >= rows() || predicted >= cols()) throw std::out_of_range("confusion matrix index out of range");
    ++counts_[truth * cols() + predicted];
}

std::size_t ConfusionMatrix::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0}); }

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
    std::size_t s = 0;
    for (std::size_t c = 0; c < cols(); ++c) s += at(truth, c);
    return s;
}

std::size_t ConfusionMatrix::trace() const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < std::min(rows(), cols()); ++i) s += at(i, i);
    return s;
}

std::string ConfusionMatrix::to_table() const {
    std::ostringstream out;
    out << "truth\\predicted";
    for (const auto& name : col_names_) out << ',' << name;
    out << '\n';
    for (std::size_t r = 0; r < rows(); ++r) {
        out << row_names_[r];
        for (std::size_t c = 0; c < cols(); ++c) out << ',' << at(r, c);
        out << '\n';
    }
    return out.str();
}

ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                 const std::vector<std::string>& class_names,
                                 std::vector<std::string> predicted_names) {
    if (truth.size() != predicted.size()) throw std::invalid_argument("confusion_matrix: length mismatch");
    if (predicted_names.empty()) predicted_names = class_names;
    ConfusionMatrix cm(class_names, std::move(predicted_names));
    for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
    return cm;
}

std::vector<std::size_t> majority_mapping(std::span<const std::size_t> truth, const ClusterSet& clusters,
                                          std::size_t class_count) {
    if (truth.size() != clusters.assignment.size()) throw std::invalid_argument("majority_mapping: length mismatch");
    std::vector<std::vector<std::size_t>> votes(clusters.cluster_count, std::vector<std::size_t>(class_count, 0));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= class_count) throw std::out_of_range("majority_mapping: class out of range");
        ++votes[clusters.assignment[i]][truth[i]];
    }
    std::vector<std::size_t> mapping(clusters.cluster_count, 0);
    for (std::size_t c = 0; c < clusters.cluster_count; ++c) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < class_count; ++k) {
            if (votes[c][k] > votes[c][best]) best = k;
        }
        mapping[c] = best;
    }
    return mapping;
}

}  // namespace marble
