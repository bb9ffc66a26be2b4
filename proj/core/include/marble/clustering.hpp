#pragma once

#include <marble/quality.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace marble {

struct Prototype {
    std::vector<double> vector;
    std::size_t label = 0;
};

struct PrototypeSet {
    std::vector<Prototype> prototypes;

    /// CSV: class,v1,v2,... one prototype per line (class is 0-based).
    std::string to_table() const;
};

struct LvqConfig {
    double initial_rate = 0.05;
    std::size_t epochs = 40;
    std::uint64_t seed = 0;
    std::size_t prototypes_per_class = 1;
};

/// Nearest prototype by squared Euclidean distance, ties to the lowest index.
std::size_t nearest_prototype(const PrototypeSet& p, std::span<const double> x);

/// One LVQ1 step on the winner: w += rate * (x - w) when the labels agree,
/// w -= rate * (x - w) otherwise.
void lvq1_update(Prototype& winner, std::span<const double> x, std::size_t label, double rate);

/// LVQ1 training. Labels are class indices in [0, C) and every class needs
/// a sample. One prototype per class starts at the class mean; with more
/// per class they start at seeded random class samples. Each epoch visits
/// the samples in a seeded shuffled order and the rate decays linearly to 0.
PrototypeSet lvq_train(const FeatureMatrix& m, std::span<const std::size_t> labels, const LvqConfig& cfg);

std::size_t lvq_classify(const PrototypeSet& p, std::span<const double> x);

struct SaConfig {
    std::size_t clusters = 2;
    /// <= 0 selects the standard deviation of 100 random-move energy probes.
    double initial_temperature = 0.0;
    double cooling_factor = 0.95;
    /// 0 selects 50 * rows.
    std::size_t moves_per_temperature = 0;
    /// <= 0 selects initial_temperature * 1e-4.
    double final_temperature = 0.0;
    std::uint64_t seed = 0;
};

struct SaResult {
    ClusterSet clusters;
    double best_energy = 0;
    double initial_energy = 0;
    /// Best energy seen so far, recorded at the end of every temperature level.
    std::vector<double> best_trace;
    double initial_temperature = 0;
    std::size_t temperature_levels = 0;
    std::size_t accepted_moves = 0;
};

/// Simulated-annealing partition of the rows into cfg.clusters non-empty
/// clusters, minimising the sum of per-cluster intraset distances.
/// Proposals move one random row to a different random cluster and are
/// rejected outright when they would empty a cluster.
SaResult sa_cluster(const FeatureMatrix& m, const SaConfig& cfg);

/// Sum of intraset distances, the annealing energy.
double partition_energy(const FeatureMatrix& m, const ClusterSet& set);

class ConfusionMatrix {
public:
    ConfusionMatrix(std::vector<std::string> row_names, std::vector<std::string> col_names);

    std::size_t rows() const noexcept { return row_names_.size(); }
    std::size_t cols() const noexcept { return col_names_.size(); }
    std::size_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth * cols() + predicted]; }
    void add(std::size_t truth, std::size_t predicted);

    std::size_t total() const;
    std::size_t row_sum(std::size_t truth) const;
    std::size_t trace() const;

    /// Integer grid with a header row and a leading class-name column.
    std::string to_table() const;

private:
    std::vector<std::string> row_names_;
    std::vector<std::string> col_names_;
    std::vector<std::size_t> counts_;
};

/// counts[t][p] = number of samples with truth t and prediction p.
ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                 const std::vector<std::string>& class_names,
                                 std::vector<std::string> predicted_names = {});

/// Cluster -> class by majority vote of the truth labels inside each
/// cluster, ties to the lower class index. Empty clusters map to class 0.
std::vector<std::size_t> majority_mapping(std::span<const std::size_t> truth, const ClusterSet& clusters,
                                          std::size_t class_count);

}  // namespace marble
