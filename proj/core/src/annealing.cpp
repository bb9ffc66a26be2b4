#include <marble/clustering.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace marble {

double partition_energy(const FeatureMatrix& m, const ClusterSet& set) {
    double sum = 0.0;
    for (std::size_t c = 0; c < set.cluster_count; ++c) {
        if (!set.members(c).empty()) sum += intraset(m, set, c);
    }
    return sum;
}

namespace {

// Per-cluster sufficient statistics. Mean pairwise squared distance over
// ordered pairs of n points equals 2 * (sum|x|^2 - |sum x|^2 / n) / (n - 1).
class AnnealingState {
public:
    AnnealingState(const FeatureMatrix& m, std::vector<std::size_t> assignment, std::size_t k)
        : m_(m), assignment_(std::move(assignment)), count_(k), sum_(k, std::vector<double>(m.cols())),
          norm_(k), row_norm_(m.rows()) {
        for (std::size_t i = 0; i < m.rows(); ++i) row_norm_[i] = dot(m.row(i), m.row(i));
        rebuild();
    }

    void rebuild() {
        std::fill(count_.begin(), count_.end(), 0);
        std::fill(norm_.begin(), norm_.end(), 0.0);
        for (auto& s : sum_) std::fill(s.begin(), s.end(), 0.0);
        for (std::size_t i = 0; i < assignment_.size(); ++i) add(i, assignment_[i], 1.0);
        energy_ = 0.0;
        for (std::size_t c = 0; c < count_.size(); ++c) energy_ += intra(c);
    }

    double energy() const { return energy_; }
    std::size_t cluster_of(std::size_t row) const { return assignment_[row]; }
    std::size_t count(std::size_t c) const { return count_[c]; }
    const std::vector<std::size_t>& assignment() const { return assignment_; }

    double delta(std::size_t row, std::size_t to) const {
        const std::size_t from = assignment_[row];
        const auto x = m_.row(row);
        const double xx = row_norm_[row];
        const double sx_from = dot(sum_[from], x);
        const double sx_to = dot(sum_[to], x);
        const double from_after = scatter(count_[from] - 1, norm_[from] - xx, sq_norm(from) - 2.0 * sx_from + xx);
        const double to_after = scatter(count_[to] + 1, norm_[to] + xx, sq_norm(to) + 2.0 * sx_to + xx);
        return from_after + to_after - intra(from) - intra(to);
    }

    void move(std::size_t row, std::size_t to, double delta_energy) {
        const std::size_t from = assignment_[row];
        add(row, from, -1.0);
        add(row, to, 1.0);
        assignment_[row] = to;
        energy_ += delta_energy;
    }

private:
    static double dot(std::span<const double> a, std::span<const double> b) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
        return s;
    }

    static double scatter(std::size_t n, double norm_sum, double sum_sq_norm) {
        if (n < 2) return 0.0;
        const double nn = static_cast<double>(n);
        return 2.0 * std::max(0.0, norm_sum - sum_sq_norm / nn) / (nn - 1.0);
    }

    double sq_norm(std::size_t c) const { return dot(sum_[c], sum_[c]); }
    double intra(std::size_t c) const { return scatter(count_[c], norm_[c], sq_norm(c)); }

    void add(std::size_t row, std::size_t c, double sign) {
        const auto x = m_.row(row);
        auto& s = sum_[c];
        for (std::size_t k = 0; k < x.size(); ++k) s[k] += sign * x[k];
        norm_[c] += sign * row_norm_[row];
        count_[c] = sign > 0 ? count_[c] + 1 : count_[c] - 1;
    }

    const FeatureMatrix& m_;
    std::vector<std::size_t> assignment_;
    std::vector<std::size_t> count_;
    std::vector<std::vector<double>> sum_;
    std::vector<double> norm_;
    std::vector<double> row_norm_;
    double energy_ = 0.0;
};

std::vector<std::size_t> initial_assignment(std::size_t rows, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> assignment(rows);
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    for (std::size_t i = 0; i < rows; ++i) assignment[order[i]] = i < k ? i : pick(rng);
    return assignment;
}

}  // namespace

SaResult sa_cluster(const FeatureMatrix& m, const SaConfig& cfg) {
    const std::size_t k = cfg.clusters;
    if (k < 2) throw std::invalid_argument("sa_cluster: need at least two clusters");
    if (k > m.rows()) throw std::invalid_argument("sa_cluster: more clusters than rows");
    if (!(cfg.cooling_factor > 0.0 && cfg.cooling_factor < 1.0)) {
        throw std::invalid_argument("sa_cluster: cooling_factor must lie in (0, 1)");
    }

    std::mt19937_64 rng(cfg.seed);
    const auto initial = initial_assignment(m.rows(), k, rng);
    AnnealingState state(m, initial, k);

    std::uniform_int_distribution<std::size_t> pick_row(0, m.rows() - 1);
    std::uniform_int_distribution<std::size_t> pick_other(0, k - 2);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    auto propose = [&]() {
        const std::size_t row = pick_row(rng);
        std::size_t to = pick_other(rng);
        if (to >= state.cluster_of(row)) ++to;
        return std::pair{row, to};
    };

    SaResult result;
    result.initial_energy = partition_energy(m, ClusterSet(initial, k));

    double temperature = cfg.initial_temperature;
    if (temperature <= 0.0) {
        std::vector<double> probes;
        for (int i = 0; i < 100; ++i) {
            auto [row, to] = propose();
            probes.push_back(state.delta(row, to));
        }
        const double mean = std::accumulate(probes.begin(), probes.end(), 0.0) / probes.size();
        double var = 0.0;
        for (double p : probes) var += (p - mean) * (p - mean);
        temperature = std::sqrt(var / probes.size());
        if (!(temperature > 0.0)) temperature = 1.0;
    }
    const double final_temperature = cfg.final_temperature > 0.0 ? cfg.final_temperature : temperature * 1e-4;
    if (!(final_temperature < temperature)) {
        throw std::invalid_argument("sa_cluster: final temperature must be below the initial temperature");
    }
    const std::size_t moves = cfg.moves_per_temperature > 0 ? cfg.moves_per_temperature : 50 * m.rows();
    result.initial_temperature = temperature;

    std::vector<std::size_t> best = state.assignment();
    double best_energy = state.energy();

    while (temperature >= final_temperature) {
        for (std::size_t step = 0; step < moves; ++step) {
            auto [row, to] = propose();
            if (state.count(state.cluster_of(row)) == 1) continue;  // would empty a cluster
            const double d = state.delta(row, to);
            if (d <= 0.0 || uniform(rng) < std::exp(-d / temperature)) {
                state.move(row, to, d);
                ++result.accepted_moves;
                if (state.energy() < best_energy) {
                    best_energy = state.energy();
                    best = state.assignment();
                }
            }
        }
        // Drop accumulated rounding drift once per level.
        state.rebuild();
        result.best_trace.push_back(best_energy);
        ++result.temperature_levels;
        temperature *= cfg.cooling_factor;
    }

    result.clusters = ClusterSet(std::move(best), k);
    result.best_energy = partition_energy(m, result.clusters);
    if (result.best_energy > result.initial_energy) {
        // Improvement below rounding noise; the initial state is the best seen.
        result.clusters = ClusterSet(initial, k);
        result.best_energy = result.initial_energy;
    }
    return result;
}

}  // namespace marble
