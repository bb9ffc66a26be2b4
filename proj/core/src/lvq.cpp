#include <marble/clustering.hpp>
#include <marble/table.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace marble {

std::size_t nearest_prototype(const PrototypeSet& p, std::span<const double> x) {
    if (p.prototypes.empty()) throw std::invalid_argument("nearest_prototype: no prototypes");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.prototypes.size(); ++i) {
        const double d = sq_distance(p.prototypes[i].vector, x);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

void lvq1_update(Prototype& winner, std::span<const double> x, std::size_t label, double rate) {
    const double step = winner.label == label ? rate : -rate;
    for (std::size_t k = 0; k < x.size(); ++k) winner.vector[k] += step * (x[k] - winner.vector[k]);
}

PrototypeSet lvq_train(const FeatureMatrix& m, std::span<const std::size_t> labels, const LvqConfig& cfg) {
    if (labels.size() != m.rows()) throw std::invalid_argument("lvq_train: one label per row required");
    if (m.rows() == 0) throw std::invalid_argument("lvq_train: empty training set");
    if (cfg.prototypes_per_class == 0) throw std::invalid_argument("lvq_train: prototypes_per_class must be >= 1");

    const std::size_t classes = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<std::vector<std::size_t>> by_class(classes);
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    for (std::size_t c = 0; c < classes; ++c) {
        if (by_class[c].empty()) throw std::invalid_argument("lvq_train: class " + std::to_string(c) + " has no samples");
    }

    std::mt19937_64 rng(cfg.seed);
    PrototypeSet set;
    for (std::size_t c = 0; c < classes; ++c) {
        const auto& rows = by_class[c];
        if (cfg.prototypes_per_class == 1) {
            Prototype p{std::vector<double>(m.cols(), 0.0), c};
            for (std::size_t r : rows) {
                auto x = m.row(r);
                for (std::size_t k = 0; k < x.size(); ++k) p.vector[k] += x[k];
            }
            for (double& v : p.vector) v /= static_cast<double>(rows.size());
            set.prototypes.push_back(std::move(p));
        } else {
            std::vector<std::size_t> pool = rows;
            std::shuffle(pool.begin(), pool.end(), rng);
            for (std::size_t j = 0; j < cfg.prototypes_per_class; ++j) {
                auto x = m.row(pool[j % pool.size()]);
                set.prototypes.push_back({std::vector<double>(x.begin(), x.end()), c});
            }
        }
    }

    std::vector<std::size_t> order(m.rows());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double rate = cfg.initial_rate * (1.0 - static_cast<double>(epoch) / static_cast<double>(cfg.epochs));
        std::shuffle(order.begin(), order.end(), rng);
        if (rate <= 0.0) continue;
        for (std::size_t i : order) {
            auto x = m.row(i);
            lvq1_update(set.prototypes[nearest_prototype(set, x)], x, labels[i], rate);
        }
    }
    return set;
}

std::size_t lvq_classify(const PrototypeSet& p, std::span<const double> x) {
    if (!p.prototypes.empty() && p.prototypes.front().vector.size() != x.size()) {
        throw std::invalid_argument("lvq_classify: dimension mismatch");
    }
    return p.prototypes[nearest_prototype(p, x)].label;
}

std::string PrototypeSet::to_table() const {
    std::ostringstream out;
    const std::size_t dim = prototypes.empty() ? 0 : prototypes.front().vector.size();
    out << "class";
    for (std::size_t k = 1; k <= dim; ++k) out << ",v" << k;
    out << '\n';
    for (const auto& p : prototypes) {
        out << p.label;
        for (double v : p.vector) out << ',' << format_number(v);
        out << '\n';
    }
    return out.str();
}

}  // namespace marble
