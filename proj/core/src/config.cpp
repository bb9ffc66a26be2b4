#include <marble/config.hpp>
#include <marble/table.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace marble {

namespace {

template <typename T>
T parse_value(std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw std::invalid_argument("invalid number '" + std::string(text) + "'");
    return value;
}

Channel parse_channel(std::string_view text) {
    for (Channel c : {Channel::R, Channel::G, Channel::B, Channel::H, Channel::S, Channel::V}) {
        if (text == channel_name(c)) return c;
    }
    throw std::invalid_argument("unknown channel '" + std::string(text) + "'");
}

ColorMetric parse_metric(std::string_view text) {
    if (text == "euclidean") return ColorMetric::Euclidean;
    if (text == "manhattan") return ColorMetric::Manhattan;
    throw std::invalid_argument("unknown metric '" + std::string(text) + "'");
}

std::string join_indices(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

using Setter = std::function<void(PipelineConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"seed", [](PipelineConfig& c, std::string_view v) { c.set_seed(parse_value<std::uint64_t>(v)); }},
        {"quadtree.min_area",
         [](PipelineConfig& c, std::string_view v) {
             c.quadtree.min_area = parse_value<std::size_t>(v);
             if (c.quadtree.min_area < 1) throw std::invalid_argument("min_area must be >= 1");
         }},
        {"quadtree.alpha",
         [](PipelineConfig& c, std::string_view v) {
             c.quadtree.alpha = parse_value<double>(v);
             if (!(c.quadtree.alpha > 0 && c.quadtree.alpha < 1)) throw std::invalid_argument("alpha must lie in (0, 1)");
         }},
        {"merge.metric", [](PipelineConfig& c, std::string_view v) { c.merge.metric = parse_metric(v); }},
        {"merge.threshold",
         [](PipelineConfig& c, std::string_view v) {
             c.merge.threshold = parse_value<double>(v);
             if (c.merge.threshold < 0) throw std::invalid_argument("threshold must be >= 0");
         }},
        {"morphology.max_size",
         [](PipelineConfig& c, std::string_view v) {
             c.morphology.max_size = parse_value<std::size_t>(v);
             if (c.morphology.max_size < 1) throw std::invalid_argument("max_size must be >= 1");
         }},
        {"morphology.channel", [](PipelineConfig& c, std::string_view v) { c.morphology.analysis_channel = parse_channel(v); }},
        {"subsets.HF_B", [](PipelineConfig& c, std::string_view v) { c.subsets[FeatureSubsetId::HF_B] = parse_index_list(v); }},
        {"subsets.HF_C", [](PipelineConfig& c, std::string_view v) { c.subsets[FeatureSubsetId::HF_C] = parse_index_list(v); }},
        {"lvq.initial_rate",
         [](PipelineConfig& c, std::string_view v) {
             c.lvq.initial_rate = parse_value<double>(v);
             if (!(c.lvq.initial_rate >= 0 && c.lvq.initial_rate < 1)) throw std::invalid_argument("initial_rate must lie in [0, 1)");
         }},
        {"lvq.epochs", [](PipelineConfig& c, std::string_view v) { c.lvq.epochs = parse_value<std::size_t>(v); }},
        {"lvq.prototypes_per_class",
         [](PipelineConfig& c, std::string_view v) {
             c.lvq.prototypes_per_class = parse_value<std::size_t>(v);
             if (c.lvq.prototypes_per_class < 1) throw std::invalid_argument("prototypes_per_class must be >= 1");
         }},
        {"sa.initial_temperature", [](PipelineConfig& c, std::string_view v) { c.sa.initial_temperature = parse_value<double>(v); }},
        {"sa.cooling_factor",
         [](PipelineConfig& c, std::string_view v) {
             c.sa.cooling_factor = parse_value<double>(v);
             if (!(c.sa.cooling_factor > 0 && c.sa.cooling_factor < 1)) throw std::invalid_argument("cooling_factor must lie in (0, 1)");
         }},
        {"sa.moves_per_temperature", [](PipelineConfig& c, std::string_view v) { c.sa.moves_per_temperature = parse_value<std::size_t>(v); }},
        {"sa.final_temperature", [](PipelineConfig& c, std::string_view v) { c.sa.final_temperature = parse_value<double>(v); }},
        {"synth.image_size",
         [](PipelineConfig& c, std::string_view v) {
             c.synth.image_size = parse_value<std::size_t>(v);
             if (c.synth.image_size < 8) throw std::invalid_argument("image_size must be >= 8");
         }},
        {"synth.noise_sigma",
         [](PipelineConfig& c, std::string_view v) {
             c.synth.noise_sigma = parse_value<double>(v);
             if (c.synth.noise_sigma < 0) throw std::invalid_argument("noise_sigma must be >= 0");
         }},
        {"synth.replicates",
         [](PipelineConfig& c, std::string_view v) {
             c.synth.replicates = parse_value<std::size_t>(v);
             if (c.synth.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
         }},
    };
    return table;
}

}  // namespace

void PipelineConfig::set_seed(std::uint64_t value) {
    seed = value;
    lvq.seed = value;
    sa.seed = value;
    synth.seed = value;
}

std::string PipelineConfig::to_text() const {
    std::ostringstream out;
    out << "seed = " << seed << '\n';
    out << "quadtree.min_area = " << quadtree.min_area << '\n';
    out << "quadtree.alpha = " << format_number(quadtree.alpha) << '\n';
    out << "merge.metric = " << (merge.metric == ColorMetric::Euclidean ? "euclidean" : "manhattan") << '\n';
    out << "merge.threshold = " << format_number(merge.threshold) << '\n';
    out << "morphology.max_size = " << morphology.max_size << '\n';
    out << "morphology.channel = " << channel_name(morphology.analysis_channel) << '\n';
    for (auto id : {FeatureSubsetId::HF_B, FeatureSubsetId::HF_C}) {
        const auto it = subsets.find(id);
        out << "subsets." << to_string(id) << " = " << (it == subsets.end() ? "" : join_indices(it->second)) << '\n';
    }
    out << "lvq.initial_rate = " << format_number(lvq.initial_rate) << '\n';
    out << "lvq.epochs = " << lvq.epochs << '\n';
    out << "lvq.prototypes_per_class = " << lvq.prototypes_per_class << '\n';
    out << "sa.initial_temperature = " << format_number(sa.initial_temperature) << '\n';
    out << "sa.cooling_factor = " << format_number(sa.cooling_factor) << '\n';
    out << "sa.moves_per_temperature = " << sa.moves_per_temperature << '\n';
    out << "sa.final_temperature = " << format_number(sa.final_temperature) << '\n';
    out << "synth.image_size = " << synth.image_size << '\n';
    out << "synth.noise_sigma = " << format_number(synth.noise_sigma) << '\n';
    out << "synth.replicates = " << synth.replicates << '\n';
    return out.str();
}

std::vector<std::size_t> parse_index_list(std::string_view text) {
    std::vector<std::size_t> out;
    text = trim(text);
    if (text.empty()) return out;
    for (const auto& item : split_csv_line(text)) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            out.push_back(parse_value<std::size_t>(item));
            continue;
        }
        const auto first = parse_value<std::size_t>(trim(std::string_view(item).substr(0, dash)));
        const auto last = parse_value<std::size_t>(trim(std::string_view(item).substr(dash + 1)));
        if (last < first) throw std::invalid_argument("descending index range '" + item + "'");
        for (std::size_t i = first; i <= last; ++i) out.push_back(i);
    }
    for (std::size_t i : out) {
        if (i == 0) throw std::invalid_argument("feature indices are 1-based");
    }
    return out;
}

PipelineConfig parse_config(std::string_view text) {
    PipelineConfig cfg;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw DataError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw DataError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        try {
            it->second(cfg, value);
        } catch (const std::exception& e) {
            throw DataError("config line " + std::to_string(line_no) + ": " + key + ": " + e.what());
        }
    }
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw DataError("cannot read config " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace marble
