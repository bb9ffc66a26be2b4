// marble: command-line front end for the marble appearance pipeline.
//
//   marble synth     --out corpus/
//   marble featurize --manifest corpus/manifest.csv --out features/
//   marble evaluate  --manifest corpus/manifest.csv --features features/ --out report/
//   marble cluster   --manifest corpus/manifest.csv --features features/ --algorithm lvq --subset MF_B --labels colour --out run/
//   marble render    --image corpus/images/c1v1r1.ppm --out signature/
//
// Exit codes: 0 success, 1 usage, 2 data validation, 3 runtime failure.
// Failures print one JSON line on stderr: {"error": kind, "exit_code": n, "message": text}.

#include <marble/pipeline.hpp>
#include <marble/synth.hpp>
#include <marble/table.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

int report_failure(const char* kind, int code, const std::string& message) {
    nlohmann::json line{{"error", kind}, {"exit_code", code}, {"message", message}};
    std::cerr << line.dump() << std::endl;
    return code;
}

struct CommonOptions {
    std::string config_path;
    std::string manifest_path;
    std::string features_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

marble::PipelineConfig load_effective_config(const CommonOptions& opts) {
    marble::PipelineConfig cfg = opts.config_path.empty() ? marble::PipelineConfig{} : marble::load_config(opts.config_path);
    if (opts.seed) cfg.set_seed(*opts.seed);
    return cfg;
}

void ensure_dir(const std::string& dir) {
    if (dir.empty()) throw UsageError("--out is required");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
}

std::string out_file(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

marble::FeatureSources load_features(const std::string& path) {
    if (path.empty()) throw UsageError("--features is required");
    marble::FeatureSources sources;
    auto assign = [&sources](marble::FeatureMatrix m) {
        if (m.cols() == marble::kHfLength) {
            sources.hf = std::move(m);
        } else {
            sources.mf = std::move(m);
        }
    };
    if (fs::is_directory(path)) {
        for (const char* name : {"hf.csv", "mf.csv"}) {
            const auto file = fs::path(path) / name;
            if (fs::exists(file)) assign(marble::read_feature_csv(file.string()));
        }
        if (!sources.hf && !sources.mf) throw marble::DataError("no hf.csv or mf.csv in " + path);
    } else {
        assign(marble::read_feature_csv(path));
    }
    return sources;
}

std::vector<marble::FeatureSubsetId> parse_subsets(const std::vector<std::string>& names,
                                                   const marble::PipelineConfig& cfg) {
    if (names.empty()) return marble::default_subsets(cfg);
    std::vector<marble::FeatureSubsetId> out;
    for (const auto& name : names) {
        const auto id = marble::parse_subset_id(name);
        if (!id) throw UsageError("unknown subset '" + name + "' (expected HF_A..HF_C or MF_A..MF_C)");
        out.push_back(*id);
    }
    return out;
}

marble::LabelKind parse_labels(const std::string& text) {
    const auto kind = marble::parse_label_kind(text);
    if (!kind) throw UsageError("--labels must be colour or vein");
    return *kind;
}

marble::CorpusManifest load_manifest(const CommonOptions& opts, bool check_files) {
    if (opts.manifest_path.empty()) throw UsageError("--manifest is required");
    return marble::ingest(opts.manifest_path, check_files);
}

// --- subcommands -------------------------------------------------------------

int run_synth(const CommonOptions& opts) {
    const auto cfg = load_effective_config(opts);
    ensure_dir(opts.out_dir);
    const auto manifest = marble::synth(cfg.synth, opts.out_dir);
    marble::write_text_file(out_file(opts.out_dir, "config.txt"), cfg.to_text());
    std::cout << "wrote " << manifest.entries.size() << " images and manifest.csv to " << opts.out_dir << '\n';
    return kOk;
}

int run_ingest(const CommonOptions& opts) {
    const auto manifest = load_manifest(opts, true);
    std::map<std::size_t, std::size_t> colours, veins;
    for (const auto& e : manifest.entries) {
        ++colours[e.colour_class];
        ++veins[e.vein_class];
    }
    std::cout << "entries," << manifest.entries.size() << '\n';
    for (auto [c, n] : colours) std::cout << "colour_" << c << ',' << n << '\n';
    for (auto [v, n] : veins) std::cout << "vein_" << v << ',' << n << '\n';
    return kOk;
}

int run_featurize(const CommonOptions& opts) {
    const auto cfg = load_effective_config(opts);
    const auto manifest = load_manifest(opts, true);
    ensure_dir(opts.out_dir);
    const auto tables = marble::featurize(manifest, cfg);
    marble::write_text_file(out_file(opts.out_dir, "hf.csv"), marble::feature_csv(tables.hf));
    marble::write_text_file(out_file(opts.out_dir, "mf.csv"), marble::feature_csv(tables.mf));
    marble::write_text_file(out_file(opts.out_dir, "config.txt"), cfg.to_text());
    std::cout << "featurized " << manifest.entries.size() << " images: hf.csv (" << tables.hf.cols()
              << " features), mf.csv (" << tables.mf.cols() << " features)\n";
    return kOk;
}

int run_evaluate(const CommonOptions& opts, const std::vector<std::string>& subset_names,
                 const std::vector<std::string>& label_names) {
    const auto cfg = load_effective_config(opts);
    const auto manifest = load_manifest(opts, false);
    const auto sources = load_features(opts.features_path);
    const auto subsets = parse_subsets(subset_names, cfg);
    std::vector<marble::LabelKind> labels;
    for (const auto& l : label_names) labels.push_back(parse_labels(l));
    if (labels.empty()) labels = {marble::LabelKind::Colour, marble::LabelKind::Vein};

    const auto report = marble::evaluate(sources, manifest, subsets, labels, cfg);
    const std::string table = report.to_table();
    ensure_dir(opts.out_dir);
    marble::write_text_file(out_file(opts.out_dir, "quality.csv"), table);
    std::cout << table;
    return kOk;
}

int run_cluster(const CommonOptions& opts, const std::string& algorithm_name, const std::string& subset_name,
                const std::string& label_name, std::optional<std::size_t> colour_filter, bool gallery) {
    const auto cfg = load_effective_config(opts);
    auto manifest = load_manifest(opts, gallery);
    if (colour_filter) manifest = manifest.with_colour(*colour_filter);
    if (manifest.entries.empty()) throw marble::DataError("no manifest entries left after filtering");
    const auto sources = load_features(opts.features_path);
    const auto algorithm = marble::parse_algorithm(algorithm_name);
    if (!algorithm) throw UsageError("--algorithm must be lvq or sa");
    const auto subset = marble::parse_subset_id(subset_name);
    if (!subset) throw UsageError("unknown subset '" + subset_name + "'");
    const auto kind = parse_labels(label_name);

    const auto outcome = marble::run_clustering(sources, manifest, *algorithm, *subset, kind, cfg);
    const auto names = marble::class_labels(manifest, kind).names;
    ensure_dir(opts.out_dir);
    marble::write_text_file(out_file(opts.out_dir, "assignments.csv"), outcome.assignments_csv(names));
    marble::write_text_file(out_file(opts.out_dir, "confusion.csv"), outcome.confusion.to_table());
    if (outcome.prototypes) {
        marble::write_text_file(out_file(opts.out_dir, "prototypes.csv"), outcome.prototypes->to_table());
    }
    if (outcome.annealing) {
        const auto& a = *outcome.annealing;
        std::ostringstream summary;
        summary << "clusters = " << a.clusters.cluster_count << '\n'
                << "initial_energy = " << marble::format_number(a.initial_energy) << '\n'
                << "best_energy = " << marble::format_number(a.best_energy) << '\n'
                << "initial_temperature = " << marble::format_number(a.initial_temperature) << '\n'
                << "temperature_levels = " << a.temperature_levels << '\n'
                << "accepted_moves = " << a.accepted_moves << '\n';
        marble::write_text_file(out_file(opts.out_dir, "annealing.txt"), summary.str());
    }
    if (gallery) {
        // One directory of image copies per predicted class.
        for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
            const auto dir = fs::path(opts.out_dir) / "gallery" / ("class_" + names[outcome.predicted[i]]);
            fs::create_directories(dir);
            const auto& src = manifest.entries[i].resolved_path;
            fs::copy_file(src, dir / fs::path(src).filename(), fs::copy_options::overwrite_existing);
        }
    }
    std::cout << outcome.confusion.to_table();
    std::cout << "accuracy," << marble::format_number(static_cast<double>(outcome.confusion.trace()) /
                                                      static_cast<double>(outcome.confusion.total()))
              << '\n';
    return kOk;
}

// Text layout of a quality.csv file: one row per subset,
// (intra, inter, combined) per label set side by side.
std::string render_report(const std::string& csv) {
    std::vector<std::string> label_order;
    std::vector<std::string> subset_order;
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> cells;
    std::istringstream in(csv);
    std::string line, label;
    while (std::getline(in, line)) {
        if (line.rfind("# labels=", 0) == 0) {
            label = line.substr(9);
            label_order.push_back(label);
            continue;
        }
        if (line.empty() || line.rfind("subset,", 0) == 0) continue;
        const auto fields = marble::split_csv_line(line);
        if (fields.size() < 4 || label.empty()) throw marble::DataError("malformed quality report line: " + line);
        if (std::find(subset_order.begin(), subset_order.end(), fields[0]) == subset_order.end()) {
            subset_order.push_back(fields[0]);
        }
        cells[{fields[0], label}] = {fields[1], fields[2], fields[3]};
    }
    if (label_order.empty()) throw marble::DataError("quality report has no label blocks");

    auto fixed = [](const std::string& s) {
        std::ostringstream o;
        o << std::setw(12) << s.substr(0, 12);
        return o.str();
    };
    auto short_number = [](const std::string& s) {
        std::ostringstream o;
        o.setf(std::ios::fixed);
        o.precision(3);
        o << std::stod(s);
        return o.str();
    };
    std::ostringstream out;
    out << std::setw(8) << "";
    for (const auto& l : label_order) out << fixed(l + ":intra") << fixed("inter") << fixed("comb");
    out << '\n';
    for (const auto& s : subset_order) {
        out << std::setw(8) << std::left << s << std::right;
        for (const auto& l : label_order) {
            const auto it = cells.find({s, l});
            for (int k = 0; k < 3; ++k) out << fixed(it == cells.end() ? "-" : short_number(it->second[k]));
        }
        out << '\n';
    }
    return out.str();
}

int run_render(const CommonOptions& opts, const std::string& image, const std::string& report) {
    ensure_dir(opts.out_dir);
    if (!report.empty()) {
        const std::string path = fs::is_directory(report) ? (fs::path(report) / "quality.csv").string() : report;
        std::ifstream file(path);
        if (!file) throw marble::DataError("cannot read report " + path);
        std::stringstream buffer;
        buffer << file.rdbuf();
        const auto text = render_report(buffer.str());
        marble::write_text_file(out_file(opts.out_dir, "quality_table.txt"), text);
        std::cout << text;
        return kOk;
    }
    const auto cfg = load_effective_config(opts);
    std::vector<std::pair<std::string, std::string>> jobs;  // (stem, path)
    if (!image.empty()) {
        jobs.emplace_back(fs::path(image).stem().string(), image);
    } else {
        for (const auto& e : load_manifest(opts, true).entries) jobs.emplace_back(e.id, e.resolved_path);
    }
    for (const auto& [stem, path] : jobs) {
        const auto artifacts = marble::signature_artifacts(marble::read_image(path), cfg);
        marble::write_ppm(out_file(opts.out_dir, stem + "_signature.ppm"), artifacts.rendered);
        marble::write_text_file(out_file(opts.out_dir, stem + "_regions.csv"), artifacts.regions_table);
        std::cout << stem << ',' << artifacts.signature.regions.size() << " regions\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Marble appearance features, cluster quality and clustering"};
    app.require_subcommand(1);

    CommonOptions opts;
    auto add_common = [&opts](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "key = value configuration file");
        cmd->add_option("--seed", opts.seed, "global seed (overrides the config)");
        cmd->add_option("--out", opts.out_dir, "output directory");
    };

    auto* synth = app.add_subcommand("synth", "generate a synthetic marble corpus");
    add_common(synth);

    auto* ingest = app.add_subcommand("ingest", "validate a corpus manifest");
    ingest->add_option("--manifest", opts.manifest_path, "manifest CSV (id,path,colour,vein)")->required();

    auto* featurize = app.add_subcommand("featurize", "extract HF and MF feature tables");
    add_common(featurize);
    featurize->add_option("--manifest", opts.manifest_path)->required();

    std::vector<std::string> subset_names;
    std::vector<std::string> label_names;
    auto* evaluate = app.add_subcommand("evaluate", "cluster-quality table for feature subsets");
    add_common(evaluate);
    evaluate->add_option("--manifest", opts.manifest_path)->required();
    evaluate->add_option("--features", opts.features_path, "feature directory or CSV")->required();
    evaluate->add_option("--subset", subset_names, "subset ids (default: all configured)")->delimiter(',');
    evaluate->add_option("--labels", label_names, "colour and/or vein (default: both)")->delimiter(',');

    std::string algorithm = "lvq";
    std::string subset_name;
    std::string label_name = "colour";
    std::optional<std::size_t> colour_filter;
    bool gallery = false;
    auto* cluster = app.add_subcommand("cluster", "LVQ or SA clustering with a confusion matrix");
    add_common(cluster);
    cluster->add_option("--manifest", opts.manifest_path)->required();
    cluster->add_option("--features", opts.features_path)->required();
    cluster->add_option("--algorithm", algorithm, "lvq or sa")->required();
    cluster->add_option("--subset", subset_name)->required();
    cluster->add_option("--labels", label_name, "colour or vein");
    cluster->add_option("--colour-class", colour_filter, "keep only this background colour class (1..6)");
    cluster->add_flag("--gallery", gallery, "copy images into one directory per predicted class");

    std::string image, report;
    auto* render = app.add_subcommand("render", "signature images and region tables, or a quality table");
    add_common(render);
    render->add_option("--image", image, "single PPM/PGM image");
    render->add_option("--manifest", opts.manifest_path, "render every manifest image");
    render->add_option("--report", report, "quality.csv to lay out as a text table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_failure("usage", kUsage, e.what());
    }

    try {
        if (*synth) return run_synth(opts);
        if (*ingest) return run_ingest(opts);
        if (*featurize) return run_featurize(opts);
        if (*evaluate) return run_evaluate(opts, subset_names, label_names);
        if (*cluster) return run_cluster(opts, algorithm, subset_name, label_name, colour_filter, gallery);
        if (*render) {
            if (image.empty() && report.empty() && opts.manifest_path.empty()) {
                throw UsageError("render needs --image, --manifest or --report");
            }
            return run_render(opts, image, report);
        }
    } catch (const UsageError& e) {
        return report_failure("usage", kUsage, e.what());
    } catch (const marble::DataError& e) {
        return report_failure("data", kData, e.what());
    } catch (const marble::DecodeError& e) {
        return report_failure("data", kData, e.what());
    } catch (const std::exception& e) {
        return report_failure("runtime", kRuntime, e.what());
    }
    return kUsage;
}
