#include <marble/pipeline.hpp>
#include <marble/table.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace marble {

ImageFeatures extract_features(const Raster& raster, const PipelineConfig& cfg) {
    ImageFeatures out;
    const Signature sig = quadtree_decompose(raster, cfg.quadtree);
    bool any_homogeneous = std::any_of(sig.regions.begin(), sig.regions.end(),
                                       [](const QuadRegion& r) { return r.homogeneous; });
    // A signature without homogeneous leaves has no colour clusters: all HF slots stay 0.
    if (any_homogeneous) out.hf = extract_hf(merge_regions(sig, cfg.merge));
    out.mf = assemble_mf(raster, cfg.morphology);
    return out;
}

FeatureTables featurize(const CorpusManifest& corpus, const PipelineConfig& cfg) {
    std::vector<double> hf_values, mf_values;
    std::vector<std::string> failures;
    const std::size_t mf_width = kColourFeatureCount + 18 * cfg.morphology.max_size;
    for (const auto& entry : corpus.entries) {
        try {
            const Raster raster = read_image(entry.resolved_path);
            const ImageFeatures f = extract_features(raster, cfg);
            hf_values.insert(hf_values.end(), f.hf.begin(), f.hf.end());
            mf_values.insert(mf_values.end(), f.mf.begin(), f.mf.end());
        } catch (const DecodeError& e) {
            failures.push_back(entry.id + " (" + entry.path + "): " + e.what());
        } catch (const std::runtime_error& e) {
            failures.push_back(entry.id + " (" + entry.path + "): " + e.what());
        }
    }
    if (!failures.empty()) {
        std::string message = "featurize failed for " + std::to_string(failures.size()) + " image(s)";
        for (const auto& f : failures) message += "\n  " + f;
        throw DataError(message);
    }
    const std::size_t rows = corpus.entries.size();
    return {FeatureMatrix(rows, kHfLength, std::move(hf_values), corpus.ids(), hf_feature_names()),
            FeatureMatrix(rows, mf_width, std::move(mf_values), corpus.ids(), mf_feature_names(cfg.morphology.max_size))};
}

std::string feature_csv(const FeatureMatrix& m) {
    std::ostringstream out;
    out << "id";
    for (std::size_t c = 0; c < m.cols(); ++c) {
        out << ',' << (m.col_names().empty() ? "f" + std::to_string(c + 1) : m.col_names()[c]);
    }
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << (m.row_ids().empty() ? std::to_string(r + 1) : m.row_ids()[r]);
        for (double v : m.row(r)) out << ',' << format_number(v);
        out << '\n';
    }
    return out.str();
}

FeatureMatrix parse_feature_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    std::vector<std::string> ids;
    std::vector<double> values;
    while (std::getline(in, raw)) {
        ++line_no;
        if (trim(raw).empty()) continue;
        auto fields = split_csv_line(raw);
        if (names.empty() && ids.empty() && line_no == 1) {
            if (fields.size() < 2 || fields[0] != "id") throw DataError("features line 1: header must start with id");
            names.assign(fields.begin() + 1, fields.end());
            continue;
        }
        if (fields.size() != names.size() + 1) {
            throw DataError("features line " + std::to_string(line_no) + ": expected " +
                            std::to_string(names.size() + 1) + " fields, found " + std::to_string(fields.size()));
        }
        ids.push_back(fields[0]);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            double v = 0;
            const auto& f = fields[i];
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size()) {
                throw DataError("features line " + std::to_string(line_no) + ": bad number '" + f + "'");
            }
            values.push_back(v);
        }
    }
    if (names.empty()) throw DataError("features file is empty");
    try {
        const std::size_t rows = ids.size(), cols = names.size();
        return FeatureMatrix(rows, cols, std::move(values), std::move(ids), std::move(names));
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("features: ") + e.what());
    }
}

FeatureMatrix read_feature_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw DataError("cannot read features " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_feature_csv(buffer.str());
}

void write_text_file(const std::string& path, std::string_view contents) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    file.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!file) throw std::runtime_error("write failed for " + path);
}

std::optional<LabelKind> parse_label_kind(std::string_view text) {
    if (text == "colour" || text == "color") return LabelKind::Colour;
    if (text == "vein") return LabelKind::Vein;
    return std::nullopt;
}

std::string to_string(LabelKind kind) { return kind == LabelKind::Colour ? "colour" : "vein"; }

ClassLabels class_labels(const CorpusManifest& corpus, LabelKind kind) {
    auto raw = [kind](const ManifestEntry& e) { return kind == LabelKind::Colour ? e.colour_class : e.vein_class; };
    std::set<std::size_t> present;
    for (const auto& e : corpus.entries) present.insert(raw(e));
    ClassLabels out;
    std::unordered_map<std::size_t, std::size_t> index_of;
    for (std::size_t c : present) {
        index_of[c] = out.names.size();
        out.names.push_back(std::to_string(c));
    }
    for (const auto& e : corpus.entries) out.index.push_back(index_of.at(raw(e)));
    return out;
}

FeatureMatrix align_to_manifest(const FeatureMatrix& m, const CorpusManifest& corpus) {
    std::unordered_map<std::string, std::size_t> row_of;
    for (std::size_t r = 0; r < m.row_ids().size(); ++r) row_of[m.row_ids()[r]] = r;
    std::vector<std::size_t> rows;
    std::vector<std::string> missing;
    for (const auto& e : corpus.entries) {
        const auto it = row_of.find(e.id);
        if (it == row_of.end()) {
            missing.push_back(e.id);
        } else {
            rows.push_back(it->second);
        }
    }
    if (!missing.empty()) {
        std::string message = "feature table lacks manifest ids:";
        for (const auto& id : missing) message += " " + id;
        throw DataError(message);
    }
    return m.select_rows(rows);
}

const FeatureMatrix& FeatureSources::for_subset(FeatureSubsetId id) const {
    const auto& table = family_of(id) == FeatureFamily::HF ? hf : mf;
    if (!table) throw DataError("no " + std::string(family_of(id) == FeatureFamily::HF ? "HF" : "MF") +
                                " feature table supplied for subset " + to_string(id));
    return *table;
}

std::vector<FeatureSubsetId> default_subsets(const PipelineConfig& cfg) {
    std::vector<FeatureSubsetId> out{FeatureSubsetId::HF_A};
    for (auto id : {FeatureSubsetId::HF_B, FeatureSubsetId::HF_C}) {
        const auto it = cfg.subsets.find(id);
        if (it != cfg.subsets.end() && !it->second.empty()) out.push_back(id);
    }
    out.insert(out.end(), {FeatureSubsetId::MF_A, FeatureSubsetId::MF_B, FeatureSubsetId::MF_C});
    return out;
}

namespace {

FeatureMatrix normalized_subset(const FeatureSources& features, const CorpusManifest& corpus, FeatureSubsetId id,
                                const PipelineConfig& cfg) {
    const FeatureMatrix aligned = align_to_manifest(features.for_subset(id), corpus);
    const FeatureMatrix normalized = znormalize(aligned).matrix;
    std::vector<std::size_t> columns;
    try {
        for (std::size_t i : subset_indices(id, cfg.subsets, normalized.cols())) columns.push_back(i - 1);
    } catch (const MissingSubsetError& e) {
        throw DataError(e.what());
    } catch (const std::out_of_range& e) {
        throw DataError(e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
    return normalized.select_columns(columns);
}

}  // namespace

QualityReport evaluate(const FeatureSources& features, const CorpusManifest& corpus,
                       const std::vector<FeatureSubsetId>& subsets, const std::vector<LabelKind>& label_sets,
                       const PipelineConfig& cfg) {
    QualityReport report;
    for (LabelKind kind : label_sets) {
        const ClassLabels labels = class_labels(corpus, kind);
        if (labels.names.size() < 2) {
            throw DataError(to_string(kind) + " labels have fewer than two classes in the manifest");
        }
        const ClusterSet clusters(labels.index, labels.names.size());
        for (FeatureSubsetId id : subsets) {
            QualityRow row = quality_row(normalized_subset(features, corpus, id, cfg), clusters);
            row.subset = to_string(id);
            row.label_set = to_string(kind);
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
    if (text == "lvq") return Algorithm::Lvq;
    if (text == "sa") return Algorithm::Sa;
    return std::nullopt;
}

ClusterOutcome run_clustering(const FeatureSources& features, const CorpusManifest& corpus, Algorithm algorithm,
                              FeatureSubsetId subset, LabelKind kind, const PipelineConfig& cfg) {
    const FeatureMatrix m = normalized_subset(features, corpus, subset, cfg);
    const ClassLabels labels = class_labels(corpus, kind);

    ClusterOutcome out;
    out.ids = corpus.ids();
    out.truth = labels.index;
    if (algorithm == Algorithm::Lvq) {
        PrototypeSet prototypes = lvq_train(m, labels.index, cfg.lvq);
        for (std::size_t r = 0; r < m.rows(); ++r) out.predicted.push_back(lvq_classify(prototypes, m.row(r)));
        out.cluster = out.predicted;
        out.prototypes = std::move(prototypes);
    } else {
        SaConfig sa = cfg.sa;
        sa.clusters = labels.names.size();
        if (sa.clusters < 2) throw DataError("sa: need at least two classes (K >= 2)");
        SaResult result = sa_cluster(m, sa);
        const auto mapping = majority_mapping(labels.index, result.clusters, labels.names.size());
        out.cluster = result.clusters.assignment;
        for (std::size_t c : out.cluster) out.predicted.push_back(mapping[c]);
        out.annealing = std::move(result);
    }
    out.confusion = confusion_matrix(out.truth, out.predicted, labels.names);
    return out;
}

std::string ClusterOutcome::assignments_csv(const std::vector<std::string>& class_names) const {
    std::ostringstream out;
    out << "id,truth,predicted,cluster\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << ids[i] << ',' << class_names[truth[i]] << ',' << class_names[predicted[i]] << ',' << cluster[i] + 1
            << '\n';
    }
    return out.str();
}

SignatureArtifacts signature_artifacts(const Raster& raster, const PipelineConfig& cfg) {
    SignatureArtifacts out;
    out.signature = quadtree_decompose(raster, cfg.quadtree);
    out.rendered = render_signature(out.signature);
    out.regions_table = signature_table(out.signature);
    return out;
}

}  // namespace marble
