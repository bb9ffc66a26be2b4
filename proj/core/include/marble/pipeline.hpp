#pragma once

#include <marble/clustering.hpp>
#include <marble/config.hpp>
#include <marble/corpus.hpp>
#include <marble/features.hpp>
#include <marble/quality.hpp>
#include <marble/quadtree.hpp>

#include <optional>
#include <string>
#include <vector>

namespace marble {

struct ImageFeatures {
    HfVector hf{};
    MfVector mf;
};

/// Quadtree, merge and HF extraction followed by MF assembly for one image.
ImageFeatures extract_features(const Raster& raster, const PipelineConfig& cfg);

/// Raw (unnormalised) HF and MF tables, one row per manifest entry in manifest order.
struct FeatureTables {
    FeatureMatrix hf;
    FeatureMatrix mf;
};

/// Decodes and featurises every image. Decode failures are collected and
/// reported together as a DataError.
FeatureTables featurize(const CorpusManifest& corpus, const PipelineConfig& cfg);

/// CSV with header `id,<feature names>`.
std::string feature_csv(const FeatureMatrix& m);
FeatureMatrix parse_feature_csv(std::string_view text);
FeatureMatrix read_feature_csv(const std::string& path);

void write_text_file(const std::string& path, std::string_view contents);

enum class LabelKind { Colour, Vein };
std::optional<LabelKind> parse_label_kind(std::string_view text);
std::string to_string(LabelKind kind);

/// Expert labels re-indexed over the classes present in the manifest.
struct ClassLabels {
    std::vector<std::size_t> index;  ///< per entry, in [0, names.size())
    std::vector<std::string> names;  ///< original class numbers, ascending
};
ClassLabels class_labels(const CorpusManifest& corpus, LabelKind kind);

/// Rows reordered to manifest order. Throws DataError unless the ids match exactly.
FeatureMatrix align_to_manifest(const FeatureMatrix& m, const CorpusManifest& corpus);

struct FeatureSources {
    std::optional<FeatureMatrix> hf;
    std::optional<FeatureMatrix> mf;

    const FeatureMatrix& for_subset(FeatureSubsetId id) const;
};

/// Subsets usable with the given config: the fixed ones plus configured HF subsets.
std::vector<FeatureSubsetId> default_subsets(const PipelineConfig& cfg);

/// Z-normalises each table over the manifest rows, projects every subset and
/// scores it against each label set.
QualityReport evaluate(const FeatureSources& features, const CorpusManifest& corpus,
                       const std::vector<FeatureSubsetId>& subsets, const std::vector<LabelKind>& label_sets,
                       const PipelineConfig& cfg);

enum class Algorithm { Lvq, Sa };
std::optional<Algorithm> parse_algorithm(std::string_view text);

struct ClusterOutcome {
    std::vector<std::string> ids;
    std::vector<std::size_t> truth;      ///< class index
    std::vector<std::size_t> predicted;  ///< class index
    std::vector<std::size_t> cluster;    ///< SA cluster or LVQ class
    ConfusionMatrix confusion{{}, {}};
    std::optional<PrototypeSet> prototypes;
    std::optional<SaResult> annealing;

    /// id,truth,predicted,cluster using the original class numbers.
    std::string assignments_csv(const std::vector<std::string>& class_names) const;
};

/// LVQ trains and classifies the same rows (resubstitution); SA partitions
/// them blindly into as many clusters as there are classes, and clusters
/// are mapped to classes by majority vote.
ClusterOutcome run_clustering(const FeatureSources& features, const CorpusManifest& corpus, Algorithm algorithm,
                              FeatureSubsetId subset, LabelKind labels, const PipelineConfig& cfg);

struct SignatureArtifacts {
    Signature signature;
    Raster rendered{1, 1};
    std::string regions_table;
};

SignatureArtifacts signature_artifacts(const Raster& raster, const PipelineConfig& cfg);

}  // namespace marble
