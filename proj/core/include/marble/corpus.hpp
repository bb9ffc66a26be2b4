#pragma once

#include <marble/config.hpp>

#include <string>
#include <vector>

namespace marble {

struct ManifestEntry {
    std::string id;
    /// Path as written in the manifest.
    std::string path;
    /// Path resolved against the manifest's directory.
    std::string resolved_path;
    std::size_t colour_class = 1;  ///< 1..6
    std::size_t vein_class = 1;    ///< 1..3
};

struct CorpusManifest {
    std::vector<ManifestEntry> entries;

    std::vector<std::string> ids() const;
    /// Entries whose colour class equals `colour` (vein runs use one background colour).
    CorpusManifest with_colour(std::size_t colour) const;
};

/// Parses `id,path,colour,vein` CSV text with a header row. All problems are
/// collected and reported together, each with its line number.
CorpusManifest parse_manifest(std::string_view text, const std::string& base_dir, bool check_files);

CorpusManifest ingest(const std::string& manifest_path, bool check_files = true);

std::string manifest_text(const CorpusManifest& manifest);

}  // namespace marble
