#include <marble/corpus.hpp>
#include <marble/table.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace marble {

namespace fs = std::filesystem;

std::vector<std::string> CorpusManifest::ids() const {
    std::vector<std::string> out;
    for (const auto& e : entries) out.push_back(e.id);
    return out;
}

CorpusManifest CorpusManifest::with_colour(std::size_t colour) const {
    CorpusManifest out;
    for (const auto& e : entries) {
        if (e.colour_class == colour) out.entries.push_back(e);
    }
    return out;
}

namespace {

bool parse_class(const std::string& text, std::size_t max, std::size_t& out) {
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end && out >= 1 && out <= max;
}

}  // namespace

CorpusManifest parse_manifest(std::string_view text, const std::string& base_dir, bool check_files) {
    CorpusManifest manifest;
    std::vector<std::string> problems;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, raw)) {
        ++line_no;
        if (trim(raw).empty()) continue;
        const auto fields = split_csv_line(raw);
        if (header) {
            header = false;
            if (fields.size() != 4 || fields[0] != "id" || fields[1] != "path" || fields[2] != "colour" ||
                fields[3] != "vein") {
                problems.push_back("line " + std::to_string(line_no) + ": header must be id,path,colour,vein");
            }
            continue;
        }
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (fields.size() != 4) {
            problems.push_back(where + "expected 4 fields, found " + std::to_string(fields.size()));
            continue;
        }
        ManifestEntry e;
        e.id = fields[0];
        e.path = fields[1];
        if (e.id.empty()) problems.push_back(where + "empty id");
        if (!seen.insert(e.id).second) problems.push_back(where + "duplicate id '" + e.id + "'");
        if (!parse_class(fields[2], kColourClasses, e.colour_class)) {
            problems.push_back(where + "colour class '" + fields[2] + "' outside 1..6");
        }
        if (!parse_class(fields[3], kVeinClasses, e.vein_class)) {
            problems.push_back(where + "vein class '" + fields[3] + "' outside 1..3");
        }
        const fs::path p(e.path);
        e.resolved_path = (p.is_absolute() ? p : fs::path(base_dir) / p).lexically_normal().string();
        if (check_files && !fs::is_regular_file(e.resolved_path)) {
            problems.push_back(where + "missing image '" + e.path + "'");
        }
        manifest.entries.push_back(std::move(e));
    }
    if (header) problems.push_back("manifest is empty");
    if (!problems.empty()) {
        std::string message = "manifest validation failed";
        for (const auto& p : problems) message += "\n  " + p;
        throw DataError(message);
    }
    return manifest;
}

CorpusManifest ingest(const std::string& manifest_path, bool check_files) {
    std::ifstream file(manifest_path);
    if (!file) throw DataError("cannot read manifest " + manifest_path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    const auto dir = fs::path(manifest_path).parent_path().string();
    return parse_manifest(buffer.str(), dir.empty() ? "." : dir, check_files);
}

std::string manifest_text(const CorpusManifest& manifest) {
    std::ostringstream out;
    out << "id,path,colour,vein\n";
    for (const auto& e : manifest.entries) {
        out << e.id << ',' << e.path << ',' << e.colour_class << ',' << e.vein_class << '\n';
    }
    return out.str();
}

}  // namespace marble
