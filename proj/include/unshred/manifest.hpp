#pragma once

#include "unshred/assembler.hpp"
#include "unshred/segmenter.hpp"
#include "unshred/shredder.hpp"
#include "unshred/stitch_eval.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace unshred {

using Json = nlohmann::ordered_json;

// A strip raster on disk, as listed by the shred and segment manifests.
struct StripFile {
    StripId id = 0;
    std::string file;  // relative to the manifest's directory
};

struct TruthManifest {
    GroundTruth truth;
    int page_width = 0;
    int page_height = 0;
    std::vector<StripFile> files;
};

struct SegmentRecord {
    int id = 0;
    std::string file;
    Bounds bounds;
};

struct SheetLayout {
    std::string sheet;
    int gap = 0;
    std::vector<SheetPlacement> placements;
};

struct ReconstructionRecord {
    Reconstruction rec;
    long long evaluations = 0;
    bool early_stop = false;
    bool hints = false;
};

Json to_json(const TruthManifest& m);
TruthManifest truth_from_json(const Json& j);

Json to_json(const std::vector<SegmentRecord>& segments);
std::vector<SegmentRecord> segments_from_json(const Json& j);

Json to_json(const SheetLayout& layout);
SheetLayout layout_from_json(const Json& j);

Json to_json(const ReconstructionRecord& r);
ReconstructionRecord reconstruction_from_json(const Json& j);

Json to_json(const EvalReport& r);
EvalReport report_from_json(const Json& j);

// Accepts either a shred manifest (object with "strips") or a segment
// manifest (array).
std::vector<StripFile> strip_files_from_json(const Json& j);

// Aligned plain-text table, one row per report.
std::string report_table(const std::vector<EvalReport>& reports);

Json read_json_file(const std::string& path);
// Pretty-printed, two-space indent, trailing newline.
void write_json_file(const std::string& path, const Json& j);

}  // namespace unshred
