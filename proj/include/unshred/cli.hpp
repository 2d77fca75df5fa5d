#pragma once

#include "unshred/manifest.hpp"
#include "unshred/stitch_eval.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace unshred {

struct PipelineConfig {
    int m = 8;
    std::uint64_t seed = 1;
    double epsilon = kDefaultBlankEpsilon;
    int threshold = kDefaultThreshold;
    bool early_stop = true;
    bool orientation_hints = true;
    int gap = 3;
    DocClass doc_class = DocClass::Typeset;
    int pages = 2;
    int page_width = 256;
    int page_height = 256;
    std::string out = "out";
    bool verbose = false;

    bool operator==(const PipelineConfig&) const = default;
};

Json to_json(const PipelineConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig config_from_json(const Json& j);

// Every command writes into config.out and removes what it wrote if it fails.

// Writes strip_NNN.pgm and truth.json; with `generate`, also the generated
// page_NNN.pgm originals.
void cmd_shred(const PipelineConfig& config, const std::vector<std::string>& page_files, bool generate);

// Writes sheet.pgm and sheet_layout.json.
void cmd_compose(const PipelineConfig& config, const std::string& strip_manifest);

// Writes segment_NNN.pgm and segments.json.
void cmd_segment(const PipelineConfig& config, const std::string& sheet_file);

// Writes reconstruction.json and page_NNN.pgm per chain; with verbose, also
// scores.jsonl and templates.pgm.
ReconstructionRecord cmd_reconstruct(const PipelineConfig& config, const std::string& strip_manifest);

// Strip ids in the reconstruction may be segment ids; layout + segments
// translate them back to the ground truth's ids. Writes report.json.
EvalReport cmd_evaluate(const PipelineConfig& config, const std::string& reconstruction_file,
                        const std::string& truth_file, const std::optional<std::string>& layout_file,
                        const std::optional<std::string>& segments_file);

// generate -> shred -> compose -> segment -> reconstruct -> evaluate for
// every document class under config.out/<class>/, then report.json for
// config.doc_class and comparison.{json,txt} across classes.
std::vector<EvalReport> cmd_pipeline(const PipelineConfig& config, std::ostream& out);

// Exit codes: 0 success, 1 bad input or configuration, 2 internal error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unshred
