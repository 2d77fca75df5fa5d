#include "unshred/cli.hpp"

#include "unshred/errors.hpp"
#include "unshred/preprocess.hpp"
#include "unshred/segmenter.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace unshred {

Json to_json(const PipelineConfig& c)
{
    return {{"m", c.m},
            {"seed", c.seed},
            {"epsilon", c.epsilon},
            {"threshold", c.threshold},
            {"early_stop", c.early_stop},
            {"orientation_hints", c.orientation_hints},
            {"gap", c.gap},
            {"doc_class", std::string(doc_class_name(c.doc_class))},
            {"pages", c.pages},
            {"page_width", c.page_width},
            {"page_height", c.page_height},
            {"out", c.out},
            {"verbose", c.verbose}};
}

PipelineConfig config_from_json(const Json& j)
{
    if (!j.is_object()) {
        throw FormatError("config must be a JSON object");
    }
    PipelineConfig c;
    const std::map<std::string, std::function<void(const Json&)>> setters = {
        {"m", [&](const Json& v) { c.m = v.get<int>(); }},
        {"seed", [&](const Json& v) { c.seed = v.get<std::uint64_t>(); }},
        {"epsilon", [&](const Json& v) { c.epsilon = v.get<double>(); }},
        {"threshold", [&](const Json& v) { c.threshold = v.get<int>(); }},
        {"early_stop", [&](const Json& v) { c.early_stop = v.get<bool>(); }},
        {"orientation_hints", [&](const Json& v) { c.orientation_hints = v.get<bool>(); }},
        {"gap", [&](const Json& v) { c.gap = v.get<int>(); }},
        {"doc_class",
         [&](const Json& v) {
             const auto cls = parse_doc_class(v.get<std::string>());
             if (!cls) {
                 throw FormatError("config: unknown doc_class '" + v.get<std::string>() + "'");
             }
             c.doc_class = *cls;
         }},
        {"pages", [&](const Json& v) { c.pages = v.get<int>(); }},
        {"page_width", [&](const Json& v) { c.page_width = v.get<int>(); }},
        {"page_height", [&](const Json& v) { c.page_height = v.get<int>(); }},
        {"out", [&](const Json& v) { c.out = v.get<std::string>(); }},
        {"verbose", [&](const Json& v) { c.verbose = v.get<bool>(); }},
    };
    for (const auto& [key, value] : j.items()) {
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw FormatError("config: unknown key '" + key + "'");
        }
        try {
            it->second(value);
        } catch (const nlohmann::json::exception&) {
            throw FormatError("config: key '" + key + "' has the wrong type");
        }
    }
    return c;
}

namespace {

void validate(const PipelineConfig& c)
{
    if (c.m < 1) {
        throw GeometryError("m must be at least 1, got " + std::to_string(c.m));
    }
    if (c.epsilon < 0.0 || c.epsilon >= 1.0) {
        throw Error("epsilon must be in [0, 1)");
    }
    if (c.threshold < 1 || c.threshold > 255) {
        throw Error("threshold must be in 1..255");
    }
    if (c.gap < 1) {
        throw GeometryError("gap must be at least 1");
    }
    if (c.pages < 1) {
        throw GeometryError("pages must be at least 1");
    }
    if (c.out.empty()) {
        throw Error("output directory must not be empty");
    }
}

// Removes whatever a failed command wrote.
class OutputGuard {
public:
    explicit OutputGuard(const fs::path& dir)
    {
        fs::path missing;
        for (fs::path p = fs::absolute(dir); !p.empty() && !fs::exists(p); p = p.parent_path()) {
            missing = p;
            if (p == p.parent_path()) {
                break;
            }
        }
        if (!missing.empty()) {
            created_root_ = missing;
        }
        fs::create_directories(dir);
    }
    OutputGuard(const OutputGuard&) = delete;
    OutputGuard& operator=(const OutputGuard&) = delete;

    ~OutputGuard()
    {
        if (committed_) {
            return;
        }
        std::error_code ec;
        for (const auto& f : files_) {
            fs::remove(f, ec);
        }
        for (const auto& d : dirs_) {
            fs::remove_all(d, ec);
        }
        if (created_root_) {
            fs::remove_all(*created_root_, ec);
        }
    }

    fs::path track(fs::path file)
    {
        files_.push_back(file);
        return file;
    }

    fs::path track_dir(fs::path dir)
    {
        if (!fs::exists(dir)) {
            dirs_.push_back(dir);
        }
        fs::create_directories(dir);
        return dir;
    }

    void commit() { committed_ = true; }

private:
    std::vector<fs::path> files_;
    std::vector<fs::path> dirs_;
    std::optional<fs::path> created_root_;
    bool committed_ = false;
};

std::string numbered(const char* stem, int index)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%03d.pgm", stem, index);
    return buf;
}

fs::path resolve(const std::string& manifest, const std::string& file)
{
    return fs::path(manifest).parent_path() / file;
}

std::map<StripId, BinaryRaster> load_strips(const std::string& manifest_path, int threshold)
{
    std::map<StripId, BinaryRaster> strips;
    for (const auto& f : strip_files_from_json(read_json_file(manifest_path))) {
        if (!strips.emplace(f.id, binarize(load_pgm(resolve(manifest_path, f.file).string()), threshold)).second) {
            throw FormatError("duplicate strip id " + std::to_string(f.id) + " in " + manifest_path);
        }
    }
    return strips;
}

GroundTruth relabel(const GroundTruth& gt, const SheetLayout& layout, const std::vector<SegmentRecord>& segments)
{
    std::map<std::pair<int, int>, StripId> by_corner;
    for (const auto& p : layout.placements) {
        by_corner[{p.left, p.top}] = p.id;
    }
    GroundTruth out;
    out.pages = gt.pages;
    out.strips_per_page = gt.strips_per_page;
    for (const auto& s : segments) {
        const auto it = by_corner.find({s.bounds.left, s.bounds.top});
        if (it == by_corner.end()) {
            throw ConsistencyError("segment " + std::to_string(s.id) + " matches no strip in the sheet layout");
        }
        out.placement.emplace(s.id, gt.at(it->second));
    }
    return out;
}

}  // namespace

void cmd_shred(const PipelineConfig& config, const std::vector<std::string>& page_files, bool generate)
{
    validate(config);
    std::vector<BinaryRaster> pages;
    if (generate) {
        for (int i = 0; i < config.pages; ++i) {
            pages.push_back(generate_corpus(config.doc_class, config.page_width, config.page_height,
                                            config.seed * 1000003ULL + static_cast<std::uint64_t>(i)));
        }
    } else {
        if (page_files.empty()) {
            throw Error("shred: give page files or --generate");
        }
        for (const auto& f : page_files) {
            pages.push_back(binarize(load_pgm(f), config.threshold));
        }
    }
    const ShredResult shredded = shred_document(pages, config.m, config.seed);

    const fs::path dir(config.out);
    OutputGuard guard(dir);
    if (generate) {
        for (std::size_t i = 0; i < pages.size(); ++i) {
            save_pgm(guard.track(dir / numbered("page", static_cast<int>(i))).string(), to_gray(pages[i]));
        }
    }
    TruthManifest manifest;
    manifest.truth = shredded.truth;
    manifest.page_width = shredded.set.geometry.page_width;
    manifest.page_height = shredded.set.geometry.page_height;
    for (const auto& s : shredded.set.strips) {
        const std::string name = numbered("strip", s.id);
        save_pgm(guard.track(dir / name).string(), to_gray(s.raster));
        manifest.files.push_back({s.id, name});
    }
    write_json_file(guard.track(dir / "truth.json").string(), to_json(manifest));
    guard.commit();
}

void cmd_compose(const PipelineConfig& config, const std::string& strip_manifest)
{
    validate(config);
    std::vector<Strip> strips;
    for (auto& [id, raster] : load_strips(strip_manifest, config.threshold)) {
        strips.push_back({id, std::move(raster)});
    }
    const Sheet sheet = compose_sheet(strips, config.gap, config.seed);

    const fs::path dir(config.out);
    OutputGuard guard(dir);
    save_pgm(guard.track(dir / "sheet.pgm").string(), sheet.image);
    write_json_file(guard.track(dir / "sheet_layout.json").string(), to_json(SheetLayout{"sheet.pgm", config.gap, sheet.placements}));
    guard.commit();
}

void cmd_segment(const PipelineConfig& config, const std::string& sheet_file)
{
    validate(config);
    SegmenterOptions options;
    options.ink_threshold = config.threshold;
    const auto segments = segment_sheet(load_pgm(sheet_file), options);

    const fs::path dir(config.out);
    OutputGuard guard(dir);
    std::vector<SegmentRecord> records;
    for (const auto& s : segments) {
        const std::string name = numbered("segment", s.id);
        save_pgm(guard.track(dir / name).string(), to_gray(s.raster));
        records.push_back({s.id, name, s.bounds});
    }
    write_json_file(guard.track(dir / "segments.json").string(), to_json(records));
    guard.commit();
}

ReconstructionRecord cmd_reconstruct(const PipelineConfig& config, const std::string& strip_manifest)
{
    validate(config);
    const auto raw = load_strips(strip_manifest, config.threshold);
    std::vector<Strip> all;
    for (const auto& [id, raster] : raw) {
        all.push_back({id, raster});
    }
    const BlankPartition blanks = remove_blanks(all, config.epsilon);

    // Strips are matched in normalised orientation; chain flips are mapped
    // back to the stored rasters afterwards.
    std::map<StripId, bool> corrected;
    std::vector<MatchStrip> match;
    for (const auto& s : blanks.kept) {
        if (config.orientation_hints) {
            const OrientedStrip o = normalize_orientation(s.raster);
            corrected[s.id] = o.upright == Upright::ConfidentFlippedAndCorrected;
            match.emplace_back(s.id, o.raster, o.confident());
        } else {
            corrected[s.id] = false;
            match.emplace_back(s.id, s.raster, false);
        }
    }

    const TemplateBank bank = build_template_bank();
    ReconstructionRecord record;
    record.early_stop = config.early_stop;
    record.hints = config.orientation_hints;
    std::optional<SeamScoreTable> table;
    if (match.size() >= 2) {
        table = build_score_table(match, bank, {config.early_stop, config.orientation_hints});
        record.rec = greedy_assemble(*table, config.m);
        record.evaluations = table->evaluations;
    } else if (match.size() == 1) {
        if (config.m == 1) {
            record.rec.chains.push_back({{{match.front().id, false}}, {}});
        } else {
            record.rec.unplaced.push_back(match.front().id);
        }
    }
    for (auto& chain : record.rec.chains) {
        for (auto& member : chain.members) {
            member.flipped = member.flipped != corrected.at(member.id);
        }
    }

    const fs::path dir(config.out);
    OutputGuard guard(dir);
    Json j = to_json(record);
    Json removed = Json::array();
    for (const auto& s : blanks.removed) {
        removed.push_back(s.id);
    }
    j["removed"] = std::move(removed);
    write_json_file(guard.track(dir / "reconstruction.json").string(), j);
    for (std::size_t k = 0; k < record.rec.chains.size(); ++k) {
        save_pgm(guard.track(dir / numbered("page", static_cast<int>(k))).string(),
                 to_gray(stitch(record.rec.chains[k], raw)));
    }
    if (config.verbose) {
        save_pgm(guard.track(dir / "templates.pgm").string(), template_contact_sheet(bank));
        std::ofstream trace(guard.track(dir / "scores.jsonl"));
        if (table) {
            std::map<StripId, const MatchStrip*> by_id;
            for (const auto& s : match) {
                by_id[s.id] = &s;
            }
            for (const auto& e : table->entries) {
                const auto& p = by_id.at(e.p)->edges.as_shown(p_flipped(e.at));
                const auto& q = by_id.at(e.q)->edges.as_shown(q_flipped(e.at));
                const SeamTrace t = seam_trace(right_pair(p), left_pair(q), bank);
                Json line = {{"p", e.p},
                             {"q", e.q},
                             {"orientation", std::string(orientation_name(e.at))},
                             {"score", e.score.is_unmatchable() ? Json(nullptr) : Json(e.score.value())},
                             {"informative_windows", t.informative_windows},
                             {"hits", t.hits}};
                trace << line.dump() << "\n";
            }
        }
    }
    guard.commit();
    return record;
}

EvalReport cmd_evaluate(const PipelineConfig& config, const std::string& reconstruction_file,
                        const std::string& truth_file, const std::optional<std::string>& layout_file,
                        const std::optional<std::string>& segments_file)
{
    validate(config);
    const ReconstructionRecord record = reconstruction_from_json(read_json_file(reconstruction_file));
    GroundTruth truth = truth_from_json(read_json_file(truth_file)).truth;
    if (layout_file.has_value() != segments_file.has_value()) {
        throw Error("evaluate: --layout and --segments go together");
    }
    if (layout_file) {
        truth = relabel(truth, layout_from_json(read_json_file(*layout_file)),
                        segments_from_json(read_json_file(*segments_file)));
    }
    const EvalReport report = evaluate(record.rec, truth, config.doc_class);

    const fs::path dir(config.out);
    OutputGuard guard(dir);
    write_json_file(guard.track(dir / "report.json").string(), to_json(report));
    guard.commit();
    return report;
}

std::vector<EvalReport> cmd_pipeline(const PipelineConfig& config, std::ostream& out)
{
    validate(config);
    const fs::path root(config.out);
    OutputGuard guard(root);

    std::vector<EvalReport> reports;
    std::optional<EvalReport> primary;
    for (const DocClass cls : kAllDocClasses) {
        const fs::path dir = guard.track_dir(root / std::string(doc_class_name(cls)));
        const auto stage = [&](const char* name) {
            PipelineConfig c = config;
            c.doc_class = cls;
            c.out = (dir / name).string();
            return c;
        };
        cmd_shred(stage("shred"), {}, true);
        cmd_compose(stage("sheet"), (dir / "shred" / "truth.json").string());
        cmd_segment(stage("segments"), (dir / "sheet" / "sheet.pgm").string());
        cmd_reconstruct(stage("reconstruct"), (dir / "segments" / "segments.json").string());
        PipelineConfig eval = stage("");
        eval.out = dir.string();
        const EvalReport r =
            cmd_evaluate(eval, (dir / "reconstruct" / "reconstruction.json").string(),
                         (dir / "shred" / "truth.json").string(), (dir / "sheet" / "sheet_layout.json").string(),
                         (dir / "segments" / "segments.json").string());
        reports.push_back(r);
        if (cls == config.doc_class) {
            primary = r;
        }
    }

    write_json_file(guard.track(root / "config.json").string(), to_json(config));
    write_json_file(guard.track(root / "report.json").string(), to_json(*primary));
    Json all = Json::array();
    for (const auto& r : reports) {
        all.push_back(to_json(r));
    }
    write_json_file(guard.track(root / "comparison.json").string(), all);
    const std::string table = report_table(reports);
    {
        std::ofstream txt(guard.track(root / "comparison.txt"));
        txt << table;
        if (!txt) {
            throw Error("failed writing comparison table");
        }
    }
    out << table;
    guard.commit();
    return reports;
}

namespace {

struct ParsedCli {
    PipelineConfig flags;
    std::vector<std::pair<CLI::Option*, std::function<void(PipelineConfig&, const PipelineConfig&)>>> overrides;
};

template <typename Field>
std::function<void(PipelineConfig&, const PipelineConfig&)> copy_field(Field PipelineConfig::*member)
{
    return [member](PipelineConfig& dst, const PipelineConfig& src) { dst.*member = src.*member; };
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Shred page images into strips and put them back together", "unshred"};
    app.require_subcommand(1);
    app.fallthrough();

    ParsedCli parsed;
    PipelineConfig& f = parsed.flags;
    std::string class_name = std::string(doc_class_name(f.doc_class));
    bool no_early_stop = false;
    bool no_orientation = false;
    std::string config_file;

    const auto add = [&](CLI::Option* opt, auto member) { parsed.overrides.push_back({opt, copy_field(member)}); };
    add(app.add_option("--m", f.m, "strips per page")->capture_default_str(), &PipelineConfig::m);
    add(app.add_option("--seed", f.seed, "seed for shuffles, flips and generated pages")->capture_default_str(),
        &PipelineConfig::seed);
    add(app.add_option("--epsilon", f.epsilon, "ink density at or below which a strip is blank")->capture_default_str(),
        &PipelineConfig::epsilon);
    add(app.add_option("--threshold", f.threshold, "binarization threshold, ink iff intensity < threshold")
            ->capture_default_str(),
        &PipelineConfig::threshold);
    add(app.add_option("--gap", f.gap, "background pixels between strips on a sheet")->capture_default_str(),
        &PipelineConfig::gap);
    add(app.add_option("--pages", f.pages, "pages to generate")->capture_default_str(), &PipelineConfig::pages);
    add(app.add_option("--width", f.page_width, "generated page width")->capture_default_str(),
        &PipelineConfig::page_width);
    add(app.add_option("--height", f.page_height, "generated page height")->capture_default_str(),
        &PipelineConfig::page_height);
    add(app.add_option("--out", f.out, "output directory")->capture_default_str(), &PipelineConfig::out);
    add(app.add_flag("--verbose", f.verbose, "write score traces and the template sheet"), &PipelineConfig::verbose);
    CLI::Option* class_opt = app.add_option("--class", class_name, "handwritten, typeset or image")
                                 ->check(CLI::IsMember({"handwritten", "typeset", "image"}))
                                 ->capture_default_str();
    CLI::Option* early_opt = app.add_flag("--no-early-stop", no_early_stop, "score every pair");
    CLI::Option* orient_opt = app.add_flag("--no-orientation", no_orientation, "skip orientation normalisation");
    app.add_option("--config", config_file, "JSON config; flags override it")->check(CLI::ExistingFile);

    std::vector<std::string> page_files;
    bool generate = false;
    CLI::App* shred_cmd = app.add_subcommand("shred", "cut pages into strips");
    shred_cmd->add_option("pages", page_files, "page PGM files");
    shred_cmd->add_flag("--generate", generate, "generate --pages synthetic pages of --class");

    std::string manifest;
    CLI::App* compose_cmd = app.add_subcommand("compose", "lay strips out on a black scan sheet");
    compose_cmd->add_option("manifest", manifest, "strip manifest")->required();

    std::string sheet;
    CLI::App* segment_cmd = app.add_subcommand("segment", "cut strips back out of a scan sheet");
    segment_cmd->add_option("sheet", sheet, "sheet PGM")->required();

    CLI::App* reconstruct_cmd = app.add_subcommand("reconstruct", "score seams and assemble pages");
    reconstruct_cmd->add_option("manifest", manifest, "strip manifest (shred or segment)")->required();

    std::string reconstruction;
    std::string truth;
    std::string layout;
    std::string segments;
    CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "compare a reconstruction with ground truth");
    evaluate_cmd->add_option("reconstruction", reconstruction, "reconstruction.json")->required();
    evaluate_cmd->add_option("truth", truth, "truth.json from shred")->required();
    CLI::Option* layout_opt = evaluate_cmd->add_option("--layout", layout, "sheet_layout.json from compose");
    CLI::Option* segments_opt = evaluate_cmd->add_option("--segments", segments, "segments.json from segment");

    CLI::App* pipeline_cmd = app.add_subcommand("pipeline", "run every stage for all three document classes");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(std::move(argv));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        PipelineConfig config = config_file.empty() ? PipelineConfig{} : config_from_json(read_json_file(config_file));
        for (const auto& [opt, apply] : parsed.overrides) {
            if (opt->count() > 0) {
                apply(config, f);
            }
        }
        if (class_opt->count() > 0) {
            config.doc_class = *parse_doc_class(class_name);
        }
        if (early_opt->count() > 0) {
            config.early_stop = !no_early_stop;
        }
        if (orient_opt->count() > 0) {
            config.orientation_hints = !no_orientation;
        }

        if (shred_cmd->parsed()) {
            cmd_shred(config, page_files, generate);
        } else if (compose_cmd->parsed()) {
            cmd_compose(config, manifest);
        } else if (segment_cmd->parsed()) {
            cmd_segment(config, sheet);
        } else if (reconstruct_cmd->parsed()) {
            const auto r = cmd_reconstruct(config, manifest);
            out << r.rec.chains.size() << " chains, " << r.rec.unplaced.size() << " unplaced, " << r.evaluations
                << " seam evaluations\n";
        } else if (evaluate_cmd->parsed()) {
            const auto report = cmd_evaluate(
                config, reconstruction, truth,
                layout_opt->count() > 0 ? std::optional<std::string>(layout) : std::nullopt,
                segments_opt->count() > 0 ? std::optional<std::string>(segments) : std::nullopt);
            out << report_table({report});
        } else if (pipeline_cmd->parsed()) {
            cmd_pipeline(config, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace unshred
