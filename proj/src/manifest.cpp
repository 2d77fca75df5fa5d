#include "unshred/manifest.hpp"

#include "unshred/errors.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace unshred {

namespace {

template <typename T>
T field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError(std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(std::string("field '") + key + "' has the wrong type");
    }
}

const Json& array_field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
        throw FormatError(std::string("missing array '") + key + "'");
    }
    return j.at(key);
}

}  // namespace

Json to_json(const TruthManifest& m)
{
    Json strips = Json::array();
    for (const auto& f : m.files) {
        const Provenance& p = m.truth.at(f.id);
        strips.push_back({{"id", f.id}, {"file", f.file}, {"page", p.page}, {"position", p.position},
                          {"flipped", p.flipped}});
    }
    return {{"pages", m.truth.pages},
            {"strips_per_page", m.truth.strips_per_page},
            {"page_width", m.page_width},
            {"page_height", m.page_height},
            {"strips", std::move(strips)}};
}

TruthManifest truth_from_json(const Json& j)
{
    TruthManifest m;
    m.truth.pages = field<int>(j, "pages");
    m.truth.strips_per_page = field<int>(j, "strips_per_page");
    m.page_width = field<int>(j, "page_width");
    m.page_height = field<int>(j, "page_height");
    for (const auto& s : array_field(j, "strips")) {
        const StripId id = field<int>(s, "id");
        const Provenance p{field<int>(s, "page"), field<int>(s, "position"), field<bool>(s, "flipped")};
        if (p.page < 0 || p.page >= m.truth.pages || p.position < 0 || p.position >= m.truth.strips_per_page) {
            throw FormatError("strip " + std::to_string(id) + " has page/position outside the document");
        }
        if (!m.truth.placement.emplace(id, p).second) {
            throw FormatError("duplicate strip id " + std::to_string(id) + " in ground truth");
        }
        m.files.push_back({id, s.contains("file") ? field<std::string>(s, "file") : std::string()});
    }
    return m;
}

Json to_json(const std::vector<SegmentRecord>& segments)
{
    Json out = Json::array();
    for (const auto& s : segments) {
        out.push_back({{"id", s.id}, {"file", s.file}, {"left", s.bounds.left}, {"top", s.bounds.top},
                       {"width", s.bounds.width}, {"height", s.bounds.height}});
    }
    return out;
}

std::vector<SegmentRecord> segments_from_json(const Json& j)
{
    if (!j.is_array()) {
        throw FormatError("segment manifest must be an array");
    }
    std::vector<SegmentRecord> out;
    for (const auto& s : j) {
        out.push_back({field<int>(s, "id"), field<std::string>(s, "file"),
                       {field<int>(s, "left"), field<int>(s, "top"), field<int>(s, "width"), field<int>(s, "height")}});
    }
    return out;
}

Json to_json(const SheetLayout& layout)
{
    Json strips = Json::array();
    for (const auto& p : layout.placements) {
        strips.push_back(
            {{"id", p.id}, {"left", p.left}, {"top", p.top}, {"width", p.width}, {"height", p.height}});
    }
    return {{"sheet", layout.sheet}, {"gap", layout.gap}, {"strips", std::move(strips)}};
}

SheetLayout layout_from_json(const Json& j)
{
    SheetLayout layout;
    layout.sheet = field<std::string>(j, "sheet");
    layout.gap = field<int>(j, "gap");
    for (const auto& s : array_field(j, "strips")) {
        layout.placements.push_back({field<int>(s, "id"), field<int>(s, "left"), field<int>(s, "top"),
                                     field<int>(s, "width"), field<int>(s, "height")});
    }
    return layout;
}

Json to_json(const ReconstructionRecord& r)
{
    Json chains = Json::array();
    for (const auto& c : r.rec.chains) {
        Json members = Json::array();
        for (const auto& m : c.members) {
            members.push_back({{"id", m.id}, {"flipped", m.flipped}});
        }
        chains.push_back(std::move(members));
    }
    return {{"chains", std::move(chains)},
            {"unplaced", r.rec.unplaced},
            {"evaluations", r.evaluations},
            {"early_stop", r.early_stop},
            {"hints", r.hints}};
}

ReconstructionRecord reconstruction_from_json(const Json& j)
{
    ReconstructionRecord r;
    for (const auto& chain : array_field(j, "chains")) {
        if (!chain.is_array() || chain.empty()) {
            throw FormatError("each chain must be a non-empty array");
        }
        Chain c;
        for (const auto& m : chain) {
            c.members.push_back({field<int>(m, "id"), field<bool>(m, "flipped")});
        }
        r.rec.chains.push_back(std::move(c));
    }
    for (const auto& id : array_field(j, "unplaced")) {
        if (!id.is_number_integer()) {
            throw FormatError("unplaced entries must be strip ids");
        }
        r.rec.unplaced.push_back(id.get<int>());
    }
    r.evaluations = field<long long>(j, "evaluations");
    r.early_stop = field<bool>(j, "early_stop");
    r.hints = field<bool>(j, "hints");
    return r;
}

Json to_json(const EvalReport& r)
{
    return {{"doc_class", std::string(doc_class_name(r.doc_class))},
            {"adjacency_accuracy", r.adjacency_accuracy},
            {"page_purity", r.page_purity},
            {"pages_perfect", r.pages_perfect},
            {"strips_total", r.strips_total},
            {"strips_unplaced", r.strips_unplaced}};
}

EvalReport report_from_json(const Json& j)
{
    EvalReport r;
    const auto cls = parse_doc_class(field<std::string>(j, "doc_class"));
    if (!cls) {
        throw FormatError("unknown doc_class");
    }
    r.doc_class = *cls;
    r.adjacency_accuracy = field<double>(j, "adjacency_accuracy");
    r.page_purity = field<double>(j, "page_purity");
    r.pages_perfect = field<int>(j, "pages_perfect");
    r.strips_total = field<int>(j, "strips_total");
    r.strips_unplaced = field<int>(j, "strips_unplaced");
    return r;
}

std::vector<StripFile> strip_files_from_json(const Json& j)
{
    const Json& list = j.is_array() ? j : array_field(j, "strips");
    std::vector<StripFile> out;
    for (const auto& s : list) {
        out.push_back({field<int>(s, "id"), field<std::string>(s, "file")});
    }
    return out;
}

std::string report_table(const std::vector<EvalReport>& reports)
{
    std::ostringstream out;
    out << std::left << std::setw(12) << "class" << std::right << std::setw(10) << "adjacency" << std::setw(8)
        << "purity" << std::setw(9) << "perfect" << std::setw(8) << "strips" << std::setw(10) << "unplaced"
        << "\n";
    for (const auto& r : reports) {
        out << std::left << std::setw(12) << doc_class_name(r.doc_class) << std::right << std::fixed
            << std::setprecision(4) << std::setw(10) << r.adjacency_accuracy << std::setw(8) << r.page_purity
            << std::setw(9) << r.pages_perfect << std::setw(8) << r.strips_total << std::setw(10) << r.strips_unplaced
            << "\n";
    }
    return out.str();
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "' for reading");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    out << j.dump(2) << "\n";
    if (!out) {
        throw Error("failed writing '" + path + "'");
    }
}

}  // namespace unshred
