#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "unshred/errors.hpp"
#include "unshred/manifest.hpp"

#include <filesystem>
#include <fstream>

using namespace unshred;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("unshred_manifest_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("truth manifest round trip")
{
    TruthManifest m;
    m.truth.pages = 2;
    m.truth.strips_per_page = 2;
    m.truth.placement = {{0, {1, 0, true}}, {1, {0, 1, false}}, {2, {0, 0, false}}, {3, {1, 1, true}}};
    m.page_width = 32;
    m.page_height = 20;
    m.files = {{0, "strip_000.pgm"}, {1, "strip_001.pgm"}, {2, "strip_002.pgm"}, {3, "strip_003.pgm"}};

    const TruthManifest back = truth_from_json(to_json(m));
    CHECK(back.truth.pages == 2);
    CHECK(back.truth.strips_per_page == 2);
    CHECK(back.truth.placement == m.truth.placement);
    CHECK(back.page_width == 32);
    CHECK(back.page_height == 20);
    REQUIRE(back.files.size() == 4);
    CHECK(back.files[3].file == "strip_003.pgm");

    const auto files = strip_files_from_json(to_json(m));
    REQUIRE(files.size() == 4);
    CHECK(files[1].id == 1);
}

TEST_CASE("truth manifest errors")
{
    const Json good = Json::parse(R"({"pages": 1, "strips_per_page": 2, "page_width": 8, "page_height": 8,
        "strips": [{"id": 0, "page": 0, "position": 0, "flipped": false},
                   {"id": 1, "page": 0, "position": 1, "flipped": true}]})");
    CHECK_NOTHROW(truth_from_json(good));

    Json missing = good;
    missing.erase("pages");
    CHECK_THROWS_AS(truth_from_json(missing), FormatError);

    Json wrong_type = good;
    wrong_type["strips"][0]["flipped"] = "yes";
    CHECK_THROWS_AS(truth_from_json(wrong_type), FormatError);

    Json duplicate = good;
    duplicate["strips"][1]["id"] = 0;
    CHECK_THROWS_AS(truth_from_json(duplicate), FormatError);

    Json outside = good;
    outside["strips"][1]["position"] = 2;
    CHECK_THROWS_AS(truth_from_json(outside), FormatError);

    CHECK_THROWS_AS(truth_from_json(Json::array()), FormatError);
}

TEST_CASE("segment and layout manifests")
{
    const std::vector<SegmentRecord> segs{{0, "segment_000.pgm", {3, 4, 5, 6}}, {1, "segment_001.pgm", {20, 4, 5, 6}}};
    const auto back = segments_from_json(to_json(segs));
    REQUIRE(back.size() == 2);
    CHECK(back[1].file == "segment_001.pgm");
    CHECK(back[1].bounds.left == 20);
    CHECK(back[1].bounds.height == 6);
    CHECK(strip_files_from_json(to_json(segs)).size() == 2);
    CHECK_THROWS_AS(segments_from_json(Json::object()), FormatError);

    SheetLayout layout;
    layout.sheet = "sheet.pgm";
    layout.gap = 3;
    layout.placements = {{4, 3, 3, 5, 6}, {1, 11, 3, 5, 6}};
    const SheetLayout l2 = layout_from_json(to_json(layout));
    CHECK(l2.sheet == "sheet.pgm");
    CHECK(l2.gap == 3);
    REQUIRE(l2.placements.size() == 2);
    CHECK(l2.placements[0].id == 4);
    CHECK(l2.placements[1].left == 11);
}

TEST_CASE("reconstruction record round trip")
{
    ReconstructionRecord r;
    r.rec.chains.push_back({{{3, false}, {1, true}}, {SeamScore(1)}});
    r.rec.chains.push_back({{{0, true}, {2, false}, {4, false}}, {SeamScore(2), SeamScore(1)}});
    r.rec.unplaced = {5, 6};
    r.evaluations = 42;
    r.early_stop = true;
    r.hints = false;

    const ReconstructionRecord back = reconstruction_from_json(to_json(r));
    REQUIRE(back.rec.chains.size() == 2);
    CHECK(back.rec.chains[0].members == r.rec.chains[0].members);
    CHECK(back.rec.chains[1].members == r.rec.chains[1].members);
    CHECK(back.rec.unplaced == r.rec.unplaced);
    CHECK(back.evaluations == 42);
    CHECK(back.early_stop);
    CHECK_FALSE(back.hints);

    Json empty_chain = to_json(r);
    empty_chain["chains"].push_back(Json::array());
    CHECK_THROWS_AS(reconstruction_from_json(empty_chain), FormatError);
    Json bad_unplaced = to_json(r);
    bad_unplaced["unplaced"].push_back("x");
    CHECK_THROWS_AS(reconstruction_from_json(bad_unplaced), FormatError);
}

TEST_CASE("reports")
{
    const EvalReport r{0.75, 0.5, 1, 16, 2, DocClass::Handwritten};
    const EvalReport back = report_from_json(to_json(r));
    CHECK(back.adjacency_accuracy == 0.75);
    CHECK(back.page_purity == 0.5);
    CHECK(back.pages_perfect == 1);
    CHECK(back.strips_total == 16);
    CHECK(back.strips_unplaced == 2);
    CHECK(back.doc_class == DocClass::Handwritten);

    Json bad = to_json(r);
    bad["doc_class"] = "sonnet";
    CHECK_THROWS_AS(report_from_json(bad), FormatError);

    const std::string table = report_table({r, EvalReport{1.0, 1.0, 2, 16, 0, DocClass::Image}});
    CHECK(table.find("handwritten") != std::string::npos);
    CHECK(table.find("0.7500") != std::string::npos);
    CHECK(table.find("image") != std::string::npos);
    CHECK(std::count(table.begin(), table.end(), '\n') == 3);
}

TEST_CASE("json files")
{
    const fs::path dir = scratch("files");
    const std::string path = (dir / "a.json").string();
    const Json j = {{"b", 1}, {"a", {1, 2}}};
    write_json_file(path, j);
    CHECK(read_json_file(path) == j);

    std::ifstream in(path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.back() == '\n');
    CHECK(text.find("\"b\"") < text.find("\"a\""));

    {
        std::ofstream broken(dir / "broken.json");
        broken << "{\"a\": ";
    }
    CHECK_THROWS_AS(read_json_file((dir / "broken.json").string()), FormatError);
    CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()), Error);
    CHECK_THROWS_AS(write_json_file((dir / "no" / "such" / "dir.json").string(), j), Error);
    fs::remove_all(dir);
}
