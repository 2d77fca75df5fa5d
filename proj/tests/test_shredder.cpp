#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/generators.hpp"

#include "unshred/errors.hpp"
#include "unshred/shredder.hpp"

using namespace unshred;

namespace {

BinaryRaster page_by_position(const ShredResult& r, int page)
{
    Chain c;
    for (const auto& chain : testgen::truth_reconstruction(r.truth).chains) {
        if (r.truth.at(chain.members.front().id).page == page) {
            c = chain;
        }
    }
    return stitch(c, testgen::raster_map(r.set));
}

}  // namespace

TEST_CASE("m = 1 returns the page itself")
{
    Rng rng(1);
    const BinaryRaster page = testgen::random_binary(rng, 6, 4);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const ShredResult r = shred(page, 1, seed);
        REQUIRE(r.set.strips.size() == 1);
        const Provenance& p = r.truth.at(0);
        CHECK(p.page == 0);
        CHECK(p.position == 0);
        CHECK(r.set.strips[0].raster == (p.flipped ? rotate180(page) : page));
    }
}

TEST_CASE("strips cover the expected column ranges")
{
    Rng rng(2);
    const BinaryRaster page = testgen::random_binary(rng, 6, 4);
    const ShredResult r = shred(page, 3, 9);
    REQUIRE(r.set.strips.size() == 3);
    for (const auto& s : r.set.strips) {
        const Provenance& p = r.truth.at(s.id);
        const BinaryRaster upright = p.flipped ? rotate180(s.raster) : s.raster;
        CHECK(upright == crop_columns(page, 2 * p.position, 2));
    }
}

TEST_CASE("the last strip absorbs the remainder")
{
    CHECK(strip_columns(7, 3, 0).width == 2);
    CHECK(strip_columns(7, 3, 1).width == 2);
    CHECK(strip_columns(7, 3, 2).first == 4);
    CHECK(strip_columns(7, 3, 2).width == 3);

    Rng rng(3);
    const BinaryRaster page = testgen::random_binary(rng, 7, 4);
    const ShredResult r = shred(page, 3, 4);
    CHECK(page_by_position(r, 0) == page);
}

TEST_CASE("shred_document")
{
    SUBCASE("two blank pages")
    {
        const ShredResult r = shred_document({BinaryRaster(4, 4, 0), BinaryRaster(4, 4, 0)}, 2, 1);
        CHECK(r.set.strips.size() == 4);
        for (const auto& s : r.set.strips) {
            CHECK(ink_count(s.raster) == 0);
        }
    }
    SUBCASE("one page matches shred")
    {
        Rng rng(4);
        const BinaryRaster page = testgen::random_binary(rng, 9, 5);
        const ShredResult a = shred(page, 3, 77);
        const ShredResult b = shred_document({page}, 3, 77);
        CHECK(a.truth.placement == b.truth.placement);
        for (std::size_t k = 0; k < a.set.strips.size(); ++k) {
            CHECK(a.set.strips[k].raster == b.set.strips[k].raster);
        }
    }
    SUBCASE("distinct pages keep their column content")
    {
        Rng rng(5);
        const std::vector<BinaryRaster> pages = {testgen::random_binary(rng, 6, 5), testgen::random_binary(rng, 6, 5)};
        const ShredResult r = shred_document(pages, 3, 12);
        CHECK(r.set.strips.size() == 6);
        for (const auto& s : r.set.strips) {
            const Provenance& p = r.truth.at(s.id);
            const ColumnRange cols = strip_columns(6, 3, p.position);
            const BinaryRaster upright = p.flipped ? rotate180(s.raster) : s.raster;
            CHECK(upright == crop_columns(pages[static_cast<std::size_t>(p.page)], cols.first, cols.width));
        }
        CHECK(page_by_position(r, 0) == pages[0]);
        CHECK(page_by_position(r, 1) == pages[1]);
    }
}

TEST_CASE("shredding is seed-determined and conserves ink")
{
    Rng rng(6);
    for (int i = 0; i < 100; ++i) {
        const int width = rng.between(2, 40);
        const int m = rng.between(1, width / 2);
        const int height = rng.between(1, 12);
        std::vector<BinaryRaster> pages;
        std::size_t ink = 0;
        for (int p = rng.between(1, 3); p > 0; --p) {
            pages.push_back(testgen::random_binary(rng, width, height));
            ink += ink_count(pages.back());
        }
        const std::uint64_t seed = rng.below(1000);
        const ShredResult a = shred_document(pages, m, seed);
        const ShredResult b = shred_document(pages, m, seed);
        REQUIRE(a.truth.placement == b.truth.placement);
        REQUIRE(a.set.strips.size() == pages.size() * static_cast<std::size_t>(m));
        std::size_t strip_ink = 0;
        for (std::size_t k = 0; k < a.set.strips.size(); ++k) {
            REQUIRE(a.set.strips[k].raster == b.set.strips[k].raster);
            strip_ink += ink_count(a.set.strips[k].raster);
        }
        REQUIRE(strip_ink == ink);
        for (int p = 0; p < static_cast<int>(pages.size()); ++p) {
            REQUIRE(page_by_position(a, p) == pages[static_cast<std::size_t>(p)]);
        }
    }
}

TEST_CASE("shred rejects bad geometry")
{
    CHECK_THROWS_AS(shred(BinaryRaster(1, 4), 1, 0), GeometryError);
    CHECK_THROWS_AS(shred(BinaryRaster(8, 4), 0, 0), GeometryError);
    CHECK_THROWS_AS(shred(BinaryRaster(8, 4), 5, 0), GeometryError);
    CHECK_THROWS_AS(shred_document({}, 2, 0), GeometryError);
    CHECK_THROWS_AS(shred_document({BinaryRaster(8, 4), BinaryRaster(8, 5)}, 2, 0), GeometryError);
    CHECK_THROWS_AS(GroundTruth{}.at(3), ConsistencyError);
}

TEST_CASE("compose_sheet")
{
    SUBCASE("empty input gives a small black canvas")
    {
        const Sheet s = compose_sheet({}, 3, 0);
        CHECK(s.placements.empty());
        CHECK(s.image == GrayRaster(3, 3, kSheetBackground));
    }
    SUBCASE("one paper strip with gap 1")
    {
        const Sheet s = compose_sheet({{0, BinaryRaster(2, 4, 0)}}, 1, 0);
        GrayRaster expected(4, 6, kSheetBackground);
        for (int y = 1; y <= 4; ++y) {
            for (int x = 1; x <= 2; ++x) {
                expected.set(x, y, kSheetPaper);
            }
        }
        CHECK(s.image == expected);
    }
    SUBCASE("strips keep their gap and content")
    {
        Rng rng(8);
        for (int i = 0; i < 30; ++i) {
            std::vector<Strip> strips;
            for (int k = rng.between(1, 12); k > 0; --k) {
                strips.push_back({static_cast<StripId>(strips.size()),
                                  testgen::random_binary(rng, rng.between(1, 9), rng.between(1, 9))});
            }
            const int gap = rng.between(1, 4);
            const Sheet s = compose_sheet(strips, gap, rng.below(100));
            REQUIRE(s.placements.size() == strips.size());
            for (const auto& a : s.placements) {
                REQUIRE(a.left >= gap);
                REQUIRE(a.top >= gap);
                REQUIRE(a.left + a.width + gap <= s.image.width());
                REQUIRE(a.top + a.height + gap <= s.image.height());
                for (const auto& b : s.placements) {
                    if (a.id == b.id) {
                        continue;
                    }
                    const bool apart = a.left + a.width + gap <= b.left || b.left + b.width + gap <= a.left ||
                                       a.top + a.height + gap <= b.top || b.top + b.height + gap <= a.top;
                    REQUIRE(apart);
                }
                const BinaryRaster& raster = strips[static_cast<std::size_t>(a.id)].raster;
                for (int y = 0; y < a.height; ++y) {
                    for (int x = 0; x < a.width; ++x) {
                        REQUIRE(s.image.at(a.left + x, a.top + y) == (raster.at(x, y) ? kSheetInk : kSheetPaper));
                    }
                }
            }
        }
    }
    CHECK_THROWS_AS(compose_sheet({}, 0, 0), GeometryError);
}
