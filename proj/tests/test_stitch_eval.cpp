#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/generators.hpp"

#include "unshred/errors.hpp"
#include "unshred/preprocess.hpp"
#include "unshred/stitch_eval.hpp"

#include <algorithm>
#include <numeric>

using namespace unshred;

namespace {

// n pages of m strips; strip id = page * m + position, nothing flipped.
GroundTruth plain_truth(int n, int m)
{
    GroundTruth gt;
    gt.pages = n;
    gt.strips_per_page = m;
    for (int p = 0; p < n; ++p) {
        for (int k = 0; k < m; ++k) {
            gt.placement[p * m + k] = {p, k, false};
        }
    }
    return gt;
}

Chain chain_of(std::initializer_list<ChainMember> members)
{
    Chain c;
    c.members = members;
    c.seam_scores.assign(c.members.size() - 1, SeamScore(1));
    return c;
}

Chain upright(std::vector<StripId> ids)
{
    Chain c;
    for (const StripId id : ids) {
        c.members.push_back({id, false});
    }
    c.seam_scores.assign(c.members.size() - 1, SeamScore(1));
    return c;
}

long long differing_pixels(const BinaryRaster& a, const BinaryRaster& b)
{
    long long n = 0;
    for (int y = 0; y < a.height(); ++y) {
        for (int x = 0; x < a.width(); ++x) {
            n += a.at(x, y) != b.at(x, y) ? 1 : 0;
        }
    }
    return n;
}

}  // namespace

TEST_CASE("stitch")
{
    SUBCASE("concatenates in chain order")
    {
        BinaryRaster a(2, 2, 0);
        a.set(0, 0, 1);
        const BinaryRaster b(1, 2, 1);
        const std::map<StripId, BinaryRaster> strips{{7, a}, {3, b}};
        const BinaryRaster out = stitch(chain_of({{7, false}, {3, false}}), strips);
        CHECK(out == BinaryRaster(3, 2, {1, 0, 1, 0, 0, 1}));
        const BinaryRaster turned = stitch(chain_of({{3, false}, {7, true}}), strips);
        CHECK(turned == BinaryRaster(3, 2, {1, 0, 0, 1, 0, 1}));
    }
    SUBCASE("errors")
    {
        const std::map<StripId, BinaryRaster> strips{{0, BinaryRaster(2, 3, 0)}, {1, BinaryRaster(2, 4, 0)}};
        CHECK_THROWS_AS(stitch(chain_of({{0, false}, {1, false}}), strips), GeometryError);
        CHECK_THROWS_AS(stitch(chain_of({{0, false}, {9, false}}), strips), ConsistencyError);
        CHECK_THROWS_AS(stitch(Chain{}, strips), GeometryError);
    }
}

TEST_CASE("stitching the ground truth restores every page")
{
    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        const int m = rng.between(1, 8);
        const int n = rng.between(1, 3);
        const int width = rng.between(2 * m, 40);
        const int height = rng.between(1, 20);
        std::vector<BinaryRaster> pages;
        for (int p = 0; p < n; ++p) {
            pages.push_back(testgen::random_binary(rng, width, height, rng.between(0, 100)));
        }
        const ShredResult doc = shred_document(pages, m, rng.below(1u << 30));
        const auto rasters = testgen::raster_map(doc.set);
        const Reconstruction truth = testgen::truth_reconstruction(doc.truth);
        REQUIRE(truth.chains.size() == static_cast<std::size_t>(n));
        for (int p = 0; p < n; ++p) {
            REQUIRE(stitch(truth.chains[static_cast<std::size_t>(p)], rasters) == pages[static_cast<std::size_t>(p)]);
        }
    }
}

TEST_CASE("a wrongly turned middle strip changes exactly its own pixels")
{
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        const BinaryRaster page = testgen::random_binary(rng, 12, 9, 40);
        const ShredResult doc = shred(page, 3, rng.below(1u << 30));
        const auto rasters = testgen::raster_map(doc.set);
        Chain c = testgen::truth_reconstruction(doc.truth).chains.front();
        const StripId middle = c.members[1].id;
        c.members[1].flipped = !c.members[1].flipped;
        const BinaryRaster& raw = rasters.at(middle);
        CHECK(differing_pixels(stitch(c, rasters), page) == differing_pixels(raw, rotate180(raw)));
    }
}

TEST_CASE("metrics on hand-made reconstructions")
{
    const GroundTruth gt = plain_truth(1, 4);
    SUBCASE("perfect")
    {
        Reconstruction r;
        r.chains.push_back(upright({0, 1, 2, 3}));
        const EvalReport e = evaluate(r, gt, DocClass::Image);
        CHECK(e.adjacency_accuracy == 1.0);
        CHECK(e.page_purity == 1.0);
        CHECK(e.pages_perfect == 1);
        CHECK(e.strips_total == 4);
        CHECK(e.strips_unplaced == 0);
        CHECK(e.doc_class == DocClass::Image);
    }
    SUBCASE("read backwards and turned")
    {
        Reconstruction r;
        r.chains.push_back(chain_of({{3, true}, {2, true}, {1, true}, {0, true}}));
        CHECK(adjacency_accuracy(r, gt) == 1.0);
        CHECK(pages_perfect(r, gt) == 1);
    }
    SUBCASE("reversed order without turning recovers nothing")
    {
        Reconstruction r;
        r.chains.push_back(upright({3, 2, 1, 0}));
        CHECK(adjacency_accuracy(r, gt) == 0.0);
        CHECK(pages_perfect(r, gt) == 0);
        CHECK(page_purity(r, gt) == 1.0);
    }
    SUBCASE("two of three seams")
    {
        Reconstruction r;
        r.chains.push_back(upright({0, 1, 2}));
        r.unplaced = {3};
        CHECK(adjacency_accuracy(r, gt) == doctest::Approx(2.0 / 3.0));
        CHECK(pages_perfect(r, gt) == 0);
        CHECK(evaluate(r, gt, DocClass::Typeset).strips_unplaced == 1);
    }
    SUBCASE("removed strips close the gap")
    {
        Reconstruction r;
        r.chains.push_back(upright({0, 2, 3}));
        CHECK(adjacency_accuracy(r, gt) == 1.0);
        CHECK(pages_perfect(r, gt) == 1);
    }
    SUBCASE("nothing to recover")
    {
        CHECK(adjacency_accuracy(Reconstruction{}, gt) == 1.0);
        CHECK(page_purity(Reconstruction{}, gt) == 1.0);
    }
    SUBCASE("unknown strips")
    {
        Reconstruction r;
        r.chains.push_back(upright({0, 11}));
        CHECK_THROWS_AS(evaluate(r, gt, DocClass::Typeset), ConsistencyError);
    }
}

TEST_CASE("page purity")
{
    const GroundTruth gt = plain_truth(2, 4);
    Reconstruction clean;
    clean.chains = {upright({0, 1, 2, 3}), upright({4, 5, 6, 7})};
    CHECK(page_purity(clean, gt) == 1.0);
    CHECK(pages_perfect(clean, gt) == 2);

    Reconstruction mixed;
    mixed.chains = {upright({0, 1, 4, 5}), upright({2, 3, 6, 7})};
    CHECK(page_purity(mixed, gt) == 0.5);
    CHECK(adjacency_accuracy(mixed, gt) == doctest::Approx(4.0 / 6.0));

    Reconstruction weighted;
    weighted.chains = {upright({0, 1, 2}), upright({3, 4, 5, 6, 7})};
    CHECK(page_purity(weighted, gt) == doctest::Approx((3.0 + 4.0) / 8.0));
}

TEST_CASE("random arrangements of two four-strip pages average 22/35 purity")
{
    // hypergeometric: P(k of page 0 in the first chain) = C(4,k)C(4,4-k)/70
    const GroundTruth gt = plain_truth(2, 4);
    std::vector<StripId> order(8);
    std::iota(order.begin(), order.end(), 0);
    double total = 0.0;
    long long count = 0;
    do {
        Reconstruction r;
        r.chains = {upright({order[0], order[1], order[2], order[3]}),
                    upright({order[4], order[5], order[6], order[7]})};
        total += page_purity(r, gt);
        ++count;
    } while (std::next_permutation(order.begin(), order.end()));
    CHECK(count == 40320);
    CHECK(total / static_cast<double>(count) == doctest::Approx(22.0 / 35.0).epsilon(1e-12));
}

TEST_CASE("document classes")
{
    for (const DocClass c : kAllDocClasses) {
        CHECK(parse_doc_class(doc_class_name(c)) == c);
        const BinaryRaster a = generate_corpus(c, 128, 96, 17);
        CHECK(a == generate_corpus(c, 128, 96, 17));
        CHECK(a != generate_corpus(c, 128, 96, 18));
        CHECK(a.width() == 128);
        CHECK(a.height() == 96);
        const double density = ink_density(a);
        CHECK(density > 0.05);
        CHECK(density < 0.9);
    }
    CHECK_FALSE(parse_doc_class("poetry").has_value());
    CHECK_THROWS_AS(generate_corpus(DocClass::Image, 15, 64, 1), GeometryError);
    CHECK_THROWS_AS(generate_corpus(DocClass::Typeset, 64, 8, 1), GeometryError);
}

TEST_CASE("image seams on the 16 column grid are perfect")
{
    const TemplateBank bank = build_template_bank();
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const int cells = 2 + static_cast<int>(seed % 7);
        const BinaryRaster page = generate_corpus(DocClass::Image, 16 * cells, 48 + static_cast<int>(seed % 5) * 16, seed);
        for (int k = 1; k < cells; ++k) {
            const BinaryRaster left = crop_columns(page, 16 * (k - 1), 16);
            const BinaryRaster right = crop_columns(page, 16 * k, 16);
            const SeamScore s =
                seam_score(right_pair(edge_profile(left)), left_pair(edge_profile(right)), bank);
            REQUIRE(s.is_perfect());
        }
    }
}
