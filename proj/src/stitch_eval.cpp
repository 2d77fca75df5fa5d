#include "unshred/stitch_eval.hpp"

#include "unshred/errors.hpp"
#include "unshred/rng.hpp"

#include <algorithm>
#include <set>

namespace unshred {

std::string_view doc_class_name(DocClass c)
{
    switch (c) {
    case DocClass::Handwritten: return "handwritten";
    case DocClass::Typeset: return "typeset";
    case DocClass::Image: return "image";
    }
    return "?";
}

std::optional<DocClass> parse_doc_class(std::string_view name)
{
    for (const DocClass c : kAllDocClasses) {
        if (doc_class_name(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

BinaryRaster stitch(const Chain& chain, const std::map<StripId, BinaryRaster>& strips)
{
    if (chain.members.empty()) {
        throw GeometryError("stitch: empty chain");
    }
    std::vector<const BinaryRaster*> parts;
    std::vector<BinaryRaster> turned;
    turned.reserve(chain.members.size());
    int width = 0;
    int height = -1;
    for (const auto& m : chain.members) {
        const auto it = strips.find(m.id);
        if (it == strips.end()) {
            throw ConsistencyError("stitch: unknown strip " + std::to_string(m.id));
        }
        if (height >= 0 && it->second.height() != height) {
            throw GeometryError("stitch: strip " + std::to_string(m.id) + " has height " +
                                std::to_string(it->second.height()) + ", expected " + std::to_string(height));
        }
        height = it->second.height();
        width += it->second.width();
        if (m.flipped) {
            turned.push_back(rotate180(it->second));
            parts.push_back(&turned.back());
        } else {
            parts.push_back(&it->second);
        }
    }

    std::vector<std::uint8_t> cells;
    cells.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        for (const BinaryRaster* p : parts) {
            const auto row = p->row(y);
            cells.insert(cells.end(), row.begin(), row.end());
        }
    }
    return BinaryRaster(width, height, std::move(cells));
}

namespace {

// Ground truth restricted to the strips present in a reconstruction.
struct Survivors {
    std::map<StripId, StripId> next;  // right neighbour among survivors of the same page
    std::map<int, std::vector<StripId>> by_page;  // position order
    long long pairs = 0;
};

std::vector<StripId> ids_in(const Reconstruction& rec)
{
    std::vector<StripId> ids(rec.unplaced.begin(), rec.unplaced.end());
    for (const auto& c : rec.chains) {
        for (const auto& m : c.members) {
            ids.push_back(m.id);
        }
    }
    return ids;
}

Survivors survivors(const Reconstruction& rec, const GroundTruth& gt)
{
    Survivors s;
    std::map<int, std::vector<std::pair<int, StripId>>> pages;
    for (const StripId id : ids_in(rec)) {
        const Provenance& p = gt.at(id);
        pages[p.page].push_back({p.position, id});
    }
    for (auto& [page, list] : pages) {
        std::sort(list.begin(), list.end());
        auto& ordered = s.by_page[page];
        for (std::size_t k = 0; k < list.size(); ++k) {
            ordered.push_back(list[k].second);
            if (k + 1 < list.size()) {
                s.next[list[k].second] = list[k + 1].second;
                ++s.pairs;
            }
        }
    }
    return s;
}

// True when the member is shown the way the page was printed.
bool shown_upright(const ChainMember& m, const GroundTruth& gt)
{
    return m.flipped == gt.at(m.id).flipped;
}

// The ground-truth pair (left, right) recovered by chain neighbours a, b, if
// any.
std::optional<std::pair<StripId, StripId>> recovered_pair(const ChainMember& a, const ChainMember& b,
                                                         const GroundTruth& gt, const Survivors& s)
{
    const bool ua = shown_upright(a, gt);
    const bool ub = shown_upright(b, gt);
    if (ua != ub) {
        return std::nullopt;
    }
    const StripId left = ua ? a.id : b.id;
    const StripId right = ua ? b.id : a.id;
    const auto it = s.next.find(left);
    if (it != s.next.end() && it->second == right) {
        return std::pair{left, right};
    }
    return std::nullopt;
}

}  // namespace

double adjacency_accuracy(const Reconstruction& rec, const GroundTruth& gt)
{
    const Survivors s = survivors(rec, gt);
    if (s.pairs == 0) {
        return 1.0;
    }
    std::set<std::pair<StripId, StripId>> found;
    for (const auto& c : rec.chains) {
        for (std::size_t k = 1; k < c.members.size(); ++k) {
            if (const auto pair = recovered_pair(c.members[k - 1], c.members[k], gt, s)) {
                found.insert(*pair);
            }
        }
    }
    return static_cast<double>(found.size()) / static_cast<double>(s.pairs);
}

double page_purity(const Reconstruction& rec, const GroundTruth& gt)
{
    long long members = 0;
    long long majority_total = 0;
    for (const auto& c : rec.chains) {
        std::map<int, int> per_page;
        for (const auto& m : c.members) {
            ++per_page[gt.at(m.id).page];
        }
        int majority = 0;
        for (const auto& [page, count] : per_page) {
            majority = std::max(majority, count);
        }
        majority_total += majority;
        members += static_cast<long long>(c.members.size());
    }
    if (members == 0) {
        return 1.0;
    }
    return static_cast<double>(majority_total) / static_cast<double>(members);
}

int pages_perfect(const Reconstruction& rec, const GroundTruth& gt)
{
    const Survivors s = survivors(rec, gt);
    int perfect = 0;
    for (const auto& c : rec.chains) {
        const int page = gt.at(c.members.front().id).page;
        const auto& expected = s.by_page.at(page);
        if (c.members.size() != expected.size()) {
            continue;
        }
        bool ok = std::all_of(c.members.begin(), c.members.end(),
                              [&](const ChainMember& m) { return gt.at(m.id).page == page; });
        for (std::size_t k = 1; ok && k < c.members.size(); ++k) {
            ok = recovered_pair(c.members[k - 1], c.members[k], gt, s).has_value();
        }
        perfect += ok ? 1 : 0;
    }
    return perfect;
}

EvalReport evaluate(const Reconstruction& rec, const GroundTruth& gt, DocClass doc_class)
{
    EvalReport r;
    r.adjacency_accuracy = adjacency_accuracy(rec, gt);
    r.page_purity = page_purity(rec, gt);
    r.pages_perfect = pages_perfect(rec, gt);
    r.strips_total = static_cast<int>(total_members(rec));
    r.strips_unplaced = static_cast<int>(rec.unplaced.size());
    r.doc_class = doc_class;
    return r;
}

namespace {

void fill_rect(BinaryRaster& page, int x0, int y0, int w, int h)
{
    const int x1 = std::min(page.width(), x0 + w);
    const int y1 = std::min(page.height(), y0 + h);
    for (int y = std::max(0, y0); y < y1; ++y) {
        for (int x = std::max(0, x0); x < x1; ++x) {
            page.set(x, y, 1);
        }
    }
}

struct TextStyle {
    int min_glyph = 10;
    int max_glyph = 16;
    int letter_gap_min = 1;
    int letter_gap_max = 2;
    int word_gap_min = 5;
    int word_gap_max = 8;
    int baseline_drift = 0;  // max per-glyph vertical wander, rows
};

constexpr int kGlyphMinRows = 3;

// Pseudo-glyphs hang from the line's cap row. The bottom edge falls one row
// per column, to the right or to the left, down to kGlyphMinRows.
void draw_glyph(BinaryRaster& page, int x, int top, int w, int h, bool falls_right)
{
    for (int k = 0; k < w; ++k) {
        const int run = falls_right ? k : w - 1 - k;
        fill_rect(page, x + k, top, 1, std::max(kGlyphMinRows, h - run));
    }
}

BinaryRaster generate_text(int width, int height, Rng& rng, const TextStyle& style)
{
    BinaryRaster page(width, height, 0);
    const int margin_x = std::max(2, width / 20);
    const int margin_top = std::max(2, height / 16);
    const int line_height = std::max(6, height / 20);
    const int line_gap = std::max(3, line_height / 2) + style.baseline_drift;
    const int min_height = (line_height + 2) / 3;

    for (int top = margin_top + rng.between(0, line_gap); top + line_height + style.baseline_drift <= height - 2;
         top += line_height + line_gap) {
        int x = margin_x + rng.between(0, 3);
        int drift = 0;
        while (true) {
            const int w = rng.between(style.min_glyph, style.max_glyph);
            if (x + w > width - margin_x) {
                break;
            }
            if (style.baseline_drift > 0) {
                drift = std::clamp(drift + rng.between(-1, 1), -style.baseline_drift, style.baseline_drift);
            }
            const int h = rng.between(min_height, line_height);
            draw_glyph(page, x, top + drift, w, h, rng.coin());
            x += w;
            // word break roughly every four glyphs
            x += rng.below(4) == 0 ? rng.between(style.word_gap_min, style.word_gap_max)
                                   : rng.between(style.letter_gap_min, style.letter_gap_max);
        }
    }
    return page;
}

constexpr int kImageCell = 16;

BinaryRaster generate_image(int width, int height, Rng& rng)
{
    BinaryRaster page(width, height, 0);
    const int max_depth = std::clamp((height - 8) / 2, 2, 12);
    const int cells = width / kImageCell + 2;

    int top = rng.between(0, 6);
    while (true) {
        const int bar = rng.between(3, 6);
        const int pitch = bar + max_depth + 3 + rng.between(0, 4);
        if (top + bar + 2 > height) {
            break;
        }
        // depth per cell; cell k is centred on column 16k
        std::vector<int> depth(static_cast<std::size_t>(cells));
        for (auto& d : depth) {
            d = rng.between(2, max_depth);
        }
        std::vector<int> column_depth(static_cast<std::size_t>(width));
        for (int c = 0; c < width; ++c) {
            column_depth[static_cast<std::size_t>(c)] = depth[static_cast<std::size_t>((c + kImageCell / 2) / kImageCell)];
        }
        // 45 degree slope centred on each cell boundary (columns 16k + 8)
        for (int k = 0; k + 1 < cells; ++k) {
            const int from = depth[static_cast<std::size_t>(k)];
            const int to = depth[static_cast<std::size_t>(k + 1)];
            const int span = std::abs(to - from);
            const int start = kImageCell * k + kImageCell / 2 - (span + 1) / 2;
            for (int s = 0; s < span; ++s) {
                const int c = start + s;
                if (c >= 0 && c < width) {
                    column_depth[static_cast<std::size_t>(c)] = from + (to > from ? s + 1 : -(s + 1));
                }
            }
        }
        for (int c = 0; c < width; ++c) {
            fill_rect(page, c, top, 1, bar + column_depth[static_cast<std::size_t>(c)]);
        }
        top += pitch;
    }
    return page;
}

}  // namespace

BinaryRaster generate_corpus(DocClass doc_class, int width, int height, std::uint64_t seed)
{
    if (width < 16 || height < 16) {
        throw GeometryError("corpus pages must be at least 16x16, got " + std::to_string(width) + "x" +
                            std::to_string(height));
    }
    Rng rng(seed);
    switch (doc_class) {
    case DocClass::Typeset:
        return generate_text(width, height, rng, TextStyle{});
    case DocClass::Handwritten:
        return generate_text(width, height, rng, TextStyle{3, 12, 1, 4, 5, 8, 2});
    case DocClass::Image:
        return generate_image(width, height, rng);
    }
    throw InvariantError("unknown document class");
}

}  // namespace unshred
