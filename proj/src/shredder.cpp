#include "unshred/shredder.hpp"

#include "unshred/errors.hpp"
#include "unshred/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace unshred {

const Provenance& GroundTruth::at(StripId id) const
{
    const auto it = placement.find(id);
    if (it == placement.end()) {
        throw ConsistencyError("strip " + std::to_string(id) + " is not in the ground truth");
    }
    return it->second;
}

ColumnRange strip_columns(int page_width, int m, int position)
{
    const int nominal = page_width / m;
    const int first = position * nominal;
    const int width = position == m - 1 ? page_width - first : nominal;
    return {first, width};
}

ShredResult shred_document(const std::vector<BinaryRaster>& pages, int m, std::uint64_t seed)
{
    if (pages.empty()) {
        throw GeometryError("shred: no pages given");
    }
    const int width = pages.front().width();
    const int height = pages.front().height();
    for (const auto& p : pages) {
        if (p.width() != width || p.height() != height) {
            throw GeometryError("shred: pages differ in dimensions (" + std::to_string(p.width()) + "x" +
                                std::to_string(p.height()) + " vs " + std::to_string(width) + "x" +
                                std::to_string(height) + ")");
        }
    }
    if (width < 2) {
        throw GeometryError("shred: page must be at least 2 pixels wide");
    }
    if (m < 1 || m > width / 2) {
        throw GeometryError("shred: strips per page m=" + std::to_string(m) + " out of range 1.." +
                            std::to_string(width / 2) + " for page width " + std::to_string(width));
    }

    Rng rng(seed);
    std::vector<Provenance> order;
    order.reserve(pages.size() * static_cast<std::size_t>(m));
    for (int i = 0; i < static_cast<int>(pages.size()); ++i) {
        for (int j = 0; j < m; ++j) {
            order.push_back({i, j, rng.coin()});
        }
    }
    rng.shuffle(std::span<Provenance>(order));

    ShredResult result;
    result.set.geometry = {width, height, width / m};
    result.truth.pages = static_cast<int>(pages.size());
    result.truth.strips_per_page = m;
    result.set.strips.reserve(order.size());
    for (int id = 0; id < static_cast<int>(order.size()); ++id) {
        const Provenance& prov = order[static_cast<std::size_t>(id)];
        const ColumnRange cols = strip_columns(width, m, prov.position);
        BinaryRaster raster = crop_columns(pages[static_cast<std::size_t>(prov.page)], cols.first, cols.width);
        if (prov.flipped) {
            raster = rotate180(raster);
        }
        result.set.strips.push_back({id, std::move(raster)});
        result.truth.placement.emplace(id, prov);
    }
    return result;
}

ShredResult shred(const BinaryRaster& page, int m, std::uint64_t seed)
{
    return shred_document({page}, m, seed);
}

Sheet compose_sheet(const std::vector<Strip>& strips, int gap, std::uint64_t seed)
{
    if (gap < 1) {
        throw GeometryError("compose: gap must be at least 1 pixel");
    }
    if (strips.empty()) {
        return {GrayRaster(gap, gap, kSheetBackground), {}};
    }

    std::vector<std::size_t> order(strips.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));

    // Shelf packing towards a roughly square sheet.
    long long area = 0;
    int widest = 0;
    for (const auto& s : strips) {
        area += static_cast<long long>(s.raster.width() + gap) * (s.raster.height() + gap);
        widest = std::max(widest, s.raster.width());
    }
    const int row_limit = std::max(widest, static_cast<int>(std::sqrt(static_cast<double>(area))));

    std::vector<SheetPlacement> placements;
    placements.reserve(strips.size());
    int x = gap;
    int y = gap;
    int row_height = 0;
    int canvas_width = gap;
    for (const std::size_t idx : order) {
        const auto& raster = strips[idx].raster;
        if (x > gap && x + raster.width() > row_limit + gap) {
            y += row_height + gap;
            x = gap;
            row_height = 0;
        }
        placements.push_back({strips[idx].id, x, y, raster.width(), raster.height()});
        x += raster.width() + gap;
        canvas_width = std::max(canvas_width, x);
        row_height = std::max(row_height, raster.height());
    }
    const int canvas_height = y + row_height + gap;

    GrayRaster image(canvas_width, canvas_height, kSheetBackground);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& raster = strips[order[k]].raster;
        const SheetPlacement& p = placements[k];
        for (int yy = 0; yy < raster.height(); ++yy) {
            for (int xx = 0; xx < raster.width(); ++xx) {
                image.set(p.left + xx, p.top + yy, raster.at(xx, yy) ? kSheetInk : kSheetPaper);
            }
        }
    }
    return {std::move(image), std::move(placements)};
}

}  // namespace unshred
