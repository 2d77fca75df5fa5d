#pragma once

#include "unshred/raster.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace unshred {

using StripId = int;

// Where a strip came from. `flipped` means the strip raster is the 180 degree
// rotation of page columns [first_column, first_column + width).
struct Provenance {
    int page = 0;
    int position = 0;
    bool flipped = false;

    bool operator==(const Provenance&) const = default;
};

struct Strip {
    StripId id = 0;
    BinaryRaster raster;
};

struct StripGeometry {
    int page_width = 0;
    int page_height = 0;
    int strip_width = 0;  // nominal width floor(X/m); the last strip absorbs the remainder
};

struct StripSet {
    std::vector<Strip> strips;
    StripGeometry geometry;
};

struct GroundTruth {
    int pages = 0;
    int strips_per_page = 0;
    std::map<StripId, Provenance> placement;

    const Provenance& at(StripId id) const;
    bool contains(StripId id) const { return placement.contains(id); }
};

struct ShredResult {
    StripSet set;
    GroundTruth truth;
};

// Page column range of strip `position`: [first, first + width).
struct ColumnRange {
    int first = 0;
    int width = 0;
};
ColumnRange strip_columns(int page_width, int m, int position);

// Cuts one page into m vertical strips, shuffles them and flips each with a
// fair coin. Strip ids are the shuffled output positions.
ShredResult shred(const BinaryRaster& page, int m, std::uint64_t seed);

// All pages must share dimensions; the union of strips is shuffled globally.
ShredResult shred_document(const std::vector<BinaryRaster>& pages, int m, std::uint64_t seed);

// Where a strip landed on a composed sheet.
struct SheetPlacement {
    StripId id = 0;
    int left = 0;
    int top = 0;
    int width = 0;
    int height = 0;
};

struct Sheet {
    GrayRaster image;
    std::vector<SheetPlacement> placements;
};

inline constexpr std::uint8_t kSheetBackground = 0;
inline constexpr std::uint8_t kSheetInk = 64;
inline constexpr std::uint8_t kSheetPaper = 255;

// Lays strips out on a black canvas, shelf-packed in seed-shuffled order,
// with at least `gap` background pixels around every strip.
Sheet compose_sheet(const std::vector<Strip>& strips, int gap, std::uint64_t seed);

}  // namespace unshred
