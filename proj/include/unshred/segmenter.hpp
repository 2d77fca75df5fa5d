#pragma once

#include "unshred/raster.hpp"

#include <vector>

namespace unshred {

struct Bounds {
    int left = 0;
    int top = 0;
    int width = 0;
    int height = 0;

    bool operator==(const Bounds&) const = default;
};

struct SegmentedStrip {
    int id = 0;
    Bounds bounds;
    BinaryRaster raster;
};

struct SegmenterOptions {
    int background_threshold = 16;  // intensity <= this is background
    int ink_threshold = kDefaultThreshold;
    std::size_t max_components = 10'000;
};

// One strip per 4-connected component of non-background pixels, ordered by
// the (top, left) corner of its bounding box.
std::vector<SegmentedStrip> segment_sheet(const GrayRaster& sheet, const SegmenterOptions& options = {});

}  // namespace unshred
