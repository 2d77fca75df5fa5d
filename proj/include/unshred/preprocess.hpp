#pragma once

#include "unshred/raster.hpp"
#include "unshred/shredder.hpp"

#include <vector>

namespace unshred {

using Column = std::vector<std::uint8_t>;

// The two outermost pixel columns on each side of a strip.
// left_outer/left_inner are columns 0/1, right_outer/right_inner are
// columns width-1/width-2.
struct EdgeProfile {
    Column left_outer;
    Column left_inner;
    Column right_inner;
    Column right_outer;

    int height() const noexcept { return static_cast<int>(left_outer.size()); }
    bool operator==(const EdgeProfile&) const = default;
};

enum class Upright { ConfidentUpright, ConfidentFlippedAndCorrected, Ambiguous };

struct OrientedStrip {
    BinaryRaster raster;  // rotated 180 degrees iff ConfidentFlippedAndCorrected
    Upright upright = Upright::Ambiguous;

    bool confident() const noexcept { return upright != Upright::Ambiguous; }
};

inline constexpr double kDefaultBlankEpsilon = 0.001;
// Required upper/lower ink ratio for a confident call.
inline constexpr double kOrientationConfidence = 1.15;

double ink_density(const BinaryRaster& strip);

struct BlankPartition {
    std::vector<Strip> kept;
    std::vector<Strip> removed;
};

// Keeps strips with ink_density > epsilon. Both halves preserve input order.
BlankPartition remove_blanks(const std::vector<Strip>& strips, double epsilon = kDefaultBlankEpsilon);

// Ascender-asymmetry heuristic: text bands are the maximal runs of rows with
// more ink than the strip's mean row; Latin-like text carries more ink in the
// upper third of each band than in the lower third.
OrientedStrip normalize_orientation(const BinaryRaster& strip);

EdgeProfile edge_profile(const BinaryRaster& strip);

}  // namespace unshred
