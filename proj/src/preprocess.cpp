#include "unshred/preprocess.hpp"

#include "unshred/errors.hpp"

namespace unshred {

double ink_density(const BinaryRaster& strip)
{
    if (strip.empty()) {
        return 0.0;
    }
    return static_cast<double>(ink_count(strip)) / static_cast<double>(strip.cells().size());
}

BlankPartition remove_blanks(const std::vector<Strip>& strips, double epsilon)
{
    if (epsilon < 0.0) {
        throw Error("blank epsilon must be non-negative");
    }
    BlankPartition out;
    for (const auto& s : strips) {
        (ink_density(s.raster) > epsilon ? out.kept : out.removed).push_back(s);
    }
    return out;
}

OrientedStrip normalize_orientation(const BinaryRaster& strip)
{
    const int h = strip.height();
    std::vector<long> projection(static_cast<std::size_t>(h), 0);
    long total = 0;
    for (int y = 0; y < h; ++y) {
        for (const auto v : strip.row(y)) {
            projection[static_cast<std::size_t>(y)] += v;
        }
        total += projection[static_cast<std::size_t>(y)];
    }
    if (total == 0) {
        return {strip, Upright::Ambiguous};
    }

    // A row is in a band iff projection[y] * h > total, i.e. above the mean,
    // kept in integers so the rule is exactly symmetric under rotation.
    long upper = 0;
    long lower = 0;
    int y = 0;
    while (y < h) {
        if (projection[static_cast<std::size_t>(y)] * h <= total) {
            ++y;
            continue;
        }
        const int start = y;
        while (y < h && projection[static_cast<std::size_t>(y)] * h > total) {
            ++y;
        }
        const int third = (y - start) / 3;
        for (int k = 0; k < third; ++k) {
            upper += projection[static_cast<std::size_t>(start + k)];
            lower += projection[static_cast<std::size_t>(y - 1 - k)];
        }
    }

    // ratio > 1.15  <=>  100 * upper > 115 * lower
    if (100 * upper > 115 * lower) {
        return {strip, Upright::ConfidentUpright};
    }
    if (100 * lower > 115 * upper) {
        return {rotate180(strip), Upright::ConfidentFlippedAndCorrected};
    }
    return {strip, Upright::Ambiguous};
}

EdgeProfile edge_profile(const BinaryRaster& strip)
{
    if (strip.width() < 2 || strip.height() < 4) {
        throw DegenerateStripError("edge profile needs a strip of at least 2x4 pixels, got " +
                                   std::to_string(strip.width()) + "x" + std::to_string(strip.height()));
    }
    const auto column = [&](int x) {
        Column c(static_cast<std::size_t>(strip.height()));
        for (int y = 0; y < strip.height(); ++y) {
            c[static_cast<std::size_t>(y)] = strip.at(x, y);
        }
        return c;
    };
    const int w = strip.width();
    return {column(0), column(1), column(w - 2), column(w - 1)};
}

}  // namespace unshred
