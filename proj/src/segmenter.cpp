#include "unshred/segmenter.hpp"

#include "unshred/errors.hpp"

#include <algorithm>
#include <tuple>

namespace unshred {

std::vector<SegmentedStrip> segment_sheet(const GrayRaster& sheet, const SegmenterOptions& options)
{
    const int w = sheet.width();
    const int h = sheet.height();
    const auto is_foreground = [&](int x, int y) { return sheet.at(x, y) > options.background_threshold; };

    // Flood fill with an explicit stack; labels are 1-based, 0 = unvisited.
    std::vector<int> label(static_cast<std::size_t>(w) * h, 0);
    std::vector<Bounds> boxes;
    std::vector<std::pair<int, int>> stack;
    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            if (!is_foreground(x0, y0) || label[static_cast<std::size_t>(y0) * w + x0] != 0) {
                continue;
            }
            if (boxes.size() >= options.max_components) {
                throw FragmentationError("segment: sheet too fragmented (more than " +
                                         std::to_string(options.max_components) + " components)");
            }
            const int current = static_cast<int>(boxes.size()) + 1;
            int min_x = x0, max_x = x0, min_y = y0, max_y = y0;
            label[static_cast<std::size_t>(y0) * w + x0] = current;
            stack.push_back({x0, y0});
            while (!stack.empty()) {
                const auto [x, y] = stack.back();
                stack.pop_back();
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
                constexpr int dx[4] = {1, -1, 0, 0};
                constexpr int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = x + dx[k];
                    const int ny = y + dy[k];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) {
                        continue;
                    }
                    int& l = label[static_cast<std::size_t>(ny) * w + nx];
                    if (l == 0 && is_foreground(nx, ny)) {
                        l = current;
                        stack.push_back({nx, ny});
                    }
                }
            }
            boxes.push_back({min_x, min_y, max_x - min_x + 1, max_y - min_y + 1});
        }
    }

    std::vector<std::size_t> order(boxes.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(boxes[a].top, boxes[a].left) < std::tie(boxes[b].top, boxes[b].left);
    });

    std::vector<SegmentedStrip> out;
    out.reserve(boxes.size());
    for (const std::size_t i : order) {
        const Bounds& b = boxes[i];
        BinaryRaster raster(b.width, b.height, 0);
        for (int y = 0; y < b.height; ++y) {
            for (int x = 0; x < b.width; ++x) {
                const int v = sheet.at(b.left + x, b.top + y);
                // in-box background counts as paper
                const bool ink = v > options.background_threshold && v < options.ink_threshold;
                raster.set(x, y, ink ? 1 : 0);
            }
        }
        out.push_back({static_cast<int>(out.size()), b, std::move(raster)});
    }
    return out;
}

}  // namespace unshred
