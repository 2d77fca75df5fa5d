#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace unshred {

// Row-major W x H grid. Cell type is 0/1 for BinaryRaster (1 = ink) and an
// 8-bit intensity for GrayRaster (0 = black).
template <typename Cell, typename Tag>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, Cell fill = Cell{});
    Grid(int width, int height, std::vector<Cell> cells);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return cells_.empty(); }

    Cell at(int x, int y) const { return cells_[index(x, y)]; }
    void set(int x, int y, Cell v) { cells_[index(x, y)] = v; }

    std::span<const Cell> cells() const noexcept { return cells_; }
    std::span<const Cell> row(int y) const
    {
        return std::span<const Cell>(cells_).subspan(static_cast<std::size_t>(y) * width_, width_);
    }

    bool operator==(const Grid&) const = default;

private:
    std::size_t index(int x, int y) const
    {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Cell> cells_;
};

struct BinaryTag;
struct GrayTag;

using BinaryRaster = Grid<std::uint8_t, BinaryTag>;
using GrayRaster = Grid<std::uint8_t, GrayTag>;

inline constexpr int kDefaultThreshold = 128;

// 1 iff intensity < threshold.
BinaryRaster binarize(const GrayRaster& g, int threshold = kDefaultThreshold);

// ink -> 0, paper -> 255
GrayRaster to_gray(const BinaryRaster& b);

GrayRaster read_pgm(std::string_view bytes);
std::string write_pgm(const GrayRaster& g);

GrayRaster load_pgm(const std::string& path);
void save_pgm(const std::string& path, const GrayRaster& g);

BinaryRaster rotate180(const BinaryRaster& b);

// Columns [first, first + count).
BinaryRaster crop_columns(const BinaryRaster& b, int first, int count);

std::size_t ink_count(const BinaryRaster& b);

}  // namespace unshred
