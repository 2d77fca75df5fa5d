#include "unshred/raster.hpp"

#include "unshred/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>
#include <type_traits>

namespace unshred {

template <typename Cell, typename Tag>
Grid<Cell, Tag>::Grid(int width, int height, Cell fill)
    : width_(width), height_(height)
{
    if (width < 1 || height < 1) {
        throw GeometryError("raster dimensions must be positive, got " + std::to_string(width) + "x" +
                            std::to_string(height));
    }
    cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

template <typename Cell, typename Tag>
Grid<Cell, Tag>::Grid(int width, int height, std::vector<Cell> cells)
    : width_(width), height_(height), cells_(std::move(cells))
{
    if (width < 1 || height < 1) {
        throw GeometryError("raster dimensions must be positive, got " + std::to_string(width) + "x" +
                            std::to_string(height));
    }
    if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw GeometryError("cell count does not match " + std::to_string(width) + "x" + std::to_string(height));
    }
    if constexpr (std::is_same_v<Tag, BinaryTag>) {
        if (std::any_of(cells_.begin(), cells_.end(), [](Cell c) { return c > 1; })) {
            throw GeometryError("binary raster cells must be 0 or 1");
        }
    }
}

template class Grid<std::uint8_t, BinaryTag>;
template class Grid<std::uint8_t, GrayTag>;

BinaryRaster binarize(const GrayRaster& g, int threshold)
{
    std::vector<std::uint8_t> out(g.cells().size());
    std::transform(g.cells().begin(), g.cells().end(), out.begin(),
                   [threshold](std::uint8_t v) { return static_cast<std::uint8_t>(v < threshold ? 1 : 0); });
    return BinaryRaster(g.width(), g.height(), std::move(out));
}

GrayRaster to_gray(const BinaryRaster& b)
{
    std::vector<std::uint8_t> out(b.cells().size());
    std::transform(b.cells().begin(), b.cells().end(), out.begin(),
                   [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 0 : 255); });
    return GrayRaster(b.width(), b.height(), std::move(out));
}

namespace {

class PgmCursor {
public:
    explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

    // Whitespace and '#' comments between header tokens.
    void skip_separators()
    {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') {
                    ++pos_;
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long read_number(const char* what)
    {
        skip_separators();
        if (pos_ >= bytes_.size()) {
            throw PgmError(PgmError::Kind::Truncated, std::string("pgm: truncated while reading ") + what);
        }
        if (!std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            throw PgmError(PgmError::Kind::BadHeader, std::string("pgm: expected a number for ") + what);
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000'000L) {
                throw PgmError(PgmError::Kind::BadHeader, std::string("pgm: value too large for ") + what);
            }
            ++pos_;
        }
        return v;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    char peek() const { return bytes_[pos_]; }
    std::string_view rest() const { return bytes_.substr(pos_); }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

std::uint8_t scale_sample(long v, long maxval)
{
    if (maxval == 255) {
        return static_cast<std::uint8_t>(v);
    }
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
}

}  // namespace

GrayRaster read_pgm(std::string_view bytes)
{
    if (bytes.size() < 2) {
        throw PgmError(PgmError::Kind::BadMagic, "pgm: missing magic number");
    }
    const std::string_view magic = bytes.substr(0, 2);
    const bool binary = magic == "P5";
    if (!binary && magic != "P2") {
        throw PgmError(PgmError::Kind::BadMagic,
                       "pgm: unsupported magic '" + std::string(magic) + "' (expected P5 or P2)");
    }

    PgmCursor cur(bytes);
    cur.advance(2);
    const long width = cur.read_number("width");
    const long height = cur.read_number("height");
    const long maxval = cur.read_number("maxval");
    if (width < 1 || height < 1) {
        throw PgmError(PgmError::Kind::BadHeader, "pgm: dimensions must be positive");
    }
    if (maxval > 255) {
        throw PgmError(PgmError::Kind::MaxvalTooLarge,
                       "pgm: maxval " + std::to_string(maxval) + " exceeds 255 (16-bit samples unsupported)");
    }
    if (maxval < 1) {
        throw PgmError(PgmError::Kind::BadHeader, "pgm: maxval must be at least 1");
    }

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> cells(count);

    if (binary) {
        // exactly one whitespace byte separates the header from the samples
        if (cur.remaining() == 0 || !std::isspace(static_cast<unsigned char>(cur.peek()))) {
            throw PgmError(PgmError::Kind::Truncated, "pgm: missing separator before pixel data");
        }
        cur.advance(1);
        if (cur.remaining() < count) {
            throw PgmError(PgmError::Kind::Truncated, "pgm: truncated pixel data, expected " + std::to_string(count) +
                                                          " bytes, found " + std::to_string(cur.remaining()));
        }
        const std::string_view data = cur.rest().substr(0, count);
        for (std::size_t i = 0; i < count; ++i) {
            const long v = static_cast<unsigned char>(data[i]);
            if (v > maxval) {
                throw PgmError(PgmError::Kind::BadSample, "pgm: sample exceeds maxval at index " + std::to_string(i));
            }
            cells[i] = scale_sample(v, maxval);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const long v = cur.read_number("pixel sample");
            if (v > maxval) {
                throw PgmError(PgmError::Kind::BadSample, "pgm: sample exceeds maxval at index " + std::to_string(i));
            }
            cells[i] = scale_sample(v, maxval);
        }
    }
    return GrayRaster(static_cast<int>(width), static_cast<int>(height), std::move(cells));
}

std::string write_pgm(const GrayRaster& g)
{
    std::string out = "P5\n" + std::to_string(g.width()) + " " + std::to_string(g.height()) + "\n255\n";
    out.append(g.cells().begin(), g.cells().end());
    return out;
}

GrayRaster load_pgm(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "' for reading");
    }
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return read_pgm(bytes);
    } catch (const PgmError& e) {
        throw PgmError(e.kind(), path + ": " + e.what());
    }
}

void save_pgm(const std::string& path, const GrayRaster& g)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    const std::string bytes = write_pgm(g);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("failed writing '" + path + "'");
    }
}

BinaryRaster rotate180(const BinaryRaster& b)
{
    std::vector<std::uint8_t> cells(b.cells().rbegin(), b.cells().rend());
    return BinaryRaster(b.width(), b.height(), std::move(cells));
}

BinaryRaster crop_columns(const BinaryRaster& b, int first, int count)
{
    if (first < 0 || count < 1 || first + count > b.width()) {
        throw GeometryError("column range out of bounds");
    }
    std::vector<std::uint8_t> cells;
    cells.reserve(static_cast<std::size_t>(count) * b.height());
    for (int y = 0; y < b.height(); ++y) {
        const auto row = b.row(y);
        cells.insert(cells.end(), row.begin() + first, row.begin() + first + count);
    }
    return BinaryRaster(count, b.height(), std::move(cells));
}

std::size_t ink_count(const BinaryRaster& b)
{
    return static_cast<std::size_t>(std::count(b.cells().begin(), b.cells().end(), std::uint8_t{1}));
}

}  // namespace unshred
