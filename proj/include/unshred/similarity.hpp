#pragma once

#include "unshred/preprocess.hpp"
#include "unshred/raster.hpp"

#include <array>
#include <bitset>
#include <climits>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace unshred {

// A 4x4 binary grid packed row-major: bit (4 * row + col) is cell (row, col).
using WindowCode = std::uint16_t;

struct Template {
    WindowCode cells = 0;

    bool at(int row, int col) const { return (cells >> (4 * row + col)) & 1u; }
    // "0110..." row-major, 16 characters
    std::string to_string() const;
    static Template from_string(std::string_view s);

    bool operator==(const Template&) const = default;
};

// The set of 4x4 continuity patterns. Membership is a single bit lookup.
class TemplateBank {
public:
    TemplateBank() = default;
    explicit TemplateBank(std::vector<Template> templates);

    std::span<const Template> templates() const noexcept { return templates_; }
    std::size_t size() const noexcept { return templates_.size(); }
    bool contains(WindowCode code) const { return members_[code]; }

private:
    std::vector<Template> templates_;  // sorted by to_string(), no duplicates
    std::bitset<65536> members_;
};

// Six base shapes (horizontal, vertical and diagonal lines; horizontal,
// vertical and diagonal polygon edges) closed under mirrors, quarter turns and
// translations. Lines and edges are treated as infinite, so translating an
// edge can fill the whole window. Templates without ink are dropped.
TemplateBank build_template_bank();

// Debug view: every template scaled up on a gray contact sheet.
GrayRaster template_contact_sheet(const TemplateBank& bank);

struct SeamWindow {
    WindowCode cells = 0;
    int y_offset = 0;
};

// Columns of strip p adjacent to the seam, p on the left.
struct RightPair {
    std::span<const std::uint8_t> inner;
    std::span<const std::uint8_t> outer;
};

// Columns of strip q adjacent to the seam, q on the right.
struct LeftPair {
    std::span<const std::uint8_t> outer;
    std::span<const std::uint8_t> inner;
};

RightPair right_pair(const EdgeProfile& e);
LeftPair left_pair(const EdgeProfile& e);

// Window columns are [p.inner, p.outer, q.outer, q.inner], one window per
// row offset 0..Y-4.
std::vector<SeamWindow> seam_windows(const RightPair& p, const LeftPair& q);

class SeamScore {
public:
    static constexpr int kUnmatchableValue = INT_MAX;

    constexpr SeamScore() = default;
    constexpr explicit SeamScore(int value) : value_(value) {}
    static constexpr SeamScore unmatchable() { return SeamScore(kUnmatchableValue); }

    constexpr int value() const noexcept { return value_; }
    constexpr bool is_unmatchable() const noexcept { return value_ == kUnmatchableValue; }
    constexpr bool is_perfect() const noexcept { return value_ == 1; }

    constexpr auto operator<=>(const SeamScore&) const = default;

private:
    int value_ = kUnmatchableValue;
};

struct SeamTrace {
    SeamScore score;
    int informative_windows = 0;
    int hits = 0;
};

// 1 + (informative windows that are not templates); unmatchable when no
// window carries ink.
SeamTrace seam_trace(const RightPair& p, const LeftPair& q, const TemplateBank& bank);
SeamScore seam_score(const RightPair& p, const LeftPair& q, const TemplateBank& bank);

// The four edge pairings of one ordered strip pair, in priority order.
// Each fixes how p and q are shown: inverted means rotated 180 degrees.
enum class Orientation : std::uint8_t {
    RightLeft = 0,                // p right edge   | q left edge
    RightInvertedRight = 1,       // p right edge   | q inverted right edge
    InvertedLeftLeft = 2,         // p inverted left | q left edge
    InvertedLeftInvertedRight = 3 // p inverted left | q inverted right
};

inline constexpr std::array<Orientation, 4> kAllOrientations = {
    Orientation::RightLeft, Orientation::RightInvertedRight, Orientation::InvertedLeftLeft,
    Orientation::InvertedLeftInvertedRight};

constexpr bool p_flipped(Orientation o) { return o == Orientation::InvertedLeftLeft || o == Orientation::InvertedLeftInvertedRight; }
constexpr bool q_flipped(Orientation o) { return o == Orientation::RightInvertedRight || o == Orientation::InvertedLeftInvertedRight; }
constexpr Orientation orientation_of(bool p_flip, bool q_flip)
{
    return static_cast<Orientation>((p_flip ? 2 : 0) + (q_flip ? 1 : 0));
}

std::string_view orientation_name(Orientation o);

class OrientationSet {
public:
    constexpr OrientationSet() = default;
    static constexpr OrientationSet all() { return OrientationSet(0b1111); }
    static constexpr OrientationSet only(Orientation o) { return OrientationSet(static_cast<std::uint8_t>(1u << static_cast<int>(o))); }

    constexpr bool contains(Orientation o) const { return (bits_ >> static_cast<int>(o)) & 1u; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr OrientationSet without(Orientation o) const
    {
        return OrientationSet(static_cast<std::uint8_t>(bits_ & ~(1u << static_cast<int>(o))));
    }
    int count() const;

private:
    constexpr explicit OrientationSet(std::uint8_t bits) : bits_(bits) {}
    std::uint8_t bits_ = 0;
};

// Edge profile of the strip after a 180 degree turn: every column swaps side
// and reverses.
EdgeProfile rotated(const EdgeProfile& e);

// Both presentations of one strip, prepared once for repeated matching.
struct PreparedEdges {
    EdgeProfile upright;
    EdgeProfile inverted;

    explicit PreparedEdges(EdgeProfile e) : upright(std::move(e)), inverted(rotated(upright)) {}
    const EdgeProfile& as_shown(bool flipped) const { return flipped ? inverted : upright; }
};

struct PairMatch {
    SeamScore best;
    Orientation at = Orientation::RightLeft;
    int evaluations = 0;
};

// Scores every requested orientation and keeps the lowest score; ties go to
// the earlier orientation.
PairMatch match_pair(const PreparedEdges& p, const PreparedEdges& q, const TemplateBank& bank,
                     OrientationSet orientations = OrientationSet::all());
PairMatch match_pair(const BinaryRaster& p, const BinaryRaster& q, const TemplateBank& bank,
                     OrientationSet orientations = OrientationSet::all());

}  // namespace unshred
