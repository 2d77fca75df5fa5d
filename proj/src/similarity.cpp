#include "unshred/similarity.hpp"

#include "unshred/errors.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace unshred {

std::string Template::to_string() const
{
    std::string s(16, '0');
    for (int i = 0; i < 16; ++i) {
        if ((cells >> i) & 1u) {
            s[static_cast<std::size_t>(i)] = '1';
        }
    }
    return s;
}

Template Template::from_string(std::string_view s)
{
    if (s.size() != 16) {
        throw FormatError("template string must have 16 characters");
    }
    Template t;
    for (int i = 0; i < 16; ++i) {
        if (s[static_cast<std::size_t>(i)] == '1') {
            t.cells = static_cast<WindowCode>(t.cells | (1u << i));
        } else if (s[static_cast<std::size_t>(i)] != '0') {
            throw FormatError("template string may only contain 0 and 1");
        }
    }
    return t;
}

TemplateBank::TemplateBank(std::vector<Template> templates)
{
    std::sort(templates.begin(), templates.end(),
              [](const Template& a, const Template& b) { return a.to_string() < b.to_string(); });
    templates.erase(std::unique(templates.begin(), templates.end()), templates.end());
    templates_ = std::move(templates);
    for (const auto& t : templates_) {
        members_.set(t.cells);
    }
}

namespace {

using Shape = std::function<bool(int row, int col)>;

// Base shapes on the integer plane; the window covers rows/cols 0..3.
const std::array<Shape, 6>& base_shapes()
{
    static const std::array<Shape, 6> shapes = {
        [](int r, int) { return r == 0; },      // horizontal line
        [](int, int c) { return c == 0; },      // vertical line
        [](int r, int c) { return r == c; },    // diagonal line
        [](int r, int) { return r >= 2; },      // horizontal polygon edge
        [](int, int c) { return c >= 2; },      // vertical polygon edge
        [](int r, int c) { return r >= c; },    // diagonal polygon edge
    };
    return shapes;
}

// The 8 symmetries of the square about the window centre, on doubled
// centred coordinates u = 2r - 3, v = 2c - 3.
std::pair<int, int> symmetry(int which, int u, int v)
{
    switch (which) {
    case 0: return {u, v};
    case 1: return {v, -u};    // quarter turn
    case 2: return {-u, -v};   // half turn
    case 3: return {-v, u};    // three quarter turns
    case 4: return {u, -v};    // mirror columns
    case 5: return {-u, v};    // mirror rows
    case 6: return {v, u};     // transpose
    default: return {-v, -u};  // anti-transpose
    }
}

// Shifts past +-6 leave every base shape constant over the window.
constexpr int kMaxShift = 7;

}  // namespace

TemplateBank build_template_bank()
{
    std::vector<Template> out;
    for (const auto& shape : base_shapes()) {
        for (int sym = 0; sym < 8; ++sym) {
            for (int dy = -kMaxShift; dy <= kMaxShift; ++dy) {
                for (int dx = -kMaxShift; dx <= kMaxShift; ++dx) {
                    Template t;
                    for (int r = 0; r < 4; ++r) {
                        for (int c = 0; c < 4; ++c) {
                            const auto [u, v] = symmetry(sym, 2 * r - 3, 2 * c - 3);
                            const int sr = (u + 3) / 2 - dy;
                            const int sc = (v + 3) / 2 - dx;
                            if (shape(sr, sc)) {
                                t.cells = static_cast<WindowCode>(t.cells | (1u << (4 * r + c)));
                            }
                        }
                    }
                    if (t.cells != 0) {
                        out.push_back(t);
                    }
                }
            }
        }
    }
    return TemplateBank(std::move(out));
}

GrayRaster template_contact_sheet(const TemplateBank& bank)
{
    constexpr int kScale = 4;
    constexpr int kCell = 4 * kScale;
    constexpr int kGap = 2;
    constexpr int kPerRow = 8;
    const int n = static_cast<int>(bank.size());
    const int cols = std::max(1, std::min(n, kPerRow));
    const int rows = std::max(1, (n + kPerRow - 1) / kPerRow);
    GrayRaster sheet(kGap + cols * (kCell + kGap), kGap + rows * (kCell + kGap), 128);
    for (int i = 0; i < n; ++i) {
        const Template& t = bank.templates()[static_cast<std::size_t>(i)];
        const int ox = kGap + (i % kPerRow) * (kCell + kGap);
        const int oy = kGap + (i / kPerRow) * (kCell + kGap);
        for (int y = 0; y < kCell; ++y) {
            for (int x = 0; x < kCell; ++x) {
                sheet.set(ox + x, oy + y, t.at(y / kScale, x / kScale) ? 0 : 255);
            }
        }
    }
    return sheet;
}

RightPair right_pair(const EdgeProfile& e)
{
    return {e.right_inner, e.right_outer};
}

LeftPair left_pair(const EdgeProfile& e)
{
    return {e.left_outer, e.left_inner};
}

namespace {

void check_columns(const RightPair& p, const LeftPair& q)
{
    const std::size_t y = p.inner.size();
    if (p.outer.size() != y || q.outer.size() != y || q.inner.size() != y) {
        throw GeometryError("seam columns differ in length");
    }
    if (y < 4) {
        throw DegenerateStripError("seam needs columns of at least 4 rows");
    }
}

// Row y of the seam as a 4-bit nibble, column 0 in bit 0.
inline unsigned seam_row(const RightPair& p, const LeftPair& q, std::size_t y)
{
    return static_cast<unsigned>(p.inner[y]) | (static_cast<unsigned>(p.outer[y]) << 1) |
           (static_cast<unsigned>(q.outer[y]) << 2) | (static_cast<unsigned>(q.inner[y]) << 3);
}

template <typename Visit>
void for_each_window(const RightPair& p, const LeftPair& q, Visit&& visit)
{
    check_columns(p, q);
    const std::size_t h = p.inner.size();
    unsigned code = 0;
    for (std::size_t y = 0; y < 3; ++y) {
        code |= seam_row(p, q, y) << (4 * (y + 1));
    }
    for (std::size_t y = 0; y + 4 <= h; ++y) {
        code = (code >> 4) | (seam_row(p, q, y + 3) << 12);
        visit(static_cast<WindowCode>(code), static_cast<int>(y));
    }
}

}  // namespace

std::vector<SeamWindow> seam_windows(const RightPair& p, const LeftPair& q)
{
    std::vector<SeamWindow> out;
    for_each_window(p, q, [&](WindowCode code, int y) { out.push_back({code, y}); });
    return out;
}

SeamTrace seam_trace(const RightPair& p, const LeftPair& q, const TemplateBank& bank)
{
    SeamTrace trace;
    for_each_window(p, q, [&](WindowCode code, int) {
        if (code == 0) {
            return;
        }
        ++trace.informative_windows;
        if (bank.contains(code)) {
            ++trace.hits;
        }
    });
    trace.score = trace.informative_windows == 0 ? SeamScore::unmatchable()
                                                 : SeamScore(1 + trace.informative_windows - trace.hits);
    return trace;
}

SeamScore seam_score(const RightPair& p, const LeftPair& q, const TemplateBank& bank)
{
    return seam_trace(p, q, bank).score;
}

std::string_view orientation_name(Orientation o)
{
    switch (o) {
    case Orientation::RightLeft: return "R_L";
    case Orientation::RightInvertedRight: return "R_invR";
    case Orientation::InvertedLeftLeft: return "invL_L";
    case Orientation::InvertedLeftInvertedRight: return "invL_invR";
    }
    return "?";
}

int OrientationSet::count() const
{
    return std::popcount(static_cast<unsigned>(bits_));
}

EdgeProfile rotated(const EdgeProfile& e)
{
    const auto reversed = [](const Column& c) { return Column(c.rbegin(), c.rend()); };
    EdgeProfile r;
    r.left_outer = reversed(e.right_outer);
    r.left_inner = reversed(e.right_inner);
    r.right_inner = reversed(e.left_inner);
    r.right_outer = reversed(e.left_outer);
    return r;
}

PairMatch match_pair(const PreparedEdges& p, const PreparedEdges& q, const TemplateBank& bank,
                     OrientationSet orientations)
{
    if (orientations.empty()) {
        throw Error("match_pair: no orientation requested");
    }
    PairMatch best;
    for (const Orientation o : kAllOrientations) {
        if (!orientations.contains(o)) {
            continue;
        }
        const SeamScore s = seam_score(right_pair(p.as_shown(p_flipped(o))), left_pair(q.as_shown(q_flipped(o))), bank);
        ++best.evaluations;
        if (best.evaluations == 1 || s < best.best) {
            best.best = s;
            best.at = o;
        }
    }
    return best;
}

PairMatch match_pair(const BinaryRaster& p, const BinaryRaster& q, const TemplateBank& bank,
                     OrientationSet orientations)
{
    return match_pair(PreparedEdges(edge_profile(p)), PreparedEdges(edge_profile(q)), bank, orientations);
}

}  // namespace unshred
