#pragma once

#include "unshred/shredder.hpp"
#include "unshred/similarity.hpp"

#include <cstdint>
#include <set>
#include <tuple>
#include <vector>

namespace unshred {

// A strip ready for matching. `oriented` marks a confident upright call from
// normalize_orientation; the raster must already be the corrected one.
struct MatchStrip {
    StripId id = 0;
    PreparedEdges edges;
    bool oriented = false;

    MatchStrip(StripId id_, const BinaryRaster& raster, bool oriented_ = false);
};

struct ScoreEntry {
    StripId p = 0;
    StripId q = 0;
    SeamScore score;
    Orientation at = Orientation::RightLeft;

    bool operator==(const ScoreEntry&) const = default;
};

struct TableOptions {
    bool early_stop = false;
    bool use_orientation_hints = false;
};

// Scores for ordered strip pairs, sorted by (p, q). Pairs skipped by early
// stopping have no entry.
struct SeamScoreTable {
    std::vector<StripId> ids;  // ascending
    std::vector<ScoreEntry> entries;
    std::set<StripId> locked_right;  // physical right edge is part of a perfect seam
    std::set<StripId> locked_left;
    long long evaluations = 0;  // seam_score calls
    TableOptions options;

    const ScoreEntry* find(StripId p, StripId q) const;
};

// Dispatches: sequential with early stop (the skip set depends on order),
// OpenMP kernel otherwise.
SeamScoreTable build_score_table(const std::vector<MatchStrip>& strips, const TemplateBank& bank,
                                 const TableOptions& options);

// Straight double loop; the reference the parallel kernel is tested against.
// Ignores early_stop.
SeamScoreTable build_score_table_serial(const std::vector<MatchStrip>& strips, const TemplateBank& bank,
                                        bool use_orientation_hints);

// One OpenMP task per left strip; entries land in precomputed slots so the
// result is identical to the serial reference. Ignores early_stop.
SeamScoreTable build_score_table_parallel(const std::vector<MatchStrip>& strips, const TemplateBank& bank,
                                          bool use_orientation_hints);

struct ChainMember {
    StripId id = 0;
    bool flipped = false;  // shown rotated 180 degrees

    bool operator==(const ChainMember&) const = default;
};

struct Chain {
    std::vector<ChainMember> members;
    std::vector<SeamScore> seam_scores;  // size() == members.size() - 1

    bool operator==(const Chain&) const = default;
};

struct Reconstruction {
    std::vector<Chain> chains;
    std::vector<StripId> unplaced;

    bool operator==(const Reconstruction&) const = default;
};

// Best-first merge of seams into chains of at most m strips.
Reconstruction greedy_assemble(const SeamScoreTable& table, int m);

inline constexpr int kBruteForceMaxStrips = 8;
inline constexpr long long kUnmatchablePenalty = 1'000'000;

// Exhaustive search over partitions into the fewest chains that respect m,
// every order within a chain and every per-strip flip. Minimises the summed
// seam score (unmatchable seams cost kUnmatchablePenalty).
Reconstruction brute_force_assemble(const std::vector<MatchStrip>& strips, const TemplateBank& bank, int m);

// (left id, left flipped, right id, right flipped), canonical under reversal
// of the whole pair: a seam and its 180 degree turn compare equal.
using OrientedSeam = std::tuple<StripId, bool, StripId, bool>;
OrientedSeam canonical_seam(ChainMember left, ChainMember right);
std::set<OrientedSeam> adjacency_set(const Reconstruction& rec);

long long total_members(const Reconstruction& rec);

}  // namespace unshred
