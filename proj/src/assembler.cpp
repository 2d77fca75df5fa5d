#include "unshred/assembler.hpp"

#include "unshred/errors.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

namespace unshred {

MatchStrip::MatchStrip(StripId id_, const BinaryRaster& raster, bool oriented_)
    : id(id_), edges(edge_profile(raster)), oriented(oriented_)
{
}

const ScoreEntry* SeamScoreTable::find(StripId p, StripId q) const
{
    const auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{p, q},
                                     [](const ScoreEntry& e, const std::pair<StripId, StripId>& key) {
                                         return std::pair{e.p, e.q} < key;
                                     });
    if (it == entries.end() || it->p != p || it->q != q) {
        return nullptr;
    }
    return &*it;
}

namespace {

// Strips sorted by id, with shape checks shared by every table builder.
std::vector<const MatchStrip*> sorted_strips(const std::vector<MatchStrip>& strips)
{
    if (strips.size() < 2) {
        throw GeometryError("score table needs at least 2 strips");
    }
    std::vector<const MatchStrip*> out;
    out.reserve(strips.size());
    for (const auto& s : strips) {
        out.push_back(&s);
    }
    std::sort(out.begin(), out.end(), [](const MatchStrip* a, const MatchStrip* b) { return a->id < b->id; });
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i]->id == out[i - 1]->id) {
            throw GeometryError("duplicate strip id " + std::to_string(out[i]->id));
        }
    }
    const int height = out.front()->edges.upright.height();
    for (const MatchStrip* s : out) {
        if (s->edges.upright.height() != height) {
            throw GeometryError("strip " + std::to_string(s->id) + " has height " +
                                std::to_string(s->edges.upright.height()) + ", expected " + std::to_string(height));
        }
    }
    return out;
}

OrientationSet orientations_for(const MatchStrip& p, const MatchStrip& q, bool hints)
{
    return hints && p.oriented && q.oriented ? OrientationSet::only(Orientation::RightLeft) : OrientationSet::all();
}

SeamScoreTable empty_table(const std::vector<const MatchStrip*>& sorted, TableOptions options)
{
    SeamScoreTable t;
    t.options = options;
    t.ids.reserve(sorted.size());
    for (const MatchStrip* s : sorted) {
        t.ids.push_back(s->id);
    }
    return t;
}

SeamScoreTable build_with_early_stop(const std::vector<MatchStrip>& strips, const TemplateBank& bank,
                                     const TableOptions& options)
{
    const auto sorted = sorted_strips(strips);
    SeamScoreTable table = empty_table(sorted, options);

    // Physical edges in use by a perfect seam. Orientation o shows p's left
    // edge on the seam when p is inverted, and q's right edge when q is.
    const auto p_edge_locked = [&](StripId id, Orientation o) {
        return p_flipped(o) ? table.locked_left.contains(id) : table.locked_right.contains(id);
    };
    const auto q_edge_locked = [&](StripId id, Orientation o) {
        return q_flipped(o) ? table.locked_right.contains(id) : table.locked_left.contains(id);
    };

    for (const MatchStrip* p : sorted) {
        for (const MatchStrip* q : sorted) {
            if (p == q) {
                continue;
            }
            OrientationSet wanted = orientations_for(*p, *q, options.use_orientation_hints);
            for (const Orientation o : kAllOrientations) {
                if (wanted.contains(o) && (p_edge_locked(p->id, o) || q_edge_locked(q->id, o))) {
                    wanted = wanted.without(o);
                }
            }
            if (wanted.empty()) {
                continue;
            }
            const PairMatch m = match_pair(p->edges, q->edges, bank, wanted);
            table.evaluations += m.evaluations;
            table.entries.push_back({p->id, q->id, m.best, m.at});
            if (m.best.is_perfect()) {
                (p_flipped(m.at) ? table.locked_left : table.locked_right).insert(p->id);
                (q_flipped(m.at) ? table.locked_right : table.locked_left).insert(q->id);
            }
        }
    }
    return table;
}

}  // namespace

SeamScoreTable build_score_table_serial(const std::vector<MatchStrip>& strips, const TemplateBank& bank,
                                        bool use_orientation_hints)
{
    const auto sorted = sorted_strips(strips);
    SeamScoreTable table = empty_table(sorted, {false, use_orientation_hints});
    table.entries.reserve(sorted.size() * (sorted.size() - 1));
    for (const MatchStrip* p : sorted) {
        for (const MatchStrip* q : sorted) {
            if (p == q) {
                continue;
            }
            const PairMatch m = match_pair(p->edges, q->edges, bank, orientations_for(*p, *q, use_orientation_hints));
            table.evaluations += m.evaluations;
            table.entries.push_back({p->id, q->id, m.best, m.at});
        }
    }
    return table;
}

SeamScoreTable build_score_table_parallel(const std::vector<MatchStrip>& strips, const TemplateBank& bank,
                                          bool use_orientation_hints)
{
    const auto sorted = sorted_strips(strips);
    SeamScoreTable table = empty_table(sorted, {false, use_orientation_hints});
    const long n = static_cast<long>(sorted.size());
    table.entries.resize(static_cast<std::size_t>(n * (n - 1)));
    long long evaluations = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : evaluations)
    for (long i = 0; i < n; ++i) {
        const MatchStrip& p = *sorted[static_cast<std::size_t>(i)];
        for (long j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            const MatchStrip& q = *sorted[static_cast<std::size_t>(j)];
            const PairMatch m = match_pair(p.edges, q.edges, bank, orientations_for(p, q, use_orientation_hints));
            evaluations += m.evaluations;
            const long slot = i * (n - 1) + (j < i ? j : j - 1);
            table.entries[static_cast<std::size_t>(slot)] = {p.id, q.id, m.best, m.at};
        }
    }
    table.evaluations = evaluations;
    return table;
}

SeamScoreTable build_score_table(const std::vector<MatchStrip>& strips, const TemplateBank& bank,
                                 const TableOptions& options)
{
    if (options.early_stop) {
        return build_with_early_stop(strips, bank, options);
    }
    return build_score_table_parallel(strips, bank, options.use_orientation_hints);
}

namespace {

Chain reversed_chain(const Chain& c)
{
    Chain r;
    r.members.reserve(c.members.size());
    for (auto it = c.members.rbegin(); it != c.members.rend(); ++it) {
        r.members.push_back({it->id, !it->flipped});
    }
    r.seam_scores.assign(c.seam_scores.rbegin(), c.seam_scores.rend());
    return r;
}

// `c`, turned around if necessary, so that strip `id` is shown with
// `flipped` at the tail (or head) of the chain.
std::optional<Chain> with_end(const Chain& c, StripId id, bool flipped, bool at_tail)
{
    const ChainMember& near = at_tail ? c.members.back() : c.members.front();
    const ChainMember& far = at_tail ? c.members.front() : c.members.back();
    if (near.id == id && near.flipped == flipped) {
        return c;
    }
    if (far.id == id && far.flipped != flipped) {
        return reversed_chain(c);
    }
    return std::nullopt;
}

void sort_chains(std::vector<Chain>& chains)
{
    const auto min_id = [](const Chain& c) {
        StripId lo = std::numeric_limits<StripId>::max();
        for (const auto& m : c.members) {
            lo = std::min(lo, m.id);
        }
        return lo;
    };
    std::sort(chains.begin(), chains.end(), [&](const Chain& a, const Chain& b) { return min_id(a) < min_id(b); });
}

}  // namespace

Reconstruction greedy_assemble(const SeamScoreTable& table, int m)
{
    if (m < 1) {
        throw GeometryError("assemble: m must be at least 1");
    }

    std::vector<const ScoreEntry*> candidates;
    for (const auto& e : table.entries) {
        if (!e.score.is_unmatchable()) {
            candidates.push_back(&e);
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const ScoreEntry* a, const ScoreEntry* b) {
        return std::tuple{a->score, a->p, a->q, static_cast<int>(a->at)} <
               std::tuple{b->score, b->p, b->q, static_cast<int>(b->at)};
    });

    // chains[k] is live iff some strip maps to k
    std::vector<Chain> chains;
    std::map<StripId, std::size_t> chain_of;
    for (const StripId id : table.ids) {
        chain_of[id] = chains.size();
        chains.push_back({{{id, false}}, {}});
    }

    for (const ScoreEntry* e : candidates) {
        const std::size_t a = chain_of.at(e->p);
        const std::size_t b = chain_of.at(e->q);
        if (a == b) {
            continue;
        }
        if (chains[a].members.size() + chains[b].members.size() > static_cast<std::size_t>(m)) {
            continue;
        }
        const bool fp = p_flipped(e->at);
        const bool fq = q_flipped(e->at);

        // p must end up last with orientation fp, q first with orientation fq;
        // a chain may be turned around as a whole to get there.
        auto left = with_end(chains[a], e->p, fp, true);
        auto right = with_end(chains[b], e->q, fq, false);
        if (!left || !right) {
            continue;
        }

        left->seam_scores.push_back(e->score);
        left->members.insert(left->members.end(), right->members.begin(), right->members.end());
        left->seam_scores.insert(left->seam_scores.end(), right->seam_scores.begin(), right->seam_scores.end());
        chains[a] = std::move(*left);
        chains[b] = {};
        for (const auto& member : chains[a].members) {
            chain_of[member.id] = a;
        }
    }

    Reconstruction rec;
    for (auto& c : chains) {
        if (c.members.empty()) {
            continue;
        }
        if (c.members.size() == 1 && m > 1) {
            rec.unplaced.push_back(c.members.front().id);
        } else {
            rec.chains.push_back(std::move(c));
        }
    }
    sort_chains(rec.chains);
    std::sort(rec.unplaced.begin(), rec.unplaced.end());
    return rec;
}

namespace {

class BruteForce {
public:
    BruteForce(const std::vector<MatchStrip>& strips, const TemplateBank& bank, int m)
        : n_(static_cast<int>(strips.size())), m_(m), chains_needed_((n_ + m - 1) / m)
    {
        std::vector<const MatchStrip*> sorted;
        for (const auto& s : strips) {
            sorted.push_back(&s);
        }
        std::sort(sorted.begin(), sorted.end(), [](const MatchStrip* a, const MatchStrip* b) { return a->id < b->id; });
        for (const MatchStrip* s : sorted) {
            ids_.push_back(s->id);
        }
        cost_.assign(static_cast<std::size_t>(n_ * 2 * n_ * 2), 0);
        for (int a = 0; a < n_; ++a) {
            for (int fa = 0; fa < 2; ++fa) {
                for (int b = 0; b < n_; ++b) {
                    if (a == b) {
                        continue;
                    }
                    for (int fb = 0; fb < 2; ++fb) {
                        const SeamScore s = seam_score(right_pair(sorted[static_cast<std::size_t>(a)]->edges.as_shown(fa)),
                                                       left_pair(sorted[static_cast<std::size_t>(b)]->edges.as_shown(fb)),
                                                       bank);
                        cost_[index(a, fa, b, fb)] = s.is_unmatchable() ? kUnmatchablePenalty : s.value();
                    }
                }
            }
        }
    }

    Reconstruction solve()
    {
        search(0, 0);
        Reconstruction rec;
        for (const auto& chain : best_) {
            Chain c;
            for (std::size_t k = 0; k < chain.size(); ++k) {
                const auto [idx, flipped] = chain[k];
                c.members.push_back({ids_[static_cast<std::size_t>(idx)], flipped});
                if (k > 0) {
                    const auto [pidx, pflipped] = chain[k - 1];
                    const long long v = cost_[index(pidx, pflipped, idx, flipped)];
                    c.seam_scores.push_back(v == kUnmatchablePenalty ? SeamScore::unmatchable()
                                                                     : SeamScore(static_cast<int>(v)));
                }
            }
            rec.chains.push_back(std::move(c));
        }
        return rec;
    }

private:
    using Member = std::pair<int, bool>;

    std::size_t index(int a, bool fa, int b, bool fb) const
    {
        return static_cast<std::size_t>(((a * 2 + fa) * n_ + b) * 2 + fb);
    }

    // DFS in lexicographic order of the (chain, member) encoding, with the
    // chain separator ordered before any member. Each chain must contain the
    // lowest strip unused when it was opened, so chain permutations are not
    // enumerated twice. The first arrangement reaching the optimum is kept.
    void search(unsigned used, long long cost)
    {
        if (cost >= best_cost_) {
            return;
        }
        const int remaining = n_ - std::popcount(used);
        if (remaining == 0) {
            if (!open_.empty() && has_required_ && static_cast<int>(closed_.size()) + 1 == chains_needed_) {
                best_cost_ = cost;
                best_ = closed_;
                best_.push_back(open_);
            }
            return;
        }

        if (!open_.empty() && has_required_) {
            const int chains_left = chains_needed_ - static_cast<int>(closed_.size()) - 1;
            if (chains_left >= 1 && remaining <= chains_left * m_ && remaining >= chains_left) {
                const int saved_required = required_;
                closed_.push_back(std::move(open_));
                open_.clear();
                required_ = std::countr_one(used);
                has_required_ = false;
                search(used, cost);
                open_ = std::move(closed_.back());
                closed_.pop_back();
                required_ = saved_required;
                has_required_ = true;
            }
        }

        if (static_cast<int>(open_.size()) >= m_) {
            return;
        }
        for (int idx = 0; idx < n_; ++idx) {
            if (used & (1u << idx)) {
                continue;
            }
            for (const bool flipped : {false, true}) {
                const long long step =
                    open_.empty() ? 0 : cost_[index(open_.back().first, open_.back().second, idx, flipped)];
                const bool saved = has_required_;
                has_required_ = has_required_ || idx == required_;
                open_.push_back({idx, flipped});
                search(used | (1u << idx), cost + step);
                open_.pop_back();
                has_required_ = saved;
            }
        }
    }

    int n_;
    int m_;
    int chains_needed_;
    std::vector<StripId> ids_;
    std::vector<long long> cost_;
    std::vector<std::vector<Member>> closed_;
    std::vector<Member> open_;
    int required_ = 0;
    bool has_required_ = false;
    long long best_cost_ = std::numeric_limits<long long>::max();
    std::vector<std::vector<Member>> best_;
};

}  // namespace

Reconstruction brute_force_assemble(const std::vector<MatchStrip>& strips, const TemplateBank& bank, int m)
{
    if (m < 1) {
        throw GeometryError("assemble: m must be at least 1");
    }
    if (strips.size() > static_cast<std::size_t>(kBruteForceMaxStrips)) {
        throw SizeError("brute force refuses " + std::to_string(strips.size()) + " strips (limit " +
                        std::to_string(kBruteForceMaxStrips) + ")");
    }
    if (strips.empty()) {
        return {};
    }
    BruteForce search(strips, bank, m);
    return search.solve();
}

OrientedSeam canonical_seam(ChainMember left, ChainMember right)
{
    const OrientedSeam forward{left.id, left.flipped, right.id, right.flipped};
    const OrientedSeam turned{right.id, !right.flipped, left.id, !left.flipped};
    return std::min(forward, turned);
}

std::set<OrientedSeam> adjacency_set(const Reconstruction& rec)
{
    std::set<OrientedSeam> out;
    for (const auto& c : rec.chains) {
        for (std::size_t k = 1; k < c.members.size(); ++k) {
            out.insert(canonical_seam(c.members[k - 1], c.members[k]));
        }
    }
    return out;
}

long long total_members(const Reconstruction& rec)
{
    long long n = static_cast<long long>(rec.unplaced.size());
    for (const auto& c : rec.chains) {
        n += static_cast<long long>(c.members.size());
    }
    return n;
}

}  // namespace unshred
