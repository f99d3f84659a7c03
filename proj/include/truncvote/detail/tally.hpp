#ifndef TRUNCVOTE_DETAIL_TALLY_HPP
#define TRUNCVOTE_DETAIL_TALLY_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "../core.hpp"
#include "../rules.hpp"

namespace truncvote::detail {

/*
 * Integer sufficient statistics for winner determination.
 *
 * Every rule's outcome is a function of a weighted sum of per-ballot
 * statistics: positional scores (scaled to integers), pairwise counts, or
 * per-survivor-set scores for elimination rules. Exhaustive searches add
 * these vectors incrementally instead of rebuilding a Profile per leaf.
 * This is a second route to winner determination; rules.hpp stays the
 * reference and the two are cross-checked in tests.
 */
class Tally {
public:
    enum class Kind { Scoring, Copeland, Maximin, Elimination, Runoff };

    Tally(const RuleSpec& rule, int m) : m_(m) {
        if (const auto* r = std::get_if<ScoringRule>(&rule)) {
            kind_ = Kind::Scoring;
            check_length(r->vector);
            vector_.push_back(r->vector);
            scheme_ = r->scheme;
            scale_ = denominator_lcm(r->vector);
            if (scheme_ == TruncationScheme::Average) {
                for (int k = 0; k < m; ++k) {
                    Rational rest = 0;
                    for (int j = k; j < m; ++j) rest += r->vector[j];
                    scale_ = std::lcm(scale_, (rest / Rational(m - k)).den());
                }
            }
            width_ = static_cast<std::size_t>(m);
        } else if (const auto* e = std::get_if<EliminationRule>(&rule)) {
            kind_ = Kind::Elimination;
            check_length(e->vector);
            for (int k = 1; k <= m; ++k) vector_.push_back(e->vector.restricted(k));
            scale_ = 1;
            for (const auto& v : vector_) scale_ = std::lcm(scale_, denominator_lcm(v));
            width_ = (std::size_t{1} << m) * static_cast<std::size_t>(m);
        } else if (const auto* c = std::get_if<CopelandRule>(&rule)) {
            kind_ = Kind::Copeland;
            alpha_ = c->alpha;
            width_ = static_cast<std::size_t>(m * m);
        } else if (std::holds_alternative<MaximinRule>(rule)) {
            kind_ = Kind::Maximin;
            width_ = static_cast<std::size_t>(m * m);
        } else {
            kind_ = Kind::Runoff;
            width_ = static_cast<std::size_t>(m + m * m);
        }
        if (kind_ == Kind::Elimination && m > 12) {
            throw UnsupportedRule("elimination tally limited to 12 candidates");
        }
    }

    Kind kind() const noexcept { return kind_; }
    int m() const noexcept { return m_; }
    std::size_t width() const noexcept { return width_; }
    bool has_scores() const noexcept {
        return kind_ == Kind::Scoring || kind_ == Kind::Copeland || kind_ == Kind::Maximin;
    }

    /// Statistics of one unit-weight ballot.
    std::vector<std::int64_t> stats(const TopOrder& b) const {
        std::vector<std::int64_t> out(width_, 0);
        switch (kind_) {
        case Kind::Scoring: {
            const auto s = ballot_scores(b, vector_[0], scheme_);
            for (int c = 0; c < m_; ++c) out[static_cast<std::size_t>(c)] = scaled(s[static_cast<std::size_t>(c)]);
            break;
        }
        case Kind::Copeland:
        case Kind::Maximin:
            add_pairwise(b, out, 0);
            break;
        case Kind::Runoff:
            out[static_cast<std::size_t>(b.front().index)] = 1;
            add_pairwise(b, out, static_cast<std::size_t>(m_));
            break;
        case Kind::Elimination:
            for (CandidateMask alive = 1; alive < (CandidateMask{1} << m_); ++alive) {
                const int r = std::popcount(alive);
                if (r < 2) continue;
                const ScoringVector& v = vector_[static_cast<std::size_t>(r - 1)];
                int pos = 0;
                std::int64_t* row = &out[alive * static_cast<std::size_t>(m_)];
                CandidateMask ranked = 0;
                for (CandidateId c : b) {
                    if (!(alive & bit(c))) continue;
                    row[c.index] = scaled(v[pos++]);
                    ranked |= bit(c);
                }
                if (pos == 0) continue; // ignored vote
                const std::int64_t low = scaled(v[r - 1]);
                for (CandidateId c : mask_members(alive & ~ranked)) row[c.index] = low;
            }
            break;
        }
        return out;
    }

    /// Largest absolute statistic a unit ballot can contribute; used for overflow guards.
    std::int64_t max_unit() const {
        std::int64_t best = 1;
        for (const auto& v : vector_) {
            for (const auto& a : v.alphas()) best = std::max(best, scaled(a));
        }
        return best;
    }

    Outcome decide(std::span<const std::int64_t> acc, WinnerModel model, TieBreak tiebreak) const {
        switch (kind_) {
        case Kind::Scoring:
        case Kind::Copeland:
        case Kind::Maximin: {
            std::int64_t s[max_candidates];
            scores(acc, std::span<std::int64_t>(s, static_cast<std::size_t>(m_)));
            const std::int64_t best = *std::max_element(s, s + m_);
            CandidateMask w = 0;
            for (int c = 0; c < m_; ++c) {
                if (s[c] == best) w |= CandidateMask{1} << c;
            }
            if (model == WinnerModel::Unique && std::popcount(w) != 1) w = 0;
            return {w, w};
        }
        case Kind::Elimination:
            if (tiebreak == TieBreak::Lexicographic) {
                CandidateMask alive = all_candidates(m_);
                while (std::popcount(alive) > 1) alive &= ~highest_bit(lowest(acc, alive));
                return {alive, alive};
            }
            return branches(acc, all_candidates(m_));
        case Kind::Runoff:
            return runoff(acc, tiebreak);
        }
        return {};
    }

    /// Comparable integer scores (score rules only).
    void scores(std::span<const std::int64_t> acc, std::span<std::int64_t> out) const {
        switch (kind_) {
        case Kind::Scoring:
            std::copy_n(acc.begin(), m_, out.begin());
            return;
        case Kind::Copeland:
            for (int i = 0; i < m_; ++i) {
                std::int64_t s = 0;
                for (int j = 0; j < m_; ++j) {
                    if (i == j) continue;
                    const std::int64_t d = pair(acc, 0, i, j) - pair(acc, 0, j, i);
                    if (d > 0) s += alpha_.den();
                    else if (d == 0) s += alpha_.num();
                }
                out[static_cast<std::size_t>(i)] = s;
            }
            return;
        case Kind::Maximin:
            for (int i = 0; i < m_; ++i) {
                std::int64_t best = 0;
                bool first = true;
                for (int j = 0; j < m_; ++j) {
                    if (i == j) continue;
                    const std::int64_t v = pair(acc, 0, i, j);
                    if (first || v < best) best = v;
                    first = false;
                }
                out[static_cast<std::size_t>(i)] = best;
            }
            return;
        default:
            throw UnsupportedRule("elimination rules have no single score map");
        }
    }

private:
    void check_length(const ScoringVector& v) const {
        if (v.size() != m_) {
            throw DimensionMismatch("scoring vector has " + std::to_string(v.size()) + " entries for " +
                                    std::to_string(m_) + " candidates");
        }
    }

    static std::int64_t denominator_lcm(const ScoringVector& v) {
        std::int64_t l = 1;
        for (const auto& a : v.alphas()) l = std::lcm(l, a.den());
        return l;
    }

    std::int64_t scaled(const Rational& r) const {
        const Rational s = r * Rational(scale_);
        if (!s.is_integer()) throw ConstraintViolation("tally scale does not clear " + r.to_string());
        return s.num();
    }

    void add_pairwise(const TopOrder& b, std::vector<std::int64_t>& out, std::size_t offset) const {
        const CandidateMask ranked = b.ranked_mask();
        for (int i = 0; i < b.size(); ++i) {
            for (int j = i + 1; j < b.size(); ++j) out[offset + static_cast<std::size_t>(b[i].index * m_ + b[j].index)] = 1;
            for (int u = 0; u < m_; ++u) {
                if (!(ranked & (CandidateMask{1} << u))) out[offset + static_cast<std::size_t>(b[i].index * m_ + u)] = 1;
            }
        }
    }

    std::int64_t pair(std::span<const std::int64_t> acc, std::size_t offset, int i, int j) const {
        return acc[offset + static_cast<std::size_t>(i * m_ + j)];
    }

    CandidateMask lowest(std::span<const std::int64_t> acc, CandidateMask alive) const {
        const std::int64_t* row = &acc[alive * static_cast<std::size_t>(m_)];
        std::int64_t low = 0;
        bool first = true;
        CandidateMask tied = 0;
        for (int c = 0; c < m_; ++c) {
            if (!(alive & (CandidateMask{1} << c))) continue;
            if (first || row[c] < low) {
                low = row[c];
                tied = CandidateMask{1} << c;
                first = false;
            } else if (row[c] == low) {
                tied |= CandidateMask{1} << c;
            }
        }
        return tied;
    }

    Outcome branches(std::span<const std::int64_t> acc, CandidateMask alive) const {
        if (std::popcount(alive) == 1) return {alive, alive};
        Outcome out{0, all_candidates(m_)};
        for (CandidateMask tied = lowest(acc, alive); tied != 0; tied &= tied - 1) {
            const Outcome sub = branches(acc, alive & ~(tied & -tied));
            out.possible |= sub.possible;
            out.certain &= sub.certain;
        }
        return out;
    }

    Outcome runoff_pair(std::span<const std::int64_t> acc, int x, int y, TieBreak tiebreak) const {
        const auto off = static_cast<std::size_t>(m_);
        const std::int64_t d = pair(acc, off, x, y) - pair(acc, off, y, x);
        const CandidateMask bx = CandidateMask{1} << x, by = CandidateMask{1} << y;
        if (d > 0) return {bx, bx};
        if (d < 0) return {by, by};
        if (tiebreak == TieBreak::Lexicographic) {
            const CandidateMask keep = x < y ? bx : by;
            return {keep, keep};
        }
        return {bx | by, 0};
    }

    Outcome runoff(std::span<const std::int64_t> acc, TieBreak tiebreak) const {
        if (m_ == 1) return {1u, 1u};
        if (tiebreak == TieBreak::Lexicographic) {
            int first = 0;
            for (int c = 1; c < m_; ++c) {
                if (acc[static_cast<std::size_t>(c)] > acc[static_cast<std::size_t>(first)]) first = c;
            }
            int second = -1;
            for (int c = 0; c < m_; ++c) {
                if (c == first) continue;
                if (second < 0 || acc[static_cast<std::size_t>(c)] > acc[static_cast<std::size_t>(second)]) second = c;
            }
            return runoff_pair(acc, std::min(first, second), std::max(first, second), tiebreak);
        }
        Outcome out{0, all_candidates(m_)};
        for (int x = 0; x < m_; ++x) {
            for (int y = x + 1; y < m_; ++y) {
                const std::int64_t lo = std::min(acc[static_cast<std::size_t>(x)], acc[static_cast<std::size_t>(y)]);
                bool valid = true;
                for (int z = 0; z < m_ && valid; ++z) {
                    if (z != x && z != y && acc[static_cast<std::size_t>(z)] > lo) valid = false;
                }
                if (!valid) continue;
                const Outcome sub = runoff_pair(acc, x, y, tiebreak);
                out.possible |= sub.possible;
                out.certain &= sub.certain;
            }
        }
        return out;
    }

    Kind kind_ = Kind::Scoring;
    int m_;
    std::size_t width_ = 0;
    std::vector<ScoringVector> vector_;
    TruncationScheme scheme_ = TruncationScheme::RoundUp;
    std::int64_t scale_ = 1;
    Rational alpha_;
};

} // namespace truncvote::detail

#endif // TRUNCVOTE_DETAIL_TALLY_HPP
