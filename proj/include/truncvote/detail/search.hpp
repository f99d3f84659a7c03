#ifndef TRUNCVOTE_DETAIL_SEARCH_HPP
#define TRUNCVOTE_DETAIL_SEARCH_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "../core.hpp"
#include "../errors.hpp"
#include "tally.hpp"

namespace truncvote::detail {

/// A voter whose ballot is chosen by the search from `options`.
struct SearchVoter {
    Weight weight = 0;
    const std::vector<TopOrder>* options = nullptr;
};

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

/// Number of multisets of size g drawn from n options, saturating.
inline std::uint64_t multiset_count(std::uint64_t n, std::uint64_t g) {
    // C(n+g-1, g) computed incrementally; each intermediate is itself a binomial.
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= g; ++i) {
        const std::uint64_t num = n - 1 + i;
        const std::uint64_t g1 = std::gcd(r, i);
        const std::uint64_t r1 = r / g1, i1 = i / g1;
        const std::uint64_t num1 = num / i1; // i1 divides num by integrality of the binomial
        r = saturating_mul(r1, num1);
        if (r == std::numeric_limits<std::uint64_t>::max()) return r;
    }
    return r;
}

/*
 * Depth-first enumeration of ballot assignments over a fixed base profile.
 *
 * Statistics are accumulated level by level through a Tally. Weight-0 voters
 * are score-neutral and pinned to their first option. With `symmetric`,
 * voters sharing a weight and an option list are interchangeable and only
 * non-decreasing choice sequences are visited; this covers every reachable
 * aggregate profile exactly once per multiset. With memoization, an inner
 * node whose partial tally was already expanded at the same depth is
 * skipped: its subtree has the same leaves, none of which stopped the search.
 */
class AssignmentSearch {
public:
    AssignmentSearch(const Tally& tally, std::span<const WeightedVote> fixed, std::vector<SearchVoter> voters,
                     bool symmetric)
        : tally_(tally), voters_(std::move(voters)), symmetric_(symmetric) {
        base_.assign(tally_.width(), 0);
        Weight total = 0;
        for (const auto& v : fixed) {
            total += v.weight;
            if (v.weight == 0) continue;
            const auto s = tally_.stats(v.ballot);
            for (std::size_t i = 0; i < s.size(); ++i) base_[i] += s[i] * v.weight;
        }
        for (std::size_t i = 0; i < voters_.size(); ++i) {
            if (voters_[i].options == nullptr || voters_[i].options->empty()) {
                throw InvalidBallot("search voter without ballot options");
            }
            total += voters_[i].weight;
            if (voters_[i].weight > 0) order_.push_back(i);
        }
        if (total > 0 && tally_.max_unit() > std::numeric_limits<std::int64_t>::max() / 4 / total) {
            throw NonIntegerWeights("weights too large for exact integer tallies");
        }
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            if (voters_[a].options != voters_[b].options) return voters_[a].options < voters_[b].options;
            return voters_[a].weight < voters_[b].weight;
        });
        // Cache unit statistics once per distinct option list.
        for (std::size_t i : order_) {
            const auto* opts = voters_[i].options;
            if (std::find(lists_.begin(), lists_.end(), opts) == lists_.end()) {
                lists_.push_back(opts);
                std::vector<std::vector<std::int64_t>> per;
                per.reserve(opts->size());
                for (const auto& b : *opts) per.push_back(tally_.stats(b));
                unit_.push_back(std::move(per));
            }
            unit_of_.push_back(static_cast<std::size_t>(std::find(lists_.begin(), lists_.end(), opts) - lists_.begin()));
        }
    }

    std::uint64_t leaf_count() const {
        std::uint64_t total = 1;
        std::size_t i = 0;
        while (i < order_.size()) {
            std::size_t j = i + 1;
            if (symmetric_) {
                while (j < order_.size() && same_group(order_[i], order_[j])) ++j;
            }
            total = saturating_mul(total, multiset_count(voters_[order_[i]].options->size(), j - i));
            i = j;
        }
        return total;
    }

    /// Skip repeated partial tallies. Leaves are then visited at most once per distinct tally.
    void set_memoize(bool on) { memoize_ = on; }

    /// Throws BudgetExceeded once more than `budget` leaves have been visited.
    void set_budget(std::uint64_t budget) { budget_ = budget; }

    std::uint64_t leaves_visited() const noexcept { return visited_; }

    /// Visits leaves in a fixed order. `visit(acc, choice)` returns true to stop; run() then returns true.
    template <class Visit>
    bool run(Visit&& visit) {
        choice_.assign(voters_.size(), 0);
        levels_.assign(order_.size() + 1, std::vector<std::int64_t>(tally_.width(), 0));
        levels_[0] = base_;
        seen_.assign(order_.size() + 1, {});
        visited_ = 0;
        return descend(0, visit);
    }

    const std::vector<std::size_t>& choice() const noexcept { return choice_; }

private:
    bool same_group(std::size_t a, std::size_t b) const {
        return voters_[a].options == voters_[b].options && voters_[a].weight == voters_[b].weight;
    }

    struct Hash {
        std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
            std::uint64_t h = 1469598103934665603ull;
            for (std::int64_t x : v) {
                h ^= static_cast<std::uint64_t>(x);
                h *= 1099511628211ull;
            }
            return static_cast<std::size_t>(h);
        }
    };

    template <class Visit>
    bool descend(std::size_t level, Visit& visit) {
        if (level == order_.size()) {
            if (++visited_ > budget_) {
                throw BudgetExceeded("search exceeded its budget of " + std::to_string(budget_) + " evaluations");
            }
            return visit(std::span<const std::int64_t>(levels_[level]), choice_);
        }
        const std::size_t v = order_[level];
        const auto& units = unit_[unit_of_[level]];
        const Weight w = voters_[v].weight;
        std::size_t start = 0;
        if (symmetric_ && level > 0 && same_group(order_[level - 1], v)) start = choice_[order_[level - 1]];
        if (memoize_ && level > 0) {
            // The symmetry bound is part of the subtree's identity.
            key_ = levels_[level];
            key_.push_back(static_cast<std::int64_t>(start));
            if (!seen_[level].insert(key_).second) return false;
        }
        const auto& prev = levels_[level];
        auto& next = levels_[level + 1];
        for (std::size_t o = start; o < units.size(); ++o) {
            const auto& u = units[o];
            for (std::size_t i = 0; i < next.size(); ++i) next[i] = prev[i] + u[i] * w;
            choice_[v] = o;
            if (descend(level + 1, visit)) return true;
        }
        return false;
    }

    const Tally& tally_;
    std::vector<SearchVoter> voters_;
    bool symmetric_;
    std::vector<std::int64_t> base_;
    std::vector<std::size_t> order_;
    std::vector<const std::vector<TopOrder>*> lists_;
    std::vector<std::vector<std::vector<std::int64_t>>> unit_;
    std::vector<std::size_t> unit_of_;
    bool memoize_ = false;
    std::uint64_t budget_ = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t visited_ = 0;
    std::vector<std::unordered_set<std::vector<std::int64_t>, Hash>> seen_;
    std::vector<std::int64_t> key_;
    std::vector<std::size_t> choice_;
    std::vector<std::vector<std::int64_t>> levels_;
};

} // namespace truncvote::detail

#endif // TRUNCVOTE_DETAIL_SEARCH_HPP
