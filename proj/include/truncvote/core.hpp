#ifndef TRUNCVOTE_CORE_HPP
#define TRUNCVOTE_CORE_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace truncvote {

using Weight = std::int64_t;

/// Dense candidate index in [0, m). Display names live on the Profile.
struct CandidateId {
    int index = 0;

    friend constexpr auto operator<=>(CandidateId, CandidateId) noexcept = default;
};

/// Bitmask of candidates; bit i set means candidate i is a member.
using CandidateMask = std::uint32_t;

inline constexpr int max_candidates = 31;

inline constexpr CandidateMask bit(CandidateId c) noexcept { return CandidateMask{1} << c.index; }
inline constexpr CandidateMask all_candidates(int m) noexcept {
    return m >= 32 ? ~CandidateMask{0} : (CandidateMask{1} << m) - 1;
}

inline std::vector<CandidateId> mask_members(CandidateMask mask) {
    std::vector<CandidateId> out;
    for (int i = 0; mask != 0; ++i, mask >>= 1) {
        if (mask & 1u) out.push_back(CandidateId{i});
    }
    return out;
}

/*
 * A voter's ranked prefix over m candidates.
 *
 * Unranked candidates are tied with each other and sit below every ranked
 * candidate. Construction validates: non-empty, no duplicates, indices < m.
 */
class TopOrder {
public:
    TopOrder(std::vector<CandidateId> ranked, int m) : ranked_(std::move(ranked)), m_(m) { validate(); }

    static TopOrder of(std::initializer_list<int> indices, int m) {
        std::vector<CandidateId> r;
        r.reserve(indices.size());
        for (int i : indices) r.push_back(CandidateId{i});
        return TopOrder(std::move(r), m);
    }

    int candidate_count() const noexcept { return m_; }
    int size() const noexcept { return static_cast<int>(ranked_.size()); }
    bool is_complete() const noexcept { return size() == m_; }
    CandidateId operator[](int i) const { return ranked_[static_cast<std::size_t>(i)]; }
    CandidateId front() const { return ranked_.front(); }
    CandidateId back() const { return ranked_.back(); }
    std::span<const CandidateId> ranked() const noexcept { return ranked_; }
    auto begin() const noexcept { return ranked_.begin(); }
    auto end() const noexcept { return ranked_.end(); }

    CandidateMask ranked_mask() const noexcept {
        CandidateMask mask = 0;
        for (CandidateId c : ranked_) mask |= bit(c);
        return mask;
    }

    /// 0-based position of c, or nullopt when unranked.
    std::optional<int> position(CandidateId c) const noexcept {
        for (int i = 0; i < size(); ++i) {
            if (ranked_[static_cast<std::size_t>(i)] == c) return i;
        }
        return std::nullopt;
    }

    bool contains(CandidateId c) const noexcept { return position(c).has_value(); }

    /// True when this ballot places a strictly above b (ranked above, or ranked while b is not).
    bool prefers(CandidateId a, CandidateId b) const noexcept {
        const auto pa = position(a);
        if (!pa) return false;
        const auto pb = position(b);
        return !pb || *pa < *pb;
    }

    friend bool operator==(const TopOrder&, const TopOrder&) = default;

private:
    void validate() const {
        if (m_ < 1 || m_ > max_candidates) {
            throw InvalidBallot("candidate count " + std::to_string(m_) + " out of range");
        }
        if (ranked_.empty()) {
            throw InvalidBallot("ballot must rank at least one candidate");
        }
        CandidateMask seen = 0;
        for (CandidateId c : ranked_) {
            if (c.index < 0 || c.index >= m_) {
                throw InvalidBallot("candidate index " + std::to_string(c.index) + " out of range");
            }
            if (seen & bit(c)) {
                throw InvalidBallot("candidate index " + std::to_string(c.index) + " ranked twice");
            }
            seen |= bit(c);
        }
    }

    std::vector<CandidateId> ranked_;
    int m_;
};

struct WeightedVote {
    TopOrder ballot;
    Weight weight = 1;

    friend bool operator==(const WeightedVote&, const WeightedVote&) = default;
};

/// Candidate set plus weighted votes.
class Profile {
public:
    explicit Profile(int m, std::vector<WeightedVote> votes = {}, std::vector<std::string> names = {})
        : m_(m), names_(std::move(names)), votes_() {
        if (m < 1 || m > max_candidates) {
            throw InvalidBallot("candidate count " + std::to_string(m) + " out of range");
        }
        if (names_.empty()) {
            for (int i = 0; i < m; ++i) names_.push_back("c" + std::to_string(i + 1));
        }
        if (static_cast<int>(names_.size()) != m) {
            throw DimensionMismatch("expected " + std::to_string(m) + " candidate names");
        }
        votes_.reserve(votes.size());
        for (auto& v : votes) add(std::move(v));
    }

    int m() const noexcept { return m_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(CandidateId c) const { return names_.at(static_cast<std::size_t>(c.index)); }
    const std::vector<WeightedVote>& votes() const noexcept { return votes_; }

    std::optional<CandidateId> find(const std::string& name) const {
        for (int i = 0; i < m_; ++i) {
            if (names_[static_cast<std::size_t>(i)] == name) return CandidateId{i};
        }
        return std::nullopt;
    }

    void add(WeightedVote v) {
        if (v.ballot.candidate_count() != m_) {
            throw InvalidBallot("ballot built for " + std::to_string(v.ballot.candidate_count()) +
                                " candidates in a " + std::to_string(m_) + "-candidate profile");
        }
        if (v.weight < 0) {
            throw InvalidBallot("negative vote weight");
        }
        votes_.push_back(std::move(v));
    }

    Weight total_weight() const noexcept {
        Weight w = 0;
        for (const auto& v : votes_) w += v.weight;
        return w;
    }

    friend bool operator==(const Profile&, const Profile&) = default;

private:
    int m_;
    std::vector<std::string> names_;
    std::vector<WeightedVote> votes_;
};

enum class WinnerModel { NonUnique, Unique };

/*
 * Elimination-tie policy.
 *
 * Lexicographic drops the tied candidate with the largest index. Optimistic
 * means some resolution of the ties achieves the goal; Pessimistic means
 * every resolution does.
 */
enum class TieBreak { Lexicographic, Optimistic, Pessimistic };

/// Completes a ballot ranking m-1 candidates; any other ballot is returned unchanged.
inline TopOrder canonicalize_ballot(const TopOrder& ballot) {
    const int m = ballot.candidate_count();
    if (ballot.size() != m - 1) return ballot;
    const CandidateMask missing = all_candidates(m) & ~ballot.ranked_mask();
    std::vector<CandidateId> ranked(ballot.begin(), ballot.end());
    ranked.push_back(mask_members(missing).front());
    return TopOrder(std::move(ranked), m);
}

/// Number of canonical ballots over m candidates.
inline std::uint64_t canonical_ballot_count(int m) {
    std::uint64_t total = 0;
    std::uint64_t falling = 1;
    for (int k = 1; k <= m; ++k) {
        falling *= static_cast<std::uint64_t>(m - k + 1);
        if (k <= m - 2 || k == m) total += falling;
    }
    return total;
}

namespace detail {

inline void extend_ballots(std::vector<CandidateId>& prefix, CandidateMask used, int m, int length,
                           std::vector<TopOrder>& out) {
    if (static_cast<int>(prefix.size()) == length) {
        out.emplace_back(prefix, m);
        return;
    }
    for (int c = 0; c < m; ++c) {
        if (used & (CandidateMask{1} << c)) continue;
        prefix.push_back(CandidateId{c});
        extend_ballots(prefix, used | (CandidateMask{1} << c), m, length, out);
        prefix.pop_back();
    }
}

} // namespace detail

/// All top orders of length 1..m-2 followed by all m! complete orders, each in lexicographic index order.
inline std::vector<TopOrder> enumerate_ballots(int m) {
    std::vector<TopOrder> out;
    out.reserve(static_cast<std::size_t>(canonical_ballot_count(m)));
    std::vector<CandidateId> prefix;
    for (int k = 1; k <= m; ++k) {
        if (k == m - 1) continue;
        detail::extend_ballots(prefix, 0, m, k, out);
    }
    return out;
}

/// All m! complete orders in lexicographic index order.
inline std::vector<TopOrder> enumerate_complete_orders(int m) {
    std::vector<TopOrder> out;
    std::vector<CandidateId> prefix;
    detail::extend_ballots(prefix, 0, m, m, out);
    return out;
}

} // namespace truncvote

#endif // TRUNCVOTE_CORE_HPP
