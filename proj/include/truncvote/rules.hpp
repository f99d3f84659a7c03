#ifndef TRUNCVOTE_RULES_HPP
#define TRUNCVOTE_RULES_HPP

#include <algorithm>
#include <bit>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace truncvote {

enum class VectorFamily { Custom, Plurality, Veto, Borda };

/*
 * Positional scoring vector alpha_1 >= ... >= alpha_m >= 0.
 *
 * Named families remember their name so that elimination rounds can
 * re-instantiate them at the reduced candidate count.
 */
class ScoringVector {
public:
    explicit ScoringVector(std::vector<Rational> alphas, VectorFamily family = VectorFamily::Custom)
        : alphas_(std::move(alphas)), family_(family) {
        if (alphas_.empty() || static_cast<int>(alphas_.size()) > max_candidates) {
            throw ConstraintViolation("scoring vector length out of range");
        }
        for (std::size_t i = 0; i + 1 < alphas_.size(); ++i) {
            if (alphas_[i] < alphas_[i + 1]) {
                throw ConstraintViolation("scoring vector must be non-increasing");
            }
        }
        if (alphas_.back() < 0) {
            throw ConstraintViolation("scoring vector entries must be non-negative");
        }
    }

    static ScoringVector plurality(int m) {
        std::vector<Rational> a(static_cast<std::size_t>(m), Rational(0));
        a[0] = 1;
        return ScoringVector(std::move(a), VectorFamily::Plurality);
    }
    static ScoringVector veto(int m) {
        std::vector<Rational> a(static_cast<std::size_t>(m), Rational(1));
        a.back() = 0;
        return ScoringVector(std::move(a), VectorFamily::Veto);
    }
    static ScoringVector borda(int m) {
        std::vector<Rational> a;
        for (int i = m - 1; i >= 0; --i) a.emplace_back(i);
        return ScoringVector(std::move(a), VectorFamily::Borda);
    }
    static ScoringVector of(std::initializer_list<Rational> alphas) { return ScoringVector(std::vector<Rational>(alphas)); }

    int size() const noexcept { return static_cast<int>(alphas_.size()); }
    const Rational& operator[](int i) const { return alphas_[static_cast<std::size_t>(i)]; }
    const std::vector<Rational>& alphas() const noexcept { return alphas_; }
    VectorFamily family() const noexcept { return family_; }

    /// alpha_2 = ... = alpha_m.
    bool plurality_like() const noexcept {
        return std::all_of(alphas_.begin() + 1, alphas_.end(), [&](const Rational& a) { return a == alphas_.back(); });
    }
    /// alpha_1 = ... = alpha_{m-1}.
    bool veto_like() const noexcept {
        return std::all_of(alphas_.begin(), alphas_.end() - 1, [&](const Rational& a) { return a == alphas_.front(); });
    }

    /// The vector used once only k candidates remain: the same named family at k,
    /// otherwise alpha_1..alpha_{k-1} followed by alpha_m.
    ScoringVector restricted(int k) const {
        if (k == size()) return *this;
        switch (family_) {
        case VectorFamily::Plurality: return plurality(k);
        case VectorFamily::Veto: return veto(k);
        case VectorFamily::Borda: return borda(k);
        case VectorFamily::Custom: break;
        }
        std::vector<Rational> a(alphas_.begin(), alphas_.begin() + (k - 1));
        a.push_back(alphas_.back());
        return ScoringVector(std::move(a));
    }

    friend bool operator==(const ScoringVector&, const ScoringVector&) = default;

private:
    std::vector<Rational> alphas_;
    VectorFamily family_;
};

enum class TruncationScheme { RoundUp, RoundDown, Average };

struct ScoringRule {
    ScoringVector vector;
    TruncationScheme scheme = TruncationScheme::RoundUp;
};

/// eliminate(X): repeatedly drop the lowest scorer; votes whose ranked candidates are all gone are ignored.
struct EliminationRule {
    ScoringVector vector;
};

struct RunoffRule {};

struct CopelandRule {
    Rational alpha;

    explicit CopelandRule(Rational a) : alpha(a) {
        if (a < 0 || a > 1) {
            throw ConstraintViolation("Copeland alpha must lie in [0,1], got " + a.to_string());
        }
    }
};

struct MaximinRule {};

using RuleSpec = std::variant<ScoringRule, EliminationRule, RunoffRule, CopelandRule, MaximinRule>;

inline bool is_elimination_rule(const RuleSpec& rule) noexcept {
    return std::holds_alternative<EliminationRule>(rule) || std::holds_alternative<RunoffRule>(rule);
}

inline std::string to_string(TruncationScheme s) {
    switch (s) {
    case TruncationScheme::RoundUp: return "up";
    case TruncationScheme::RoundDown: return "down";
    case TruncationScheme::Average: return "avg";
    }
    return "?";
}

inline std::string to_string(const ScoringVector& v) {
    switch (v.family()) {
    case VectorFamily::Plurality: return "plurality";
    case VectorFamily::Veto: return "veto";
    case VectorFamily::Borda: return "borda";
    case VectorFamily::Custom: break;
    }
    std::string out;
    for (int i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += v[i].to_string();
    }
    return out;
}

inline std::string to_string(const RuleSpec& rule) {
    struct Visitor {
        std::string operator()(const ScoringRule& r) const { return "scoring:" + to_string(r.vector) + ":" + to_string(r.scheme); }
        std::string operator()(const EliminationRule& r) const { return "eliminate:" + to_string(r.vector); }
        std::string operator()(const RunoffRule&) const { return "runoff"; }
        std::string operator()(const CopelandRule& r) const {
            return "copeland:" + std::to_string(r.alpha.num()) + "/" + std::to_string(r.alpha.den());
        }
        std::string operator()(const MaximinRule&) const { return "maximin"; }
    };
    return std::visit(Visitor{}, rule);
}

// ---------------------------------------------------------------------------
// Positional scores

/// Per-candidate score one unit-weight ballot contributes.
inline std::vector<Rational> ballot_scores(const TopOrder& ballot, const ScoringVector& vector, TruncationScheme scheme) {
    const int m = ballot.candidate_count();
    if (vector.size() != m) {
        throw DimensionMismatch("scoring vector has " + std::to_string(vector.size()) + " entries for " +
                                std::to_string(m) + " candidates");
    }
    const int k = ballot.size();
    Rational unranked = vector[m - 1];
    if (scheme == TruncationScheme::Average && k < m) {
        Rational rest = 0;
        for (int j = k; j < m; ++j) rest += vector[j];
        unranked = rest / Rational(m - k);
    }
    std::vector<Rational> out(static_cast<std::size_t>(m), unranked);
    for (int i = 0; i < k; ++i) {
        // 0-based round-down index: m - (k - i) - 1 in 1-based terms.
        const int slot = (scheme == TruncationScheme::RoundDown && k < m) ? m - k + i - 1 : i;
        out[static_cast<std::size_t>(ballot[i].index)] = vector[slot];
    }
    return out;
}

inline std::vector<Rational> positional_scores(const Profile& profile, const ScoringVector& vector,
                                               TruncationScheme scheme) {
    if (vector.size() != profile.m()) {
        throw DimensionMismatch("scoring vector has " + std::to_string(vector.size()) + " entries for " +
                                std::to_string(profile.m()) + " candidates");
    }
    std::vector<Rational> total(static_cast<std::size_t>(profile.m()), Rational(0));
    for (const auto& v : profile.votes()) {
        if (v.weight == 0) continue;
        const auto s = ballot_scores(v.ballot, vector, scheme);
        for (std::size_t c = 0; c < s.size(); ++c) total[c] += s[c] * Rational(v.weight);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Pairwise comparisons

/// N[i][j] = total weight of votes placing i strictly above j.
class PairwiseMatrix {
public:
    explicit PairwiseMatrix(int m) : m_(m), n_(static_cast<std::size_t>(m * m), 0) {}

    int m() const noexcept { return m_; }
    Weight at(CandidateId i, CandidateId j) const { return n_[idx(i, j)]; }
    Weight& at(CandidateId i, CandidateId j) { return n_[idx(i, j)]; }
    Weight margin(CandidateId i, CandidateId j) const { return at(i, j) - at(j, i); }

    friend bool operator==(const PairwiseMatrix&, const PairwiseMatrix&) = default;

private:
    std::size_t idx(CandidateId i, CandidateId j) const {
        return static_cast<std::size_t>(i.index * m_ + j.index);
    }
    int m_;
    std::vector<Weight> n_;
};

inline PairwiseMatrix pairwise_matrix(const Profile& profile) {
    const int m = profile.m();
    PairwiseMatrix n(m);
    for (const auto& v : profile.votes()) {
        const TopOrder& b = v.ballot;
        const CandidateMask ranked = b.ranked_mask();
        for (int i = 0; i < b.size(); ++i) {
            for (int j = i + 1; j < b.size(); ++j) n.at(b[i], b[j]) += v.weight;
            for (int u = 0; u < m; ++u) {
                if (!(ranked & (CandidateMask{1} << u))) n.at(b[i], CandidateId{u}) += v.weight;
            }
        }
    }
    return n;
}

inline std::vector<Rational> copeland_scores(const PairwiseMatrix& n, const Rational& alpha) {
    const int m = n.m();
    std::vector<Rational> s(static_cast<std::size_t>(m), Rational(0));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const Weight d = n.margin(CandidateId{i}, CandidateId{j});
            if (d > 0) s[static_cast<std::size_t>(i)] += 1;
            else if (d == 0) s[static_cast<std::size_t>(i)] += alpha;
        }
    }
    return s;
}

/// s_i = min over j != i of N[i][j]; a lone candidate scores 0.
inline std::vector<Rational> maximin_scores(const PairwiseMatrix& n) {
    const int m = n.m();
    std::vector<Rational> s(static_cast<std::size_t>(m), Rational(0));
    for (int i = 0; i < m; ++i) {
        bool first = true;
        Weight best = 0;
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const Weight v = n.at(CandidateId{i}, CandidateId{j});
            if (first || v < best) best = v;
            first = false;
        }
        s[static_cast<std::size_t>(i)] = Rational(best);
    }
    return s;
}

/// Score map for Scoring, Copeland and Maximin rules.
inline std::vector<Rational> rule_scores(const Profile& profile, const RuleSpec& rule) {
    if (const auto* r = std::get_if<ScoringRule>(&rule)) return positional_scores(profile, r->vector, r->scheme);
    if (const auto* r = std::get_if<CopelandRule>(&rule)) return copeland_scores(pairwise_matrix(profile), r->alpha);
    if (std::holds_alternative<MaximinRule>(rule)) return maximin_scores(pairwise_matrix(profile));
    throw UnsupportedRule(to_string(rule) + " has no single score map");
}

inline CandidateMask argmax_mask(const std::vector<Rational>& scores) {
    const Rational best = *std::max_element(scores.begin(), scores.end());
    CandidateMask mask = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] == best) mask |= CandidateMask{1} << i;
    }
    return mask;
}

// ---------------------------------------------------------------------------
// Elimination rules

/// Scores of the survivors in `alive` with every ballot read as its induced order on them.
inline std::vector<Rational> elimination_round_scores(const Profile& profile, const ScoringVector& vector,
                                                      CandidateMask alive) {
    const int r = std::popcount(alive);
    const ScoringVector round_vector = vector.restricted(r);
    std::vector<Rational> s(static_cast<std::size_t>(profile.m()), Rational(0));
    for (const auto& v : profile.votes()) {
        if (v.weight == 0) continue;
        std::vector<CandidateId> induced;
        for (CandidateId c : v.ballot) {
            if (alive & bit(c)) induced.push_back(c);
        }
        if (induced.empty()) continue; // every listed candidate is gone: the vote is ignored
        const Rational w(v.weight);
        for (int i = 0; i < profile.m(); ++i) {
            if (alive & (CandidateMask{1} << i)) s[static_cast<std::size_t>(i)] += round_vector[r - 1] * w;
        }
        for (std::size_t pos = 0; pos < induced.size(); ++pos) {
            const auto c = static_cast<std::size_t>(induced[pos].index);
            s[c] += (round_vector[static_cast<int>(pos)] - round_vector[r - 1]) * w;
        }
    }
    return s;
}

inline CandidateMask lowest_among(const std::vector<Rational>& s, CandidateMask alive) {
    bool first = true;
    Rational low;
    for (CandidateId c : mask_members(alive)) {
        const Rational& v = s[static_cast<std::size_t>(c.index)];
        if (first || v < low) low = v;
        first = false;
    }
    CandidateMask tied = 0;
    for (CandidateId c : mask_members(alive)) {
        if (s[static_cast<std::size_t>(c.index)] == low) tied |= bit(c);
    }
    return tied;
}

/// Winner sets across tie resolutions: `possible` is the union of branch winners, `certain` the intersection.
struct Outcome {
    CandidateMask possible = 0;
    CandidateMask certain = 0;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct EliminationResult {
    std::vector<CandidateId> elimination_order; ///< filled only under TieBreak::Lexicographic
    std::vector<CandidateId> winners;
};

namespace detail {

inline CandidateMask highest_bit(CandidateMask m) noexcept { return CandidateMask{1} << (31 - std::countl_zero(m)); }

inline Outcome elimination_branches(const Profile& profile, const ScoringVector& vector, CandidateMask alive,
                                    std::map<CandidateMask, Outcome>& memo) {
    if (std::popcount(alive) == 1) return {alive, alive};
    if (auto it = memo.find(alive); it != memo.end()) return it->second;
    const CandidateMask tied = lowest_among(elimination_round_scores(profile, vector, alive), alive);
    Outcome out{0, all_candidates(profile.m())};
    for (CandidateId c : mask_members(tied)) {
        const Outcome sub = elimination_branches(profile, vector, alive & ~bit(c), memo);
        out.possible |= sub.possible;
        out.certain &= sub.certain;
    }
    memo.emplace(alive, out);
    return out;
}

} // namespace detail

inline EliminationResult run_elimination(const Profile& profile, const ScoringVector& vector, TieBreak tiebreak) {
    if (vector.size() != profile.m()) {
        throw DimensionMismatch("scoring vector has " + std::to_string(vector.size()) + " entries for " +
                                std::to_string(profile.m()) + " candidates");
    }
    EliminationResult result;
    if (tiebreak == TieBreak::Lexicographic) {
        CandidateMask alive = all_candidates(profile.m());
        while (std::popcount(alive) > 1) {
            const CandidateMask tied = lowest_among(elimination_round_scores(profile, vector, alive), alive);
            const CandidateMask out = detail::highest_bit(tied);
            result.elimination_order.push_back(CandidateId{std::countr_zero(out)});
            alive &= ~out;
        }
        result.winners = mask_members(alive);
        return result;
    }
    std::map<CandidateMask, Outcome> memo;
    const Outcome o = detail::elimination_branches(profile, vector, all_candidates(profile.m()), memo);
    result.winners = mask_members(tiebreak == TieBreak::Optimistic ? o.possible : o.certain);
    return result;
}

namespace detail {

/// Branch outcome of a runoff between x and y; an exact tie is a tie to resolve like any elimination tie.
inline Outcome runoff_pair(const PairwiseMatrix& n, CandidateId x, CandidateId y, TieBreak tiebreak) {
    const Weight d = n.margin(x, y);
    if (d > 0) return {bit(x), bit(x)};
    if (d < 0) return {bit(y), bit(y)};
    if (tiebreak == TieBreak::Lexicographic) {
        const CandidateId keep = std::min(x, y);
        return {bit(keep), bit(keep)};
    }
    return {bit(x) | bit(y), 0};
}

inline Outcome runoff_outcome(const Profile& profile, TieBreak tiebreak) {
    const int m = profile.m();
    if (m == 1) return {1u, 1u};
    std::vector<Weight> first(static_cast<std::size_t>(m), 0);
    for (const auto& v : profile.votes()) first[static_cast<std::size_t>(v.ballot.front().index)] += v.weight;
    const PairwiseMatrix n = pairwise_matrix(profile);
    if (tiebreak == TieBreak::Lexicographic) {
        std::vector<int> order(static_cast<std::size_t>(m));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return first[static_cast<std::size_t>(a)] > first[static_cast<std::size_t>(b)];
        });
        return runoff_pair(n, CandidateId{order[0]}, CandidateId{order[1]}, tiebreak);
    }
    Outcome out{0, all_candidates(m)};
    for (int x = 0; x < m; ++x) {
        for (int y = x + 1; y < m; ++y) {
            const Weight lo = std::min(first[static_cast<std::size_t>(x)], first[static_cast<std::size_t>(y)]);
            bool valid = true;
            for (int z = 0; z < m && valid; ++z) {
                if (z != x && z != y && first[static_cast<std::size_t>(z)] > lo) valid = false;
            }
            if (!valid) continue;
            const Outcome sub = runoff_pair(n, CandidateId{x}, CandidateId{y}, tiebreak);
            out.possible |= sub.possible;
            out.certain &= sub.certain;
        }
    }
    return out;
}

} // namespace detail

/// Plurality with runoff: top two by first choices, then a majority contest with transferred votes.
inline std::vector<CandidateId> runoff_winners(const Profile& profile, TieBreak tiebreak) {
    if (profile.m() < 2) return {CandidateId{0}};
    const Outcome o = detail::runoff_outcome(profile, tiebreak);
    return mask_members(tiebreak == TieBreak::Pessimistic ? o.certain : o.possible);
}

// ---------------------------------------------------------------------------
// Winner determination

/*
 * Winner sets of any rule.
 *
 * Score rules: both sets are the argmax (empty under the Unique model when it
 * is not a singleton). Elimination rules: every tie resolution ends with a
 * single survivor, so the model does not matter; Lexicographic follows one
 * resolution, the other policies report union and intersection over all.
 */
inline Outcome outcome(const Profile& profile, const RuleSpec& rule, WinnerModel model, TieBreak tiebreak) {
    if (const auto* r = std::get_if<EliminationRule>(&rule)) {
        if (tiebreak == TieBreak::Lexicographic) {
            const CandidateMask w = bit(run_elimination(profile, r->vector, tiebreak).winners.front());
            return {w, w};
        }
        if (r->vector.size() != profile.m()) {
            throw DimensionMismatch("scoring vector length does not match candidate count");
        }
        std::map<CandidateMask, Outcome> memo;
        return detail::elimination_branches(profile, r->vector, all_candidates(profile.m()), memo);
    }
    if (std::holds_alternative<RunoffRule>(rule)) {
        return detail::runoff_outcome(profile, tiebreak == TieBreak::Lexicographic ? tiebreak : TieBreak::Optimistic);
    }
    CandidateMask w = argmax_mask(rule_scores(profile, rule));
    if (model == WinnerModel::Unique && std::popcount(w) != 1) w = 0;
    return {w, w};
}

inline CandidateMask winner_mask(const Profile& profile, const RuleSpec& rule, WinnerModel model = WinnerModel::NonUnique,
                                 TieBreak tiebreak = TieBreak::Lexicographic) {
    const Outcome o = outcome(profile, rule, model, tiebreak);
    return tiebreak == TieBreak::Pessimistic ? o.certain : o.possible;
}

inline std::vector<CandidateId> winners(const Profile& profile, const RuleSpec& rule,
                                        WinnerModel model = WinnerModel::NonUnique,
                                        TieBreak tiebreak = TieBreak::Lexicographic) {
    return mask_members(winner_mask(profile, rule, model, tiebreak));
}

} // namespace truncvote

#endif // TRUNCVOTE_RULES_HPP
