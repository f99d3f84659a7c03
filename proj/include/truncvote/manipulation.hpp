#ifndef TRUNCVOTE_MANIPULATION_HPP
#define TRUNCVOTE_MANIPULATION_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "core.hpp"
#include "detail/search.hpp"
#include "detail/tally.hpp"
#include "errors.hpp"
#include "rules.hpp"

namespace truncvote {

struct Constructive {
    CandidateId p;
};
struct Destructive {
    CandidateId h;
};
/// d must end with the lowest score (strictly, unless `strict` is false).
struct AntiLowest {
    CandidateId d;
    bool strict = true;
};

using Goal = std::variant<Constructive, Destructive, AntiLowest>;

inline CandidateId goal_candidate(const Goal& g) {
    return std::visit([](const auto& x) -> CandidateId {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Constructive>) return x.p;
        else if constexpr (std::is_same_v<T, Destructive>) return x.h;
        else return x.d;
    }, g);
}

/// Fixed votes S, manipulator weights T, and what the coalition wants.
struct ManipulationInstance {
    int m = 0;
    std::vector<WeightedVote> fixed;
    std::vector<Weight> manipulator_weights;
    Goal goal = Constructive{CandidateId{0}};
    RuleSpec rule = MaximinRule{};
    WinnerModel model = WinnerModel::NonUnique;
    TieBreak tiebreak = TieBreak::Lexicographic;
    std::vector<std::string> names;

    /// Fixed votes plus one ballot per manipulator.
    Profile profile_with(std::span<const TopOrder> witness) const {
        if (witness.size() != manipulator_weights.size()) {
            throw DimensionMismatch("witness has " + std::to_string(witness.size()) + " ballots for " +
                                    std::to_string(manipulator_weights.size()) + " manipulators");
        }
        Profile p(m, fixed, names);
        for (std::size_t i = 0; i < witness.size(); ++i) p.add(WeightedVote{witness[i], manipulator_weights[i]});
        return p;
    }

    Weight manipulator_total() const noexcept {
        Weight w = 0;
        for (Weight x : manipulator_weights) w += x;
        return w;
    }
};

struct ManipulationOutcome {
    bool feasible = false;
    std::optional<std::vector<TopOrder>> witness;
};

namespace detail {

inline void validate(const ManipulationInstance& inst) {
    if (inst.m < 1 || inst.m > max_candidates) throw InvalidBallot("candidate count out of range");
    for (const auto& v : inst.fixed) {
        if (v.ballot.candidate_count() != inst.m) throw InvalidBallot("fixed ballot over the wrong candidate set");
        if (v.weight < 0) throw InvalidBallot("negative vote weight");
    }
    for (Weight w : inst.manipulator_weights) {
        if (w < 0) throw InvalidBallot("negative manipulator weight");
    }
    const CandidateId c = goal_candidate(inst.goal);
    if (c.index < 0 || c.index >= inst.m) throw InvalidBallot("goal candidate out of range");
    if (std::holds_alternative<AntiLowest>(inst.goal) && is_elimination_rule(inst.rule)) {
        throw UnsupportedRule("the lowest-score goal needs a score-based rule, not " + to_string(inst.rule));
    }
}

/// Goal test over winner sets, honoring the tie policy's quantifier.
inline bool goal_met(const Goal& goal, const Outcome& o, TieBreak tiebreak) {
    if (const auto* g = std::get_if<Constructive>(&goal)) {
        return ((tiebreak == TieBreak::Pessimistic ? o.certain : o.possible) & bit(g->p)) != 0;
    }
    const auto* g = std::get_if<Destructive>(&goal);
    return ((tiebreak == TieBreak::Optimistic ? o.certain : o.possible) & bit(g->h)) == 0;
}

template <class Score>
bool lowest_met(const AntiLowest& g, std::span<const Score> scores) {
    const Score& d = scores[static_cast<std::size_t>(g.d.index)];
    for (std::size_t c = 0; c < scores.size(); ++c) {
        if (static_cast<int>(c) == g.d.index) continue;
        if (g.strict ? !(d < scores[c]) : !(d <= scores[c])) return false;
    }
    return true;
}

inline TopOrder complete_order(int m, std::initializer_list<CandidateId> head, std::optional<CandidateId> tail) {
    std::vector<CandidateId> r(head);
    CandidateMask used = 0;
    for (CandidateId c : r) used |= bit(c);
    if (tail) used |= bit(*tail);
    for (int c = 0; c < m; ++c) {
        if (!(used & (CandidateMask{1} << c))) r.push_back(CandidateId{c});
    }
    if (tail) r.push_back(*tail);
    return TopOrder(std::move(r), m);
}

inline ManipulationOutcome check_uniform(const ManipulationInstance& inst, const TopOrder& ballot);

} // namespace detail

/// Whether `profile` achieves `goal`, decided through the reference winner determination.
inline bool goal_satisfied(const Goal& goal, const Profile& profile, const RuleSpec& rule, WinnerModel model,
                           TieBreak tiebreak) {
    if (const auto* g = std::get_if<AntiLowest>(&goal)) {
        const auto s = rule_scores(profile, rule);
        return detail::lowest_met<Rational>(*g, s);
    }
    return detail::goal_met(goal, outcome(profile, rule, model, tiebreak), tiebreak);
}

inline bool witness_valid(const ManipulationInstance& inst, std::span<const TopOrder> witness) {
    return goal_satisfied(inst.goal, inst.profile_with(witness), inst.rule, inst.model, inst.tiebreak);
}

struct BruteOptions {
    std::uint64_t budget = 100'000'000; ///< maximum winner evaluations
    bool complete_only = false;         ///< restrict manipulators to complete orders
    bool memoize = true;                ///< skip repeated partial tallies
};

/*
 * Exhaustive oracle: tries every canonical ballot for every manipulator and
 * returns the first satisfying assignment in enumeration order. Manipulators
 * of equal weight are interchangeable, so only sorted assignments are tried.
 */
inline ManipulationOutcome solve_brute(const ManipulationInstance& inst, const BruteOptions& opts = {}) {
    detail::validate(inst);
    const std::vector<TopOrder> options = opts.complete_only ? enumerate_complete_orders(inst.m) : enumerate_ballots(inst.m);
    const detail::Tally tally(inst.rule, inst.m);
    std::vector<detail::SearchVoter> voters;
    for (Weight w : inst.manipulator_weights) voters.push_back({w, &options});
    detail::AssignmentSearch search(tally, inst.fixed, std::move(voters), true);
    search.set_memoize(opts.memoize);
    search.set_budget(opts.budget);

    std::vector<std::int64_t> scores(static_cast<std::size_t>(inst.m));
    const auto* anti = std::get_if<AntiLowest>(&inst.goal);
    const bool found = search.run([&](std::span<const std::int64_t> acc, const std::vector<std::size_t>&) {
        if (anti) {
            tally.scores(acc, scores);
            return detail::lowest_met<std::int64_t>(*anti, scores);
        }
        return detail::goal_met(inst.goal, tally.decide(acc, inst.model, inst.tiebreak), inst.tiebreak);
    });
    if (!found) return {false, std::nullopt};
    std::vector<TopOrder> witness;
    for (std::size_t c : search.choice()) witness.push_back(options[c]);
    return {true, std::move(witness)};
}

/*
 * One-shot constructive check for rules where a single ballot dominates:
 * (p) for round-up scoring, veto-like round-down, plurality-like average and
 * maximin; the complete order with p first for plurality-like round-down.
 */
inline ManipulationOutcome cwcm_fast(const ManipulationInstance& inst) {
    detail::validate(inst);
    const auto* goal = std::get_if<Constructive>(&inst.goal);
    if (!goal) throw UnsupportedRule("cwcm_fast needs a constructive goal");
    const CandidateId p = goal->p;
    std::optional<TopOrder> ballot;
    if (const auto* r = std::get_if<ScoringRule>(&inst.rule)) {
        switch (r->scheme) {
        case TruncationScheme::RoundUp:
            ballot = TopOrder({p}, inst.m);
            break;
        case TruncationScheme::RoundDown:
            if (r->vector.veto_like()) ballot = TopOrder({p}, inst.m);
            else if (r->vector.plurality_like()) ballot = detail::complete_order(inst.m, {p}, std::nullopt);
            break;
        case TruncationScheme::Average:
            if (r->vector.plurality_like()) ballot = TopOrder({p}, inst.m);
            break;
        }
    } else if (std::holds_alternative<MaximinRule>(inst.rule)) {
        ballot = TopOrder({p}, inst.m);
    }
    if (!ballot) throw UnsupportedRule("no polynomial constructive strategy for " + to_string(inst.rule));
    return detail::check_uniform(inst, canonicalize_ballot(*ballot));
}

/*
 * eliminate(veto), unique-winner model: every manipulator casting the same
 * complete order is as strong as any assignment, so try all m! orders.
 */
inline ManipulationOutcome cwcm_eliminate_veto_unique(const ManipulationInstance& inst) {
    detail::validate(inst);
    const auto* r = std::get_if<EliminationRule>(&inst.rule);
    if (!r || !r->vector.veto_like()) throw UnsupportedRule("rule must be eliminate(veto)");
    if (inst.model != WinnerModel::Unique) throw UnsupportedRule("eliminate(veto) fast path is defined for the unique-winner model");
    if (!std::holds_alternative<Constructive>(inst.goal)) throw UnsupportedRule("needs a constructive goal");
    for (const auto& order : enumerate_complete_orders(inst.m)) {
        auto out = detail::check_uniform(inst, order);
        if (out.feasible) return out;
    }
    return {false, std::nullopt};
}

/*
 * Destructive eliminate(veto): h loses exactly when some other candidate can
 * be made the winner, so run the constructive fast path for each c != h.
 * Needs a policy under which "h is not a winner" means "some c wins".
 */
inline ManipulationOutcome dwcm_eliminate_veto(const ManipulationInstance& inst) {
    detail::validate(inst);
    const auto* goal = std::get_if<Destructive>(&inst.goal);
    if (!goal) throw UnsupportedRule("needs a destructive goal");
    if (inst.tiebreak == TieBreak::Pessimistic) throw UnsupportedRule("pessimistic ties do not split by winner");
    for (int c = 0; c < inst.m; ++c) {
        if (c == goal->h.index) continue;
        ManipulationInstance sub = inst;
        sub.goal = Constructive{CandidateId{c}};
        sub.model = WinnerModel::Unique;
        auto out = cwcm_eliminate_veto_unique(sub);
        if (out.feasible) return out;
    }
    return {false, std::nullopt};
}

/// Destructive manipulation for monotone score rules: try each c != h as (c, ..., h).
inline ManipulationOutcome dwcm_fast(const ManipulationInstance& inst) {
    detail::validate(inst);
    const auto* goal = std::get_if<Destructive>(&inst.goal);
    if (!goal) throw UnsupportedRule("dwcm_fast needs a destructive goal");
    if (is_elimination_rule(inst.rule)) throw UnsupportedRule(to_string(inst.rule) + " is not monotone");
    for (int c = 0; c < inst.m; ++c) {
        if (c == goal->h.index) continue;
        auto out = detail::check_uniform(inst, detail::complete_order(inst.m, {CandidateId{c}}, goal->h));
        if (out.feasible) return out;
    }
    if (inst.m == 1) return detail::check_uniform(inst, TopOrder({goal->h}, 1));
    return {false, std::nullopt};
}

/// Lowest-score goal for veto-like vectors: everyone puts d last.
inline ManipulationOutcome antiwcm_fast(const ManipulationInstance& inst) {
    detail::validate(inst);
    const auto* goal = std::get_if<AntiLowest>(&inst.goal);
    if (!goal) throw UnsupportedRule("antiwcm_fast needs a lowest-score goal");
    const auto* r = std::get_if<ScoringRule>(&inst.rule);
    if (!r || !r->vector.veto_like()) throw UnsupportedRule("antiwcm_fast needs alpha_1 = ... = alpha_{m-1}");
    return detail::check_uniform(inst, detail::complete_order(inst.m, {}, goal->d));
}

struct DpOptions {
    std::uint64_t max_states = 200'000'000;
};

namespace detail {

inline ManipulationOutcome check_uniform(const ManipulationInstance& inst, const TopOrder& ballot) {
    std::vector<TopOrder> witness(inst.manipulator_weights.size(), ballot);
    if (witness_valid(inst, witness)) return {true, std::move(witness)};
    return {false, std::nullopt};
}

} // namespace detail

/*
 * Pseudo-polynomial exact solver for three candidates.
 *
 * Every manipulator may be assumed to rank p first, so each votes (p,a,b),
 * (p,b,a) or (p). Scoring rules: the reachable (x, y) pairs of total weight
 * on the first two types determine every score. Copeland: only the margin
 * x - y between a and b is affected.
 */
inline ManipulationOutcome solve_dp3(const ManipulationInstance& inst, const DpOptions& opts = {}) {
    detail::validate(inst);
    if (inst.m != 3) throw UnsupportedRule("solve_dp3 needs exactly three candidates");
    const auto* goal = std::get_if<Constructive>(&inst.goal);
    if (!goal) throw UnsupportedRule("solve_dp3 needs a constructive goal");
    const auto* scoring = std::get_if<ScoringRule>(&inst.rule);
    const auto* copeland = std::get_if<CopelandRule>(&inst.rule);
    if (scoring && scoring->scheme == TruncationScheme::RoundUp) scoring = nullptr;
    if (!scoring && !copeland) throw UnsupportedRule("solve_dp3 covers round-down/average scoring and Copeland");

    const CandidateId p = goal->p;
    CandidateId a{-1}, b{-1};
    for (int c = 0; c < 3; ++c) {
        if (c == p.index) continue;
        (a.index < 0 ? a : b) = CandidateId{c};
    }
    const TopOrder pab({p, a, b}, 3), pba({p, b, a}, 3), solo({p}, 3);
    const auto& w = inst.manipulator_weights;
    const std::size_t n = w.size();
    const Weight total = inst.manipulator_total();
    const bool unique = inst.model == WinnerModel::Unique;
    const auto wins = [&](const std::vector<Rational>& s) {
        for (int c = 0; c < 3; ++c) {
            if (c == p.index) continue;
            const auto& sp = s[static_cast<std::size_t>(p.index)];
            const auto& sc = s[static_cast<std::size_t>(c)];
            if (unique ? !(sp > sc) : !(sp >= sc)) return false;
        }
        return true;
    };

    std::vector<TopOrder> witness;
    if (scoring) {
        const auto side = static_cast<std::uint64_t>(total + 1);
        if (detail::saturating_mul(detail::saturating_mul(side, side), n + 1) > opts.max_states) {
            throw BudgetExceeded("dynamic program state space too large");
        }
        // reach[i][x * side + y]: first i manipulators can put weight x on (p,a,b) and y on (p,b,a).
        std::vector<std::vector<char>> reach(n + 1, std::vector<char>(side * side, 0));
        reach[0][0] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            const auto wi = static_cast<std::uint64_t>(w[i]);
            for (std::uint64_t x = 0; x < side; ++x) {
                for (std::uint64_t y = 0; x + y < side; ++y) {
                    if (!reach[i][x * side + y]) continue;
                    reach[i + 1][x * side + y] = 1;
                    if (x + y + wi < side) {
                        reach[i + 1][(x + wi) * side + y] = 1;
                        reach[i + 1][x * side + y + wi] = 1;
                    }
                }
            }
        }
        const Profile base(3, inst.fixed);
        const auto s0 = positional_scores(base, scoring->vector, scoring->scheme);
        const auto u1 = ballot_scores(pab, scoring->vector, scoring->scheme);
        const auto u2 = ballot_scores(pba, scoring->vector, scoring->scheme);
        const auto u3 = ballot_scores(solo, scoring->vector, scoring->scheme);
        std::optional<std::pair<std::uint64_t, std::uint64_t>> hit;
        for (std::uint64_t x = 0; x < side && !hit; ++x) {
            for (std::uint64_t y = 0; x + y < side && !hit; ++y) {
                if (!reach[n][x * side + y]) continue;
                const Rational rx(static_cast<Weight>(x)), ry(static_cast<Weight>(y)),
                    rz(total - static_cast<Weight>(x + y));
                std::vector<Rational> s(3);
                for (std::size_t c = 0; c < 3; ++c) s[c] = s0[c] + rx * u1[c] + ry * u2[c] + rz * u3[c];
                if (wins(s)) hit = std::make_pair(x, y);
            }
        }
        if (!hit) return {false, std::nullopt};
        auto [x, y] = *hit;
        witness.assign(n, solo);
        for (std::size_t i = n; i-- > 0;) {
            const auto wi = static_cast<std::uint64_t>(w[i]);
            if (reach[i][x * side + y]) continue; // voted (p)
            if (x >= wi && reach[i][(x - wi) * side + y]) {
                witness[i] = pab;
                x -= wi;
            } else {
                witness[i] = pba;
                y -= wi;
            }
        }
    } else {
        const auto span = static_cast<std::uint64_t>(2 * total + 1);
        if (detail::saturating_mul(span, n + 1) > opts.max_states) {
            throw BudgetExceeded("dynamic program state space too large");
        }
        // reach[i][d + total]: first i manipulators can produce margin d = N(a,b) - N(b,a).
        std::vector<std::vector<char>> reach(n + 1, std::vector<char>(span, 0));
        reach[0][static_cast<std::size_t>(total)] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            const auto wi = static_cast<std::size_t>(w[i]);
            for (std::size_t d = 0; d < span; ++d) {
                if (!reach[i][d]) continue;
                reach[i + 1][d] = 1;
                if (d + wi < span) reach[i + 1][d + wi] = 1;
                if (d >= wi) reach[i + 1][d - wi] = 1;
            }
        }
        Profile base(3, inst.fixed);
        base.add(WeightedVote{solo, total});
        const PairwiseMatrix n0 = pairwise_matrix(base);
        std::optional<std::size_t> hit;
        for (std::size_t d = 0; d < span && !hit; ++d) {
            if (!reach[n][d]) continue;
            PairwiseMatrix nm = n0;
            const Weight margin = static_cast<Weight>(d) - total;
            // margin = x - y with x + y <= total; add x to N(a,b) and y to N(b,a).
            const Weight x = margin > 0 ? margin : 0;
            const Weight y = margin < 0 ? -margin : 0;
            nm.at(a, b) += x;
            nm.at(b, a) += y;
            if (wins(copeland_scores(nm, copeland->alpha))) hit = d;
        }
        if (!hit) return {false, std::nullopt};
        std::size_t d = *hit;
        witness.assign(n, solo);
        for (std::size_t i = n; i-- > 0;) {
            const auto wi = static_cast<std::size_t>(w[i]);
            if (reach[i][d]) continue;
            if (d >= wi && reach[i][d - wi]) {
                witness[i] = pab;
                d -= wi;
            } else {
                witness[i] = pba;
                d += wi;
            }
        }
    }
    for (auto& bal : witness) bal = canonicalize_ballot(bal);
    return {true, std::move(witness)};
}

} // namespace truncvote

#endif // TRUNCVOTE_MANIPULATION_HPP
