#ifndef TRUNCVOTE_UNCERTAINTY_HPP
#define TRUNCVOTE_UNCERTAINTY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "detail/search.hpp"
#include "detail/tally.hpp"
#include "errors.hpp"
#include "manipulation.hpp"
#include "rational.hpp"
#include "rules.hpp"

namespace truncvote {

/// A revealed prefix; the hidden remainder may append any candidates.
struct PartialVote {
    TopOrder prefix;
    Weight weight = 1;

    friend bool operator==(const PartialVote&, const PartialVote&) = default;
};

struct PartialProfile {
    int m = 0;
    std::vector<PartialVote> revealed;
    std::vector<std::string> names;

    friend bool operator==(const PartialProfile&, const PartialProfile&) = default;
};

struct SupportPoint {
    TopOrder ballot;
    Rational prob;

    friend bool operator==(const SupportPoint&, const SupportPoint&) = default;
};

/// One voter's independent distribution over ballots.
struct VoterDistribution {
    Weight weight = 1;
    std::vector<SupportPoint> support;

    friend bool operator==(const VoterDistribution&, const VoterDistribution&) = default;
};

struct ProbabilisticInstance {
    int m = 0;
    std::vector<VoterDistribution> voters;
    std::vector<std::string> names;

    void validate() const {
        if (m < 1 || m > max_candidates) throw InvalidBallot("candidate count out of range");
        for (const auto& v : voters) {
            if (v.weight < 0) throw InvalidBallot("negative vote weight");
            if (v.support.empty()) throw ConstraintViolation("voter distribution has empty support");
            Rational total = 0;
            for (const auto& s : v.support) {
                if (s.ballot.candidate_count() != m) throw InvalidBallot("ballot over the wrong candidate set");
                if (s.prob <= 0) throw ConstraintViolation("support probabilities must be positive");
                total += s.prob;
            }
            if (total != 1) throw ConstraintViolation("support probabilities sum to " + total.to_string());
        }
    }

    friend bool operator==(const ProbabilisticInstance&, const ProbabilisticInstance&) = default;
};

struct EvaluationResult {
    bool possible = false;
    std::optional<std::vector<TopOrder>> witness_extension;
    std::optional<Rational> probability;
};

struct SearchOptions {
    std::uint64_t budget = 100'000'000;
};

/// Canonical ballots extending `prefix`, shortest first.
inline std::vector<TopOrder> extensions(const TopOrder& prefix) {
    const int m = prefix.candidate_count();
    std::vector<TopOrder> out;
    std::vector<CandidateId> cur(prefix.begin(), prefix.end());
    const auto grow = [&](auto& self, CandidateMask used) -> void {
        const int k = static_cast<int>(cur.size());
        if (k != m - 1 || m == 1) {
            const TopOrder b(cur, m);
            if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
        }
        for (int c = 0; c < m; ++c) {
            if (used & (CandidateMask{1} << c)) continue;
            cur.push_back(CandidateId{c});
            self(self, used | (CandidateMask{1} << c));
            cur.pop_back();
        }
    };
    grow(grow, prefix.ranked_mask());
    std::stable_sort(out.begin(), out.end(), [](const TopOrder& a, const TopOrder& b) { return a.size() < b.size(); });
    return out;
}

namespace detail {

inline void validate(const PartialProfile& partial) {
    if (partial.m < 1 || partial.m > max_candidates) throw InvalidBallot("candidate count out of range");
    for (const auto& v : partial.revealed) {
        if (v.prefix.candidate_count() != partial.m) throw InvalidBallot("prefix over the wrong candidate set");
        if (v.weight < 0) throw InvalidBallot("negative vote weight");
    }
}

inline void check_target(int m, CandidateId p) {
    if (p.index < 0 || p.index >= m) throw InvalidBallot("target candidate out of range");
}

} // namespace detail

/*
 * Exhaustive possible-winner test over all joint extensions of the revealed
 * prefixes. `extra` votes are fixed and complete the election as given.
 */
inline EvaluationResult evaluate_possible(const PartialProfile& partial, const RuleSpec& rule, CandidateId p,
                                          WinnerModel model = WinnerModel::NonUnique,
                                          TieBreak tiebreak = TieBreak::Lexicographic,
                                          std::span<const WeightedVote> extra = {}, const SearchOptions& opts = {}) {
    detail::validate(partial);
    detail::check_target(partial.m, p);
    // Equal prefixes share one option list so the search can treat them as interchangeable.
    std::vector<TopOrder> keys;
    std::vector<std::vector<TopOrder>> lists;
    lists.reserve(partial.revealed.size());
    std::vector<std::size_t> list_of;
    for (const auto& v : partial.revealed) {
        const auto it = std::find(keys.begin(), keys.end(), v.prefix);
        if (it != keys.end()) {
            list_of.push_back(static_cast<std::size_t>(it - keys.begin()));
            continue;
        }
        list_of.push_back(keys.size());
        keys.push_back(v.prefix);
        lists.push_back(extensions(v.prefix));
    }
    std::vector<detail::SearchVoter> voters;
    for (std::size_t i = 0; i < partial.revealed.size(); ++i) {
        voters.push_back({partial.revealed[i].weight, &lists[list_of[i]]});
    }
    const detail::Tally tally(rule, partial.m);
    detail::AssignmentSearch search(tally, extra, std::move(voters), true);
    search.set_memoize(true);
    search.set_budget(opts.budget);
    const Goal goal = Constructive{p};
    const bool found = search.run([&](std::span<const std::int64_t> acc, const std::vector<std::size_t>&) {
        return detail::goal_met(goal, tally.decide(acc, model, tiebreak), tiebreak);
    });
    EvaluationResult out;
    out.possible = found;
    if (found) {
        std::vector<TopOrder> w;
        for (std::size_t i = 0; i < partial.revealed.size(); ++i) {
            w.push_back(lists[list_of[i]][search.choice()[i]]);
        }
        out.witness_extension = std::move(w);
    }
    return out;
}

inline Profile extended_profile(const PartialProfile& partial, std::span<const TopOrder> extension,
                                std::span<const WeightedVote> extra = {}) {
    if (extension.size() != partial.revealed.size()) throw DimensionMismatch("one extension per revealed vote expected");
    Profile prof(partial.m, {}, partial.names);
    for (std::size_t i = 0; i < extension.size(); ++i) prof.add(WeightedVote{extension[i], partial.revealed[i].weight});
    for (const auto& v : extra) prof.add(v);
    return prof;
}

namespace detail {

/// Appends the candidates missing from `prefix` in the order given by `fill`.
inline TopOrder complete_with(const TopOrder& prefix, std::span<const CandidateId> fill) {
    std::vector<CandidateId> r(prefix.begin(), prefix.end());
    const CandidateMask have = prefix.ranked_mask();
    for (CandidateId c : fill) {
        if (!(have & bit(c))) r.push_back(c);
    }
    return TopOrder(std::move(r), prefix.candidate_count());
}

inline EvaluationResult check_extension(const PartialProfile& partial, const RuleSpec& rule, CandidateId p,
                                        WinnerModel model, TieBreak tiebreak, std::vector<TopOrder> ext) {
    for (auto& b : ext) b = canonicalize_ballot(b);
    EvaluationResult out;
    const Outcome o = outcome(extended_profile(partial, ext), rule, model, tiebreak);
    out.possible = detail::goal_met(Constructive{p}, o, tiebreak);
    if (out.possible) out.witness_extension = std::move(ext);
    return out;
}

} // namespace detail

/*
 * Polynomial possible-winner tests that build one optimal extension.
 *
 * Round-up scoring, veto round-down, plurality average and maximin: append p
 * to every prefix lacking it. Plurality round-down: a prefix starting with p
 * is completed so p takes the top score; any other prefix is left as is,
 * since completing it would lift its top candidate. eliminate(veto): for each
 * elimination order e, complete every prefix with the missing candidates in
 * reverse order of e.
 */
inline EvaluationResult evaluate_fast(const PartialProfile& partial, const RuleSpec& rule, CandidateId p,
                                      WinnerModel model = WinnerModel::NonUnique,
                                      TieBreak tiebreak = TieBreak::Lexicographic) {
    detail::validate(partial);
    detail::check_target(partial.m, p);
    const int m = partial.m;
    enum class Strategy { AppendP, PluralityDown, EliminateVeto } strategy;
    if (const auto* r = std::get_if<ScoringRule>(&rule)) {
        if (r->scheme == TruncationScheme::RoundUp) strategy = Strategy::AppendP;
        else if (r->scheme == TruncationScheme::RoundDown && r->vector.veto_like()) strategy = Strategy::AppendP;
        else if (r->scheme == TruncationScheme::RoundDown && r->vector.plurality_like()) strategy = Strategy::PluralityDown;
        else if (r->scheme == TruncationScheme::Average && r->vector.plurality_like()) strategy = Strategy::AppendP;
        else throw UnsupportedRule("no polynomial evaluation for " + to_string(rule));
    } else if (std::holds_alternative<MaximinRule>(rule)) {
        strategy = Strategy::AppendP;
    } else if (const auto* e = std::get_if<EliminationRule>(&rule); e && e->vector.veto_like()) {
        strategy = Strategy::EliminateVeto;
    } else {
        throw UnsupportedRule("no polynomial evaluation for " + to_string(rule));
    }

    std::vector<TopOrder> ext;
    switch (strategy) {
    case Strategy::AppendP:
        for (const auto& v : partial.revealed) {
            ext.push_back(v.prefix.contains(p) ? v.prefix : detail::complete_with(v.prefix, std::vector{p}));
        }
        return detail::check_extension(partial, rule, p, model, tiebreak, std::move(ext));
    case Strategy::PluralityDown: {
        std::vector<CandidateId> rest;
        for (int c = 0; c < m; ++c) rest.push_back(CandidateId{c});
        for (const auto& v : partial.revealed) {
            ext.push_back(v.prefix.front() == p ? detail::complete_with(v.prefix, rest) : v.prefix);
        }
        return detail::check_extension(partial, rule, p, model, tiebreak, std::move(ext));
    }
    case Strategy::EliminateVeto:
        for (const auto& order : enumerate_complete_orders(m)) {
            if (order.back() != p) continue;
            // Fill with p first, then the candidates eliminated latest.
            std::vector<CandidateId> fill(order.begin(), order.end());
            std::reverse(fill.begin(), fill.end());
            ext.clear();
            for (const auto& v : partial.revealed) ext.push_back(detail::complete_with(v.prefix, fill));
            auto out = detail::check_extension(partial, rule, p, model, tiebreak, ext);
            if (out.possible) return out;
        }
        return {};
    }
    return {};
}

/// Exact probability that p wins when every voter draws independently from their support.
inline Rational weighted_eval_exact(const ProbabilisticInstance& instance, const RuleSpec& rule, CandidateId p,
                                    WinnerModel model = WinnerModel::NonUnique,
                                    TieBreak tiebreak = TieBreak::Lexicographic, std::span<const WeightedVote> extra = {},
                                    const SearchOptions& opts = {}) {
    instance.validate();
    detail::check_target(instance.m, p);
    std::vector<std::vector<TopOrder>> lists;
    lists.reserve(instance.voters.size());
    std::vector<detail::SearchVoter> voters;
    std::vector<const VoterDistribution*> active;
    for (const auto& v : instance.voters) {
        if (v.weight == 0) continue; // score-neutral regardless of the draw
        std::vector<TopOrder> opts_list;
        for (const auto& s : v.support) opts_list.push_back(s.ballot);
        lists.push_back(std::move(opts_list));
        active.push_back(&v);
    }
    for (std::size_t i = 0; i < active.size(); ++i) voters.push_back({active[i]->weight, &lists[i]});
    const detail::Tally tally(rule, instance.m);
    detail::AssignmentSearch search(tally, extra, std::move(voters), false);
    search.set_budget(opts.budget);
    const Goal goal = Constructive{p};
    Rational total = 0;
    search.run([&](std::span<const std::int64_t> acc, const std::vector<std::size_t>& choice) {
        if (detail::goal_met(goal, tally.decide(acc, model, tiebreak), tiebreak)) {
            Rational pr = 1;
            for (std::size_t i = 0; i < choice.size(); ++i) pr *= active[i]->support[choice[i]].prob;
            total += pr;
        }
        return false;
    });
    return total;
}

/// The same revealed prefixes, each extended uniformly at random over its canonical extensions.
inline ProbabilisticInstance uniform_extension_instance(const PartialProfile& partial) {
    detail::validate(partial);
    ProbabilisticInstance out{partial.m, {}, partial.names};
    for (const auto& v : partial.revealed) {
        const auto ext = extensions(v.prefix);
        VoterDistribution d{v.weight, {}};
        const Rational each(1, static_cast<std::int64_t>(ext.size()));
        for (const auto& b : ext) d.support.push_back({b, each});
        out.voters.push_back(std::move(d));
    }
    return out;
}

/// Probability that p wins when hidden remainders are drawn uniformly; positive exactly when p is a possible winner.
inline Rational uniform_extension_probability(const PartialProfile& partial, const RuleSpec& rule, CandidateId p,
                                              WinnerModel model = WinnerModel::NonUnique,
                                              TieBreak tiebreak = TieBreak::Lexicographic,
                                              const SearchOptions& opts = {}) {
    return weighted_eval_exact(uniform_extension_instance(partial), rule, p, model, tiebreak, {}, opts);
}

namespace detail {

inline const std::vector<TopOrder>& manipulator_ballots(const RuleSpec& rule, int m,
                                                        std::vector<TopOrder>& storage) {
    // eliminate(veto): complete orders are as strong as any top order.
    const auto* e = std::get_if<EliminationRule>(&rule);
    storage = (e && e->vector.veto_like()) ? enumerate_complete_orders(m) : enumerate_ballots(m);
    return storage;
}

} // namespace detail

/*
 * Single-manipulator constructive manipulation when the other votes are
 * known only as prefixes: some manipulator ballot must make p a possible
 * winner. Only the "probability > 0" threshold is supported.
 */
inline ManipulationOutcome cwim_ttu(const PartialProfile& partial, Weight manip_weight, CandidateId p,
                                    const RuleSpec& rule, WinnerModel model = WinnerModel::NonUnique,
                                    TieBreak tiebreak = TieBreak::Lexicographic, const SearchOptions& opts = {}) {
    detail::validate(partial);
    if (manip_weight < 0) throw InvalidBallot("negative manipulator weight");
    std::vector<TopOrder> storage;
    for (const auto& b : detail::manipulator_ballots(rule, partial.m, storage)) {
        const WeightedVote mv{b, manip_weight};
        if (evaluate_possible(partial, rule, p, model, tiebreak, std::span<const WeightedVote>(&mv, 1), opts).possible) {
            return {true, std::vector<TopOrder>{b}};
        }
    }
    return {false, std::nullopt};
}

/// Single-manipulator manipulation against independent vote distributions: P(p wins) must exceed r.
inline ManipulationOutcome cwim_u(const ProbabilisticInstance& instance, Weight manip_weight, CandidateId p,
                                  const Rational& r, const RuleSpec& rule, WinnerModel model = WinnerModel::NonUnique,
                                  TieBreak tiebreak = TieBreak::Lexicographic, const SearchOptions& opts = {}) {
    instance.validate();
    if (manip_weight < 0) throw InvalidBallot("negative manipulator weight");
    if (r < 0 || r >= 1) throw ConstraintViolation("threshold must satisfy 0 <= r < 1");
    std::vector<TopOrder> storage;
    for (const auto& b : detail::manipulator_ballots(rule, instance.m, storage)) {
        const WeightedVote mv{b, manip_weight};
        if (weighted_eval_exact(instance, rule, p, model, tiebreak, std::span<const WeightedVote>(&mv, 1), opts) > r) {
            return {true, std::vector<TopOrder>{b}};
        }
    }
    return {false, std::nullopt};
}

} // namespace truncvote

#endif // TRUNCVOTE_UNCERTAINTY_HPP
