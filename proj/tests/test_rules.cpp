#include <gtest/gtest.h>

#include <vector>

#include "truncvote/detail/tally.hpp"
#include "truncvote/rules.hpp"
#include "truncvote/sampling.hpp"

using namespace truncvote;

namespace {

const CandidateId c1{0}, c2{1}, c3{2}, c4{3};

Profile single(int m, std::initializer_list<int> ballot, Weight w = 1) {
    return Profile(m, {WeightedVote{TopOrder::of(ballot, m), w}});
}

std::vector<Rational> R(std::initializer_list<Rational> xs) { return xs; }

// Scores straight from the 1-indexed definitions.
std::vector<Rational> positional_oracle(const Profile& prof, const ScoringVector& v, TruncationScheme s) {
    const int m = prof.m();
    std::vector<Rational> out(static_cast<std::size_t>(m), Rational(0));
    const auto alpha = [&](int i) { return v[i - 1]; }; // 1-indexed
    for (const auto& vote : prof.votes()) {
        const int k = vote.ballot.size();
        for (int c = 0; c < m; ++c) {
            const auto pos = vote.ballot.position(CandidateId{c});
            Rational pts;
            if (pos) {
                const int i = *pos + 1;
                pts = (s == TruncationScheme::RoundDown && k < m) ? alpha(m - (k - i) - 1) : alpha(i);
            } else if (s == TruncationScheme::Average) {
                Rational sum = 0;
                for (int j = k + 1; j <= m; ++j) sum += alpha(j);
                pts = sum / Rational(m - k);
            } else {
                pts = alpha(m);
            }
            out[static_cast<std::size_t>(c)] += pts * Rational(vote.weight);
        }
    }
    return out;
}

Weight pairwise_oracle(const Profile& prof, int i, int j) {
    Weight n = 0;
    for (const auto& v : prof.votes()) {
        const auto pi = v.ballot.position(CandidateId{i});
        const auto pj = v.ballot.position(CandidateId{j});
        if (pi && (!pj || *pi < *pj)) n += v.weight;
    }
    return n;
}

// Lexicographic elimination recomputed from scratch each round.
CandidateId elimination_oracle(const Profile& prof, const ScoringVector& v) {
    std::vector<int> alive;
    for (int c = 0; c < prof.m(); ++c) alive.push_back(c);
    while (alive.size() > 1) {
        const int r = static_cast<int>(alive.size());
        const ScoringVector rv = v.restricted(r);
        std::vector<Rational> score(alive.size(), Rational(0));
        for (const auto& vote : prof.votes()) {
            std::vector<int> order;
            for (CandidateId c : vote.ballot) {
                if (std::find(alive.begin(), alive.end(), c.index) != alive.end()) order.push_back(c.index);
            }
            if (order.empty()) continue;
            for (std::size_t a = 0; a < alive.size(); ++a) {
                const auto it = std::find(order.begin(), order.end(), alive[a]);
                const Rational pts = it == order.end() ? rv[r - 1] : rv[static_cast<int>(it - order.begin())];
                score[a] += pts * Rational(vote.weight);
            }
        }
        std::size_t drop = 0;
        for (std::size_t a = 1; a < alive.size(); ++a) {
            if (score[a] <= score[drop]) drop = a; // ties go to the larger index
        }
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    return CandidateId{alive.front()};
}

Profile random_profile(sampling::Rng& rng, int m, int max_votes = 5, int max_weight = 5) {
    Profile p(m);
    const int n = sampling::uniform(rng, 0, max_votes);
    for (int i = 0; i < n; ++i) p.add({sampling::random_ballot(rng, m), sampling::uniform(rng, 0, max_weight)});
    return p;
}

RuleSpec random_rule(sampling::Rng& rng, int m) {
    switch (sampling::uniform(rng, 0, 4)) {
    case 0: {
        const TruncationScheme s[] = {TruncationScheme::RoundUp, TruncationScheme::RoundDown, TruncationScheme::Average};
        return ScoringRule{sampling::random_vector(rng, m), s[sampling::uniform(rng, 0, 2)]};
    }
    case 1: {
        const ScoringVector vs[] = {ScoringVector::plurality(m), ScoringVector::veto(m), ScoringVector::borda(m),
                                    sampling::random_vector(rng, m)};
        return EliminationRule{vs[sampling::uniform(rng, 0, 3)]};
    }
    case 2: return RunoffRule{};
    case 3: return CopelandRule{Rational(sampling::uniform(rng, 0, 4), 4)};
    default: return MaximinRule{};
    }
}

} // namespace

TEST(PositionalScores, WorkedExampleRoundUp) {
    const auto s = positional_scores(single(4, {2, 0}), ScoringVector::borda(4), TruncationScheme::RoundUp);
    EXPECT_EQ(s, R({2, 0, 3, 0})); // c1:2 c2:0 c3:3 c4:0
}

TEST(PositionalScores, WorkedExampleRoundDown) {
    const auto s = positional_scores(single(4, {2, 0}), ScoringVector::borda(4), TruncationScheme::RoundDown);
    EXPECT_EQ(s, R({1, 0, 2, 0}));
}

TEST(PositionalScores, WorkedExampleAverage) {
    const auto s = positional_scores(single(4, {2, 0}), ScoringVector::borda(4), TruncationScheme::Average);
    EXPECT_EQ(s, R({2, Rational(1, 2), 3, Rational(1, 2)}));
}

TEST(PositionalScores, DimensionMismatch) {
    EXPECT_THROW(positional_scores(single(3, {0}), ScoringVector::borda(4), TruncationScheme::RoundUp), DimensionMismatch);
}

TEST(PositionalScores, MatchesDefinitionOnRandomProfiles) {
    sampling::Rng rng(11);
    for (int i = 0; i < 400; ++i) {
        const int m = sampling::uniform(rng, 1, 5);
        const Profile p = random_profile(rng, m);
        const ScoringVector v = sampling::random_vector(rng, m);
        for (auto s : {TruncationScheme::RoundUp, TruncationScheme::RoundDown, TruncationScheme::Average}) {
            EXPECT_EQ(positional_scores(p, v, s), positional_oracle(p, v, s));
        }
    }
}

TEST(ScoringVector, Validation) {
    EXPECT_THROW(ScoringVector::of({1, 2}), ConstraintViolation);
    EXPECT_THROW(ScoringVector::of({1, -1}), ConstraintViolation);
    EXPECT_TRUE(ScoringVector::plurality(4).plurality_like());
    EXPECT_TRUE(ScoringVector::veto(4).veto_like());
    EXPECT_FALSE(ScoringVector::borda(4).veto_like());
    EXPECT_EQ(ScoringVector::borda(5).restricted(3), ScoringVector::borda(3));
    EXPECT_EQ(ScoringVector::of({5, 3, 2, 0}).restricted(3), ScoringVector::of({5, 3, 0}));
}

TEST(Elimination, StrictMajorityTwoCandidates) {
    const Profile p(2, {{TopOrder::of({0, 1}, 2), 3}, {TopOrder::of({1, 0}, 2), 1}});
    const auto r = run_elimination(p, ScoringVector::plurality(2), TieBreak::Lexicographic);
    ASSERT_EQ(r.elimination_order.size(), 1u);
    EXPECT_EQ(r.elimination_order[0], c2);
    ASSERT_EQ(r.winners.size(), 1u);
    EXPECT_EQ(r.winners[0], c1);
}

TEST(Elimination, VetoHandSimulation) {
    // a=0, b=1, p=2. Round 1: b vetoed by 3. Round 2: (p,a) once vs (a,p) twice.
    const Profile p(3, {{TopOrder::of({2, 0, 1}, 3), 1}, {TopOrder::of({0, 2, 1}, 3), 1}, {TopOrder::of({0, 2, 1}, 3), 1}});
    const auto r = run_elimination(p, ScoringVector::veto(3), TieBreak::Lexicographic);
    ASSERT_EQ(r.elimination_order.size(), 2u);
    EXPECT_EQ(r.elimination_order[0], CandidateId{1});
    EXPECT_EQ(r.elimination_order[1], CandidateId{2});
    EXPECT_EQ(r.winners, std::vector<CandidateId>{CandidateId{0}});
}

TEST(Elimination, LexicographicDropsLargestIndex) {
    const Profile p(3, {{TopOrder::of({0}, 3), 1}, {TopOrder::of({1}, 3), 1}, {TopOrder::of({2}, 3), 1}});
    const auto r = run_elimination(p, ScoringVector::plurality(3), TieBreak::Lexicographic);
    EXPECT_EQ(r.elimination_order.front(), c3);
    EXPECT_EQ(r.winners, std::vector<CandidateId>{c1});
}

TEST(Elimination, BranchingPolicies) {
    const Profile p(3, {{TopOrder::of({0}, 3), 1}, {TopOrder::of({1}, 3), 1}, {TopOrder::of({2}, 3), 1}});
    const RuleSpec rule = EliminationRule{ScoringVector::plurality(3)};
    // Every candidate survives some resolution; none survives all.
    EXPECT_EQ(winner_mask(p, rule, WinnerModel::NonUnique, TieBreak::Optimistic), 7u);
    EXPECT_EQ(winner_mask(p, rule, WinnerModel::NonUnique, TieBreak::Pessimistic), 0u);
}

TEST(Elimination, IgnoresExhaustedVotes) {
    // (c3) is ignored once c3 is gone; c1 then beats c2 on the remaining votes.
    const Profile p(3, {{TopOrder::of({2}, 3), 1}, {TopOrder::of({0, 1}, 3), 3}, {TopOrder::of({1, 0}, 3), 2}});
    const auto r = run_elimination(p, ScoringVector::plurality(3), TieBreak::Lexicographic);
    EXPECT_EQ(r.elimination_order.front(), c3);
    EXPECT_EQ(r.winners, std::vector<CandidateId>{c1});
}

TEST(Elimination, MatchesOracleOnRandomProfiles) {
    sampling::Rng rng(12);
    for (int i = 0; i < 400; ++i) {
        const int m = sampling::uniform(rng, 1, 5);
        const Profile p = random_profile(rng, m);
        const ScoringVector vs[] = {ScoringVector::plurality(m), ScoringVector::veto(m), ScoringVector::borda(m),
                                    sampling::random_vector(rng, m)};
        for (const auto& v : vs) {
            const auto r = run_elimination(p, v, TieBreak::Lexicographic);
            ASSERT_EQ(r.winners.size(), 1u);
            EXPECT_EQ(r.winners[0], elimination_oracle(p, v));
        }
    }
}

TEST(Runoff, LexicographicFirstRound) {
    // b and c tie for second; c (larger index) is dropped, then a wins 2-1.
    const Profile p(3, {{TopOrder::of({0}, 3), 2}, {TopOrder::of({1}, 3), 1}, {TopOrder::of({2}, 3), 1}});
    EXPECT_EQ(runoff_winners(p, TieBreak::Lexicographic), std::vector<CandidateId>{c1});
}

TEST(Runoff, SecondRoundTieBranches) {
    const Profile p(2, {{TopOrder::of({0, 1}, 2), 1}, {TopOrder::of({1, 0}, 2), 1}});
    EXPECT_EQ(runoff_winners(p, TieBreak::Optimistic), (std::vector<CandidateId>{c1, c2}));
    EXPECT_EQ(runoff_winners(p, TieBreak::Pessimistic), std::vector<CandidateId>{});
    EXPECT_EQ(runoff_winners(p, TieBreak::Lexicographic), std::vector<CandidateId>{c1});
}

TEST(Runoff, EqualsPluralityEliminationOnThreeCandidates) {
    sampling::Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        const Profile p = random_profile(rng, 3, 6);
        for (auto tb : {TieBreak::Lexicographic, TieBreak::Optimistic, TieBreak::Pessimistic}) {
            EXPECT_EQ(outcome(p, RunoffRule{}, WinnerModel::NonUnique, tb),
                      outcome(p, EliminationRule{ScoringVector::plurality(3)}, WinnerModel::NonUnique, tb));
        }
    }
}

TEST(Pairwise, SingleTruncatedVote) {
    const auto n = pairwise_matrix(single(3, {0}));
    EXPECT_EQ(n.at(c1, c2), 1);
    EXPECT_EQ(n.at(c1, c3), 1);
    EXPECT_EQ(n.at(c2, c3), 0);
    EXPECT_EQ(n.at(c3, c2), 0);
    EXPECT_EQ(n.at(c2, c1), 0);
}

TEST(Pairwise, CompleteVote) {
    const auto n = pairwise_matrix(single(3, {0, 1, 2}, 2));
    EXPECT_EQ(n.at(c1, c2), 2);
    EXPECT_EQ(n.at(c1, c3), 2);
    EXPECT_EQ(n.at(c2, c3), 2);
    EXPECT_EQ(n.at(c3, c1), 0);
}

TEST(Pairwise, CopelandFixtureCounts) {
    // a=0, b=1, p=2; votes 3:(a,b,p), 1:(b,a,p).
    const Profile p(3, {{TopOrder::of({0, 1, 2}, 3), 3}, {TopOrder::of({1, 0, 2}, 3), 1}});
    const auto n = pairwise_matrix(p);
    EXPECT_EQ(n.at(c1, c2), 3);
    EXPECT_EQ(n.at(c2, c1), 1);
    EXPECT_EQ(n.at(c1, c3), 4);
    EXPECT_EQ(n.at(c2, c3), 4);
    EXPECT_EQ(n.at(c3, c1), 0);
    EXPECT_EQ(n.at(c3, c2), 0);
}

TEST(Pairwise, MatchesOracleAndTotals) {
    sampling::Rng rng(14);
    for (int t = 0; t < 300; ++t) {
        const int m = sampling::uniform(rng, 2, 5);
        const Profile p = random_profile(rng, m);
        const auto n = pairwise_matrix(p);
        for (int i = 0; i < m; ++i) {
            EXPECT_EQ(n.at(CandidateId{i}, CandidateId{i}), 0);
            for (int j = 0; j < m; ++j) {
                if (i == j) continue;
                EXPECT_EQ(n.at(CandidateId{i}, CandidateId{j}), pairwise_oracle(p, i, j));
                Weight covering = 0;
                for (const auto& v : p.votes()) {
                    if (v.ballot.contains(CandidateId{i}) || v.ballot.contains(CandidateId{j})) covering += v.weight;
                }
                EXPECT_EQ(n.at(CandidateId{i}, CandidateId{j}) + n.at(CandidateId{j}, CandidateId{i}), covering);
            }
        }
    }
}

TEST(RuleScores, CopelandHalf) {
    EXPECT_EQ(rule_scores(single(3, {0}), CopelandRule{Rational(1, 2)}), R({2, Rational(1, 2), Rational(1, 2)}));
}

TEST(RuleScores, CopelandZeroSharedTop) {
    const Profile p(4, {{TopOrder::of({1}, 4), 2}, {TopOrder::of({1}, 4), 5}});
    EXPECT_EQ(rule_scores(p, CopelandRule{Rational(0)}), R({0, 3, 0, 0}));
}

TEST(RuleScores, MaximinFixture) {
    // a=0, b=1, p=2; 2:(a,b,p) plus 3:(p).
    const Profile p(3, {{TopOrder::of({0, 1, 2}, 3), 2}, {TopOrder::of({2}, 3), 3}});
    EXPECT_EQ(rule_scores(p, MaximinRule{}), R({2, 0, 3}));
}

TEST(RuleScores, EliminationHasNoScoreMap) {
    EXPECT_THROW(rule_scores(single(3, {0}), EliminationRule{ScoringVector::veto(3)}), UnsupportedRule);
    EXPECT_THROW(rule_scores(single(3, {0}), RunoffRule{}), UnsupportedRule);
}

TEST(RuleSpec, CopelandRange) {
    EXPECT_THROW(CopelandRule{Rational(3, 2)}, ConstraintViolation);
    EXPECT_THROW(CopelandRule{Rational(-1, 2)}, ConstraintViolation);
    EXPECT_NO_THROW(CopelandRule{Rational(1)});
}

TEST(Winners, AllTiedUnderBorda) {
    const Profile p(3, {{TopOrder::of({0, 1, 2}, 3), 1}, {TopOrder::of({1, 2, 0}, 3), 1}, {TopOrder::of({2, 0, 1}, 3), 1}});
    const RuleSpec r = ScoringRule{ScoringVector::borda(3), TruncationScheme::RoundUp};
    EXPECT_EQ(winners(p, r, WinnerModel::NonUnique).size(), 3u);
    EXPECT_TRUE(winners(p, r, WinnerModel::Unique).empty());
}

TEST(Winners, SingleCandidate) {
    const Profile p(1, {{TopOrder::of({0}, 1), 2}});
    const RuleSpec rules[] = {ScoringRule{ScoringVector::plurality(1), TruncationScheme::RoundUp},
                              EliminationRule{ScoringVector::plurality(1)}, RunoffRule{}, CopelandRule{Rational(1, 2)},
                              MaximinRule{}};
    for (const auto& r : rules) {
        for (auto tb : {TieBreak::Lexicographic, TieBreak::Optimistic, TieBreak::Pessimistic}) {
            EXPECT_EQ(winners(p, r, WinnerModel::Unique, tb), std::vector<CandidateId>{c1});
        }
    }
}

TEST(Winners, RoundDownCaseOneFixtureManipulated) {
    // Partition {1,1}: S = 3:(a,b,p), 3:(b,a,p); manipulators 3:(p,a,b), 3:(p,b,a) tie everyone at 12.
    const Profile p(3, {{TopOrder::of({0, 1, 2}, 3), 3},
                        {TopOrder::of({1, 0, 2}, 3), 3},
                        {TopOrder::of({2, 0, 1}, 3), 3},
                        {TopOrder::of({2, 1, 0}, 3), 3}});
    const RuleSpec r = ScoringRule{ScoringVector::borda(3), TruncationScheme::RoundDown};
    EXPECT_EQ(rule_scores(p, r), R({12, 12, 12}));
    EXPECT_EQ(winner_mask(p, r), 7u);
}

TEST(Tally, AgreesWithReferenceRules) {
    sampling::Rng rng(15);
    for (int t = 0; t < 1500; ++t) {
        const int m = sampling::uniform(rng, 1, 4);
        const Profile p = random_profile(rng, m, 6);
        const RuleSpec rule = random_rule(rng, m);
        const detail::Tally tally(rule, m);
        std::vector<std::int64_t> acc(tally.width(), 0);
        for (const auto& v : p.votes()) {
            const auto s = tally.stats(v.ballot);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s[i] * v.weight;
        }
        for (auto model : {WinnerModel::NonUnique, WinnerModel::Unique}) {
            for (auto tb : {TieBreak::Lexicographic, TieBreak::Optimistic, TieBreak::Pessimistic}) {
                EXPECT_EQ(tally.decide(acc, model, tb), outcome(p, rule, model, tb)) << to_string(rule);
            }
        }
        if (tally.has_scores()) {
            // Integer scores must order candidates exactly like the rational ones.
            std::vector<std::int64_t> s(static_cast<std::size_t>(m));
            tally.scores(acc, s);
            const auto ref = rule_scores(p, rule);
            for (int a = 0; a < m; ++a) {
                for (int b = 0; b < m; ++b) {
                    EXPECT_EQ(s[a] < s[b], ref[a] < ref[b]) << to_string(rule);
                }
            }
        }
    }
}

TEST(Tally, AverageSchemeWithHalfIntegers) {
    // Averages such as (3/2 + 1)/2 = 5/4 need a scale beyond the vector's own denominators.
    const ScoringVector v = ScoringVector::of({Rational(3, 2), Rational(3, 2), Rational(1)});
    const RuleSpec rule = ScoringRule{v, TruncationScheme::Average};
    const detail::Tally tally(rule, 3);
    const Profile p(3, {{TopOrder::of({1}, 3), 3}, {TopOrder::of({2}, 3), 4}});
    std::vector<std::int64_t> acc(3, 0);
    for (const auto& vote : p.votes()) {
        const auto s = tally.stats(vote.ballot);
        for (int i = 0; i < 3; ++i) acc[i] += s[i] * vote.weight;
    }
    std::vector<std::int64_t> s(3);
    tally.scores(acc, s);
    const auto ref = rule_scores(p, rule); // 35/4, 19/2, 39/4
    EXPECT_EQ(ref, R({Rational(35, 4), Rational(19, 2), Rational(39, 4)}));
    EXPECT_LT(s[0], s[1]);
    EXPECT_LT(s[1], s[2]);
}

TEST(Properties, CanonicalBallotsKeepWinners) {
    sampling::Rng rng(16);
    for (int t = 0; t < 300; ++t) {
        const int m = sampling::uniform(rng, 2, 4);
        Profile raw(m), canon(m);
        const int n = sampling::uniform(rng, 1, 5);
        for (int i = 0; i < n; ++i) {
            TopOrder b = sampling::random_prefix(rng, m);
            // Build the uncanonical m-1 form when the ballot is complete.
            if (b.is_complete()) b = TopOrder(std::vector<CandidateId>(b.begin(), b.end() - 1), m);
            const Weight w = sampling::uniform(rng, 1, 4);
            raw.add({b, w});
            canon.add({canonicalize_ballot(b), w});
        }
        const RuleSpec rule = random_rule(rng, m);
        EXPECT_EQ(outcome(raw, rule, WinnerModel::NonUnique, TieBreak::Optimistic),
                  outcome(canon, rule, WinnerModel::NonUnique, TieBreak::Optimistic));
        if (!is_elimination_rule(rule)) {
            EXPECT_EQ(rule_scores(raw, rule), rule_scores(canon, rule));
        }
    }
}
