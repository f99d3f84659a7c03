#include <gtest/gtest.h>

#include <vector>

#include "truncvote/reductions.hpp"

using namespace truncvote;

namespace {

NumberInstance partition(std::vector<Weight> v) { return {std::move(v), NumberKind::Partition}; }
NumberInstance fdss(std::vector<Weight> v) { return {std::move(v), NumberKind::FDSS}; }

// Every subset.
bool partition_by_subsets(const std::vector<Weight>& v) {
    Weight total = 0;
    for (Weight x : v) total += x;
    const std::size_t t = v.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t); ++mask) {
        Weight s = 0;
        for (std::size_t i = 0; i < t; ++i) {
            if (mask >> i & 1) s += v[i];
        }
        if (2 * s == total) return true;
    }
    return false;
}

// Every assignment of each value to S1, S2 or neither.
bool fdss_by_assignments(const std::vector<Weight>& v) {
    Weight total = 0;
    for (Weight x : v) total += x;
    const std::size_t t = v.size();
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < t; ++i) count *= 3;
    for (std::uint64_t code = 0; code < count; ++code) {
        Weight diff = 0;
        std::uint64_t c = code;
        for (std::size_t i = 0; i < t; ++i, c /= 3) {
            if (c % 3 == 1) diff += v[i];
            if (c % 3 == 2) diff -= v[i];
        }
        if (2 * diff == total) return true;
    }
    return false;
}

std::vector<int> as_ints(const TopOrder& o) {
    std::vector<int> r;
    for (CandidateId c : o) r.push_back(c.index);
    return r;
}

} // namespace

TEST(NumberOracles, PartitionExamples) {
    EXPECT_TRUE(partition_oracle(partition({})));
    EXPECT_TRUE(partition_oracle(partition({1, 1})));
    EXPECT_FALSE(partition_oracle(partition({1, 3})));
    EXPECT_TRUE(partition_oracle(partition({3, 1, 1, 2, 2, 1})));
}

TEST(NumberOracles, FdssExamples) {
    EXPECT_TRUE(fdss_oracle(fdss({})));
    EXPECT_TRUE(fdss_oracle(fdss({1, 1})));
    EXPECT_TRUE(fdss_oracle(fdss({2, 2})));
    EXPECT_TRUE(fdss_oracle(fdss({1, 3})));
    EXPECT_FALSE(fdss_oracle(fdss({1, 5})));
}

TEST(NumberOracles, Preconditions) {
    EXPECT_THROW(partition_oracle(partition({1, 2})), OddSum);
    EXPECT_THROW(partition_oracle(fdss({1, 1})), WrongKind);
    EXPECT_THROW(fdss_oracle(partition({1, 1})), WrongKind);
    EXPECT_THROW(partition_oracle(partition({-2})), ConstraintViolation);
}

TEST(NumberOracles, MatchEnumerationOnGrid) {
    for (const auto& n : number_grid(6, 7, NumberKind::Partition)) {
        ASSERT_EQ(partition_oracle(n), partition_by_subsets(n.values));
    }
    for (const auto& n : number_grid(6, 7, NumberKind::FDSS)) {
        ASSERT_EQ(fdss_oracle(n), fdss_by_assignments(n.values));
    }
}

TEST(NumberGrid, EvenSumMultisets) {
    const auto g = number_grid(2, 2, NumberKind::Partition);
    // {}, {0}, {0,0}, {0,2}, {1,1}, {2}, {2,2}
    EXPECT_EQ(g.size(), 7u);
    for (const auto& n : g) {
        EXPECT_EQ(n.sum() % 2, 0);
        EXPECT_TRUE(std::is_sorted(n.values.begin(), n.values.end()));
    }
}

TEST(FdssFromPartition, GeneratedValues) {
    EXPECT_EQ(fdss_from_partition(partition({1, 1})).values, (std::vector<Weight>{5, 9, 4, 8}));
    EXPECT_EQ(fdss_from_partition(partition({2, 2})).values, (std::vector<Weight>{10, 18, 8, 16}));
    EXPECT_EQ(fdss_from_partition(partition({1, 3})).values, (std::vector<Weight>{9, 19, 8, 16}));
    EXPECT_EQ(fdss_from_partition(partition({1, 1})).kind, NumberKind::FDSS);
    EXPECT_THROW(fdss_from_partition(partition({})), ConstraintViolation);
    EXPECT_THROW(fdss_from_partition(partition({0, 0})), ConstraintViolation);
}

TEST(FdssFromPartition, HalfSumCarriesThePowers) {
    const auto out = fdss_from_partition(partition({1, 1}));
    EXPECT_EQ(out.half_sum(), 1 + 4 + 8);
    EXPECT_TRUE(fdss_oracle(out));
}

TEST(FdssFromPartition, OneThreeAdmitsAFixedDifference) {
    // 19 + 16 - 9 = 26 uses both numbers of index 2, so the powers do not pin one per index.
    const auto out = fdss_from_partition(partition({1, 3}));
    EXPECT_EQ(out.half_sum(), 26);
    EXPECT_TRUE(fdss_by_assignments(out.values));
    EXPECT_FALSE(partition_oracle(partition({1, 3})));
}

TEST(Generators, RoundDownCaseOneFixture) {
    const auto g = gen_instance(ReductionFamily::RoundDownCase1, partition({1, 1}), default_params(ReductionFamily::RoundDownCase1));
    const auto& inst = std::get<ManipulationInstance>(g);
    ASSERT_EQ(inst.fixed.size(), 2u);
    EXPECT_EQ(as_ints(inst.fixed[0].ballot), (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(inst.fixed[0].weight, 3);
    EXPECT_EQ(as_ints(inst.fixed[1].ballot), (std::vector<int>{1, 0, 2}));
    EXPECT_EQ(inst.fixed[1].weight, 3);
    EXPECT_EQ(inst.manipulator_weights, (std::vector<Weight>{3, 3}));
    EXPECT_EQ(inst.names, (std::vector<std::string>{"a", "b", "p"}));
    EXPECT_TRUE(solve_brute(inst).feasible);
}

TEST(Generators, RoundDownCaseOneNoPartition) {
    const auto g = gen_instance(ReductionFamily::RoundDownCase1, partition({1, 3}), default_params(ReductionFamily::RoundDownCase1));
    EXPECT_FALSE(solve_brute(std::get<ManipulationInstance>(g)).feasible);
}

TEST(Generators, CopelandFixture) {
    const auto g = gen_instance(ReductionFamily::Copeland3, fdss({1, 1}), CopelandRule{Rational(1, 2)});
    const auto& inst = std::get<ManipulationInstance>(g);
    ASSERT_EQ(inst.fixed.size(), 2u);
    EXPECT_EQ(inst.fixed[0].weight, 3);
    EXPECT_EQ(inst.fixed[1].weight, 1);
    EXPECT_EQ(as_ints(inst.fixed[1].ballot), (std::vector<int>{1, 0, 2}));
    EXPECT_EQ(inst.manipulator_weights, (std::vector<Weight>{2, 2}));
    EXPECT_TRUE(solve_brute(inst).feasible);
}

TEST(Generators, RationalVectorClearsToIntegers) {
    // alpha = (5/2, 1, 0): fixed weight (2*5/2 - 1)K = 4K and manipulators (7/2)k_i.
    const RuleSpec rule = ScoringRule{ScoringVector::of({Rational(5, 2), 1, 0}), TruncationScheme::RoundDown};
    const auto g = gen_instance(ReductionFamily::RoundDownCase1, partition({1, 1}), rule);
    const auto& inst = std::get<ManipulationInstance>(g);
    EXPECT_EQ(inst.fixed[0].weight, 8);
    EXPECT_EQ(inst.manipulator_weights, (std::vector<Weight>{7, 7}));
    EXPECT_TRUE(verify_reduction(ReductionFamily::RoundDownCase1, partition({1, 1}), rule).agree);
    EXPECT_TRUE(verify_reduction(ReductionFamily::RoundDownCase1, partition({1, 3}), rule).agree);
}

TEST(Generators, EvalEliminateVetoStructure) {
    const auto g = gen_instance(ReductionFamily::EvalEliminateVeto, partition({1, 1}), default_params(ReductionFamily::EvalEliminateVeto));
    const auto& inst = std::get<ProbabilisticInstance>(g);
    ASSERT_EQ(inst.voters.size(), 3u);
    EXPECT_EQ(as_ints(inst.voters[0].support[0].ballot), (std::vector<int>{2, 0, 1}));
    EXPECT_EQ(inst.voters[1].support.size(), 2u);
    EXPECT_EQ(inst.voters[1].support[0].prob, Rational(1, 2));
    const RuleSpec rule = EliminationRule{ScoringVector::veto(3)};
    EXPECT_EQ(weighted_eval_exact(inst, rule, CandidateId{2}), Rational(1, 2));
    const auto none = gen_eval_eliminate_veto(partition({1, 3}));
    EXPECT_EQ(weighted_eval_exact(none, rule, CandidateId{2}), Rational(0));
}

TEST(Generators, ParameterChecks) {
    const auto p11 = partition({1, 1});
    EXPECT_THROW(gen_instance(ReductionFamily::RoundDownCase1, p11, default_params(ReductionFamily::RoundDownCase2)), CaseMismatch);
    EXPECT_THROW(gen_instance(ReductionFamily::RoundDownCase2, p11, default_params(ReductionFamily::RoundDownCase1)), CaseMismatch);
    EXPECT_THROW(gen_instance(ReductionFamily::RoundDownCase3, fdss({1, 1}), default_params(ReductionFamily::RoundDownCase2)),
                 CaseMismatch);
    EXPECT_THROW(gen_instance(ReductionFamily::RoundDownCase1, p11,
                              ScoringRule{ScoringVector::borda(4), TruncationScheme::RoundDown}),
                 CaseMismatch);
    EXPECT_THROW(gen_instance(ReductionFamily::Copeland3, fdss({1, 1}), CopelandRule{Rational(1)}), CaseMismatch);
    EXPECT_THROW(gen_instance(ReductionFamily::Copeland3, fdss({1, 1}), MaximinRule{}), CaseMismatch);
    EXPECT_THROW(gen_instance(ReductionFamily::AverageScheme, p11, default_params(ReductionFamily::AverageScheme)), WrongKind);
    EXPECT_THROW(gen_instance(ReductionFamily::EliminateDwcm, p11, EliminationRule{ScoringVector::of({3, 1, 0})}), CaseMismatch);
    EXPECT_THROW(gen_instance(ReductionFamily::RoundDownCase1, partition({1, 2}), default_params(ReductionFamily::RoundDownCase1)),
                 OddSum);
}

TEST(Generators, LowestScoreEmbedding) {
    const ScoringVector borda = ScoringVector::borda(3);
    const auto inst = anti_from_partition(partition({1, 1}), borda);
    EXPECT_EQ(inst.fixed[0].weight, 3);
    EXPECT_EQ(inst.manipulator_weights, (std::vector<Weight>{2, 2}));
    for (const auto& n : number_grid(4, 5, NumberKind::Partition)) {
        ASSERT_EQ(solve_brute(anti_from_partition(n, borda)).feasible, partition_oracle(n)) << n.values.size();
    }
}

TEST(Verify, Examples) {
    const auto r2 = verify_reduction(ReductionFamily::RoundDownCase2, partition({1, 3}), default_params(ReductionFamily::RoundDownCase2));
    EXPECT_FALSE(r2.oracle_answer);
    EXPECT_FALSE(r2.solver_answer);
    EXPECT_TRUE(r2.agree);
    const auto r3 = verify_reduction(ReductionFamily::RoundDownCase3, fdss({1, 1}), default_params(ReductionFamily::RoundDownCase3));
    EXPECT_TRUE(r3.oracle_answer);
    EXPECT_TRUE(r3.solver_answer);
    const auto av = verify_reduction(ReductionFamily::AverageScheme, fdss({1, 3}), default_params(ReductionFamily::AverageScheme));
    EXPECT_TRUE(av.oracle_answer);
    EXPECT_TRUE(av.agree);
}

TEST(Verify, SmallGridAgreesForEveryManipulationFamily) {
    const ReductionFamily families[] = {ReductionFamily::RoundDownCase1, ReductionFamily::RoundDownCase2,
                                        ReductionFamily::RoundDownCase3, ReductionFamily::AverageScheme,
                                        ReductionFamily::Copeland3,      ReductionFamily::EliminateDwcm,
                                        ReductionFamily::EvalEliminateVeto};
    for (auto f : families) {
        for (const auto& n : number_grid(3, 4, source_kind(f))) {
            EXPECT_TRUE(verify_reduction(f, n, default_params(f)).agree) << to_string(f);
        }
    }
}

TEST(Verify, CopelandZeroAgrees) {
    for (const auto& n : number_grid(3, 4, NumberKind::FDSS)) {
        EXPECT_TRUE(verify_reduction(ReductionFamily::Copeland3, n, CopelandRule{Rational(0)}).agree);
    }
}
