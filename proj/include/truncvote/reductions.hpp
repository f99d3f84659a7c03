#ifndef TRUNCVOTE_REDUCTIONS_HPP
#define TRUNCVOTE_REDUCTIONS_HPP

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "manipulation.hpp"
#include "rational.hpp"
#include "rules.hpp"
#include "uncertainty.hpp"

namespace truncvote {

enum class NumberKind { Partition, FDSS };

/// Multiset k_1..k_t with even sum 2K.
struct NumberInstance {
    std::vector<Weight> values;
    NumberKind kind = NumberKind::Partition;

    Weight sum() const {
        Weight s = 0;
        for (Weight v : values) {
            if (v < 0) throw ConstraintViolation("number instances hold non-negative integers");
            s += v;
        }
        return s;
    }

    Weight half_sum() const {
        const Weight s = sum();
        if (s % 2 != 0) throw OddSum("values sum to " + std::to_string(s));
        return s / 2;
    }

    friend bool operator==(const NumberInstance&, const NumberInstance&) = default;
};

enum class ReductionFamily {
    FdssFromPartition,
    RoundDownCase1,
    RoundDownCase2,
    RoundDownCase3,
    AverageScheme,
    Copeland3,
    EliminateDwcm,
    EvalEliminateVeto,
};

inline constexpr ReductionFamily all_reduction_families[] = {
    ReductionFamily::FdssFromPartition, ReductionFamily::RoundDownCase1, ReductionFamily::RoundDownCase2,
    ReductionFamily::RoundDownCase3,    ReductionFamily::AverageScheme,  ReductionFamily::Copeland3,
    ReductionFamily::EliminateDwcm,     ReductionFamily::EvalEliminateVeto,
};

inline std::string to_string(ReductionFamily f) {
    switch (f) {
    case ReductionFamily::FdssFromPartition: return "fdss";
    case ReductionFamily::RoundDownCase1: return "rounddown1";
    case ReductionFamily::RoundDownCase2: return "rounddown2";
    case ReductionFamily::RoundDownCase3: return "rounddown3";
    case ReductionFamily::AverageScheme: return "average";
    case ReductionFamily::Copeland3: return "copeland";
    case ReductionFamily::EliminateDwcm: return "elimdwcm";
    case ReductionFamily::EvalEliminateVeto: return "evalveto";
    }
    return "?";
}

/// Number problem each family reduces from.
inline NumberKind source_kind(ReductionFamily f) {
    switch (f) {
    case ReductionFamily::RoundDownCase3:
    case ReductionFamily::AverageScheme:
    case ReductionFamily::Copeland3:
        return NumberKind::FDSS;
    default:
        return NumberKind::Partition;
    }
}

namespace detail {

inline void expect_kind(const NumberInstance& n, NumberKind kind) {
    if (n.kind != kind) {
        throw WrongKind(std::string("expected a ") + (kind == NumberKind::Partition ? "Partition" : "FDSS") + " instance");
    }
}

} // namespace detail

/// Some subset sums to K. Subset-sum table over [0, K].
inline bool partition_oracle(const NumberInstance& n) {
    detail::expect_kind(n, NumberKind::Partition);
    const Weight k = n.half_sum();
    std::vector<char> reach(static_cast<std::size_t>(k + 1), 0);
    reach[0] = 1;
    for (Weight v : n.values) {
        for (Weight s = k; s >= v; --s) {
            if (reach[static_cast<std::size_t>(s - v)]) reach[static_cast<std::size_t>(s)] = 1;
        }
    }
    return reach[static_cast<std::size_t>(k)] != 0;
}

/// Two disjoint subsets whose sums differ by exactly K. Each value adds +v, -v or 0.
inline bool fdss_oracle(const NumberInstance& n) {
    detail::expect_kind(n, NumberKind::FDSS);
    const Weight k = n.half_sum();
    const Weight span = 2 * k;
    std::vector<char> reach(static_cast<std::size_t>(2 * span + 1), 0);
    reach[static_cast<std::size_t>(span)] = 1;
    for (Weight v : n.values) {
        std::vector<char> next = reach;
        for (Weight d = -span; d <= span; ++d) {
            if (!reach[static_cast<std::size_t>(d + span)]) continue;
            if (d + v <= span) next[static_cast<std::size_t>(d + v + span)] = 1;
            if (d - v >= -span) next[static_cast<std::size_t>(d - v + span)] = 1;
        }
        reach = std::move(next);
    }
    return reach[static_cast<std::size_t>(k + span)] != 0;
}

/*
 * Partition -> FDSS: l_i = k_i + 2^(n+i) and l'_i = 2^(n+i) with
 * n = ceil(log2 2K). The powers of two force every witness to pick exactly
 * one of l_i, l'_i per index.
 */
inline NumberInstance fdss_from_partition(const NumberInstance& p) {
    detail::expect_kind(p, NumberKind::Partition);
    const Weight k = p.half_sum();
    if (k < 1) throw ConstraintViolation("the construction needs K >= 1");
    int n = 0;
    while ((Weight{1} << n) < 2 * k) ++n;
    const auto t = static_cast<int>(p.values.size());
    if (n + t > 61) throw NonIntegerWeights("powers of two exceed 64-bit range");
    NumberInstance out{{}, NumberKind::FDSS};
    for (int i = 1; i <= t; ++i) out.values.push_back(p.values[static_cast<std::size_t>(i - 1)] + (Weight{1} << (n + i)));
    for (int i = 1; i <= t; ++i) out.values.push_back(Weight{1} << (n + i));
    return out;
}

/// A generated instance of any family.
using GeneratedInstance = std::variant<NumberInstance, ManipulationInstance, ProbabilisticInstance>;

namespace detail {

inline const std::vector<std::string>& abp_names() {
    static const std::vector<std::string> names{"a", "b", "p"};
    return names;
}

inline const ScoringVector& vector_of(const RuleSpec& params) {
    if (const auto* r = std::get_if<ScoringRule>(&params)) return r->vector;
    if (const auto* r = std::get_if<EliminationRule>(&params)) return r->vector;
    throw CaseMismatch("family needs a scoring vector, got " + to_string(params));
}

inline Weight checked_mul(Weight a, Weight b) {
    const __int128 r = static_cast<__int128>(a) * b;
    if (r > std::numeric_limits<Weight>::max()) throw NonIntegerWeights("cleared weight overflows 64 bits");
    return static_cast<Weight>(r);
}

/// Converts rational weights to integers by one common factor.
inline std::vector<Weight> clear_weights(const std::vector<Rational>& ws) {
    Weight d = 1;
    for (const auto& w : ws) {
        const __int128 l = static_cast<__int128>(d) / std::gcd(d, w.den()) * w.den();
        if (l > std::numeric_limits<Weight>::max()) throw NonIntegerWeights("common denominator overflows");
        d = static_cast<Weight>(l);
    }
    std::vector<Weight> out;
    for (const auto& w : ws) out.push_back(checked_mul(w.num(), d / w.den()));
    return out;
}

struct Block {
    std::vector<int> ballot;
    Rational weight;
};

/// Three-candidate instance over {a, b, p} with S and T given as rational weights.
inline ManipulationInstance build_abp(const std::vector<Block>& s, const std::vector<Rational>& t, RuleSpec rule) {
    std::vector<Rational> all;
    for (const auto& b : s) all.push_back(b.weight);
    all.insert(all.end(), t.begin(), t.end());
    const auto w = clear_weights(all);
    ManipulationInstance inst;
    inst.m = 3;
    inst.names = abp_names();
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<CandidateId> r;
        for (int c : s[i].ballot) r.push_back(CandidateId{c});
        inst.fixed.push_back(WeightedVote{canonicalize_ballot(TopOrder(std::move(r), 3)), w[i]});
    }
    inst.manipulator_weights.assign(w.begin() + static_cast<std::ptrdiff_t>(s.size()), w.end());
    inst.goal = Constructive{CandidateId{2}};
    inst.rule = std::move(rule);
    return inst;
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw CaseMismatch(what);
}

inline void require_three(const ScoringVector& v) {
    require(v.size() == 3, "the constructions use three candidates");
}

constexpr int A = 0, B = 1, P = 2;

} // namespace detail

/*
 * Eliminate(X) destructive instance from a three-candidate lowest-score
 * instance on (a, b, h): the added block ties all three candidates and is
 * heavy enough that h survives unless it falls in the first round.
 */
inline ManipulationInstance gen_eliminate_dwcm(const ManipulationInstance& anti, const ScoringVector& x) {
    using namespace detail;
    require(anti.m == 3, "source instance must have three candidates");
    require_three(x);
    require(x[0] > x[1] && x[1] >= x[2] && x[2] == 0, "vector must satisfy alpha_1 > alpha_2 >= alpha_3 = 0");
    const auto* g = std::get_if<AntiLowest>(&anti.goal);
    if (!g) throw CaseMismatch("source instance must have a lowest-score goal");
    const CandidateId h = g->d;
    CandidateId a{-1}, b{-1};
    for (int c = 0; c < 3; ++c) {
        if (c == h.index) continue;
        (a.index < 0 ? a : b) = CandidateId{c};
    }
    const Weight k = Profile(3, anti.fixed).total_weight() + anti.manipulator_total() + 1;
    ManipulationInstance out = anti;
    out.goal = Destructive{h};
    out.rule = EliminationRule{x};
    out.model = WinnerModel::NonUnique;
    out.tiebreak = TieBreak::Pessimistic;
    const auto add = [&](Weight w, std::vector<CandidateId> r) {
        out.fixed.push_back(WeightedVote{canonicalize_ballot(TopOrder(std::move(r), 3)), checked_mul(w, k)});
    };
    add(1, {a, h, b});
    add(2, {h, a, b});
    add(1, {b, h, a});
    add(2, {h, b, a});
    add(3, {a});
    add(3, {b});
    return out;
}

/*
 * Lowest-score instance over (a, b, h) encoding a Partition instance under a
 * vector with alpha_1 - alpha_2 = alpha_2 - alpha_3 > 0. Fixed votes 3K:(h),
 * 1:(a), 1:(b); manipulator weights 2k_i. With x the weight voting (a, b, h),
 * h is strictly lowest iff x = 2K.
 */
inline ManipulationInstance anti_from_partition(const NumberInstance& numbers, const ScoringVector& x) {
    using namespace detail;
    expect_kind(numbers, NumberKind::Partition);
    require_three(x);
    require(x[0] - x[1] == x[1] - x[2] && x[0] > x[1], "embedding needs alpha_1 - alpha_2 = alpha_2 - alpha_3 > 0");
    const Weight k = numbers.half_sum();
    ManipulationInstance inst;
    inst.m = 3;
    inst.names = {"a", "b", "h"};
    const CandidateId a{0}, b{1}, h{2};
    inst.fixed.push_back(WeightedVote{TopOrder({h}, 3), checked_mul(3, k)});
    inst.fixed.push_back(WeightedVote{TopOrder({a}, 3), 1});
    inst.fixed.push_back(WeightedVote{TopOrder({b}, 3), 1});
    for (Weight v : numbers.values) inst.manipulator_weights.push_back(checked_mul(2, v));
    inst.goal = AntiLowest{h, true};
    inst.rule = ScoringRule{x, TruncationScheme::RoundUp};
    return inst;
}

/// Weighted-evaluation instance: 1:(p,a,b) fixed, each k_i votes (a,p,b) or (b,p,a) with probability 1/2.
inline ProbabilisticInstance gen_eval_eliminate_veto(const NumberInstance& numbers) {
    detail::expect_kind(numbers, NumberKind::Partition);
    numbers.half_sum();
    using detail::A, detail::B, detail::P;
    ProbabilisticInstance out{3, {}, detail::abp_names()};
    out.voters.push_back({1, {{TopOrder::of({P, A, B}, 3), Rational(1)}}});
    for (Weight v : numbers.values) {
        out.voters.push_back({v, {{TopOrder::of({A, P, B}, 3), Rational(1, 2)}, {TopOrder::of({B, P, A}, 3), Rational(1, 2)}}});
    }
    return out;
}

/// Default rule parameters used by sweeps and the command line.
inline RuleSpec default_params(ReductionFamily f) {
    switch (f) {
    case ReductionFamily::RoundDownCase2:
        return ScoringRule{ScoringVector::of({4, 3, 0}), TruncationScheme::RoundDown};
    case ReductionFamily::RoundDownCase3:
        return ScoringRule{ScoringVector::of({3, 2, 0}), TruncationScheme::RoundDown};
    case ReductionFamily::AverageScheme:
        return ScoringRule{ScoringVector::borda(3), TruncationScheme::Average};
    case ReductionFamily::Copeland3:
        return CopelandRule{Rational(1, 2)};
    case ReductionFamily::EliminateDwcm:
        return EliminationRule{ScoringVector::borda(3)};
    case ReductionFamily::EvalEliminateVeto:
        return EliminationRule{ScoringVector::veto(3)};
    default:
        return ScoringRule{ScoringVector::borda(3), TruncationScheme::RoundDown};
    }
}

/*
 * Builds the instance of `family` from `numbers`. Rational proof weights
 * are scaled by one common factor, which leaves every winner set unchanged.
 */
inline GeneratedInstance gen_instance(ReductionFamily family, const NumberInstance& numbers, const RuleSpec& params) {
    using namespace detail;
    detail::expect_kind(numbers, source_kind(family));
    switch (family) {
    case ReductionFamily::FdssFromPartition:
        return fdss_from_partition(numbers);
    case ReductionFamily::EvalEliminateVeto:
        return gen_eval_eliminate_veto(numbers);
    case ReductionFamily::EliminateDwcm: {
        const ScoringVector& x = vector_of(params);
        return gen_eliminate_dwcm(anti_from_partition(numbers, x), x);
    }
    case ReductionFamily::Copeland3: {
        const auto* c = std::get_if<CopelandRule>(&params);
        if (!c) throw CaseMismatch("family needs a Copeland rule, got " + to_string(params));
        require(c->alpha < 1, "Copeland parameter must lie in [0,1)");
        const Rational k(numbers.half_sum());
        std::vector<Rational> t;
        for (Weight v : numbers.values) t.emplace_back(2 * v);
        return build_abp({{{A, B, P}, 3 * k}, {{B, A, P}, k}}, t, params);
    }
    default:
        break;
    }

    const ScoringVector& x = vector_of(params);
    require_three(x);
    const Rational a1 = x[0], a2 = x[1], a3 = x[2];
    const Rational k(numbers.half_sum());
    std::vector<Rational> t;
    const auto t_weights = [&](const Rational& f) {
        for (Weight v : numbers.values) t.push_back(f * Rational(v));
    };
    const Rational three_halves(3, 2);
    switch (family) {
    case ReductionFamily::RoundDownCase1:
        require(a1 > a2 && a2 > a3 && a3 == 0, "requires alpha_1 > alpha_2 > alpha_3 = 0");
        require(a1 > three_halves * a2, "case 1 requires alpha_1 > 3/2 alpha_2");
        t_weights(a1 + a2);
        return build_abp({{{A, B, P}, (2 * a1 - a2) * k}, {{B, A, P}, (2 * a1 - a2) * k}}, t,
                         ScoringRule{x, TruncationScheme::RoundDown});
    case ReductionFamily::RoundDownCase2:
    case ReductionFamily::RoundDownCase3: {
        require(a1 > a2 && a2 > a3 && a3 == 0, "requires alpha_1 > alpha_2 > alpha_3 = 0");
        if (family == ReductionFamily::RoundDownCase2) require(a1 < three_halves * a2, "case 2 requires alpha_1 < 3/2 alpha_2");
        else require(a1 == three_halves * a2, "case 3 requires alpha_1 = 3/2 alpha_2");
        t_weights(Rational(6));
        return build_abp({{{B, A, P}, 15 * k},
                          {{B, P, A}, 5 * k},
                          {{A, P, B}, 11 * k},
                          {{A, B, P}, 9 * k},
                          {{P, B, A}, 7 * k},
                          {{P, A, B}, 7 * k}},
                         t, ScoringRule{x, TruncationScheme::RoundDown});
    }
    case ReductionFamily::AverageScheme:
        require(a1 >= a2 && a2 > a3 && a3 == 0, "requires alpha_1 >= alpha_2 > alpha_3 = 0");
        t_weights(2 * (a1 + a2));
        return build_abp({{{B, A, P}, (4 * a1 + a2) * k}, {{A, B, P}, (2 * a1 - a2) * k}, {{A, P, B}, 2 * (a1 + a2) * k}},
                         t, ScoringRule{x, TruncationScheme::Average});
    default:
        break;
    }
    throw CaseMismatch("unhandled family " + to_string(family));
}

struct ReductionReport {
    bool oracle_answer = false;
    bool solver_answer = false;
    bool agree = false;
};

/*
 * Checks one instance of a family's biconditional: the number oracle (or,
 * for the eliminate construction, exhaustive search on the source instance)
 * against exhaustive search or exact probability on the generated instance.
 */
inline ReductionReport verify_reduction(ReductionFamily family, const NumberInstance& numbers, const RuleSpec& params,
                                        const BruteOptions& opts = {}) {
    ReductionReport r;
    const GeneratedInstance g = gen_instance(family, numbers, params);
    switch (family) {
    case ReductionFamily::FdssFromPartition:
        r.oracle_answer = partition_oracle(numbers);
        r.solver_answer = fdss_oracle(std::get<NumberInstance>(g));
        break;
    case ReductionFamily::EvalEliminateVeto:
        r.oracle_answer = partition_oracle(numbers);
        r.solver_answer = weighted_eval_exact(std::get<ProbabilisticInstance>(g), EliminationRule{ScoringVector::veto(3)},
                                              CandidateId{detail::P}) > 0;
        break;
    case ReductionFamily::EliminateDwcm:
        r.oracle_answer = solve_brute(anti_from_partition(numbers, detail::vector_of(params)), opts).feasible;
        r.solver_answer = solve_brute(std::get<ManipulationInstance>(g), opts).feasible;
        break;
    default:
        r.oracle_answer = numbers.kind == NumberKind::Partition ? partition_oracle(numbers) : fdss_oracle(numbers);
        r.solver_answer = solve_brute(std::get<ManipulationInstance>(g), opts).feasible;
        break;
    }
    r.agree = r.oracle_answer == r.solver_answer;
    return r;
}

/// Every multiset of at most `max_t` values in [0, max_value] with even sum, in lexicographic order.
inline std::vector<NumberInstance> number_grid(int max_t, Weight max_value, NumberKind kind) {
    std::vector<NumberInstance> out;
    std::vector<Weight> cur;
    const auto rec = [&](auto& self, Weight lo, Weight sum) -> void {
        if (sum % 2 == 0) out.push_back({cur, kind});
        if (static_cast<int>(cur.size()) == max_t) return;
        for (Weight v = lo; v <= max_value; ++v) {
            cur.push_back(v);
            self(self, v, sum + v);
            cur.pop_back();
        }
    };
    rec(rec, 0, 0);
    return out;
}

} // namespace truncvote

#endif // TRUNCVOTE_REDUCTIONS_HPP
