#ifndef TRUNCVOTE_CLASSIFY_HPP
#define TRUNCVOTE_CLASSIFY_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "manipulation.hpp"
#include "reductions.hpp"
#include "rules.hpp"
#include "sampling.hpp"

/*
 * Empirical complexity table. A polynomial entry is supported by agreement
 * of the fast path with exhaustive search on random instances plus the fast
 * path's running time on a large instance. A hardness entry is supported by
 * a reduction family whose generated instances all agree with their number
 * oracle and which produces both yes and no instances. Entries whose hardness
 * comes from outside constructions are reported as cited.
 */

namespace truncvote {

enum class Evidence { Polynomial, Hard, Cited };

inline std::string to_string(Evidence e) {
    switch (e) {
    case Evidence::Polynomial: return "P";
    case Evidence::Hard: return "NP-c";
    case Evidence::Cited: return "NP-c (cited)";
    }
    return "?";
}

struct CellReport {
    Evidence expected = Evidence::Polynomial;
    std::string method;
    std::size_t checked = 0;
    std::size_t agreed = 0;
    std::size_t yes_instances = 0; ///< hardness families only
    double large_seconds = 0;      ///< polynomial entries only
    bool supported = false;
};

struct ClassifyRow {
    std::string rule;
    CellReport cwcm;
    CellReport dwcm;
};

struct ClassifyOptions {
    std::uint64_t seed = 2024;
    int instances = 200;        ///< random instances per polynomial entry
    int grid_max_t = 4;         ///< number grid for hardness families
    Weight grid_max_value = 6;
    double time_limit = 1.0;    ///< seconds allowed for one large fast-path call
};

struct ClassifyReport {
    std::vector<ClassifyRow> rows;

    bool all_supported() const {
        for (const auto& r : rows) {
            for (const CellReport* c : {&r.cwcm, &r.dwcm}) {
                if (c->expected != Evidence::Cited && !c->supported) return false;
            }
        }
        return true;
    }
};

namespace detail {

using InstanceMaker = std::function<ManipulationInstance(sampling::Rng&)>;
using Solver = std::function<ManipulationOutcome(const ManipulationInstance&)>;

inline ManipulationInstance large_instance(sampling::Rng& rng, int m, int fixed, int manipulators) {
    ManipulationInstance inst;
    inst.m = m;
    for (int i = 0; i < fixed; ++i) {
        inst.fixed.push_back({sampling::random_prefix(rng, m), static_cast<Weight>(sampling::uniform(rng, 1, 20))});
    }
    for (int i = 0; i < manipulators; ++i) inst.manipulator_weights.push_back(sampling::uniform(rng, 1, 20));
    return inst;
}

inline CellReport polynomial_cell(const std::string& method, const ClassifyOptions& opts, sampling::Rng& rng,
                                  const InstanceMaker& small, const InstanceMaker& large, const Solver& fast) {
    CellReport c;
    c.expected = Evidence::Polynomial;
    c.method = method;
    for (int i = 0; i < opts.instances; ++i) {
        const ManipulationInstance inst = small(rng);
        const ManipulationOutcome f = fast(inst);
        const bool agree = f.feasible == solve_brute(inst).feasible && (!f.feasible || witness_valid(inst, *f.witness));
        ++c.checked;
        if (agree) ++c.agreed;
    }
    const ManipulationInstance big = large(rng);
    const auto t0 = std::chrono::steady_clock::now();
    const ManipulationOutcome f = fast(big);
    c.large_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (f.feasible && !witness_valid(big, *f.witness)) c.agreed = 0;
    c.supported = c.agreed == c.checked && c.large_seconds < opts.time_limit;
    return c;
}

inline CellReport hard_cell(const std::string& method, const std::vector<ReductionFamily>& families,
                            const std::vector<RuleSpec>& params, const ClassifyOptions& opts) {
    CellReport c;
    c.expected = Evidence::Hard;
    c.method = method;
    for (std::size_t i = 0; i < families.size(); ++i) {
        for (const auto& n : number_grid(opts.grid_max_t, opts.grid_max_value, source_kind(families[i]))) {
            const ReductionReport r = verify_reduction(families[i], n, params[i]);
            ++c.checked;
            if (r.agree) ++c.agreed;
            if (r.solver_answer) ++c.yes_instances;
        }
    }
    c.supported = c.checked > 0 && c.agreed == c.checked && c.yes_instances > 0 && c.yes_instances < c.checked;
    return c;
}

inline CellReport cited_cell(const std::string& method) {
    CellReport c;
    c.expected = Evidence::Cited;
    c.method = method;
    return c;
}

/*
 * Destructive runoff from random three-candidate lowest-score instances under
 * plurality: the eliminate(plurality) construction with the rule replaced by
 * runoff, which coincides with it on three candidates.
 */
inline CellReport runoff_dwcm_cell(const ClassifyOptions& opts, sampling::Rng& rng) {
    CellReport c;
    c.expected = Evidence::Hard;
    c.method = "lowest-score plurality instances -> destructive runoff";
    const ScoringVector x = ScoringVector::plurality(3);
    for (int i = 0; i < opts.instances; ++i) {
        ManipulationInstance anti = sampling::random_instance(rng, {}, 3);
        anti.goal = AntiLowest{CandidateId{sampling::uniform(rng, 0, 2)}, true};
        anti.rule = ScoringRule{x, TruncationScheme::RoundUp};
        ManipulationInstance d = gen_eliminate_dwcm(anti, x);
        d.rule = RunoffRule{};
        const bool source = solve_brute(anti).feasible;
        const bool target = solve_brute(d).feasible;
        ++c.checked;
        if (source == target) ++c.agreed;
        if (target) ++c.yes_instances;
    }
    c.supported = c.agreed == c.checked && c.yes_instances > 0 && c.yes_instances < c.checked;
    return c;
}

/// Needs m >= 3; on two candidates every vector is plurality-like.
inline ScoringVector middle_vector(sampling::Rng& rng, int m) {
    while (true) {
        ScoringVector v = sampling::random_vector(rng, m);
        if (!v.plurality_like() && !v.veto_like()) return v;
    }
}

inline ScoringVector non_plurality_vector(sampling::Rng& rng, int m) {
    while (true) {
        ScoringVector v = sampling::random_vector(rng, m);
        if (!v.plurality_like()) return v;
    }
}

} // namespace detail

/// Runs every table entry; deterministic for a fixed seed.
inline ClassifyReport classify(const ClassifyOptions& opts = {}) {
    using namespace detail;
    using sampling::Rng;
    Rng rng(opts.seed);
    ClassifyReport report;

    using VectorMaker = std::function<ScoringVector(Rng&, int)>;
    const auto scoring = [&](TruncationScheme s, VectorMaker vec, Goal (*goal)(Rng&, int), int min_m) {
        return [=](Rng& r) {
            sampling::InstanceShape shape;
            shape.min_m = min_m;
            ManipulationInstance inst = sampling::random_instance(r, shape);
            inst.rule = ScoringRule{vec(r, inst.m), s};
            inst.goal = goal(r, inst.m);
            return inst;
        };
    };
    const auto scoring_large = [&](TruncationScheme s, VectorMaker vec, Goal (*goal)(Rng&, int), int m) {
        return [=](Rng& r) {
            ManipulationInstance inst = large_instance(r, m, 400, 200);
            inst.rule = ScoringRule{vec(r, m), s};
            inst.goal = goal(r, m);
            return inst;
        };
    };
    Goal (*cwcm_goal)(Rng&, int) = [](Rng& r, int m) -> Goal { return Constructive{CandidateId{sampling::uniform(r, 0, m - 1)}}; };
    Goal (*dwcm_goal)(Rng&, int) = [](Rng& r, int m) -> Goal { return Destructive{CandidateId{sampling::uniform(r, 0, m - 1)}}; };
    const VectorMaker any = [](Rng& r, int m) { return sampling::random_vector(r, m); };
    const VectorMaker plurality = [](Rng&, int m) { return ScoringVector::plurality(m); };
    const VectorMaker veto = [](Rng&, int m) { return ScoringVector::veto(m); };
    const VectorMaker middle = [](Rng& r, int m) { return middle_vector(r, m); };
    const VectorMaker non_plurality = [](Rng& r, int m) { return non_plurality_vector(r, m); };
    const Solver cwcm = [](const ManipulationInstance& i) { return cwcm_fast(i); };
    const Solver dwcm = [](const ManipulationInstance& i) { return dwcm_fast(i); };
    constexpr int big_m = 8;

    const auto scoring_row = [&](const std::string& name, TruncationScheme s, const VectorMaker& cw_vec,
                                 const VectorMaker& dw_vec, int min_m, std::optional<CellReport> hard) {
        ClassifyRow row{name, {}, {}};
        row.cwcm = hard ? *hard
                        : polynomial_cell("cwcm_fast vs exhaustive", opts, rng, scoring(s, cw_vec, cwcm_goal, min_m),
                                          scoring_large(s, cw_vec, cwcm_goal, big_m), cwcm);
        row.dwcm = polynomial_cell("dwcm_fast vs exhaustive", opts, rng, scoring(s, dw_vec, dwcm_goal, min_m),
                                   scoring_large(s, dw_vec, dwcm_goal, big_m), dwcm);
        report.rows.push_back(std::move(row));
    };

    const RuleSpec rd1 = default_params(ReductionFamily::RoundDownCase1);
    const RuleSpec rd2 = default_params(ReductionFamily::RoundDownCase2);
    const RuleSpec rd3 = default_params(ReductionFamily::RoundDownCase3);
    const RuleSpec avg = default_params(ReductionFamily::AverageScheme);

    scoring_row("X up", TruncationScheme::RoundUp, any, any, 2, std::nullopt);
    scoring_row("plurality down", TruncationScheme::RoundDown, plurality, plurality, 2, std::nullopt);
    scoring_row("veto down", TruncationScheme::RoundDown, veto, veto, 2, std::nullopt);
    scoring_row("X1 down", TruncationScheme::RoundDown, middle, middle, 3,
                hard_cell("rounddown1/2/3 families",
                          {ReductionFamily::RoundDownCase1, ReductionFamily::RoundDownCase2, ReductionFamily::RoundDownCase3},
                          {rd1, rd2, rd3}, opts));
    scoring_row("plurality avg", TruncationScheme::Average, plurality, plurality, 2, std::nullopt);
    scoring_row("X2 avg", TruncationScheme::Average, non_plurality, non_plurality, 3,
                hard_cell("average family", {ReductionFamily::AverageScheme}, {avg}, opts));

    {
        const auto elim = [](Goal (*goal)(Rng&, int), WinnerModel model, int m) {
            return [=](Rng& r) {
                ManipulationInstance inst = m > 0 ? large_instance(r, m, 400, 200) : sampling::random_instance(r, {});
                inst.rule = EliminationRule{ScoringVector::veto(inst.m)};
                inst.goal = goal(r, inst.m);
                inst.model = model;
                return inst;
            };
        };
        ClassifyRow row{"eliminate(veto)", {}, {}};
        row.cwcm = polynomial_cell("cwcm_eliminate_veto_unique vs exhaustive", opts, rng,
                                   elim(cwcm_goal, WinnerModel::Unique, 0), elim(cwcm_goal, WinnerModel::Unique, 6),
                                   [](const ManipulationInstance& i) { return cwcm_eliminate_veto_unique(i); });
        row.dwcm = polynomial_cell("dwcm_eliminate_veto vs exhaustive", opts, rng,
                                   elim(dwcm_goal, WinnerModel::NonUnique, 0), elim(dwcm_goal, WinnerModel::NonUnique, 6),
                                   [](const ManipulationInstance& i) { return dwcm_eliminate_veto(i); });
        report.rows.push_back(std::move(row));
    }

    report.rows.push_back({"eliminate(X3)", cited_cell("external construction"),
                           hard_cell("elimdwcm family", {ReductionFamily::EliminateDwcm},
                                     {default_params(ReductionFamily::EliminateDwcm)}, opts)});

    report.rows.push_back({"plurality with runoff", cited_cell("external construction"), runoff_dwcm_cell(opts, rng)});

    {
        const auto cope = [](Goal (*goal)(Rng&, int), int m) {
            return [=](Rng& r) {
                ManipulationInstance inst = m > 0 ? large_instance(r, m, 400, 200) : sampling::random_instance(r, {});
                const Rational alphas[] = {Rational(0), Rational(1, 3), Rational(1, 2), Rational(1, 4)};
                inst.rule = CopelandRule{alphas[sampling::uniform(r, 0, 3)]};
                inst.goal = goal(r, inst.m);
                return inst;
            };
        };
        ClassifyRow row{"Copeland", {}, {}};
        row.cwcm = hard_cell("copeland family, alpha 0 and 1/2", {ReductionFamily::Copeland3, ReductionFamily::Copeland3},
                             {CopelandRule{Rational(0)}, CopelandRule{Rational(1, 2)}}, opts);
        row.dwcm = polynomial_cell("dwcm_fast vs exhaustive", opts, rng, cope(dwcm_goal, 0), cope(dwcm_goal, big_m), dwcm);
        report.rows.push_back(std::move(row));
    }

    {
        const auto maximin = [](Goal (*goal)(Rng&, int), int m) {
            return [=](Rng& r) {
                ManipulationInstance inst = m > 0 ? large_instance(r, m, 400, 200) : sampling::random_instance(r, {});
                inst.rule = MaximinRule{};
                inst.goal = goal(r, inst.m);
                return inst;
            };
        };
        ClassifyRow row{"maximin", {}, {}};
        row.cwcm = polynomial_cell("cwcm_fast vs exhaustive", opts, rng, maximin(cwcm_goal, 0), maximin(cwcm_goal, big_m), cwcm);
        row.dwcm = polynomial_cell("dwcm_fast vs exhaustive", opts, rng, maximin(dwcm_goal, 0), maximin(dwcm_goal, big_m), dwcm);
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace truncvote

#endif // TRUNCVOTE_CLASSIFY_HPP
