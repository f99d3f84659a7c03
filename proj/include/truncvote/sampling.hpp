#ifndef TRUNCVOTE_SAMPLING_HPP
#define TRUNCVOTE_SAMPLING_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "core.hpp"
#include "manipulation.hpp"
#include "rules.hpp"
#include "uncertainty.hpp"

// Seeded random instances for property suites and the classification report.

namespace truncvote::sampling {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Uniform over canonical ballots.
inline TopOrder random_ballot(Rng& rng, int m) {
    const auto all = enumerate_ballots(m);
    return all[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(all.size()) - 1))];
}

/// A prefix of random length 1..m over a random order.
inline TopOrder random_prefix(Rng& rng, int m) {
    std::vector<CandidateId> order;
    for (int c = 0; c < m; ++c) order.push_back(CandidateId{c});
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(static_cast<std::size_t>(uniform(rng, 1, m)));
    return canonicalize_ballot(TopOrder(std::move(order), m));
}

struct InstanceShape {
    int min_m = 2;
    int max_m = 4;
    int max_fixed = 4;
    int max_manipulators = 3;
    int max_weight = 5;
};

/// Random fixed votes and manipulator weights; the caller sets goal and rule.
inline ManipulationInstance random_instance(Rng& rng, const InstanceShape& shape, int m = 0) {
    ManipulationInstance inst;
    inst.m = m > 0 ? m : uniform(rng, shape.min_m, shape.max_m);
    const int fixed = uniform(rng, 0, shape.max_fixed);
    for (int i = 0; i < fixed; ++i) inst.fixed.push_back({random_ballot(rng, inst.m), uniform(rng, 0, shape.max_weight)});
    const int manip = uniform(rng, 0, shape.max_manipulators);
    for (int i = 0; i < manip; ++i) inst.manipulator_weights.push_back(uniform(rng, 0, shape.max_weight));
    return inst;
}

inline PartialProfile random_partial(Rng& rng, int m, int max_votes, int max_weight) {
    PartialProfile out{m, {}, {}};
    const int n = uniform(rng, 0, max_votes);
    for (int i = 0; i < n; ++i) out.revealed.push_back({random_prefix(rng, m), uniform(rng, 0, max_weight)});
    return out;
}

inline ScoringVector random_vector(Rng& rng, int m, int max_entry = 4) {
    std::vector<Rational> a(static_cast<std::size_t>(m));
    for (auto& x : a) x = Rational(uniform(rng, 0, max_entry), uniform(rng, 1, 2));
    std::sort(a.begin(), a.end(), [](const Rational& x, const Rational& y) { return x > y; });
    return ScoringVector(std::move(a));
}

} // namespace truncvote::sampling

#endif // TRUNCVOTE_SAMPLING_HPP
